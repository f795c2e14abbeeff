"""One transformed-medium experiment: map, background, scheme, oracle and grid.

The grid lives in the physical plane. Material parameters at a node are those
of the scheme evaluated with the Jacobian at the node's preimage, and the
oracle is the plane-wave sum pulled back through the map.
"""

from dataclasses import dataclass

import numpy as np

from . import conformal, materials
from .errors import SingularParameter
from .fields import PlaneWaveSum, pullback_field
from .grid import Grid2
from .helmholtz import CoefficientField


@dataclass(frozen=True)
class Experiment:
    cmap: conformal.ConformalMap
    background: materials.BackgroundMedium
    scheme: materials.Scheme
    omega: float
    grid: Grid2
    oracle: PlaneWaveSum | None = None

    def preimages(self, grid=None):
        grid = self.grid if grid is None else grid
        return conformal.eval_inverse(self.cmap, grid.nodes())

    def samples(self, grid=None):
        """Per-node :class:`MaterialSample` list (row-major) and the speed array."""
        z = self.preimages(grid)
        jac = conformal.jacobian(self.cmap, z)
        out = []
        for f, speed in zip(jac.f.reshape(-1, 2, 2), jac.speed.ravel()):
            out.append(materials.sample_for(self.scheme, self.background, f, speed))
        return out, jac.speed

    def _scalar_scheme(self, grid):
        z = self.preimages(grid)
        speed = conformal.jacobian(self.cmap, z).speed
        if self.scheme.name == "corrected":
            sample = materials.corrected_parameters(self.background, speed, self.scheme.c)
        else:
            sample = materials.ren_parameters(self.background, speed)
        return sample, speed

    def parameter_table(self, grid=None):
        """Columns ``x, y, speed`` then ``rho`` or ``rho_xx, rho_xy, rho_yy``, then ``lambda``."""
        grid = self.grid if grid is None else grid
        X, Y = grid.coordinates()
        table = {"x": X, "y": Y}
        if self.scheme.name in ("corrected", "ren"):
            sample, speed = self._scalar_scheme(grid)
            table["speed"] = speed
            table["rho"] = np.broadcast_to(sample.rho, grid.shape)
            table["lambda"] = sample.lam
            return table
        samples, speed = self.samples(grid)
        rho = np.array([s.rho for s in samples]).reshape(grid.shape + (2, 2))
        table["speed"] = speed
        table["rho_xx"] = rho[..., 0, 0]
        table["rho_xy"] = rho[..., 0, 1]
        table["rho_yy"] = rho[..., 1, 1]
        table["lambda"] = np.array([s.lam for s in samples]).reshape(grid.shape)
        return table

    def coefficients(self, grid=None):
        """Scalar coefficient field for the pressure equation.

        Tensor schemes are accepted when the density is isotropic (always the
        case for conformal maps); pentamode additionally needs ``S`` to be a
        multiple of the identity so the stiffness is that of a fluid.
        """
        grid = self.grid if grid is None else grid
        if self.scheme.name in ("corrected", "ren"):
            sample, _ = self._scalar_scheme(grid)
            return CoefficientField(grid, np.broadcast_to(sample.rho, grid.shape), sample.lam)
        samples, _ = self.samples(grid)
        rho = np.array([s.scalar_rho() for s in samples]).reshape(grid.shape)
        lam = np.array([s.fluid_modulus() for s in samples]).reshape(grid.shape)
        return CoefficientField(grid, rho, lam)

    def oracle_field(self, grid=None):
        if self.oracle is None:
            raise ValueError("experiment has no oracle")
        return pullback_field(self.cmap, self.oracle, self.grid if grid is None else grid)

    def problem(self, grid):
        return self.coefficients(grid), self.oracle_field(grid), self.omega


def falsification_experiment(scheme="corrected", n=33, omega=2.0, angle=np.pi / 5):
    """Exp map over the box [1, 2] x [-0.5, 0.5] with a unit background and one plane wave.

    ``|zeta'|`` equals ``|x'|`` here, so the ren density ``1/|x'|`` varies
    across the box while the corrected density does not.
    """
    bg = materials.BackgroundMedium(1.0, 1.0)
    if isinstance(scheme, str):
        scheme = materials.Scheme(scheme)
    return Experiment(
        cmap=conformal.Exp(),
        background=bg,
        scheme=scheme,
        omega=omega,
        grid=Grid2.square((1.0, -0.5), (2.0, 0.5), n),
        oracle=PlaneWaveSum.single(omega, bg, angle=angle),
    )

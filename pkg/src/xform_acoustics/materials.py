"""Transformed material parameters for four schemes.

``corrected``   rho' = c rho0,            lambda' = c lambda0 |zeta'|^2
``ren``         rho' = rho0 / |zeta'|,    lambda' = lambda0 |zeta'|
``inertial``    lambda' = lambda0 det F,  rho' = rho0 det F (F F^T)^-1
``pentamode``   C_ijkl = lambda' S_ij S_kl,  rho = S rho' S  (rho', lambda' inertial)

The ``ren`` scheme keeps the impedance ``rho' lambda'`` fixed. It is kept here
so that it can be shown to be wrong: it satisfies the slowness ratio but its
density varies wherever ``|zeta'|`` does, which the pressure equation does not
tolerate.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GridMismatch,
    NotPositiveDefinite,
    NotSymmetric,
    SingularJacobian,
    SingularParameter,
    TensorDensity,
)
from .grid import Grid2

SCHEMES = ("corrected", "ren", "inertial", "pentamode")

# relative tolerance for symmetry of user supplied S (and isotropy checks)
SYM_TOL = 1e-12


@dataclass(frozen=True)
class BackgroundMedium:
    rho0: float = 1.0
    lambda0: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.rho0) and self.rho0 > 0):
            raise ValueError(f"rho0 must be positive, got {self.rho0}")
        if not (np.isfinite(self.lambda0) and self.lambda0 > 0):
            raise ValueError(f"lambda0 must be positive, got {self.lambda0}")

    @property
    def slowness2(self):
        """``rho0 / lambda0``, the squared inverse sound speed."""
        return self.rho0 / self.lambda0


def check_s_matrix(s):
    """Validate a 2x2 symmetric positive definite ``S`` and return it as an array."""
    s = np.array(s, dtype=float)
    if s.shape != (2, 2):
        raise ValueError(f"S must be 2x2, got shape {s.shape}")
    scale = max(np.abs(s).max(), np.finfo(float).tiny)
    if abs(s[0, 1] - s[1, 0]) > SYM_TOL * scale:
        raise NotSymmetric(f"S is not symmetric: {s.tolist()}")
    s = 0.5 * (s + s.T)
    if np.linalg.eigvalsh(s).min() <= 0:
        raise NotPositiveDefinite(f"S is not positive definite: {s.tolist()}")
    return s


@dataclass(frozen=True)
class Scheme:
    """Which parameter formula is in force, with its free data."""

    name: str = "corrected"
    c: float = 1.0
    s: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.name not in SCHEMES:
            raise ValueError(f"unknown scheme {self.name!r}; expected one of {SCHEMES}")
        if not (np.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be positive, got {self.c}")
        if self.name == "pentamode":
            object.__setattr__(self, "s", check_s_matrix(np.eye(2) if self.s is None else self.s))
        elif self.s is not None:
            raise ValueError("S is only meaningful for the pentamode scheme")


@dataclass(frozen=True)
class MaterialSample:
    """Material parameters at one point.

    ``rho`` is a float (or an array of floats for vectorised scalar schemes)
    or a 2x2 SPD tensor. ``stiffness`` has shape (2, 2, 2, 2) and is present
    only for pentamode samples.
    """

    scheme: Scheme
    rho: object
    lam: object
    stiffness: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.tensor:
            rho = np.asarray(self.rho)
            if abs(rho[0, 1] - rho[1, 0]) > SYM_TOL * np.abs(rho).max():
                raise NotSymmetric("density tensor is not symmetric")
            if np.linalg.eigvalsh(rho).min() <= 0:
                raise NotPositiveDefinite("density tensor is not positive definite")
        elif not np.all(np.asarray(self.rho) > 0):
            raise SingularParameter("density must be positive")
        if not np.all(np.asarray(self.lam) > 0):
            raise SingularParameter("bulk modulus must be positive")
        if (self.stiffness is not None) != (self.scheme.name == "pentamode"):
            raise ValueError("stiffness is present iff the scheme is pentamode")

    @property
    def tensor(self):
        return self.scheme.name in ("inertial", "pentamode")

    def scalar_rho(self, tol=SYM_TOL):
        """Density as a scalar, collapsing an isotropic tensor ``r I``."""
        if not self.tensor:
            return self.rho
        rho = np.asarray(self.rho)
        r = 0.5 * (rho[0, 0] + rho[1, 1])
        if np.abs(rho - r * np.eye(2)).max() > tol * abs(r):
            raise TensorDensity(f"density tensor is anisotropic: {rho.tolist()}")
        return float(r)

    def fluid_modulus(self, tol=SYM_TOL):
        """Bulk modulus of the equivalent isotropic fluid.

        For pentamode samples the stiffness must have the fluid form
        ``K delta_ij delta_kl``; ``K`` is returned.
        """
        if self.stiffness is None:
            return self.lam
        k = self.stiffness[0, 0, 0, 0]
        fluid = k * np.einsum("ij,kl->ijkl", np.eye(2), np.eye(2))
        if np.abs(self.stiffness - fluid).max() > tol * abs(k):
            raise TensorDensity("pentamode stiffness is not of isotropic fluid form")
        return float(k)


def _check_speed(speed):
    speed = np.asarray(speed, dtype=float)
    if np.any(~np.isfinite(speed)) or np.any(speed < 0):
        raise ValueError("speed must be finite and non-negative")
    if np.any(speed == 0):
        raise SingularParameter("|zeta'| = 0: the transformed parameters degenerate")
    return speed


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def corrected_parameters(bg, speed, c=1.0):
    """``rho' = c rho0`` (constant), ``lambda' = c lambda0 speed**2``."""
    speed = _check_speed(speed)
    rho = np.broadcast_to(c * bg.rho0, speed.shape).copy()
    lam = c * bg.lambda0 * speed**2
    return MaterialSample(Scheme("corrected", c=c), _scalar(rho), _scalar(lam))


def ren_parameters(bg, speed):
    """Impedance-matched split: ``rho' = rho0 / speed``, ``lambda' = lambda0 speed``."""
    speed = _check_speed(speed)
    return MaterialSample(Scheme("ren"), _scalar(bg.rho0 / speed), _scalar(bg.lambda0 * speed))


def _inertial(bg, f):
    f = np.asarray(f, dtype=float)
    if f.shape != (2, 2):
        raise ValueError(f"f must be 2x2, got shape {f.shape}")
    det = f[0, 0] * f[1, 1] - f[0, 1] * f[1, 0]
    if not det > 0:
        raise SingularJacobian(f"det F = {det} is not positive")
    g = f @ f.T
    # (F F^T)^-1 det F = adj(F F^T) / det F, since det(F F^T) = det(F)^2
    adj = np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])
    rho = bg.rho0 * adj / det
    rho = 0.5 * (rho + rho.T)
    return rho, bg.lambda0 * det


def inertial_parameters(bg, f):
    """Inertial fluid: scalar modulus ``lambda0 det F``, tensor density ``rho0 det F (F F^T)^-1``."""
    rho, lam = _inertial(bg, f)
    return MaterialSample(Scheme("inertial"), rho, float(lam))


def pentamode_parameters(bg, f, s):
    """Pentamode medium for a spatially constant ``S``.

    A constant ``S`` is trivially divergence free. ``lam`` on the result is
    the inertial modulus; the stiffness carries ``S``.
    """
    s = check_s_matrix(s)
    rho_in, lam = _inertial(bg, f)
    rho = s @ rho_in @ s
    rho = 0.5 * (rho + rho.T)
    stiffness = lam * np.einsum("ij,kl->ijkl", s, s)
    return MaterialSample(Scheme("pentamode", s=s), rho, float(lam), stiffness)


def sample_for(scheme, bg, f, speed):
    """Evaluate ``scheme`` given the local Jacobian ``f`` and ``speed = |zeta'|``."""
    if scheme.name == "corrected":
        return corrected_parameters(bg, speed, scheme.c)
    if scheme.name == "ren":
        return ren_parameters(bg, speed)
    if scheme.name == "inertial":
        return inertial_parameters(bg, f)
    return pentamode_parameters(bg, f, scheme.s)


def slowness_ratio_defect(sample, bg, speed):
    """Relative defect of ``lambda'/rho' = speed**2 lambda0/rho0``."""
    if sample.tensor:
        raise TensorDensity("slowness ratio needs a scalar density")
    target = speed**2 * bg.lambda0 / bg.rho0
    return _scalar(np.abs(np.asarray(sample.lam) / sample.rho - target) / target)


def impedance_product(sample):
    """``rho' * lambda'``; the ren scheme pins this to ``rho0 * lambda0``."""
    if sample.tensor:
        raise TensorDensity("impedance product needs a scalar density")
    return _scalar(np.asarray(sample.rho) * sample.lam)


def divergence_defect(s_field, grid: Grid2):
    """Largest central-difference divergence of a gridded ``S`` field.

    ``s_field`` has shape ``(nx, ny, 2, 2)``. At each interior node the row
    divergences ``d_i = dS_i1/dx + dS_i2/dy`` are formed and combined as
    ``|d_1| + |d_2|``; the maximum over interior nodes is returned.
    """
    s_field = np.asarray(s_field, dtype=float)
    if s_field.shape != grid.shape + (2, 2):
        raise GridMismatch(f"S field has shape {s_field.shape}, grid expects {grid.shape + (2, 2)}")
    hx, hy = grid.spacing
    dsx = (s_field[2:, 1:-1, :, 0] - s_field[:-2, 1:-1, :, 0]) / (2 * hx)
    dsy = (s_field[1:-1, 2:, :, 1] - s_field[1:-1, :-2, :, 1]) / (2 * hy)
    div = dsx + dsy
    return float(np.abs(div).sum(axis=-1).max())

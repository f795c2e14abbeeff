"""Plane-wave solutions of the homogeneous Helmholtz equation and their pullback.

A plane-wave sum ``p(x) = sum_m a_m exp(i k_m . x)`` with every
``|k_m| = omega sqrt(rho0/lambda0)`` solves ``lap p + omega^2 (rho0/lambda0) p = 0``
exactly. Evaluated at preimages ``zeta^-1(x')`` of physical-plane nodes it is the
exact transformed pressure ``p'(x') = p(zeta^-1(x'))``.
"""

from dataclasses import dataclass

import numpy as np

from .conformal import eval_inverse
from .grid import Grid2

DISPERSION_TOL = 1e-12


@dataclass(frozen=True)
class PlaneWaveSum:
    """Terms ``(amplitude, (kx, ky))`` all sharing the wavenumber ``k0``."""

    terms: tuple
    k0: float

    def __post_init__(self):
        terms = tuple((complex(a), np.array(k, dtype=float)) for a, k in self.terms)
        object.__setattr__(self, "terms", terms)
        for m, (_, k) in enumerate(terms):
            if k.shape != (2,):
                raise ValueError(f"term {m}: wavevector must have 2 components")
            if abs(np.hypot(*k) - self.k0) > DISPERSION_TOL * self.k0:
                raise ValueError(
                    f"term {m}: |k| = {np.hypot(*k)!r} but the medium requires {self.k0!r}"
                )

    @classmethod
    def for_medium(cls, terms, omega, bg):
        return cls(terms, omega * np.sqrt(bg.slowness2))

    @classmethod
    def single(cls, omega, bg, angle=0.0, amplitude=1.0):
        k0 = omega * np.sqrt(bg.slowness2)
        k = (k0 * np.cos(angle), k0 * np.sin(angle))
        return cls(((amplitude, k),), k0)


@dataclass(frozen=True)
class ComplexField:
    grid: Grid2
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", values)

    def __mul__(self, alpha):
        return ComplexField(self.grid, alpha * self.values)

    __rmul__ = __mul__


def eval_plane_wave_sum(pw, x):
    """Evaluate at ``x`` given as ``(x, y)`` or as complex ``x + iy`` (scalar or array)."""
    if np.iscomplexobj(x):
        px, py = np.real(x), np.imag(x)
    else:
        px, py = x[0], x[1]
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    total = np.zeros(np.broadcast(px, py).shape, dtype=complex)
    for a, k in pw.terms:
        total = total + a * np.exp(1j * (k[0] * px + k[1] * py))
    return complex(total) if total.ndim == 0 else total


def pullback_field(cmap, pw, grid):
    """``values[i, j] = p(zeta^-1(node_ij))``.

    Branch errors from the inverse carry the offending node index.
    """
    z = eval_inverse(cmap, grid.nodes())
    return ComplexField(grid, eval_plane_wave_sum(pw, z))


def direct_field(pw, grid):
    return ComplexField(grid, eval_plane_wave_sum(pw, grid.nodes()))


def analytic_residual_check(pw, omega, bg):
    """Max over terms of ``|omega^2 rho0/lambda0 - |k|^2|`` relative to ``omega^2 rho0/lambda0``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    target = omega**2 * bg.slowness2
    if not pw.terms:
        return 0.0
    return max(abs(target - float(k @ k)) / target for _, k in pw.terms)

"""Variable-density Helmholtz operator on a rectangular grid.

The operator is

    L p = rho div((1/rho) grad p) + omega^2 (rho/lambda) p

discretised in flux form on the 5-point stencil. The face coefficient
``(1/rho)_face`` is the arithmetic mean of the nodal ``1/rho`` on either side.
With constant ``rho`` this is the usual 5-point Laplacian plus a mass term.
Expanding the divergence shows ``L p = lap p + omega^2 (rho/lambda) p -
grad(log rho) . grad p``; the last term vanishes only for constant density,
which is what the residual checks expose.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    GridMismatch,
    NonConvergence,
    NonPositiveCoefficient,
    SingularSystem,
    ZeroField,
)
from .fields import ComplexField
from .grid import Grid2

# grids with at most this many nodes are solved by sparse LU
DIRECT_LIMIT = 300 * 300
MAX_ITER = 10_000
SOLVE_RTOL = 1e-10

# acceptance thresholds for convergence studies
ORDER_WINDOW = (1.7, 2.3)
PASS_ORDER = 1.5
PLATEAU_CHANGE = 0.25


@dataclass(frozen=True)
class CoefficientField:
    grid: Grid2
    rho: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        for name in ("rho", "lam"):
            arr = np.broadcast_to(np.asarray(getattr(self, name), dtype=float), self.grid.shape)
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
                bad = np.argwhere(~(arr > 0) | ~np.isfinite(arr))[0]
                raise NonPositiveCoefficient(f"{name} must be positive and finite (node {tuple(bad)})")
            object.__setattr__(self, name, np.array(arr))

    @classmethod
    def constant(cls, grid, rho=1.0, lam=1.0):
        return cls(grid, np.full(grid.shape, float(rho)), np.full(grid.shape, float(lam)))


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """Stencil data: ``wx[i, j]`` couples nodes ``(i, j)`` and ``(i+1, j)``,
    ``wy[i, j]`` couples ``(i, j)`` and ``(i, j+1)``; both already divided by
    ``h**2``. ``mass = omega^2 rho/lambda`` per node."""

    grid: Grid2
    omega: float
    rho: np.ndarray
    wx: np.ndarray
    wy: np.ndarray
    mass: np.ndarray

    def apply(self, values):
        p = np.asarray(values, dtype=complex)
        pc = p[1:-1, 1:-1]
        flux = (
            self.wx[1:, 1:-1] * (p[2:, 1:-1] - pc)
            + self.wx[:-1, 1:-1] * (p[:-2, 1:-1] - pc)
            + self.wy[1:-1, 1:] * (p[1:-1, 2:] - pc)
            + self.wy[1:-1, :-1] * (p[1:-1, :-2] - pc)
        )
        out = np.zeros_like(p)
        out[1:-1, 1:-1] = self.rho[1:-1, 1:-1] * flux + self.mass[1:-1, 1:-1] * pc
        return out

    def full_matrix(self):
        """``N x N`` CSR matrix over all nodes (row-major); boundary rows are zero."""
        nx, ny = self.grid.shape
        idx = np.arange(nx * ny).reshape(nx, ny)
        c = idx[1:-1, 1:-1].ravel()
        rc = self.rho[1:-1, 1:-1].ravel()
        neighbours = [
            (idx[2:, 1:-1], self.wx[1:, 1:-1]),
            (idx[:-2, 1:-1], self.wx[:-1, 1:-1]),
            (idx[1:-1, 2:], self.wy[1:-1, 1:]),
            (idx[1:-1, :-2], self.wy[1:-1, :-1]),
        ]
        rows, cols, vals = [], [], []
        diag = self.mass[1:-1, 1:-1].ravel().astype(float)
        total = np.zeros_like(diag)
        for nb, w in neighbours:
            w = w.ravel()
            rows.append(c)
            cols.append(nb.ravel())
            vals.append(rc * w)
            total += w
        rows.append(c)
        cols.append(c)
        vals.append(diag - rc * total)
        m = sp.coo_matrix(
            (np.concatenate(vals).astype(complex), (np.concatenate(rows), np.concatenate(cols))),
            shape=(nx * ny, nx * ny),
        )
        return m.tocsr()

    def interior_system(self):
        """Split into ``(A_ii, A_ib, interior_index, boundary_index)``."""
        mask = self.grid.interior_mask().ravel()
        inner = np.flatnonzero(mask)
        outer = np.flatnonzero(~mask)
        full = self.full_matrix()
        rows = full[inner]
        return rows[:, inner].tocsc(), rows[:, outer].tocsr(), inner, outer


def assemble(coeff, omega):
    if not omega > 0:
        raise ValueError("omega must be positive")
    hx, hy = coeff.grid.spacing
    inv = 1.0 / coeff.rho
    wx = 0.5 * (inv[1:, :] + inv[:-1, :]) / hx**2
    wy = 0.5 * (inv[:, 1:] + inv[:, :-1]) / hy**2
    mass = omega**2 * coeff.rho / coeff.lam
    return DiscreteOperator(coeff.grid, float(omega), coeff.rho, wx, wy, mass)


def apply(opr, fld):
    """Residual field on interior nodes; boundary nodes are 0."""
    if fld.grid != opr.grid:
        raise GridMismatch(f"field grid {fld.grid} does not match operator grid {opr.grid}")
    return ComplexField(opr.grid, opr.apply(fld.values))


@dataclass(frozen=True)
class ResidualReport:
    """Interior defect normalised by the field: ``l2`` is grid weighted, ``max`` is the sup norm."""

    l2: float
    max: float
    grid_spacing: float
    node_count: int

    def to_dict(self):
        return {"l2": self.l2, "max": self.max, "spacing": self.grid_spacing, "nodes": self.node_count}


def _relative_norms(defect, reference, grid):
    """Weighted L2 and max norms of ``defect`` (interior) over those of ``reference`` (all nodes)."""
    ref = np.asarray(reference)
    if not np.any(ref != 0):
        raise ZeroField("reference field is identically zero")
    w = grid.spacing[0] * grid.spacing[1]
    d = np.asarray(defect)[1:-1, 1:-1]
    l2 = np.sqrt(w * np.sum(np.abs(d) ** 2)) / np.sqrt(w * np.sum(np.abs(ref) ** 2))
    mx = np.abs(d).max() / np.abs(ref).max()
    return ResidualReport(float(l2), float(mx), grid.h, grid.size)


def residual_report(coeff, fld, omega):
    r = apply(assemble(coeff, omega), fld)
    return _relative_norms(r.values, fld.values, coeff.grid)


def error_report(solution, oracle):
    """Relative error of ``solution`` against ``oracle`` on interior nodes."""
    if solution.grid != oracle.grid:
        raise GridMismatch("solution and oracle grids differ")
    return _relative_norms(solution.values - oracle.values, oracle.values, oracle.grid)


def solve_dirichlet(coeff, omega, boundary, direct_limit=DIRECT_LIMIT):
    """Solve ``L p = 0`` in the interior with ``p = boundary`` on the boundary nodes.

    Only the boundary values of ``boundary`` are read. Sparse LU for grids up
    to ``direct_limit`` nodes, Jacobi-preconditioned BiCGSTAB above that.
    """
    if boundary.grid != coeff.grid:
        raise GridMismatch("boundary data grid does not match coefficient grid")
    opr = assemble(coeff, omega)
    a_ii, a_ib, inner, outer = opr.interior_system()
    flat = boundary.values.ravel()
    rhs = -(a_ib @ flat[outer])

    if coeff.grid.size <= direct_limit:
        try:
            u = spla.splu(a_ii).solve(rhs)
        except RuntimeError as exc:
            raise SingularSystem(f"sparse factorisation failed: {exc}") from exc
    else:
        d = a_ii.diagonal()
        if np.any(d == 0):
            raise SingularSystem("zero diagonal entry; Jacobi preconditioner undefined")
        precond = spla.LinearOperator(a_ii.shape, matvec=lambda x: x / d, dtype=complex)
        u, info = spla.bicgstab(a_ii, rhs, rtol=SOLVE_RTOL, atol=0.0, maxiter=MAX_ITER, M=precond)
        if info > 0:
            raise NonConvergence(f"BiCGSTAB did not converge in {MAX_ITER} iterations")
        if info < 0:
            raise SingularSystem("BiCGSTAB breakdown")

    scale = max(np.linalg.norm(rhs), np.finfo(float).tiny)
    resid = np.linalg.norm(a_ii @ u - rhs) / scale
    if not np.isfinite(resid) or resid > SOLVE_RTOL:
        raise SingularSystem(f"linear solve residual {resid:.3e} exceeds {SOLVE_RTOL:.0e}")

    out = flat.copy()
    out[inner] = u
    return ComplexField(coeff.grid, out.reshape(coeff.grid.shape))


@dataclass(frozen=True)
class ConvergenceReport:
    levels: list = field(default_factory=list)
    observed_order: float = float("nan")
    norm: str = "l2"

    @property
    def spacings(self):
        return [r.grid_spacing for r in self.levels]

    @property
    def values(self):
        return [getattr(r, self.norm) for r in self.levels]

    def to_dict(self):
        return {
            "norm": self.norm,
            "levels": [r.to_dict() for r in self.levels],
            "observed_order": self.observed_order,
        }


def observed_order(spacings, values):
    """Least-squares slope of ``log(values)`` against ``log(spacings)``."""
    return float(np.polyfit(np.log(spacings), np.log(values), 1)[0])


def plateau_change(report):
    """Relative change of the measured norm between the two finest levels."""
    v = report.values
    return abs(v[-1] - v[-2]) / v[-2]


def convergence_study(setup, levels=3, measure="residual"):
    """Refine ``setup.grid`` ``levels - 1`` times, halving the spacing each time.

    ``setup.problem(grid)`` must return ``(CoefficientField, oracle ComplexField,
    omega)``. ``measure="residual"`` records the residual of the oracle
    (order fitted on ``l2``); ``measure="solve"`` records the error of the
    Dirichlet solve against the oracle (order fitted on ``max``).
    """
    if levels < 3:
        raise ValueError("a convergence study needs at least 3 levels")
    if min(setup.grid.counts) < 9:
        raise ValueError("base grid needs at least 9 nodes per axis")
    if measure not in ("residual", "solve"):
        raise ValueError(f"unknown measure {measure!r}")
    grid = setup.grid
    reports = []
    for _ in range(levels):
        coeff, oracle, omega = setup.problem(grid)
        if measure == "residual":
            reports.append(residual_report(coeff, oracle, omega))
        else:
            sol = solve_dirichlet(coeff, omega, oracle)
            reports.append(error_report(sol, oracle))
        grid = grid.refined()
    norm = "l2" if measure == "residual" else "max"
    values = [getattr(r, norm) for r in reports]
    if min(values) <= 0:
        order = float("inf")
    else:
        order = observed_order([r.grid_spacing for r in reports], values)
    return ConvergenceReport(reports, order, norm)

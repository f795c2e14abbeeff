import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from xform_acoustics import helmholtz as hz
from xform_acoustics.errors import (
    GridMismatch, NonPositiveCoefficient, SingularSystem, ZeroField,
)
from xform_acoustics.experiment import Experiment, falsification_experiment
from xform_acoustics.fields import ComplexField, PlaneWaveSum, direct_field
from xform_acoustics.grid import Grid2
from xform_acoustics import conformal as cf
from xform_acoustics import materials as mt

G3 = Grid2((0, 0), (1, 1), (3, 3))


def unit_square(n):
    return Grid2.square((0, 0), (1, 1), n)


def random_coeff(grid, seed=0):
    rng = np.random.default_rng(seed)
    return hz.CoefficientField(grid, rng.uniform(0.2, 5, grid.shape), rng.uniform(0.2, 5, grid.shape))


class TestAssemble:
    def test_three_by_three_center_row(self):
        opr = hz.assemble(hz.CoefficientField.constant(G3), 1.0)
        row = opr.full_matrix().toarray()[4].reshape(3, 3)
        np.testing.assert_array_equal(row.real, [[0, 1, 0], [1, -3, 1], [0, 1, 0]])

    def test_boundary_rows_zero(self):
        m = hz.assemble(random_coeff(unit_square(5)), 1.3).full_matrix().toarray()
        mask = unit_square(5).interior_mask().ravel()
        assert np.all(m[~mask] == 0)

    def test_constant_coefficients_are_five_point(self):
        grid = Grid2((0, 0), (0.1, 0.2), (6, 5))
        opr = hz.assemble(hz.CoefficientField.constant(grid, 2.0, 8.0), 3.0)
        p = np.random.default_rng(1).normal(size=grid.shape)
        lap = ((p[2:, 1:-1] - 2 * p[1:-1, 1:-1] + p[:-2, 1:-1]) / 0.01
               + (p[1:-1, 2:] - 2 * p[1:-1, 1:-1] + p[1:-1, :-2]) / 0.04)
        np.testing.assert_allclose(opr.apply(p)[1:-1, 1:-1], lap + 9.0 * 0.25 * p[1:-1, 1:-1], rtol=1e-12)

    def test_matrix_matches_apply(self):
        grid = Grid2((0, 0), (0.3, 0.2), (7, 6))
        opr = hz.assemble(random_coeff(grid, 4), 2.2)
        p = np.random.default_rng(2).normal(size=grid.shape) + 1j
        np.testing.assert_allclose(opr.full_matrix() @ p.ravel(), opr.apply(p).ravel(), rtol=1e-12, atol=1e-12)

    def test_nonpositive_coefficients(self):
        with pytest.raises(NonPositiveCoefficient):
            hz.CoefficientField(G3, np.zeros((3, 3)), np.ones((3, 3)))
        with pytest.raises(NonPositiveCoefficient):
            hz.CoefficientField(G3, np.ones((3, 3)), -np.ones((3, 3)))

    def test_variable_density_flux_term(self):
        # rho = exp(x): rho div((1/rho) grad p) = p_xx - p_x for p = x^2 + y^2  ->  4 - 2x
        grid = Grid2.square((0, 0), (1, 1), 41)
        X, Y = grid.coordinates()
        coeff = hz.CoefficientField(grid, np.exp(X), np.full(grid.shape, 1e12))
        r = hz.assemble(coeff, 1e-6).apply(X**2 + Y**2)
        assert np.abs(r[1:-1, 1:-1] - (4 - 2 * X[1:-1, 1:-1])).max() < 2e-3


@settings(max_examples=50, deadline=None)
@given(
    rho=arrays(np.float64, (6, 5), elements=st.floats(1e-2, 1e2)),
    lam=arrays(np.float64, (6, 5), elements=st.floats(1e-2, 1e2)),
    omega=st.floats(1e-2, 10),
)
def test_constant_field_exact(rho, lam, omega):
    grid = Grid2((0, 0), (0.1, 0.3), (6, 5))
    opr = hz.assemble(hz.CoefficientField(grid, rho, lam), omega)
    out = opr.apply(np.ones(grid.shape))
    np.testing.assert_array_equal(out[1:-1, 1:-1], (omega**2 * rho / lam)[1:-1, 1:-1])
    assert np.all(out[0] == 0) and np.all(out[:, -1] == 0)


def test_scaled_operator_symmetric():
    grid = unit_square(9)
    coeff = random_coeff(grid, 8)
    a_ii, _, inner, _ = hz.assemble(coeff, 1.7).interior_system()
    scaled = (a_ii.T.multiply(1.0 / coeff.rho.ravel()[inner])).T.toarray()
    assert np.abs(scaled - scaled.T).max() <= 1e-12 * np.abs(scaled).max()


class TestApply:
    def test_discrete_eigenfunction(self):
        n = 17
        grid = unit_square(n)
        h = 1.0 / (n - 1)
        X, Y = grid.coordinates()
        p = np.sin(np.pi * X) * np.sin(np.pi * Y)
        lam_h = 8 / h**2 * math.sin(math.pi * h / 2) ** 2
        r = hz.apply(hz.assemble(hz.CoefficientField.constant(grid), math.sqrt(lam_h)), ComplexField(grid, p))
        assert np.abs(r.values).max() < 1e-11

    def test_zero_field(self):
        grid = unit_square(5)
        r = hz.apply(hz.assemble(random_coeff(grid), 2.0), ComplexField(grid, np.zeros(grid.shape)))
        assert np.all(r.values == 0)

    def test_constant_field(self):
        grid = unit_square(5)
        r = hz.apply(hz.assemble(hz.CoefficientField.constant(grid, 2.0, 0.5), 3.0),
                     ComplexField(grid, np.ones(grid.shape)))
        assert np.all(r.values[1:-1, 1:-1] == 36.0)
        assert np.all(r.values[0] == 0)

    def test_grid_mismatch(self):
        opr = hz.assemble(hz.CoefficientField.constant(unit_square(5)), 1.0)
        with pytest.raises(GridMismatch):
            hz.apply(opr, ComplexField(unit_square(6), np.ones((6, 6))))


class TestResidualReport:
    def test_zero_field(self):
        with pytest.raises(ZeroField):
            hz.residual_report(hz.CoefficientField.constant(G3), ComplexField(G3, np.zeros((3, 3))), 1.0)

    @settings(max_examples=30, deadline=None)
    @given(alpha=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
    def test_scale_invariant(self, alpha):
        exp = falsification_experiment("ren", n=9)
        coeff, p, omega = exp.problem(exp.grid)
        a, b = hz.residual_report(coeff, p, omega), hz.residual_report(coeff, alpha * p, omega)
        assert b.l2 == pytest.approx(a.l2, rel=1e-12)
        assert b.max == pytest.approx(a.max, rel=1e-12)

    def test_report_fields(self):
        exp = falsification_experiment("corrected", n=9)
        r = hz.residual_report(*exp.problem(exp.grid))
        assert r.node_count == 81 and r.grid_spacing == 1 / 8
        assert set(r.to_dict()) == {"l2", "max", "spacing", "nodes"}


class ConstantMedium:
    """Plane wave in a uniform medium, no map."""

    def __init__(self, n=9, omega=3.0):
        self.grid = unit_square(n)
        self.omega = omega
        self.pw = PlaneWaveSum.single(omega, mt.BackgroundMedium(), angle=0.4)

    def problem(self, grid):
        return hz.CoefficientField.constant(grid), direct_field(self.pw, grid), self.omega


class TestConvergence:
    def test_constant_medium_residual(self):
        r = hz.convergence_study(ConstantMedium(), 3)
        assert 1.7 <= r.observed_order <= 2.3

    def test_corrected_exp_residual(self):
        r = hz.convergence_study(falsification_experiment("corrected", n=17), 3)
        assert 1.7 <= r.observed_order <= 2.3
        assert all(a / b >= 3 for a, b in zip(r.values, r.values[1:]))

    def test_ren_exp_plateaus(self):
        r = hz.convergence_study(falsification_experiment("ren", n=17), 3)
        assert -0.3 <= r.observed_order <= 0.3
        assert hz.plateau_change(r) <= 0.1

    def test_ren_limit_matches_missing_term(self):
        # with rho = 1/|x| the continuum defect is rho grad(1/rho) . grad p' = (x . grad p') / |x|^2
        exp = falsification_experiment("ren", n=129)
        coeff, p, omega = exp.problem(exp.grid)
        r = hz.apply(hz.assemble(coeff, omega), p).values
        X, Y = exp.grid.coordinates()
        kx, ky = exp.oracle.terms[0][1]
        dz = 1 / (X + 1j * Y)  # d log(w)/dw = a + ib
        a, b = dz.real, dz.imag
        p_x, p_y = 1j * kx * p.values, 1j * ky * p.values
        pp_x = a * p_x + b * p_y
        pp_y = -b * p_x + a * p_y
        expected = (X * pp_x + Y * pp_y) / (X**2 + Y**2)
        err = np.abs(r - expected)[1:-1, 1:-1].max()
        assert err < 1e-3 * np.abs(expected).max()

    def test_needs_levels(self):
        with pytest.raises(ValueError):
            hz.convergence_study(ConstantMedium(), 2)
        with pytest.raises(ValueError):
            hz.convergence_study(ConstantMedium(n=5), 3)

    def test_observed_order(self):
        assert hz.observed_order([0.1, 0.05, 0.025], [1e-2, 2.5e-3, 6.25e-4]) == pytest.approx(2.0)


class TestSolve:
    def test_single_unknown(self):
        vals = np.zeros((3, 3), complex)
        vals[0, 1], vals[2, 1], vals[1, 0], vals[1, 2] = 1, 2j, 3, -1
        vals[0, 0] = 100  # corners do not couple
        sol = hz.solve_dirichlet(hz.CoefficientField.constant(G3), 1.0, ComplexField(G3, vals))
        # -3 p + (1 + 2i + 3 - 1) = 0
        assert sol.values[1, 1] == pytest.approx((3 + 2j) / 3, rel=1e-15)
        np.testing.assert_array_equal(sol.values[0], vals[0])

    def test_resonance_detected(self):
        # diagonal -4 + omega^2 vanishes at omega = 2
        with pytest.raises(SingularSystem):
            hz.solve_dirichlet(hz.CoefficientField.constant(G3), 2.0, ComplexField(G3, np.ones((3, 3))))

    def test_constant_medium_converges(self):
        r = hz.convergence_study(ConstantMedium(n=9), 3, measure="solve")
        assert 1.7 <= r.observed_order <= 2.3

    def test_corrected_exp_converges(self):
        r = hz.convergence_study(falsification_experiment("corrected", n=17), 3, measure="solve")
        assert 1.7 <= r.observed_order <= 2.3

    def test_iterative_path_agrees_with_direct(self):
        exp = falsification_experiment("corrected", n=33)
        coeff, p, omega = exp.problem(exp.grid)
        direct = hz.solve_dirichlet(coeff, omega, p)
        iterative = hz.solve_dirichlet(coeff, omega, p, direct_limit=0)
        assert np.abs(direct.values - iterative.values).max() < 1e-8

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            hz.solve_dirichlet(hz.CoefficientField.constant(G3), 1.0, ComplexField(unit_square(4), np.ones((4, 4))))


class TestExperimentCoefficients:
    def test_tensor_schemes_collapse_for_conformal_maps(self):
        base = falsification_experiment("corrected", n=9)
        ref = base.coefficients()
        for scheme in (mt.Scheme("inertial"), mt.Scheme("pentamode")):
            exp = Experiment(base.cmap, base.background, scheme, base.omega, base.grid, base.oracle)
            c = exp.coefficients()
            np.testing.assert_allclose(c.rho, ref.rho, rtol=1e-12)
            np.testing.assert_allclose(c.lam, ref.lam, rtol=1e-12)

    def test_ren_density_varies(self):
        c = falsification_experiment("ren", n=9).coefficients()
        X, Y = falsification_experiment("ren", n=9).grid.coordinates()
        np.testing.assert_allclose(c.rho, 1 / np.hypot(X, Y), rtol=1e-14)

    def test_zero_speed_node_raises(self):
        from xform_acoustics.errors import SingularParameter
        exp = Experiment(cf.Power(2), mt.BackgroundMedium(), mt.Scheme("corrected"), 1.0,
                         Grid2((-1, -1), (1, 1), (3, 3)), None)
        with pytest.raises(SingularParameter):
            exp.coefficients()

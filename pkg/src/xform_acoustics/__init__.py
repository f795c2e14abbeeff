"""Acoustic material parameters under conformal transformations, with a
variable-density Helmholtz residual check that tells correct parameter
choices from incorrect ones."""

from .conformal import (
    Affine, Composition, ConformalMap, Exp, Identity, Jacobian2, Log, Mobius, Power,
    compose, conformality_residual, eval_derivative, eval_inverse, eval_map, jacobian,
)
from .experiment import Experiment, falsification_experiment
from .fields import ComplexField, PlaneWaveSum, eval_plane_wave_sum, pullback_field
from .grid import Grid2
from .helmholtz import (
    CoefficientField, assemble, apply, convergence_study, residual_report, solve_dirichlet,
)
from .materials import (
    BackgroundMedium, MaterialSample, Scheme, corrected_parameters, inertial_parameters,
    pentamode_parameters, ren_parameters,
)

__version__ = "0.1.0"

import zlib

import numpy as np
import pytest

from xform_acoustics import conformal as cf


def _box(rng, n, re=(-2.0, 2.0), im=(-2.0, 2.0)):
    return rng.uniform(*re, n) + 1j * rng.uniform(*im, n)


def _right(rng, n):
    r = rng.uniform(0.2, 3.0, n)
    t = rng.uniform(-1.4, 1.4, n)
    return r * np.exp(1j * t)


def _annulus(rng, n):
    r = rng.uniform(0.2, 4.0, n)
    t = rng.uniform(-3.0, 3.0, n)
    return r * np.exp(1j * t)


def _away_from_pole(rng, n):
    z = _box(rng, 4 * n)
    return z[np.abs(0.5 * z + 1) > 0.5][:n]


# name -> (map, sampler of in-domain points whose round trip stays on the principal branch)
MAP_CASES = {
    "identity": (cf.Identity(), _box),
    "affine": (cf.Affine(2 - 1j, 1 + 1j), _box),
    "exp": (cf.Exp(), lambda rng, n: _box(rng, n, im=(-3.0, 3.0))),
    "log": (cf.Log(), _annulus),
    "mobius": (cf.Mobius(1, 2j, 0.5, 1), _away_from_pole),
    "power2": (cf.Power(2), _right),
    "power_half": (cf.Power(0.5), _annulus),
    "power_neg": (cf.Power(-1), _annulus),
    "power_1.5": (cf.Power(1.5), _right),
    "compose_affine_exp": (cf.compose(cf.Affine(0.5, 1), cf.Exp()), lambda rng, n: _box(rng, n, im=(-3.0, 3.0))),
    "compose_exp_sqrt": (cf.compose(cf.Exp(), cf.Power(0.5)), lambda rng, n: _box(rng, n, im=(-3.0, 3.0))),
    "compose_log_mobius": (cf.compose(cf.Mobius(1, 0, 0, 1), cf.Log(), cf.Affine(1j, 0)), _annulus),
}


@pytest.fixture(params=sorted(MAP_CASES))
def map_case(request):
    cmap, sampler = MAP_CASES[request.param]
    rng = np.random.default_rng(zlib.crc32(request.param.encode()))
    return request.param, cmap, sampler(rng, 100)


# acceptance lines collected across the run and echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

"""JSON experiment configuration.

Schema (keys not listed are rejected)::

    {
      "mode": "export-params" | "residual" | "solve" | "converge",
      "map": {"type": "exp"},                       # conformal map grammar
      "background": {"rho0": 1.0, "lambda0": 1.0},  # default: unit medium
      "scheme": "corrected" | {"name": "corrected", "c": 1.0}
              | {"name": "pentamode", "S": [[1, 0], [0, 1]]},  # default corrected, c = 1
      "omega": 2.0,                                 # required except for export-params
      "grid": {"origin": [1, -0.5], "spacing": [h, h] | h, "counts": [n, n] | n},
      "oracle": {"terms": [{"amplitude": [re, im] | re, "k": [kx, ky]}
                          | {"amplitude": ..., "angle": theta}]},
      "levels": 3,                                  # converge only, default 3
      "measure": "residual" | "solve",              # converge only, default residual
      "output": "results/run1"                      # optional; --out overrides
    }

Every wavevector must satisfy ``|k| = omega sqrt(rho0/lambda0)``; ``angle``
terms get that magnitude automatically.
"""

import json
from dataclasses import dataclass
from numbers import Number

import numpy as np

from . import conformal, materials
from .errors import ParseError, ValidationError
from .experiment import Experiment
from .fields import DISPERSION_TOL, PlaneWaveSum
from .grid import Grid2

MODES = ("export-params", "residual", "solve", "converge")
TOP_KEYS = {"mode", "map", "background", "scheme", "omega", "grid", "oracle",
            "levels", "measure", "output"}


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    experiment: Experiment
    levels: int = 3
    measure: str = "residual"
    output: str | None = None

    def echo(self):
        """Normalised config with defaults filled in."""
        exp = self.experiment
        scheme = {"name": exp.scheme.name}
        if exp.scheme.name == "corrected":
            scheme["c"] = exp.scheme.c
        if exp.scheme.name == "pentamode":
            scheme["S"] = exp.scheme.s.tolist()
        out = {
            "mode": self.mode,
            "map": conformal.map_to_spec(exp.cmap),
            "background": {"rho0": exp.background.rho0, "lambda0": exp.background.lambda0},
            "scheme": scheme,
            "grid": {
                "origin": list(exp.grid.origin),
                "spacing": list(exp.grid.spacing),
                "counts": list(exp.grid.counts),
            },
        }
        if exp.omega is not None:
            out["omega"] = exp.omega
        if exp.oracle is not None:
            out["oracle"] = {"terms": [
                {"amplitude": [a.real, a.imag], "k": k.tolist()} for a, k in exp.oracle.terms
            ]}
        if self.mode == "converge":
            out["levels"] = self.levels
            out["measure"] = self.measure
        return out


def _number(value, key, positive=False):
    if not isinstance(value, Number) or isinstance(value, bool) or not np.isfinite(value):
        raise ValidationError(key, "expected a finite number")
    if positive and not value > 0:
        raise ValidationError(key, f"must be > 0, got {value}")
    return float(value)


def _pair(value, key, positive=False, integer=False):
    if isinstance(value, Number) and not isinstance(value, bool):
        value = [value, value]
    if not isinstance(value, list) or len(value) != 2:
        raise ValidationError(key, "expected a number or a 2-element list")
    out = []
    for i, v in enumerate(value):
        if integer:
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValidationError(f"{key}[{i}]", "expected an integer")
            out.append(v)
        else:
            out.append(_number(v, f"{key}[{i}]", positive))
    return out


def _object(value, key, allowed):
    if not isinstance(value, dict):
        raise ValidationError(key, "expected an object")
    extra = sorted(set(value) - set(allowed))
    if extra:
        raise ValidationError(f"{key}.{extra[0]}", "unknown key")
    return value


def _background(raw):
    if raw is None:
        return materials.BackgroundMedium()
    _object(raw, "background", {"rho0", "lambda0"})
    return materials.BackgroundMedium(
        _number(raw.get("rho0", 1.0), "background.rho0", positive=True),
        _number(raw.get("lambda0", 1.0), "background.lambda0", positive=True),
    )


def _scheme(raw):
    if raw is None:
        raw = "corrected"
    if isinstance(raw, str):
        raw = {"name": raw}
    _object(raw, "scheme", {"name", "c", "S"})
    name = raw.get("name")
    if name not in materials.SCHEMES:
        raise ValidationError("scheme.name", f"expected one of {list(materials.SCHEMES)}, got {name!r}")
    if "c" in raw and name != "corrected":
        raise ValidationError("scheme.c", "only the corrected scheme takes c")
    if "S" in raw and name != "pentamode":
        raise ValidationError("scheme.S", "only the pentamode scheme takes S")
    c = _number(raw.get("c", 1.0), "scheme.c", positive=True)
    s = None
    if name == "pentamode":
        s = raw.get("S", [[1.0, 0.0], [0.0, 1.0]])
        if (not isinstance(s, list) or len(s) != 2
                or not all(isinstance(r, list) and len(r) == 2 for r in s)):
            raise ValidationError("scheme.S", "expected a 2x2 nested list")
        s = [[_number(v, f"scheme.S[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(s)]
        try:
            s = materials.check_s_matrix(s)
        except ValueError as exc:
            raise ValidationError("scheme.S", str(exc)) from None
    return materials.Scheme(name, c=c, s=s)


def _grid(raw):
    if raw is None:
        raise ValidationError("grid", "required")
    _object(raw, "grid", {"origin", "spacing", "counts"})
    for k in ("origin", "spacing", "counts"):
        if k not in raw:
            raise ValidationError(f"grid.{k}", "required")
    origin = _pair(raw["origin"], "grid.origin")
    spacing = _pair(raw["spacing"], "grid.spacing", positive=True)
    counts = _pair(raw["counts"], "grid.counts", integer=True)
    if min(counts) < 3:
        raise ValidationError("grid.counts", "need at least 3 nodes per axis")
    return Grid2(tuple(origin), tuple(spacing), tuple(counts))


def _oracle(raw, omega, bg):
    _object(raw, "oracle", {"terms"})
    terms_raw = raw.get("terms")
    if not isinstance(terms_raw, list) or not terms_raw:
        raise ValidationError("oracle.terms", "expected a non-empty list")
    k0 = omega * np.sqrt(bg.slowness2)
    terms = []
    for m, t in enumerate(terms_raw):
        key = f"oracle.terms[{m}]"
        _object(t, key, {"amplitude", "k", "angle"})
        amp = t.get("amplitude", 1.0)
        if isinstance(amp, list):
            re, im = _pair(amp, f"{key}.amplitude")
            amp = complex(re, im)
        else:
            amp = _number(amp, f"{key}.amplitude")
        if ("k" in t) == ("angle" in t):
            raise ValidationError(key, "give exactly one of 'k' or 'angle'")
        if "angle" in t:
            theta = _number(t["angle"], f"{key}.angle")
            k = [k0 * np.cos(theta), k0 * np.sin(theta)]
        else:
            k = _pair(t["k"], f"{key}.k")
            mag = float(np.hypot(*k))
            if abs(mag - k0) > DISPERSION_TOL * k0:
                raise ValidationError(
                    f"{key}.k",
                    f"|k| = {mag!r} violates the dispersion relation "
                    f"|k| = omega*sqrt(rho0/lambda0) = {k0!r} (relative mismatch {abs(mag - k0) / k0:.3g})",
                )
        terms.append((amp, k))
    return PlaneWaveSum(tuple(terms), k0)


def parse_config(text):
    """Parse and validate a JSON config; raises ParseError or ValidationError."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"config is not valid UTF-8: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ValidationError("<root>", "config must be a JSON object")
    extra = sorted(set(raw) - TOP_KEYS)
    if extra:
        raise ValidationError(extra[0], "unknown key")

    mode = raw.get("mode")
    if mode not in MODES:
        raise ValidationError("mode", f"expected one of {list(MODES)}, got {mode!r}")
    if "map" not in raw:
        raise ValidationError("map", "required")
    cmap = conformal.map_from_spec(raw["map"], "map")
    bg = _background(raw.get("background"))
    scheme = _scheme(raw.get("scheme"))
    grid = _grid(raw.get("grid"))

    pde = mode != "export-params"
    omega = None
    if "omega" in raw or pde:
        if "omega" not in raw:
            raise ValidationError("omega", f"required for mode {mode!r}")
        omega = _number(raw["omega"], "omega", positive=True)
    oracle = None
    if "oracle" in raw or pde:
        if "oracle" not in raw:
            raise ValidationError("oracle", f"required for mode {mode!r}")
        if omega is None:
            raise ValidationError("omega", "required when an oracle is given")
        oracle = _oracle(raw["oracle"], omega, bg)

    levels, measure = 3, "residual"
    if mode == "converge":
        levels = raw.get("levels", 3)
        if not isinstance(levels, int) or isinstance(levels, bool) or levels < 3:
            raise ValidationError("levels", "must be an integer >= 3")
        measure = raw.get("measure", "residual")
        if measure not in ("residual", "solve"):
            raise ValidationError("measure", "expected 'residual' or 'solve'")
        if min(grid.counts) < 9:
            raise ValidationError("grid.counts", "converge mode needs at least 9 nodes per axis")
    else:
        for k in ("levels", "measure"):
            if k in raw:
                raise ValidationError(k, "only valid in converge mode")

    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        raise ValidationError("output", "expected a string path prefix")

    exp = Experiment(cmap=cmap, background=bg, scheme=scheme, omega=omega, grid=grid, oracle=oracle)
    return ExperimentConfig(mode=mode, experiment=exp, levels=levels, measure=measure, output=output)

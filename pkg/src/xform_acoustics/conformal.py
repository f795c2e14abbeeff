"""Analytic maps of the complex plane and their Jacobians.

A map takes a point ``z = x1 + i x2`` of the original (virtual) plane to a
point ``zeta(z)`` of the physical plane. Every map knows its closed-form
value, derivative and principal-branch inverse; all of them accept numpy
arrays and work elementwise.

Branch convention: ``Log`` and non-integer ``Power`` use the principal branch
with the cut on the closed non-positive real axis.
"""

from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import BranchError, DomainError, NotInvertible, ValidationError

# step for the finite-difference derivative check, scaled by max(1, |z|)
FD_STEP = 1e-5


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite point", _first(~np.isfinite(arr)))
    return arr


def _first(mask):
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None
    return tuple(int(i) for i in np.argwhere(mask)[0])


def _check(bad, cls, message):
    bad = np.asarray(bad)
    if np.any(bad):
        raise cls(message, _first(bad))


def _on_cut(z):
    return (z.imag == 0) & (z.real <= 0)


def _unwrap(arr, like):
    """Return a Python complex when the caller passed a scalar."""
    if np.ndim(like) == 0:
        return complex(arr)
    return arr


class ConformalMap:
    """Base class. Subclasses implement ``_value``, ``_derivative``, ``_inverse``
    on complex arrays and ``_check_domain`` raising :class:`DomainError`."""

    def _check_domain(self, z):
        pass

    def __call__(self, z):
        return eval_map(self, z)

    def then(self, outer):
        """Return ``outer o self``."""
        return Composition(outer, self)


@dataclass(frozen=True)
class Identity(ConformalMap):
    def _value(self, z):
        return z.copy()

    def _derivative(self, z):
        return np.ones_like(z)

    def _inverse(self, w):
        return w.copy()


@dataclass(frozen=True)
class Affine(ConformalMap):
    """``a z + b`` with ``a != 0``."""

    a: complex
    b: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.a == 0:
            raise ValueError("Affine requires a != 0")

    def _value(self, z):
        return self.a * z + self.b

    def _derivative(self, z):
        return np.full_like(z, self.a)

    def _inverse(self, w):
        return (w - self.b) / self.a


@dataclass(frozen=True)
class Exp(ConformalMap):
    def _value(self, z):
        return np.exp(z)

    def _derivative(self, z):
        return np.exp(z)

    def _inverse(self, w):
        _check(w == 0, BranchError, "0 is not in the range of exp")
        return np.log(w)


@dataclass(frozen=True)
class Log(ConformalMap):
    """Principal logarithm; range is the open strip ``|Im w| < pi``."""

    def _check_domain(self, z):
        _check(_on_cut(z), DomainError, "log is undefined on the non-positive real axis")

    def _value(self, z):
        return np.log(z)

    def _derivative(self, z):
        return 1.0 / z

    def _inverse(self, w):
        _check(np.abs(w.imag) >= np.pi, BranchError, "|Im w| >= pi is outside the principal log range")
        return np.exp(w)


@dataclass(frozen=True)
class Mobius(ConformalMap):
    """``(a z + b) / (c z + d)`` with ``ad - bc != 0``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("Mobius requires ad - bc != 0")

    def _check_domain(self, z):
        _check(self.c * z + self.d == 0, DomainError, "pole of the Mobius map")

    def _value(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def _derivative(self, z):
        return (self.a * self.d - self.b * self.c) / (self.c * z + self.d) ** 2

    def _inverse(self, w):
        den = self.a - self.c * w
        _check(den == 0, BranchError, "a/c is not attained by the Mobius map")
        return (self.d * w - self.b) / den


@dataclass(frozen=True)
class Power(ConformalMap):
    """``z**alpha``.

    Positive integer exponents are entire, negative integers exclude 0, and
    anything else uses the principal branch.
    """

    alpha: float

    def __post_init__(self):
        alpha = float(self.alpha)
        if alpha == 0 or not np.isfinite(alpha):
            raise ValueError("Power requires a finite alpha != 0")
        object.__setattr__(self, "alpha", alpha)

    @property
    def integer(self):
        return self.alpha == round(self.alpha)

    def _check_domain(self, z):
        if self.integer:
            if self.alpha < 0:
                _check(z == 0, DomainError, "negative integer power is undefined at 0")
        else:
            _check(_on_cut(z), DomainError, "non-integer power is undefined on the non-positive real axis")

    def _pow(self, z, p):
        if p == round(p):
            return z ** int(p)
        return np.exp(p * np.log(z))

    def _value(self, z):
        return self._pow(z, self.alpha)

    def _derivative(self, z):
        if self.alpha == 1:
            return np.ones_like(z)
        return self.alpha * self._pow(z, self.alpha - 1)

    def _inverse(self, w):
        zero = w == 0
        if not (self.integer and self.alpha > 0):
            _check(zero, BranchError, "0 is not in the range of this power")
        if not self.integer and abs(self.alpha) < 1:
            theta = np.angle(w)
            _check(~zero & (np.abs(theta) >= abs(self.alpha) * np.pi), BranchError,
                   "point outside the principal power sector")
        safe = np.where(zero, 1.0, w)
        z = np.exp(np.log(safe) / self.alpha)
        return np.where(zero, 0j, z)


@dataclass(frozen=True)
class Composition(ConformalMap):
    """``outer(inner(z))``: ``inner`` is applied first."""

    outer: ConformalMap
    inner: ConformalMap

    def _check_domain(self, z):
        self.inner._check_domain(z)
        self.outer._check_domain(self.inner._value(z))

    def _value(self, z):
        return self.outer._value(self.inner._value(z))

    def _derivative(self, z):
        u = self.inner._value(z)
        return self.outer._derivative(u) * self.inner._derivative(z)

    def _inverse(self, w):
        u = self.outer._inverse(w)
        try:
            return self.inner._inverse(u)
        except DomainError as exc:
            raise NotInvertible("intermediate point is outside the inner stage's range", exc.index) from exc


def compose(*stages):
    """Chain maps so that ``stages[0]`` is applied first."""
    if not stages:
        return Identity()
    result = stages[0]
    for stage in stages[1:]:
        result = Composition(stage, result)
    return result


@dataclass(frozen=True)
class Jacobian2:
    """Jacobian ``F[i', i] = d x^{i'} / d x^i`` of a conformal map.

    For array input ``f`` has shape ``z.shape + (2, 2)``.
    """

    f: np.ndarray
    det: np.ndarray
    speed: np.ndarray


def eval_map(cmap, z):
    z_arr = _as_complex(z)
    cmap._check_domain(z_arr)
    return _unwrap(cmap._value(z_arr), z)


def eval_derivative(cmap, z):
    z_arr = _as_complex(z)
    cmap._check_domain(z_arr)
    return _unwrap(cmap._derivative(z_arr), z)


def eval_inverse(cmap, w):
    w_arr = _as_complex(w)
    return _unwrap(cmap._inverse(w_arr), w)


def jacobian(cmap, z):
    """Build the Cauchy-Riemann Jacobian ``[[u, -v], [v, u]]`` from ``zeta' = u + iv``."""
    dz = np.asarray(eval_derivative(cmap, z), dtype=complex)
    u, v = dz.real, dz.imag
    f = np.empty(dz.shape + (2, 2))
    f[..., 0, 0] = u
    f[..., 0, 1] = -v
    f[..., 1, 0] = v
    f[..., 1, 1] = u
    det = u * u + v * v
    return Jacobian2(f=f, det=det, speed=np.sqrt(det))


def finite_difference_derivative(cmap, z, step=None):
    """Central difference along the real axis with step ``1e-5 * max(1, |z|)``."""
    z = complex(z)
    h = FD_STEP * max(1.0, abs(z)) if step is None else step
    return (eval_map(cmap, z + h) - eval_map(cmap, z - h)) / (2 * h)


def conformality_residual(cmap, z, h):
    """Max-norm Cauchy-Riemann defect of central differences of ``zeta`` at ``z``.

    With ``zeta = u + iv`` returns ``max(|u_x - v_y|, |u_y + v_x|)``, which is
    ``O(h**2)`` for an analytic map.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    z = complex(z)
    pts = np.array([z + h, z - h, z + 1j * h, z - 1j * h])
    vals = np.asarray(eval_map(cmap, pts))
    dx = (vals[0] - vals[1]) / (2 * h)
    dy = (vals[2] - vals[3]) / (2 * h)
    return float(max(abs(dx.real - dy.imag), abs(dy.real + dx.imag)))


# -- config grammar -----------------------------------------------------------

def _complex_from(value, key):
    if isinstance(value, Number) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, Number) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ValidationError(key, "expected a number or a [re, im] pair")


def map_from_spec(spec, key="map"):
    """Build a map from its JSON form, e.g. ``{"type": "affine", "a": [2, 0]}``.

    ``compose`` takes a ``stages`` list applied first to last.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValidationError(key, "expected an object with a 'type' key")
    kind = spec["type"]
    allowed = {
        "identity": (), "exp": (), "log": (),
        "affine": ("a", "b"), "mobius": ("a", "b", "c", "d"),
        "power": ("alpha",), "compose": ("stages",),
    }
    if kind not in allowed:
        raise ValidationError(f"{key}.type", f"unknown map type {kind!r}; expected one of {sorted(allowed)}")
    extra = set(spec) - {"type"} - set(allowed[kind])
    if extra:
        raise ValidationError(f"{key}.{sorted(extra)[0]}", f"unexpected key for map type {kind!r}")
    if kind == "identity":
        return Identity()
    if kind == "exp":
        return Exp()
    if kind == "log":
        return Log()
    if kind == "affine":
        if "a" not in spec:
            raise ValidationError(f"{key}.a", "required")
        a = _complex_from(spec["a"], f"{key}.a")
        b = _complex_from(spec.get("b", 0), f"{key}.b")
        if a == 0:
            raise ValidationError(f"{key}.a", "must be nonzero")
        return Affine(a, b)
    if kind == "mobius":
        coef = {}
        for name in "abcd":
            if name not in spec:
                raise ValidationError(f"{key}.{name}", "required")
            coef[name] = _complex_from(spec[name], f"{key}.{name}")
        if coef["a"] * coef["d"] - coef["b"] * coef["c"] == 0:
            raise ValidationError(f"{key}", "Mobius map requires ad - bc != 0")
        return Mobius(**coef)
    if kind == "power":
        alpha = spec.get("alpha")
        if not isinstance(alpha, Number) or isinstance(alpha, bool) or alpha == 0 or not np.isfinite(alpha):
            raise ValidationError(f"{key}.alpha", "must be a finite nonzero number")
        return Power(alpha)
    stages = spec.get("stages")
    if not isinstance(stages, list) or not stages:
        raise ValidationError(f"{key}.stages", "must be a non-empty list")
    return compose(*(map_from_spec(s, f"{key}.stages[{i}]") for i, s in enumerate(stages)))


def _pair(c):
    return [c.real, c.imag]


def map_to_spec(cmap):
    """Inverse of :func:`map_from_spec` (compositions are flattened)."""
    if isinstance(cmap, Identity):
        return {"type": "identity"}
    if isinstance(cmap, Exp):
        return {"type": "exp"}
    if isinstance(cmap, Log):
        return {"type": "log"}
    if isinstance(cmap, Affine):
        return {"type": "affine", "a": _pair(cmap.a), "b": _pair(cmap.b)}
    if isinstance(cmap, Mobius):
        return {"type": "mobius", **{n: _pair(getattr(cmap, n)) for n in "abcd"}}
    if isinstance(cmap, Power):
        return {"type": "power", "alpha": cmap.alpha}
    if isinstance(cmap, Composition):
        stages = []
        for part in (cmap.inner, cmap.outer):
            spec = map_to_spec(part)
            stages.extend(spec["stages"] if spec["type"] == "compose" else [spec])
        return {"type": "compose", "stages": stages}
    raise TypeError(f"unknown map {cmap!r}")

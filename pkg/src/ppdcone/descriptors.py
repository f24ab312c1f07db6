"""JSON descriptors for catalogue functions and combinators.

A descriptor is an object with a ``"kind"`` and kind-specific fields, for
example ``{"kind": "m_alpha_sq", "alpha": 1, "dim": 3}`` or
``{"kind": "scale", "inner": {"kind": "phi"}, "lam": 2}``. Keys are exact:
unknown keys and missing required keys raise :class:`DescriptorError`.
"""

import json
import math
from fractions import Fraction

import numpy as np

from . import funcs as F
from .errors import PPDError


class DescriptorError(PPDError, ValueError):
    """Malformed function descriptor."""


def _num(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise DescriptorError(f"field {key!r} must be a number, got {value!r}")
    if isinstance(value, str):
        # rationals such as "1/6" keep exact arithmetic on the piecewise paths
        try:
            return Fraction(value)
        except ValueError:
            raise DescriptorError(f"field {key!r}: cannot parse {value!r} as a number") from None
    if isinstance(value, float) and not math.isfinite(value):
        raise DescriptorError(f"field {key!r} must be finite")
    return value


def _int(value, key):
    if isinstance(value, bool) or not isinstance(value, int):
        raise DescriptorError(f"field {key!r} must be an integer, got {value!r}")
    return value


def _measure(spec):
    atoms = spec.get("atoms", [])
    try:
        atoms = [(float(t), float(m)) for t, m in atoms]
    except (TypeError, ValueError):
        raise DescriptorError("atoms must be a list of [t, mass] pairs") from None
    grid, values = spec.get("grid"), spec.get("values")
    if (grid is None) != (values is None):
        raise DescriptorError("a density needs both 'grid' and 'values'")
    if grid is not None:
        return F.ScaleMeasure(atoms, np.asarray(grid, dtype=float), np.asarray(values, dtype=float))
    return F.ScaleMeasure(atoms)


# kind -> (required keys, optional keys with defaults, builder)
_KINDS = {
    "triangle": ({"r"}, {"dim": 1}, lambda a: F.make_indicator_conv(_num(a["r"], "r"), _int(a["dim"], "dim"))),
    "m_alpha": ({"alpha"}, {"dim": 1}, lambda a: F.make_m_alpha(_num(a["alpha"], "alpha"), _int(a["dim"], "dim"))),
    "m_alpha_sq": ({"alpha"}, {"dim": 1}, lambda a: F.make_m_alpha_sq(_num(a["alpha"], "alpha"), _int(a["dim"], "dim"))),
    "wu": (set(), {}, lambda a: F.make_wu()),
    "phi": (set(), {}, lambda a: F.make_phi()),
    "hermite4": ({"a", "b"}, {}, lambda a: F.make_hermite_quartic(_num(a["a"], "a"), _num(a["b"], "b"))),
    "gaussian": (set(), {"rate": math.pi, "dim": 1}, lambda a: F.gaussian(_num(a["rate"], "rate"), _int(a["dim"], "dim"))),
    "f_zeta": ({"r", "theta"}, {}, lambda a: F.make_f_zeta(float(_num(a["r"], "r")), float(_num(a["theta"], "theta")))),
    "linnik": ({"beta"}, {"dim": 1}, lambda a: F.linnik(float(_num(a["beta"], "beta")), _int(a["dim"], "dim"))),
    "exp_pow": ({"beta"}, {"dim": 1}, lambda a: F.exp_pow(float(_num(a["beta"], "beta")), _int(a["dim"], "dim"))),
    "inverse_multiquadric": (set(), {"alpha": 1.0, "beta": 0.5, "dim": 1},
                             lambda a: F.inverse_multiquadric(float(_num(a["alpha"], "alpha")),
                                                              float(_num(a["beta"], "beta")),
                                                              _int(a["dim"], "dim"))),
    "wendland33": (set(), {}, lambda a: F.wendland33()),
    "scale": ({"inner", "lam"}, {}, lambda a: F.scale(build(a["inner"]), _num(a["lam"], "lam"))),
    "mixture": ({"inner"}, {"atoms": [], "grid": None, "values": None},
                lambda a: F.mixture(build(a["inner"]), _measure(a))),
    "product": ({"left", "right"}, {}, lambda a: F.product(build(a["left"]), build(a["right"]))),
    "convolve": ({"left", "right"}, {}, lambda a: F.convolve(build(a["left"]), build(a["right"]))),
}

KINDS = tuple(sorted(_KINDS))


def build(desc):
    """Construct the :class:`~ppdcone.funcs.RadialFunction` described by ``desc``.

    ``desc`` may be a mapping or a JSON string.
    """
    if isinstance(desc, str):
        try:
            desc = json.loads(desc)
        except json.JSONDecodeError as exc:
            raise DescriptorError(f"descriptor is not valid JSON: {exc}") from None
    if not isinstance(desc, dict):
        raise DescriptorError("descriptor must be a JSON object")
    kind = desc.get("kind")
    if kind not in _KINDS:
        raise DescriptorError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    required, optional, builder = _KINDS[kind]
    keys = set(desc) - {"kind"}
    unknown = keys - required - set(optional)
    if unknown:
        raise DescriptorError(f"unknown keys for {kind!r}: {sorted(unknown)}")
    missing = required - keys
    if missing:
        raise DescriptorError(f"missing keys for {kind!r}: {sorted(missing)}")
    args = dict(optional)
    args.update({k: desc[k] for k in keys})
    return builder(args)

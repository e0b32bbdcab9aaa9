"""Scale-labelled complex number structures and cross-scale projections.

A *structure scale* is a nonzero complex factor ``c`` labelling one scaled
copy of the complex numbers.  Base elements carry no value of their own; they
are stored here by their *canonical* coordinate (their value at scale 1), and
the value of an element ``b`` read at scale ``c`` is ``b / c``.  Consequently
the same element has value ratios ``d * v_d = c * v_c`` across scales.

Reading the arithmetic of scale ``d`` in terms of the values of scale ``c``
rescales the operations themselves:

    mul:   s ×_d t   ->  (c/d) * s * t
    div:   s ÷_d t   ->  (d/c) * (s / t)
    conj:  s^(*_d)   ->  (d/c) * conj(s)

(addition is unchanged).  These projected operations preserve the field
axioms because every term of an equation picks up the same overall factor.
Note that the projected conjugation is *not* an involution when ``d/c`` is
not real; it is implemented literally as written above.

All operations are pure and accept scalars or numpy arrays of values.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidScaleError, NotAMemberError

__all__ = [
    "StructureScale",
    "ScaledNumber",
    "NaturalSubset",
    "scale_value",
    "value_map",
    "rescale_value",
    "corresponding_number",
    "project_mul",
    "project_div",
    "project_conj",
    "natural_subset_value",
]

ScaleLike = Union["StructureScale", complex, float, int]


def scale_value(scale: ScaleLike) -> complex:
    """Coerce a scale argument to a validated nonzero finite complex number."""
    value = scale.value if isinstance(scale, StructureScale) else complex(scale)
    if value == 0:
        raise InvalidScaleError("structure scale must be nonzero")
    if not cmath.isfinite(value):
        raise InvalidScaleError(f"structure scale must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class StructureScale:
    """Nonzero complex factor labelling one scaled number structure."""

    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", scale_value(self.value))


#: The reference scale; canonical coordinates are values at this scale.
REFERENCE_SCALE = StructureScale(1.0)


@dataclass(frozen=True)
class ScaledNumber:
    """A base-set element together with the scale it is currently read in.

    ``canonical`` is scale-independent: rescaling produces a new ScaledNumber
    with the same canonical coordinate and a different ``scale`` tag.
    """

    canonical: complex
    scale: StructureScale = REFERENCE_SCALE

    def __post_init__(self):
        canonical = complex(self.canonical)
        if not cmath.isfinite(canonical):
            raise ValueError(f"canonical coordinate must be finite, got {canonical!r}")
        object.__setattr__(self, "canonical", canonical)
        if not isinstance(self.scale, StructureScale):
            object.__setattr__(self, "scale", StructureScale(self.scale))

    def value(self) -> complex:
        """The value of this element in its own structure."""
        return self.canonical / self.scale.value

    def rescale(self, scale: ScaleLike) -> "ScaledNumber":
        """Re-read the same base element in another structure."""
        return ScaledNumber(self.canonical, StructureScale(scale_value(scale)))


@dataclass(frozen=True)
class NaturalSubset:
    """The naturals thinned to every ``stride``-th element (0, m, 2m, ...)."""

    stride: int

    def __post_init__(self):
        if not isinstance(self.stride, int) or self.stride < 1:
            raise ValueError(f"stride must be a positive integer, got {self.stride!r}")

    def __contains__(self, j: int) -> bool:
        return isinstance(j, int) and j >= 0 and j % self.stride == 0

    def value_of(self, j: int) -> int:
        """Well-ordering position of ``j`` within this subset."""
        if j not in self:
            raise NotAMemberError(f"{j} is not a member of N_{self.stride}")
        return j // self.stride


def value_map(b: ScaledNumber, c: ScaleLike):
    """Value of base element ``b`` read at scale ``c``: canonical / c.

    Satisfies d * value_map(b, d) == c * value_map(b, c) for all scale pairs;
    zero is the unique fixed point of all rescalings.
    """
    return b.canonical / scale_value(c)


def rescale_value(val, from_d: ScaleLike, to_c: ScaleLike):
    """Convert a value read at scale ``d`` to the value at scale ``c``.

    Returns (d/c) * val, i.e. v_c(b) given v_d(b) = val.
    """
    return (scale_value(from_d) / scale_value(to_c)) * val


def corresponding_number(a, d: ScaleLike, c: ScaleLike) -> ScaledNumber:
    """The base element whose value at scale ``d`` is ``a``, read at scale ``c``.

    Canonical coordinate is a*d; the returned element's in-scale value is
    therefore (d/c)*a, and value_map(result, d) round-trips to ``a``.
    """
    d_value = scale_value(d)
    c_value = scale_value(c)
    return ScaledNumber(complex(a) * d_value, StructureScale(c_value))


def project_mul(s, t, d: ScaleLike, c: ScaleLike):
    """Value at scale ``c`` of the scale-``d`` product of values ``s``, ``t``.

    project_mul(s, t, d, c) = (c/d) * s * t.  The projected multiplicative
    identity is the value of 1_d at scale c, namely d/c.
    """
    return (scale_value(c) / scale_value(d)) * (s * t)


def project_div(s, t, d: ScaleLike, c: ScaleLike):
    """Value at scale ``c`` of the scale-``d`` quotient s / t.

    project_div(s, t, d, c) = (d/c) * (s / t); inverse of project_mul.
    """
    ratio = scale_value(d) / scale_value(c)
    if np.any(t == 0):
        raise ZeroDivisionError("projected division by the zero element")
    return ratio * (s / t)


def project_conj(s, d: ScaleLike, c: ScaleLike):
    """Value at scale ``c`` of the scale-``d`` conjugate of ``s``.

    Implemented literally as (d/c) * conj(s).  For non-real d/c this is not
    an involution; see the module docstring.
    """
    return (scale_value(d) / scale_value(c)) * np.conjugate(s)


def natural_subset_value(j: int, m: int, n: int) -> tuple[int, int]:
    """Positions of the natural ``j`` inside the nested subsets N_m ⊆ N_n.

    Requires n | m and m | j.  Returns (j // m, j // n); the pair satisfies
    m * (j // m) == n * (j // n) == j exactly in integer arithmetic.
    """
    if m < 1 or n < 1:
        raise ValueError("subset strides must be positive integers")
    if m % n != 0:
        raise NotAMemberError(f"N_{m} is not a subset of N_{n} ({n} does not divide {m})")
    if j < 0 or j % m != 0:
        raise NotAMemberError(f"{j} is not a member of N_{m}")
    return j // m, j // n

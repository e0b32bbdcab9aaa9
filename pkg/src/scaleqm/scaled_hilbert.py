"""Finite-dimensional scaled vector structures over scaled complex numbers.

Vectors live in scaled copies of the same underlying space: the base vector
behind coordinates ``psi`` at scale ``d`` has coordinates ``(d/c) * psi`` at
scale ``c``, so corresponding vectors across scales differ by scalar factors
only.  Reading the scale-``d`` operations through scale-``c`` coordinates:

    scalar mul:  a ·_d psi      ->  (c/d) * a * psi
    inner:       <phi, rho>_d   ->  (d/c) * <phi, rho>

with the plain sesquilinear inner product (conjugate-linear in the first
argument) on the right-hand sides.  Vector addition is unchanged.

The inner-product factor is ``d/c`` with no conjugation, exactly as the
structure maps dictate; for non-real ``d/c`` this trades away conjugate
symmetry, so the sesquilinearity checks in the tests restrict to
real-positive scales.

All operations accept 1-d numpy arrays (or anything ``np.asarray`` takes)
and are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError
from .scaled_numbers import REFERENCE_SCALE, ScaleLike, StructureScale, scale_value

__all__ = [
    "ScaledVector",
    "corresponding_vector",
    "project_scalar_mul",
    "project_inner",
]


@dataclass(frozen=True)
class ScaledVector:
    """A vector stored in reference-structure coordinates plus a scale tag."""

    canonical: np.ndarray
    scale: StructureScale = REFERENCE_SCALE

    def __post_init__(self):
        canonical = np.asarray(self.canonical, dtype=complex)
        if canonical.ndim != 1 or canonical.size < 1:
            raise ValueError("ScaledVector wants a 1-d vector of dimension >= 1")
        if not np.all(np.isfinite(canonical)):
            raise ValueError("vector entries must be finite")
        canonical.setflags(write=False)
        object.__setattr__(self, "canonical", canonical)
        if not isinstance(self.scale, StructureScale):
            object.__setattr__(self, "scale", StructureScale(self.scale))

    def values(self) -> np.ndarray:
        """Coordinates of this vector in its own structure."""
        return self.canonical / self.scale.value

    def rescale(self, scale: ScaleLike) -> "ScaledVector":
        """The same base vector read in another structure."""
        return ScaledVector(self.canonical, StructureScale(scale_value(scale)))


def corresponding_vector(psi_values, d: ScaleLike, c: ScaleLike) -> np.ndarray:
    """Coordinates at scale ``c`` of the vector whose scale-``d`` coordinates
    are ``psi_values``: (d/c) * psi_values."""
    psi = np.asarray(psi_values, dtype=complex)
    return (scale_value(d) / scale_value(c)) * psi


def project_scalar_mul(a, psi, d: ScaleLike, c: ScaleLike) -> np.ndarray:
    """Coordinates at scale ``c`` of a ·_d psi: (c/d) * a * psi.

    The neutral scalar is the value of 1_d at scale c, i.e. a = d/c leaves
    psi unchanged.
    """
    psi = np.asarray(psi, dtype=complex)
    return (scale_value(c) / scale_value(d)) * (complex(a) * psi)


def project_inner(phi, rho, d: ScaleLike, c: ScaleLike) -> complex:
    """Value at scale ``c`` of <phi, rho>_d: (d/c) * <phi, rho>.

    The underlying inner product is conjugate-linear in the first argument.
    Orthogonality is preserved by every scale projection since the result is
    a nonzero multiple of the plain inner product.
    """
    phi = np.asarray(phi, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if phi.shape != rho.shape:
        raise GridMismatchError(f"vector shapes differ: {phi.shape} vs {rho.shape}")
    return (scale_value(d) / scale_value(c)) * complex(np.vdot(phi, rho))

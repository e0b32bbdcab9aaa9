"""Scaling fields on uniform periodic grids.

The field assigns a structure scale g(z) = e^{γ(z)} to the fiber over each
grid point z.  Stored quantities:

    gamma  — the complex (or real) scalar field γ, one value per grid point
    g      — cached exponential e^γ (never zero)
    grad   — cached discrete gradient Γ = ∇γ, one array per axis

Because everything downstream uses γ differences and Γ, the natural
companions live here too: the parallel-transport factor g(y)/g(x) =
e^{γ(y)−γ(x)}, the free transitive action d·c of the structure group on
fiber levels, and the n-point arithmetic mean ρ of γ whose exponential is
the geometric mean of the g values (the n-particle scaling field).
"""

from __future__ import annotations

import cmath
import csv
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .derivatives import METHODS, apply_first
from .errors import FieldConstructionError, GridMismatchError, PeriodicityError
from .scaled_numbers import ScaleLike, StructureScale, scale_value

__all__ = [
    "Grid",
    "ScalingField",
    "build_field",
    "preset_field",
    "FIELD_PRESETS",
    "load_gamma_table",
    "periodic_images",
    "connection_factor",
    "compose_scale",
    "multi_rho",
]

#: analytic specs must agree across the periodic wrap within this much
WRAP_TOLERANCE = 1e-8

GridPoint = Union[int, Sequence[int]]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid: ``n`` points per axis, ``dims`` axes.

    Index arithmetic wraps modulo n per axis; physical length per axis is
    L = n·spacing.
    """

    dims: int
    n: int
    spacing: float

    def __post_init__(self):
        if not 1 <= self.dims <= 3:
            raise ValueError(f"dims must be 1..3, got {self.dims}")
        if self.n < 4:
            raise ValueError(f"need at least 4 points per axis, got {self.n}")
        if not (np.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError(f"spacing must be positive and finite, got {self.spacing}")

    @property
    def length(self) -> float:
        return self.n * self.spacing

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.dims

    @property
    def size(self) -> int:
        return self.n**self.dims

    def axis_coordinates(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    def mesh(self) -> list:
        """Coordinate arrays of shape ``self.shape``, one per axis."""
        return list(np.meshgrid(*([self.axis_coordinates()] * self.dims), indexing="ij"))

    def wrap_point(self, point: GridPoint) -> tuple:
        """Normalize a grid point to an in-range index tuple (mod n)."""
        if np.isscalar(point):
            point = (int(point),)
        point = tuple(int(p) % self.n for p in point)
        if len(point) != self.dims:
            raise GridMismatchError(f"point {point} has wrong rank for a {self.dims}-d grid")
        return point


class ScalingField:
    """γ, g = e^γ, and Γ = ∇γ on one grid, with a fixed gradient backend.

    Immutable after construction.  A constant γ yields an exactly zero Γ
    for every backend (the gradient of a constant vanishes identically;
    enforcing this removes FFT round-off for the spectral backend, the
    shift-based backends produce exact zeros anyway).  The gradient of a
    real γ is kept real.
    """

    def __init__(self, grid: Grid, gamma: np.ndarray, gradient_method: str = "central2"):
        if gradient_method not in METHODS:
            raise FieldConstructionError(
                f"unknown gradient method {gradient_method!r}; expected one of {METHODS}"
            )
        gamma = np.asarray(gamma)
        if gamma.shape != grid.shape:
            raise GridMismatchError(f"gamma shape {gamma.shape} does not match grid {grid.shape}")
        if not np.all(np.isfinite(gamma)):
            raise FieldConstructionError("gamma must be finite at every grid point")
        gamma = gamma.copy()
        gamma.setflags(write=False)

        self.grid = grid
        self.gamma = gamma
        self.gradient_method = gradient_method
        self.g = np.exp(gamma)
        self.g.setflags(write=False)
        self.grad = tuple(self._gradient())
        for component in self.grad:
            component.setflags(write=False)

    def _gradient(self) -> list:
        if np.all(self.gamma == self.gamma.flat[0]):
            zero = np.zeros(self.grid.shape)
            return [zero.copy() for _ in range(self.grid.dims)]
        components = [
            apply_first(self.gamma, self.grid.spacing, axis=axis, method=self.gradient_method)
            for axis in range(self.grid.dims)
        ]
        if not np.iscomplexobj(self.gamma):
            components = [np.real(c) for c in components]
        return [np.ascontiguousarray(c) for c in components]

    def is_constant(self) -> bool:
        return bool(np.all(self.gamma == self.gamma.flat[0]))

    def gamma_at(self, point: GridPoint):
        return self.gamma[self.grid.wrap_point(point)]

    def with_gamma_scaled(self, factor: float) -> "ScalingField":
        """A new field with γ multiplied pointwise by ``factor``."""
        return ScalingField(self.grid, self.gamma * factor, self.gradient_method)


def build_field(grid: Grid, gamma_spec, gradient_method: str = "central2") -> ScalingField:
    """Construct a ScalingField from an analytic form or a per-point table.

    ``gamma_spec`` may be a callable γ(z₁,…) of the physical coordinates
    (checked for periodicity across the wrap, mismatch > 1e−8 is an error)
    or an array of per-point values (taken as given, no periodicity check
    is possible).  Scalars are accepted as constant fields.
    """
    if callable(gamma_spec):
        mesh = grid.mesh()
        gamma = np.asarray(gamma_spec(*mesh))
        if gamma.shape != grid.shape:
            gamma = np.broadcast_to(gamma, grid.shape).copy()
        length = grid.length
        for axis in range(grid.dims):
            shifted = list(mesh)
            shifted[axis] = mesh[axis] + length
            wrapped = np.broadcast_to(np.asarray(gamma_spec(*shifted)), grid.shape)
            mismatch = np.max(np.abs(wrapped - gamma))
            if not np.isfinite(mismatch) or mismatch > WRAP_TOLERANCE:
                raise PeriodicityError(
                    f"gamma spec is not periodic along axis {axis}: "
                    f"wrap mismatch {mismatch:.3e} exceeds {WRAP_TOLERANCE:.0e}"
                )
    elif np.isscalar(gamma_spec):
        gamma = np.full(grid.shape, gamma_spec)
    else:
        gamma = np.asarray(gamma_spec)
        if gamma.size == grid.size and gamma.shape != grid.shape:
            gamma = gamma.reshape(grid.shape)
    return ScalingField(grid, gamma, gradient_method)


def periodic_images(coord: np.ndarray, center: float, width: float, length: float) -> np.ndarray:
    """Gaussian bump periodicized by summing ±3 translated images."""
    total = np.zeros_like(coord)
    for m in range(-3, 4):
        total = total + np.exp(-((coord - center + m * length) ** 2) / (2.0 * width**2))
    return total


def _make_constant(grid: Grid, kappa=0.7):
    return lambda *mesh: np.full(grid.shape, kappa)


def _make_sine(grid: Grid, alpha=0.3):
    w = 2.0 * np.pi / grid.length
    return lambda *mesh: alpha * sum(np.sin(w * z) for z in mesh)


def _make_linear_periodic(grid: Grid, alpha=0.5):
    # Triangle wave of slope ±alpha: the periodic stand-in for γ = α·z.
    length = grid.length
    half = length / 2.0

    def tent(*mesh):
        return alpha * sum(half - np.abs(np.mod(z, length) - half) for z in mesh)

    return tent


def _make_gaussian_bump(grid: Grid, alpha=0.5, center=None, width=None):
    length = grid.length
    center = length / 2.0 if center is None else center
    width = length / 12.0 if width is None else width

    def bump(*mesh):
        total = np.ones(grid.shape)
        for z in mesh:
            total = total * periodic_images(z, center, width, length)
        return alpha * total

    return bump


FIELD_PRESETS = {
    "constant": _make_constant,
    "sine": _make_sine,
    "linear-periodic": _make_linear_periodic,
    "gaussian-bump-periodicized": _make_gaussian_bump,
}


def preset_field(grid: Grid, name: str, gradient_method: str = "central2", **params) -> ScalingField:
    """Build one of the named analytic fields on ``grid``."""
    try:
        factory = FIELD_PRESETS[name]
    except KeyError:
        raise FieldConstructionError(
            f"unknown field preset {name!r}; expected one of {sorted(FIELD_PRESETS)}"
        ) from None
    return build_field(grid, factory(grid, **params), gradient_method)


def load_gamma_table(path, grid: Grid) -> np.ndarray:
    """Read per-point γ values from CSV rows (flat index, re, im).

    A non-numeric first row is treated as a header.  Every flat index must
    appear exactly once.  A table whose imaginary column is identically
    zero yields a real array.
    """
    flat = np.full(grid.size, np.nan, dtype=complex)
    seen = np.zeros(grid.size, dtype=bool)
    with open(path, newline="") as handle:
        for row_number, row in enumerate(csv.reader(handle)):
            if not row or not "".join(row).strip():
                continue
            try:
                idx = int(row[0])
                re, im = float(row[1]), float(row[2])
            except (ValueError, IndexError):
                if row_number == 0:
                    continue  # header
                raise FieldConstructionError(
                    f"{path}: row {row_number + 1} is not 'index,re,im': {row!r}"
                ) from None
            if not 0 <= idx < grid.size:
                raise FieldConstructionError(
                    f"{path}: flat index {idx} out of range for grid size {grid.size}"
                )
            if seen[idx]:
                raise FieldConstructionError(f"{path}: duplicate flat index {idx}")
            seen[idx] = True
            flat[idx] = complex(re, im)
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        raise FieldConstructionError(f"{path}: missing flat index {missing}")
    gamma = flat.reshape(grid.shape)
    if np.all(gamma.imag == 0.0):
        gamma = gamma.real
    return gamma


def connection_factor(field: ScalingField, x: GridPoint, y: GridPoint):
    """Parallel-transport scalar from the fiber at y to the fiber at x.

    Equal to g(y)/g(x), computed as e^{γ(y)−γ(x)} so that transport to self
    is exactly 1 and the two directions are exact reciprocals in exponent.
    """
    exponent = field.gamma_at(y) - field.gamma_at(x)
    return np.exp(exponent) if not np.iscomplexobj(field.gamma) else cmath.exp(complex(exponent))


def compose_scale(w_d: ScaleLike, c: ScaleLike) -> StructureScale:
    """Action of the structure group: W_d sends fiber level c to d·c."""
    return StructureScale(scale_value(w_d) * scale_value(c))


def multi_rho(field: ScalingField, points: Sequence[GridPoint]):
    """Arithmetic mean of γ over n points: exp(multi_rho) is the geometric
    mean of the g values (principal branch)."""
    if len(points) == 0:
        raise ValueError("multi_rho needs at least one point")
    values = [field.gamma_at(p) for p in points]
    total = values[0]
    for v in values[1:]:
        total = total + v
    return total / len(values)

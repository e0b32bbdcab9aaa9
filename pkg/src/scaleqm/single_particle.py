"""Scaled single-particle wave packets and Γ-modified grid operators.

A packet ψ on the grid is *scaled* by multiplying pointwise with
e^{γ(z)−γ(z_ref)}; the reference point only contributes a global scalar.
Acting on scaled packets, the plain derivative operators pick up the
gradient Γ = ∇γ of the field:

    p(e^γ ψ)       = e^γ (p + s·iħ·ΣΓ_j) ψ            (momentum, s = momentum_sign)
    ∂²(e^γ ψ)      = e^γ (∂ + Γ)² ψ                    (kinetic building block)

Sign conventions: the default is the standard physics convention
p = −iħ∇ and K = −(ħ²/2m)Σ∂²  (momentum_sign = kinetic_sign = −1).
``positive_sign_params`` flips both to the +iħ∇ / +ħ²/2m convention; every
identity checked here is covariant in these signs.

In more than one dimension the momentum operator used here is the
*contracted* one, s·iħ·Σ_j ∂_j (the sum of components), so its output is
again a single amplitude per grid point.

Dense Hamiltonians come in two gauges built through one code path:

    standard        −(ħ²/2m)·Σ_j D_j² + diag(V)        (zero field inserted)
    gamma-modified  −(ħ²/2m)·Σ_j A_j² + diag(V)

where A_j realizes D_j + diag(Γ_j).  For the central-difference backends
A_j is literally D_j + diag(Γ_j) (similar to D_j up to O(Δ²)).  For the
spectral backend A_j is the exact conjugation e^{−γ}∘D_j∘e^{γ}, which
agrees with D_j + diag(Γ_j) on band-limited states to machine precision
and keeps the similarity H_mod = e^{−γ}·H_std·e^{γ} exact at the matrix
level — so the two gauges share their spectrum to round-off, which is the
content of the spectrum-invariance checks.  (The literal sum breaks the
similarity near the Nyquist modes at any finite N.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .derivatives import apply_first, derivative_matrix
from .errors import (
    ContractError,
    EigensolverError,
    GridMismatchError,
    ResourceLimitError,
)
from .scaling_field import Grid, GridPoint, ScalingField, periodic_images

__all__ = [
    "MAX_DENSE_SIZE",
    "PhysicalParams",
    "positive_sign_params",
    "PotentialField",
    "zero_potential",
    "well_potential",
    "cosine_potential",
    "WavePacket",
    "gaussian_packet",
    "plane_wave_packet",
    "delta_packet",
    "random_smooth_packet",
    "scale_packet",
    "momentum_apply",
    "kinetic_apply",
    "build_hamiltonian",
    "eigen_spectrum",
    "eigen_pairs",
    "momentum_representation",
    "match_spectra",
]

#: dense operator matrices are capped at this many rows
MAX_DENSE_SIZE = 4096

NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class PhysicalParams:
    """ħ, particle mass, and the two operator sign choices."""

    hbar: float = 1.0
    mass: float = 1.0
    momentum_sign: int = -1
    kinetic_sign: int = -1

    def __post_init__(self):
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not (np.isfinite(self.mass) and self.mass > 0):
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.momentum_sign not in (1, -1) or self.kinetic_sign not in (1, -1):
            raise ValueError("momentum_sign and kinetic_sign must be +1 or -1")


def positive_sign_params(hbar: float = 1.0, mass: float = 1.0) -> PhysicalParams:
    """Params with p = +iħ∇ and K = +(ħ²/2m)Σ∂² (both signs flipped)."""
    return PhysicalParams(hbar=hbar, mass=mass, momentum_sign=1, kinetic_sign=1)


@dataclass(frozen=True)
class PotentialField:
    """Per-point potential energy V on a grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != self.grid.shape:
            raise GridMismatchError(
                f"potential shape {values.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("potential must be finite everywhere")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values) or bool(np.all(self.values.imag == 0.0))


def zero_potential(grid: Grid) -> PotentialField:
    return PotentialField(np.zeros(grid.shape), grid)


def well_potential(grid: Grid, depth: float = 5.0, center: Optional[float] = None,
                   width: Optional[float] = None) -> PotentialField:
    """Smooth periodicized well: V = depth·(1 − Gaussian dip) per axis, summed."""
    length = grid.length
    center = length / 2.0 if center is None else center
    width = length / 10.0 if width is None else width
    total = np.zeros(grid.shape)
    for coord in grid.mesh():
        total = total + depth * (1.0 - periodic_images(coord, center, width, length))
    return PotentialField(total, grid)


def cosine_potential(grid: Grid, height: float = 5.0) -> PotentialField:
    """V = height·(1 − cos(2πz/L))/2 per axis, summed; single-mode and smooth."""
    w = 2.0 * np.pi / grid.length
    total = np.zeros(grid.shape)
    for coord in grid.mesh():
        total = total + 0.5 * height * (1.0 - np.cos(w * coord))
    return PotentialField(total, grid)


@dataclass(frozen=True)
class WavePacket:
    """Amplitudes on a grid plus the scaling bookkeeping.

    ``scaled`` records whether the amplitudes already carry the
    e^{γ(z)−γ(ref_point)} factor.  ``normalized`` may be declared for
    unscaled packets and is then verified (Σ|ψ|²·Δ^dims = 1 within 1e−10).
    """

    amplitudes: np.ndarray
    grid: Grid
    ref_point: tuple = None
    scaled: bool = False
    normalized: bool = False

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes)
        if amplitudes.shape != self.grid.shape:
            raise GridMismatchError(
                f"amplitude shape {amplitudes.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(amplitudes)):
            raise ValueError("amplitudes must be finite")
        amplitudes = amplitudes.copy()
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)
        ref = (0,) * self.grid.dims if self.ref_point is None else self.grid.wrap_point(self.ref_point)
        object.__setattr__(self, "ref_point", ref)
        if self.normalized and not self.scaled:
            norm = self.norm()
            if abs(norm - 1.0) > NORM_TOLERANCE:
                raise ContractError(f"packet declared normalized but ‖ψ‖ = {norm!r}")

    def norm(self) -> float:
        cell = self.grid.spacing**self.grid.dims
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * cell))


def gaussian_packet(grid: Grid, center: Optional[float] = None, width: Optional[float] = None,
                    mode: int = 0, ref_point: GridPoint = None) -> WavePacket:
    """Normalized periodicized Gaussian, optionally carrying momentum e^{ikz}."""
    length = grid.length
    center = length / 2.0 if center is None else center
    width = length / 8.0 if width is None else width
    envelope = np.ones(grid.shape)
    for coord in grid.mesh():
        envelope = envelope * periodic_images(coord, center, width, length)
    if mode != 0:
        k = 2.0 * np.pi * mode / length
        phase = np.zeros(grid.shape)
        for coord in grid.mesh():
            phase = phase + k * coord
        envelope = envelope * np.exp(1j * phase)
    cell = grid.spacing**grid.dims
    envelope = envelope / np.sqrt(np.sum(np.abs(envelope) ** 2) * cell)
    return WavePacket(envelope, grid, ref_point=ref_point, normalized=True)


def plane_wave_packet(grid: Grid, modes=1, ref_point: GridPoint = None) -> WavePacket:
    """Normalized plane wave e^{ik·z}/√(L^dims); ``modes`` is an integer per axis."""
    if np.isscalar(modes):
        modes = (int(modes),) * grid.dims
    if len(modes) != grid.dims:
        raise GridMismatchError(f"need {grid.dims} mode numbers, got {modes!r}")
    phase = np.zeros(grid.shape)
    for m, coord in zip(modes, grid.mesh()):
        phase = phase + (2.0 * np.pi * int(m) / grid.length) * coord
    amplitudes = np.exp(1j * phase) / np.sqrt(grid.length**grid.dims)
    return WavePacket(amplitudes, grid, ref_point=ref_point, normalized=True)


def delta_packet(grid: Grid, at: GridPoint = 0, ref_point: GridPoint = None) -> WavePacket:
    """Unit-norm grid delta: 1/√(Δ^dims) at one point, zero elsewhere."""
    amplitudes = np.zeros(grid.shape)
    amplitudes[grid.wrap_point(at)] = 1.0 / np.sqrt(grid.spacing**grid.dims)
    return WavePacket(amplitudes, grid, ref_point=ref_point, normalized=True)


def random_smooth_packet(grid: Grid, seed: int = 0, max_mode: int = 4,
                         ref_point: GridPoint = None) -> WavePacket:
    """Normalized random band-limited packet (modes up to ``max_mode`` per axis)."""
    rng = np.random.default_rng(seed)
    amplitudes = np.zeros(grid.shape, dtype=complex)
    mesh = grid.mesh()
    w = 2.0 * np.pi / grid.length
    for _ in range(3 * grid.dims + 2):
        modes = rng.integers(-max_mode, max_mode + 1, size=grid.dims)
        coeff = rng.normal() + 1j * rng.normal()
        phase = np.zeros(grid.shape)
        for m, coord in zip(modes, mesh):
            phase = phase + w * m * coord
        amplitudes = amplitudes + coeff * np.exp(1j * phase)
    cell = grid.spacing**grid.dims
    amplitudes = amplitudes / np.sqrt(np.sum(np.abs(amplitudes) ** 2) * cell)
    return WavePacket(amplitudes, grid, ref_point=ref_point, normalized=True)


def _require_same_grid(psi: WavePacket, field: ScalingField):
    if psi.grid != field.grid:
        raise GridMismatchError("packet and field live on different grids")


def scale_packet(psi: WavePacket, field: ScalingField) -> WavePacket:
    """Multiply pointwise by e^{γ(z)−γ(ref_point)} and mark the packet scaled.

    For a constant γ the exponent is exactly zero and the amplitudes are
    returned unchanged bit for bit.
    """
    _require_same_grid(psi, field)
    if psi.scaled:
        raise ContractError("packet is already scaled")
    exponent = field.gamma - field.gamma[psi.ref_point]
    amplitudes = psi.amplitudes * np.exp(exponent)
    return WavePacket(amplitudes, psi.grid, ref_point=psi.ref_point, scaled=True)


def _sum_first_derivatives(values, grid: Grid, method: str):
    total = None
    for axis in range(grid.dims):
        term = apply_first(values, grid.spacing, axis=axis, method=method)
        total = term if total is None else total + term
    return total


def momentum_apply(psi: WavePacket, field: ScalingField, params: PhysicalParams,
                   method: Optional[str] = None) -> WavePacket:
    """Contracted momentum s·iħ·Σ_j ∂_j applied to a scaled packet."""
    _require_same_grid(psi, field)
    if not psi.scaled:
        raise ContractError("momentum_apply expects a scaled packet")
    method = field.gradient_method if method is None else method
    derivative = _sum_first_derivatives(psi.amplitudes, psi.grid, method)
    out = params.momentum_sign * 1j * params.hbar * derivative
    return WavePacket(out, psi.grid, ref_point=psi.ref_point, scaled=True)


def kinetic_apply(psi: WavePacket, field: ScalingField, params: PhysicalParams,
                  method: Optional[str] = None) -> WavePacket:
    """Kinetic operator s·(ħ²/2m)·Σ_j ∂²_j applied to a scaled packet,
    each ∂²_j realized as the first derivative applied twice."""
    _require_same_grid(psi, field)
    if not psi.scaled:
        raise ContractError("kinetic_apply expects a scaled packet")
    method = field.gradient_method if method is None else method
    total = None
    for axis in range(psi.grid.dims):
        once = apply_first(psi.amplitudes, psi.grid.spacing, axis=axis, method=method)
        term = apply_first(once, psi.grid.spacing, axis=axis, method=method)
        total = term if total is None else total + term
    coeff = params.kinetic_sign * params.hbar**2 / (2.0 * params.mass)
    return WavePacket(coeff * total, psi.grid, ref_point=psi.ref_point, scaled=True)


def _lifted_derivative(grid: Grid, axis: int, method: str) -> np.ndarray:
    """Dense first derivative along ``axis`` on the flattened N^dims space."""
    d1 = derivative_matrix(grid.n, grid.spacing, order=1, method=method)
    factors = [d1 if j == axis else np.eye(grid.n) for j in range(grid.dims)]
    lifted = factors[0]
    for factor in factors[1:]:
        lifted = np.kron(lifted, factor)
    return lifted


def build_hamiltonian(field: ScalingField, potential: PotentialField, params: PhysicalParams,
                      gauge: str = "standard", method: Optional[str] = None) -> np.ndarray:
    """Dense N^dims × N^dims Hamiltonian in either gauge.

    Both gauges run through identical code; ``standard`` inserts the zero
    field, so a constant γ (whose Γ vanishes identically) reproduces the
    standard matrix bit for bit.
    """
    grid = field.grid
    if potential.grid != grid:
        raise GridMismatchError("potential and field live on different grids")
    if gauge not in ("standard", "gamma-modified"):
        raise ValueError(f"gauge must be 'standard' or 'gamma-modified', got {gauge!r}")
    size = grid.size
    if size > MAX_DENSE_SIZE:
        raise ResourceLimitError(
            f"dense Hamiltonian would need {size} rows (cap {MAX_DENSE_SIZE})"
        )
    method = field.gradient_method if method is None else method
    modified = gauge == "gamma-modified"
    gamma_flat = field.gamma.ravel() if modified else np.zeros(size)

    kinetic = None
    for axis in range(grid.dims):
        d_axis = _lifted_derivative(grid, axis, method)
        if method == "spectral":
            # exact conjugation e^{-γ} D e^{γ}, written with γ differences so
            # that a constant γ multiplies by exactly 1.0
            a_axis = d_axis * np.exp(gamma_flat[None, :] - gamma_flat[:, None])
        else:
            grad_flat = field.grad[axis].ravel() if modified else np.zeros(size)
            a_axis = d_axis + np.diag(grad_flat)
        term = a_axis @ a_axis
        kinetic = term if kinetic is None else kinetic + term
    coeff = params.kinetic_sign * params.hbar**2 / (2.0 * params.mass)
    return coeff * kinetic + np.diag(potential.values.ravel())


def _hermitian_within_roundoff(matrix: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(matrix))))
    return bool(np.allclose(matrix, matrix.conj().T, rtol=0.0, atol=1e-12 * scale))


def _check_square(matrix: np.ndarray):
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] > MAX_DENSE_SIZE:
        raise ResourceLimitError(
            f"matrix has {matrix.shape[0]} rows (cap {MAX_DENSE_SIZE})"
        )


def eigen_spectrum(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues sorted by (real, imag).

    Matrices Hermitian to round-off are symmetrized and sent to the
    Hermitian solver (exactly real output); everything else goes to the
    general solver.
    """
    return eigen_pairs(matrix)[0]


def eigen_pairs(matrix: np.ndarray):
    """(eigenvalues, eigenvectors-as-columns), sorted by (real, imag)."""
    matrix = np.asarray(matrix)
    _check_square(matrix)
    try:
        if _hermitian_within_roundoff(matrix):
            sym = 0.5 * (matrix + matrix.conj().T)
            values, vectors = np.linalg.eigh(sym)
            return values.astype(complex), vectors
        values, vectors = np.linalg.eig(matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((values.imag, values.real))
    return values[order], vectors[:, order]


def momentum_representation(psi: WavePacket, field: ScalingField) -> np.ndarray:
    """Forward DFT of the scaled amplitudes (numpy convention, unnormalized).

    The grid is periodic by construction, which is what makes this the
    exact dual picture: multiplying by e^γ in position space is a circular
    convolution with DFT(e^γ)/N^dims in momentum space.
    """
    _require_same_grid(psi, field)
    if not psi.scaled:
        raise ContractError("momentum_representation expects a scaled packet")
    return np.fft.fftn(psi.amplitudes)


def match_spectra(values_a: np.ndarray, values_b: np.ndarray) -> np.ndarray:
    """Absolute gaps between two spectra.

    Nearly-real spectra are compared entry by entry after (real, imag)
    sorting; otherwise each eigenvalue of ``values_a`` is greedily paired
    with the nearest unused eigenvalue of ``values_b``.
    """
    a = np.asarray(values_a, dtype=complex)
    b = np.asarray(values_b, dtype=complex)
    if a.shape != b.shape:
        raise ContractError(f"spectra have different sizes: {a.shape} vs {b.shape}")
    a = a[np.lexsort((a.imag, a.real))]
    b = b[np.lexsort((b.imag, b.real))]
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    if np.max(np.abs(a.imag)) <= 1e-10 * scale and np.max(np.abs(b.imag)) <= 1e-10 * scale:
        return np.abs(a - b)
    gaps = np.empty(a.shape[0])
    used = np.zeros(b.shape[0], dtype=bool)
    for i, value in enumerate(a):
        distances = np.where(used, np.inf, np.abs(b - value))
        j = int(np.argmin(distances))
        used[j] = True
        gaps[i] = distances[j]
    return gaps

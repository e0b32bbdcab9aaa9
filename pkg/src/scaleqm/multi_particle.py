"""Tensor-product states and per-particle Γ/n-modified operators.

An n-particle amplitude tensor has one axis block of ``grid.dims`` axes per
particle, all over one shared grid (fibers over distinct points coalesce to
fibers over single points, so one grid carries every particle).

The n-particle scaling field is the geometric mean of the one-particle
field over the particle positions: amplitudes are multiplied by
e^{ρ(w₁,…,w_n) − ρ(refs)} with ρ = (1/n)·Σ_j γ(w_j).  Because ρ is built
from a commutative pointwise sum it is exactly permutation-symmetric, so
scaling preserves exact antisymmetry of Slater tensors bit for bit, and
for n = 1 the whole construction collapses to the single-particle scaling
(identical floating-point operations, identical bits).

Acting on scaled tensors, each particle's derivative picks up Γ(w_j)/n —
the n-th root of the geometric mean contributes a 1/n share of the
gradient per particle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .derivatives import apply_first
from .errors import ContractError, GridMismatchError, ResourceLimitError
from .scaling_field import Grid, ScalingField
from .single_particle import PhysicalParams, WavePacket

__all__ = [
    "MAX_TENSOR_ENTRIES",
    "EntangledState",
    "ParticleMasses",
    "CoalescenceReport",
    "product_state",
    "slater_state",
    "rho_exponent",
    "scale_entangled",
    "total_momentum_apply",
    "kinetic_apply_n",
    "momentum_apply_particle",
    "kinetic_apply_particle",
    "exchange",
    "coalesce_check",
]

#: amplitude tensors are capped at this many entries
MAX_TENSOR_ENTRIES = 2**24


@dataclass(frozen=True)
class EntangledState:
    """n-particle amplitudes with per-particle reference points."""

    amplitudes: np.ndarray
    grid: Grid
    n: int
    ref_points: tuple = None
    scaled: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"particle count must be >= 1, got {self.n}")
        expected = self.grid.shape * self.n
        amplitudes = np.asarray(self.amplitudes)
        if amplitudes.shape != expected:
            raise GridMismatchError(
                f"amplitude tensor shape {amplitudes.shape}, expected {expected}"
            )
        if amplitudes.size > MAX_TENSOR_ENTRIES:
            raise ResourceLimitError(
                f"tensor has {amplitudes.size} entries (cap {MAX_TENSOR_ENTRIES})"
            )
        if not np.all(np.isfinite(amplitudes)):
            raise ValueError("amplitudes must be finite")
        amplitudes = amplitudes.copy()
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)
        refs = self.ref_points
        if refs is None:
            refs = ((0,) * self.grid.dims,) * self.n
        refs = tuple(self.grid.wrap_point(p) for p in refs)
        if len(refs) != self.n:
            raise GridMismatchError(f"need {self.n} reference points, got {len(refs)}")
        object.__setattr__(self, "ref_points", refs)

    def particle_axes(self, j: int) -> tuple:
        dims = self.grid.dims
        return tuple(range(j * dims, (j + 1) * dims))


@dataclass(frozen=True)
class ParticleMasses:
    """Positive masses m_1..m_n."""

    masses: tuple

    def __post_init__(self):
        masses = tuple(float(m) for m in self.masses)
        if not masses or not all(np.isfinite(m) and m > 0 for m in masses):
            raise ValueError(f"masses must be positive and finite, got {self.masses!r}")
        object.__setattr__(self, "masses", masses)

    def __len__(self) -> int:
        return len(self.masses)


def product_state(packets: Sequence[WavePacket]) -> EntangledState:
    """Outer product Π_j ψ_j(w_j) of unscaled one-particle packets."""
    if not packets:
        raise ValueError("need at least one packet")
    grid = packets[0].grid
    for packet in packets:
        if packet.grid != grid:
            raise GridMismatchError("all packets must share one grid")
        if packet.scaled:
            raise ContractError("product_state expects unscaled packets")
    amplitudes = packets[0].amplitudes
    for packet in packets[1:]:
        amplitudes = np.multiply.outer(amplitudes, packet.amplitudes)
    refs = tuple(p.ref_point for p in packets)
    return EntangledState(amplitudes, grid, len(packets), ref_points=refs)


def _swap_pair_axes(tensor: np.ndarray, dims: int) -> np.ndarray:
    perm = list(range(dims, 2 * dims)) + list(range(dims))
    return np.transpose(tensor, perm)


def slater_state(psi1: WavePacket, psi2: WavePacket) -> EntangledState:
    """Antisymmetrized two-particle state (ψ₁(w)ψ₂(z) − ψ₁(z)ψ₂(w))/√2.

    The exchanged term is the axis-swapped view of the same outer product,
    so amplitudes(w, z) = −amplitudes(z, w) holds exactly (x − y and
    y − x round to negatives of each other).
    """
    if psi1.grid != psi2.grid:
        raise GridMismatchError("both packets must share one grid")
    if psi1.scaled or psi2.scaled:
        raise ContractError("slater_state expects unscaled packets")
    direct = np.multiply.outer(psi1.amplitudes, psi2.amplitudes)
    amplitudes = (direct - _swap_pair_axes(direct, psi1.grid.dims)) / np.sqrt(2.0)
    return EntangledState(
        amplitudes, psi1.grid, 2, ref_points=(psi1.ref_point, psi2.ref_point)
    )


def _particle_block(field: ScalingField, n: int, j: int) -> np.ndarray:
    """γ broadcast over particle j's axis block of an n-particle tensor."""
    dims = field.grid.dims
    shape = (1,) * (j * dims) + field.grid.shape + (1,) * ((n - 1 - j) * dims)
    return field.gamma.reshape(shape)


def rho_exponent(field: ScalingField, n: int) -> np.ndarray:
    """The mean-field tensor ρ(w₁,…,w_n) = (1/n)·Σ_j γ(w_j).

    Exactly permutation-symmetric (pointwise sums of the same addends);
    for n = 1 this is γ itself, bit for bit (x/1.0 == x).
    """
    total = None
    for j in range(n):
        term = _particle_block(field, n, j)
        total = term if total is None else total + term
    return total / n


def _rho_at(field: ScalingField, refs: Sequence) -> complex:
    total = None
    for point in refs:
        value = field.gamma[field.grid.wrap_point(point)]
        total = value if total is None else total + value
    return total / len(refs)


def scale_entangled(state: EntangledState, field: ScalingField) -> EntangledState:
    """Multiply by e^{ρ(w₁,…,w_n) − ρ(ref_points)} and mark scaled.

    Preserves exact antisymmetry (ρ is exactly symmetric) and reduces to
    the single-particle scaling bit for bit at n = 1.
    """
    if state.grid != field.grid:
        raise GridMismatchError("state and field live on different grids")
    if state.scaled:
        raise ContractError("state is already scaled")
    exponent = rho_exponent(field, state.n) - _rho_at(field, state.ref_points)
    amplitudes = state.amplitudes * np.exp(exponent)
    return EntangledState(amplitudes, state.grid, state.n,
                          ref_points=state.ref_points, scaled=True)


def _require_scaled(state: EntangledState, field: ScalingField):
    if state.grid != field.grid:
        raise GridMismatchError("state and field live on different grids")
    if not state.scaled:
        raise ContractError("operator expects a scaled state")


def momentum_apply_particle(state: EntangledState, j: int, field: ScalingField,
                            params: PhysicalParams, method: Optional[str] = None) -> EntangledState:
    """Contracted momentum of particle j: s·iħ·Σ_{axes of j} ∂."""
    _require_scaled(state, field)
    method = field.gradient_method if method is None else method
    total = None
    for axis in state.particle_axes(j):
        term = apply_first(state.amplitudes, state.grid.spacing, axis=axis, method=method)
        total = term if total is None else total + term
    out = params.momentum_sign * 1j * params.hbar * total
    return EntangledState(out, state.grid, state.n, ref_points=state.ref_points, scaled=True)


def total_momentum_apply(state: EntangledState, field: ScalingField, params: PhysicalParams,
                         method: Optional[str] = None) -> EntangledState:
    """Total momentum Σ_j p_j of a scaled state."""
    _require_scaled(state, field)
    method = field.gradient_method if method is None else method
    total = None
    for axis in range(state.amplitudes.ndim):
        term = apply_first(state.amplitudes, state.grid.spacing, axis=axis, method=method)
        total = term if total is None else total + term
    out = params.momentum_sign * 1j * params.hbar * total
    return EntangledState(out, state.grid, state.n, ref_points=state.ref_points, scaled=True)


def kinetic_apply_particle(state: EntangledState, j: int, mass: float, field: ScalingField,
                           params: PhysicalParams, method: Optional[str] = None) -> EntangledState:
    """Kinetic term of particle j: s·(ħ²/2m_j)·Σ_{axes of j} ∂²."""
    _require_scaled(state, field)
    method = field.gradient_method if method is None else method
    total = None
    for axis in state.particle_axes(j):
        once = apply_first(state.amplitudes, state.grid.spacing, axis=axis, method=method)
        term = apply_first(once, state.grid.spacing, axis=axis, method=method)
        total = term if total is None else total + term
    coeff = params.kinetic_sign * params.hbar**2 / (2.0 * mass)
    return EntangledState(coeff * total, state.grid, state.n,
                          ref_points=state.ref_points, scaled=True)


def kinetic_apply_n(state: EntangledState, field: ScalingField, masses: ParticleMasses,
                    params: PhysicalParams, method: Optional[str] = None) -> EntangledState:
    """Total kinetic operator Σ_j s·(ħ²/2m_j)·Σ_{axes of j} ∂²."""
    _require_scaled(state, field)
    if len(masses) != state.n:
        raise GridMismatchError(f"got {len(masses)} masses for {state.n} particles")
    method = field.gradient_method if method is None else method
    total = None
    for j in range(state.n):
        term = kinetic_apply_particle(state, j, masses.masses[j], field, params, method)
        total = term.amplitudes if total is None else total + term.amplitudes
    return EntangledState(total, state.grid, state.n,
                          ref_points=state.ref_points, scaled=True)


def exchange(state: EntangledState, i: int, j: int) -> EntangledState:
    """Swap particles i and j (axis blocks and reference points)."""
    if not (0 <= i < state.n and 0 <= j < state.n):
        raise ValueError(f"particle indices out of range for n={state.n}")
    perm = list(range(state.amplitudes.ndim))
    for k in range(state.grid.dims):
        a, b = state.particle_axes(i)[k], state.particle_axes(j)[k]
        perm[a], perm[b] = perm[b], perm[a]
    refs = list(state.ref_points)
    refs[i], refs[j] = refs[j], refs[i]
    return EntangledState(np.transpose(state.amplitudes, perm), state.grid, state.n,
                          ref_points=tuple(refs), scaled=state.scaled)


@dataclass(frozen=True)
class CoalescenceReport:
    """Outcome of comparing scalings with two reference tuples."""

    factor: complex
    max_rel_deviation: float

    @property
    def passed(self) -> bool:
        return self.max_rel_deviation <= 1e-12


def coalesce_check(state: EntangledState, field: ScalingField,
                   refs_a: Sequence, refs_b: Sequence) -> CoalescenceReport:
    """Verify that changing reference points only changes a global scalar.

    Scales ``state`` with ref_points = refs_a and = refs_b; the two results
    must differ by exactly e^{ρ(refs_b) − ρ(refs_a)}.  Reports the largest
    relative deviation from that single factor.
    """
    if len(refs_a) != state.n or len(refs_b) != state.n:
        raise GridMismatchError(f"reference tuples must have length {state.n}")
    if state.scaled:
        raise ContractError("coalesce_check expects an unscaled state")
    with_a = scale_entangled(
        EntangledState(state.amplitudes, state.grid, state.n,
                       ref_points=tuple(refs_a)), field)
    with_b = scale_entangled(
        EntangledState(state.amplitudes, state.grid, state.n,
                       ref_points=tuple(refs_b)), field)
    factor = np.exp(_rho_at(field, refs_b) - _rho_at(field, refs_a))
    residual = with_a.amplitudes - factor * with_b.amplitudes
    scale = np.max(np.abs(with_a.amplitudes))
    deviation = 0.0 if scale == 0.0 else float(np.max(np.abs(residual)) / scale)
    return CoalescenceReport(factor=complex(factor), max_rel_deviation=deviation)

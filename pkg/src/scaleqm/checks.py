"""Named check suites shared by the command-line runner and the test suite.

Each ``run_*`` function executes one suite of numerical checks and returns
``(checks, tables)``:

* ``checks`` — a list of :class:`CheckResult`, one per named check, each
  carrying the measured error and the tolerance it was judged against;
* ``tables`` — extra tabular artifacts (eigenvalue tables, state dumps)
  keyed by artifact name, as ``(header, rows)`` pairs ready for CSV output.

A check passes iff ``max_abs_error < tolerance`` (strictly), so forcing
every tolerance to zero fails every check — a quick way to verify the
reporting pipeline is not vacuous.  ``tol_override`` does exactly that kind
of global replacement; per-check defaults are used when it is None.

Order-of-convergence checks store ``|measured_order − 2|`` as their error
with a window half-width as the tolerance, which keeps the uniform
pass/fail rule above.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import scaled_numbers as sn
from .derivatives import apply_first
from .errors import ContractError
from .multi_particle import (
    ParticleMasses,
    coalesce_check,
    exchange,
    kinetic_apply_n,
    kinetic_apply_particle,
    product_state,
    rho_exponent,
    scale_entangled,
    slater_state,
    total_momentum_apply,
)
from .derivatives import first_derivative_symbol
from .scaled_hilbert import project_inner, project_scalar_mul
from .scaling_field import Grid, ScalingField, build_field, multi_rho, preset_field
from .single_particle import (
    PhysicalParams,
    WavePacket,
    build_hamiltonian,
    eigen_pairs,
    eigen_spectrum,
    gaussian_packet,
    kinetic_apply,
    match_spectra,
    momentum_apply,
    momentum_representation,
    plane_wave_packet,
    random_smooth_packet,
    scale_packet,
    well_potential,
    zero_potential,
)

__all__ = [
    "CheckResult",
    "run_axioms",
    "run_single",
    "run_spectrum",
    "run_momentum",
    "run_entangled",
    "SUITE_RUNNERS",
]


@dataclass(frozen=True)
class CheckResult:
    """One named check: measured error against the tolerance it must beat."""

    name: str
    max_abs_error: float
    tolerance: float
    grid_n: Optional[int] = None
    n_particles: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.max_abs_error < self.tolerance


FieldMaker = Callable[[Grid, str], ScalingField]


def _default_field(alpha: float) -> FieldMaker:
    def make(grid: Grid, method: str) -> ScalingField:
        return preset_field(grid, "sine", gradient_method=method, alpha=alpha)

    return make


def _sample_annulus(rng: np.random.Generator, size: int) -> np.ndarray:
    """Complex samples with 0.1 <= |z| <= 10, log-uniform in magnitude."""
    magnitude = 10.0 ** rng.uniform(-1.0, 1.0, size)
    angle = rng.uniform(0.0, 2.0 * np.pi, size)
    return magnitude * np.exp(1j * angle)


def _rel(lhs, rhs) -> float:
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    denom = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    return float(np.max(np.abs(lhs - rhs) / denom))


def _grid(dims: int, n: int) -> Grid:
    return Grid(dims=dims, n=n, spacing=2.0 * np.pi / n)


def _tagged_scaled(packet: WavePacket) -> WavePacket:
    """Re-tag raw amplitudes as scaled so operators act on them directly."""
    return WavePacket(packet.amplitudes, packet.grid,
                      ref_point=packet.ref_point, scaled=True)


# --------------------------------------------------------------------- axioms


def run_axioms(seed: int = 0, samples: int = 200, tolerance: float = 1e-12,
               include_hilbert: bool = True, tol_override: Optional[float] = None):
    """Projected field axioms and value-map identities on random samples.

    Draws ``samples`` scale pairs and ``samples`` operand triples from the
    annulus 0.1 <= |z| <= 10 and accumulates, per axiom, the worst relative
    error over every (pair, triple) combination.
    """
    rng = np.random.default_rng(seed)
    scales_c = _sample_annulus(rng, samples)
    scales_d = _sample_annulus(rng, samples)
    s_ops = _sample_annulus(rng, samples)
    t_ops = _sample_annulus(rng, samples)
    u_ops = _sample_annulus(rng, samples)

    worst: dict[str, float] = {}

    def observe(name: str, error: float):
        worst[name] = max(worst.get(name, 0.0), error)

    for c, d in zip(scales_c, scales_d):
        unit = d / c
        mul = lambda x, y: sn.project_mul(x, y, d, c)  # noqa: E731
        div = lambda x, y: sn.project_div(x, y, d, c)  # noqa: E731

        observe("add_commutative", _rel(s_ops + t_ops, t_ops + s_ops))
        observe("add_associative", _rel((s_ops + t_ops) + u_ops, s_ops + (t_ops + u_ops)))
        observe("add_identity", _rel(s_ops + 0.0, s_ops))
        observe("add_inverse", float(np.max(np.abs(s_ops + (-s_ops)))))
        observe("mul_commutative", _rel(mul(s_ops, t_ops), mul(t_ops, s_ops)))
        observe("mul_associative", _rel(mul(mul(s_ops, t_ops), u_ops),
                                        mul(s_ops, mul(t_ops, u_ops))))
        observe("mul_identity", _rel(mul(s_ops, unit), s_ops))
        observe("mul_inverse", _rel(mul(s_ops, div(unit, s_ops)),
                                    np.full(samples, unit)))
        observe("distributive_left", _rel(mul(s_ops, t_ops + u_ops),
                                          mul(s_ops, t_ops) + mul(s_ops, u_ops)))
        observe("distributive_right", _rel(mul(s_ops + t_ops, u_ops),
                                           mul(s_ops, u_ops) + mul(t_ops, u_ops)))
        observe("div_mul_roundtrip", _rel(div(mul(s_ops, t_ops), t_ops), s_ops))

        # value-map identities over the same sample
        observe("value_scale_ratio", _rel(d * (s_ops / d), c * (s_ops / c)))
        observe("value_rescale_roundtrip",
                _rel(sn.rescale_value(sn.rescale_value(s_ops, d, c), c, d), s_ops))
        observe("corresponding_roundtrip",
                _rel(np.array([sn.value_map(sn.corresponding_number(a, d, c), d)
                               for a in s_ops[:8]]), s_ops[:8]))

    # the value map itself, exercised through ScaledNumber objects
    numbers = [sn.ScaledNumber(z) for z in s_ops[:32]]
    for c, d in zip(scales_c[:32], scales_d[:32]):
        values_c = np.array([sn.value_map(b, c) for b in numbers])
        values_d = np.array([sn.value_map(b, d) for b in numbers])
        observe("value_scale_ratio", _rel(d * values_d, c * values_c))

    zero = sn.ScaledNumber(0.0)
    zero_error = max(
        float(np.max(np.abs([sn.value_map(zero, c) for c in scales_c]))),
        float(np.max(np.abs(sn.rescale_value(np.zeros(4), scales_d[0], scales_c[0])))),
    )
    observe("zero_fixed_point", zero_error)

    if include_hilbert:
        dim = 16
        pair_count = min(40, samples)
        for k in range(pair_count):
            c, d = scales_c[k], scales_d[k]
            phi = _sample_annulus(rng, dim)
            rho = _sample_annulus(rng, dim)
            a = scales_d[(k + 7) % samples]
            unit = d / c
            observe("hilbert_scalar_identity",
                    _rel(project_scalar_mul(unit, phi, d, c), phi))
            observe("hilbert_scalar_composition",
                    _rel(project_scalar_mul(a, project_scalar_mul(unit * 2.0, phi, d, c), d, c),
                         project_scalar_mul(sn.project_mul(a, unit * 2.0, d, c), phi, d, c)))
            observe("hilbert_additive_first",
                    _rel(project_inner(phi + rho, phi, d, c),
                         project_inner(phi, phi, d, c) + project_inner(rho, phi, d, c)))
            observe("hilbert_additive_second",
                    _rel(project_inner(phi, phi + rho, d, c),
                         project_inner(phi, phi, d, c) + project_inner(phi, rho, d, c)))
            observe("hilbert_second_slot_linear",
                    _rel(project_inner(phi, project_scalar_mul(a, rho, d, c), d, c),
                         a * (c / d) * project_inner(phi, rho, d, c)))
        for k in range(pair_count):
            # conjugate-symmetric laws hold on the real-positive scale subgroup
            c, d = abs(scales_c[k]), abs(scales_d[k])
            phi = _sample_annulus(rng, dim)
            rho = _sample_annulus(rng, dim)
            a = scales_d[(k + 11) % samples]
            observe("hilbert_conjugate_first_slot",
                    _rel(project_inner(project_scalar_mul(a, phi, d, c), rho, d, c),
                         np.conj(a) * (c / d) * project_inner(phi, rho, d, c)))

    checks = [CheckResult(name, error, tolerance if tol_override is None else tol_override)
              for name, error in worst.items()]
    return checks, {}


# --------------------------------------------------------------------- single


def run_single(grid_n: int = 64, dims: int = 1, alpha: float = 0.3,
               params: Optional[PhysicalParams] = None,
               field_maker: Optional[FieldMaker] = None,
               tol_override: Optional[float] = None):
    """Single-particle operator checks: product rules, constant-field recovery."""
    params = PhysicalParams() if params is None else params
    field_maker = _default_field(alpha) if field_maker is None else field_maker
    checks = []

    def add(name, error, tol, n=None):
        checks.append(CheckResult(name, float(error),
                                  tol if tol_override is None else tol_override,
                                  grid_n=n))

    def product_rule_residual(n, method):
        grid = _grid(dims, n)
        field = field_maker(grid, method)
        psi = gaussian_packet(grid, mode=2)
        lhs = momentum_apply(scale_packet(psi, field), field, params).amplitudes
        inner = momentum_apply(_tagged_scaled(psi), field, params).amplitudes
        correction = np.zeros(grid.shape, dtype=complex)
        for component in field.grad:
            correction = correction + component * psi.amplitudes
        rhs = np.exp(field.gamma - field.gamma[psi.ref_point]) * (
            inner + params.momentum_sign * 1j * params.hbar * correction)
        return _rel(lhs, rhs)

    add("momentum_product_rule_spectral",
        product_rule_residual(grid_n, "spectral"), 1e-10, n=grid_n)

    residuals = [product_rule_residual(n, "central2") for n in (64, 128, 256)]
    orders = [np.log2(residuals[i] / residuals[i + 1]) for i in range(2)]
    add("momentum_product_rule_central_order",
        abs(float(np.mean(orders)) - 2.0), 0.2, n=256)

    if dims == 1:
        grid = _grid(1, grid_n)
        field = field_maker(grid, "spectral")
        psi = gaussian_packet(grid, mode=1)
        lhs = kinetic_apply(scale_packet(psi, field), field,
                            PhysicalParams(hbar=params.hbar, mass=0.5,
                                           momentum_sign=params.momentum_sign,
                                           kinetic_sign=1)).amplitudes
        grad = field.grad[0]
        grad_prime = apply_first(grad, grid.spacing, method="spectral")
        d1 = apply_first(psi.amplitudes, grid.spacing, method="spectral")
        d2 = apply_first(d1, grid.spacing, method="spectral")
        rhs = np.exp(field.gamma - field.gamma[psi.ref_point]) * (
            d2 + 2.0 * grad * d1 + (grad_prime + grad**2) * psi.amplitudes)
        add("kinetic_product_rule_spectral", _rel(lhs, rhs), 1e-9, n=grid_n)

    # constant-field recovery: scaling is the identity and both operator
    # matrices agree bit for bit
    grid = _grid(dims, min(grid_n, 32) if dims == 1 else 8)
    constant = build_field(grid, 0.7, gradient_method="central2")
    psi = random_smooth_packet(grid, seed=2)
    scaled = scale_packet(psi, constant)
    identity_error = (0.0 if scaled.amplitudes.tobytes() == psi.amplitudes.tobytes()
                      else max(float(np.max(np.abs(scaled.amplitudes - psi.amplitudes))),
                               np.finfo(float).eps))
    add("scale_identity_constant_field", identity_error, 1e-12, n=grid.n)

    potential = well_potential(grid)
    for method in ("central2", "central4", "spectral"):
        field_m = build_field(grid, 0.7, gradient_method=method)
        h_standard = build_hamiltonian(field_m, potential, params, gauge="standard")
        h_modified = build_hamiltonian(field_m, potential, params, gauge="gamma-modified")
        error = (0.0 if h_standard.tobytes() == h_modified.tobytes()
                 else max(float(np.max(np.abs(h_standard - h_modified))),
                          np.finfo(float).eps))
        add(f"hamiltonian_constant_field_bitwise_{method}", error, 1e-12, n=grid.n)

    # free particle on a tiny grid: spectrum equals the exact symbol energies
    grid8 = _grid(1, 8)
    zero = build_field(grid8, 0.0, gradient_method="spectral")
    symbol = first_derivative_symbol(grid8.n, grid8.spacing)
    exact = np.sort(-params.kinetic_sign * params.hbar**2
                    / (2.0 * params.mass) * np.abs(symbol) ** 2)
    for gauge in ("standard", "gamma-modified"):
        h = build_hamiltonian(zero, zero_potential(grid8), params, gauge=gauge)
        add(f"free_particle_exact_{gauge}",
            float(np.max(np.abs(np.real(eigen_spectrum(h)) - exact))), 1e-12, n=8)

    return checks, {}


# -------------------------------------------------------------------- spectrum


def run_spectrum(grid_n: int = 64, alpha: float = 0.3,
                 params: Optional[PhysicalParams] = None,
                 field_maker: Optional[FieldMaker] = None,
                 tol_override: Optional[float] = None):
    """Spectrum invariance of the modified Hamiltonian, with eigenvalue table."""
    params = PhysicalParams() if params is None else params
    field_maker = _default_field(alpha) if field_maker is None else field_maker
    grid = _grid(1, grid_n)
    field = field_maker(grid, "spectral")
    potential = well_potential(grid)

    h_standard = build_hamiltonian(field, potential, params, gauge="standard")
    h_modified = build_hamiltonian(field, potential, params, gauge="gamma-modified")
    e_standard, vec_standard = eigen_pairs(h_standard)
    e_modified, _ = eigen_pairs(h_modified)
    diffs = match_spectra(e_standard, e_modified)

    order = np.argsort(np.real(e_standard))
    rows = [(int(i),
             repr(float(np.real(e_standard[order[i]]))),
             repr(float(np.real(e_modified[np.argsort(np.real(e_modified))[i]]))),
             repr(float(diffs[i])))
            for i in range(len(order))]

    checks = []

    def add(name, error, tol, n=grid_n):
        checks.append(CheckResult(name, float(error),
                                  tol if tol_override is None else tol_override,
                                  grid_n=n))

    add("spectrum_invariance", np.max(diffs), 1e-8)

    # eigenvectors of the standard Hamiltonian, transported by e^{−γ}, must
    # be eigenvectors of the modified one with the same eigenvalues
    transported = np.exp(-field.gamma.ravel())[:, None] * vec_standard
    residual = h_modified @ transported - transported * np.real(e_standard)[None, :]
    norms = np.linalg.norm(transported, axis=0)
    energy_scale = max(1.0, float(np.max(np.abs(e_standard))))
    add("eigenvector_correspondence",
        np.max(np.linalg.norm(residual, axis=0) / (norms * energy_scale)), 1e-6)

    # roll-based gauges agree only to O(Δ²); check the resolved window
    grid_fine = _grid(1, 128)
    field_fine = field_maker(grid_fine, "central2")
    potential_fine = well_potential(grid_fine)
    e_std = eigen_spectrum(build_hamiltonian(field_fine, potential_fine, params,
                                             gauge="standard"))
    e_mod = eigen_spectrum(build_hamiltonian(field_fine, potential_fine, params,
                                             gauge="gamma-modified"))
    add("central_gauge_low_levels_n128",
        np.max(match_spectra(e_std, e_mod)[:8]), 1e-3, n=128)

    return checks, {"spectrum": (("index", "E_standard", "E_gamma", "abs_diff"), rows)}


# -------------------------------------------------------------------- momentum


def run_momentum(grid_n: int = 256, alpha: float = 0.3,
                 field_maker: Optional[FieldMaker] = None,
                 tol_override: Optional[float] = None):
    """Momentum-representation checks: convolution duality and trivial cases."""
    field_maker = _default_field(alpha) if field_maker is None else field_maker
    grid = _grid(1, grid_n)
    checks = []

    def add(name, error, tol, n=grid_n):
        checks.append(CheckResult(name, float(error),
                                  tol if tol_override is None else tol_override,
                                  grid_n=n))

    field = field_maker(grid, "spectral")
    psi = gaussian_packet(grid, mode=2)
    route_a = momentum_representation(scale_packet(psi, field), field)
    transform_gamma = np.fft.fft(np.exp(field.gamma))
    transform_psi = np.fft.fft(psi.amplitudes)
    size = grid.n
    index = (np.arange(size)[:, None] - np.arange(size)[None, :]) % size
    route_b = np.exp(-field.gamma[psi.ref_point]) * (
        transform_gamma[index] @ transform_psi) / size
    add("convolution_duality", float(np.max(np.abs(route_a - route_b))), 1e-10)

    zero = build_field(grid, 0.0, gradient_method="spectral")
    plain = np.fft.fftn(psi.amplitudes)
    rep = momentum_representation(scale_packet(psi, zero), zero)
    error = (0.0 if rep.tobytes() == plain.tobytes()
             else max(float(np.max(np.abs(rep - plain))), np.finfo(float).eps))
    add("zero_field_transform_bitwise", error, 1e-13)

    wave = plane_wave_packet(grid, modes=3)
    rep = momentum_representation(scale_packet(wave, zero), zero)
    off_bin = np.abs(rep).copy()
    peak = off_bin[3]
    off_bin[3] = 0.0
    add("plane_wave_single_bin", float(np.max(off_bin) / peak), 1e-12)

    return checks, {}


# ------------------------------------------------------------------- entangled


def _modified_kinetic_share(tensor: np.ndarray, grid: Grid, axis: int,
                            grad_component: np.ndarray, share: float,
                            method: str) -> np.ndarray:
    """(∂ + Γ·share)² along one axis — the slice oracle, batched over slices.

    Applying the 1D modified derivative to every 1D slice along ``axis`` is
    the same arithmetic as one axis-wise application on the full tensor.
    """
    dims = grid.dims
    particle = axis // dims
    n_axes = tensor.ndim
    shape = [1] * n_axes
    block = slice(particle * dims, (particle + 1) * dims)
    gamma_shape = list(shape)
    for k in range(*block.indices(n_axes)):
        gamma_shape[k] = grid.n
    grad = (grad_component * share).reshape(gamma_shape)
    once = apply_first(tensor, grid.spacing, axis=axis, method=method) + grad * tensor
    return apply_first(once, grid.spacing, axis=axis, method=method) + grad * once


def run_entangled(grid_n: int = 32, dims: int = 1, alpha: float = 0.3,
                  n_particles: int = 3, refs: str = "distinct",
                  params: Optional[PhysicalParams] = None,
                  field_maker: Optional[FieldMaker] = None,
                  dump_state: bool = False,
                  tol_override: Optional[float] = None):
    """n-particle scaling and operator checks on a shared 1D grid."""
    if dims != 1:
        raise ContractError("the entangled suite runs on one-dimensional grids")
    params = PhysicalParams() if params is None else params
    field_maker = _default_field(alpha) if field_maker is None else field_maker
    grid = _grid(dims, grid_n)
    field = field_maker(grid, "central2")
    checks = []
    tables = {}

    def add(name, error, tol, n=None, grid_points=grid_n):
        checks.append(CheckResult(name, float(error),
                                  tol if tol_override is None else tol_override,
                                  grid_n=grid_points, n_particles=n))

    def bit_error(a: np.ndarray, b: np.ndarray) -> float:
        if a.tobytes() == b.tobytes():
            return 0.0
        return max(float(np.max(np.abs(a - b))), np.finfo(float).eps)

    if refs not in ("distinct", "equal"):
        raise ContractError(f"refs must be 'distinct' or 'equal', got {refs!r}")
    point_x = (grid_n // 8,) * dims
    point_y = (5 * grid_n // 8,) * dims
    pair_refs = ((point_x, point_x) if refs == "equal" else (point_x, point_y))

    # --- scaled Slater states stay exactly antisymmetric
    slater = slater_state(random_smooth_packet(grid, seed=21, ref_point=pair_refs[0]),
                          random_smooth_packet(grid, seed=22, ref_point=pair_refs[1]))
    scaled_slater = scale_entangled(slater, field)
    swapped = exchange(scaled_slater, 0, 1)
    add("slater_antisymmetry_scaled",
        float(np.max(np.abs(swapped.amplitudes + scaled_slater.amplitudes))),
        1e-12, n=2)

    # --- reductions: n = 1 is the single-particle path, bit for bit
    packet = random_smooth_packet(grid, seed=23, ref_point=point_x)
    one = scale_entangled(product_state([packet]), field)
    add("scaling_reduction_n1_bitwise",
        bit_error(one.amplitudes, scale_packet(packet, field).amplitudes), 1e-12, n=1)

    # --- reductions: the mean-field scaling factorizes into per-particle shares
    for count in range(2, min(n_particles, 3) + 1):
        packets = [random_smooth_packet(grid, seed=30 + j, ref_point=(j,) * dims)
                   for j in range(count)]
        scaled_product = scale_entangled(product_state(packets), field)
        share = field.with_gamma_scaled(1.0 / count)
        factors = None
        for p in packets:
            part = scale_packet(p, share).amplitudes
            factors = part if factors is None else np.multiply.outer(factors, part)
        add(f"scaling_factorization_n{count}",
            float(np.max(np.abs(scaled_product.amplitudes - factors))
                  / np.max(np.abs(factors))), 1e-12, n=count)

    # --- the mean field on the diagonal equals the one-particle field
    diag_error = 0.0
    for count in (2, 3):
        rho = multi_rho(field, [point_y] * count)
        diag_error = max(diag_error, abs(rho - field.gamma[point_y]))
    add("geometric_mean_diagonal", diag_error, 1e-12, n=3)

    # --- changing reference points is a single global factor
    report = coalesce_check(slater, field, (point_x, point_y), (point_x, point_x))
    add("coalescence_global_factor", report.max_rel_deviation, 1e-12, n=2)

    # --- per-particle kinetic terms against 1D slice oracles, O(Δ²)
    def slice_residual(points: int, count: int, method: str) -> float:
        g = _grid(dims, points)
        f = field_maker(g, method)
        packets = [gaussian_packet(g, mode=1 + j) for j in range(count)]
        state = product_state(packets)
        scaled = scale_entangled(state, f)
        envelope = np.exp(rho_exponent(f, count) - f.gamma[(0,) * dims])
        worst = 0.0
        for j in range(count):
            mass = 1.0 + j
            out = kinetic_apply_particle(scaled, j, mass, f, params, method).amplitudes
            coeff = params.kinetic_sign * params.hbar**2 / (2.0 * mass)
            total = None
            for axis in scaled.particle_axes(j):
                term = _modified_kinetic_share(state.amplitudes, g, axis,
                                               f.grad[axis % dims], 1.0 / count, method)
                total = term if total is None else total + term
            oracle = envelope * (coeff * total)
            worst = max(worst, float(np.max(np.abs(out - oracle))
                                     / np.max(np.abs(out))))
        return worst

    for count in range(2, min(n_particles, 3) + 1):
        residuals = [slice_residual(p, count, "central2")
                     for p in (grid_n // 2, grid_n, 2 * grid_n)]
        orders = [np.log2(residuals[i] / residuals[i + 1]) for i in range(2)]
        add(f"kinetic_slice_oracle_order_n{count}",
            abs(float(np.mean(orders)) - 2.0), 0.2, n=count, grid_points=2 * grid_n)
        add(f"kinetic_slice_oracle_spectral_n{count}",
            slice_residual(grid_n, count, "spectral"), 1e-10, n=count)

    # --- n = 1 kinetic reduces to the single-particle operator, bit for bit
    single_scaled = scale_packet(packet, field)
    one_kinetic = kinetic_apply_n(one, field, ParticleMasses((1.0,)), params)
    add("kinetic_reduction_n1_bitwise",
        bit_error(one_kinetic.amplitudes,
                  kinetic_apply(single_scaled, field, params).amplitudes), 1e-12, n=1)

    # --- total momentum two-path comparison, O(Δ²) in the roll-based backend
    def momentum_residual(points: int, method: str) -> float:
        g = _grid(dims, points)
        f = field_maker(g, method)
        packets = [gaussian_packet(g, mode=1), gaussian_packet(g, mode=2)]
        state = product_state(packets)
        scaled = scale_entangled(state, f)
        lhs = total_momentum_apply(scaled, f, params, method).amplitudes
        envelope = np.exp(rho_exponent(f, 2) - f.gamma[(0,) * dims])
        total = None
        for axis in range(scaled.amplitudes.ndim):
            d1 = apply_first(state.amplitudes, g.spacing, axis=axis, method=method)
            particle = axis // dims
            shape = [1] * scaled.amplitudes.ndim
            for k in range(particle * dims, (particle + 1) * dims):
                shape[k] = g.n
            grad = (f.grad[axis % dims] / 2.0).reshape(shape)
            term = d1 + grad * state.amplitudes
            total = term if total is None else total + term
        rhs = envelope * (params.momentum_sign * 1j * params.hbar * total)
        return _rel(lhs, rhs)

    if n_particles >= 2:
        residuals = [momentum_residual(p, "central2")
                     for p in (grid_n // 2, grid_n, 2 * grid_n)]
        orders = [np.log2(residuals[i] / residuals[i + 1]) for i in range(2)]
        add("momentum_two_path_order_n2", abs(float(np.mean(orders)) - 2.0), 0.2,
            n=2, grid_points=2 * grid_n)
        add("momentum_two_path_spectral_n2", momentum_residual(grid_n, "spectral"),
            1e-10, n=2)

    # --- equal masses commute with particle exchange
    masses = ParticleMasses((1.3, 1.3))
    k_swap = exchange(kinetic_apply_n(scaled_slater, field, masses, params), 0, 1)
    swap_k = kinetic_apply_n(exchange(scaled_slater, 0, 1), field, masses, params)
    add("exchange_commutation", _rel(k_swap.amplitudes, swap_k.amplitudes), 1e-12, n=2)

    if dump_state and n_particles <= 2 and grid_n <= 64 and dims == 1:
        flat = scaled_slater.amplitudes.ravel()
        rows = [(int(i), repr(float(z.real)), repr(float(z.imag)))
                for i, z in enumerate(flat)]
        tables["entangled_state"] = (("flat_index", "re", "im"), rows)

    return checks, tables


SUITE_RUNNERS = {
    "axioms": run_axioms,
    "single": run_single,
    "spectrum": run_spectrum,
    "momentum": run_momentum,
    "entangled": run_entangled,
}

"""Tests for scaled packets, Γ-modified operators, and gauge similarity."""

import numpy as np
import pytest

from scaleqm.derivatives import apply_first, first_derivative_symbol
from scaleqm.errors import ContractError, GridMismatchError, ResourceLimitError
from scaleqm.scaling_field import Grid, build_field, preset_field
from scaleqm.single_particle import (
    PhysicalParams,
    PotentialField,
    WavePacket,
    build_hamiltonian,
    cosine_potential,
    delta_packet,
    eigen_pairs,
    eigen_spectrum,
    gaussian_packet,
    kinetic_apply,
    match_spectra,
    momentum_apply,
    momentum_representation,
    plane_wave_packet,
    positive_sign_params,
    random_smooth_packet,
    scale_packet,
    well_potential,
    zero_potential,
)


def grid1d(n=64, length=2 * np.pi):
    return Grid(1, n, length / n)


def as_scaled(packet):
    """Re-tag amplitudes as 'scaled' so operators accept them directly."""
    return WavePacket(packet.amplitudes, packet.grid, ref_point=packet.ref_point, scaled=True)


class TestPhysicalParams:
    def test_defaults_standard_convention(self):
        p = PhysicalParams()
        assert (p.momentum_sign, p.kinetic_sign) == (-1, -1)

    def test_positive_sign_params(self):
        p = positive_sign_params(hbar=2.0, mass=3.0)
        assert (p.momentum_sign, p.kinetic_sign) == (1, 1)
        assert (p.hbar, p.mass) == (2.0, 3.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            PhysicalParams(hbar=0.0)
        with pytest.raises(ValueError):
            PhysicalParams(mass=-1.0)
        with pytest.raises(ValueError):
            PhysicalParams(momentum_sign=2)


class TestPotentials:
    def test_zero(self):
        v = zero_potential(grid1d(16))
        assert np.all(v.values == 0.0) and v.is_real

    def test_well_shape(self):
        grid = grid1d(128)
        v = well_potential(grid, depth=5.0)
        assert np.min(v.values) == pytest.approx(0.0, abs=1e-6)
        assert np.max(v.values) <= 5.0 + 1e-9
        assert np.argmin(v.values) == 64  # centered at L/2

    def test_cosine(self):
        grid = grid1d(32)
        v = cosine_potential(grid, height=2.0)
        assert v.values[0] == pytest.approx(0.0)
        assert np.max(v.values) == pytest.approx(2.0)

    def test_validation(self):
        with pytest.raises(GridMismatchError):
            PotentialField(np.zeros(9), grid1d(8))
        with pytest.raises(ValueError):
            PotentialField(np.full(8, np.nan), grid1d(8))


class TestWavePacket:
    def test_packet_presets_normalized(self):
        grid = grid1d(128)
        for packet in (
            gaussian_packet(grid),
            gaussian_packet(grid, mode=3),
            plane_wave_packet(grid, 2),
            delta_packet(grid, 5),
            random_smooth_packet(grid, seed=7),
        ):
            assert abs(packet.norm() - 1.0) < 1e-12

    def test_norm_contract(self):
        grid = grid1d(8)
        with pytest.raises(ContractError):
            WavePacket(np.ones(8), grid, normalized=True)
        WavePacket(np.ones(8), grid)  # no declaration, no check

    def test_plane_wave_single_bin(self):
        grid = grid1d(64)
        packet = plane_wave_packet(grid, 5)
        spectrum = np.abs(np.fft.fft(packet.amplitudes))
        assert np.argmax(spectrum) == 5
        spectrum[5] = 0.0
        assert np.max(spectrum) < 1e-10

    def test_delta_is_single_point(self):
        grid = grid1d(16)
        packet = delta_packet(grid, at=3)
        assert packet.amplitudes[3] == 1.0 / np.sqrt(grid.spacing)
        assert np.count_nonzero(packet.amplitudes) == 1

    def test_random_smooth_deterministic(self):
        grid = grid1d(32)
        a = random_smooth_packet(grid, seed=42)
        b = random_smooth_packet(grid, seed=42)
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)

    def test_validation(self):
        with pytest.raises(GridMismatchError):
            WavePacket(np.ones(9), grid1d(8))
        with pytest.raises(ValueError):
            WavePacket(np.full(8, np.inf), grid1d(8))

    def test_ref_point_default_and_wrap(self):
        grid = grid1d(8)
        assert WavePacket(np.ones(8), grid).ref_point == (0,)
        assert WavePacket(np.ones(8), grid, ref_point=11).ref_point == (3,)


class TestScalePacket:
    def test_zero_field_identity_bits(self):
        grid = grid1d(64)
        psi = gaussian_packet(grid, mode=2)
        field = build_field(grid, 0.0)
        out = scale_packet(psi, field)
        assert out.amplitudes.tobytes() == psi.amplitudes.tobytes()
        assert out.scaled

    @pytest.mark.parametrize("method", ["central2", "central4", "spectral"])
    def test_constant_field_identity_bits(self, method):
        grid = grid1d(32)
        psi = random_smooth_packet(grid, seed=3)
        field = preset_field(grid, "constant", gradient_method=method, kappa=0.7)
        out = scale_packet(psi, field)
        assert out.amplitudes.tobytes() == psi.amplitudes.tobytes()

    def test_pointwise_oracle(self):
        grid = grid1d(32)
        psi = gaussian_packet(grid, ref_point=5)
        field = preset_field(grid, "linear-periodic", alpha=0.4)
        out = scale_packet(psi, field)
        expected = np.array(
            [np.exp(field.gamma[i] - field.gamma[5]) * psi.amplitudes[i] for i in range(32)]
        )
        np.testing.assert_allclose(out.amplitudes, expected, rtol=1e-15)

    def test_double_scale_rejected(self):
        grid = grid1d(16)
        field = preset_field(grid, "sine")
        once = scale_packet(gaussian_packet(grid), field)
        with pytest.raises(ContractError):
            scale_packet(once, field)

    def test_grid_mismatch(self):
        field = preset_field(grid1d(16), "sine")
        with pytest.raises(GridMismatchError):
            scale_packet(gaussian_packet(grid1d(32)), field)


class TestMomentumApply:
    def test_plane_wave_eigenstate(self):
        grid = grid1d(64)
        field = build_field(grid, 0.0, gradient_method="spectral")
        k = 2 * np.pi * 3 / grid.length
        psi = as_scaled(plane_wave_packet(grid, 3))
        out = momentum_apply(psi, field, PhysicalParams())
        # default sign: p = −iħ∂, so the plane wave has momentum +ħk
        np.testing.assert_allclose(out.amplitudes, k * psi.amplitudes, atol=1e-13)
        out_pos = momentum_apply(psi, field, positive_sign_params())
        np.testing.assert_allclose(out_pos.amplitudes, -k * psi.amplitudes, atol=1e-13)

    def test_unscaled_rejected(self):
        grid = grid1d(16)
        field = preset_field(grid, "sine")
        with pytest.raises(ContractError):
            momentum_apply(gaussian_packet(grid), field, PhysicalParams())

    def test_open_window_linear_gamma(self):
        # γ = 0.5·z entered as a table; away from the wrap seam the gradient
        # is exactly 0.5, and for ψ = e^{iz} with the +iħ∂ convention
        # (p + iħΓ)ψ = (−1 + 0.5i)ψ.
        grid = grid1d(64)
        ramp = 0.5 * grid.axis_coordinates()
        field = build_field(grid, ramp, gradient_method="central2")
        interior = slice(1, 63)
        np.testing.assert_allclose(field.grad[0][interior], 0.5, atol=1e-12)
        psi = as_scaled(plane_wave_packet(grid, 1))
        params = positive_sign_params()
        route = momentum_apply(psi, field, params, method="spectral").amplitudes
        route = route + 1j * params.hbar * field.grad[0] * psi.amplitudes
        expected = (-1.0 + 0.5j) * psi.amplitudes
        np.testing.assert_allclose(route[interior], expected[interior], atol=1e-12)

    def test_product_rule_spectral(self):
        grid = grid1d(128)
        field = preset_field(grid, "sine", gradient_method="spectral", alpha=0.3)
        params = PhysicalParams()
        psi = gaussian_packet(grid, mode=2)
        lhs = momentum_apply(scale_packet(psi, field), field, params).amplitudes
        prefactor = np.exp(field.gamma - field.gamma[psi.ref_point])
        gamma_term = params.momentum_sign * 1j * params.hbar * field.grad[0] * psi.amplitudes
        rhs = prefactor * (momentum_apply(as_scaled(psi), field, params).amplitudes + gamma_term)
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_product_rule_central_order(self):
        params = PhysicalParams()
        errs = []
        for n in (64, 128, 256):
            grid = grid1d(n)
            field = preset_field(grid, "sine", gradient_method="central2", alpha=0.3)
            psi = gaussian_packet(grid, mode=1)
            lhs = momentum_apply(scale_packet(psi, field), field, params).amplitudes
            prefactor = np.exp(field.gamma - field.gamma[psi.ref_point])
            gamma_term = params.momentum_sign * 1j * params.hbar * field.grad[0] * psi.amplitudes
            rhs = prefactor * (
                momentum_apply(as_scaled(psi), field, params).amplitudes + gamma_term
            )
            errs.append(np.max(np.abs(lhs - rhs)))
        orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        assert np.all((1.8 < orders) & (orders < 2.2))


class TestKineticApply:
    def test_plane_wave_eigenstate(self):
        grid = grid1d(64)
        field = build_field(grid, 0.0, gradient_method="spectral")
        k = 2 * np.pi * 4 / grid.length
        psi = as_scaled(plane_wave_packet(grid, 4))
        out = kinetic_apply(psi, field, PhysicalParams())
        np.testing.assert_allclose(out.amplitudes, 0.5 * k**2 * psi.amplitudes, atol=1e-12)
        out_pos = kinetic_apply(psi, field, positive_sign_params())
        np.testing.assert_allclose(out_pos.amplitudes, -0.5 * k**2 * psi.amplitudes, atol=1e-12)

    def test_gamma_identity_spectral(self):
        # ∂²(e^γψ) = e^γ(∂² + 2Γ∂ + (∂Γ) + Γ²)ψ, all pieces spectral
        grid = grid1d(128)
        field = preset_field(grid, "sine", gradient_method="spectral", alpha=0.1)
        psi = gaussian_packet(grid, mode=1)
        params = PhysicalParams(mass=0.5, kinetic_sign=1)  # bare Σ∂²
        lhs = kinetic_apply(scale_packet(psi, field), field, params).amplitudes
        dz = grid.spacing
        d1 = apply_first(psi.amplitudes, dz, method="spectral")
        d2 = apply_first(d1, dz, method="spectral")
        gamma_prime = field.grad[0]
        gamma_second = apply_first(gamma_prime, dz, method="spectral")
        inner = d2 + 2.0 * gamma_prime * d1 + (gamma_second + gamma_prime**2) * psi.amplitudes
        rhs = np.exp(field.gamma - field.gamma[psi.ref_point]) * inner
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_gamma_identity_central_order(self):
        errs = []
        params = PhysicalParams(mass=0.5, kinetic_sign=1)
        for n in (64, 128, 256):
            grid = grid1d(n)
            field = preset_field(grid, "sine", gradient_method="central2", alpha=0.1)
            psi = gaussian_packet(grid, mode=1)
            lhs = kinetic_apply(scale_packet(psi, field), field, params).amplitudes
            dz = grid.spacing
            d1 = apply_first(psi.amplitudes, dz, method="central2")
            d2 = apply_first(d1, dz, method="central2")
            gamma_prime = field.grad[0]
            gamma_second = apply_first(gamma_prime, dz, method="central2")
            inner = d2 + 2.0 * gamma_prime * d1 + (gamma_second + gamma_prime**2) * psi.amplitudes
            rhs = np.exp(field.gamma - field.gamma[psi.ref_point]) * inner
            errs.append(np.max(np.abs(lhs - rhs)))
        orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        assert np.all((1.7 < orders) & (orders < 2.3))

    def test_unscaled_rejected(self):
        grid = grid1d(16)
        field = preset_field(grid, "sine")
        with pytest.raises(ContractError):
            kinetic_apply(gaussian_packet(grid), field, PhysicalParams())


class TestHamiltonian:
    @pytest.mark.parametrize("method", ["central2", "central4", "spectral"])
    def test_constant_gamma_bit_identical(self, method):
        grid = grid1d(32)
        field = preset_field(grid, "constant", gradient_method=method, kappa=0.7)
        v = well_potential(grid)
        params = PhysicalParams()
        h_std = build_hamiltonian(field, v, params, gauge="standard")
        h_mod = build_hamiltonian(field, v, params, gauge="gamma-modified")
        assert h_std.tobytes() == h_mod.tobytes()

    def test_free_particle_spectrum_exact(self):
        grid = grid1d(8)
        field = preset_field(grid, "sine", gradient_method="spectral", alpha=0.3)
        params = PhysicalParams()
        v = zero_potential(grid)
        expected = np.sort(0.5 * np.abs(first_derivative_symbol(8, grid.spacing)) ** 2)
        for gauge in ("standard", "gamma-modified"):
            h = build_hamiltonian(field, v, params, gauge=gauge)
            values = eigen_spectrum(h)
            np.testing.assert_allclose(values.real, expected, atol=1e-12)
            assert np.max(np.abs(values.imag)) < 1e-12

    def test_well_spectrum_invariance_spectral(self):
        grid = grid1d(64)
        field = preset_field(grid, "sine", gradient_method="spectral", alpha=0.3)
        v = well_potential(grid)
        params = PhysicalParams()
        e_std = eigen_spectrum(build_hamiltonian(field, v, params, gauge="standard"))
        e_mod = eigen_spectrum(build_hamiltonian(field, v, params, gauge="gamma-modified"))
        assert np.max(match_spectra(e_std, e_mod)) < 1e-8

    def test_eigenvector_correspondence(self):
        grid = grid1d(64)
        field = preset_field(grid, "sine", gradient_method="spectral", alpha=0.3)
        v = well_potential(grid)
        params = PhysicalParams()
        h_std = build_hamiltonian(field, v, params, gauge="standard")
        h_mod = build_hamiltonian(field, v, params, gauge="gamma-modified")
        values, vectors = eigen_pairs(h_std)
        mapped = np.exp(-field.gamma)[:, None] * vectors
        residual = h_mod @ mapped - mapped * values[None, :]
        scale = max(1.0, float(np.max(np.abs(values))))
        rel = np.linalg.norm(residual, axis=0) / (np.linalg.norm(mapped, axis=0) * scale)
        assert np.max(rel) < 1e-6

    def test_central_similarity_improves_with_resolution(self):
        # literal D + diag(Γ) is similar to D only up to O(Δ²); the gap on a
        # fixed set of low, well-resolved levels must shrink under refinement
        gaps = []
        for n in (32, 64, 128):
            grid = grid1d(n)
            field = preset_field(grid, "sine", gradient_method="central2", alpha=0.3)
            v = well_potential(grid)
            params = PhysicalParams()
            e_std = eigen_spectrum(build_hamiltonian(field, v, params, gauge="standard"))
            e_mod = eigen_spectrum(build_hamiltonian(field, v, params, gauge="gamma-modified"))
            gaps.append(np.max(match_spectra(e_std, e_mod)[:8]))
        assert gaps[0] / gaps[1] > 3.0
        assert gaps[1] / gaps[2] > 3.0
        assert gaps[2] < 1e-3

    def test_two_dimensional_invariance(self):
        grid = Grid(2, 8, 2 * np.pi / 8)
        field = preset_field(grid, "sine", gradient_method="spectral", alpha=0.2)
        v = cosine_potential(grid, height=1.0)
        params = PhysicalParams()
        e_std = eigen_spectrum(build_hamiltonian(field, v, params, gauge="standard"))
        e_mod = eigen_spectrum(build_hamiltonian(field, v, params, gauge="gamma-modified"))
        assert np.max(match_spectra(e_std, e_mod)) < 1e-10

    def test_size_cap(self):
        grid = Grid(1, 8192, 0.001)
        field = build_field(grid, 0.0)
        with pytest.raises(ResourceLimitError):
            build_hamiltonian(field, zero_potential(grid), PhysicalParams())

    def test_bad_gauge(self):
        grid = grid1d(8)
        field = build_field(grid, 0.0)
        with pytest.raises(ValueError):
            build_hamiltonian(field, zero_potential(grid), PhysicalParams(), gauge="radiation")


class TestEigenSpectrum:
    def test_diagonal(self):
        values = eigen_spectrum(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(values, [1.0, 2.0, 3.0])

    def test_symmetric_2x2(self):
        values = eigen_spectrum(np.array([[0.0, 1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(values, [-1.0, 1.0])

    def test_hermitian_complex(self):
        h = np.array([[2.0, 1 - 1j], [1 + 1j, 3.0]])
        values = eigen_spectrum(h)
        assert np.all(values.imag == 0.0)

    def test_nonsymmetric_sorted(self):
        values = eigen_spectrum(np.array([[2.0, 1.0], [0.0, 1.0]]))
        np.testing.assert_allclose(values, [1.0, 2.0], atol=1e-14)

    def test_non_square(self):
        with pytest.raises(ContractError):
            eigen_spectrum(np.ones((2, 3)))


class TestMomentumRepresentation:
    def test_requires_scaled(self):
        grid = grid1d(16)
        field = build_field(grid, 0.0)
        with pytest.raises(ContractError):
            momentum_representation(gaussian_packet(grid), field)

    def test_zero_field_plain_dft(self):
        grid = grid1d(64)
        field = build_field(grid, 0.0)
        psi = gaussian_packet(grid, mode=3)
        out = momentum_representation(scale_packet(psi, field), field)
        np.testing.assert_array_equal(out, np.fft.fft(psi.amplitudes))

    def test_plane_wave_bin(self):
        grid = grid1d(64)
        field = build_field(grid, 0.0)
        psi = plane_wave_packet(grid, 7)
        out = np.abs(momentum_representation(scale_packet(psi, field), field))
        assert np.argmax(out) == 7

    def test_convolution_duality(self):
        grid = grid1d(256)
        field = preset_field(grid, "sine", alpha=0.2)
        psi = gaussian_packet(grid, ref_point=3)
        route_a = momentum_representation(scale_packet(psi, field), field)
        f_gamma = np.fft.fft(np.exp(field.gamma))
        f_psi = np.fft.fft(psi.amplitudes)
        n = grid.n
        idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
        convolution = f_gamma[idx] @ f_psi  # direct O(N²) circular convolution
        route_b = np.exp(-field.gamma[psi.ref_point]) * convolution / n
        assert np.max(np.abs(route_a - route_b)) < 1e-10


class TestMatchSpectra:
    def test_real_sorted(self):
        gaps = match_spectra(np.array([3.0, 1.0, 2.0]), np.array([1.1, 2.1, 3.1]))
        np.testing.assert_allclose(gaps, [0.1, 0.1, 0.1])

    def test_complex_greedy(self):
        a = np.array([1 + 1j, 5 - 2j, 0.0])
        b = np.array([5 - 2j + 1e-6, 1e-6j, 1 + 1j - 1e-6])
        gaps = match_spectra(a, b)
        assert np.max(gaps) < 2e-6

    def test_size_mismatch(self):
        with pytest.raises(ContractError):
            match_spectra(np.ones(3), np.ones(4))

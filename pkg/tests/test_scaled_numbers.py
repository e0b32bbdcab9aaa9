"""Tests for scale-labelled numbers and cross-scale projected operations."""

import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from scaleqm.errors import InvalidScaleError, NotAMemberError
from scaleqm.scaled_numbers import (
    NaturalSubset,
    ScaledNumber,
    StructureScale,
    corresponding_number,
    natural_subset_value,
    project_conj,
    project_div,
    project_mul,
    rescale_value,
    scale_value,
    value_map,
)

# Sampling strategy: magnitudes log-uniform in [0.1, 10], uniform phase.
# Keeps operands away from 0 and infinity so relative-error checks stay sharp.


def _annulus(mag_lo=0.1, mag_hi=10.0):
    return st.builds(
        lambda m, ph: cmath.rect(m, ph),
        st.floats(min_value=np.log10(mag_lo), max_value=np.log10(mag_hi)).map(lambda e: 10.0**e),
        st.floats(min_value=-np.pi, max_value=np.pi),
    )


complex_values = _annulus()
scales = _annulus()

RTOL = 1e-12


def _close(a, b, rtol=RTOL):
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1.0)


class TestScaleValidation:
    def test_zero_scale_rejected(self):
        with pytest.raises(InvalidScaleError):
            StructureScale(0.0)
        with pytest.raises(InvalidScaleError):
            scale_value(0)

    def test_nonfinite_scale_rejected(self):
        for bad in (float("inf"), float("nan"), complex(1, float("inf"))):
            with pytest.raises(InvalidScaleError):
                scale_value(bad)

    def test_scale_coercion(self):
        assert scale_value(2) == 2 + 0j
        assert scale_value(StructureScale(1j)) == 1j
        assert scale_value(-3.5) == -3.5 + 0j


class TestValueMap:
    def test_frozen_examples(self):
        # Element with canonical coordinate 6 has value 3 at scale 2.
        b = ScaledNumber(6.0)
        assert value_map(b, 2.0) == 3.0
        # ... and value 6 at the reference scale.
        assert value_map(b, 1.0) == 6.0
        # Complex scale: 6 / (2j) = -3j.
        assert value_map(b, 2j) == -3j

    def test_zero_fixed_point_exact(self):
        zero = ScaledNumber(0.0)
        for c in (1.0, 2.0, 0.5j, -3.7, 1 + 1j):
            assert value_map(zero, c) == 0.0
            assert zero.rescale(c).value() == 0.0

    @given(b=complex_values, c=scales, d=scales)
    def test_cross_scale_identity(self, b, c, d):
        # d * v_d(b) == c * v_c(b): both recover the canonical coordinate.
        elem = ScaledNumber(b)
        assert _close(d * value_map(elem, d), c * value_map(elem, c))

    @given(b=complex_values, c=scales)
    def test_rescale_preserves_canonical(self, b, c):
        elem = ScaledNumber(b).rescale(c)
        assert elem.canonical == complex(b)
        assert _close(elem.value(), b / c)


class TestRescaleValue:
    def test_frozen_example(self):
        # v_d = 1+1j at d = 2j read at c = 1: (2j/1)*(1+1j) = -2+2j.
        assert rescale_value(1 + 1j, 2j, 1.0) == -2 + 2j

    @given(a=complex_values, c=scales, d=scales)
    def test_roundtrip(self, a, c, d):
        assert _close(rescale_value(rescale_value(a, d, c), c, d), a)

    @given(a=complex_values, c=scales, d=scales)
    def test_consistent_with_value_map(self, a, c, d):
        elem = corresponding_number(a, d, c)
        assert _close(value_map(elem, c), rescale_value(a, d, c))
        assert _close(value_map(elem, d), a)


class TestCorrespondingNumber:
    def test_frozen_example(self):
        # The element whose value is 1 at scale 2 has canonical coordinate 2.
        elem = corresponding_number(1.0, 2.0, 1.0)
        assert elem.canonical == 2.0
        assert elem.scale.value == 1.0
        assert elem.value() == 2.0

    @given(a=complex_values, d=scales)
    def test_identity_when_scales_match(self, a, d):
        elem = corresponding_number(a, d, d)
        assert _close(elem.value(), a)


class TestProjectedOperations:
    def test_frozen_mul(self):
        # Scale-2 product of values 2 and 3 seen at scale 1: (1/2)*2*3 = 3.
        assert project_mul(2.0, 3.0, 2.0, 1.0) == 3.0

    def test_frozen_div(self):
        # Scale-2 quotient 6/3 seen at scale 1: (2/1)*(6/3) = 4.
        assert project_div(6.0, 3.0, 2.0, 1.0) == 4.0

    def test_frozen_conj(self):
        # Real scales: plain conjugation weighted by d/c.
        assert project_conj(1 + 2j, 2.0, 1.0) == 2 * (1 - 2j)

    def test_projected_identity_element(self):
        # 1_d has value d/c at scale c and must be neutral for project_mul.
        d, c = 3.0, 2.0
        one_d = rescale_value(1.0, d, c)
        assert _close(project_mul(one_d, 5 - 2j, d, c), 5 - 2j)

    def test_div_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            project_div(1.0, 0.0, 2.0, 1.0)
        with pytest.raises(ZeroDivisionError):
            project_div(np.ones(3), np.array([1.0, 0.0, 2.0]), 2.0, 1.0)

    def test_array_operands(self):
        s = np.array([1.0, 2.0, 3.0])
        t = np.array([4.0, 5.0, 6.0])
        got = project_mul(s, t, 2.0, 1.0)
        np.testing.assert_allclose(got, 0.5 * s * t)

    @given(s=complex_values, t=complex_values, c=scales, d=scales)
    def test_mul_commutes(self, s, t, c, d):
        assert _close(project_mul(s, t, d, c), project_mul(t, s, d, c))

    @given(s=complex_values, t=complex_values, u=complex_values, c=scales, d=scales)
    def test_mul_associates(self, s, t, u, c, d):
        lhs = project_mul(project_mul(s, t, d, c), u, d, c)
        rhs = project_mul(s, project_mul(t, u, d, c), d, c)
        assert _close(lhs, rhs)

    @given(s=complex_values, t=complex_values, u=complex_values, c=scales, d=scales)
    def test_mul_distributes(self, s, t, u, c, d):
        lhs = project_mul(s, t + u, d, c)
        rhs = project_mul(s, t, d, c) + project_mul(s, u, d, c)
        # t + u may cancel; normalise by the size of the separate terms.
        term = max(abs(project_mul(s, t, d, c)), abs(project_mul(s, u, d, c)), 1.0)
        assert abs(lhs - rhs) <= RTOL * term

    @given(s=complex_values, t=complex_values, c=scales, d=scales)
    def test_div_inverts_mul(self, s, t, c, d):
        assert _close(project_div(project_mul(s, t, d, c), t, d, c), s)
        assert _close(project_mul(project_div(s, t, d, c), t, d, c), s)

    @given(s=complex_values, c=scales, d=scales)
    def test_conj_consistent_with_base(self, s, c, d):
        # Projected conjugate agrees with conjugating the underlying element
        # in canonical coordinates and reading the result back at scale c,
        # weighted by the same d/c factor the definition prescribes.
        assert _close(project_conj(s, d, c), (d / c) * s.conjugate())

    @given(s=complex_values, d=st.floats(min_value=0.1, max_value=10.0),
           c=st.floats(min_value=0.1, max_value=10.0))
    def test_conj_involution_real_scales(self, s, d, c):
        # For real scale ratios the projected conjugation composed with the
        # inverse projection is an involution on values.
        once = project_conj(s, d, c)
        back = project_conj(rescale_value(once, c, d), d, c)
        assert _close(rescale_value(back, c, d), s)


class TestNaturalSubsets:
    def test_membership(self):
        n2 = NaturalSubset(2)
        assert 0 in n2 and 2 in n2 and 10 in n2
        assert 1 not in n2 and 3 not in n2 and -2 not in n2

    def test_value_of(self):
        assert NaturalSubset(2).value_of(6) == 3
        assert NaturalSubset(1).value_of(6) == 6
        with pytest.raises(NotAMemberError):
            NaturalSubset(2).value_of(3)

    def test_bad_stride(self):
        with pytest.raises(ValueError):
            NaturalSubset(0)
        with pytest.raises(ValueError):
            NaturalSubset(-1)

    def test_frozen_example(self):
        # j=2 inside N_2 ⊆ N_1: position 1 in N_2, position 2 in N_1.
        assert natural_subset_value(2, 2, 1) == (1, 2)

    def test_nested_positions_consistent(self):
        # m * pos_m == n * pos_n == j exactly, for a spread of cases.
        for j, m, n in [(0, 4, 2), (12, 4, 2), (12, 6, 3), (30, 15, 5), (8, 8, 1)]:
            pos_m, pos_n = natural_subset_value(j, m, n)
            assert m * pos_m == j
            assert n * pos_n == j

    def test_not_nested(self):
        with pytest.raises(NotAMemberError):
            natural_subset_value(6, 3, 2)  # N_3 is not inside N_2

    def test_not_member(self):
        with pytest.raises(NotAMemberError):
            natural_subset_value(5, 2, 1)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torofree.errors import DomainError, StructureError
from torofree.polyalg import (
    Poly,
    VarId,
    deg_in,
    divides,
    poly_arith,
    shift_difference,
    shift_sigma,
    shift_tau,
    try_divide,
)

L, N = 2, 2
H1 = Poly.H(L, N, 1)
H2 = Poly.H(L, N, 2)
D1 = Poly.d(L, N, 1)
D2 = Poly.d(L, N, 2)


def rationals():
    return st.fractions(max_numerator=50, max_denominator=9)


@st.composite
def polys(draw, l=L, n=N, max_deg=4, max_terms=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = [0] * (l + n)
        for _ in range(draw(st.integers(0, max_deg))):
            exp[draw(st.integers(0, l + n - 1))] += 1
        coeff = draw(st.integers(-9, 9))
        terms[tuple(exp)] = terms.get(tuple(exp), 0) + coeff
    return Poly(l, n, {e: Fraction(c) for e, c in terms.items()})


class TestArithmetic:
    def test_additive_inverse(self):
        assert (H1 + (-H1)).is_zero()

    def test_difference_of_squares(self):
        assert (H1 + 1) * (H1 - 1) == H1 * H1 - 1

    def test_rational_cancellation(self):
        assert poly_arith("scale", D1.scale(3), Fraction(2, 3)) == 2 * D1

    def test_dispatch(self):
        assert poly_arith("add", H1, H2) == H1 + H2
        assert poly_arith("sub", H1, 1) == H1 - 1
        assert poly_arith("mul", H1, D1) == H1 * D1
        with pytest.raises(StructureError):
            poly_arith("pow", H1, 2)

    def test_rank_mismatch(self):
        with pytest.raises(StructureError):
            H1 + Poly.H(1, 1, 1)

    @given(polys(), polys(), polys())
    @settings(max_examples=60, deadline=None)
    def test_ring_laws(self, p, q, r):
        assert p + q == q + p
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r

    @given(polys(), polys())
    @settings(max_examples=40, deadline=None)
    def test_canonical_form(self, p, q):
        # p - q == 0 iff the term maps agree
        assert ((p - q).is_zero()) == (p.terms == q.terms)


class TestShifts:
    def test_sigma_square(self):
        assert shift_sigma(1, 1, H1 * H1) == H1 * H1 - 2 * H1 + 1

    def test_sigma_identity(self):
        p = H1 * D2 + 3
        assert shift_sigma(1, 0, p) == p

    def test_sigma_fixes_other_variables(self):
        assert shift_sigma(1, -1, H2 * D1) == H2 * D1

    def test_tau_square(self):
        assert shift_tau((1, 0), D1 * D1) == (D1 - 1) * (D1 - 1)

    def test_tau_identity(self):
        p = H1 * D1 - D2
        assert shift_tau((0, 0), p) == p

    def test_tau_componentwise(self):
        assert shift_tau((2, -1), D1 + D2) == (D1 - 2) + (D2 + 1)

    def test_tau_length_check(self):
        with pytest.raises(StructureError):
            shift_tau((1,), D1)

    @given(polys(), polys(), st.integers(-3, 3), st.integers(1, L))
    @settings(max_examples=40, deadline=None)
    def test_sigma_is_ring_map(self, p, q, k, i):
        assert shift_sigma(i, k, p + q) == shift_sigma(i, k, p) + shift_sigma(i, k, q)
        assert shift_sigma(i, k, p * q) == shift_sigma(i, k, p) * shift_sigma(i, k, q)

    @given(polys(), st.integers(-3, 3), st.integers(1, L))
    @settings(max_examples=40, deadline=None)
    def test_sigma_invertible(self, p, k, i):
        assert shift_sigma(i, -k, shift_sigma(i, k, p)) == p

    @given(polys(), st.integers(-2, 2), st.integers(-2, 2))
    @settings(max_examples=40, deadline=None)
    def test_shifts_commute(self, p, k, m):
        a = shift_sigma(1, k, shift_tau((m, 0), p))
        b = shift_tau((m, 0), shift_sigma(1, k, p))
        assert a == b
        c = shift_sigma(2, m, shift_sigma(1, k, p))
        d = shift_sigma(1, k, shift_sigma(2, m, p))
        assert c == d


class TestDegrees:
    def test_deg_of_zero_is_minus_one(self):
        assert deg_in(VarId("H", 1), Poly.zero(L, N)) == -1

    def test_deg_reads_exponent(self):
        assert deg_in(VarId("H", 1), H1 * H1 * D1 + 3) == 2

    def test_deg_absent_variable(self):
        assert deg_in(VarId("d", 2), H1) == 0

    def test_power_minus_id_drops_degree(self):
        out = shift_difference("power_minus_id", 1, 1, H1 * H1)
        assert out == -2 * H1 + 1

    def test_difference_power_kills_low_degree(self):
        assert shift_difference("difference_power", 3, 1, H1 * H1).is_zero()

    def test_difference_power_zero_is_identity(self):
        p = H1 * D1 + 5
        assert shift_difference("difference_power", 0, 1, p) == p

    def test_power_minus_id_rejects_zero(self):
        with pytest.raises(DomainError):
            shift_difference("power_minus_id", 0, 1, H1)


class TestTextForm:
    def test_example_round_trip(self):
        text = "3/2*H1^2*d1 - d2 + 5"
        p = Poly.parse(text, 1, 2)
        assert p.text() == text

    def test_zero(self):
        assert Poly.zero(L, N).text() == "0"
        assert Poly.parse("0", L, N).is_zero()

    def test_bad_literals(self):
        for bad in ("H0", "q1", "H1^^2", "", "1 +", "H1^-2"):
            with pytest.raises(StructureError):
                Poly.parse(bad, L, N)

    @given(polys())
    @settings(max_examples=60, deadline=None)
    def test_round_trip(self, p):
        assert Poly.parse(p.text(), L, N) == p

    @given(polys())
    @settings(max_examples=30, deadline=None)
    def test_deterministic_order(self, p):
        # serialization is unique: rebuilt values print identically
        q = Poly(L, N, dict(reversed(list(p.terms.items()))))
        assert q.text() == p.text()


class TestDivision:
    def test_exact(self):
        p = (H1 - 2) * (H2 + D1)
        assert try_divide(p, H1 - 2) == H2 + D1

    def test_not_divisible(self):
        assert try_divide(H1 * H1 + 1, H1) is None

    @given(polys(), polys())
    @settings(max_examples=40, deadline=None)
    def test_product_always_divides(self, p, q):
        if q.is_zero():
            return
        assert divides(q, p * q)
        if not p.is_zero():
            assert try_divide(p * q, q) == p

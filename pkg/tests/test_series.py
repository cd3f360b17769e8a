from fractions import Fraction

import pytest

from saitobasis.errors import NoRationalRoot, NotAUnit, NotMultiple, NotYGeneral, PrecisionExhausted
from saitobasis.series import (
    INF,
    BiSeries,
    TSeries,
    exact_divide,
    format_bivariate,
    format_univariate,
    parse_biseries,
    parse_tseries,
    pullback,
    rational_root,
    weierstrass_divide,
    y_general_shear,
)


def bi(text, n=12):
    return parse_biseries(text, n)


class TestTSeries:
    def test_padding_and_order(self):
        s = TSeries([0, 0, 3], 6)
        assert s.coeffs == (0, 0, 3, 0, 0, 0)
        assert s.order() == 2 and s.lead() == 3

    def test_zero_lead_raises(self):
        with pytest.raises(PrecisionExhausted):
            TSeries.zero(4).lead()

    def test_product_truncation_tracks_orders(self):
        a = TSeries.monomial(1, 2, 6)
        b = TSeries([1, 1], 6)
        p = a * b
        assert p.trunc == 6
        assert p.coeffs[:4] == (0, 0, 1, 1)
        # t^2 * (series known mod t^6) is known mod t^8
        assert (a * TSeries.monomial(1, 0, 6)).trunc == 6

    def test_invert(self):
        s = TSeries([1, 1], 8)
        inv = s.invert()
        assert inv.coeffs == tuple(Fraction((-1) ** k) for k in range(8))
        with pytest.raises(NotAUnit):
            TSeries([0, 1], 4).invert()

    def test_kth_root(self):
        s = TSeries([4, 4, 1], 6)  # (2 + t)^2
        r = s.kth_root(2)
        assert r.coeffs[:3] == (2, 1, 0)
        assert (r * r).agrees(s)

    def test_shift_unshift(self):
        s = TSeries([0, 0, 5, 1], 4)
        assert s.unshift(2).coeffs == (5, 1)
        assert s.unshift(2).shift(2) == s
        with pytest.raises(NotMultiple):
            s.unshift(3)

    def test_derivative(self):
        assert TSeries([1, 2, 3], 3).derivative().coeffs == (2, 6)

    def test_getitem_beyond_truncation(self):
        with pytest.raises(PrecisionExhausted):
            TSeries([1], 2)[5]

    def test_format(self):
        assert format_univariate(TSeries([0, 1, 0, Fraction(-1, 3)], 4)) == "t - 1/3*t^3"


class TestBiSeries:
    def test_constructor_drops_truncated_terms(self):
        s = BiSeries({(3, 0): 1, (0, 1): 2}, 2)
        assert s.terms == {(0, 1): 2}

    def test_order_and_parts(self):
        s = bi("y^2 - x^3 + x*y")
        assert s.order() == 2
        assert s.homogeneous_part(2) == {(1, 1): 1, (0, 2): 1}
        assert s.y_degree() == 2 and s.degree() == 3

    def test_product_truncation(self):
        # known to min(trunc_a + ord b, trunc_b + ord a), never beyond the larger input
        f = bi("x + y", 5)
        assert (f * bi("x^2", 3)).trunc == 4
        assert (f * bi("x^2", 5)).trunc == 5
        assert (bi("x^3", 4) * bi("1 + x", 2)).trunc == 4

    def test_partials(self):
        f = bi("y^3 - x^10 + x^8*y", 20)
        assert f.partial("x") == bi("-10*x^9 + 8*x^7*y", 19)
        assert f.partial("y") == bi("3*y^2 + x^8", 19)
        with pytest.raises(ValueError):
            f.partial("z")

    def test_invert(self):
        u = bi("1 + x - 2*y", 10)
        assert (u * u.invert()).truncate(10) == BiSeries.const(1, 10)
        with pytest.raises(NotAUnit):
            bi("x + y").invert()

    def test_shear_roundtrip(self):
        f = bi("x^2 + x*y - y^3")
        assert f.shear(3).shear(-3) == f

    def test_restrict_and_split(self):
        f = bi("y^2 + x*y + x^3 + 1")
        assert f.restrict_y0().coeffs[:4] == (1, 0, 0, 1)
        low, high = f.split_y(1)
        assert low == bi("x^3 + 1") and high == bi("y + x", 11)

    def test_divide_monomial(self):
        assert bi("x^2*y + x^3").divide_monomial(2, 0) == BiSeries(bi("y + x").terms, 10)
        with pytest.raises(NotMultiple):
            bi("x*y + y").divide_monomial(1, 0)

    def test_coeff_beyond_truncation(self):
        with pytest.raises(PrecisionExhausted):
            bi("x", 3).coeff(2, 2)

    def test_format(self):
        assert format_bivariate(bi("y^3 - x^10 + x^8*y")) == "y^3 + x^8*y - x^10"


class TestDivision:
    def test_weierstrass(self):
        f = bi("y^2 - x^3", 14)
        g = bi("y^3 + x*y + 1", 14)
        q, r = weierstrass_divide(g, f)
        assert r.y_degree() < 2
        assert ((q * f + r) - g).truncate(12).is_zero()

    def test_weierstrass_needs_y_general(self):
        with pytest.raises(NotYGeneral):
            weierstrass_divide(bi("y"), bi("x*y"))

    def test_shear_choice(self):
        assert y_general_shear(bi("y^2 - x^3")) == 0
        c = y_general_shear(bi("x*y"))
        assert c != 0 and bi("x*y").shear(c).coeff(0, 2) != 0

    def test_exact_divide(self):
        f = bi("y^2 - x^3", 16)
        g = bi("(y^2 - x^3)*(1 + x*y - y^5)", 16)
        assert exact_divide(g, f).agrees(bi("1 + x*y - y^5", 16), 14)

    def test_exact_divide_series_quotient(self):
        f = bi("x*y", 12)
        g = bi("x*y*(1 + x)", 12) * bi("1 - y", 12).invert()
        q = exact_divide(g, f)
        assert (q * f - g).truncate(12).is_zero()

    def test_exact_divide_not_multiple(self):
        with pytest.raises(NotMultiple):
            exact_divide(bi("y"), bi("y^2 - x^3"))


class TestRoots:
    def test_rational_root(self):
        assert rational_root(Fraction(27, 8), 3) == Fraction(3, 2)
        assert rational_root(-8, 3) == -2
        with pytest.raises(NoRationalRoot):
            rational_root(2, 2)
        with pytest.raises(NoRationalRoot):
            rational_root(-4, 2)


class TestPullback:
    def test_cusp_vanishes(self):
        f = bi("y^2 - x^3", 10)
        assert pullback(f, parse_tseries("t^2", 20), parse_tseries("t^3", 20)).is_zero()

    def test_orders(self):
        h = bi("x*y + y^2", 10)
        p = pullback(h, parse_tseries("t^3", 30), parse_tseries("t^10", 30))
        assert p.order() == 13

    def test_zero_series_order_is_inf(self):
        assert TSeries.zero(5).order() is INF

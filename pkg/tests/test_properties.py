"""Property tests for structural invariants, each checked against a brute-force oracle."""

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from saitobasis.curve import Semigroup, min_dio_solutions, valuation
from saitobasis.forms import exterior_d, form_valuation
from saitobasis.invariants import local_quotient_dim, milnor, tjurina
from saitobasis.saito import make_basis, saito_basis
from saitobasis.series import INF, BiSeries, TSeries, format_bivariate, parse_biseries

from conftest import branch_factory, family_text

fracs = st.fractions(min_value=-9, max_value=9, max_denominator=5)
terms = st.dictionaries(st.tuples(st.integers(0, 6), st.integers(0, 6)), fracs, max_size=10)
PROPS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _stored_ok(s: BiSeries):
    return all(i + j < s.trunc and c != 0 and isinstance(c, Fraction) for (i, j), c in s.terms.items())


@PROPS
@given(terms, terms, st.integers(0, 9), st.integers(0, 9))
def test_biseries_storage_invariants(ta, tb, na, nb):
    a, b = BiSeries(ta, na), BiSeries(tb, nb)
    for s in (a, b, a + b, a - b, a * b, a.partial("x"), -a):
        assert _stored_ok(s)
    o = a.order()
    if o is INF:
        assert not a.terms
    else:
        assert o == min(i + j for i, j in a.terms)


@PROPS
@given(st.lists(fracs, max_size=10), st.integers(0, 10))
def test_tseries_storage_invariants(cs, n):
    s = TSeries(cs, n)
    assert len(s.coeffs) == n
    assert all(isinstance(c, Fraction) and c.denominator > 0 for c in s.coeffs)
    o = s.order()
    nz = [k for k, c in enumerate(cs[:n]) if c]
    assert o == (nz[0] if nz else INF)


@PROPS
@given(terms)
def test_format_parse_round_trip(t):
    s = BiSeries(t, 14)
    assert parse_biseries(format_bivariate(s), 14) == s


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(st.sampled_from(["x", "y", "1", "2", "3/2", "-1"]))
    op = draw(st.sampled_from(["+", "-", "*", "^"]))
    left = draw(expressions(depth=depth - 1))
    if op == "^":
        return f"({left})^{draw(st.integers(0, 3))}"
    right = draw(expressions(depth=depth - 1))
    return f"({left}) {op} ({right})"


@PROPS
@given(expressions())
def test_parser_agrees_with_sympy(text):
    x, y = sympy.symbols("x y")
    poly = sympy.Poly(sympy.sympify(text.replace("^", "**")), x, y)
    want = {m: Fraction(int(c.p), int(c.q)) for m, c in zip(poly.monoms(), poly.coeffs()) if c != 0}
    assert parse_biseries(text, 40).terms == want


def _members_brute(gens, bound):
    member = [False] * (bound + 1)
    member[0] = True
    for v in range(1, bound + 1):
        member[v] = any(v >= g and member[v - g] for g in gens)
    return member


gen_sets = st.lists(st.integers(2, 13), min_size=2, max_size=4).filter(lambda g: math.gcd(*g) == 1)


@PROPS
@given(gen_sets)
def test_semigroup_against_brute_force(gens):
    s = Semigroup.from_gens(gens)
    bound = max(gens) * min(gens) + max(gens)
    member = _members_brute(gens, bound)
    assert all(s.contains(v) == member[v] for v in range(bound + 1))
    c = s.conductor
    assert all(member[v] for v in range(c, bound + 1))
    assert c == 0 or not member[c - 1]
    assert math.gcd(*s.gens) == 1
    for g in s.gens:
        others = [h for h in s.gens if h != g]
        assert not _members_brute(others, g)[g] if others else True
    assert list(s.gaps) == [v for v in range(c) if not member[v]]


def _dio_brute(vl, vr, gens):
    g0, g1 = gens
    box = max(gens) + abs(vl - vr) + 2
    sols = []
    for a0 in range(box):
        for a1 in range(box):
            for b0 in range(box):
                rest = a0 * g0 + a1 * g1 + vl - vr - b0 * g0
                if rest >= 0 and rest % g1 == 0:
                    sols.append(((a0, a1), (b0, rest // g1)))

    def dominates(p, q):
        return all(u >= v for u, v in zip(p[0] + p[1], q[0] + q[1]))

    return {p for p in sols if not any(q != p and dominates(p, q) for q in sols)}


@settings(max_examples=80, deadline=None)
@given(st.tuples(st.integers(2, 7), st.integers(3, 11)).filter(lambda g: g[0] < g[1] and math.gcd(*g) == 1),
       st.integers(0, 15), st.integers(0, 15))
def test_min_dio_solutions_against_brute_force(gens, vl, vr):
    s = Semigroup.from_gens(gens)
    sols = min_dio_solutions(vl, vr, s)
    for d in sols:
        assert sum(a * g for a, g in zip(d.alpha, s.gens)) + vl == sum(b * g for b, g in zip(d.beta, s.gens)) + vr
    assert {(d.alpha, d.beta) for d in sols} == _dio_brute(vl, vr, s.gens)
    assert sols == sorted(sols, key=lambda d: (d.value, d.alpha, d.beta))


@pytest.fixture(scope="module")
def family_branch():
    return branch_factory(family_text(3, 10, 2), "t^3", "t^10 - 1/3*t^14")(90)


@settings(max_examples=150, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 3)), st.integers(-4, 4).filter(bool), min_size=1, max_size=5))
def test_form_valuation_of_exact_form(family_branch, t):
    t.pop((0, 0), None)
    h = BiSeries(t, 12)
    v = valuation(h, family_branch)
    if v is INF or v == 0:
        return
    assert form_valuation(exterior_d(h), family_branch) == v


@pytest.fixture(scope="module")
def family_basis():
    text = family_text(3, 10, 2)
    b = saito_basis(parse_biseries(text, 80), branch_factory(text, "t^3", "t^10 - 1/3*t^14"))
    T = 16
    return make_basis(b.omega1.truncate(T), b.omega2.truncate(T), b.f.truncate(T))


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[st.integers(-5, 5)] * 4).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0))
def test_cofactor_ideal_invariant_under_basis_change(family_basis, mat):
    b = family_basis
    a, c, d, e = (Fraction(v) for v in mat)
    nb = make_basis(b.omega1 * a + b.omega2 * c, b.omega1 * d + b.omega2 * e, b.f)
    assert local_quotient_dim([nb.h1, nb.h2]) == local_quotient_dim([b.h1, b.h2]) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(3, 7), st.dictionaries(st.tuples(st.integers(1, 4), st.integers(1, 3)), st.integers(-3, 3).filter(bool), max_size=3))
def test_tau_at_most_mu(a, bexp, extra):
    f = BiSeries({(0, a): Fraction(1), (bexp, 0): Fraction(1)}, 40)
    # only terms of weighted degree above y^a + x^b keep the singularity isolated
    f = f + BiSeries({k: Fraction(v) for k, v in extra.items() if k[0] * a + k[1] * bexp > a * bexp}, 40)
    assert tjurina(f) <= milnor(f) == (a - 1) * (bexp - 1)

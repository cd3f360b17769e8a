"""Saito bases: extraction from syzygies, closed forms and composites."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BadParams,
    CrossCheckFailed,
    DegenerateA,
    HypothesisFailed,
    MembershipFailed,
    NoBasisFound,
    NotMember,
    NotMultiple,
)
from .forms import OneForm, exterior_d, pair_cofactor, saito_membership, wedge
from .series import INF, BiSeries, TSeries, exact_divide
from .stdbasis import _combine, row_coefficients, standard_basis


@dataclass
class SaitoBasis:
    """``omega1 ^ omega2 = u f dx^dy`` with ``u`` a unit; ``omega_i ^ df = h_i f``."""

    omega1: OneForm
    omega2: OneForm
    u: BiSeries
    h1: BiSeries
    h2: BiSeries
    f: BiSeries
    sources: tuple = (None, None)
    scales: tuple = (Fraction(1), Fraction(1))

    @property
    def normalization(self):
        return self.scales[0] * self.scales[1]

    @property
    def normalized_constant(self):
        """``u(0)`` after dividing each form by its recorded scale."""
        return self.u.constant() / self.normalization

    @property
    def trunc(self):
        return min(self.omega1.trunc, self.omega2.trunc)


def make_basis(omega1, omega2, f, sources=(None, None), scales=(Fraction(1), Fraction(1))):
    """Verify Saito's criterion for a pair and compute its cofactors."""
    try:
        u = exact_divide(wedge(omega1, omega2), f)
    except NotMultiple as e:
        raise NoBasisFound(f"wedge is not a multiple of f: {e}") from None
    if not u.is_unit():
        raise NoBasisFound("wedge quotient is not a unit")
    try:
        h1 = saito_membership(omega1, f).h
        h2 = saito_membership(omega2, f).h
    except NotMember as e:
        raise MembershipFailed(str(e)) from None
    return SaitoBasis(omega1, omega2, u, h1, h2, f, sources, scales)


# ---------------------------------------------------------------------------
# Saito basis from standard-basis syzygies


@dataclass
class SyzygyRow:
    coeffs: dict
    source: tuple
    scale: Fraction = Fraction(1)


@dataclass
class Candidate:
    form: OneForm
    source: tuple
    scale: Fraction
    cofactor: BiSeries
    valuation: object


@dataclass
class CandidateSet:
    forms: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.forms)

    def __len__(self):
        return len(self.forms)


def syzygy_rows(res):
    """One row per recorded S-process; rows of new elements include ``-1`` on it."""
    rows = []
    ctx = res.context
    for rec in res.records:
        coeffs = row_coefficients(rec, ctx)
        if rec.new_element is not None:
            n = rec.new_element
            one = BiSeries.const(1, ctx.n_form)
            coeffs[n] = coeffs[n] - one if n in coeffs else -one
        rows.append(SyzygyRow(coeffs, rec.source, rec.b))
    return rows


def candidate_forms(rows, res):
    """Forms ``sum C_i eta_i`` of the rows, verified members, zeros dropped."""
    out = CandidateSet()
    T = res.trusted
    f = res.f
    for row in rows:
        form = _combine(row.coeffs, res.elements, res.n_form).truncate(T)
        if form.is_zero():
            continue
        try:
            h = saito_membership(form, f).h
        except NotMember as e:
            raise MembershipFailed(f"candidate {row.source} is not logarithmic: {e}") from None
        val = res.branch.pullback(h).order() if not h.is_zero() else INF
        out.forms.append(Candidate(form, row.source, row.scale, h, val))
    return out


def _screen(w1, w2, f):
    """Cheap test: lowest part of the wedge proportional to the initial form of f."""
    n = f.order()
    lo = wedge(w1.truncate(n + 1), w2.truncate(n + 1))
    fn = f.homogeneous_part(n)
    part = lo.homogeneous_part(n)
    if not part:
        return False
    (i, j), c = next(iter(fn.items()))
    r = part.get((i, j), 0) / c
    if r == 0:
        return False
    return all(part.get(k, 0) == r * v for k, v in fn.items()) and len(part) == len(fn)


def select_saito_pair(G: CandidateSet, f) -> SaitoBasis:
    """First pair satisfying the criterion, with a scalar-combination fallback.

    Pairs are tried lexicographically in generation order of the candidates.
    """
    for c1, c2 in itertools.combinations(G.forms, 2):
        if not _screen(c1.form, c2.form, f):
            continue
        try:
            return make_basis(c1.form, c2.form, f, (c1.source, c2.source), (c1.scale, c2.scale))
        except NoBasisFound:
            continue
    coeffs = (0, 1, -1, 2, -2)
    forms = [c.form for c in G.forms]
    vecs = [v for v in itertools.product(coeffs, repeat=len(forms)) if any(v)]
    for v1, v2 in itertools.combinations(vecs, 2):
        w1 = _lin(v1, forms)
        w2 = _lin(v2, forms)
        if not _screen(w1, w2, f):
            continue
        try:
            return make_basis(w1, w2, f, (("combination", v1), ("combination", v2)))
        except NoBasisFound:
            continue
    raise NoBasisFound("no pair of candidates satisfies Saito's criterion")


def _lin(vec, forms):
    out = None
    for c, w in zip(vec, forms):
        if c:
            out = w * c if out is None else out + w * c
    return out


def saito_basis(f, branch_at, precision=None, rule="newest") -> SaitoBasis:
    """Saito basis of an irreducible germ from its standard basis; ``rule`` picks reduction steps."""
    probe = branch_at(8)
    if probe.multiplicity == 1:
        return closed_form_basis("regular", {"f": f})
    res = standard_basis(f, branch_at, precision, rule=rule)
    return select_saito_pair(candidate_forms(syzygy_rows(res), res), res.f.truncate(res.trusted + f.order() + 1))


def express_in_basis(w: OneForm, basis: SaitoBasis):
    """``(q1, q2)`` with ``w = q1 omega1 + q2 omega2``."""
    f = basis.f
    try:
        saito_membership(w, f)
    except NotMember as e:
        raise MembershipFailed(str(e)) from None
    n1 = pair_cofactor(w, basis.omega1, f).h
    n2 = pair_cofactor(w, basis.omega2, f).h
    uinv = basis.u.invert()
    return n2 * uinv, -(n1 * uinv)


# ---------------------------------------------------------------------------
# closed forms


def quasi_weights(f: BiSeries):
    """Positive integer weights ``(wx, wy, d)`` making ``f`` weighted homogeneous."""
    from math import gcd

    exps = list(f.terms)
    if not exps:
        raise BadParams("zero polynomial")
    candidates = set()
    (i0, j0) = exps[0]
    for i, j in exps[1:]:
        di, dj = i - i0, j - j0
        if di * dj >= 0:
            raise BadParams("not weighted homogeneous with positive weights")
        wx, wy = abs(dj), abs(di)
        g = gcd(wx, wy)
        candidates.add((wx // g, wy // g))
    if len(candidates) > 1:
        raise BadParams("not weighted homogeneous")
    wx, wy = candidates.pop() if candidates else (1, 1)
    return wx, wy, wx * i0 + wy * j0


def closed_form_basis(kind, params) -> SaitoBasis:
    """Saito bases known in closed form.

    ``regular``: ``{"f"}`` (optionally ``"g"``); basis ``{df, f dg}``.
    ``quasihomogeneous``: ``{"f"}`` (optionally ``"weights"``); basis
    ``{wx x dy - wy y dx, df}``.
    ``multiplicity2``: ``{"A", "B"}`` as series in ``x`` with
    ``f = y^2 + A y + B``.
    """
    if kind == "regular":
        f = params["f"]
        if f.order() != 1:
            raise BadParams("regular basis needs a smooth germ")
        g = params.get("g")
        if g is None:
            g = BiSeries.y(f.trunc) if f.coeff(1, 0) else BiSeries.x(f.trunc)
        df = exterior_d(f)
        return make_basis(df, exterior_d(g) * f, f)
    if kind == "quasihomogeneous":
        f = params["f"]
        if "weights" in params:
            wx, wy = params["weights"]
        else:
            wx, wy, _ = quasi_weights(f)
        n = f.trunc
        w1 = OneForm(BiSeries.monomial(-wy, 0, 1, n), BiSeries.monomial(wx, 1, 0, n))
        return make_basis(w1, exterior_d(f), f)
    if kind == "multiplicity2":
        return _multiplicity2(params)
    raise BadParams(f"unknown closed form {kind!r}")


def _as_tseries(s, trunc):
    if isinstance(s, TSeries):
        return s.truncate(trunc) if s.trunc > trunc else TSeries(s.coeffs, trunc)
    if isinstance(s, BiSeries):
        if any(j for (_, j) in s.terms):
            raise BadParams("coefficient must depend on x only")
        return TSeries.from_dict({i: c for (i, _), c in s.terms.items()}, trunc)
    return TSeries.from_dict({0: Fraction(s)}, trunc)


def _multiplicity2(params):
    n = params.get("trunc", 40)
    A = _as_tseries(params.get("A", 0), n)
    B = _as_tseries(params["B"], n)
    D = (A * A * Fraction(1, 4) - B).truncate(n)
    k = D.order()
    if k is INF:
        raise BadParams("discriminant vanishes: f is not reduced")
    unit = D.unshift(k)
    logd = (unit.derivative().shift(1) * unit.invert()).truncate(n - k)  # x u'/u
    m = n - k
    kk = TSeries.from_dict({0: k}, m)
    coef = BiSeries.from_x_series(kk + logd, m)
    half_a = BiSeries.from_x_series(A * Fraction(1, 2), m)
    xa = BiSeries.from_x_series(A.derivative().shift(1), m)
    y = BiSeries.y(m)
    f = (y * y + y * BiSeries.from_x_series(A, m) + BiSeries.from_x_series(B, m)).truncate(m)
    w1 = OneForm(-(coef * (y + half_a) - xa), BiSeries.monomial(2, 1, 0, m))
    basis = make_basis(w1, exterior_d(f), f)
    expected = coef * -2
    if not (basis.u - expected).truncate(m - 2).is_zero():
        raise CrossCheckFailed("criterion unit differs from -2(k + x u'/u)")
    return basis


# ---------------------------------------------------------------------------
# composites


def _split(W, f2, R):
    """``W = H f2 + R``; uses the caller's ``R`` when given."""
    if R is None:
        from .series import weierstrass_divide, y_general_shear

        c = y_general_shear(f2)
        if c == 0:
            _, R = weierstrass_divide(W, f2)
        else:
            _, r = weierstrass_divide(W.shear(c), f2.shear(c))
            R = r.shear(-c)
    try:
        exact_divide(W - R, f2)
    except NotMultiple:
        raise HypothesisFailed("supplied remainder does not differ from the wedge by a multiple of f2") from None
    if not _initial_divides(f2, R):
        return R
    try:
        exact_divide(R, f2)
    except NotMultiple:
        return R
    raise HypothesisFailed("remainder lies in the ideal of f2")


def _initial_divides(d: BiSeries, g: BiSeries):
    """Necessary condition for ``g`` in ``<d>``: initial forms divide."""
    if g.is_zero():
        return True
    nd, ng = d.order(), g.order()
    if ng < nd:
        return False
    ind = BiSeries(d.homogeneous_part(nd), ng + 1)
    ing = BiSeries(g.homogeneous_part(ng), ng + 1)
    from .series.core import _polynomial_quotient

    return _polynomial_quotient(ing, ind) is not None


def _monomial_of(s: BiSeries):
    if len(s.terms) != 1:
        return None
    (i, j), c = next(iter(s.terms.items()))
    return i, j, c


def _derive_bezout(R1, R2, f2):
    """``S1, S2, G`` for monomial remainders."""
    m1, m2 = _monomial_of(R1), _monomial_of(R2)
    if m1 is None or m2 is None:
        raise HypothesisFailed("cofactors S1, S2, G must be supplied for non-monomial remainders")
    gi, gj = min(m1[0], m2[0]), min(m1[1], m2[1])
    n = f2.trunc
    G = BiSeries.monomial(1, gi, gj, n)
    r1 = (m1[0] - gi, m1[1] - gj, m1[2])
    r2 = (m2[0] - gi, m2[1] - gj, m2[2])
    S1, S2 = {}, {}
    for (i, j), c in f2.terms.items():
        if i >= r1[0] and j >= r1[1]:
            S1[(i - r1[0], j - r1[1])] = c / r1[2]
        elif i >= r2[0] and j >= r2[1]:
            S2[(i - r2[0], j - r2[1])] = c / r2[2]
        else:
            raise HypothesisFailed("f2 is not in the ideal of the reduced remainders")
    return BiSeries(S1, n), BiSeries(S2, n), G


def _divide_form(w, G):
    try:
        return OneForm(exact_divide(w.A, G), exact_divide(w.B, G))
    except NotMultiple:
        raise HypothesisFailed("G does not divide the combined form") from None


def basis_product(basis1: SaitoBasis, f2: BiSeries, S1=None, S2=None, G=None, R=None) -> SaitoBasis:
    """Saito basis of ``f1 f2`` from one of ``f1`` and a Bezout-type relation."""
    if f2.constant() != 0:
        raise HypothesisFailed("f2 must vanish at the origin")
    w1, w2 = basis1.omega1, basis1.omega2
    df2 = exterior_d(f2)
    R1 = _split(wedge(w1, df2), f2, None if R is None else R[0])
    R2 = _split(wedge(w2, df2), f2, None if R is None else R[1])
    if S1 is None or S2 is None or G is None:
        S1, S2, G = _derive_bezout(R1, R2, f2)
    try:
        r1, r2 = exact_divide(R1, G), exact_divide(R2, G)
    except NotMultiple:
        raise HypothesisFailed("G does not divide both remainders") from None
    try:
        v = exact_divide(S1 * r1 + S2 * r2, f2)
    except NotMultiple:
        raise HypothesisFailed("S1 R1/G + S2 R2/G is not a multiple of f2") from None
    if not v.is_unit():
        raise HypothesisFailed("S1 R1/G + S2 R2/G is not a unit multiple of f2")
    eta1 = _divide_form(w1 * R2 - w2 * R1, G)
    eta2 = w1 * S1 + w2 * S2
    return make_basis(eta1, eta2, basis1.f * f2)


def basis_times_y(basis: SaitoBasis) -> SaitoBasis:
    """Saito basis of ``y f`` from one of ``f``."""
    w1, w2 = basis.omega1, basis.omega2
    a1, a2 = w1.A.restrict_y0(), w2.A.restrict_y0()
    o1, o2 = a1.order(), a2.order()
    if o1 is INF and o2 is INF:
        raise DegenerateA("both dx-coefficients vanish on y = 0")
    if o2 < o1:
        w1, w2, a1, a2, o1, o2 = w2, w1, a2, a1, o2, o1
    alpha = o1
    c1 = BiSeries.from_x_series(a1.unshift(alpha))
    c2 = BiSeries.from_x_series(a2.unshift(alpha)) if o2 is not INF else BiSeries.zero(a1.trunc)
    eta1 = w1 * c2 - w2 * c1
    eta2 = w1 * BiSeries.y(w1.trunc + 1)
    yf = basis.f * BiSeries.y(basis.f.trunc + 1)
    return make_basis(eta1, eta2, yf)


def intersection_membership(w: OneForm, f1: BiSeries, f2: BiSeries) -> bool:
    """Membership in both factors, checked against membership in the product."""
    from .forms import is_member

    both = is_member(w, f1) and is_member(w, f2)
    prod = is_member(w, f1 * f2)
    if both != prod:
        raise CrossCheckFailed("intersection and product memberships disagree")
    return both

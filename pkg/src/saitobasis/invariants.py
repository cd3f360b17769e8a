"""Local quotient dimensions, Milnor and Tjurina numbers, GSV indices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadParams, ConductorMismatch, NotZeroDimensional, PrecisionExhausted
from .forms import residue_valuation
from .series import INF, BiSeries
from .series.kernels import sparse_axpy

DEFAULT_CAP = 192


def _col_key(mono):
    i, j = mono
    return (i + j, -i)


def _eliminate(gens, D):
    """Leading monomials (lowest in a degree order) of ``sum R g`` mod ``m^D``."""
    pivots = {}
    for g in gens:
        og = g.order()
        if og is INF or og >= D:
            continue
        for d in range(D - og):
            for a in range(d + 1):
                row = sparse_axpy({}, Fraction(1), g.terms, a, d - a, D)
                while row:
                    lead = min(row, key=_col_key)
                    piv = pivots.get(lead)
                    if piv is None:
                        c = row[lead]
                        pivots[lead] = {k: v / c for k, v in row.items()}
                        break
                    sparse_axpy(row, -row[lead], piv, 0, 0, D)
    return pivots


def quotient_dims(gens, D):
    """``dim R/(I + m^d)`` for ``d = 0..D`` from one elimination at ``D``."""
    pivots = _eliminate(gens, D)
    per_degree = [0] * D
    for i, j in pivots:
        per_degree[i + j] += 1
    dims, acc = [0], 0
    for d in range(D):
        acc += (d + 1) - per_degree[d]
        dims.append(acc)
    return dims, per_degree


def local_quotient_dim(gens, cap=DEFAULT_CAP):
    """``dim C{x,y}/<gens>``.

    The elimination stops once every monomial of some degree ``d`` is a
    leading monomial: then ``m^d`` lies in the ideal by Nakayama's lemma and
    the dimension is exact.  The dimension must also be stable over three
    consecutive degrees.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise NotZeroDimensional("zero ideal")
    if any(g.constant() != 0 for g in gens):
        return 0
    avail = min(g.trunc for g in gens)
    D = min(max(2 * min(g.order() for g in gens) + 6, 8), avail)
    while True:
        dims, per_degree = quotient_dims(gens, D)
        for d in range(D):
            if per_degree[d] == d + 1 and d + 3 <= D:
                if dims[d] == dims[d + 1] == dims[d + 2] == dims[d + 3]:
                    return dims[d]
        if D >= avail:
            raise PrecisionExhausted(f"generators known only below degree {avail}")
        if D >= cap:
            raise NotZeroDimensional(f"quotient still growing at degree {D}")
        D = min(2 * D, avail, cap)


# ---------------------------------------------------------------------------
# resultant oracle


def _poly_y(g, xval):
    """Coefficients in ``y`` (ascending) of ``g(xval, y)``."""
    deg = g.y_degree()
    out = [Fraction(0)] * (deg + 1)
    for (i, j), c in g.terms.items():
        out[j] += c * Fraction(xval) ** i
    return out


def _sylvester_det(p, q):
    """Resultant of two univariate polynomials (ascending coefficients)."""
    a, b = len(p) - 1, len(q) - 1
    n = a + b
    if n == 0:
        return Fraction(1)
    rows = []
    hp, hq = p[::-1], q[::-1]
    for k in range(b):
        rows.append([Fraction(0)] * k + hp + [Fraction(0)] * (n - k - a - 1))
    for k in range(a):
        rows.append([Fraction(0)] * k + hq + [Fraction(0)] * (n - k - b - 1))
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for r in range(c + 1, n):
            if rows[r][c]:
                fct = rows[r][c] * inv
                rows[r] = [u - fct * v for u, v in zip(rows[r], rows[c])]
    return det


def _interpolate(xs, ys):
    """Coefficients (ascending) of the interpolating polynomial (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        # out = out * (x - xs[k]) + coef[k]
        nxt = [Fraction(0)] * n
        for i in range(n - 1):
            nxt[i + 1] += out[i]
        for i in range(n):
            nxt[i] -= xs[k] * out[i]
        nxt[0] += coef[k]
        out = nxt
    return out


def resultant_in_y(g1: BiSeries, g2: BiSeries):
    """``Res_y(g1, g2)`` as ascending coefficients in ``x``."""
    a, b = g1.y_degree(), g2.y_degree()
    dx1 = max(i for i, _ in g1.terms)
    dx2 = max(i for i, _ in g2.terms)
    bound = dx1 * b + dx2 * a
    xs = list(range(bound + 1))
    ys = [_sylvester_det(_poly_y(g1, x), _poly_y(g2, x)) for x in xs]
    return _interpolate([Fraction(x) for x in xs], ys)


def resultant_intersection(g1: BiSeries, g2: BiSeries):
    """Intersection multiplicity at the origin as the x-order of the resultant.

    Valid when both polynomials are monic in ``y`` and ``g_i(0, y) = y^a_i``,
    so that every common root over ``x = 0`` sits at the origin.
    """
    for g in (g1, g2):
        a = g.y_degree()
        if g.coeff(0, a) != 1 or any(i == 0 and j != a for (i, j) in g.terms):
            raise BadParams("resultant oracle needs g(0, y) = y^a with g monic in y")
    res = resultant_in_y(g1, g2)
    for k, c in enumerate(res):
        if c:
            return k
    raise NotZeroDimensional("polynomials share a component")


# ---------------------------------------------------------------------------
# Milnor and Tjurina numbers


def milnor(f: BiSeries, semigroup=None, cap=DEFAULT_CAP):
    mu = local_quotient_dim([f.partial("x"), f.partial("y")], cap)
    if semigroup is not None and semigroup.conductor != mu:
        raise ConductorMismatch(f"conductor {semigroup.conductor} differs from Milnor number {mu}")
    return mu


def tjurina(f: BiSeries, cap=DEFAULT_CAP):
    return local_quotient_dim([f, f.partial("x"), f.partial("y")], cap)


def cofactor_intersection(basis, cap=DEFAULT_CAP):
    return local_quotient_dim([basis.h1, basis.h2], cap)


def tjurina_via_cofactors(f: BiSeries, basis, mu=None, cap=DEFAULT_CAP):
    if mu is None:
        mu = milnor(f, cap=cap)
    return mu - cofactor_intersection(basis, cap)


def gsv_indices(basis, f: BiSeries, branch):
    """Residue valuations of the two basis members along the branch."""
    return (
        residue_valuation(basis.omega1, f, branch),
        residue_valuation(basis.omega2, f, branch),
    )


def min_delta(gsv):
    finite = [v for v in gsv if v is not INF]
    return min(finite) if finite else INF


def composite_milnor(mu_list, pairwise_I):
    """``sum mu_i + 2 sum I(f_i, f_j) - r + 1``; ``pairwise_I`` maps ``(i, j)`` or is a list."""
    r = len(mu_list)
    total_i = sum(pairwise_I.values()) if isinstance(pairwise_I, dict) else sum(pairwise_I)
    return sum(mu_list) + 2 * total_i - r + 1


# ---------------------------------------------------------------------------
# classification of multiplicity at most three


def _odd(n):
    return n % 2 == 1


_CASES = {
    # case id: (parameter names, constraint, tau, defining polynomial)
    "m1": ((), lambda: True, lambda: 0, lambda: "x + y^2"),
    "m2_irreducible": (
        ("n",), lambda n: n > 2 and _odd(n), lambda n: n - 1, lambda n: f"y^2 - x^{n}"),
    "m2_transversal": ((), lambda: True, lambda: 1, lambda: "x*y"),
    "m2_tangent": (("n",), lambda n: n > 1, lambda n: 2 * n - 1, lambda n: f"y*(y - x^{n})"),
    "m3_r1_qh": (
        ("n",), lambda n: n > 3 and math.gcd(3, n) == 1, lambda n: 2 * (n - 1), lambda n: f"y^3 - x^{n}"),
    "m3_r1_case2": (
        ("m", "k"),
        lambda m, k: math.gcd(3, m) == 1 and 2 <= k <= m // 3,
        lambda m, k: 2 * m - k - 1,
        lambda m, k: f"y^3 - x^{m} + x^{m - k}*y",
    ),
    "m3_r2_case1": (
        ("n",), lambda n: n > 2 and _odd(n), lambda n: n + 2, lambda n: f"y*(x^2 - y^{n})"),
    "m3_r2_case2a": (
        ("m", "n"),
        lambda m, n: m >= 1 and 2 * m < n and _odd(n),
        lambda m, n: n + 3 * m - 1,
        lambda m, n: f"y*((y - x^{m})^2 - x^{n})",
    ),
    "m3_r2_case2bi": (
        ("n",), lambda n: n > 2 and _odd(n), lambda n: 3 * n - 2, lambda n: f"y*(y^2 - x^{n})"),
    "m3_r2_case2bii": (
        ("n", "m"),
        lambda n, m: _odd(n) and 1 <= m and 2 * m <= n - 3,
        lambda n, m: (5 * n + 2 * m - 3) // 2,
        lambda n, m: f"y*(y^2 - 2*x^{(n + 2 * m - 1) // 2}*y - x^{n} + x^{n + 2 * m - 1})",
    ),
    "m3_r3_case1": (("n",), lambda n: n >= 1, lambda n: 2 * n + 2, lambda n: f"x*y*(y - x^{n})"),
    "m3_r3_case2a": (
        ("n", "m"),
        lambda n, m: 1 < n < m,
        lambda n, m: 3 * n + 2 * m - 1,
        lambda n, m: f"y*(y - x^{n})*(y - x^{m})",
    ),
    "m3_r3_case2bi": (
        ("n",), lambda n: n > 1, lambda n: 6 * n - 2, lambda n: f"y*(y - x^{n})*(y + x^{n})"),
    "m3_r3_case2bii": (
        ("n", "k", "a"),
        lambda n, k, a: n < k < 2 * n - 1 and a != 0,
        lambda n, k, a: 4 * n + k - 1,
        lambda n, k, a: f"y*(y - x^{n})*(y + x^{n} - {Fraction(a)}*x^{k})",
    ),
}

CASE_IDS = tuple(_CASES)


def _case(case_id, params):
    try:
        names, ok, tau, poly = _CASES[case_id]
    except KeyError:
        raise BadParams(f"unknown case {case_id!r}") from None
    params = dict(params or {})
    if case_id == "m3_r3_case2bii":
        params.setdefault("a", 1)
    try:
        args = [params[n] for n in names]
    except KeyError as e:
        raise BadParams(f"case {case_id} needs parameter {e.args[0]}") from None
    return ok, tau, poly, args


def classification_tau(case_id, params=None):
    """Closed-form Tjurina number of a normal form of multiplicity at most three."""
    ok, tau, _, args = _case(case_id, params)
    if not ok(*args):
        raise BadParams(f"parameters {args} violate the constraints of {case_id}")
    return tau(*args)


def classification_polynomial(case_id, params=None):
    """Normal form of the case as an expression string."""
    _, _, poly, args = _case(case_id, params)
    return poly(*args)


# ---------------------------------------------------------------------------
# reports


@dataclass
class InvariantReport:
    mu: int
    tau: int
    lambda_gaps: list = None
    min_delta: object = None
    gsv: tuple = None
    tau_routes: dict = field(default_factory=dict)

    @property
    def routes_agree(self):
        vals = [v for v in self.tau_routes.values() if v is not None]
        return len(set(vals)) <= 1

    @property
    def consistent(self):
        ok = self.routes_agree and self.tau <= self.mu
        if self.lambda_gaps is not None:
            ok = ok and len(self.lambda_gaps) == self.mu - self.tau
        return ok


def invariant_report(f, basis=None, gaps=None, branch=None, semigroup=None, cap=DEFAULT_CAP):
    """Collect mu, tau by every available route, GSV data and Lambda gaps."""
    mu = milnor(f, semigroup, cap)
    tau = tjurina(f, cap)
    routes = {"quotient_dim": tau, "mu_minus_I": None, "berger": None}
    if basis is not None:
        routes["mu_minus_I"] = tjurina_via_cofactors(f, basis, mu, cap)
    if gaps is not None:
        routes["berger"] = mu - len(gaps)
    gsv = md = None
    if basis is not None and branch is not None:
        gsv = gsv_indices(basis, basis.f, branch)
        md = min_delta(gsv)
    return InvariantReport(mu, tau, gaps, md, gsv, routes)

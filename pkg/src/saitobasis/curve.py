"""Branches, valuations and value semigroups.

A branch is a primitive parametrization ``t -> (x(t), y(t))`` with
``ord x < ord y`` and ``ord x`` not dividing ``ord y`` (unless the branch is
smooth).  Values of functions are t-orders of pullbacks; the value semigroup
is built by an elimination that adjoins the values of reduced binomial
relations between the current representatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import chain

from .errors import (
    LiftFailed,
    NotNormalized,
    NotPrimitive,
    PrecisionExhausted,
)
from .series import INF, BiSeries, TSeries, pullback
from .series.core import _PowerCache


class Branch:
    """Validated primitive parametrization known modulo ``t^trunc``."""

    __slots__ = ("x_t", "y_t", "trunc", "multiplicity", "_powers")

    def __init__(self, x_t: TSeries, y_t: TSeries):
        self.trunc = min(x_t.trunc, y_t.trunc)
        self.x_t = x_t.truncate(self.trunc)
        self.y_t = y_t.truncate(self.trunc)
        self.multiplicity = self.x_t.order()
        self._powers = _PowerCache(self.x_t)

    def pullback(self, h: BiSeries) -> TSeries:
        return pullback(h, self.x_t, self.y_t, self._powers)

    def __repr__(self):
        return f"Branch(x={self.x_t!r}, y={self.y_t!r})"


def validate_branch(x_t: TSeries, y_t: TSeries) -> Branch:
    """Check primitivity and normalization; raises NotPrimitive/NotNormalized."""
    ox, oy = x_t.order(), y_t.order()
    if ox is INF or ox == 0 or oy == 0:
        raise NotNormalized("x(t) must be nonzero and both coordinates must vanish at t=0")
    if oy is not INF and ox >= oy:
        raise NotNormalized(f"need ord x < ord y, got {ox} and {oy}")
    if oy is not INF and ox > 1 and oy % ox == 0:
        raise NotNormalized(f"ord x = {ox} divides ord y = {oy}; change coordinates first")
    g = 0
    for k in chain(x_t.support(), y_t.support()):
        g = math.gcd(g, k)
    if g > 1:
        raise NotPrimitive(f"all exponents share the factor {g}")
    return Branch(x_t, y_t)


def valuation(h: BiSeries, b: Branch):
    """t-order of the pullback of ``h`` (``INF`` when zero to precision)."""
    return b.pullback(h).order()


def verify_incidence(f: BiSeries, b: Branch) -> bool:
    return b.pullback(f).is_zero()


def lift_parametrization(f: BiSeries, x_t: TSeries, seed_y: TSeries, trunc: int, max_steps=64):
    """Refine ``seed_y`` so that ``f(x_t, y) = 0`` modulo ``t^trunc``.

    Newton's iteration in the t-adic topology with ``x_t`` fixed.  The seed
    must already be a good enough approximation for the iteration to
    contract; otherwise LiftFailed is raised.
    """
    x_t = TSeries(x_t.coeffs, trunc) if x_t.trunc < trunc else x_t.truncate(trunc)
    y = TSeries(seed_y.coeffs, trunc) if seed_y.trunc < trunc else seed_y.truncate(trunc)
    fy = f.partial("y")
    pad = trunc + 4 * max(x_t.order(), 1) + 8
    last = -1
    for _ in range(max_steps):
        xw, yw = TSeries(x_t.coeffs, pad), TSeries(y.coeffs, pad)
        res = pullback(f, xw, yw)
        der = pullback(fy, xw, yw)
        d = der.order()
        if d is not INF and pad - d < trunc:
            # divisions by f_y(phi) lose d orders; widen the working precision
            pad = trunc + d + 8
            continue
        err = res.order()
        if err is INF or err >= trunc:
            return y
        if err <= last:
            raise LiftFailed(f"Newton step did not improve the error order ({err})")
        if d is INF or err <= d:
            raise LiftFailed("seed too far from a root: correction would not vanish at t=0")
        last = err
        corr = (res.unshift(d) * der.unshift(d).invert()).truncate(trunc)
        y = (y - corr).truncate(trunc)
    raise LiftFailed("Newton iteration did not converge")


# ---------------------------------------------------------------------------
# numerical semigroups


def _sieve(gens, bound):
    member = [False] * (bound + 1)
    member[0] = True
    for v in range(1, bound + 1):
        for g in gens:
            if g <= v and member[v - g]:
                member[v] = True
                break
    return member


@dataclass(frozen=True)
class Semigroup:
    """Numerical semigroup ``v_0 N + ... + v_g N`` with its conductor."""

    gens: tuple
    conductor: int
    gaps: tuple
    _member: tuple = field(repr=False, compare=False)

    @classmethod
    def from_gens(cls, gens):
        gens = tuple(sorted(set(int(g) for g in gens if g > 0)))
        if not gens:
            raise ValueError("empty generator list")
        if math.gcd(*gens) != 1:
            raise ValueError(f"generators {gens} have a common factor")
        if gens[0] == 1:
            return cls((1,), 0, (), (True,))
        bound = gens[0] * gens[-1]
        member = _sieve(gens, bound)
        run, c = 0, None
        for v in range(bound + 1):
            if member[v]:
                run += 1
                if run == gens[0]:
                    c = v - gens[0] + 1
                    break
            else:
                run = 0
        # minimality: drop generators representable by the smaller ones
        minimal = []
        for g in gens:
            if not minimal or not _sieve(tuple(minimal), g)[g]:
                minimal.append(g)
        gaps = tuple(v for v in range(c) if not member[v])
        return cls(tuple(minimal), c, gaps, tuple(member[: c + 1]))

    def contains(self, v):
        if v < 0:
            return False
        if v >= self.conductor:
            return True
        return self._member[v]

    __contains__ = contains

    def elements_below(self, bound):
        return [v for v in range(bound) if self.contains(v)]


def gamma_repr(v, s: Semigroup):
    """Lexicographically least exponent vector with value ``v``, or None."""
    if not s.contains(v):
        return None
    return _lex_repr(v, s.gens)


class DegreeTable:
    """Representations of semigroup values maximizing the bivariate order.

    ``degrees[i]`` is the multiplicity of the representative of generator i.
    Products of representatives chosen this way have the highest possible
    order, which keeps truncated remainders trustworthy.
    """

    def __init__(self, s: Semigroup, degrees):
        self.s = s
        self.degrees = tuple(degrees)
        self.best = [0]
        self.choice = [None]

    def _extend(self, bound):
        gens, degs = self.s.gens, self.degrees
        for w in range(len(self.best), bound + 1):
            best, choice = None, None
            for i in range(len(gens) - 1, -1, -1):
                g = gens[i]
                if g <= w and self.best[w - g] is not None:
                    cand = self.best[w - g] + degs[i]
                    if best is None or cand > best:
                        best, choice = cand, i
            self.best.append(best)
            self.choice.append(choice)

    def maxdeg(self, w):
        if w < 0:
            return None
        self._extend(w)
        return self.best[w]

    def repr(self, w):
        if w < 0 or self.maxdeg(w) is None:
            return None
        alpha = [0] * len(self.s.gens)
        while w:
            i = self.choice[w]
            alpha[i] += 1
            w -= self.s.gens[i]
        return tuple(alpha)


# ---------------------------------------------------------------------------
# Diophantine solutions


@dataclass(frozen=True)
class DioSolution:
    alpha: tuple
    beta: tuple
    value: int  # common value sum(alpha*v) + val_left

    def dominates(self, other):
        return all(a >= b for a, b in zip(self.alpha + self.beta, other.alpha + other.beta))


def min_dio_solutions(val_left, val_right, s: Semigroup):
    """Componentwise minimal ``(alpha, beta)`` with
    ``sum alpha_i v_i + val_left = sum beta_i v_i + val_right``.

    Sorted by common value, then alpha, then beta.  The search only extends
    alpha while the running difference is negative and beta while it is
    positive; a repeated difference along such a path would exhibit a
    smaller solution, which bounds the path length.
    """
    gens = s.gens
    k = len(gens)
    vmax = max(gens)
    d0 = val_left - val_right
    cap = 2 * vmax + abs(d0) + 1
    found = []
    zero = (0,) * k
    frontier = {(zero, zero)}
    seen = set(frontier)
    for _ in range(cap + 1):
        nxt = set()
        for alpha, beta in sorted(frontier):
            sol_here = any(
                all(a >= b for a, b in zip(alpha + beta, f.alpha + f.beta)) for f in found
            )
            if sol_here:
                continue
            diff = d0 + sum(a * g for a, g in zip(alpha, gens)) - sum(b * g for b, g in zip(beta, gens))
            if diff == 0:
                found.append(DioSolution(alpha, beta, sum(a * g for a, g in zip(alpha, gens)) + val_left))
                continue
            for i in range(k):
                if diff < 0 and not beta[i]:
                    a2 = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
                    st = (a2, beta)
                elif diff > 0 and not alpha[i]:
                    b2 = beta[:i] + (beta[i] + 1,) + beta[i + 1:]
                    st = (alpha, b2)
                else:
                    continue
                if st not in seen:
                    seen.add(st)
                    nxt.add(st)
        frontier = nxt
        if not frontier:
            break
    minimal = [f for f in found if not any(g is not f and f.dominates(g) for g in found)]
    minimal.sort(key=lambda f: (f.value, f.alpha, f.beta))
    return minimal


# ---------------------------------------------------------------------------
# semigroup of a branch


@dataclass
class RingBasis:
    """Representatives ``f_0 = x, f_1 = y, ...`` with prescribed values."""

    reps: list
    images: list  # pullbacks of reps
    values: list

    @property
    def degrees(self):
        return [r.order() for r in self.reps]

    def monomial(self, alpha, trunc):
        """``prod f_i^alpha_i`` as a BiSeries."""
        out = BiSeries.const(1, trunc)
        for r, a in zip(self.reps, alpha):
            if a:
                out = out * (r.truncate(trunc) ** a)
        return out.truncate(trunc)


def _binomial_relations(gens):
    """For each generator the least multiple lying in the span of the others."""
    rels = []
    for i, g in enumerate(gens):
        others = [h for j, h in enumerate(gens) if j != i]
        if not others:
            continue
        d = math.gcd(*others)
        bound = g * max(others) + d * max(others)
        member = _sieve(tuple(others), bound)
        for k in range(1, bound // g + 1):
            if member[k * g]:
                rels.append((i, k))
                break
    return rels


def _lex_repr(v, gens):
    """Lexicographically least representation over ``gens`` (any gcd)."""

    @lru_cache(maxsize=None)
    def reachable(w, idx):
        if w == 0:
            return True
        if idx == len(gens):
            return False
        g = gens[idx]
        return any(reachable(w - a * g, idx + 1) for a in range(w // g + 1))

    if not reachable(v, 0):
        return None
    alpha, w = [], v
    for idx, g in enumerate(gens):
        for a in range(w // g + 1):
            if reachable(w - a * g, idx + 1):
                alpha.append(a)
                w -= a * g
                break
    return tuple(alpha)


def semigroup_of(b: Branch, trunc_xy=None):
    """Value semigroup of the branch and representatives of its generators."""
    L = b.trunc
    v0 = b.multiplicity
    if trunc_xy is None:
        trunc_xy = max(L // max(v0, 1) + 1, 2)
    xs = BiSeries.x(trunc_xy)
    ys = BiSeries.y(trunc_xy)
    if v0 == 1:
        return Semigroup.from_gens((1,)), RingBasis([xs], [b.x_t], [1])
    v1 = b.y_t.order()
    if v1 is INF:
        raise PrecisionExhausted("y(t) vanishes to precision")
    basis = RingBasis([xs, ys], [b.x_t, b.y_t], [v0, v1])
    while True:
        gens = tuple(basis.values)
        g = math.gcd(*gens)
        cond = Semigroup.from_gens(gens).conductor if g == 1 else None
        added = False
        for i, k in _binomial_relations(gens):
            others = [j for j in range(len(gens)) if j != i]
            alpha_o = _lex_repr(k * gens[i], tuple(gens[j] for j in others))
            alpha = [0] * len(gens)
            beta = [0] * len(gens)
            alpha[i] = k
            for j, a in zip(others, alpha_o):
                beta[j] = a
            new = _reduce_relation(basis, alpha, beta, gens, cond, L, trunc_xy)
            if new is not None:
                rep, img, val = new
                basis.reps.append(rep)
                basis.images.append(img)
                basis.values.append(val)
                added = True
                break
        if not added:
            break
    if math.gcd(*basis.values) != 1:
        raise PrecisionExhausted("semigroup not resolved at this precision (increase truncation)")
    s = Semigroup.from_gens(basis.values)
    order = [basis.values.index(v) for v in s.gens]
    basis = RingBasis([basis.reps[i] for i in order], [basis.images[i] for i in order], list(s.gens))
    return s, basis


def _image_of(basis, alpha, L):
    img = TSeries.from_dict({0: 1}, L)
    for p, a in zip(basis.images, alpha):
        if a:
            img = (img * p ** a).truncate(L)
    return img


def _reduce_relation(basis, alpha, beta, gens, cond, L, trunc_xy):
    """Reduce ``prod f^alpha - c prod f^beta``; return a new generator or None."""
    pa, pb = _image_of(basis, alpha, L), _image_of(basis, beta, L)
    c = pa.lead() / pb.lead()
    h = basis.monomial(alpha, trunc_xy) - basis.monomial(beta, trunc_xy) * c
    img = (pa - pb * c).truncate(L)
    values = list(gens)
    member_bound = L
    member = _sieve(tuple(values), member_bound)
    for _ in range(L + 1):
        v = img.order()
        if v is INF:
            if cond is None:
                raise PrecisionExhausted("relation vanished to precision before the semigroup closed")
            return None
        if cond is not None and v >= cond:
            return None
        if not member[v]:
            return h, img, v
        gamma = _lex_repr(v, tuple(values))
        pg = _image_of(basis, gamma, L)
        cg = img.lead() / pg.lead()
        h = h - basis.monomial(gamma, trunc_xy) * cg
        img = (img - pg * cg).truncate(L)
    raise PrecisionExhausted("reduction did not terminate")  # pragma: no cover


def conductor_of(gens):
    return Semigroup.from_gens(gens).conductor


__all__ = [
    "Branch",
    "DegreeTable",
    "DioSolution",
    "RingBasis",
    "Semigroup",
    "gamma_repr",
    "lift_parametrization",
    "min_dio_solutions",
    "semigroup_of",
    "validate_branch",
    "valuation",
    "verify_incidence",
]

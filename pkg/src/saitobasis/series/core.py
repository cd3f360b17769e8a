"""Truncated power series over the rationals.

``TSeries`` is a dense univariate series in ``t`` known modulo ``t^trunc``;
``BiSeries`` is a sparse bivariate series in ``x, y`` known modulo the
``trunc``-th power of the maximal ideal (total degree truncation).  Both are
immutable.  "Zero" always means zero to the stored truncation order.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb

from ..errors import NoRationalRoot, NotAUnit, NotMultiple, NotYGeneral, PrecisionExhausted
from . import kernels

INF = math.inf
_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(c):
    return c if isinstance(c, Fraction) else Fraction(c)


def integer_root(n: int, k: int):
    """Exact integer ``k``-th root of ``n >= 0`` or ``None``."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k + 1)
    # Newton from above
    r = max(r, 1)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def rational_root(q, k: int) -> Fraction:
    """Exact rational ``k``-th root of ``q``; raises NoRationalRoot."""
    q = _frac(q)
    if k <= 0:
        raise ValueError("root index must be positive")
    sign = 1
    if q < 0:
        if k % 2 == 0:
            raise NoRationalRoot(f"{q} has no real {k}-th root")
        sign, q = -1, -q
    p = integer_root(q.numerator, k)
    d = integer_root(q.denominator, k)
    if p is None or d is None:
        raise NoRationalRoot(f"{q} is not a {k}-th power in Q")
    return sign * Fraction(p, d)


# ---------------------------------------------------------------------------
# univariate


class TSeries:
    """Dense series ``sum c_k t^k`` known modulo ``t^trunc``."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs=(), trunc=None):
        cs = [_frac(c) for c in coeffs]
        if trunc is None:
            trunc = len(cs)
        if trunc < 0:
            raise ValueError("negative truncation")
        if len(cs) < trunc:
            cs.extend([_ZERO] * (trunc - len(cs)))
        self.coeffs = tuple(cs[:trunc])
        self.trunc = trunc

    @classmethod
    def _raw(cls, coeffs, trunc):
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        obj.trunc = trunc
        return obj

    @classmethod
    def from_dict(cls, terms, trunc):
        cs = [_ZERO] * trunc
        for k, c in terms.items():
            if k < 0:
                raise ValueError("negative exponent")
            if k < trunc:
                cs[k] += _frac(c)
        return cls._raw(cs, trunc)

    @classmethod
    def monomial(cls, c, k, trunc):
        return cls.from_dict({k: c}, trunc)

    @classmethod
    def zero(cls, trunc):
        return cls._raw([_ZERO] * trunc, trunc)

    # -- inspection
    def order(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return INF

    def lead(self):
        k = self.order()
        if k is INF:
            raise PrecisionExhausted(f"series is zero to order {self.trunc}")
        return self.coeffs[k]

    def is_zero(self):
        return not any(self.coeffs)

    def __getitem__(self, k):
        if k >= self.trunc:
            raise PrecisionExhausted(f"coefficient t^{k} beyond truncation {self.trunc}")
        return self.coeffs[k] if k >= 0 else _ZERO

    def support(self):
        return [k for k, c in enumerate(self.coeffs) if c]

    def _eff_order(self):
        k = self.order()
        return self.trunc if k is INF else k

    # -- arithmetic
    def truncate(self, n):
        n = min(n, self.trunc)
        return TSeries._raw(self.coeffs[:n], n)

    def __add__(self, other):
        if not isinstance(other, TSeries):
            other = TSeries.from_dict({0: other}, self.trunc)
        n = min(self.trunc, other.trunc)
        return TSeries._raw([a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n)

    __radd__ = __add__

    def __neg__(self):
        return TSeries._raw([-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            c = _frac(other)
            return TSeries._raw([c * a for a in self.coeffs], self.trunc)
        la, lb = self.trunc, other.trunc
        n = min(max(la, lb), la + other._eff_order(), lb + self._eff_order())
        a, b = list(self.coeffs), list(other.coeffs)
        # the sparser factor goes outside: the kernel skips its zeros
        if sum(1 for c in a if c) > sum(1 for c in b if c):
            a, b = b, a
        return TSeries._raw(kernels.dense_mul(a, b, n), n)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.invert() ** (-e)
        result = TSeries.from_dict({0: 1}, self.trunc)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k):
        """Multiply by ``t^k``."""
        return TSeries._raw([_ZERO] * k + list(self.coeffs), self.trunc + k)

    def unshift(self, k):
        """Divide by ``t^k``; the first ``k`` coefficients must vanish."""
        if k > self.trunc:
            raise PrecisionExhausted("cannot divide beyond truncation")
        if any(self.coeffs[:k]):
            raise NotMultiple(f"series not divisible by t^{k}")
        return TSeries._raw(self.coeffs[k:], self.trunc - k)

    def derivative(self):
        n = max(self.trunc - 1, 0)
        return TSeries._raw([k * self.coeffs[k] for k in range(1, self.trunc)], n)

    def invert(self):
        a = self.coeffs
        if not self.trunc or not a[0]:
            raise NotAUnit("constant term is zero")
        inv0 = 1 / a[0]
        b = [inv0]
        for n in range(1, self.trunc):
            s = _ZERO
            for k in range(1, n + 1):
                if a[k]:
                    s += a[k] * b[n - k]
            b.append(-inv0 * s)
        return TSeries._raw(b, self.trunc)

    def kth_root(self, k):
        """The series ``r`` with ``r^k = self`` and ``r(0)`` the rational root."""
        a = self.coeffs
        if not self.trunc or not a[0]:
            raise NotAUnit("constant term is zero")
        alpha = Fraction(1, k)
        b = [rational_root(a[0], k)]
        for n in range(1, self.trunc):
            s = _ZERO
            for j in range(1, n + 1):
                if a[j]:
                    s += ((alpha + 1) * j - n) * a[j] * b[n - j]
            b.append(s / (n * a[0]))
        return TSeries._raw(b, self.trunc)

    # -- comparison and display
    def agrees(self, other, upto=None):
        n = min(self.trunc, other.trunc)
        if upto is not None:
            n = min(n, upto)
        return self.coeffs[:n] == other.coeffs[:n]

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        return f"TSeries({format_univariate(self, 't')}, trunc={self.trunc})"


def format_univariate(s, var="t"):
    parts = []
    for k, c in enumerate(s.coeffs):
        if c:
            parts.append(_format_term(c, ((var, k),)))
    return _join_terms(parts)


# ---------------------------------------------------------------------------
# bivariate


class BiSeries:
    """Sparse series in ``x, y`` known modulo total degree ``trunc``."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms=None, trunc=0):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            if i + j < trunc:
                c = _frac(c)
                if c:
                    clean[(i, j)] = clean.get((i, j), _ZERO) + c
        self.terms = {k: v for k, v in clean.items() if v}
        self.trunc = trunc

    @classmethod
    def _raw(cls, terms, trunc):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.trunc = trunc
        return obj

    @classmethod
    def zero(cls, trunc):
        return cls._raw({}, trunc)

    @classmethod
    def const(cls, c, trunc):
        return cls({(0, 0): c}, trunc)

    @classmethod
    def monomial(cls, c, i, j, trunc):
        return cls({(i, j): c}, trunc)

    @classmethod
    def x(cls, trunc):
        return cls({(1, 0): 1}, trunc)

    @classmethod
    def y(cls, trunc):
        return cls({(0, 1): 1}, trunc)

    @classmethod
    def from_x_series(cls, s: TSeries, trunc=None):
        """Embed a univariate series in ``x``."""
        trunc = s.trunc if trunc is None else min(trunc, s.trunc)
        return cls._raw({(k, 0): c for k, c in enumerate(s.coeffs) if c and k < trunc}, trunc)

    # -- inspection
    def order(self):
        if not self.terms:
            return INF
        return min(i + j for i, j in self.terms)

    multiplicity = order

    def _eff_order(self):
        k = self.order()
        return self.trunc if k is INF else k

    def coeff(self, i, j):
        if i + j >= self.trunc:
            raise PrecisionExhausted(f"coefficient x^{i}y^{j} beyond truncation {self.trunc}")
        return self.terms.get((i, j), _ZERO)

    def constant(self):
        return self.coeff(0, 0)

    def is_zero(self):
        return not self.terms

    def is_unit(self):
        return self.trunc > 0 and bool(self.terms.get((0, 0)))

    def degree(self):
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    def y_degree(self):
        return max((j for _, j in self.terms), default=-1)

    def homogeneous_part(self, d):
        return {k: v for k, v in self.terms.items() if k[0] + k[1] == d}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0]))

    # -- arithmetic
    def truncate(self, n):
        if n >= self.trunc:
            return self
        return BiSeries._raw({k: v for k, v in self.terms.items() if k[0] + k[1] < n}, n)

    def _coerce(self, other):
        if isinstance(other, BiSeries):
            return other
        return BiSeries.const(other, self.trunc)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.trunc, other.trunc)
        out = {k: v for k, v in self.terms.items() if k[0] + k[1] < n}
        for k, v in other.terms.items():
            if k[0] + k[1] < n:
                s = out.get(k, _ZERO) + v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return BiSeries._raw(out, n)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries._raw({k: -v for k, v in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            c = _frac(other)
            if not c:
                return BiSeries.zero(self.trunc)
            return BiSeries._raw({k: c * v for k, v in self.terms.items()}, self.trunc)
        na, nb = self.trunc, other.trunc
        n = min(max(na, nb), na + other._eff_order(), nb + self._eff_order())
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        return BiSeries._raw(kernels.sparse_mul(a, b, n), n)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.invert() ** (-e)
        result = BiSeries.const(1, self.trunc)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_monomial(self, c, i, j):
        """``c x^i y^j * self``; the truncation grows by ``i + j``."""
        n = self.trunc + i + j
        c = _frac(c)
        if not c:
            return BiSeries.zero(n)
        return BiSeries._raw({(a + i, b + j): c * v for (a, b), v in self.terms.items()}, n)

    def partial(self, var):
        n = max(self.trunc - 1, 0)
        out = {}
        if var == "x":
            for (i, j), c in self.terms.items():
                if i:
                    out[(i - 1, j)] = i * c
        elif var == "y":
            for (i, j), c in self.terms.items():
                if j:
                    out[(i, j - 1)] = j * c
        else:
            raise ValueError(f"unknown variable {var!r}")
        return BiSeries._raw(out, n)

    def invert(self):
        c0 = self.terms.get((0, 0), _ZERO) if self.trunc else _ZERO
        if not c0:
            raise NotAUnit("constant term is zero")
        n = self.trunc
        r = BiSeries.const(1 / c0, min(1, n))
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            u = self.truncate(prec)
            r = BiSeries._raw(dict(r.terms), prec)
            r = (r * (2 - u * r)).truncate(prec)
        return BiSeries._raw(r.terms, n)

    def shear(self, c):
        """Substitute ``x -> x + c*y`` (total degree is preserved)."""
        c = _frac(c)
        if not c:
            return self
        out = {}
        for (i, j), v in self.terms.items():
            ck = _ONE
            for k in range(i + 1):
                key = (i - k, j + k)
                out[key] = out.get(key, _ZERO) + comb(i, k) * ck * v
                ck *= c
        return BiSeries._raw({k: v for k, v in out.items() if v}, self.trunc)

    def restrict_y0(self) -> TSeries:
        """The univariate series ``self(x, 0)``."""
        return TSeries.from_dict({i: c for (i, j), c in self.terms.items() if j == 0}, self.trunc)

    def split_y(self, n):
        """``(low, high)`` with ``self = low + y^n * high`` and ``deg_y(low) < n``."""
        low, high = {}, {}
        for (i, j), c in self.terms.items():
            if j < n:
                low[(i, j)] = c
            else:
                high[(i, j - n)] = c
        return BiSeries._raw(low, self.trunc), BiSeries._raw(high, max(self.trunc - n, 0))

    def divide_monomial(self, i, j):
        """Exact division by ``x^i y^j``."""
        out = {}
        for (a, b), c in self.terms.items():
            if a < i or b < j:
                raise NotMultiple(f"term x^{a}y^{b} not divisible by x^{i}y^{j}")
            out[(a - i, b - j)] = c
        return BiSeries._raw(out, max(self.trunc - i - j, 0))

    # -- comparison and display
    def agrees(self, other, upto=None):
        n = min(self.trunc, other.trunc)
        if upto is not None:
            n = min(n, upto)
        return self.truncate(n).terms == other.truncate(n).terms

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.terms == other.terms

    __hash__ = None

    def __str__(self):
        return format_bivariate(self)

    def __repr__(self):
        return f"BiSeries({format_bivariate(self)}, trunc={self.trunc})"


def _format_term(c, powers):
    mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in powers if e)
    mag = abs(c)
    sign = "-" if c < 0 else "+"
    if not mono:
        body = str(mag)
    elif mag == 1:
        body = mono
    else:
        body = f"{mag}*{mono}"
    return sign, body


def _join_terms(parts):
    if not parts:
        return "0"
    out = []
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_bivariate(s: BiSeries):
    """Expression-grammar rendering, lowest total degree first."""
    return _join_terms([_format_term(c, (("x", i), ("y", j))) for (i, j), c in s.sorted_terms()])


# ---------------------------------------------------------------------------
# division


def weierstrass_divide(g: BiSeries, f: BiSeries):
    """Return ``(q, r)`` with ``g = q f + r`` and ``deg_y r < m(f)``.

    ``f`` must be y-general of order equal to its multiplicity ``n``:
    the coefficient of ``y^n`` is nonzero.  The quotient is known modulo
    total degree ``N - n`` and the remainder modulo ``N`` where ``N`` is the
    common truncation.
    """
    n = f.order()
    if n is INF or f.trunc <= n or not f.terms.get((0, n)):
        raise NotYGeneral("divisor is not y-general of order equal to its multiplicity")
    N = min(g.trunc, f.trunc)
    f = f.truncate(N)
    f_low, unit = f.split_y(n)
    unit_inv = unit.invert()
    quo = BiSeries.zero(N - n)
    rem = BiSeries.zero(N)
    h = g.truncate(N)
    for _ in range(N + 2):
        if h.is_zero():
            break
        low, high = h.split_y(n)
        rem = rem + low
        q = (high * unit_inv).truncate(N - n)
        quo = quo + q
        h = (-(q * f_low)).truncate(N)
    else:  # pragma: no cover - x-order grows every pass
        raise PrecisionExhausted("Weierstrass division did not converge")
    return quo, rem


def _shear_constants():
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def y_general_shear(f: BiSeries):
    """Smallest shear constant ``c`` (0 first) making ``f`` y-general."""
    n = f.order()
    if n is INF:
        raise NotYGeneral("zero divisor")
    if f.terms.get((0, n)):
        return 0
    for c in _shear_constants():
        if f.shear(c).terms.get((0, n)):
            return c
        if abs(c) > n + 1:  # pragma: no cover - at most n bad constants
            break
    raise NotYGeneral("no shear makes the divisor y-general")


def _polynomial_quotient(g: BiSeries, d: BiSeries, budget=20000):
    """Exact polynomial quotient ``g / d`` when it exists, else None.

    Long division with the highest-degree term leading.  A zero remainder
    means ``g = q d`` as polynomials, hence also to the series precision.
    """
    n = min(g.trunc, d.trunc)
    rem = dict(g.truncate(n).terms)
    dt = d.truncate(n).terms
    if not dt:
        return None
    key = lambda m: (m[0] + m[1], m[0])
    lead = max(dt, key=key)
    lc = dt[lead]
    quo = {}
    steps = 0
    while rem:
        steps += len(dt)
        if steps > budget:
            return None
        m = max(rem, key=key)
        if m[0] < lead[0] or m[1] < lead[1]:
            return None
        sh = (m[0] - lead[0], m[1] - lead[1])
        c = rem[m] / lc
        quo[sh] = c
        for (i, j), v in dt.items():
            k = (i + sh[0], j + sh[1])
            val = rem.get(k, 0) - c * v
            if val:
                rem[k] = val
            else:
                rem.pop(k, None)
    order = d.truncate(n).order()
    return BiSeries(quo, max(n - order, 0))


def exact_divide(g: BiSeries, d: BiSeries) -> BiSeries:
    """Quotient ``q`` with ``g = q d`` to precision; raises NotMultiple.

    Monomial divisors are handled directly; otherwise a linear shear
    ``x -> x + c y`` is applied when ``d`` is not y-general, followed by
    Weierstrass division.
    """
    if len(d.terms) == 1:
        (i, j), c = next(iter(d.terms.items()))
        n = min(g.trunc, d.trunc)
        return g.truncate(n).divide_monomial(i, j) * (1 / c)
    q = _polynomial_quotient(g, d)
    if q is not None:
        return q
    c = y_general_shear(d)
    gs, ds = (g, d) if c == 0 else (g.shear(c), d.shear(c))
    q, r = weierstrass_divide(gs, ds)
    if not r.is_zero():
        raise NotMultiple(f"nonzero remainder at order {r.order()} (truncation {r.trunc})")
    return q if c == 0 else q.shear(-c)


def pullback(h: BiSeries, x_t: TSeries, y_t: TSeries, powers=None) -> TSeries:
    """``h(x(t), y(t))``, known modulo ``t^min(L, trunc(h)*v)`` where ``v`` is the
    smaller of the orders of ``x_t`` and ``y_t`` and ``L`` their truncation."""
    ox, oy = x_t.order(), y_t.order()
    if ox == 0 or oy == 0:
        raise ValueError("pullback needs x(t), y(t) without constant term")
    L = min(x_t.trunc, y_t.trunc)
    v = min(ox, oy)
    n = L if v is INF else min(L, h.trunc * v)
    if powers is None:
        powers = _PowerCache(x_t)
    by_j = {}
    for (i, j), c in h.terms.items():
        by_j.setdefault(j, {})[i] = c
    if not by_j:
        return TSeries.zero(n)
    top = max(by_j)
    result = None
    for j in range(top, -1, -1):
        row = by_j.get(j)
        pj = TSeries.zero(n)
        if row:
            for i, c in row.items():
                pj = pj + powers.get(i, n) * c
        result = pj if result is None else (result * y_t).truncate(n) + pj
    return result.truncate(n)


class _PowerCache:
    """Cached powers of a univariate series."""

    def __init__(self, s: TSeries):
        self.s = s
        self.cache = {}

    def get(self, k, n):
        hit = self.cache.get(k)
        if hit is not None and hit.trunc >= n:
            return hit.truncate(n)
        if k == 0:
            val = TSeries.from_dict({0: 1}, n)
        elif k == 1:
            val = self.s.truncate(n)
        else:
            val = (self.get(k - 1, n) * self.s).truncate(n)
        self.cache[k] = val
        return val

"""Standard bases of the module of 1-forms modulo logarithmic forms.

Classes of forms are tracked through their images ``psi(w)`` along the
branch, known modulo ``t^L``; the forms themselves are known modulo the
``N_form``-th power of the maximal ideal.  With ``L <= v0 (N_form + 1)``
dropping form terms of high degree never changes an image.

Reductions run until the image vanishes modulo ``t^L`` (or an unreachable
value is met), so every zero reduction leaves an honest logarithmic form up
to the tail of the chain.  Tail terms all have value at least ``L`` and use
order-maximizing monomials, which gives the degree ``trusted`` up to which
remainders are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .curve import DegreeTable, RingBasis, Semigroup, gamma_repr, min_dio_solutions, semigroup_of
from .errors import NonTermination, PrecisionExhausted
from .forms import OneForm, exterior_d, psi, tangent_multipliers
from .series import INF, BiSeries, TSeries


@dataclass
class SBElement:
    form: OneForm
    image: TSeries
    value: int
    origin: tuple

    @property
    def order(self):
        return self.form.order()


@dataclass(frozen=True)
class ReductionStep:
    scalar: Fraction
    monomial: tuple
    element: int
    value: int


@dataclass
class ReductionLog:
    """``target - sum(scalar * f^monomial * eta_element) = remainder``."""

    steps: list
    remainder: OneForm
    remainder_image: TSeries
    value: object  # value of the remainder, INF when it reduced to zero

    @property
    def is_zero(self):
        return self.value is INF


@dataclass
class SProcessRecord:
    j: int
    k: int
    l: int
    a: Fraction
    b: Fraction
    alpha: tuple
    beta: tuple
    value: int
    log: ReductionLog
    new_element: object = None  # index of the element it created, if any
    quotients: dict = field(default_factory=dict)

    @property
    def source(self):
        return (self.j, self.k, self.l)


@dataclass
class SBResult:
    f: BiSeries
    branch: object
    semigroup: Semigroup
    ringbasis: RingBasis
    elements: list
    records: list
    L: int
    n_form: int
    trusted: int
    context: object = field(repr=False, default=None)

    @property
    def values(self):
        return [e.value for e in self.elements]


# "newest": newest fitting element times the monomial of largest degree.
# "least-index": least fitting element index times the lexicographically least monomial.
RULES = ("newest", "least-index")


class Context:
    """Caches of monomials, images and their products for one branch."""

    def __init__(self, branch, semigroup, ringbasis, n_form, L, rule="newest"):
        if rule not in RULES:
            raise ValueError(f"unknown reduction rule {rule!r}")
        if L > branch.trunc:
            raise PrecisionExhausted(f"branch known to t^{branch.trunc}, need t^{L}")
        self.branch = branch
        self.s = semigroup
        self.rb = ringbasis
        self.n_form = n_form
        self.L = L
        self.rule = rule
        self.mult = tuple(m.truncate(L) for m in tangent_multipliers(branch))
        self.degrees = ringbasis.degrees
        self.table = DegreeTable(semigroup, self.degrees)
        self.images = [img.truncate(L) for img in ringbasis.images]
        self._mono_img = {(0,) * len(semigroup.gens): TSeries.from_dict({0: 1}, L)}
        self._mono_form = {}
        self._prod = {}

    def step_monomial(self, w):
        """Exponent vector of the monomial of value ``w`` a reduction step uses."""
        if self.rule == "newest":
            return self.table.repr(w)
        return gamma_repr(w, self.s)

    def step_degree(self, w):
        gamma = self.step_monomial(w)
        if gamma is None:
            return None
        return sum(a * d for a, d in zip(gamma, self.degrees))

    def image(self, form):
        return psi(form, self.branch, self.mult).truncate(self.L)

    def monomial_image(self, gamma):
        hit = self._mono_img.get(gamma)
        if hit is None:
            i = next(k for k, a in enumerate(gamma) if a)
            prev = gamma[:i] + (gamma[i] - 1,) + gamma[i + 1:]
            hit = (self.images[i] * self.monomial_image(prev)).truncate(self.L)
            self._mono_img[gamma] = hit
        return hit

    def monomial(self, gamma):
        hit = self._mono_form.get(gamma)
        if hit is None:
            hit = self.rb.monomial(gamma, self.n_form)
            self._mono_form[gamma] = hit
        return hit

    def product_image(self, gamma, idx, elements):
        """Image of ``f^gamma * eta_idx`` modulo ``t^L``."""
        key = (gamma, idx)
        hit = self._prod.get(key)
        if hit is None:
            if not any(gamma):
                hit = elements[idx].image
            else:
                i = next(k for k, a in enumerate(gamma) if a)
                prev = gamma[:i] + (gamma[i] - 1,) + gamma[i + 1:]
                hit = (self.images[i] * self.product_image(prev, idx, elements)).truncate(self.L)
            self._prod[key] = hit
        return hit


def _combine(coeffs, elements, n_form):
    """``sum coeffs[i] * eta_i`` as a form truncated at ``n_form``."""
    A = BiSeries.zero(n_form)
    B = BiSeries.zero(n_form)
    for i, c in sorted(coeffs.items()):
        if c.is_zero():
            continue
        A = A + (c * elements[i].form.A).truncate(n_form)
        B = B + (c * elements[i].form.B).truncate(n_form)
    return OneForm(A, B)


def reduce_modulo(ctx: Context, image: TSeries, elements, stop_bound=None):
    """Chain of reductions of a class with the given image.

    Returns ``(steps, remainder_image, value)`` where ``value`` is INF when
    the image vanishes modulo ``t^L`` (or passes ``stop_bound``), and
    otherwise the unreachable value where the chain stopped.  The step
    choice follows ``ctx.rule`` (see ``RULES``).
    """
    s = ctx.s
    newest = ctx.rule == "newest"
    order = range(len(elements) - 1, -1, -1) if newest else range(len(elements))
    steps = []
    img = image
    for _ in range(ctx.L + 1):
        v = img.order()
        if v is INF or (stop_bound is not None and v > stop_bound):
            return steps, img, INF
        target = next((idx for idx in order if s.contains(v - elements[idx].value)), None)
        if target is None:
            return steps, img, v
        gamma = ctx.step_monomial(v - elements[target].value)
        prod = ctx.product_image(gamma, target, elements)
        c = img[v] / prod[v]
        img = img - prod * c
        steps.append(ReductionStep(c, gamma, target, v))
    raise NonTermination("reduction chain longer than the precision")  # pragma: no cover


def _quotients(steps, ctx):
    """Group reduction steps into polynomial quotients per element."""
    out = {}
    for st in steps:
        term = ctx.monomial(st.monomial) * st.scalar
        out[st.element] = out[st.element] + term if st.element in out else term
    return out


def reduce_form(ctx: Context, form: OneForm, elements, stop_bound=None) -> ReductionLog:
    """Reduce an explicit form; the log replays ``form - sum = remainder``."""
    steps, img, value = reduce_modulo(ctx, ctx.image(form), elements, stop_bound)
    qs = _quotients(steps, ctx)
    rem = form.truncate(ctx.n_form) - _combine(qs, elements, ctx.n_form)
    return ReductionLog(steps, rem, img, value)


def s_processes(j, k, elements, ctx: Context):
    """Minimal S-processes of elements ``j`` and ``k``.

    Solutions are numbered by the degree of the monomial multiplying
    ``eta_k``, then by value.
    Each entry is ``(l, a, b, alpha, beta, value, image)`` with
    ``a f^alpha eta_j + b f^beta eta_k`` of image ``image`` and value larger
    than ``value``.
    """
    ej, ek = elements[j], elements[k]
    degs = ctx.rb.degrees
    sols = sorted(
        min_dio_solutions(ej.value, ek.value, ctx.s),
        key=lambda d: (sum(b * g for b, g in zip(d.beta, degs)), d.value, d.alpha, d.beta),
    )
    out = []
    for l, sol in enumerate(sols, start=1):
        pa = ctx.product_image(sol.alpha, j, elements)
        pb = ctx.product_image(sol.beta, k, elements)
        v = sol.value
        p, q = pa[v], pb[v]
        a, b = -q, p
        img = pa * a + pb * b
        out.append((l, a, b, sol.alpha, sol.beta, v, img))
    return out


def initial_elements(ctx: Context):
    out = []
    for i, rep in enumerate(ctx.rb.reps):
        form = exterior_d(rep.truncate(ctx.n_form + 1)).truncate(ctx.n_form)
        img = ctx.image(form)
        out.append(SBElement(form, img, img.order(), ("initial", i)))
    return out


def algorithm1(f, branch, semigroup, ringbasis, n_form, L=None, max_sweeps=None, rule="newest"):
    """Standard basis by S-processes and reductions until a fixed point."""
    v0 = branch.multiplicity
    if L is None:
        L = min(branch.trunc, v0 * (n_form + 1))
    L = min(L, v0 * (n_form + 1))
    ctx = Context(branch, semigroup, ringbasis, n_form, L, rule)
    elements = initial_elements(ctx)
    for e in elements:
        if e.value is INF:
            raise PrecisionExhausted("initial differential vanishes to precision")
    records = []
    done = set()
    cap = max_sweeps if max_sweeps is not None else max(semigroup.conductor, 1) + 2
    for _ in range(cap):
        pairs = [(j, k) for k in range(len(elements)) for j in range(k) if (j, k) not in done]
        if not pairs:
            break
        added = []
        for j, k in pairs:
            done.add((j, k))
            for l, a, b, alpha, beta, v, img in s_processes(j, k, elements, ctx):
                steps, rimg, value = reduce_modulo(ctx, img, elements)
                rec = SProcessRecord(j, k, l, a, b, alpha, beta, v, ReductionLog(steps, None, rimg, value))
                if value is not INF:
                    if value >= L:  # pragma: no cover - guarded by reduce_modulo
                        raise PrecisionExhausted("new value beyond precision")
                    rec.new_element = len(elements) + len(added)
                    added.append(rec)
                records.append(rec)
        # materialize new elements (forms) after the sweep, in generation order
        for rec in added:
            form = _sprocess_remainder(rec, elements, ctx)
            rec.log.remainder = form
            elements.append(SBElement(form, rec.log.remainder_image, rec.log.value, ("sprocess",) + rec.source))
        if not added:
            break
    else:
        raise NonTermination("standard basis loop exceeded the sweep cap")
    for rec in records:
        if rec.log.remainder is None:
            rec.log.remainder = _sprocess_remainder(rec, elements, ctx)
    trusted = trusted_degree(ctx, elements)
    return SBResult(f, branch, semigroup, ringbasis, elements, records, L, n_form, trusted, ctx)


def row_coefficients(rec, ctx):
    """Coefficients ``C_i`` with ``sum C_i eta_i`` equal to the remainder."""
    qs = _quotients(rec.log.steps, ctx)
    rec.quotients = qs
    coeffs = {i: -q for i, q in qs.items()}
    ma = ctx.monomial(rec.alpha) * rec.a
    mb = ctx.monomial(rec.beta) * rec.b
    coeffs[rec.j] = coeffs[rec.j] + ma if rec.j in coeffs else ma
    coeffs[rec.k] = coeffs[rec.k] + mb if rec.k in coeffs else mb
    return coeffs


def _sprocess_remainder(rec, elements, ctx):
    return _combine(row_coefficients(rec, ctx), elements, ctx.n_form)


def trusted_degree(ctx: Context, elements):
    """Degree below which zero-reduction remainders are exact."""
    v0 = ctx.branch.multiplicity
    best = ctx.n_form
    for e in elements:
        for w in range(ctx.L, ctx.L + v0):
            d = ctx.step_degree(w - e.value)
            if d is not None:
                best = min(best, d + e.order)
    return best


def lambda_gaps(res: SBResult):
    """Values of the standard basis translates that are semigroup gaps."""
    s = res.semigroup
    out = set()
    for gap in s.gaps:
        if any(s.contains(gap - v) for v in res.values):
            out.add(gap)
    return sorted(out)


def fixed_point_sweep(res: SBResult):
    """Re-run every S-process against the final elements; all must vanish."""
    ctx = res.context
    bad = []
    for k in range(len(res.elements)):
        for j in range(k):
            for l, *_rest, img in s_processes(j, k, res.elements, ctx):
                _, _, value = reduce_modulo(ctx, img, res.elements)
                if value is not INF:
                    bad.append((j, k, l, value))
    return bad


def default_precision(f, semigroup):
    """Bivariate precision used when none is requested."""
    v0 = semigroup.gens[0]
    c = semigroup.conductor
    need = -(-(2 * c + 2 * semigroup.gens[-1] + 4) // v0)
    return max(f.degree() + 4, need)


def standard_basis(f, branch_at, precision=None, max_rounds=8, rule="newest"):
    """Compute the standard basis with enough precision for ``precision`` trusted degrees.

    ``branch_at(L)`` must return the branch known modulo ``t^L``.
    """
    probe = branch_at(64)
    semigroup, _ = semigroup_of(probe)
    if precision is None:
        precision = default_precision(f, semigroup)
    v0 = semigroup.gens[0]
    n_form = precision + -(-semigroup.gens[-1] // v0) + 2
    rate, last = Fraction(1), None
    for _ in range(max_rounds):
        L = v0 * (n_form + 1)
        b = branch_at(L)
        s, rb = semigroup_of(b)
        res = algorithm1(f, b, s, rb, n_form, L, rule=rule)
        if res.trusted >= precision:
            return res
        # trusted degree gained per unit of form precision in the last retry
        if last is not None and res.trusted > last[1]:
            rate = min(Fraction(1), Fraction(res.trusted - last[1], n_form - last[0]))
        last = (n_form, res.trusted)
        n_form += math.ceil((precision - res.trusted) / rate)
    raise PrecisionExhausted(f"could not reach trusted degree {precision}")

"""Holomorphic 1-forms ``A dx + B dy`` with truncated series coefficients."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CrossCheckFailed, MembershipFailed, NotMember, NotMultiple
from .series import INF, BiSeries, TSeries, exact_divide, format_bivariate


class OneForm:
    """``A dx + B dy``; both coefficients share one truncation order."""

    __slots__ = ("A", "B")

    def __init__(self, A: BiSeries, B: BiSeries):
        n = min(A.trunc, B.trunc)
        self.A = A.truncate(n)
        self.B = B.truncate(n)

    @property
    def trunc(self):
        return self.A.trunc

    @classmethod
    def dx(cls, trunc):
        return cls(BiSeries.const(1, trunc), BiSeries.zero(trunc))

    @classmethod
    def dy(cls, trunc):
        return cls(BiSeries.zero(trunc), BiSeries.const(1, trunc))

    @classmethod
    def zero(cls, trunc):
        return cls(BiSeries.zero(trunc), BiSeries.zero(trunc))

    def __add__(self, other):
        return OneForm(self.A + other.A, self.B + other.B)

    def __sub__(self, other):
        return OneForm(self.A - other.A, self.B - other.B)

    def __neg__(self):
        return OneForm(-self.A, -self.B)

    def __mul__(self, g):
        """Multiply by a scalar or a BiSeries function."""
        return OneForm(self.A * g, self.B * g)

    __rmul__ = __mul__

    def mul_monomial(self, c, i, j):
        return OneForm(self.A.mul_monomial(c, i, j), self.B.mul_monomial(c, i, j))

    def truncate(self, n):
        return OneForm(self.A.truncate(n), self.B.truncate(n))

    def order(self):
        return min(self.A.order(), self.B.order())

    def is_zero(self):
        return self.A.is_zero() and self.B.is_zero()

    def agrees(self, other, upto=None):
        return self.A.agrees(other.A, upto) and self.B.agrees(other.B, upto)

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.A == other.A and self.B == other.B

    __hash__ = None

    def __str__(self):
        return f"({format_bivariate(self.A)})*dx + ({format_bivariate(self.B)})*dy"

    def __repr__(self):
        return f"OneForm({self}, trunc={self.trunc})"


def exterior_d(f: BiSeries) -> OneForm:
    return OneForm(f.partial("x"), f.partial("y"))


def wedge(w1: OneForm, w2: OneForm) -> BiSeries:
    """Coefficient of ``dx^dy`` in ``w1 ^ w2``: ``A1 B2 - A2 B1``."""
    return w1.A * w2.B - w2.A * w1.B


@dataclass(frozen=True)
class CofactorResult:
    """Quotient ``h`` with ``numerator = h f`` and the order it is known to."""

    h: BiSeries
    residual_order: int


def _divide(num: BiSeries, f: BiSeries, exc):
    try:
        q = exact_divide(num, f)
    except NotMultiple as e:
        raise exc(str(e)) from None
    return CofactorResult(q, min(num.trunc, f.trunc))


def pair_cofactor(w1: OneForm, w2: OneForm, f: BiSeries) -> CofactorResult:
    """``h`` with ``w1 ^ w2 = h f dx^dy``; raises NotMultiple."""
    return _divide(wedge(w1, w2), f, NotMultiple)


def saito_membership(w: OneForm, f: BiSeries, df: OneForm = None) -> CofactorResult:
    """Cofactor of ``w`` (``w ^ df = h f``) or NotMember."""
    if df is None:
        df = exterior_d(f)
    return _divide(wedge(w, df), f, NotMember)


def is_member(w: OneForm, f: BiSeries) -> bool:
    try:
        saito_membership(w, f)
    except NotMember:
        return False
    return True


# ---------------------------------------------------------------------------
# values along a branch


def tangent_multipliers(b):
    """``(t x'(t), t y'(t))`` for a branch."""
    tx = TSeries._raw([k * c for k, c in enumerate(b.x_t.coeffs)], b.trunc)
    ty = TSeries._raw([k * c for k, c in enumerate(b.y_t.coeffs)], b.trunc)
    return tx, ty


def psi(w: OneForm, b, multipliers=None) -> TSeries:
    """Image ``t (A(phi) x' + B(phi) y')`` of a form along the branch."""
    tx, ty = multipliers or tangent_multipliers(b)
    out = b.pullback(w.A) * tx + b.pullback(w.B) * ty
    return out.truncate(b.trunc)


def form_valuation(w: OneForm, b):
    return psi(w, b).order()


def residue_valuation(w: OneForm, f: BiSeries, b, check=True):
    """``v(A) - v(f_x)``, cross-checked against ``v(B) - v(f_y)``.

    Returns ``INF`` when both coefficients vanish along the branch.
    """
    if check:
        try:
            saito_membership(w, f)
        except NotMember as e:
            raise MembershipFailed(f"form is not logarithmic: {e}") from None
    pa, pb = b.pullback(w.A), b.pullback(w.B)
    va, vb = pa.order(), pb.order()
    vfx, vfy = b.pullback(f.partial("x")).order(), b.pullback(f.partial("y")).order()
    left = INF if va is INF or vfx is INF else va - vfx
    right = INF if vb is INF or vfy is INF else vb - vfy
    if vfx is INF:
        left = right
    if vfy is INF:
        right = left
    if left == right:
        return left
    # a coefficient vanishing to precision only bounds its value from below
    if va is INF and vfx is not INF and right is not INF and right >= pa.trunc - vfx:
        return right
    if vb is INF and vfy is not INF and left is not INF and left >= pb.trunc - vfy:
        return left
    raise CrossCheckFailed(f"residue values disagree: {left} vs {right}")

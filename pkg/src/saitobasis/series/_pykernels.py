"""Pure Python versions of the truncated multiplication kernels.

These are the reference implementations; ``_ckernels.pyx`` mirrors them
line for line and must return identical results.
"""

from fractions import Fraction

_ZERO = Fraction(0)


def dense_mul(a, b, n):
    """Coefficients of ``a*b`` below degree ``n`` (dense univariate)."""
    out = [_ZERO] * n
    lb = len(b)
    for i in range(min(len(a), n)):
        ai = a[i]
        if not ai:
            continue
        lim = min(lb, n - i)
        for j in range(lim):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def sparse_mul(a, b, n):
    """Product of two ``{(i, j): coeff}`` maps, dropping total degree >= n."""
    out = {}
    bs = sorted(b.items(), key=lambda kv: kv[0][0] + kv[0][1])
    get = out.get
    for (i1, j1), c1 in a.items():
        room = n - i1 - j1
        if room <= 0:
            continue
        for (i2, j2), c2 in bs:
            if i2 + j2 >= room:
                break
            key = (i1 + i2, j1 + j2)
            out[key] = get(key, _ZERO) + c1 * c2
    return {k: v for k, v in out.items() if v}


def sparse_axpy(acc, c, b, shift_i, shift_j, n):
    """In place ``acc += c * x^shift_i y^shift_j * b`` below total degree n."""
    base = shift_i + shift_j
    get = acc.get
    for (i, j), v in b.items():
        if i + j + base >= n:
            continue
        key = (i + shift_i, j + shift_j)
        s = get(key, _ZERO) + c * v
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)
    return acc

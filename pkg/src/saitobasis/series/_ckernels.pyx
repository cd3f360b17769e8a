# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled truncated multiplication kernels.

Coefficients stay Python objects (exact rationals); the gain comes from
typed index arithmetic and skipping interpreter dispatch in the loops.
"""

from fractions import Fraction

cdef object _ZERO = Fraction(0)


def dense_mul(list a, list b, Py_ssize_t n):
    cdef list out = [_ZERO] * n
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t i, j, lim
    cdef object ai, bj
    if la > n:
        la = n
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        lim = n - i
        if lim > lb:
            lim = lb
        for j in range(lim):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def sparse_mul(dict a, dict b, Py_ssize_t n):
    cdef dict out = {}
    cdef list bs = sorted(b.items(), key=lambda kv: kv[0][0] + kv[0][1])
    cdef Py_ssize_t nb = len(bs)
    cdef Py_ssize_t i1, j1, i2, j2, room, k
    cdef tuple key, item, mono
    cdef object c1, c2, prev
    cdef list bi = [0] * nb
    cdef list bj = [0] * nb
    cdef list bc = [None] * nb
    for k in range(nb):
        item = bs[k]
        mono = item[0]
        bi[k] = mono[0]
        bj[k] = mono[1]
        bc[k] = item[1]
    for mono, c1 in a.items():
        i1 = mono[0]
        j1 = mono[1]
        room = n - i1 - j1
        if room <= 0:
            continue
        for k in range(nb):
            i2 = bi[k]
            j2 = bj[k]
            if i2 + j2 >= room:
                break
            key = (i1 + i2, j1 + j2)
            prev = out.get(key)
            if prev is None:
                out[key] = c1 * bc[k]
            else:
                out[key] = prev + c1 * bc[k]
    return {kk: v for kk, v in out.items() if v}


def sparse_axpy(dict acc, object c, dict b, Py_ssize_t shift_i,
                Py_ssize_t shift_j, Py_ssize_t n):
    cdef Py_ssize_t base = shift_i + shift_j
    cdef Py_ssize_t i, j
    cdef tuple mono, key
    cdef object v, s
    for mono, v in b.items():
        i = mono[0]
        j = mono[1]
        if i + j + base >= n:
            continue
        key = (i + shift_i, j + shift_j)
        s = acc.get(key, _ZERO) + c * v
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)
    return acc

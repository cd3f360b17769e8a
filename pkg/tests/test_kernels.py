import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saitobasis.series import _pykernels
from saitobasis.series import kernels

try:
    from saitobasis.series import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=7)
dense = st.lists(fracs, max_size=12)
sparse = st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), fracs.filter(bool), max_size=15)


@needs_c
@settings(max_examples=200, deadline=None)
@given(dense, dense, st.integers(0, 14))
def test_dense_backends_agree(a, b, n):
    assert _ckernels.dense_mul(a, b, n) == _pykernels.dense_mul(a, b, n)


@needs_c
@settings(max_examples=200, deadline=None)
@given(sparse, sparse, st.integers(0, 12))
def test_sparse_backends_agree(a, b, n):
    assert _ckernels.sparse_mul(a, b, n) == _pykernels.sparse_mul(a, b, n)


@needs_c
@settings(max_examples=200, deadline=None)
@given(sparse, fracs, sparse, st.integers(0, 3), st.integers(0, 3), st.integers(0, 12))
def test_axpy_backends_agree(acc, c, b, si, sj, n):
    assert _ckernels.sparse_axpy(dict(acc), c, b, si, sj, n) == _pykernels.sparse_axpy(dict(acc), c, b, si, sj, n)


def test_python_axpy_cancels_to_empty():
    acc = {(1, 0): Fraction(2)}
    assert _pykernels.sparse_axpy(acc, Fraction(-2), {(0, 0): Fraction(1)}, 1, 0, 5) == {}


def test_backend_is_selected():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"


def test_environment_forces_python():
    env = dict(os.environ, SAITOBASIS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from saitobasis.series import BACKEND; print(BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"

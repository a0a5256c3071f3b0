import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from multiscale import _pykernels as py
from multiscale import kernels

try:
    from multiscale import _ckernels as cy
except ImportError:  # extension not built
    cy = None

needs_cython = pytest.mark.skipif(cy is None, reason="compiled kernels not built")

matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n),
                           min_size=m, max_size=m)))

intervals = st.integers(1, 4).flatmap(
    lambda L: st.lists(st.tuples(st.integers(1, 9), st.integers(1, L), st.integers(1, L)),
                       min_size=1, max_size=5).map(lambda es: (L, es)))


def _edges(L, es):
    kappas, lo, hi = [], [], []
    for k, a, b in es:
        kappas.append(k)
        lo.append(min(a, b))
        hi.append(max(a, b))
    covered = {i for a, b in zip(lo, hi) for i in range(a, b + 1)}
    for i in range(1, L + 1):
        if i not in covered:
            kappas.append(1)
            lo.append(i)
            hi.append(i)
    return kappas, lo, hi


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if cy is not None and not os.environ.get("MULTISCALE_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"


def test_pure_python_switch():
    code = "from multiscale import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, MULTISCALE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@needs_cython
@settings(max_examples=300, deadline=None)
@given(matrices)
def test_snf_backends_agree(m):
    assert list(cy.snf_diagonal(m)) == list(py.snf_diagonal(m))


@needs_cython
@settings(max_examples=300, deadline=None)
@given(intervals)
def test_ghost_and_prongs_backends_agree(args):
    L, es = args
    kappas, lo, hi = _edges(L, es)
    co, cd = cy.ghost_order(kappas, lo, hi, L)
    po, pd = py.ghost_order(kappas, lo, hi, L)
    assert co == po and list(cd) == list(pd)
    assert cy.prong_orbits(kappas, lo, hi, L) == py.prong_orbits(kappas, lo, hi, L)


@needs_cython
@settings(max_examples=300, deadline=None)
@given(st.integers(5, 8).flatmap(
    lambda n: st.lists(st.integers(-6, 6), min_size=n - 1, max_size=n - 1)))
def test_cherry_scan_backends_agree(head):
    orders = head + [-2 - sum(head)]
    assert cy.find_unbalanced_cherry(orders) == py.find_unbalanced_cherry(orders)


@needs_cython
def test_overflow_falls_back_to_python():
    big = 2 ** 62
    rows = [[big, 0], [0, big - 1]]
    with pytest.raises(OverflowError):
        cy.snf_diagonal(rows)
    assert list(kernels.snf_diagonal(rows)) == [1, big * (big - 1)]

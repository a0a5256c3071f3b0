"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise (or
when ``MULTISCALE_PURE_PYTHON=1`` is set) everything runs on ``_pykernels``.
The compiled kernels work on 64-bit integers and raise OverflowError when a
value does not fit; the wrappers below then redo the call in pure Python, so
callers always get exact answers.
"""
import os

from . import _pykernels as py

if os.environ.get("MULTISCALE_PURE_PYTHON", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

BACKEND = "cython" if compiled is not None else "python"


def _dispatch(name):
    pyfunc = getattr(py, name)
    if compiled is None:
        return pyfunc
    cfunc = getattr(compiled, name)

    def call(*args):
        try:
            return cfunc(*args)
        except OverflowError:
            return pyfunc(*args)

    call.__name__ = name
    call.__doc__ = pyfunc.__doc__
    return call


snf_diagonal = _dispatch("snf_diagonal")
ghost_order = _dispatch("ghost_order")
prong_orbits = _dispatch("prong_orbits")
find_unbalanced_cherry = _dispatch("find_unbalanced_cherry")

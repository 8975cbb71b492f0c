"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. ``use_backend`` switches explicitly (tests, benchmarks).
"""

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_WORD_LIMIT = 2**31

BACKEND = "compiled" if _ckernels is not None else "python"


def available_backends():
    return ["compiled", "python"] if _ckernels is not None else ["python"]


def use_backend(name):
    global BACKEND
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _ckernels is None:
        raise RuntimeError("compiled kernels are not built")
    BACKEND = name


def _impl(modulus):
    if BACKEND == "compiled" and modulus < _WORD_LIMIT:
        return _ckernels
    return _pykernels


def rank_mod_p(a, p):
    return _impl(p).rank_mod_p(a, p)


def series_mul_mod(a, b, D, modulus):
    return _impl(modulus).series_mul_mod(a, b, D, modulus)

"""Kernel backend selection.

The compiled Cython module is used when it imported cleanly; otherwise the
pure NumPy fallback takes over with identical semantics.  ``set_backend`` is
for benchmarks and cross-checking, not normal use.
"""

from sphavg import _kernels_py

try:
    from sphavg import _kernels as _compiled

    HAVE_COMPILED = True
except ImportError:
    _compiled = None
    HAVE_COMPILED = False

_active = _compiled if HAVE_COMPILED else _kernels_py


def backend_name():
    return "compiled" if _active is _compiled and HAVE_COMPILED else "python"


def set_backend(name):
    """Switch between 'compiled' and 'python' backends. Returns old name."""
    global _active
    old = backend_name()
    if name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernels are not available")
        _active = _compiled
    elif name == "python":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    return old


def eval_grid_1d(values, lo, h, px):
    return _active.eval_grid_1d(values, lo, h, px)


def eval_grid_2d(values, lo0, lo1, h0, h1, px, py):
    return _active.eval_grid_2d(values, lo0, lo1, h0, h1, px, py)


def eval_grid_3d(values, lo0, lo1, lo2, h0, h1, h2, px, py, pz):
    return _active.eval_grid_3d(values, lo0, lo1, lo2, h0, h1, h2, px, py, pz)


def rect_union_contains(cx, cy, ux, uy, hl, hw, px, py):
    return _active.rect_union_contains(cx, cy, ux, uy, hl, hw, px, py)

"""Kernel selection: the compiled core when available, pure Python otherwise.

Set ``LTLSN_KERNEL=pure`` in the environment (read once, at import) to force
the fallback.  Both backends implement the same two kernels over identical
buffer layouts; see ``_pure.py`` for the reference semantics.
"""

import os
from array import array

from . import _pure
from ._pure import (
    OP_AND,
    OP_BEH,
    OP_CONST,
    OP_MAJ,
    OP_NEXT,
    OP_NOT,
    OP_TOP,
    OP_UNTIL,
)

try:
    from . import _core
except ImportError:
    _core = None

_impl = _pure if (_core is None or os.environ.get("LTLSN_KERNEL") == "pure") else _core

# The compiled comparisons are 64-bit; a threshold with a gigantic numerator
# or denominator falls back to Python's arbitrary precision.
_LIMIT = 2**31


def backend() -> str:
    """Name of the active backend: ``"compiled"`` or ``"pure"``."""
    return "pure" if _impl is _pure else "compiled"


def implementations() -> dict:
    """Available raw kernel modules by name, for tests and benchmarks."""
    out = {"pure": _pure}
    if _core is not None:
        out["compiled"] = _core
    return out


def _pick(num: int, den: int):
    if _impl is not _pure and (den >= _LIMIT or abs(num) >= _LIMIT):
        return _pure
    return _impl


def diffusion(indptr, indices, num, den, strict, initial):
    """Run the adoption fixed point; returns (join positions, fixed point)."""
    join = array("i", [0]) * len(initial)
    fixed = _pick(num, den).diffusion(indptr, indices, num, den, strict, initial, join)
    return join, fixed


def label_rows(ops, n_pos, join, indptr, indices, num, den, strict):
    """Fill truth rows for ``ops`` triples (children first).

    Returns (rows, visits): one bytearray of length ``n_pos`` per op, and the
    instrumented count of (row, position) fills.
    """
    op = array("i", [t[0] for t in ops])
    arg1 = array("i", [t[1] for t in ops])
    arg2 = array("i", [t[2] for t in ops])
    rows = [bytearray(n_pos) for _ in ops]
    visits = _pick(num, den).label_rows(
        op, arg1, arg2, rows, n_pos, join, indptr, indices, num, den, strict
    )
    return rows, visits

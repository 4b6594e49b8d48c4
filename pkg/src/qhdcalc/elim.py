"""Selects the elimination kernel: compiled extension if built, else Python.

Set QHDCALC_PURE=1 to force the pure-Python kernel (used by the benchmark
and by tests that compare the two backends).
"""

import os

if os.environ.get("QHDCALC_PURE") == "1":
    from . import _elim as _impl
else:
    try:
        from . import _elim_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _elim as _impl

BACKEND = _impl.BACKEND
rank_ff = _impl.rank_ff
det_bareiss = _impl.det_bareiss
leading_minors = _impl.leading_minors

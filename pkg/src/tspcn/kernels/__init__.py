"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is used when it is
unavailable or when TSPCN_PURE_PYTHON is set to a non-empty value other than
"0". Both backends are bit-identical by contract.
"""

from __future__ import annotations

import os

if os.environ.get("TSPCN_PURE_PYTHON", "0").strip() not in ("", "0"):
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl  # type: ignore[no-redef]

        BACKEND = "python"

held_karp_gtsp = _impl.held_karp_gtsp
chain_best_slots = _impl.chain_best_slots
two_opt = _impl.two_opt


def backend_name() -> str:
    return BACKEND

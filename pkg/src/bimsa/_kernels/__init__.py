"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin is
the fallback and the behavioural reference. Set ``BIMSA_PURE_PYTHON=1`` to
force the fallback (used by the backend benchmark and tests).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("BIMSA_PURE_PYTHON"):
    _impl = _pure
else:
    try:
        from . import _ckern as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND

ic_one = _impl.ic_one
ic_counts = _impl.ic_counts
sigma2_nodes = _impl.sigma2_nodes
sigma2_set_value = _impl.sigma2_set_value
edv_set_value = _impl.edv_set_value
metropolis_trials = _impl.metropolis_trials
sa_chain = _impl.sa_chain

# The generic chain accepts a Python objective callable; it always runs on the
# pure backend (the compiled chain only knows the built-in objectives).
sa_chain_generic = _pure.sa_chain

"""Backend selection for the hot kernels.

The compiled ``_ccore`` extension is used when it imports; otherwise the numpy
implementation in ``_pycore``.  Setting ``RMMSIM_PURE=1`` forces the fallback.
"""

import os

from . import _pycore

if os.environ.get("RMMSIM_PURE") == "1":
    _impl = _pycore
else:
    try:
        from . import _ccore as _impl
    except ImportError:
        _impl = _pycore

BACKEND = "compiled" if _impl is not _pycore else "python"

philox4x32 = _impl.philox4x32
edge_words = _impl.edge_words
words_to_exp = _impl.words_to_exp
exp_thresholds = _impl.exp_thresholds
component_labels = _impl.component_labels
rmm_batch = _impl.rmm_batch
MAX_INDEX = _impl.MAX_INDEX


def backends():
    """Available kernel modules keyed by name (for benchmarks and tests)."""
    found = {"python": _pycore}
    try:
        from . import _ccore
    except ImportError:
        pass
    else:
        found["compiled"] = _ccore
    return found

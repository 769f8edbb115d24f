"""Select the congruence kernel backend at import time.

The compiled extension is used when it is importable; set
``UNIFINT_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("UNIFINT_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND


def _pairs_array(pairs):
    arr = np.asarray(pairs, dtype=np.int32).reshape(-1, 2)
    return np.ascontiguousarray(arr)


def cg_close(trans, rep, seeds, impl=None):
    """Least congruence containing partition ``rep`` and the ``seeds`` pairs.

    ``rep`` must already be a congruence (the diagonal is the usual start).
    """
    impl = impl or _impl
    return impl.cg_close(trans, np.ascontiguousarray(rep, dtype=np.int32), _pairs_array(seeds))


def principal_batch(trans, pairs, impl=None):
    impl = impl or _impl
    return impl.principal_batch(trans, _pairs_array(pairs))


def partition_join(rep1, rep2, impl=None):
    impl = impl or _impl
    return impl.partition_join(
        np.ascontiguousarray(rep1, dtype=np.int32), np.ascontiguousarray(rep2, dtype=np.int32)
    )

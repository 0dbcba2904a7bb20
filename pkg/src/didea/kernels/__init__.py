"""Kernel backend selection.

The compiled extension is used when it imported cleanly; otherwise the
numpy reference implementation takes over. `BACKEND` reports which one is
active. Setting the environment variable DIDEA_PURE_PYTHON to a non-empty
value forces the numpy path (useful for debugging and benchmarking).
"""

import os

from . import pykernels

if os.environ.get("DIDEA_PURE_PYTHON"):
    _impl = pykernels
    BACKEND = "numpy"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = pykernels
        BACKEND = "numpy"

shift_profile_sum_log = _impl.shift_profile_sum_log
shift_profile_split_charge = _impl.shift_profile_split_charge
shift_profile_single_proton = _impl.shift_profile_single_proton
shifted_theoretical_correlations = _impl.shifted_theoretical_correlations

__all__ = [
    "BACKEND",
    "pykernels",
    "shift_profile_sum_log",
    "shift_profile_split_charge",
    "shift_profile_single_proton",
    "shifted_theoretical_correlations",
]

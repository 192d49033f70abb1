"""Kernel backend selection: compiled extension if available, else pure Python.

Set DARP_PURE_KERNEL=1 to force the pure fallback (used by the kernel
benchmark and by the equivalence tests). Both backends expose the same
Kernel class and produce bitwise identical results.
"""

from __future__ import annotations

import os

from . import _pykernel

OK = _pykernel.OK
STRUCTURE = _pykernel.STRUCTURE
CAPACITY = _pykernel.CAPACITY
WINDOW = _pykernel.WINDOW
RIDE_OR_DURATION = _pykernel.RIDE_OR_DURATION

if os.environ.get("DARP_PURE_KERNEL") == "1":
    _impl = _pykernel
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykernel

BACKEND: str = _impl.BACKEND_NAME


def make_kernel(instance, impl=None):
    """Build a kernel bound to an Instance's arrays (see Instance.kernel)."""
    mod = impl if impl is not None else _impl
    return mod.Kernel(
        instance.n,
        instance.capacity,
        instance.route_duration_bound,
        instance.ride_time_bound,
        instance.window_open_arr,
        instance.window_close_arr,
        instance.service_arr,
        instance.load_arr,
        instance.travel_time_matrix,
    )


def make_pure_kernel(instance):
    return make_kernel(instance, impl=_pykernel)

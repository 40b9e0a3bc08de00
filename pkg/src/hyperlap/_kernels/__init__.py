"""Kernel backend selection.

The compiled accelerator (``_accel``, Cython) is preferred when it was built;
otherwise the NumPy implementation is used.  Set ``HYPERLAP_KERNELS=numpy``
to force the fallback, e.g. to benchmark one backend against the other.
"""

import os

from . import _numpy

if os.environ.get("HYPERLAP_KERNELS", "").lower() == "numpy":
    _impl = _numpy
else:
    try:
        from . import _accel as _impl
    except ImportError:
        _impl = _numpy

BACKEND = _impl.BACKEND_NAME

edge_sums = _impl.edge_sums
gradient_field = _impl.gradient_field
node_norms_sq = _impl.node_norms_sq
collapse_div = _impl.collapse_div
apply_clique = _impl.apply_clique
apply_edge_mean = _impl.apply_edge_mean
plap_parts = _impl.plap_parts
edge_ranges = _impl.edge_ranges


def available_backends():
    """Names of importable backend modules (for tests and benchmarks)."""
    names = ["numpy"]
    try:
        from . import _accel  # noqa: F401

        names.append(_accel.BACKEND_NAME)
    except ImportError:
        pass
    return names


def get_backend(name):
    """Return the backend module of the given name ("numpy" or "cython")."""
    if name == "numpy":
        return _numpy
    if name == "cython":
        from . import _accel

        return _accel
    raise ValueError(f"unknown kernel backend {name!r}")

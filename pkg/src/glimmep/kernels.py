"""Backend selection for the Riemann kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``GLIMMEP_BACKEND=python`` is set, the pure-Python twin
is used.  Both produce bit-identical results (same libm calls, same order).
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def get_backend(name=None):
    """Kernel module by name ("compiled" or "python"); None picks the default."""
    if name is None:
        name = os.environ.get("GLIMMEP_BACKEND", "compiled").lower()
    if name == "python":
        return _kernels_py
    if name == "compiled":
        return _compiled if _compiled is not None else _kernels_py
    raise ValueError(f"unknown kernel backend {name!r}")


_impl = get_backend()
BACKEND = "compiled" if _impl is _compiled else "python"
HAVE_COMPILED = _compiled is not None

OK = _kernels_py.OK
middle_state = _impl.middle_state
wave_speeds = _impl.wave_speeds
sample_fan = _impl.sample_fan
glimm_row = _impl.glimm_row
batch_middle = _impl.batch_middle

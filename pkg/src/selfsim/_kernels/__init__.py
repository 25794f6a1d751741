"""Hot loops with a compiled backend and a pure-Python fallback.

The compiled module is used when it was built; otherwise the Python
implementation is imported. ``BACKEND`` names the active one and both
modules stay importable for comparison.
"""
from . import _pykernels

try:
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:  # extension not built
    _impl = _pykernels
    BACKEND = "python"

OK = _pykernels.OK
MAX_STEPS = _pykernels.MAX_STEPS
ESCAPED = _pykernels.ESCAPED
NONFINITE = _pykernels.NONFINITE
AXIS = _pykernels.AXIS

planar_path = _impl.planar_path
planar_event = _impl.planar_event
profile_path = _impl.profile_path
profile_event = _impl.profile_event
rk4_step_planar = _impl.rk4_step_planar
rk4_step_profile = _impl.rk4_step_profile
curvature_vectors = _impl.curvature_vectors
csf_steps = _impl.csf_steps


def backends():
    """Available implementations keyed by name."""
    out = {"python": _pykernels}
    if BACKEND == "cython":
        out["cython"] = _impl
    return out

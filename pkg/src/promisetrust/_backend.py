"""Pick the compiled power-iteration kernel when it was built, else numpy."""

from . import _fallback

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

if _kernels is not None:
    power_iterate = _kernels.power_iterate
    BACKEND = "cython"
else:
    power_iterate = _fallback.power_iterate
    BACKEND = "python"

IMPLEMENTATIONS = {"python": _fallback.power_iterate}
if _kernels is not None:
    IMPLEMENTATIONS["cython"] = _kernels.power_iterate

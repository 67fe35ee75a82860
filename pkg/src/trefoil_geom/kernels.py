"""Backend selection for the batch kernels.

The compiled extension is used when it imports; set ``TREFOIL_GEOM_PURE=1``
to force the numpy fallback.
"""

from __future__ import annotations

import os

from trefoil_geom import _pykernels

if os.environ.get("TREFOIL_GEOM_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from trefoil_geom import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
seifert_lift_batch = _impl.seifert_lift_batch
seifert_coords_batch = _impl.seifert_coords_batch
seifert_map = _impl.seifert_map
metric_batch = _impl.metric_batch
pullback_residuals = _impl.pullback_residuals
classify_p1 = _impl.classify_p1

SL2R, NIL, SPHERICAL, UNKNOWN = _pykernels.SL2R, _pykernels.NIL, _pykernels.SPHERICAL, _pykernels.UNKNOWN


def backends() -> dict:
    """All importable backends keyed by name."""
    out = {"python": _pykernels}
    try:
        from trefoil_geom import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out

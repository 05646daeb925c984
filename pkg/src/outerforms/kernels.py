"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set ``OUTERFORMS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
isotropic_search = _pykernels.isotropic_search
residue_filter = _pykernels.residue_filter

if os.environ.get("OUTERFORMS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        isotropic_search = _ckernels.isotropic_search
        residue_filter = _ckernels.residue_filter


def backends():
    """All importable backends, keyed by name."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        return out
    out["cython"] = _ckernels
    return out

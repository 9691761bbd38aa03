"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure
Python kernels are. Setting ``VCSP_BACKDOOR_PURE=1`` forces the fallback.
"""

import os

from . import _pykernels

try:
    from . import _kernels as _native
except ImportError:  # extension not built
    _native = None

_BACKENDS = {"python": _pykernels}
if _native is not None:
    _BACKENDS["native"] = _native

_active = _pykernels if (_native is None or os.environ.get("VCSP_BACKDOOR_PURE")) else _native


def kernels():
    return _active


def backend_name() -> str:
    return _active.NAME


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def set_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}") from None

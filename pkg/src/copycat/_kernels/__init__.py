"""Backend selection for the hot kernels.

The compiled extension (`_ctree`, built from Cython) is preferred when it
imported successfully; otherwise the pure NumPy module (`_pytree`) is used.
Both produce bit-identical results, so switching backends never changes a
model or a reported number: only the runtime.

Override with the environment variable COPYCAT_BACKEND=python|compiled, or
at runtime with set_backend(). Requesting "compiled" when the extension is
not built raises.
"""

import os

from . import _pytree

_IMPLS = {"python": _pytree}
try:
    from . import _ctree

    _IMPLS["compiled"] = _ctree
except ImportError:
    _ctree = None

_DEFAULT = "compiled" if "compiled" in _IMPLS else "python"
_env = os.environ.get("COPYCAT_BACKEND", "").strip().lower()
if _env:
    if _env not in _IMPLS:
        raise ImportError(
            f"COPYCAT_BACKEND={_env!r} requested but that backend is not "
            f"available (have: {sorted(_IMPLS)})"
        )
    _active = _env
else:
    _active = _DEFAULT


def available_backends():
    return sorted(_IMPLS)


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _IMPLS:
        raise ValueError(
            f"backend {name!r} not available (have: {sorted(_IMPLS)})"
        )
    _active = name


def impl(name: str | None = None):
    """The module providing the kernel functions (current backend by default)."""
    return _IMPLS[_active if name is None else name]

"""Kernel backend selection: compiled extension if available, numpy fallback.

Set PROJCORRECT_BACKEND=python or =cython to force a backend; the default
("auto") prefers the compiled extension.  `BACKEND` names the one in use.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py


def _load(choice: str) -> tuple[ModuleType, str]:
    if choice == "python":
        return _kernels_py, "python"
    try:
        from . import _speedups  # type: ignore[attr-defined]

        return _speedups, "cython"
    except ImportError:
        if choice == "cython":
            raise ImportError(
                "PROJCORRECT_BACKEND=cython but projcorrect._speedups is not built; "
                "run `python setup.py build_ext --inplace`"
            )
        return _kernels_py, "python"


_choice = os.environ.get("PROJCORRECT_BACKEND", "auto").lower()
if _choice not in ("auto", "python", "cython"):
    raise ValueError(f"unknown PROJCORRECT_BACKEND {_choice!r}")
_impl, BACKEND = _load(_choice)

vote_pairs = _impl.vote_pairs
preserved_mask = _impl.preserved_mask
mult_gadget_exhaustive = _impl.mult_gadget_exhaustive
add_gadget_exhaustive = _impl.add_gadget_exhaustive


def available_backends() -> dict[str, ModuleType]:
    """All importable backends by name (for tests and benchmarks)."""
    out: dict[str, ModuleType] = {"python": _kernels_py}
    try:
        from . import _speedups  # type: ignore[attr-defined]

        out["cython"] = _speedups
    except ImportError:
        pass
    return out

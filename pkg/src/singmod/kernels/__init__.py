"""Exhaustive-search kernels with a numba backend and a pure-numpy fallback.

The backend is chosen per call (``backend=``) or globally through the
``SINGMOD_BACKEND`` environment variable (``numba`` or ``numpy``).
"""
from __future__ import annotations

import importlib.util
import os

HAVE_NUMBA = importlib.util.find_spec("numba") is not None

BACKENDS = ("numba", "numpy")
ENV_VAR = "SINGMOD_BACKEND"


def resolve_backend(backend: str | None = None) -> str:
    name = (backend or os.environ.get(ENV_VAR) or "numba").strip().lower()
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


from .search import SearchPlan, run_search  # noqa: E402

__all__ = ["BACKENDS", "ENV_VAR", "HAVE_NUMBA", "SearchPlan", "resolve_backend", "run_search"]

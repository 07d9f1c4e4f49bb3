"""Pick the simulation engine at import time.

The compiled ``_kernels`` extension is used when it was built; otherwise,
or when ``SWIPT_RLL_PURE=1`` is set, the pure-Python ``_fallback`` runs.
"""
import os

from . import _fallback

engine = _fallback
if not os.environ.get("SWIPT_RLL_PURE"):
    try:
        from . import _kernels as engine  # noqa: F811
    except ImportError:
        pass

ENGINES = {_fallback.NAME: _fallback}
try:
    from . import _kernels

    ENGINES[_kernels.NAME] = _kernels
except ImportError:
    pass


def get_engine(name: str | None = None):
    if name is None:
        return engine
    try:
        return ENGINES[name]
    except KeyError:
        raise ValueError(f"engine {name!r} unavailable; have {sorted(ENGINES)}") from None

"""Proportionate-type NLMS adaptive filters and experiment tooling."""

try:
    from ._ptnlms import *  # noqa: F401,F403  (installed package layout)
    from . import _ptnlms as _impl
except ImportError:  # build-tree layout: extension sits next to the package
    from _ptnlms import *  # noqa: F401,F403
    import _ptnlms as _impl

__version__ = getattr(_impl, "__version__", "0.1.0")
__all__ = [name for name in dir(_impl) if not name.startswith("_")]

"""Granularity characterization of task scheduling.

Thin package wrapper over the _granulyzer pybind11 extension: dependency
topologies, the granularity model, the deterministic simulator, model
calibration and the dynamic-vs-static decision rule.
"""

from ._granulyzer import *  # noqa: F401,F403
from ._granulyzer import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = (__doc__ or "") + "\n\n" + (_core_doc or "")

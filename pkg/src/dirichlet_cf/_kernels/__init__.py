"""Hot-loop kernels with a compiled backend and a pure-Python fallback.

The compiled module is used when it imports; set ``DIRICHLET_CF_PURE_PYTHON=1``
to force the fallback.  Both backends consume random input identically, so
seeded results agree across them.
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("DIRICHLET_CF_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

cycle_index_values = _impl.cycle_index_values
degree_sums = _impl.degree_sums
stick_breaking_cells = _impl.stick_breaking_cells
orbit_representatives = _impl.orbit_representatives

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "cycle_index_values",
    "degree_sums",
    "stick_breaking_cells",
    "orbit_representatives",
]

"""Dense exact-rational pivot kernel with swappable backends.

The compiled backend (``_speedups``, Cython) and the pure-Python backend
implement the same ``Tableau`` interface; everything algorithmic (simplex,
Gaussian elimination, double description) lives above this layer, so the two
backends can only differ in speed, never in results.

Set ``POLYSTEER_PURE=1`` to force the pure backend.
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("POLYSTEER_PURE"):
    Tableau = pure.Tableau
    BACKEND = "pure"
else:
    try:
        from . import _speedups

        Tableau = _speedups.Tableau
        BACKEND = "compiled"
    except ImportError:
        Tableau = pure.Tableau
        BACKEND = "pure"

PureTableau = pure.Tableau

__all__ = ["Tableau", "PureTableau", "BACKEND"]

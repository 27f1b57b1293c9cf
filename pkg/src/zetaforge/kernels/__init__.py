"""Hot numeric kernels with a compiled core and a pure-Python fallback.

The compiled extension (`_speedups`, built from Cython) implements the two
inner loops that dominate runtime: truncated series summation with Neumaier
compensation and batch evaluation of the Monte Carlo integrands.  When the
extension is missing -- or ``ZETAFORGE_FORCE_FALLBACK`` is set -- the numpy
fallback is used instead.  Both expose the same functions; the active
choice is recorded in ``BACKEND``.
"""

import os

if os.environ.get("ZETAFORGE_FORCE_FALLBACK"):
    from . import fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import fallback as _impl

        BACKEND = "python"

monomial_series_sum = _impl.monomial_series_sum
shifted_power_sum = _impl.shifted_power_sum
mc_eval2 = _impl.mc_eval2
mc_eval3 = _impl.mc_eval3
mc_eval4 = _impl.mc_eval4

__all__ = [
    "BACKEND",
    "monomial_series_sum",
    "shifted_power_sum",
    "mc_eval2",
    "mc_eval3",
    "mc_eval4",
]

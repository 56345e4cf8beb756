"""Backend selection for the numerical kernels.

The compiled extension ``ppnash._ckernels`` is preferred; the NumPy
fallback in ``ppnash._pykernels`` is used when the extension was not built
or ``PPNASH_PURE_PYTHON`` is set to a non-empty value.
"""

import os

try:
    if os.environ.get("PPNASH_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from ppnash import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    from ppnash import _pykernels as _impl
    BACKEND = "python"

mix_estimates = _impl.mix_estimates
pair_products = _impl.pair_products
interval_distance = _impl.interval_distance

__all__ = ["BACKEND", "mix_estimates", "pair_products", "interval_distance"]

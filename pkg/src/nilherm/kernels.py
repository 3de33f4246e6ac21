"""Kernel selection: the compiled extension when built, else the Python twin.

Set ``NILHERM_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("NILHERM_PURE_PYTHON"):
    from ._kernels_py import antiderivation_terms, merge_sign, substitute_terms, wedge_terms
    BACKEND = "python"
else:
    try:
        from ._kernels import antiderivation_terms, merge_sign, substitute_terms, wedge_terms
        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import antiderivation_terms, merge_sign, substitute_terms, wedge_terms
        BACKEND = "python"

__all__ = ["BACKEND", "merge_sign", "wedge_terms", "antiderivation_terms", "substitute_terms"]

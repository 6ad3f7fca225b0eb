"""msl: a desk-scale workbench for shifted-prime correlation experiments.

Subpackages cover segmented sieves of multiplicative functions, typical
factorization sets, Dirichlet characters, FFT-backed shifted correlations
with singular-series predictions, circle-method diagnostics, and
pretentious distances. The `msl` command line exposes the same operations.
"""

__version__ = "0.1.0"

from .errors import BudgetError, CacheError, MslError, ValidationError

__all__ = ["BudgetError", "CacheError", "MslError", "ValidationError", "__version__"]

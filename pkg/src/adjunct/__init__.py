"""Executable product/exponential adjunctions on finite structures."""

from adjunct.checks import BudgetExceeded, Verdict

__all__ = ["BudgetExceeded", "Verdict"]
__version__ = "0.1.0"

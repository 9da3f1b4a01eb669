"""Switch-level simulation of dual-rail reversible networks.

The package runs classical emulations of the Deutsch, Deutsch-Jozsa,
Bernstein-Vazirani and Simon procedures on ideal N/P switch networks and
checks them against independent reference solvers in :mod:`ttmsim.oracle`.
"""

from .errors import (
    BudgetExceeded,
    ConflictError,
    FloatingError,
    PromiseViolation,
    RedundantInput,
    SecretZero,
    TTMError,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ConflictError",
    "FloatingError",
    "PromiseViolation",
    "RedundantInput",
    "SecretZero",
    "TTMError",
    "__version__",
]

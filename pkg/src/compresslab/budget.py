"""Enumeration budget guard.

Everything in this package is computed by exhaustive enumeration, so every
operation that is about to walk a combinatorial space first checks the row
count against a global cap.  The default cap is 2**24 rows and can be raised
or lowered with the COMPLAB_BUDGET environment variable.  Exceeding the cap
is a hard error, never a silent fallback to sampling.
"""

import os

DEFAULT_BUDGET = 2**24

_ENV_VAR = "COMPLAB_BUDGET"


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured row budget."""


def enumeration_budget() -> int:
    """Current enumeration cap in table rows."""
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{_ENV_VAR} must be positive, got {value}")
    return value


def check_enumeration(rows: int, what: str) -> None:
    """Raise BudgetExceededError if *rows* exceeds the configured cap."""
    cap = enumeration_budget()
    if rows > cap:
        raise BudgetExceededError(
            f"{what} needs {rows} rows, exceeding the enumeration budget of {cap} "
            f"(override with {_ENV_VAR})"
        )

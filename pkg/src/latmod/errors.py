"""Shared exception types and the work-budget guard."""

import os

DEFAULT_BUDGET = 2_000_000_000_000  # abstract work units (~DFS nodes / DP cells)
BUDGET_ENV_VAR = "LATMOD_BUDGET"


class BudgetError(RuntimeError):
    """Projected work exceeds the configured budget (CLI exit code 3)."""


class ConsistencyError(RuntimeError):
    """Two supposedly-equal internal routes disagree (CLI exit code 4)."""


def effective_budget(budget=None):
    """Resolve the work budget: explicit argument, else env var, else default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV_VAR)
    if env:
        return int(float(env))
    return DEFAULT_BUDGET


def check_budget(projected_work, budget=None, what=""):
    """Raise BudgetError if projected_work exceeds the effective budget."""
    limit = effective_budget(budget)
    if projected_work > limit:
        raise BudgetError(
            f"projected work {projected_work:.3g} exceeds budget {limit:.3g}"
            + (f" for {what}" if what else "")
        )

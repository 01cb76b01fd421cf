"""Global arithmetic context: the prime, working precision and budgets."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PadicContext:
    """Fixed parameters of one computation.

    p           -- residue characteristic (prime), pi = p is the uniformizer
    precision   -- number of stored unit digits N; all units live mod p^N
    prec_floor  -- minimal acceptable effective precision after cancellation
    budget      -- cap on enumerated cosets/grid points (p^{4n} per level n)
    tol         -- tolerance for complex comparisons
    """

    p: int
    precision: int = 6
    prec_floor: int = 1
    budget: int = 10**6
    tol: float = 1e-9

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ConfigurationError(f"p = {self.p} is not prime")
        if self.precision < 2:
            raise ConfigurationError("precision N must be >= 2")
        if not (1 <= self.prec_floor <= self.precision):
            raise ConfigurationError("prec_floor must lie in [1, N]")

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def pow(self, k: int) -> int:
        """p^k for k >= 0."""
        return self.p**k

    def check_budget(self, count: int, what: str = "enumeration"):
        if count > self.budget:
            raise BudgetError(
                f"{what} needs {count} items, budget is {self.budget}"
            )


from .errors import BudgetError  # noqa: E402  (cycle-free tail import)

"""Characters of Q_p^* and of the Borel subgroup.

Unit-part characters of (Z/p^m)^* are stored exactly as a table of
root-of-unity exponents over a common denominator, so products, inverses and
conductor reduction are integer arithmetic; only the evaluation into C and the
unramified value at pi are floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvariantError
from .local_field import LocalFieldElem


def euler_phi_prime_power(p: int, m: int) -> int:
    return 1 if m == 0 else p ** (m - 1) * (p - 1)


@lru_cache(maxsize=None)
def unit_group(p: int, m: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Generators and their orders for (Z/p^m)^*."""
    if m == 0:
        return (), ()
    if p == 2:
        if m == 1:
            return (), ()
        if m == 2:
            return (3,), (2,)
        return (2**m - 1, 5), (2, 2 ** (m - 2))
    pm = p**m
    phi = euler_phi_prime_power(p, m)
    for g in range(2, pm):
        if g % p == 0:
            continue
        # order check against maximal proper divisors of phi
        ok = all(pow(g, phi // q, pm) != 1 for q in _prime_divisors(phi))
        if ok:
            return (g,), (phi,)
    raise InvariantError(f"no generator found for (Z/{p}^{m})^*")


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def dlog_table(p: int, m: int) -> dict[int, tuple[int, ...]]:
    """unit mod p^m -> exponent vector over the canonical generators."""
    gens, orders = unit_group(p, m)
    pm = p**m
    table = {1 % pm: tuple(0 for _ in gens)}
    frontier = [(1 % pm, tuple(0 for _ in gens))]
    # BFS over the abelian group; sizes stay tiny at desk scale
    while frontier:
        u, vec = frontier.pop()
        for i, g in enumerate(gens):
            w = (u * g) % pm
            if w not in table:
                nv = list(vec)
                nv[i] = (nv[i] + 1) % orders[i]
                table[w] = tuple(nv)
                frontier.append((w, tuple(nv)))
    if len(table) != euler_phi_prime_power(p, m):
        raise InvariantError("unit group enumeration incomplete")
    return table


@dataclass(frozen=True)
class UnitCharacter:
    """Character of (Z/p^m)^*, primitive at its stored conductor m.

    values: chi(u) = exp(2 pi i * table[u] / den) for u coprime to p.
    m = 0 is the trivial character.
    """

    p: int
    m: int
    den: int
    table: tuple[int, ...]

    # -- constructors --------------------------------------------------------

    @staticmethod
    def trivial(p: int) -> "UnitCharacter":
        return UnitCharacter(p, 0, 1, (0,))

    @staticmethod
    def from_table(p: int, m: int, den: int, table: tuple[int, ...],
                   reduce: bool = True) -> "UnitCharacter":
        chi = UnitCharacter(p, m, den, tuple(e % den for e in table))
        return chi._canonical() if reduce else chi

    @staticmethod
    def from_gen_exponents(p: int, m: int, exps: tuple[int, ...],
                           reduce: bool = True) -> "UnitCharacter":
        """chi(g_i) = exp(2 pi i exps[i] / ord(g_i)) on the canonical generators."""
        gens, orders = unit_group(p, m)
        if len(exps) != len(gens):
            raise ValueError(f"expected {len(gens)} exponents for (Z/{p}^{m})^*")
        if m == 0:
            return UnitCharacter.trivial(p)
        den = math.lcm(*orders) if orders else 1
        dlog = dlog_table(p, m)
        pm = p**m
        table = [0] * pm
        for u, vec in dlog.items():
            e = sum((den // o) * x * v for o, x, v in zip(orders, exps, vec))
            table[u] = e % den
        return UnitCharacter.from_table(p, m, den, tuple(table), reduce=reduce)

    # -- canonicalization -----------------------------------------------------

    def _canonical(self) -> "UnitCharacter":
        chi = self
        # shrink the conductor while the character is trivial on 1 + p^(m-1)
        while chi.m >= 1:
            pm = chi.p**chi.m
            if chi.m == 1:
                if any(chi.table[u] for u in range(1, pm) if u % chi.p):
                    break
                chi = UnitCharacter.trivial(chi.p)
                continue
            pk = chi.p ** (chi.m - 1)
            if any(chi.table[(1 + pk * t) % pm] for t in range(chi.p)):
                break
            table = tuple(chi.table[u] for u in range(pk))
            # well-defined: value depends only on u mod p^(m-1) here
            chi = UnitCharacter(chi.p, chi.m - 1, chi.den, table)
        # reduce the denominator
        g = math.gcd(chi.den, *chi.table) if any(chi.table) else chi.den
        if g > 1:
            chi = UnitCharacter(chi.p, chi.m, chi.den // g,
                                tuple(e // g for e in chi.table))
        return chi

    # -- queries ---------------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self.m

    def is_trivial(self) -> bool:
        return self.m == 0

    def check_primitive(self):
        """Raise InvariantError when the stored conductor is not exact."""
        if self.m != self._canonical().m:
            raise InvariantError(
                f"character stored at conductor {self.m} factors through a "
                "smaller level"
            )

    def exponent_of(self, u: int):
        if self.m == 0:
            return 0
        pm = self.p**self.m
        u %= pm
        if u % self.p == 0:
            raise ValueError("evaluation at a non-unit")
        return self.table[u]

    def value(self, u: int) -> complex:
        e = self.exponent_of(u)
        if e == 0:
            return 1.0 + 0.0j
        return cmath.exp(2j * cmath.pi * e / self.den)

    # -- arithmetic --------------------------------------------------------------

    def _lift(self, m: int) -> "UnitCharacter":
        if m == self.m:
            return self
        if m < self.m:
            raise ValueError("cannot lower the level of a character table")
        pm, pM = self.p**self.m, self.p**m
        table = tuple(self.table[u % pm] if u % self.p else 0 for u in range(pM))
        return UnitCharacter(self.p, m, self.den, table)

    def __mul__(self, other: "UnitCharacter") -> "UnitCharacter":
        m = max(self.m, other.m)
        a, b = self._lift(m), other._lift(m)
        den = math.lcm(a.den, b.den)
        table = tuple(
            ((den // a.den) * ea + (den // b.den) * eb) % den
            for ea, eb in zip(a.table, b.table)
        )
        return UnitCharacter.from_table(self.p, m, den, table)

    def inv(self) -> "UnitCharacter":
        return UnitCharacter(self.p, self.m, self.den,
                             tuple((-e) % self.den for e in self.table))

    def __pow__(self, k: int) -> "UnitCharacter":
        return UnitCharacter.from_table(
            self.p, self.m, self.den, tuple((k * e) % self.den for e in self.table)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitCharacter):
            return NotImplemented
        if (self.p, self.m) != (other.p, other.m):
            return False
        den = math.lcm(self.den, other.den)
        return all(
            (den // self.den) * a % den == (den // other.den) * b % den
            for a, b in zip(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.p, self.m))


def enumerate_unit_characters(p: int, max_cond: int):
    """All characters of conductor <= max_cond, each reduced to its conductor."""
    import itertools

    seen, out = set(), []
    gens, orders = unit_group(p, max_cond)
    for exps in itertools.product(*(range(o) for o in orders)) if orders else [()]:
        chi = UnitCharacter.from_gen_exponents(p, max_cond, tuple(exps))
        key = (chi.m, chi.den, chi.table)
        if key not in seen:
            seen.add(key)
            out.append(chi)
    out.sort(key=lambda c: (c.m, c.table))
    return out


@dataclass(frozen=True)
class MultChar:
    """Character of F^* = p^Z x Z_p^*: an unramified value at pi and a unit part."""

    unramified: complex
    unit: UnitCharacter

    @staticmethod
    def make(p: int, unramified: complex = 1.0,
             unit: UnitCharacter | None = None) -> "MultChar":
        if unramified == 0:
            raise ValueError("the value at pi must be nonzero")
        return MultChar(complex(unramified), unit or UnitCharacter.trivial(p))

    @staticmethod
    def norm_char(p: int, s: float = 1.0) -> "MultChar":
        """|.|^s, so pi maps to p^(-s)."""
        return MultChar.make(p, float(p) ** (-s))

    @property
    def p(self) -> int:
        return self.unit.p

    @property
    def conductor(self) -> int:
        self.unit.check_primitive()
        return self.unit.m

    def is_unramified(self) -> bool:
        return self.unit.is_trivial()

    # -- evaluation -------------------------------------------------------------

    def value_at(self, val: int, unit_residue: int) -> complex:
        return self.unramified**val * self.unit.value(unit_residue)

    def __call__(self, x: LocalFieldElem) -> complex:
        if x.is_zero:
            raise ValueError("characters of F^* are undefined at 0")
        m = self.unit.m
        u = 1 if m == 0 else x.unit_residue(m)
        return self.value_at(x.val, u)

    def at_pi(self, k: int = 1) -> complex:
        return self.unramified**k

    def at_minus_one(self) -> complex:
        return self.unit.value(-1) if self.unit.m else 1.0 + 0.0j

    # -- arithmetic --------------------------------------------------------------

    def __mul__(self, other: "MultChar") -> "MultChar":
        return MultChar(self.unramified * other.unramified, self.unit * other.unit)

    def inv(self) -> "MultChar":
        return MultChar(1 / self.unramified, self.unit.inv())

    def __pow__(self, k: int) -> "MultChar":
        if k >= 0:
            u = self.unit**k
        else:
            u = (self.unit.inv()) ** (-k)
        return MultChar(self.unramified**k, u)

    def approx_eq(self, other: "MultChar", tol: float = 1e-9) -> bool:
        return self.unit == other.unit and abs(self.unramified - other.unramified) <= tol

    def is_trivial(self, tol: float = 1e-9) -> bool:
        return self.unit.is_trivial() and abs(self.unramified - 1) <= tol


def eval_char(chi: MultChar, x: LocalFieldElem) -> complex:
    return chi(x)


def conductor(chi: MultChar) -> int:
    return chi.conductor


@dataclass(frozen=True)
class BorelChar:
    """Pair (mu, mu') evaluated on upper-triangular matrices as mu(a) mu'(d)."""

    mu: MultChar
    mu_prime: MultChar

    @property
    def p(self) -> int:
        return self.mu.p

    def value(self, a: LocalFieldElem, d: LocalFieldElem) -> complex:
        return self.mu(a) * self.mu_prime(d)

    def delta(self, a: LocalFieldElem, d: LocalFieldElem) -> float:
        """delta(b) = |a/d|."""
        return float(self.p) ** (d.valuation() - a.valuation())

    def value_delta_half(self, a: LocalFieldElem, d: LocalFieldElem) -> complex:
        return self.value(a, d) * math.sqrt(self.delta(a, d))

    @property
    def omega(self) -> MultChar:
        return self.mu * self.mu_prime

    @property
    def conductor(self) -> int:
        return self.mu.conductor + self.mu_prime.conductor

    # alpha^-1 = mu(pi) |pi|^(1/2), beta^-1 = mu'(pi) |pi|^(-1/2)
    @property
    def alpha(self) -> complex:
        return 1 / (self.mu.at_pi() / math.sqrt(self.p))

    @property
    def beta(self) -> complex:
        return 1 / (self.mu_prime.at_pi() * math.sqrt(self.p))

    def swap(self) -> "BorelChar":
        return BorelChar(self.mu_prime, self.mu)

    def inv(self) -> "BorelChar":
        return BorelChar(self.mu.inv(), self.mu_prime.inv())

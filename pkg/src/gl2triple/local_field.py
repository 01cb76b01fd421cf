"""Truncated arithmetic in F = Q_p and the standard additive character.

An element is stored as pi^val * unit with the unit kept modulo p^N.  Addition
tracks the effective precision of the result; a result whose known digits all
cancel collapses to the zero element, while a nonzero result that retains
fewer than ``prec_floor`` digits raises PrecisionError instead of silently
rounding.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .context import PadicContext
from .errors import PrecisionError


def padic_val(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class LocalFieldElem:
    """pi^val * unit, unit coprime to p, stored mod p^N.

    val is None for the zero element (valuation +infinity).  ``prec`` is the
    number of trustworthy unit digits (<= N); freshly constructed elements
    carry full precision.
    """

    ctx: PadicContext
    val: int | None
    unit: int
    prec: int

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx: PadicContext) -> "LocalFieldElem":
        return LocalFieldElem(ctx, None, 1, ctx.precision)

    @staticmethod
    def from_unit_val(ctx: PadicContext, val: int, unit: int,
                      prec: int | None = None) -> "LocalFieldElem":
        p, N = ctx.p, ctx.precision
        u = unit % ctx.modulus
        if u % p == 0:
            raise ValueError(f"unit {unit} is divisible by p = {p}")
        return LocalFieldElem(ctx, val, u, ctx.precision if prec is None else prec)

    @staticmethod
    def from_int(ctx: PadicContext, n: int) -> "LocalFieldElem":
        if n == 0:
            return LocalFieldElem.zero(ctx)
        v = padic_val(n, ctx.p)
        return LocalFieldElem.from_unit_val(ctx, v, n // ctx.p**v)

    @staticmethod
    def from_rational(ctx: PadicContext, num: int, den: int) -> "LocalFieldElem":
        """num/den with den nonzero; exact at working precision."""
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        return LocalFieldElem.from_int(ctx, num) / LocalFieldElem.from_int(ctx, den)

    @staticmethod
    def pi_pow(ctx: PadicContext, k: int) -> "LocalFieldElem":
        return LocalFieldElem.from_unit_val(ctx, k, 1)

    @staticmethod
    def one(ctx: PadicContext) -> "LocalFieldElem":
        return LocalFieldElem.from_unit_val(ctx, 0, 1)

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.val is None

    def valuation(self) -> int:
        if self.is_zero:
            raise ValueError("valuation of the zero element is +infinity")
        return self.val

    def is_unit(self) -> bool:
        return self.val == 0

    def is_integral(self) -> bool:
        return self.is_zero or self.val >= 0

    # -- arithmetic --------------------------------------------------------

    def _check_floor(self) -> "LocalFieldElem":
        if not self.is_zero and self.prec < self.ctx.prec_floor:
            raise PrecisionError(
                f"effective precision {self.prec} fell below the floor "
                f"{self.ctx.prec_floor}"
            )
        return self

    def __mul__(self, other: "LocalFieldElem") -> "LocalFieldElem":
        if self.is_zero or other.is_zero:
            return LocalFieldElem.zero(self.ctx)
        return LocalFieldElem(
            self.ctx,
            self.val + other.val,
            (self.unit * other.unit) % self.ctx.modulus,
            min(self.prec, other.prec),
        )._check_floor()

    def inv(self) -> "LocalFieldElem":
        if self.is_zero:
            raise ZeroDivisionError("inversion of the zero element")
        u = pow(self.unit, -1, self.ctx.modulus)
        return LocalFieldElem(self.ctx, -self.val, u, self.prec)

    def __truediv__(self, other: "LocalFieldElem") -> "LocalFieldElem":
        return self * other.inv()

    def __neg__(self) -> "LocalFieldElem":
        if self.is_zero:
            return self
        return LocalFieldElem(self.ctx, self.val,
                              (-self.unit) % self.ctx.modulus, self.prec)

    def __add__(self, other: "LocalFieldElem") -> "LocalFieldElem":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        ctx = self.ctx
        p = ctx.p
        # absolute precision: digits of the sum are known below p^abs_prec
        abs_prec = min(self.val + self.prec, other.val + other.prec)
        v0 = min(self.val, other.val)
        window = abs_prec - v0
        if window <= 0:
            raise PrecisionError("operands share no known digits")
        mod = p**window
        s = (self.unit * p ** (self.val - v0)
             + other.unit * p ** (other.val - v0)) % mod
        if s == 0:
            # all known digits cancel: zero at working precision
            return LocalFieldElem.zero(ctx)
        dv = padic_val(s, p)
        return LocalFieldElem(
            ctx, v0 + dv, (s // p**dv) % ctx.modulus, min(window - dv, ctx.precision)
        )._check_floor()

    def __sub__(self, other: "LocalFieldElem") -> "LocalFieldElem":
        return self + (-other)

    # -- comparisons and views ----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalFieldElem):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        if self.val != other.val:
            return False
        k = min(self.prec, other.prec)
        return (self.unit - other.unit) % self.ctx.p**k == 0

    def residue(self, k: int) -> int:
        """The canonical representative modulo p^k (requires val >= 0)."""
        if self.is_zero:
            return 0
        if self.val < 0:
            raise ValueError("residue of a non-integral element")
        if self.val + self.prec < k:
            raise PrecisionError(f"residue mod p^{k} not determined")
        if self.val >= k:
            return 0
        return (self.unit * self.ctx.p**self.val) % self.ctx.p**k

    def unit_residue(self, k: int) -> int:
        """unit part modulo p^k."""
        if self.is_zero:
            raise ValueError("the zero element has no unit part")
        if self.prec < k:
            raise PrecisionError(f"unit residue mod p^{k} not determined")
        return self.unit % self.ctx.p**k

    def __repr__(self):
        if self.is_zero:
            return "0"
        return f"p^{self.val}*{self.unit}"


# -- module operations -------------------------------------------------------


def arith(x: LocalFieldElem, y: LocalFieldElem | None, kind: str) -> LocalFieldElem:
    """Uniform entry point: kind in {add, mul, inv, neg}."""
    if kind == "add":
        return x + y
    if kind == "mul":
        return x * y
    if kind == "inv":
        return x.inv()
    if kind == "neg":
        return -x
    raise ValueError(f"unknown kind {kind!r}")


def abs_norm(x: LocalFieldElem) -> float:
    """|x| = p^(-val x); 0 for the zero element."""
    if x.is_zero:
        return 0.0
    return float(x.ctx.p) ** (-x.val)


def additive_char(x: LocalFieldElem) -> complex:
    """exp(2 pi i {x}) for the p-adic fractional part {x}; conductor 0."""
    if x.is_zero or x.val >= 0:
        return 1.0 + 0.0j
    k = -x.val
    if k > x.ctx.precision:
        raise PrecisionError(
            f"fractional part needs {k} digits, precision is {x.ctx.precision}"
        )
    if x.prec < k:
        raise PrecisionError("fractional part not determined at this precision")
    pk = x.ctx.p**k
    return cmath.exp(2j * cmath.pi * (x.unit % pk) / pk)

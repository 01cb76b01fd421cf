"""Matrix algebra over F, Iwasawa decomposition, subgroups and coset tables.

Every integral over K is a normalized finite sum: vol(K) = 1 and each coset of
the principal congruence subgroup at level n carries mass 1/|GL2(Z/p^n)|.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .context import PadicContext
from .errors import BudgetError, InvariantError, PrecisionError
from .local_field import LocalFieldElem


@dataclass(frozen=True)
class GL2Elem:
    a: LocalFieldElem
    b: LocalFieldElem
    c: LocalFieldElem
    d: LocalFieldElem

    @property
    def ctx(self) -> PadicContext:
        return self.a.ctx

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_ints(ctx: PadicContext, quad) -> "GL2Elem":
        a, b, c, d = (LocalFieldElem.from_int(ctx, int(x)) for x in quad)
        g = GL2Elem(a, b, c, d)
        if g.det().is_zero:
            raise InvariantError(f"matrix {quad} is singular at precision N")
        return g

    @staticmethod
    def identity(ctx: PadicContext) -> "GL2Elem":
        one, zero = LocalFieldElem.one(ctx), LocalFieldElem.zero(ctx)
        return GL2Elem(one, zero, zero, one)

    @staticmethod
    def diag(x: LocalFieldElem, y: LocalFieldElem) -> "GL2Elem":
        zero = LocalFieldElem.zero(x.ctx)
        return GL2Elem(x, zero, zero, y)

    @staticmethod
    def gamma_pow(ctx: PadicContext, r: int) -> "GL2Elem":
        """gamma^r with gamma = diag(pi^-1, 1)."""
        return GL2Elem.diag(LocalFieldElem.pi_pow(ctx, -r), LocalFieldElem.one(ctx))

    @staticmethod
    def w_tilde(ctx: PadicContext) -> "GL2Elem":
        one, zero = LocalFieldElem.one(ctx), LocalFieldElem.zero(ctx)
        return GL2Elem(zero, one, one, zero)

    @staticmethod
    def atkin_lehner_elem(ctx: PadicContext, n: int) -> "GL2Elem":
        """(0, 1; pi^n, 0)."""
        one, zero = LocalFieldElem.one(ctx), LocalFieldElem.zero(ctx)
        return GL2Elem(zero, one, LocalFieldElem.pi_pow(ctx, n), zero)

    @staticmethod
    def unipotent_upper(x: LocalFieldElem) -> "GL2Elem":
        one, zero = LocalFieldElem.one(x.ctx), LocalFieldElem.zero(x.ctx)
        return GL2Elem(one, x, zero, one)

    @staticmethod
    def unipotent_lower(x: LocalFieldElem) -> "GL2Elem":
        one, zero = LocalFieldElem.one(x.ctx), LocalFieldElem.zero(x.ctx)
        return GL2Elem(one, zero, x, one)

    # -- algebra ---------------------------------------------------------------

    def det(self) -> LocalFieldElem:
        return self.a * self.d - self.b * self.c

    def __mul__(self, o: "GL2Elem") -> "GL2Elem":
        return GL2Elem(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inv(self) -> "GL2Elem":
        dt = self.det()
        if dt.is_zero:
            raise ZeroDivisionError("matrix is singular")
        di = dt.inv()
        return GL2Elem(self.d * di, -(self.b * di), -(self.c * di), self.a * di)

    def scale(self, x: LocalFieldElem) -> "GL2Elem":
        return GL2Elem(self.a * x, self.b * x, self.c * x, self.d * x)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def min_val(self) -> int:
        vals = [e.val for e in self.entries() if not e.is_zero]
        return min(vals)

    def conj_by_gamma(self, r: int) -> "GL2Elem":
        """gamma^-r * g * gamma^r = (a, pi^r b; pi^-r c, d)."""
        pr = LocalFieldElem.pi_pow(self.ctx, r)
        return GL2Elem(self.a, self.b * pr, self.c * pr.inv(), self.d)

    # -- reductions --------------------------------------------------------------

    def reduce_key(self, level: int):
        """Entrywise representative mod p^level (entries must be integral)."""
        if level == 0:
            return (0, 0, 0, 0)
        return tuple(e.residue(level) for e in self.entries())

    def __repr__(self):
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


# -- subgroup membership --------------------------------------------------------


@dataclass(frozen=True)
class SubgroupSpec:
    """tag in {K, I, Kprin, J, I1}; level n (ignored for K)."""

    tag: str
    n: int = 0


def _val_ge(x: LocalFieldElem, k: int) -> bool:
    return x.is_zero or x.val >= k


def is_member(g: GL2Elem, spec: SubgroupSpec) -> bool:
    tag, n = spec.tag, spec.n
    N = g.ctx.precision
    if tag in ("I", "Kprin", "J", "I1") and n > N:
        raise PrecisionError(f"membership at level {n} exceeds precision {N}")
    in_K = all(_val_ge(e, 0) for e in g.entries()) and g.det().is_unit()
    if tag == "K":
        return in_K
    if tag == "I":
        return in_K and _val_ge(g.c, n)
    if tag == "Kprin":
        one = LocalFieldElem.one(g.ctx)
        return (
            in_K
            and _val_ge(g.a - one, n)
            and _val_ge(g.d - one, n)
            and _val_ge(g.b, n)
            and _val_ge(g.c, n)
        )
    if tag == "J":
        # the open compact subset (1, O; pi^n O, 1); exact ones on the diagonal
        one = LocalFieldElem.one(g.ctx)
        return (
            _val_ge(g.a - one, N)
            and _val_ge(g.d - one, N)
            and _val_ge(g.b, 0)
            and _val_ge(g.c, n)
        )
    if tag == "I1":
        one = LocalFieldElem.one(g.ctx)
        return (
            in_K
            and _val_ge(g.a - one, n)
            and _val_ge(g.d - one, n)
            and _val_ge(g.c, n)
        )
    raise ValueError(f"unknown subgroup tag {tag!r}")


def in_gamma_conj_K(g: GL2Elem, r: int) -> bool:
    """Membership in gamma^r K gamma^-r."""
    return is_member(g.conj_by_gamma(r), SubgroupSpec("K"))


def shell_depth(k: GL2Elem) -> int:
    """s with k in I_s \\ I_{s+1}; capped at the precision N for zero-ish c."""
    if not is_member(k, SubgroupSpec("K")):
        raise ValueError("shell_depth is defined on K")
    if k.c.is_zero:
        return k.ctx.precision
    return min(k.c.val, k.ctx.precision)


# -- Iwasawa decomposition ---------------------------------------------------------


def iwasawa(g: GL2Elem) -> tuple[GL2Elem, GL2Elem]:
    """g = b k with b upper triangular and k in K, deterministic choice.

    Members of K decompose as (1, g).  Otherwise the pivot column is the one
    with the smaller bottom-entry valuation, ties toward a unit lower-left k.
    """
    ctx = g.ctx
    if is_member(g, SubgroupSpec("K")):
        return GL2Elem.identity(ctx), g
    zero = LocalFieldElem.zero(ctx)
    one = LocalFieldElem.one(ctx)
    c, d = g.c, g.d
    if c.is_zero and d.is_zero:
        raise InvariantError("zero bottom row")
    case1 = d.is_zero is False and (c.is_zero or c.val >= d.val)
    if case1:
        t = c / d if not c.is_zero else zero
        k = GL2Elem(one, zero, t, one)
        bmat = GL2Elem(g.a - g.b * t, g.b, zero, d)
    else:
        s = d / c if not d.is_zero else zero
        k = GL2Elem(zero, one, one, s)
        bmat = GL2Elem(g.b - g.a * s, g.a, zero, c)
    if bmat.a.is_zero or bmat.d.is_zero:
        raise PrecisionError("Iwasawa pivot not determined at this precision")
    return bmat, k


# -- coset enumeration ---------------------------------------------------------------


@dataclass(frozen=True)
class CosetTable:
    """Representatives of K / Kprin_n as integer matrices mod p^n."""

    p: int
    n: int
    keys: np.ndarray       # shape (M, 4) int64, entries reduced mod p^n
    enc_to_idx: np.ndarray  # length p^(4n), -1 for non-invertible residues

    @property
    def size(self) -> int:
        return len(self.keys)

    @property
    def mass(self) -> float:
        return 1.0 / self.size

    def encode(self, key) -> int:
        P = self.p**self.n
        a, b, c, d = key
        return ((a * P + b) * P + c) * P + d

    def index_of(self, key) -> int:
        i = int(self.enc_to_idx[self.encode(key)])
        if i < 0:
            raise KeyError(f"{key} is not an invertible residue matrix")
        return i

    def key_tuples(self):
        return [tuple(int(x) for x in row) for row in self.keys]


def gl2_order(p: int, n: int) -> int:
    if n == 0:
        return 1
    return (p**2 - 1) * (p**2 - p) * p ** (4 * (n - 1))


@lru_cache(maxsize=None)
def _coset_table(p: int, n: int) -> CosetTable:
    if n == 0:
        keys = np.zeros((1, 4), dtype=np.int64)
        return CosetTable(p, 0, keys, np.zeros(1, dtype=np.int64))
    P = p**n
    rng = np.arange(P, dtype=np.int64)
    a, b, c, d = np.meshgrid(rng, rng, rng, rng, indexing="ij")
    a, b, c, d = (x.ravel() for x in (a, b, c, d))
    det = (a * d - b * c) % P
    mask = det % p != 0
    keys = np.stack([a[mask], b[mask], c[mask], d[mask]], axis=1)
    enc = ((keys[:, 0] * P + keys[:, 1]) * P + keys[:, 2]) * P + keys[:, 3]
    enc_to_idx = np.full(P**4, -1, dtype=np.int64)
    enc_to_idx[enc] = np.arange(len(keys))
    table = CosetTable(p, n, keys, enc_to_idx)
    if table.size != gl2_order(p, n):
        raise InvariantError("coset count disagrees with |GL2(Z/p^n)|")
    return table


def enumerate_cosets(ctx: PadicContext, n: int) -> CosetTable:
    ctx.check_budget(ctx.p ** (4 * n), f"coset enumeration at level {n}")
    return _coset_table(ctx.p, n)


def key_to_elem(ctx: PadicContext, key, level: int) -> GL2Elem:
    """Lift a residue key to an exact integral matrix (identity at level 0)."""
    if level == 0:
        return GL2Elem.identity(ctx)
    a, b, c, d = (int(x) for x in key)
    P = ctx.p**level
    g = GL2Elem(
        LocalFieldElem.from_int(ctx, a),
        LocalFieldElem.from_int(ctx, b),
        LocalFieldElem.from_int(ctx, c),
        LocalFieldElem.from_int(ctx, d),
    )
    if ((a * d - b * c) % P) % ctx.p == 0:
        raise InvariantError(f"key {key} is not invertible mod p")
    return g


def key_mul(p: int, level: int, k1, k2):
    """Product of residue keys mod p^level."""
    P = p**level
    a1, b1, c1, d1 = k1
    a2, b2, c2, d2 = k2
    return (
        (a1 * a2 + b1 * c2) % P,
        (a1 * b2 + b1 * d2) % P,
        (c1 * a2 + d1 * c2) % P,
        (c1 * b2 + d1 * d2) % P,
    )


def vol_subgroup_cosets(ctx: PadicContext, count_at_level: int, level: int) -> float:
    """Mass of a union of count_at_level level-`level` cosets, vol(K) = 1."""
    return count_at_level / gl2_order(ctx.p, level)


def iwahori_index(p: int, n: int) -> int:
    """[K : I_n] = (p+1) p^(n-1) for n >= 1."""
    return 1 if n == 0 else (p + 1) * p ** (n - 1)


def vol_iwahori(p: int, n: int) -> float:
    return 1.0 / iwahori_index(p, n)


def vol_J(p: int, n: int) -> float:
    """Level-n coset mass of the subset J_n inside K."""
    return p**n / gl2_order(p, n)


# -- structural identities from the background section -------------------------------


def support_identity_check(ctx: PadicContext, r: int, s: int) -> bool:
    """K cap B gamma^r I_s gamma^-r = I_{s+r}, checked on level r+s+1 cosets.

    Solvability of k in B gamma^r I_s gamma^-r amounts to: d is a unit and
    val(c) >= s + r (bottom row of gamma^-r k gamma^r lies in the I_s cone).
    """
    if s < 1 or r < 0 or r + s > ctx.precision - 1:
        raise ValueError("need s >= 1, r >= 0, r + s <= N - 1")
    level = r + s + 1
    table = enumerate_cosets(ctx, level)
    P = ctx.p**level
    a, b, c, d = (table.keys[:, i] for i in range(4))
    valc = np.full(len(c), level, dtype=np.int64)
    cc = c.copy()
    for v in range(level):
        fresh = (cc % ctx.p != 0) & (valc == level)
        valc[fresh] = v
        cc //= ctx.p
    d_unit = d % ctx.p != 0
    lhs = d_unit & (valc >= s + r)          # solvable k = b * gamma^r i gamma^-r
    rhs = valc >= s + r                      # k in I_{s+r}
    # inside K, val(c) >= 1 forces d to be a unit, so the two sides must agree
    return bool(np.all(lhs == rhs))


def decomposition_factors(k: GL2Elem, r: int):
    """The three-factor decomposition of gamma^-r k gamma^r for k in I_{n+r}.

    Requires c != 0; m is val(c) - r.  Returns (B-part, (1,0;pi^m,1), diag).
    """
    ctx = k.ctx
    if k.c.is_zero:
        raise ValueError("decomposition needs a nonzero lower-left entry")
    m = k.c.val - r
    det = k.det()
    pm = LocalFieldElem.pi_pow(ctx, m)
    pmr = LocalFieldElem.pi_pow(ctx, m + r)
    zero = LocalFieldElem.zero(ctx)
    one = LocalFieldElem.one(ctx)
    b_part = GL2Elem(det, (k.c / pm) * k.b, zero, (k.c / pmr) * k.d)
    mid = GL2Elem(one, zero, pm, one)
    diag = GL2Elem.diag(k.d.inv(), pmr / k.c)
    return b_part, mid, diag


def decomposition2_factors(k: GL2Elem, r: int):
    """The unipotent-style decomposition of gamma^-r k gamma^r for k in I_s \\ I_{s+1}."""
    ctx = k.ctx
    if k.c.is_zero:
        raise ValueError("decomposition needs a nonzero lower-left entry")
    det = k.det()
    pr_c = k.c / LocalFieldElem.pi_pow(ctx, r)   # pi^-r c
    zero = LocalFieldElem.zero(ctx)
    one = LocalFieldElem.one(ctx)
    ratio = det / pr_c
    b_part = GL2Elem(-ratio, k.a + ratio, zero, pr_c)
    mid = GL2Elem(one, zero, one, one)
    third = GL2Elem(one, one + k.d / pr_c, zero, -one)
    return b_part, mid, third

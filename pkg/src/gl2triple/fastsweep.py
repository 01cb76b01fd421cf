"""Vectorized exhaustive sweeps over GL2(Z/p^L) for the translate lemmas.

The object path in ``reps`` rebuilds tables one Iwasawa decomposition at a
time, which is fine up to a few thousand cosets.  The exhaustive lemma checks
run over tens of millions of residue matrices, so this module re-implements
the evaluation (gamma^r . v)(k) = chi delta^(1/2)(b) v(k') with numpy integer
arrays, streaming the grid in slabs.  Agreement of the two paths is itself a
test at small levels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .context import PadicContext
from .errors import BudgetError
from .characters import MultChar
from .reps import InducedVector, RepSpec

def _val_and_unit(x: np.ndarray, p: int, level: int):
    """Valuation (capped at level) and unit part (1 where x = 0) of residues."""
    cur = x.copy()
    v = np.zeros(x.shape, dtype=np.int64)
    alive = cur != 0
    for _ in range(level):
        div = alive & (cur % p == 0)
        if not div.any():
            break
        cur[div] //= p
        v[div] += 1
    val = np.where(alive, v, level)
    unit = np.where(alive, cur, 1)
    return val, unit


def _inverse_table(p: int, k: int) -> np.ndarray:
    """inv[x] = x^-1 mod p^k for units, 0 elsewhere."""
    P = p**k
    xs = np.arange(P, dtype=np.int64)
    inv = np.zeros(P, dtype=np.int64)
    units = xs[xs % p != 0]
    phi = P - P // p
    result = np.ones_like(units)
    e = phi - 1
    base = units.copy()
    while e:
        if e & 1:
            result = result * base % P
        base = base * base % P
        e >>= 1
    inv[units] = result
    return inv


def _char_unit_table(chi: MultChar, p: int, k: int) -> np.ndarray:
    """Unit-part values chi0(u) for residues mod p^k (k >= cond), 1 at non-units."""
    P = p**k
    m = chi.unit.m
    out = np.ones(P, dtype=complex)
    if m == 0:
        return out
    pm = p**m
    vals = np.array(
        [chi.unit.value(u) if u % p else 1.0 for u in range(pm)], dtype=complex
    )
    return vals[np.arange(P) % pm]


def _unram_powers(chi: MultChar, max_abs: int) -> np.ndarray:
    """chi(pi)^e for e in [-max_abs, max_abs], indexed by e + max_abs."""
    return np.array(
        [chi.unramified**e for e in range(-max_abs, max_abs + 1)], dtype=complex
    )


@dataclass
class TableData:
    """Dense lookup of a level-s coset table for numpy evaluation."""

    level: int
    dense: np.ndarray  # size p^(4s)

    @staticmethod
    def from_vector(v: InducedVector) -> "TableData":
        p, s = v.ctx.p, v.level
        P = p**s
        dense = np.zeros(max(P**4, 1), dtype=complex)
        for key, val in v.values.items():
            a, b, c, d = key
            dense[((a * P + b) * P + c) * P + d] = val
        return TableData(s, dense)


def act_gamma_values(spec: RepSpec, ctx: PadicContext, table: TableData, r: int,
                     keys, level: int) -> np.ndarray:
    """(gamma^r . v)(k) for residue matrices k at `level`, v given by `table`.

    Vectorized Iwasawa evaluation of v at gamma^-r k gamma^r; valid whenever
    level >= table.level + r so the result is a level-`level` function.
    """
    p = ctx.p
    s = table.level
    a, b, c, d = (np.asarray(keys[:, i], dtype=np.int64) for i in range(4))
    P = p**level
    Ps = p**s
    det = (a * d - b * c) % P
    val_c, u_c = _val_and_unit(c, p, level)
    val_d, u_d = _val_and_unit(d, p, level)
    _, u_det = _val_and_unit(det, p, level)
    inv = _inverse_table(p, level)
    maxe = level + r + 2
    mu_pow = _unram_powers(spec.chi.mu, maxe)
    mup_pow = _unram_powers(spec.chi.mu_prime, maxe)
    mu_tab = _char_unit_table(spec.chi.mu, p, level)
    mup_tab = _char_unit_table(spec.chi.mu_prime, p, level)
    case1 = val_c >= r + val_d

    out = np.zeros(len(a), dtype=complex)

    # case 1: pivot (1,0;t,1), b-part diag-ish (det/d, * ; 0, d)
    if case1.any():
        vt = val_c - r - val_d
        t_res = np.where(
            val_c >= level, 0,
            (p ** np.clip(vt, 0, s) * (u_c * inv[u_d % P] % P)) % Ps,
        )
        t_res = np.where(vt >= s, 0, t_res)  # deep t reduces to 0 mod p^s
        enc = ((1 % Ps) * Ps + 0) * Ps * Ps + t_res * Ps + (1 % Ps)
        tv = table.dense[enc]
        w = (
            mu_pow[-val_d + maxe]
            * mu_tab[(u_det * inv[u_d % P]) % P]
            * mup_pow[val_d + maxe]
            * mup_tab[u_d % P]
            * np.power(float(p), val_d.astype(float))
        )
        out = np.where(case1, w * tv, out)

    # case 2: pivot (0,1;1,s2), b-part (-det/C, *; 0, C) with C = c / p^r
    case2 = ~case1
    if case2.any():
        vs = val_d + r - val_c
        s2_res = np.where(
            val_d >= level, 0,
            (p ** np.clip(vs, 0, s) * (u_d * inv[u_c % P] % P)) % Ps,
        )
        s2_res = np.where(vs >= s, 0, s2_res)
        enc = (0 * Ps + 1 % Ps) * Ps * Ps + (1 % Ps) * Ps + s2_res
        tv = table.dense[enc]
        w = (
            mu_pow[(r - val_c) + maxe]
            * mu_tab[((P - 1) * u_det * inv[u_c % P]) % P]
            * mup_pow[(val_c - r) + maxe]
            * mup_tab[u_c % P]
            * np.power(float(p), (val_c - r).astype(float))
        )
        out = np.where(case2, w * tv, out)
    # (gamma^r . v)(k) = chi delta^(1/2)(gamma^r) v(gamma^-r k gamma^r)
    return spec.chi.alpha**r * out


def closed_form_values(spec: RepSpec, ctx: PadicContext, r: int, keys,
                       level: int, variant: str = "plain") -> np.ndarray:
    """Vectorized lemma closed form of (gamma^r . v)(k) on residue matrices."""
    p = ctx.p
    a, b, c, d = (np.asarray(keys[:, i], dtype=np.int64) for i in range(4))
    P = p**level
    det = (a * d - b * c) % P
    s_shell, u_c = _val_and_unit(c, p, level)
    _, u_det = _val_and_unit(det, p, level)
    al, be = spec.alpha, spec.beta
    out = np.zeros(len(a), dtype=complex)
    inv = _inverse_table(p, level)

    def unram_like():
        res = np.zeros(len(a), dtype=complex)
        if variant == "plain":
            low = s_shell < r
            res[~low] = al**r
            if low.any():
                res[low] = al ** s_shell[low].astype(float) * be ** (
                    r - s_shell[low]
                ).astype(float)
        elif variant == "diff_alpha":
            low = s_shell < r
            sv = s_shell[low].astype(float)
            res[low] = al**sv * be ** (r - sv) - al ** (sv + 1) * be ** (r - 1 - sv)
        elif variant == "diff_beta":
            res[s_shell >= r] = al**r * (1 - be / al)
        else:
            raise ValueError(variant)
        return res

    if spec.kind == "principal":
        n = spec.conductor
        m = spec.mu_prime.conductor
        if n == 0:
            return unram_like()
        mup_tab = _char_unit_table(spec.mu_prime, p, level)
        mu_tab = _char_unit_table(spec.mu, p, level)
        if m == n:
            thresh = n + r
            if variant == "plain":
                mask = s_shell >= thresh
            elif variant == "diff_sp1":
                mask = s_shell == thresh
            else:
                raise ValueError(variant)
            out[mask] = al**r * mup_tab[d[mask] % P]
            return out
        if m == 0:
            if variant == "plain":
                mask = s_shell <= r
                sv = s_shell[mask].astype(float)
                arg = (u_det[mask] * inv[u_c[mask] % P]) % P
                out[mask] = al**sv * be ** (r - sv) * mu_tab[arg]
            elif variant == "diff_beta":
                mask = s_shell == r
                arg = (u_det[mask] * inv[u_c[mask] % P]) % P
                out[mask] = al**r * mu_tab[arg]
            else:
                raise ValueError(variant)
            return out
        if variant != "plain":
            raise ValueError("both-ramified case has only the plain form")
        mask = s_shell == m + r
        arg = (u_det[mask] * inv[u_c[mask] % P]) % P
        out[mask] = al**r * mu_tab[arg] * mup_tab[d[mask] % P]
        return out
    if spec.kind == "special_quotient":
        if variant != "plain":
            raise ValueError("gamma^r v^I has only the plain form")
        out[s_shell >= r + 1] = al**r
        return out
    if spec.kind == "special_subspace":
        return unram_like()
    raise ValueError(f"no closed form for kind {spec.kind}")


def grid_slabs(p: int, level: int):
    """Yield (M, 4) int64 arrays covering GL2(Z/p^level), one slab per 'a'."""
    P = p**level
    rng = np.arange(P, dtype=np.int64)
    b, c, d = np.meshgrid(rng, rng, rng, indexing="ij")
    b, c, d = b.ravel(), c.ravel(), d.ravel()
    for a_val in range(P):
        det = (a_val * d - b * c) % P
        mask = det % p != 0
        a = np.full(mask.sum(), a_val, dtype=np.int64)
        yield np.stack([a, b[mask], c[mask], d[mask]], axis=1)


def lemma_sweep(spec: RepSpec, ctx: PadicContext, base_vector: InducedVector,
                r: int, variant: str = "plain") -> dict:
    """Exhaustively compare action-based and closed-form translate values.

    Returns {level, count, worst}; the action side is the streaming Iwasawa
    evaluation of the stored base table (plus the variant combination), the
    closed side is the lemma formula.
    """
    table = TableData.from_vector(base_vector)
    rr = {"plain": r, "diff_alpha": r, "diff_beta": r, "diff_sp1": r + 1}[variant]
    level = base_vector.level + rr
    if level > ctx.precision:
        raise BudgetError(
            f"sweep needs level {level} beyond precision {ctx.precision}"
        )
    ctx.check_budget(ctx.p ** (4 * level), f"lemma sweep at level {level}")
    worst = 0.0
    count = 0
    for keys in grid_slabs(ctx.p, level):
        act = act_gamma_values(spec, ctx, table, r, keys, level)
        if variant == "diff_alpha":
            act = act - spec.alpha * act_gamma_values(spec, ctx, table, r - 1,
                                                      keys, level)
        elif variant == "diff_beta":
            act = act - spec.beta * act_gamma_values(spec, ctx, table, r - 1,
                                                     keys, level)
        elif variant == "diff_sp1":
            act = act - (1 / spec.alpha) * act_gamma_values(
                spec, ctx, table, r + 1, keys, level
            )
        closed = closed_form_values(spec, ctx, r, keys, level, variant)
        dev = np.abs(act - closed)
        if len(dev):
            worst = max(worst, float(dev.max()))
        count += len(keys)
    return {"level": level, "count": count, "worst": worst}

"""Independent cross-check of the invariant form: the two-point-kernel triple
integral over the projective line.

For vectors f_i in Ind(chi_i) the G-invariant functional is

    l(f1 x f2 x f3) = int_{K^3} prod f_i(k_i) nu_i(det k_i)
                      xi_12(D(k1,k2)) xi_13(D(k1,k3)) xi_23(D(k2,k3)) dk

with D(k, k') = det of the two bottom rows, nu_i = mu_i^-1 |.|^(1/2) and
xi_12 = (mu1' mu2' mu3)^-1 |.|^(-1/2) (indices cycled for the others); the
determinant directions integrate out exactly, leaving a three-fold sum over
cells of P^1 whose only singular strata (coincident cells) are geometric and
are summed in closed form.  Values are contractual only up to one nonzero
scalar per context.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import MultChar
from .context import PadicContext
from .errors import BoundaryCharacterError, ConfigurationError
from .gl2 import GL2Elem
from .local_field import LocalFieldElem
from .reps import InducedVector, RepSpec


def _pair_u(p: int, xi: MultChar, tol: float) -> complex:
    """U(xi) = int_{O x O} xi(x - y) dx dy (regularized closed form)."""
    if not xi.is_unramified():
        return 0.0j
    rho = xi.at_pi() / p
    if abs(rho - 1) <= tol:
        raise BoundaryCharacterError("pair tail ratio 1 in the kernel integral")
    return (1 - 1 / p) / (1 - rho)


def _triple_t(p: int, xi12: MultChar, xi13: MultChar, xi23: MultChar,
              tol: float) -> complex:
    """T = int_{O^3} xi12(t1-t2) xi13(t1-t3) xi23(t2-t3) dt (probability Haar).

    One-level self-similar recursion; needs all unit conductors <= 1.
    """
    for xi in (xi12, xi13, xi23):
        if xi.unit.m > 1:
            raise ConfigurationError("kernel characters of conductor > 1")
    big_xi = xi12 * xi13 * xi23
    ratio = big_xi.at_pi() / p**2
    if abs(ratio - 1) <= tol:
        raise BoundaryCharacterError("triple tail ratio 1 in the kernel integral")

    def val(xi: MultChar, r: int) -> complex:
        # xi(r) for r a unit residue mod p (conductor <= 1)
        return xi.unit.value(r % p) if xi.unit.m else 1.0 + 0.0j

    u12, u13, u23 = (_pair_u(p, x, tol) for x in (xi12, xi13, xi23))
    finite = 0.0j
    for r1 in range(p):
        for r2 in range(p):
            for r3 in range(p):
                if r1 == r2 == r3:
                    continue
                if r1 == r2:
                    finite += (
                        xi12.at_pi() * u12 * val(xi13, r1 - r3) * val(xi23, r2 - r3)
                    ) * p**-3
                elif r1 == r3:
                    finite += (
                        xi13.at_pi() * u13 * val(xi12, r1 - r2) * val(xi23, r2 - r3)
                    ) * p**-3
                elif r2 == r3:
                    finite += (
                        xi23.at_pi() * u23 * val(xi12, r1 - r2) * val(xi13, r1 - r3)
                    ) * p**-3
                else:
                    finite += (
                        val(xi12, r1 - r2) * val(xi13, r1 - r3) * val(xi23, r2 - r3)
                    ) * p**-3
    return finite / (1 - ratio)


@dataclass
class _Cell:
    chart: str   # 'T': x = [t:1], t in O; 'S': x = [1:s], s in pi O
    rep: int     # t0 or s0 mod p^L


def _row_matrix(ctx: PadicContext, chart: str, rep: int, u: int) -> GL2Elem:
    """A K-matrix whose bottom row is u * (rep, 1) or u * (1, rep)."""
    one, zero = LocalFieldElem.one(ctx), LocalFieldElem.zero(ctx)
    uu = LocalFieldElem.from_int(ctx, u)
    if chart == "T":
        c = LocalFieldElem.from_int(ctx, rep) * uu
        return GL2Elem(one, zero, c, uu)
    d = LocalFieldElem.from_int(ctx, rep) * uu
    return GL2Elem(zero, one, uu, d)


def kernel_oracle(ctx: PadicContext, specs, vectors, level: int | None = None) -> complex:
    """The triple kernel integral for vectors in three induced models.

    specs: three RepSpecs with induced models (principal or the reducible
    delta^(1/2)-models); vectors: InducedVectors in those models.
    """
    p = ctx.p
    tol = ctx.tol
    chis = [s.chi for s in specs]
    omega = specs[0].omega * specs[1].omega * specs[2].omega
    if not omega.is_trivial(tol):
        raise ConfigurationError("kernel integral needs w1 w2 w3 = 1")
    half = MultChar.norm_char(p, 0.5)
    xi12 = (chis[0].mu_prime * chis[1].mu_prime * chis[2].mu).inv() * half.inv()
    xi13 = (chis[0].mu_prime * chis[1].mu * chis[2].mu_prime).inv() * half.inv()
    xi23 = (chis[0].mu * chis[1].mu_prime * chis[2].mu_prime).inv() * half.inv()
    for xi in (xi12, xi13, xi23):
        if xi.unit.m > 1:
            raise ConfigurationError(
                "kernel oracle implemented for kernel conductors <= 1"
            )
    s_max = max(v.level for v in vectors)
    L = max(2, s_max) if level is None else level
    cells = [_Cell("T", t) for t in range(p**L)] + [
        _Cell("S", s) for s in range(0, p**L, p)
    ]
    # unit-averaged slot values
    unit_chars = [
        (xi12 * xi13).unit,
        (xi12 * xi23).unit,
        (xi13 * xi23).unit,
    ]
    G = []
    for i in range(3):
        spec, f = specs[i], vectors[i]
        e = max(f.level, unit_chars[i].m, spec.chi.mu.unit.m, 1)
        units = [u for u in range(p**e) if u % p]
        vals = np.zeros(len(cells), dtype=complex)
        for ci, cell in enumerate(cells):
            tot = 0.0j
            for u in units:
                k = _row_matrix(ctx, cell.chart, cell.rep, u)
                det = k.det()
                tot += (
                    f.evaluate(k)
                    / spec.chi.mu(det)
                    * unit_chars[i].value(u)
                )
            vals[ci] = tot / len(units)
        G.append(vals)

    P = p**L

    def d_val_unit(ca: _Cell, cb: _Cell):
        """D(x_a, x_b) as (valuation, unit residue) or None for coincident."""
        if ca.chart == "T" and cb.chart == "T":
            diff = (ca.rep - cb.rep) % P
        elif ca.chart == "S" and cb.chart == "S":
            diff = (cb.rep - ca.rep) % P
        elif ca.chart == "T" and cb.chart == "S":
            diff = (ca.rep * cb.rep - 1) % P
        else:
            diff = (1 - ca.rep * cb.rep) % P
        if diff == 0 and ca.chart == cb.chart:
            return None
        v = 0
        while diff % p == 0:
            diff //= p
            v += 1
        return v, diff

    def m_matrix(xi: MultChar):
        M = np.zeros((len(cells), len(cells)), dtype=complex)
        u_pair = _pair_u(p, xi, tol)
        for a, ca in enumerate(cells):
            for b, cb in enumerate(cells):
                dv = d_val_unit(ca, cb)
                if dv is None:
                    M[a, b] = xi.at_pi(L) * u_pair
                else:
                    v, uu = dv
                    M[a, b] = xi.at_pi(v) * (
                        xi.unit.value(uu % p) if xi.unit.m else 1.0
                    )
        return M

    M12, M13, M23 = m_matrix(xi12), m_matrix(xi13), m_matrix(xi23)
    mass = (p / (p + 1)) * float(p) ** (-L)
    total = np.einsum("i,j,k,ij,ik,jk->", G[0], G[1], G[2], M12, M13, M23)
    # coincident-triple correction: independent pair averages -> true T
    t_true = _triple_t(p, xi12, xi13, xi23, tol)
    u_prod = _pair_u(p, xi12, tol) * _pair_u(p, xi13, tol) * _pair_u(p, xi23, tol)
    big_xi = xi12 * xi13 * xi23
    corr = big_xi.at_pi(L) * (t_true - u_prod)
    total += np.sum(G[0] * G[1] * G[2]) * corr
    return complex(total * mass**3)

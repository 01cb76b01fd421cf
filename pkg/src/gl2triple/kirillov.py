"""Kirillov-model fragment: compactly supported functions on F^*, the Borel
action, the pairing Phi, and supercuspidal stubs.

Vectors carry the sign of the additive character they are modeled with
(psi for the first factor, psi-bar for the second); the pairing insists the
two conventions are opposite, so the unipotent factors cancel exactly.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .characters import MultChar
from .context import PadicContext
from .errors import ConfigurationError, PrecisionError, UnsupportedOperation
from .gl2 import GL2Elem, enumerate_cosets, gl2_order, vol_iwahori
from .reps import RepSpec, STUB


def _units_count(p: int, M: int) -> int:
    return 1 if M == 0 else p ** (M - 1) * (p - 1)


def _psi_cell(p: int, w: int, unit_residue: int, sign: int) -> complex:
    """psi(pi^w u)^sign on a cell where u is known mod p^max(-w,0)."""
    if w >= 0:
        return 1.0 + 0.0j
    q = p ** (-w)
    return cmath.exp(sign * 2j * cmath.pi * (unit_residue % q) / q)


@dataclass
class KirillovVector:
    """Finite support map (valuation, unit coset mod p^depth) -> C."""

    ctx: PadicContext
    depth: int
    support: dict
    psi_sign: int = +1

    @staticmethod
    def char_of_units(ctx: PadicContext, psi_sign: int = +1) -> "KirillovVector":
        """The characteristic function of O^*: the stub new vector."""
        return KirillovVector(ctx, 0, {(0, 0): 1.0 + 0.0j}, psi_sign)

    def refine_to(self, depth: int) -> "KirillovVector":
        if depth < self.depth:
            raise ValueError("cannot lower the depth")
        if depth == self.depth:
            return self
        if depth > self.ctx.precision:
            raise PrecisionError(
                f"depth {depth} exceeds the precision {self.ctx.precision}"
            )
        p = self.ctx.p
        pM, pD = p**self.depth, p**depth
        out = {}
        for (v, u), val in self.support.items():
            upper = pD // pM
            for t in range(upper):
                uu = u + pM * t
                if depth >= 1 and uu % p == 0:
                    continue
                out[(v, uu)] = val
        return KirillovVector(self.ctx, depth, out, self.psi_sign)

    def scaled(self, z: complex) -> "KirillovVector":
        return KirillovVector(self.ctx, self.depth,
                              {k: z * v for k, v in self.support.items()},
                              self.psi_sign)

    def __add__(self, other: "KirillovVector") -> "KirillovVector":
        if self.psi_sign != other.psi_sign:
            raise ConfigurationError("cannot add vectors with opposite psi signs")
        depth = max(self.depth, other.depth)
        a, b = self.refine_to(depth), other.refine_to(depth)
        out = dict(a.support)
        for k, v in b.support.items():
            out[k] = out.get(k, 0.0j) + v
        return KirillovVector(self.ctx, depth, out, self.psi_sign)

    def value_at(self, v: int, u: int) -> complex:
        """Value at x = pi^v u (u a unit integer)."""
        return self.support.get((v, u % self.ctx.p**self.depth), 0.0j)


def borel_act(b: GL2Elem, f: KirillovVector, omega: MultChar) -> KirillovVector:
    """((a, x; 0, d) . f)(y) = omega(d) psi(x y / d) f(a y / d).

    The additive factor is measured with f's own psi sign; the depth grows
    exactly enough to resolve psi on each support cell.
    """
    if not b.c.is_zero:
        raise ConfigurationError("borel_act needs an upper-triangular element")
    ctx = f.ctx
    p = ctx.p
    av, dv = b.a, b.d
    if av.is_zero or dv.is_zero:
        raise ConfigurationError("singular diagonal")
    shift = dv.val - av.val  # support moves by val(d/a)
    # resolution needed so psi(x y / d) is constant on cells
    need = f.depth
    if not b.b.is_zero:
        for (v, _u) in f.support:
            w = b.b.val + (v + shift) - dv.val
            need = max(need, -w)
    g = f.refine_to(max(f.depth, need))
    pM = p**g.depth
    out = {}
    ua = av.unit_residue(min(av.prec, ctx.precision))
    ud = dv.unit_residue(min(dv.prec, ctx.precision))
    ua_inv = pow(ua, -1, ctx.modulus)
    for (v, u), val in g.support.items():
        # y with a y / d in the source cell: y = pi^(v+shift) * u * ud / ua
        vy = v + shift
        uy = (u * ud * ua_inv) % pM if g.depth else 0
        w_val = omega.value_at(dv.val, ud) * val
        if not b.b.is_zero:
            w = b.b.val + vy - dv.val
            arg_unit = (b.b.unit * uy * pow(ud, -1, ctx.modulus)) % ctx.modulus
            w_val *= _psi_cell(p, w, arg_unit, g.psi_sign)
        key = (vy, uy)
        out[key] = out.get(key, 0.0j) + w_val
    return KirillovVector(ctx, g.depth, out, g.psi_sign)


def pairing_Phi(f: KirillovVector, g: KirillovVector) -> complex:
    """Phi(f, g) = integral of f g |x|^-1 d*x, vol(O^*) = 1.

    Defined for one psi-model and one psi-bar-model vector.
    """
    if f.psi_sign == g.psi_sign:
        raise ConfigurationError(
            "pairing_Phi pairs a psi-model vector with a psi-bar-model vector"
        )
    depth = max(f.depth, g.depth)
    a, b = f.refine_to(depth), g.refine_to(depth)
    mass = 1.0 / _units_count(f.ctx.p, depth)
    tot = 0.0j
    for key, va in a.support.items():
        vb = b.support.get(key)
        if vb is not None:
            tot += va * vb * float(f.ctx.p) ** key[0] * mass
    return tot


@dataclass
class SupercuspidalStub:
    """Abstract supercuspidal: only the structure section 4 uses.

    Exposes the conductor, central character, new vector, the I_n
    eigenproperty and the Atkin-Lehner image; anything else is refused.
    """

    spec: RepSpec

    def __post_init__(self):
        if self.spec.kind != STUB:
            raise ConfigurationError("SupercuspidalStub wraps a stub RepSpec")

    @property
    def conductor(self) -> int:
        return self.spec.stub_n

    @property
    def omega(self) -> MultChar:
        return self.spec.stub_omega

    def new_vector(self, ctx: PadicContext, psi_sign: int = +1) -> KirillovVector:
        return KirillovVector.char_of_units(ctx, psi_sign)

    def eigenproperty(self) -> dict:
        return {
            "subgroup": f"I_{self.conductor}",
            "action": "omega(d) on the new line",
            "conductor": self.conductor,
        }

    def atkin_lehner_image(self) -> dict:
        return {
            "element": f"(0, 1; pi^{self.conductor}, 0)",
            "lands_in": "omega(a)-eigenline at the conductor level",
        }

    def act(self, g: GL2Elem, f: KirillovVector):
        if g.c.is_zero:
            return borel_act(g, f, self.omega)
        raise UnsupportedOperation(
            "stubs model only the Borel action and the new-vector eigenproperty"
        )


def ell_equal_conductor(ctx: PadicContext, v1_spec: RepSpec,
                        v2: SupercuspidalStub, v3: SupercuspidalStub) -> dict:
    """The equal-conductor value l(gamma^(n3-n1) v1 (x) v2 (x) v3).

    With mu_1 unramified, mu_1' ramified, n1 < n2 = n3 and w1 w2 w3 = 1 the
    K-integral localizes to I_{n3} where the stub eigenproperty makes the
    integrand the constant alpha_1^(n3-n1); the function returns both the
    enumerated integral and the closed form alpha_1^(n3-n1) vol(I_{n3}).
    """
    if v1_spec.kind != "principal" or not v1_spec.mu.is_unramified() \
            or v1_spec.mu_prime.is_unramified():
        raise ConfigurationError(
            "the equal-conductor configuration needs mu_1 unramified and "
            "mu_1' ramified"
        )
    n1 = v1_spec.conductor
    n3 = v3.conductor
    if v2.conductor != n3 or not n1 < n3:
        raise ConfigurationError("need n2 = n3 > n1")
    omega_prod = v1_spec.omega * v2.omega * v3.omega
    if not omega_prod.is_trivial(ctx.tol):
        raise ConfigurationError("central characters do not multiply to 1")
    r = n3 - n1
    alpha1 = v1_spec.alpha
    # enumerate I_{n3} at level n3; integrand alpha_1^r (w1 w2 w3)(d) on it
    table = enumerate_cosets(ctx, n3)
    mass = table.mass
    total = 0.0j
    count = 0
    P = ctx.p**n3
    for key in table.key_tuples():
        a, b, c, d = key
        if c % P == 0:  # k in I_{n3}
            count += 1
            total += alpha1**r * omega_prod.value_at(0, d) * mass
    closed = alpha1**r * vol_iwahori(ctx.p, n3)
    assert count == gl2_order(ctx.p, n3) // ((ctx.p + 1) * ctx.p ** (n3 - 1))
    return {
        "value": total,
        "closed_form": closed,
        "vol_I_n3": vol_iwahori(ctx.p, n3),
        "alpha1_power": alpha1**r,
        "n1": n1,
        "n3": n3,
    }

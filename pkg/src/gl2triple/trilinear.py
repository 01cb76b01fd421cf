"""The trilinear-form engine: slot models, the torus-equivariant functional,
the two-variable function H with its product formula, and the dual pairing.

Normalizations fixed here and echoed in every report: vol(K) = 1, vol(O^*) = 1
for d*x, the J_n constant is the level-n coset mass of J_n in K, and the
functional phi carries one arbitrary-but-fixed nonzero scale per context (all
contracts are about vanishing and ratios).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .characters import BorelChar, MultChar
from .context import PadicContext
from .errors import (
    BoundaryCharacterError,
    ConfigurationError,
    MathCheckError,
)
from .gl2 import (
    GL2Elem,
    enumerate_cosets,
    vol_J,
)
from .local_field import LocalFieldElem
from .reps import (
    PRINCIPAL,
    SPECIAL_QUOTIENT,
    SPECIAL_SUBSPACE,
    InducedVector,
    RepSpec,
    new_vector,
    v_I,
    v_K,
    v_K_minus_I,
)


def _units(p: int, e: int):
    if e < 1:
        raise ValueError("unit cells need e >= 1")
    return [u for u in range(p**e) if u % p != 0]


# -- slot profiles ---------------------------------------------------------------


@dataclass
class SlotProfile:
    """One tensor slot prepared for the chain machinery.

    slot_type: 'unram' | 'ram' | 'special' | 'vK'; ``vec`` is the vector whose
    gamma-translates enter the expansion (the ambient v^I / v^{K\\I} for the
    special slots, the K-invariant vector for reducible 'vK' slots).
    """

    spec: RepSpec
    vec: InducedVector
    slot_type: str
    n_slot: int

    @property
    def alpha(self) -> complex:
        return self.spec.alpha

    @property
    def beta(self) -> complex:
        return self.spec.beta

    @property
    def lam(self) -> complex:
        if self.slot_type in ("unram", "vK"):
            return 1.0 / (1.0 - self.beta / self.alpha)
        return 1.0 + 0.0j


def make_slot(ctx: PadicContext, spec: RepSpec, role: int,
              reducible_vK: bool = False) -> SlotProfile:
    """Prepare a slot.  role 1 wants mu unramified, role 2 wants mu' unramified."""
    if spec.is_stub:
        raise ConfigurationError("stub slots never enter the chain machinery")
    if reducible_vK:
        if spec.kind != SPECIAL_SUBSPACE or not spec.eta.is_unramified():
            raise ConfigurationError(
                "reducible slots use the delta^(1/2)-model with unramified eta"
            )
        return SlotProfile(spec, v_K(spec, ctx), "vK", 0)
    if spec.kind == PRINCIPAL:
        mu_un = spec.mu.is_unramified()
        mup_un = spec.mu_prime.is_unramified()
        if not (mu_un or mup_un):
            raise ConfigurationError(
                "chain slots need a minimal principal model (one unramified "
                "component)"
            )
        want_first = role == 1
        if (want_first and not mu_un) or (not want_first and not mup_un):
            spec = spec.swap_model()
        if spec.conductor == 0:
            return SlotProfile(spec, new_vector(spec, ctx), "unram", 0)
        return SlotProfile(spec, new_vector(spec, ctx), "ram", spec.conductor)
    if spec.kind == SPECIAL_QUOTIENT:
        if not spec.eta.is_unramified():
            raise ConfigurationError("special slots need unramified eta (minimal)")
        vec = v_I(spec, ctx) if role == 1 else v_K_minus_I(spec, ctx)
        return SlotProfile(spec, vec, "special", 1)
    if spec.kind == SPECIAL_SUBSPACE:
        raise ConfigurationError(
            "subspace-model slots enter only as reducible 'vK' slots"
        )
    raise ConfigurationError(f"unsupported slot kind {spec.kind}")


def star_expansion(slot: SlotProfile, n: int, role: int):
    """The v* of the product formula as [(gamma-exponent, coefficient)] on vec."""
    if role == 1:
        if slot.slot_type in ("unram", "vK"):
            return [(n, 1.0 + 0.0j), (n - 1, -slot.beta)]
        if slot.slot_type == "special":
            return [(n - 1, 1.0 + 0.0j)]
        return [(n - slot.n_slot, 1.0 + 0.0j)]
    if slot.slot_type in ("unram", "vK"):
        return [(0, 1.0 + 0.0j), (1, -1.0 / slot.alpha)]
    return [(0, 1.0 + 0.0j)]


# -- the torus-equivariant functional ----------------------------------------------


class LazyRightTranslate:
    """(g0 . f) presented through evaluate only, without rebuilding tables."""

    def __init__(self, base: InducedVector, g0: GL2Elem, level_shift: int):
        self.base = base
        self.g0 = g0
        self.level = base.level + level_shift

    @staticmethod
    def gamma(base: InducedVector, i: int) -> "LazyRightTranslate":
        g = GL2Elem.gamma_pow(base.ctx, i)
        return LazyRightTranslate(base, g, max(i, -i))

    def evaluate(self, g: GL2Elem) -> complex:
        return self.base.evaluate(g * self.g0)


@dataclass
class PhiFunctional:
    """phi(f) = sum over shells of f(w n(x)) theta(x) d*x, tails in closed form.

    theta = (mu1 mu2' mu3')^(-1) |.|^(1/2); the negative shells use the Iwasawa
    identity f(w n(x)) = mu3(-1) (mu3'/mu3)(x) |x|^(-1) f((1,0;x^(-1),1)).
    The sum is exact: beyond the vector's level both sides are geometric and
    are summed in closed form (their regularized value).
    """

    ctx: PadicContext
    theta: MultChar
    ratio: MultChar          # mu3' / mu3
    mu3_minus1: complex
    radius: int
    tol: float = 1e-9
    last_tail: float = field(default=0.0, init=False)

    @staticmethod
    def build(ctx: PadicContext, chi1: BorelChar, chi2: BorelChar,
              chi3: BorelChar, radius: int | None = None) -> "PhiFunctional":
        p = ctx.p
        theta = (chi1.mu * chi2.mu_prime * chi3.mu_prime).inv() * MultChar.norm_char(
            p, 0.5
        )
        ratio = chi3.mu_prime * chi3.mu.inv()
        rad = radius if radius is not None else ctx.precision
        phi = PhiFunctional(ctx, theta, ratio, chi3.mu.at_minus_one(), rad, ctx.tol)
        phi._check_boundary()
        return phi

    def _check_boundary(self):
        rho_plus = self.theta.at_pi()
        xi_minus = self.theta * self.ratio * MultChar.norm_char(self.ctx.p, -1.0)
        rho_minus = xi_minus.at_pi()
        if self.theta.is_unramified() and abs(rho_plus - 1) <= self.tol:
            raise BoundaryCharacterError(
                "positive tail ratio is 1: boundary character, no closed form"
            )
        if xi_minus.unit.is_trivial() and abs(rho_minus - 1) <= self.tol:
            raise BoundaryCharacterError(
                "negative tail ratio is 1: boundary character, no closed form"
            )

    # -- evaluation -------------------------------------------------------------

    def _w_n(self, j: int, u: int) -> GL2Elem:
        """The element w n(x) = (0,1;1,x) for x = pi^j u."""
        ctx = self.ctx
        one, zero = LocalFieldElem.one(ctx), LocalFieldElem.zero(ctx)
        x = LocalFieldElem.from_unit_val(ctx, j, u)
        return GL2Elem(zero, one, one, x)

    def _pos_shell(self, f, j: int) -> complex:
        """Shell val(x) = j >= 0: w n(x) lies in K."""
        p = self.ctx.p
        e = max(f.level - j, self.theta.unit.m, 1)
        units = _units(p, e)
        tot = 0.0j
        for u in units:
            tot += f.evaluate(self._w_n(j, u)) * self.theta.unit.value(u)
        return self.theta.at_pi(j) * tot / len(units)

    def _neg_shell(self, f, j: int) -> complex:
        """Shell val(x) = j < 0 with -j < level: finite exact unit sum."""
        ctx, p = self.ctx, self.ctx.p
        xi = self.theta * self.ratio * MultChar.norm_char(p, -1.0)
        e = max(f.level + j, xi.unit.m, 1)
        units = _units(p, e)
        one, zero = LocalFieldElem.one(ctx), LocalFieldElem.zero(ctx)
        tot = 0.0j
        for u in units:
            uinv = pow(u, -1, ctx.modulus)
            c = LocalFieldElem.from_unit_val(ctx, -j, uinv)
            k = GL2Elem(one, zero, c, one)
            tot += f.evaluate(k) * xi.unit.value(u)
        return self.mu3_minus1 * xi.at_pi(j) * tot / len(units)

    def value(self, f) -> complex:
        """f: InducedVector or LazyRightTranslate (needs .level, .evaluate)."""
        ctx = self.ctx
        s = f.level
        total = 0.0j
        for j in range(0, s):
            total += self._pos_shell(f, j)
        for j in range(-s + 1, 0):
            total += self._neg_shell(f, j)
        tail = 0.0j
        if self.theta.is_unramified():
            rho = self.theta.at_pi()
            f_w = f.evaluate(GL2Elem.w_tilde(ctx))
            tail += f_w * rho**s / (1 - rho)
        xi = self.theta * self.ratio * MultChar.norm_char(ctx.p, -1.0)
        if xi.unit.is_trivial():
            rho = xi.at_pi()
            f_1 = f.evaluate(GL2Elem.identity(ctx))
            tail += self.mu3_minus1 * f_1 * rho ** (-s) / (1 - 1 / rho)
        self.last_tail = abs(tail)
        return total + tail


# -- context ------------------------------------------------------------------------


@dataclass
class TrilinearContext:
    """Everything the chain machinery needs for one triple."""

    ctx: PadicContext
    slot1: SlotProfile
    slot2: SlotProfile
    v3_spec: RepSpec
    v3: InducedVector
    phi: PhiFunctional
    n: int
    checks: dict = field(default_factory=dict)
    gamma_v3_cache: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def n3(self) -> int:
        return self.v3_spec.conductor

    def gamma_v3(self, i: int):
        """gamma^i . v3 as a lazily evaluated translate (phi never needs tables)."""
        if i not in self.gamma_v3_cache:
            self.gamma_v3_cache[i] = (
                self.v3 if i == 0 else LazyRightTranslate.gamma(self.v3, i)
            )
        return self.gamma_v3_cache[i]

    @property
    def scale(self) -> complex:
        """lambda1 lambda2 mu2(-1) alpha1^(n1 - n): H = scale * (v1* x v2*)."""
        s1, s2 = self.slot1, self.slot2
        mu2_m1 = s2.spec.chi.mu.at_minus_one()
        return s1.lam * s2.lam * mu2_m1 * s1.alpha ** (s1.n_slot - self.n)

    @property
    def target_level(self) -> int:
        """Invariance depth of the target vector (conductor, or 0 for v^K)."""
        return self.v3.level

    def psi_on_star(self, i: int) -> complex:
        """psi(v1* x v2* x gamma^i v3) = scale^(-1) phi(gamma^i v3) vol(J_n)."""
        if not (0 <= i <= self.n - self.target_level):
            raise ConfigurationError(
                f"i = {i} outside [0, {self.n - self.target_level}]: J_n does "
                "not fix gamma^i v3"
            )
        return self.phi.value(self.gamma_v3(i)) * vol_J(self.p, self.n) / self.scale

    def psi_on_H(self, i: int) -> complex:
        """Phi(h)(gamma^i v3) = phi(gamma^i v3) vol(J_n)."""
        if not (0 <= i <= self.n - self.target_level):
            raise ConfigurationError("i out of range for psi_on_H")
        return self.phi.value(self.gamma_v3(i)) * vol_J(self.p, self.n)


def hom_ind_to_irrep_nonzero(xi: MultChar, xi_prime: MultChar, w: RepSpec,
                             tol: float = 1e-9) -> bool:
    """Hom_G(Ind(xi, xi'), W) != 0 for infinite-dimensional irreducible W."""
    p = xi.p
    ratio = xi_prime * xi.inv()
    if w.is_stub:
        return False
    if ratio.approx_eq(MultChar.norm_char(p, 1.0), tol):
        eta = xi * MultChar.norm_char(p, -0.5)
        return w.is_special and w.eta.approx_eq(eta, tol)
    if ratio.approx_eq(MultChar.norm_char(p, -1.0), tol):
        return False  # the infinite-dimensional constituent is a subspace
    cand = RepSpec.principal(xi, xi_prime)
    return w.kind == PRINCIPAL and cand.isomorphic(w, tol)


def build_context(ctx: PadicContext, spec1: RepSpec, spec2: RepSpec,
                  spec3: RepSpec, *, reducible_vK: tuple = (False, False),
                  target_vK: bool = False, radius: int | None = None,
                  require_vanishing: bool = True) -> TrilinearContext:
    """Assemble the chain context for (V1, V2, V3), V3 the phi-target slot.

    target_vK swaps the target new vector for the K-invariant vector of a
    reducible delta^(1/2)-model (the rotated chains of the reducible cases).
    """
    if spec3.is_stub:
        raise ConfigurationError("stub targets route through the Kirillov fragment")
    omega = spec1.omega * spec2.omega * spec3.omega
    if not omega.is_trivial(ctx.tol):
        raise ConfigurationError("w1 w2 w3 != 1")
    s1 = make_slot(ctx, spec1, 1, reducible_vK[0])
    s2 = make_slot(ctx, spec2, 2, reducible_vK[1])
    target_level = 0 if target_vK else spec3.conductor
    n = max(s1.n_slot, s2.n_slot, target_level)
    if n < 1:
        raise ConfigurationError(
            "the product-formula machinery needs max conductor >= 1"
        )
    checks = {}
    # section-3.2 vanishing: Hom(Ind(chi1 chi2 delta^(1/2)), dual V3) = 0
    chi1, chi2 = s1.spec.chi, s2.spec.chi
    nrm = MultChar.norm_char(ctx.p, 0.5)
    xi, xi_p = chi1.mu * chi2.mu * nrm, chi1.mu_prime * chi2.mu_prime * nrm.inv()
    dual3 = spec3.dual()
    checks["hom_diagonal_vanishes"] = not hom_ind_to_irrep_nonzero(
        xi, xi_p, dual3, ctx.tol
    )
    for nm, sl, other in (("slot1", s1, s2), ("slot2", s2, s1)):
        if sl.slot_type == "special":
            tw = other.spec.twist(sl.spec.eta) if not other.spec.is_stub else None
            checks[f"hom_{nm}_special_vanishes"] = not (
                tw is not None and tw.isomorphic(dual3, ctx.tol)
            )
    if require_vanishing and not all(checks.values()):
        bad = [k for k, v in checks.items() if not v]
        raise ConfigurationError(
            f"section-3 vanishing hypotheses fail: {bad}; the chain does not "
            "collapse to the torus line for this configuration"
        )
    if target_vK:
        if spec3.kind != SPECIAL_SUBSPACE or not spec3.eta.is_unramified():
            raise ConfigurationError(
                "a v^K target needs the reducible delta^(1/2)-model"
            )
        v3 = v_K(spec3, ctx)
    else:
        v3 = new_vector(spec3, ctx)
    phi = PhiFunctional.build(ctx, chi1, chi2, spec3.chi, radius)
    return TrilinearContext(ctx, s1, s2, spec3, v3, phi, n, checks)


# -- H from its defining properties --------------------------------------------------


def build_h_and_H(tctx_or_ctx, level: int | None = None,
                  chi_pair: tuple | None = None) -> dict:
    """H(k1, k2) on level-n coset pairs, from the defining properties.

    For each pair the unique candidate k0 in J_n with k1 k0^-1 in B and
    k2 k0^-1 w in B is solved for exactly; H is then
    chi1(k1 k0^-1) chi2(k2 k0^-1 w) delta^(1/2)(..) h(k0) with h = 1 on T J_n.

    Accepts either a TrilinearContext or (PadicContext, chi_pair=(chi1, chi2))
    with an explicit level (the n = 0 variant of the remark included).
    """
    if isinstance(tctx_or_ctx, TrilinearContext):
        ctx = tctx_or_ctx.ctx
        n = tctx_or_ctx.n if level is None else level
        chi1, chi2 = tctx_or_ctx.slot1.spec.chi, tctx_or_ctx.slot2.spec.chi
    else:
        ctx = tctx_or_ctx
        if chi_pair is None or level is None:
            raise ValueError("explicit chi_pair and level required")
        chi1, chi2 = chi_pair
        n = level
    table = enumerate_cosets(ctx, max(n, 1))
    keys = table.key_tuples()
    H = {}
    wt = GL2Elem.w_tilde(ctx)
    for k1 in keys:
        g1 = _lift(ctx, k1, max(n, 1))
        d1_unit = k1[3] % ctx.p != 0
        for k2 in keys:
            g2 = _lift(ctx, k2, max(n, 1))
            c2_unit = k2[2] % ctx.p != 0
            val = 0.0j
            if d1_unit and c2_unit:
                c0 = g1.c / g1.d
                b0 = g2.d / g2.c
                ok = c0.is_zero or c0.val >= n
                if ok and n == 0:
                    detk0 = LocalFieldElem.one(ctx) - b0 * c0
                    ok = not detk0.is_zero
                if ok:
                    k0 = GL2Elem(
                        LocalFieldElem.one(ctx), b0, c0, LocalFieldElem.one(ctx)
                    )
                    m1 = g1 * k0.inv()
                    m2 = g2 * k0.inv() * wt
                    if not (m1.c.is_zero and m2.c.is_zero):
                        raise MathCheckError("k0 solve failed to land in B x B")
                    from .reps import chi_delta_half

                    val = chi_delta_half(chi1, m1) * chi_delta_half(chi2, m2)
            H[(k1, k2)] = val
    return H


def _lift(ctx, key, level):
    from .gl2 import key_to_elem

    return key_to_elem(ctx, key, level)


def fv_closed_form(tctx: TrilinearContext, k1, k2) -> complex:
    """omega1(d1) omega2(-det k2 / c2) on I_n x (K \\ I), else 0."""
    ctx = tctx.ctx
    p, n = ctx.p, tctx.n
    P = p**n
    a1, b1, c1, d1 = k1
    a2, b2, c2, d2 = k2
    if c1 % P != 0 or c2 % p == 0:
        return 0.0j
    om1, om2 = tctx.slot1.spec.omega, tctx.slot2.spec.omega
    det2 = (a2 * d2 - b2 * c2) % P
    arg = (-det2 * pow(c2, -1, P)) % P
    return om1.value_at(0, d1) * om2.value_at(0, arg)


def verify_lambda12(tctx: TrilinearContext) -> dict:
    """Compare H (defining properties) with scale * (v1* x v2*) on all pairs."""
    ctx = tctx.ctx
    n = tctx.n
    H = build_h_and_H(tctx)
    star1 = _combine(tctx.slot1, star_expansion(tctx.slot1, n, 1))
    star2 = _combine(tctx.slot2, star_expansion(tctx.slot2, n, 2))
    s1 = star1.refine_to(n)
    s2 = star2.refine_to(n)
    scale = tctx.scale
    worst = 0.0
    worst_fv = 0.0
    for (k1, k2), hv in H.items():
        pred = scale * s1.values[k1] * s2.values[k2]
        worst = max(worst, abs(hv - pred))
        worst_fv = max(worst_fv, abs(hv - fv_closed_form(tctx, k1, k2)))
    return {"pairs": len(H), "worst": worst, "worst_fv": worst_fv}


def _combine(slot: SlotProfile, expansion) -> InducedVector:
    out = None
    for r, coef in expansion:
        term = slot.vec.act_gamma(r).scaled(coef)
        out = term if out is None else out + term
    return out


# -- dual models and the K-pairing -----------------------------------------------------


def dual_pairing(ctx: PadicContext, f: InducedVector, g: InducedVector) -> complex:
    """<f, g> = integral over K of f g, for models with inverse characters."""
    lev = max(f.level, g.level)
    a, b = f.refine_to(lev), g.refine_to(lev)
    table = enumerate_cosets(ctx, lev)
    return sum(a.values[k] * b.values[k] for k in a.values) * table.mass

"""Descent from the product-formula values to individual tensor values.

Every zero used in a cancellation is certified by an independently computed
eigenspace dimension (or, for stubs, by the recorded conductor axiom); the
ledger keeps value + provenance + certificate for every tensor touched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .characters import MultChar
from .context import PadicContext
from .errors import ConfigurationError, MathCheckError
from .gl2 import GL2Elem
from .reps import (
    PRINCIPAL,
    RepSpec,
    eigenspace_dim,
    new_vector,
    rep_is_minimal,
)
from .trilinear import (
    LazyRightTranslate,
    TrilinearContext,
    build_context,
    dual_pairing,
    star_expansion,
)


@dataclass
class LedgerEntry:
    value: complex | None
    provenance: str                 # computed | forced-zero | solved
    certificate: dict | None = None


@dataclass
class EllValueLedger:
    """Map from slot-order tensor descriptors (i, j, m, tag) to values.

    The descriptor means l(gamma^i v1 (x) gamma^j v2 (x) [w.]gamma^m v3); tag
    is '' or 'w' for an Atkin-Lehner-type twist on the third slot.
    """

    entries: dict = field(default_factory=dict)

    def put(self, desc, entry: LedgerEntry):
        self.entries[desc] = entry

    def get(self, desc):
        return self.entries.get(desc)

    def report(self) -> list:
        out = []
        for desc, e in sorted(self.entries.items(), key=lambda kv: str(kv[0])):
            out.append(
                {
                    "tensor": describe(desc),
                    "value": None if e.value is None else [e.value.real, e.value.imag],
                    "provenance": e.provenance,
                    "certificate": e.certificate,
                }
            )
        return out


def describe(desc) -> str:
    i, j, m, tag = desc
    third = f"g^{m}.v3" if not tag else f"w.g^{m}.v3"
    return f"g^{i}.v1 (x) g^{j}.v2 (x) {third}"


def canonical_shift(desc):
    """Diagonal gamma-shift making min(i, j) = 0 (the third exponent follows)."""
    i, j, m, tag = desc
    k = min(i, j)
    return (i - k, j - k, m - k, tag)


def invariance_level(tc: TrilinearContext, i: int, j: int) -> int:
    """I_s fixing (up to character) gamma^i v1 (x) gamma^j v2, min(i,j) = 0."""
    l1 = {"unram": 0, "vK": 0, "special": 1, "ram": tc.slot1.n_slot}[
        tc.slot1.slot_type
    ]
    l2 = {"unram": 0, "vK": 0, "special": 1, "ram": tc.slot2.n_slot}[
        tc.slot2.slot_type
    ]
    return max(i + l1, j + l2)


def zero_certificate(tc: TrilinearContext, desc) -> dict | None:
    """Certify l(...) = 0 because the slot-(1,2) functional lives in a zero space."""
    if tc.target_level != tc.n3:
        return None  # reducible v^K target: no eigenspace certificates claimed
    i, j, m, tag = canonical_shift(desc)
    s = invariance_level(tc, i, j)
    dual3 = tc.v3_spec.dual()
    omega3_inv = tc.v3_spec.omega.inv()
    if dual3.is_stub:
        if s < dual3.conductor:
            return {
                "type": "stub-conductor-axiom",
                "level": s,
                "conductor": dual3.conductor,
            }
        return None
    dim = eigenspace_dim(dual3, tc.ctx, s, omega3_inv)
    if dim == 0:
        return {
            "type": "eigenspace",
            "space": "dual-V3",
            "level": s,
            "character": "omega3^-1 on d",
            "dim": 0,
            "expected_dim": max(0, s - tc.n3 + 1),
        }
    return None


def _expansion_terms(tc: TrilinearContext, i: int):
    """psi(v1* x v2* x gamma^i v3) as sum of coeff * descriptor."""
    terms = []
    for r1, c1 in star_expansion(tc.slot1, tc.n, 1):
        for r2, c2 in star_expansion(tc.slot2, tc.n, 2):
            terms.append((c1 * c2, (r1, r2, i, "")))
    return terms


def solve_band(tc: TrilinearContext, i: int, ledger: EllValueLedger) -> complex:
    """Resolve psi(v1* x v2* x gamma^i v3) into the single surviving tensor.

    All but the leading term must carry zero certificates; returns the leading
    value and stores everything in the ledger.
    """
    s_val = tc.psi_on_star(i)
    terms = _expansion_terms(tc, i)
    survivors = []
    for coeff, desc in terms:
        cdesc = canonical_shift(desc)
        cert = zero_certificate(tc, desc)
        if cert is not None:
            ledger.put(cdesc, LedgerEntry(0.0j, "forced-zero", cert))
        else:
            survivors.append((coeff, cdesc))
    if len(survivors) != 1:
        raise ConfigurationError(
            f"band i={i} does not collapse to one tensor: {survivors}; "
            "configuration outside the implemented descent cases"
        )
    coeff, desc = survivors[0]
    value = s_val / coeff
    ledger.put(desc, LedgerEntry(value, "solved"))
    return value


def solve_unram_unram_n1(tc: TrilinearContext, ledger: EllValueLedger) -> complex:
    """The conductor-1 branch with both slots unramified-like.

    Uses the Atkin-Lehner / w-trick identity and then pins the functional
    l(gamma v1 (x) v2 (x) .) in the one-dimensional dual eigenspace via the
    model pairing with the dual new vector.
    """
    ctx = tc.ctx
    if tc.n != 1:
        raise ConfigurationError("this branch is the n = 1 case")
    s0 = tc.psi_on_star(0)
    a1, a2 = tc.slot1.alpha, tc.slot2.alpha
    # S0 = X + (a1 a2)^-1 Y after killing the two certified-zero middle terms
    for desc in ((1, 1, 0, ""), (0, 0, 0, "")):
        cert = zero_certificate(tc, desc)
        if cert is None:
            raise MathCheckError(f"expected certified zero at {desc}")
        ledger.put(canonical_shift(desc), LedgerEntry(0.0j, "forced-zero", cert))
    dual3 = tc.v3_spec.dual()
    dim = eigenspace_dim(dual3, ctx, 1, tc.v3_spec.omega.inv())
    if dim != 1:
        raise MathCheckError(f"dual eigenline at level 1 has dim {dim}, not 1")
    nv_dual = new_vector(dual3, ctx)
    w = GL2Elem.atkin_lehner_elem(ctx, 1)
    v3 = tc.v3
    w_v3 = v3.act(w)
    u = v3 + w_v3.scaled(1 / (a1 * a2))
    L0_u = dual_pairing(ctx, nv_dual, u)
    if abs(L0_u) < 1e-12:
        raise MathCheckError("dual pairing degenerate on the solving vector")
    c = s0 / L0_u
    X = c * dual_pairing(ctx, nv_dual, v3)
    Y = c * dual_pairing(ctx, nv_dual, w_v3)
    ledger.put(
        (1, 0, 0, ""),
        LedgerEntry(
            X,
            "solved",
            {
                "type": "dual-eigenline",
                "dim": 1,
                "branch": "atkin-lehner",
                "relation": "S0 = X + (a1 a2)^-1 Y",
            },
        ),
    )
    ledger.put((1, 0, 0, "w"), LedgerEntry(Y, "solved"))
    resid = abs(s0 - (X + Y / (a1 * a2)))
    if resid > 1e-8 * max(1.0, abs(s0)):
        raise MathCheckError(f"n=1 relation residual {resid}")
    return X


# -- the epsilon = -1 structural predicate ---------------------------------------------


def epsilon_obstruction(specs, bound: int = 2, tol: float = 1e-9) -> int:
    """-1 exactly on the pattern: some V_i is an unramified Steinberg twist and
    another slot is a discrete series whose contragredient is the third slot
    twisted by the same character; +1 otherwise."""
    if all(s.is_stub for s in specs):
        raise ConfigurationError("at least one slot must be non-supercuspidal")
    omega = specs[0].omega * specs[1].omega * specs[2].omega
    if not omega.is_trivial(tol):
        raise ConfigurationError("w1 w2 w3 != 1")
    for s in specs:
        if not rep_is_minimal(s, bound):
            raise ConfigurationError("epsilon predicate needs a minimal triple")
    if not any(s.is_stub for s in specs):
        _, _, minimal = _triple_minimal(specs, bound, tol)
        if not minimal:
            raise ConfigurationError("triple is not minimal")
    import itertools

    for i, j, k in itertools.permutations(range(3)):
        vi, vj, vk = specs[i], specs[j], specs[k]
        if not (vi.is_special and vi.eta is not None and vi.eta.is_unramified()):
            continue
        if not vj.is_discrete_series():
            continue
        try:
            cand = vk.twist(vi.eta)
        except Exception:
            continue
        if vj.dual().isomorphic(cand, tol):
            return -1
    return +1


def _triple_minimal(specs, bound, tol):
    from .reps import minimal_triple_search

    return minimal_triple_search(specs, bound, tol)

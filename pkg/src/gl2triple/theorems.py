"""Drivers that certify each implemented test-vector statement and emit a
structured report: every value with provenance, every zero with certificate.
"""

from __future__ import annotations

import time

from .context import PadicContext
from .errors import ConfigurationError, MathCheckError
from .gl2 import GL2Elem
from .characters import MultChar
from .descent import (
    EllValueLedger,
    LedgerEntry,
    canonical_shift,
    describe,
    solve_band,
    solve_unram_unram_n1,
    zero_certificate,
)
from .kernel import kernel_oracle
from .kirillov import SupercuspidalStub, ell_equal_conductor, pairing_Phi
from .reps import (
    PRINCIPAL,
    SPECIAL_SUBSPACE,
    RepSpec,
    new_vector,
    special_project,
    v_K,
)
from .trilinear import TrilinearContext, build_context, dual_pairing

CONVENTIONS = {
    "vol_K": 1.0,
    "vol_units_dx": 1.0,
    "vol_J_n": "p^n / |GL2(Z/p^n)|",
    "phi": "open-orbit shell sum with regularized geometric tails; "
           "one arbitrary nonzero scale per context",
}


def _report_skeleton(case, ctx: PadicContext, params) -> dict:
    return {
        "schema_version": "1",
        "case": case,
        "p": ctx.p,
        "precision": ctx.precision,
        "params": params,
        "conventions": CONVENTIONS,
        "values": [],
        "checks": [],
        "pass": True,
        "wall_time_s": None,
    }


def _add_value(report, tensor, value, provenance, certificate=None):
    report["values"].append(
        {
            "tensor": tensor,
            "value": None if value is None else [value.real, value.imag],
            "abs": None if value is None else abs(value),
            "provenance": provenance,
            "certificate": certificate,
        }
    )


def _check(report, name, ok, detail=None):
    report["checks"].append({"name": name, "ok": bool(ok), "detail": detail})
    if not ok:
        report["pass"] = False


def _user_order(desc, slot_map):
    """Render a slot-order descriptor in the user's slot numbering."""
    i, j, m, tag = desc
    parts = [None, None, None]
    parts[slot_map[0]] = f"g^{i}.v{slot_map[0] + 1}"
    parts[slot_map[1]] = f"g^{j}.v{slot_map[1] + 1}"
    third = f"g^{m}.v{slot_map[2] + 1}"
    if tag:
        third = "w." + third
    parts[slot_map[2]] = third
    return " (x) ".join(parts)


def _solve_target(tc: TrilinearContext, ledger: EllValueLedger) -> tuple:
    """Solve for the leading tensor of the i = 0 band; AL-branch at n = 1."""
    both_unram = tc.slot1.slot_type in ("unram", "vK") and tc.slot2.slot_type in (
        "unram", "vK"
    )
    if both_unram and tc.n == 1:
        x = solve_unram_unram_n1(tc, ledger)
        return (1, 0, 0, ""), x
    x = solve_band(tc, 0, ledger)
    lead = [d for d, e in ledger.entries.items() if e.provenance == "solved"][-1]
    return lead, x


def _context_scale(tc: TrilinearContext) -> float:
    return abs(tc.psi_on_star(0))


def verify_vt_00n(ctx: PadicContext, v1: RepSpec, v2: RepSpec, v3: RepSpec,
                  params=None) -> dict:
    """V1, V2 unramified, V3 of conductor n >= 1: gamma^n v1 x v2 x v3 and
    v1 x gamma^n v2 x v3 are test vectors; v1 x v2 x v3 is certified zero."""
    t0 = time.time()
    report = _report_skeleton("vt-00n", ctx, params or {})
    for s, nm in ((v1, "V1"), (v2, "V2")):
        if not (s.kind == PRINCIPAL and s.conductor == 0):
            raise ConfigurationError(f"{nm} must be an unramified principal series")
    n3 = v3.conductor
    if n3 < 1 or v3.is_stub:
        raise ConfigurationError("V3 must be ramified and non-supercuspidal")
    for order, slot_map in (((v1, v2), [0, 1, 2]), ((v2, v1), [1, 0, 2])):
        tc = build_context(ctx, order[0], order[1], v3)
        ledger = EllValueLedger()
        lead, X = _solve_target(tc, ledger)
        scale = _context_scale(tc)
        cert0 = zero_certificate(tc, (0, 0, 0, ""))
        _check(report, f"obstruction-zero certificate ({slot_map})", cert0 is not None,
               cert0)
        _add_value(report, _user_order((0, 0, 0, ""), slot_map), 0.0j,
                   "forced-zero", cert0)
        for desc, entry in ledger.entries.items():
            _add_value(report, _user_order(desc, slot_map), entry.value,
                       entry.provenance, entry.certificate)
        _check(report, f"nonzero target {describe(lead)} ({slot_map})",
               abs(X) > 1e-6 * scale, {"abs": abs(X), "scale": scale})
    report["wall_time_s"] = time.time() - t0
    return report


def _assign_case_a(specs):
    """Return (i1, i2, i3) with n_{i3} strictly maximal."""
    ns = [s.conductor for s in specs]
    k3 = max(range(3), key=lambda i: ns[i])
    if sum(1 for n in ns if n == ns[k3]) != 1:
        raise ConfigurationError("case (a) needs a strictly maximal conductor")
    rest = [i for i in range(3) if i != k3]
    return rest[0], rest[1], k3


def verify_vt_01sc_a(ctx: PadicContext, specs, params=None) -> dict:
    """Case (a): n3 > n1, n2; gamma^(n3-n1) v1 x v2 x v3 and the symmetric
    tensor are test vectors, with the intermediate translates certified zero."""
    t0 = time.time()
    report = _report_skeleton("vt-01sc-a", ctx, params or {})
    i1, i2, i3 = _assign_case_a(specs)
    v3 = specs[i3]
    if v3.is_stub:
        raise ConfigurationError(
            "supercuspidal V3 routes through the Kirillov fragment"
        )
    n3 = v3.conductor
    for first, second, slot_map in (
        ((i1, specs[i1]), (i2, specs[i2]), None),
        ((i2, specs[i2]), (i1, specs[i1]), None),
    ):
        slot_map = [first[0], second[0], i3]
        try:
            tc = build_context(ctx, first[1], second[1], v3)
        except ConfigurationError as e:
            _check(report, f"context {slot_map}", False, str(e))
            continue
        ledger = EllValueLedger()
        lead, X = _solve_target(tc, ledger)
        scale = _context_scale(tc)
        # vanishing pattern below the target translate
        n1_eff = tc.slot1.n_slot
        for i in range(0, n3 - n1_eff):
            cert = zero_certificate(tc, (i, 0, 0, ""))
            _check(report, f"zero at gamma^{i} ({slot_map})", cert is not None, cert)
            if cert:
                _add_value(report, _user_order((i, 0, 0, ""), slot_map), 0.0j,
                           "forced-zero", cert)
        for desc, entry in ledger.entries.items():
            _add_value(report, _user_order(desc, slot_map), entry.value,
                       entry.provenance, entry.certificate)
        _check(report, f"nonzero target ({slot_map})", abs(X) > 1e-6 * scale,
               {"abs": abs(X), "scale": scale})
    report["wall_time_s"] = time.time() - t0
    return report


def verify_vt_01sc_b(ctx: PadicContext, specs, params=None) -> dict:
    """Case (b): n1 = n2 >= n3; v1 x v2 x gamma^i v3 is a test vector for all
    0 <= i <= n1 - n3."""
    t0 = time.time()
    report = _report_skeleton("vt-01sc-b", ctx, params or {})
    ns = [s.conductor for s in specs]
    hi = max(ns)
    big = [i for i in range(3) if ns[i] == hi]
    if len(big) < 2:
        raise ConfigurationError("case (b) needs the two largest conductors equal")
    lo = [i for i in range(3) if i not in big[:2]]
    i3 = lo[0] if lo else big[2]
    pair = [i for i in range(3) if i != i3]
    # if all three share the conductor and exactly one is special, aim it at V3
    if len(big) == 3:
        sp = [i for i in range(3) if specs[i].is_special]
        if len(sp) == 1:
            i3 = sp[0]
            pair = [i for i in range(3) if i != i3]
    v3 = specs[i3]
    if v3.is_stub:
        raise ConfigurationError("supercuspidal V3 is outside this driver")
    last_exc = None
    for p1, p2 in ((pair[0], pair[1]), (pair[1], pair[0])):
        slot_map = [p1, p2, i3]
        try:
            tc = build_context(ctx, specs[p1], specs[p2], v3)
        except ConfigurationError as e:
            last_exc = e
            continue
        ledger = EllValueLedger()
        n_eff = tc.n - tc.target_level
        scale = None
        for i in range(0, n_eff + 1):
            X = solve_band(tc, i, ledger)
            scale = abs(X) if scale is None else scale
            _check(report, f"nonzero at i={i} ({slot_map})",
                   abs(X) > 1e-6 * max(scale, 1e-30), {"abs": abs(X)})
        for desc, entry in ledger.entries.items():
            _add_value(report, _user_order(desc, slot_map), entry.value,
                       entry.provenance, entry.certificate)
        report["wall_time_s"] = time.time() - t0
        return report
    raise ConfigurationError(f"no admissible slot assignment: {last_exc}")


def verify_sc_equal(ctx: PadicContext, v1: RepSpec, v2: RepSpec, v3: RepSpec,
                    params=None) -> dict:
    """Two supercuspidals of equal conductor, V1 ramified principal."""
    t0 = time.time()
    report = _report_skeleton("sc-equal-conductor", ctx, params or {})
    out = ell_equal_conductor(ctx, v1, SupercuspidalStub(v2), SupercuspidalStub(v3))
    r = v3.conductor - v1.conductor
    _add_value(report, f"g^{r}.v1 (x) v2 (x) v3", out["value"], "computed",
               {"type": "localized-K-integral", "support": f"I_{v3.conductor}"})
    dev = abs(out["value"] - out["closed_form"])
    _check(report, "closed form alpha1^(n3-n1) vol(I_n3)", dev < 1e-12,
           {"deviation": dev, "closed_form": [out["closed_form"].real,
                                              out["closed_form"].imag]})
    _check(report, "nonzero", abs(out["value"]) > 1e-9 * abs(out["alpha1_power"]),
           {"abs": abs(out["value"])})
    _add_value(report, "v1 (x) v2 (x) v3", None,
               "nonzero-by-contragredient-atkin-lehner",
               {"type": "dual-triple identity",
                "relation": "l(v1 x v2 x v3) = w1(pi^(n3-n1)) l(AL^-1 g^(n3-n1) "
                            "AL . v1 x v2 x v3)"})
    report["wall_time_s"] = time.time() - t0
    return report


def verify_sc_unequal(ctx: PadicContext, v1: RepSpec, v2: RepSpec, v3: RepSpec,
                      params=None) -> dict:
    """Unequal supercuspidal conductors: vanishing pattern plus the
    position of the nonvanishing translate; no closed-form value exists."""
    t0 = time.time()
    report = _report_skeleton("sc-unequal-conductor", ctx, params or {})
    n1, n2, n3 = v1.conductor, v2.conductor, v3.conductor
    if not (n2 < n3 and n1 < n3):
        raise ConfigurationError("need n1, n2 < n3")
    stub2, stub3 = SupercuspidalStub(v2), SupercuspidalStub(v3)
    phi_val = pairing_Phi(stub2.new_vector(ctx, +1), stub3.new_vector(ctx, -1))
    _check(report, "Phi(new, new) = 1", abs(phi_val - 1) < 1e-12,
           {"value": [phi_val.real, phi_val.imag]})
    for i in range(0, n3 - n1):
        _add_value(
            report, f"g^{i}.v1 (x) v2 (x) v3", 0.0j, "forced-zero",
            {"type": "stub-conductor-axiom",
             "reason": f"functional lands in dual-V3^(I_{n3 - 1}) = 0",
             "level": n3 - 1, "conductor": n3},
        )
    _add_value(report, f"g^{n3 - n1}.v1 (x) v2 (x) v3", None,
               "nonzero-by-exhaustion",
               {"type": "new-line argument",
                "reason": "the functional is a nonzero vector of the dual new "
                          "line; all earlier translates are certified zero"})
    report["wall_time_s"] = time.time() - t0
    return report


# -- reducible cases -------------------------------------------------------------------


def verify_reducible_i(ctx: PadicContext, etas, params=None) -> dict:
    """V_i = Ind((eta_i o det) delta^(1/2)), eta_i unramified, product of
    squares trivial: v1^K x v2^K x v3^K is a test vector (kernel route)."""
    t0 = time.time()
    report = _report_skeleton("reducible-i", ctx, params or {})
    specs = [RepSpec.special_subspace(e) for e in etas]
    prod = specs[0].omega * specs[1].omega * specs[2].omega
    if not prod.is_trivial(ctx.tol):
        raise ConfigurationError("eta1^2 eta2^2 eta3^2 != 1")
    vecs = [v_K(s, ctx) for s in specs]
    val = kernel_oracle(ctx, specs, vecs)
    _add_value(report, "v1^K (x) v2^K (x) v3^K", val, "computed",
               {"type": "kernel-integral"})
    _check(report, "nonzero", abs(val) > 1e-9, {"abs": abs(val)})
    report["wall_time_s"] = time.time() - t0
    return report


def verify_reducible_ii(ctx: PadicContext, eta1: MultChar, eta2: MultChar,
                        v3: RepSpec, params=None) -> dict:
    """V1, V2 reducible delta^(1/2)-models, V3 irreducible with
    eta1^2 eta2^2 w3 = 1: gamma^n3 v1^K x v2^K x v3 is a test vector."""
    t0 = time.time()
    report = _report_skeleton("reducible-ii", ctx, params or {})
    s1, s2 = RepSpec.special_subspace(eta1), RepSpec.special_subspace(eta2)
    n3 = v3.conductor
    if n3 == 0:
        vecs = [v_K(s1, ctx), v_K(s2, ctx), new_vector(v3, ctx)]
        val = kernel_oracle(ctx, [s1, s2, v3], vecs)
        _add_value(report, "v1^K (x) v2^K (x) v3", val, "computed",
                   {"type": "kernel-integral"})
        _check(report, "nonzero", abs(val) > 1e-9, {"abs": abs(val)})
        report["wall_time_s"] = time.time() - t0
        return report
    for order, slot_map in (((s1, s2), [0, 1, 2]), ((s2, s1), [1, 0, 2])):
        tc = build_context(ctx, order[0], order[1], v3,
                           reducible_vK=(True, True))
        ledger = EllValueLedger()
        lead, X = _solve_target(tc, ledger)
        scale = _context_scale(tc)
        for desc, entry in ledger.entries.items():
            _add_value(report, _user_order(desc, slot_map), entry.value,
                       entry.provenance, entry.certificate)
        _check(report, f"nonzero target ({slot_map})", abs(X) > 1e-6 * scale,
               {"abs": abs(X), "scale": scale})
    report["wall_time_s"] = time.time() - t0
    return report


def verify_reducible_iii_a(ctx: PadicContext, eta1: MultChar, v2: RepSpec,
                           v3: RepSpec, params=None, _case_tag="reducible-iii-a"
                           ) -> dict:
    """V1 reducible, V2 non-supercuspidal minimal, n3 > n2: both
    v1^K x gamma^(n3-n2) v2 x v3 and gamma^n3 v1^K x v2 x v3 are test vectors."""
    t0 = time.time()
    report = _report_skeleton(_case_tag, ctx, params or {})
    s1 = RepSpec.special_subspace(eta1)
    if v2.is_stub or v3.is_stub:
        raise ConfigurationError("this driver covers non-supercuspidal V2, V3")
    if not v3.conductor > v2.conductor:
        raise ConfigurationError("case (a) needs n3 > n2")
    # target A: v1^K x gamma^(n3-n2) v2 x v3  (V2 in the mu-unramified slot)
    tc_a = build_context(ctx, v2, s1, v3, reducible_vK=(False, True))
    led_a = EllValueLedger()
    lead_a, xa = _solve_target(tc_a, led_a)
    slot_map_a = [1, 0, 2]
    for desc, entry in led_a.entries.items():
        _add_value(report, _user_order(desc, slot_map_a), entry.value,
                   entry.provenance, entry.certificate)
    _check(report, "nonzero v1^K x g^(n3-n2) v2 x v3",
           abs(xa) > 1e-6 * _context_scale(tc_a), {"abs": abs(xa)})
    # target B: gamma^n3 v1^K x v2 x v3  (V1 in slot 1, V2 mu'-unramified)
    tc_b = build_context(ctx, s1, v2, v3, reducible_vK=(True, False))
    led_b = EllValueLedger()
    lead_b, xb = _solve_target(tc_b, led_b)
    slot_map_b = [0, 1, 2]
    for desc, entry in led_b.entries.items():
        _add_value(report, _user_order(desc, slot_map_b), entry.value,
                   entry.provenance, entry.certificate)
    _check(report, "nonzero g^n3 v1^K x v2 x v3",
           abs(xb) > 1e-6 * _context_scale(tc_b), {"abs": abs(xb)})
    report["wall_time_s"] = time.time() - t0
    return report


def verify_reducible_iii_b(ctx: PadicContext, eta1: MultChar, v2: RepSpec,
                           v3: RepSpec, params=None) -> dict:
    """n2 = n3: split on Hom_G(V2, dual V3)."""
    t0 = time.time()
    report = _report_skeleton("reducible-iii-b", ctx, params or {})
    s1 = RepSpec.special_subspace(eta1)
    if v2.is_stub or v3.is_stub:
        raise ConfigurationError(
            "Hom-decision is implemented for principal/special kinds only"
        )
    if v2.conductor != v3.conductor:
        raise ConfigurationError("case (b) needs n2 = n3")
    hom_nonzero = v2.isomorphic(v3.dual(), ctx.tol)
    _check(report, "Hom(V2, dual V3) != 0", True,
           {"value": hom_nonzero})
    if hom_nonzero:
        # l = proj1* (x) natural pairing; values proj*(gamma^i v1^K) <v2, v3>
        nv3 = new_vector(v3, ctx)
        nv_dual = new_vector(v3.dual(), ctx)
        pair = dual_pairing(ctx, nv_dual, nv3)
        _check(report, "new-vector pairing nonzero", abs(pair) > 1e-12,
               {"abs": abs(pair)})
        vk = v_K(s1, ctx)
        for i in range(0, v3.conductor + 1):
            proj = special_project(vk.act_gamma(i), "subspace")
            val = proj * pair
            _add_value(report, f"g^{i}.v1^K (x) v2 (x) v3", val, "computed",
                       {"type": "proj*-pairing", "proj_star": [proj.real,
                                                               proj.imag]})
            _check(report, f"nonzero at i={i}", abs(val) > 1e-9 * abs(pair),
                   {"abs": abs(val)})
        report["wall_time_s"] = time.time() - t0
        return report
    if v3.conductor == 0:
        vecs = [v_K(s1, ctx), new_vector(v2, ctx), new_vector(v3, ctx)]
        val = kernel_oracle(ctx, [s1, v2, v3], vecs)
        _add_value(report, "v1^K (x) v2 (x) v3", val, "computed",
                   {"type": "kernel-integral"})
        _check(report, "nonzero", abs(val) > 1e-9, {"abs": abs(val)})
        report["wall_time_s"] = time.time() - t0
        return report
    # rotated chain: slots (V2, V3), target v1^K in the reducible model
    tc = build_context(ctx, v2, v3, s1, target_vK=True)
    ledger = EllValueLedger()
    slot_map = [1, 2, 0]
    for i in range(0, tc.n + 1):
        X = solve_band(tc, i, ledger)
        _check(report, f"nonzero at i={i}", abs(X) > 1e-9, {"abs": abs(X)})
    for desc, entry in ledger.entries.items():
        _add_value(report, _user_order(desc, slot_map), entry.value,
                   entry.provenance, entry.certificate)
    report["wall_time_s"] = time.time() - t0
    return report


def verify_reducible_iii_c(ctx: PadicContext, eta1: MultChar, v2: RepSpec,
                           v3: RepSpec, params=None) -> dict:
    """V2 special, n3 = 0: case (a) applied to (V1, V3, V2)."""
    if not (v2.is_special and v3.conductor == 0):
        raise ConfigurationError("case (c) needs V2 special and n3 = 0")
    report = verify_reducible_iii_a(ctx, eta1, v3, v2, params,
                                    _case_tag="reducible-iii-c")
    for v in report["values"]:
        v["tensor"] = (
            v["tensor"].replace("v2", "vTMP").replace("v3", "v2")
            .replace("vTMP", "v3")
        )
    return report


CASES = {
    "vt-00n": lambda ctx, specs, params: verify_vt_00n(
        ctx, specs[0], specs[1], specs[2], params
    ),
    "vt-01sc-a": lambda ctx, specs, params: verify_vt_01sc_a(ctx, specs, params),
    "vt-01sc-b": lambda ctx, specs, params: verify_vt_01sc_b(ctx, specs, params),
    "sc-equal-conductor": lambda ctx, specs, params: verify_sc_equal(
        ctx, specs[0], specs[1], specs[2], params
    ),
    "sc-unequal-conductor": lambda ctx, specs, params: verify_sc_unequal(
        ctx, specs[0], specs[1], specs[2], params
    ),
}


def verify_theorem(ctx: PadicContext, case: str, specs, params=None) -> dict:
    """Dispatch a theorem case on explicit RepSpecs (reducible cases take
    their own drivers since the slots are whole induced spaces)."""
    if case not in CASES:
        raise ConfigurationError(
            f"unknown case {case!r}; implemented: {sorted(CASES)} plus the "
            "reducible-* drivers"
        )
    return CASES[case](ctx, specs, params or {})

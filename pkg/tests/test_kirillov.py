import random

import pytest

from gl2triple.characters import MultChar
from gl2triple.errors import ConfigurationError, UnsupportedOperation
from gl2triple.gl2 import GL2Elem
from gl2triple.kirillov import (
    KirillovVector,
    SupercuspidalStub,
    borel_act,
    ell_equal_conductor,
    pairing_Phi,
)
from gl2triple.local_field import LocalFieldElem as L
from gl2triple.reps import RepSpec

from conftest import ramified_unit, unram


def test_identity_acts_trivially(ctx3):
    f = KirillovVector.char_of_units(ctx3, +1)
    g = borel_act(GL2Elem.identity(ctx3), f, unram(3, 1.2))
    assert g.support == f.refine_to(g.depth).support


def test_central_acts_by_omega(ctx3):
    omega = unram(3, 1.7 - 0.3j)
    f = KirillovVector.char_of_units(ctx3, +1)
    z = GL2Elem.diag(L.pi_pow(ctx3, 1), L.pi_pow(ctx3, 1))
    g = borel_act(z, f, omega)
    for key, val in g.support.items():
        assert abs(val - omega.at_pi() * f.refine_to(g.depth).support[key]) < 1e-12


def test_unipotent_fixes_unit_characteristic(ctx3):
    # psi(x) = 1 on O^x, so (1,1;0,1) fixes 1_{O^x}
    f = KirillovVector.char_of_units(ctx3, +1)
    b = GL2Elem.unipotent_upper(L.one(ctx3))
    g = borel_act(b, f, unram(3, 1.0))
    h = f.refine_to(g.depth)
    assert all(abs(g.support[k] - h.support[k]) < 1e-12 for k in h.support)


def test_phi_new_new(ctx3):
    f = KirillovVector.char_of_units(ctx3, +1)
    g = KirillovVector.char_of_units(ctx3, -1)
    assert pairing_Phi(f, g) == pytest.approx(1.0)


def test_phi_zero_and_scaling(ctx3):
    f = KirillovVector.char_of_units(ctx3, +1)
    zero = KirillovVector(ctx3, 0, {}, -1)
    assert pairing_Phi(f, zero) == 0
    g = KirillovVector.char_of_units(ctx3, -1)
    a = GL2Elem.diag(L.pi_pow(ctx3, 1), L.one(ctx3))
    lhs = pairing_Phi(borel_act(a, f, unram(3, 1.0)),
                      borel_act(a, g, unram(3, 1.0)))
    assert lhs == pytest.approx(1 / 3)  # |a| Phi(f, g)


def test_phi_requires_opposite_conventions(ctx3):
    f = KirillovVector.char_of_units(ctx3, +1)
    g = KirillovVector.char_of_units(ctx3, +1)
    with pytest.raises(ConfigurationError):
        pairing_Phi(f, g)


def _random_vector(ctx, sign, rng):
    supp = {}
    for _ in range(3):
        supp[(rng.randint(-1, 2), rng.choice([1, 2, 4, 5, 7, 8]))] = complex(
            rng.uniform(-1, 1), rng.uniform(-1, 1)
        )
    return KirillovVector(ctx, 2, supp, sign)


def test_borel_equivariance_sampled(ctx3):
    """Phi(b f, b f') = |a/d| (w2 w3)(d) Phi(f, f') on >= 100 samples."""
    rng = random.Random(5)
    w2 = MultChar(complex(1.1, 0.3), ramified_unit(3))
    w3 = MultChar(complex(0.6, -0.2j.imag), ramified_unit(3).inv())
    worst = 0.0
    for _ in range(120):
        a = L.from_unit_val(ctx3, rng.randint(-1, 2), rng.choice([1, 2, 4, 5]))
        d = L.from_unit_val(ctx3, rng.randint(-1, 2), rng.choice([1, 2, 4, 5]))
        bb = (L.zero(ctx3) if rng.random() < 0.3
              else L.from_unit_val(ctx3, rng.randint(-2, 2), rng.choice([1, 2])))
        b = GL2Elem(a, bb, L.zero(ctx3), d)
        f = _random_vector(ctx3, +1, rng)
        g = _random_vector(ctx3, -1, rng)
        lhs = pairing_Phi(borel_act(b, f, w2), borel_act(b, g, w3))
        fac = (3.0 ** (d.valuation() - a.valuation())
               * (w2 * w3)(d))
        rhs = fac * pairing_Phi(f, g)
        worst = max(worst, abs(lhs - rhs) / max(1e-12, abs(rhs)))
    assert worst < 1e-9


def test_borel_action_property(ctx3):
    rng = random.Random(9)
    omega = MultChar(complex(1.2, -0.1), ramified_unit(3))
    for _ in range(40):
        def rnd_upper():
            a = L.from_unit_val(ctx3, rng.randint(-1, 1), rng.choice([1, 2, 4]))
            d = L.from_unit_val(ctx3, rng.randint(-1, 1), rng.choice([1, 2, 4]))
            bb = (L.zero(ctx3) if rng.random() < 0.4
                  else L.from_unit_val(ctx3, rng.randint(-1, 1), 1))
            return GL2Elem(a, bb, L.zero(ctx3), d)
        b1, b2 = rnd_upper(), rnd_upper()
        f = _random_vector(ctx3, +1, rng)
        lhs = borel_act(b1, borel_act(b2, f, omega), omega)
        rhs = borel_act(b1 * b2, f, omega)
        depth = max(lhs.depth, rhs.depth)
        ll, rr = lhs.refine_to(depth), rhs.refine_to(depth)
        keys = set(ll.support) | set(rr.support)
        assert all(
            abs(ll.support.get(k, 0) - rr.support.get(k, 0)) < 1e-9 for k in keys
        )


def test_stub_honesty(ctx3):
    stub = SupercuspidalStub(RepSpec.supercuspidal_stub(2, unram(3, 1.1), "F"))
    f = stub.new_vector(ctx3)
    with pytest.raises(UnsupportedOperation):
        stub.act(GL2Elem.w_tilde(ctx3), f)
    assert stub.eigenproperty()["conductor"] == 2
    assert "pi^2" in stub.atkin_lehner_image()["element"]


def test_ell_equal_conductor(ctx2, ctx3):
    for ctx in (ctx2, ctx3):
        p = ctx.p
        chi = ramified_unit(p, 1 if p > 2 else 2)
        v1 = RepSpec.principal(unram(p, 1.1 + 0.2j), MultChar(complex(0.8, -0.1), chi))
        n3 = v1.conductor + 1
        w2 = unram(p, 1.3 + 0.1j)
        w3 = (v1.omega * w2).inv()
        v2 = RepSpec.supercuspidal_stub(n3, w2, "A")
        v3 = RepSpec.supercuspidal_stub(n3, w3, "B")
        out = ell_equal_conductor(ctx, v1, SupercuspidalStub(v2),
                                  SupercuspidalStub(v3))
        assert abs(out["value"] - out["closed_form"]) < 1e-12
        assert abs(out["value"]) > 0

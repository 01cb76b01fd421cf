import cmath
import random

import pytest

from gl2triple.characters import MultChar
from gl2triple.context import PadicContext
from gl2triple.errors import UnsupportedOperation
from gl2triple.gl2 import (
    GL2Elem,
    SubgroupSpec,
    enumerate_cosets,
    is_member,
    key_to_elem,
)
from gl2triple.local_field import LocalFieldElem as L
from gl2triple.reps import (
    RepSpec,
    closed_form_gamma,
    eigenspace_dim,
    eta_det_vector,
    new_vector,
    special_project,
    v_I,
    v_K,
    v_K_minus_I,
)

from conftest import ramified_unit, unram


@pytest.fixture(scope="module")
def sp1_p3(ctx3):
    th = ramified_unit(3)
    return RepSpec.principal(unram(3, 0.7 + 0.3j), MultChar(complex(1.1 - 0.4j), th))


@pytest.fixture(scope="module")
def sp2_p3(ctx3):
    th = ramified_unit(3)
    return RepSpec.principal(MultChar(complex(0.9 + 0.2j), th), unram(3, 1.7))


def test_new_vector_unramified_constant(ctx3):
    spec = RepSpec.principal(unram(3, 1.3), unram(3, 0.5))
    v = new_vector(spec, ctx3)
    assert v.level == 0 and v.values[(0, 0, 0, 0)] == 1.0


def test_new_vector_sp1_support(ctx3, sp1_p3):
    v = new_vector(sp1_p3, ctx3)
    table = enumerate_cosets(ctx3, 1)
    for key in table.key_tuples():
        if key[2] % 3 == 0:  # inside I_1: value mu'(d)
            expected = sp1_p3.mu_prime.unit.value(key[3] % 3)
            assert abs(v.values[key] - expected) < 1e-12
        else:
            assert v.values[key] == 0


def test_new_vector_sp2_support(ctx3, sp2_p3):
    v = new_vector(sp2_p3, ctx3)
    table = enumerate_cosets(ctx3, 1)
    for key in table.key_tuples():
        a, b, c, d = key
        if c % 3 != 0:
            det = (a * d - b * c) % 3
            expected = sp2_p3.mu.unit.value((det * pow(c, -1, 3)) % 3)
            assert abs(v.values[key] - expected) < 1e-12
        else:
            assert v.values[key] == 0


def test_normalizations(ctx3, sp1_p3, sp2_p3):
    v1 = new_vector(sp1_p3, ctx3)
    assert abs(v1.evaluate(GL2Elem.from_ints(ctx3, (1, 0, 3, 1))) - 1) < 1e-12
    v2 = new_vector(sp2_p3, ctx3)
    assert abs(v2.evaluate(GL2Elem.from_ints(ctx3, (1, 0, 1, 1))) - 1) < 1e-12


def test_evaluate_diag_and_center(ctx3):
    spec = RepSpec.principal(unram(3, 1.3 + 0.1j), unram(3, 0.4 - 0.2j))
    v = new_vector(spec, ctx3)
    g = GL2Elem.diag(L.pi_pow(ctx3, 1), L.one(ctx3))
    # f(diag(pi,1) k) = alpha^-1 f(k)
    assert abs(v.evaluate(g) - 1 / spec.alpha) < 1e-12
    z = GL2Elem.diag(L.pi_pow(ctx3, 1), L.pi_pow(ctx3, 1))
    assert abs(v.evaluate(z) - spec.omega.at_pi()) < 1e-12


def test_lemma_oracle_object_path(ctx3, sp1_p3, sp2_p3):
    """act-based translates equal the closed forms (small levels)."""
    cases = [
        (RepSpec.principal(unram(3, 1.3 + 0.1j), unram(3, 0.4 - 0.2j)), "plain"),
        (sp1_p3, "plain"),
        (sp2_p3, "plain"),
    ]
    for spec, variant in cases:
        v = new_vector(spec, ctx3)
        for r in (1, 2):
            gv = v.act_gamma(r)
            table = enumerate_cosets(ctx3, gv.level)
            worst = max(
                abs(gv.values[key]
                    - closed_form_gamma(spec, r, key_to_elem(ctx3, key, gv.level),
                                        variant))
                for key in table.key_tuples()
            )
            assert worst < 1e-9


def test_difference_vectors(ctx2):
    spec = RepSpec.principal(unram(2, 1.3 + 0.1j), unram(2, 0.4 - 0.2j))
    v = new_vector(spec, ctx2)
    r = 2
    diff = v.act_gamma(r) - v.act_gamma(r - 1).scaled(spec.beta)
    table = enumerate_cosets(ctx2, r)
    for key in table.key_tuples():
        k = key_to_elem(ctx2, key, r)
        assert abs(diff.values[key] - closed_form_gamma(spec, r, k, "diff_beta")) < 1e-9


def test_act_is_homomorphism(ctx2):
    spec = RepSpec.principal(unram(2, 1.2), unram(2, 0.7))
    v = new_vector(spec, ctx2)
    table = enumerate_cosets(ctx2, 2)
    random.seed(4)
    keys = table.key_tuples()
    for _ in range(5):
        g = key_to_elem(ctx2, random.choice(keys), 2)
        h = key_to_elem(ctx2, random.choice(keys), 2) * GL2Elem.gamma_pow(ctx2, 1)
        lhs = v.act(h).act(g)
        rhs = v.act(g * h)
        diff = (lhs - rhs).max_abs()
        assert diff < 1e-9


def test_new_vector_eigenproperty(ctx3, sp1_p3):
    v = new_vector(sp1_p3, ctx3)
    table = enumerate_cosets(ctx3, 1)
    omega = sp1_p3.omega
    for key in table.key_tuples():
        if key[2] % 3 != 0:
            continue  # not in I_1
        k = key_to_elem(ctx3, key, 1)
        acted = v.act(k)
        lam = omega.unit.value(key[3] % 3)
        assert (acted - v.scaled(lam)).max_abs() < 1e-9


def test_eigenspace_dims(ctx3, sp1_p3):
    unsp = RepSpec.principal(unram(3, 1.3 + 0.1j), unram(3, 0.4 - 0.2j))
    for s in (0, 1, 2):
        assert eigenspace_dim(unsp, ctx3, s, unsp.omega) == s + 1
    assert eigenspace_dim(sp1_p3, ctx3, 0, sp1_p3.omega) == 0
    assert eigenspace_dim(sp1_p3, ctx3, 1, sp1_p3.omega) == 1
    assert eigenspace_dim(sp1_p3, ctx3, 2, sp1_p3.omega) == 2
    squo = RepSpec.special_quotient(unram(3, 1.7))
    ssub = RepSpec.special_subspace(unram(3, 1.7))
    for s in (0, 1, 2):
        assert eigenspace_dim(squo, ctx3, s, squo.omega) == max(0, s)
        assert eigenspace_dim(ssub, ctx3, s, ssub.omega) == max(0, s)


def test_contragredient_conductor_via_a_side(ctx3, sp1_p3):
    """The omega(a)-eigenspaces match the omega(d)-ones at every level."""
    for s in (1, 2):
        d_side = eigenspace_dim(sp1_p3, ctx3, s, sp1_p3.omega, side="d")
        a_side = eigenspace_dim(sp1_p3, ctx3, s, sp1_p3.omega, side="a")
        assert d_side == a_side


def test_atkin_lehner(ctx3, sp1_p3):
    v = new_vector(sp1_p3, ctx3)
    w = v.atkin_lehner()
    ww = w.atkin_lehner()
    # applied twice: the square of (0,1;pi^n,0) is central pi^n
    scal = sp1_p3.omega.at_pi(sp1_p3.conductor)
    assert (ww - v.scaled(scal)).max_abs() < 1e-9
    # the image lies in the omega(a)-eigenline: check on I_n generators
    table = enumerate_cosets(ctx3, 1)
    omega = sp1_p3.omega
    for key in table.key_tuples():
        if key[2] % 3 != 0:
            continue
        k = key_to_elem(ctx3, key, 1)
        lam = omega.unit.value(key[0] % 3)
        assert (w.act(k) - w.scaled(lam)).max_abs() < 1e-9


def test_special_projections(ctx3):
    eta = unram(3, 1.5 - 0.2j)
    squo = RepSpec.special_quotient(eta)
    line = eta_det_vector(squo, ctx3, 1)
    assert special_project(line, "quotient").max_abs() < 1e-12
    ssub = RepSpec.special_subspace(eta)
    vk = v_K(ssub, ctx3)
    assert abs(special_project(vk, "subspace") - 1) < 1e-12
    nv = new_vector(ssub, ctx3)
    assert abs(special_project(nv, "subspace")) < 1e-12
    # proj(v^I) = -proj(v^{K\I}) as classes
    a = special_project(v_I(squo, ctx3), "quotient")
    b = special_project(v_K_minus_I(squo, ctx3), "quotient")
    assert (a + b).max_abs() < 1e-12


def test_dual_and_stub_bookkeeping(ctx3):
    spec = RepSpec.principal(unram(3, 1.3), unram(3, 0.5))
    assert spec.dual().dual().isomorphic(spec)
    stub = RepSpec.supercuspidal_stub(2, unram(3, 1.1), "F")
    assert stub.dual().dual().isomorphic(stub)
    with pytest.raises(UnsupportedOperation):
        stub.twist(MultChar(complex(1.0), ramified_unit(3)))


def test_stub_new_vector_is_abstract(ctx3):
    stub = RepSpec.supercuspidal_stub(2, unram(3, 1.1), "F")
    with pytest.raises(UnsupportedOperation):
        new_vector(stub, ctx3)

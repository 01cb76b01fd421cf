import random

import pytest

from gl2triple.context import PadicContext
from gl2triple.errors import BudgetError
from gl2triple.gl2 import (
    GL2Elem,
    SubgroupSpec,
    decomposition2_factors,
    decomposition_factors,
    enumerate_cosets,
    gl2_order,
    is_member,
    iwasawa,
    key_to_elem,
    shell_depth,
    support_identity_check,
    vol_J,
    vol_iwahori,
)
from gl2triple.local_field import LocalFieldElem as L


def test_iwasawa_k_case(ctx3):
    g = GL2Elem.from_ints(ctx3, (1, 2, 3, 1))
    b, k = iwasawa(g)
    assert b.a == L.one(ctx3) and b.d == L.one(ctx3) and b.b.is_zero
    assert k is g


def test_iwasawa_w_pi(ctx3):
    g = GL2Elem.atkin_lehner_elem(ctx3, 1)  # (0,1;pi,0)
    b, k = iwasawa(g)
    assert b.a == L.one(ctx3) and b.d == L.pi_pow(ctx3, 1)
    assert (k.a.is_zero and k.b == L.one(ctx3)
            and k.c == L.one(ctx3) and k.d.is_zero)


def test_iwasawa_roundtrip_exhaustive(ctx2):
    table = enumerate_cosets(ctx2, 2)
    gamma = GL2Elem.gamma_pow(ctx2, 1)
    for key in table.key_tuples():
        g = key_to_elem(ctx2, key, 2) * gamma
        b, k = iwasawa(g)
        prod = b * k
        assert all(x == y for x, y in zip(prod.entries(), g.entries()))
        assert is_member(k, SubgroupSpec("K"))
        assert b.c.is_zero


def test_shell_depth(ctx3):
    assert shell_depth(GL2Elem.w_tilde(ctx3)) == 0
    assert shell_depth(GL2Elem.from_ints(ctx3, (1, 0, 3, 1))) == 1
    upper = GL2Elem.from_ints(ctx3, (1, 2, 0, 1))
    assert shell_depth(upper) == ctx3.precision  # cap


def test_membership(ctx3):
    e = GL2Elem.identity(ctx3)
    for tag, n in (("K", 0), ("I", 2), ("Kprin", 2), ("J", 1), ("I1", 2)):
        assert is_member(e, SubgroupSpec(tag, n))
    g = GL2Elem.from_ints(ctx3, (1, 0, 3, 1))
    assert is_member(g, SubgroupSpec("I", 1))
    assert not is_member(g, SubgroupSpec("I", 2))
    # diagonal unit 2 is not 1 mod p: inside I_1, outside Kprin_1
    h = GL2Elem.from_ints(ctx3, (2, 0, 0, 1))
    assert not is_member(h, SubgroupSpec("Kprin", 1))
    assert is_member(h, SubgroupSpec("I", 1))
    # 1 + p is 1 mod p: inside Kprin_1, outside Kprin_2
    h2 = GL2Elem.from_ints(ctx3, (4, 0, 0, 1))
    assert is_member(h2, SubgroupSpec("Kprin", 1))
    assert not is_member(h2, SubgroupSpec("Kprin", 2))


def test_coset_counts():
    assert enumerate_cosets(PadicContext(p=2), 1).size == 6
    assert enumerate_cosets(PadicContext(p=3), 1).size == 48
    assert enumerate_cosets(PadicContext(p=2), 2).size == 96
    assert gl2_order(3, 2) == 3888


def test_budget_error():
    ctx = PadicContext(p=7, precision=6, budget=10**6)
    with pytest.raises(BudgetError):
        enumerate_cosets(ctx, 3)


def test_support_identity(ctx2, ctx3):
    assert support_identity_check(ctx2, 0, 1)   # r = 0 reduction
    assert support_identity_check(ctx2, 1, 1)
    big3 = PadicContext(p=3, precision=6, budget=5 * 10**7)
    assert support_identity_check(big3, 2, 1)


def test_decomposition_multiplies_back(ctx3):
    table = enumerate_cosets(ctx3, 2)
    checked = 0
    for key in table.key_tuples():
        k = key_to_elem(ctx3, key, 2)
        if k.c.is_zero or not k.d.is_unit():
            continue
        for r in (0, 1):
            if k.c.val - r < 0:
                continue
            b, mid, diag = decomposition_factors(k, r)
            prod = b * mid * diag
            conj = k.conj_by_gamma(r)
            assert all(x == y for x, y in zip(prod.entries(), conj.entries()))
            checked += 1
    assert checked > 100


def test_decomposition2_multiplies_back(ctx3):
    table = enumerate_cosets(ctx3, 2)
    checked = 0
    for key in table.key_tuples():
        k = key_to_elem(ctx3, key, 2)
        if k.c.is_zero:
            continue
        for r in (0, 1, 2):
            if k.c.val > r:
                continue
            b, mid, third = decomposition2_factors(k, r)
            prod = b * mid * third
            conj = k.conj_by_gamma(r)
            assert all(x == y for x, y in zip(prod.entries(), conj.entries()))
            checked += 1
    assert checked > 100


def test_iwahori_closure_under_product(ctx2):
    # k, k' in I_s implies k k' in I_s, exhaustively at level 2
    table = enumerate_cosets(ctx2, 2)
    members = [
        key_to_elem(ctx2, key, 2)
        for key in table.key_tuples()
        if is_member(key_to_elem(ctx2, key, 2), SubgroupSpec("I", 1))
    ]
    random.seed(0)
    for _ in range(200):
        k1, k2 = random.choice(members), random.choice(members)
        assert is_member(k1 * k2, SubgroupSpec("I", 1))


def test_volumes():
    assert vol_iwahori(2, 1) == pytest.approx(1 / 3)
    assert vol_iwahori(3, 2) == pytest.approx(1 / 12)
    assert vol_J(2, 1) == pytest.approx(2 / 6)
    # vol(I_n) from coset counts
    ctx = PadicContext(p=2)
    table = enumerate_cosets(ctx, 2)
    count = sum(1 for k in table.key_tuples() if k[2] % 4 == 0)
    assert count / table.size == pytest.approx(vol_iwahori(2, 2))

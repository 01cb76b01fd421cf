import math

import pytest
from hypothesis import given, settings, strategies as st

from gl2triple.characters import (
    BorelChar,
    MultChar,
    UnitCharacter,
    enumerate_unit_characters,
    unit_group,
)
from gl2triple.context import PadicContext
from gl2triple.errors import InvariantError
from gl2triple.local_field import LocalFieldElem as L
from gl2triple.reps import RepSpec, minimal_triple_search, twist_and_classify

from conftest import ramified_unit, unram


def test_trivial_character(ctx3):
    chi = MultChar.make(3, 1.0)
    for n in (1, 2, 5, -7):
        assert chi(L.from_int(ctx3, n)) == 1.0
    assert chi.conductor == 0


def test_norm_character(ctx3):
    chi = MultChar.norm_char(3)
    assert chi(L.pi_pow(ctx3, 1)) == pytest.approx(1 / 3)


def test_order4_character_mod5():
    ctx = PadicContext(p=5, precision=4)
    chars = [c for c in enumerate_unit_characters(5, 1) if c.den == 4]
    sending_2_to_i = [c for c in chars if abs(c.value(2) - 1j) < 1e-12]
    assert sending_2_to_i, "the order-4 character with chi(2) = i exists"
    chi = MultChar.make(5, 1.0, sending_2_to_i[0])
    assert abs(chi(L.from_int(ctx, 2)) - 1j) < 1e-12
    assert chi.conductor == 1


def test_primitivity_enforced():
    # a table mod 25 constant on 1 + 5Z is reduced to conductor 1
    chi1 = ramified_unit(5, 1)
    lifted = chi1._lift(2)
    assert UnitCharacter.from_table(5, 2, lifted.den, lifted.table).m == 1
    non_primitive = UnitCharacter(5, 2, lifted.den, lifted.table)
    with pytest.raises(InvariantError):
        non_primitive.check_primitive()


def test_character_multiplicativity(ctx5):
    chi = MultChar(complex(1.2, 0.3), ramified_unit(5, 1))
    vals = [L.from_unit_val(ctx5, v, u) for v in (-2, 0, 1) for u in (1, 2, 3, 4, 7)]
    for x in vals:
        for y in vals:
            assert abs(chi(x * y) - chi(x) * chi(y)) < 1e-9


def test_alpha_beta_consistency(ctx3):
    chi = BorelChar(MultChar.make(3, 1.7 - 0.4j), MultChar.make(3, 0.6 + 0.2j))
    # alpha beta^-1 = (mu / mu')(pi)^-1 |pi|^-1
    lhs = chi.alpha / chi.beta
    rhs = 1 / ((chi.mu.at_pi() / chi.mu_prime.at_pi()) * (1 / 3))
    assert abs(lhs - rhs) < 1e-12
    # defining equations
    assert abs(1 / chi.alpha - chi.mu.at_pi() / math.sqrt(3)) < 1e-12
    assert abs(1 / chi.beta - chi.mu_prime.at_pi() * math.sqrt(3)) < 1e-12


def test_unit_group_structures():
    assert unit_group(2, 1) == ((), ())
    gens, orders = unit_group(2, 3)
    assert orders == (2, 2)
    gens5, orders5 = unit_group(5, 2)
    assert orders5 == (20,)


def test_twist_identity_and_conductors(ctx3):
    th = ramified_unit(3)
    spec = RepSpec.principal(unram(3, 1.2), unram(3, 0.7))
    assert twist_and_classify(spec, MultChar.make(3, 1.0)).isomorphic(spec)
    eta = MultChar(complex(1.0), th)
    tw = twist_and_classify(spec, eta)
    assert tw.conductor == 2  # cond(mu eta) + cond(mu' eta)
    st_min = RepSpec.special_quotient(unram(3, 1.3))
    tw2 = twist_and_classify(st_min, unram(3, 0.5))
    assert tw2.conductor == 1  # unramified twists keep the special minimal
    tw3 = twist_and_classify(st_min, eta)
    assert tw3.conductor == 2  # ramified twist of a Steinberg twist


def test_twist_composes(ctx3):
    th = ramified_unit(3)
    spec = RepSpec.principal(MultChar(complex(1.2), th), unram(3, 0.7))
    e1 = MultChar(complex(0.9), th)
    e2 = unram(3, 1.4)
    once = twist_and_classify(twist_and_classify(spec, e1), e2)
    both = twist_and_classify(spec, e1 * e2)
    assert once.isomorphic(both)


def test_minimal_triple_search_unramified(ctx3):
    pairs = [(1.2, 0.5), (0.8, 1.1)]
    specs = [RepSpec.principal(unram(3, a), unram(3, b)) for a, b in pairs]
    last = 1 / (1.2 * 0.5 * 0.8 * 1.1 * 1.05)
    specs.append(RepSpec.principal(unram(3, 1.05), unram(3, last)))
    triple, total, minimal = minimal_triple_search(specs, bound=1)
    assert total == 0 and minimal


def test_minimal_triple_search_theta_pair():
    th = ramified_unit(3)
    # (1, theta), (1, theta^-1), (1, 1): total 2 is already minimal
    s1 = RepSpec.principal(unram(3, 1.1), MultChar(complex(0.9), th))
    s2 = RepSpec.principal(unram(3, 0.8), MultChar(complex(1.2), th.inv()))
    s3 = RepSpec.principal(unram(3, 1.3), unram(3, 1 / (1.1 * 0.9 * 0.8 * 1.2 * 1.3)))
    triple, total, minimal = minimal_triple_search([s1, s2, s3], bound=1)
    assert total == 2 and minimal


def test_minimal_triple_search_improvable():
    th = ramified_unit(3)
    # (theta a, theta b) is a twist of an unramified series: improvable
    s1 = RepSpec.principal(MultChar(complex(1.1), th), MultChar(complex(0.9), th))
    s2 = RepSpec.principal(MultChar(complex(0.8), th), MultChar(complex(1.2), th))
    s3 = RepSpec.principal(
        unram(3, 1.3), unram(3, 1 / (1.1 * 0.9 * 0.8 * 1.2 * 1.3))
    )
    triple, total, minimal = minimal_triple_search([s1, s2, s3], bound=1)
    assert not minimal and total == 0


@given(st.integers(1, 100), st.integers(1, 100))
@settings(max_examples=60, deadline=None)
def test_unit_character_is_multiplicative(a, b):
    chi = ramified_unit(5, 1)
    if a % 5 == 0 or b % 5 == 0:
        return
    assert abs(chi.value(a * b) - chi.value(a) * chi.value(b)) < 1e-12

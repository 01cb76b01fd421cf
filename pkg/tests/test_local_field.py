import cmath

import pytest
from hypothesis import given, settings, strategies as st

from gl2triple.context import PadicContext
from gl2triple.errors import PrecisionError
from gl2triple.local_field import LocalFieldElem as L
from gl2triple.local_field import abs_norm, additive_char, arith


def elem(ctx, n):
    return L.from_int(ctx, n)


def test_mul_adds_valuations(ctx3):
    x = L.pi_pow(ctx3, 1)
    assert (x * x).val == 2 and (x * x).unit == 1


def test_inverse_mod_125():
    ctx = PadicContext(p=5, precision=3)
    x = elem(ctx, 3)
    assert x.inv().unit == 42  # 3 * 42 = 126 = 1 mod 125
    assert (x * x.inv()) == L.one(ctx)


def test_additive_inverse_is_zero(ctx3):
    assert (L.one(ctx3) + elem(ctx3, -1)).is_zero


def test_abs_norm(ctx3):
    assert abs_norm(L.pi_pow(ctx3, 1)) == pytest.approx(1 / 3)
    assert abs_norm(L.one(ctx3)) == 1.0
    x = L.from_unit_val(ctx3, -2, 2)
    assert abs_norm(x) == pytest.approx(9.0)
    assert abs_norm(L.zero(ctx3)) == 0.0


def test_additive_char_basics(ctx3):
    assert additive_char(elem(ctx3, 7)) == 1.0  # trivial on O
    x = L.pi_pow(ctx3, -1)
    z = additive_char(x)
    assert abs(z - cmath.exp(2j * cmath.pi / 3)) < 1e-12
    # psi(x + 1) = psi(x): trivial on O, additivity
    assert abs(additive_char(x + L.one(ctx3)) - z) < 1e-12
    # nontrivial on p^-1 O, so the conductor is exactly 0
    vals = [additive_char(L.from_unit_val(ctx3, -1, u)) for u in (1, 2)]
    assert any(abs(v - 1) > 0.5 for v in vals)


def test_arith_dispatch(ctx3):
    x, y = elem(ctx3, 6), elem(ctx3, 2)
    assert arith(x, y, "mul") == elem(ctx3, 12)
    assert arith(x, y, "add") == elem(ctx3, 8)
    assert arith(x, None, "neg") == elem(ctx3, -6)
    assert arith(y, None, "inv") * y == L.one(ctx3)
    with pytest.raises(ZeroDivisionError):
        L.zero(ctx3).inv()


def test_precision_floor():
    ctx = PadicContext(p=3, precision=4, prec_floor=3)
    x = L.from_unit_val(ctx, 0, 1 + 27)   # 1 + p^3
    y = L.from_int(ctx, -1)
    with pytest.raises(PrecisionError):
        _ = x + y  # cancellation leaves one digit, below the floor


@given(a=st.integers(-200, 200), b=st.integers(-200, 200))
@settings(max_examples=150, deadline=None)
def test_norm_multiplicative_and_ultrametric(a, b):
    ctx = PadicContext(p=3, precision=8)
    x, y = L.from_int(ctx, a), L.from_int(ctx, b)
    assert abs_norm(x * y) == pytest.approx(abs_norm(x) * abs_norm(y))
    s = abs_norm(x + y)
    assert s <= max(abs_norm(x), abs_norm(y)) + 1e-12
    if abs_norm(x) != abs_norm(y):
        assert s == pytest.approx(max(abs_norm(x), abs_norm(y)))


@given(av=st.integers(-3, 3), au=st.sampled_from([1, 2, 4, 5, 7, 8]),
       bv=st.integers(-3, 3), bu=st.sampled_from([1, 2, 4, 5, 7, 8]))
@settings(max_examples=150, deadline=None)
def test_additive_char_is_additive(av, au, bv, bu):
    ctx = PadicContext(p=3, precision=8)
    x = L.from_unit_val(ctx, av, au)
    y = L.from_unit_val(ctx, bv, bu)
    lhs = additive_char(x + y)
    rhs = additive_char(x) * additive_char(y)
    assert abs(lhs - rhs) < 1e-9


@given(n=st.integers(-500, 500).filter(lambda v: v != 0),
       m=st.integers(-500, 500).filter(lambda v: v != 0))
@settings(max_examples=100, deadline=None)
def test_field_axioms_sampled(n, m):
    ctx = PadicContext(p=5, precision=8)
    x, y = L.from_int(ctx, n), L.from_int(ctx, m)
    assert x * y == y * x
    assert x + y == y + x
    assert (x + y) - y == x
    assert (x * y) / y == x

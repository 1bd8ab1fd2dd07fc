import pytest

from qfsplit.errors import DomainError, UsageError
from qfsplit.ffield import (
    ExtensionField,
    ModPSquare,
    default_modulus,
    field,
    parse_element,
)


def test_prime_field_arithmetic_examples():
    F3 = field(3)
    assert F3.mul(2, 2) == 1
    F2 = field(2)
    assert F2.add(1, 1) == 0


def test_extension_arithmetic_example():
    F4 = field(2, 2)
    t = (0, 1)
    assert F4.modulus == (1, 1, 1)
    assert F4.mul(t, (1, 1)) == (1, 0)  # t*(t+1) = 1


def test_inverse_examples():
    assert field(3).inv(2) == 2
    assert field(5).inv(3) == 2
    F4 = field(2, 2)
    assert F4.inv((0, 1)) == (1, 1)


def test_inverse_of_zero_raises():
    with pytest.raises(DomainError):
        field(5).inv(0)
    with pytest.raises(DomainError):
        field(2, 2).inv((0, 0))


def test_frobenius_examples():
    F7 = field(7)
    assert all(F7.frobenius(a) == a for a in range(7))
    F4 = field(2, 2)
    assert F4.frobenius((0, 1)) == (1, 1)  # t^2 = t + 1
    F9 = field(3, 2)
    assert F9.modulus == (1, 0, 1)
    assert F9.frobenius((0, 1)) == (0, 2)  # t^3 = -t


@pytest.mark.parametrize(
    "p,e", [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (3, 3), (2, 4), (3, 4), (5, 2)]
)
def test_inverse_frobenius_is_inverse_exhaustive(p, e):
    F = field(p, e)
    for a in F.elements():
        assert F.inverse_frobenius(F.frobenius(a)) == a
        assert F.frobenius(F.inverse_frobenius(a)) == a


def test_inverse_frobenius_random_beyond_exhaustive_range():
    import random

    rng = random.Random(53)
    F = field(5, 3)  # order 125: sampled rather than enumerated
    for _ in range(60):
        a = tuple(rng.randrange(5) for _ in range(3))
        assert F.inverse_frobenius(F.frobenius(a)) == a


@pytest.mark.parametrize("p,e", [(2, 2), (3, 2), (2, 3), (5, 2)])
def test_frobenius_is_a_ring_map(p, e):
    import random

    rng = random.Random(p * 100 + e)
    F = field(p, e)
    elems = list(F.elements())
    for _ in range(50):
        a, b = rng.choice(elems), rng.choice(elems)
        assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
        assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_field_matches_integer_arithmetic(p):
    F = field(p)
    for a in range(p):
        for b in range(p):
            assert F.add(a, b) == (a + b) % p
            assert F.sub(a, b) == (a - b) % p
            assert F.mul(a, b) == (a * b) % p


def test_field_constructor_validation():
    with pytest.raises(UsageError):
        field(4)
    with pytest.raises(UsageError):
        field(2, 1, modulus=[1, 1])
    with pytest.raises(UsageError):
        ExtensionField(2, 2, modulus=(1, 0, 1))  # t^2 + 1 = (t+1)^2 over F_2
    with pytest.raises(UsageError):
        ExtensionField(2, 2, modulus=(1, 1))  # wrong degree


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 4)])
def test_default_modulus_is_monic_irreducible(p, e):
    mod = default_modulus(p, e)
    assert len(mod) == e + 1 and mod[-1] == 1
    ExtensionField(p, e, mod)  # constructor re-checks irreducibility


def test_element_wrapper_operations():
    F4 = field(2, 2)
    t = F4.element((0, 1))
    one = F4.element(F4.one)
    assert (t * (t + one)).raw == F4.one
    assert t.inverse().raw == (1, 1)
    assert t.frobenius().raw == (1, 1)
    assert str(t + one) == "t+1"
    assert str(field(3).element(2)) == "2"


def test_element_config_mismatch():
    a = field(3).element(1)
    b = field(5).element(1)
    with pytest.raises(UsageError):
        a + b


def test_serialization_round_trip():
    F9 = field(3, 2)
    for raw in F9.elements():
        assert parse_element(F9, F9.format(raw)) == raw
    F7 = field(7)
    for raw in range(7):
        assert parse_element(F7, F7.format(raw)) == raw


def test_mod_p_square_teichmuller():
    for p in (2, 3, 5, 7):
        Z = ModPSquare(p)
        for c in range(p):
            t = Z.teichmuller(c)
            assert t % p == c
            assert pow(t, p, p * p) == t  # the defining fixed-point property


def test_mod_p_square_exact_division():
    Z = ModPSquare(3)
    assert Z.exact_div_p(6) == 2
    with pytest.raises(DomainError):
        Z.exact_div_p(4)

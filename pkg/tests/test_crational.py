import random
from fractions import Fraction

from moyal_lab.crational import CRational, I, ONE, ZERO, i_power, neg_i_power


def rand_cr(rng):
    return CRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                     Fraction(rng.randint(-9, 9), rng.randint(1, 9)))


def test_constants():
    assert I * I == CRational(-1)
    assert ONE + ZERO == ONE
    assert i_power(6) == CRational(-1)
    assert neg_i_power(3) == I


def test_field_axioms_random():
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = rand_cr(rng), rand_cr(rng), rand_cr(rng)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == ZERO
        if a:
            assert a / a == ONE
            assert (b / a) * a == b


def test_conjugation_involution():
    rng = random.Random(11)
    for _ in range(50):
        a, b = rand_cr(rng), rand_cr(rng)
        assert a.conjugate().conjugate() == a
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()
        assert (a + b).conjugate() == a.conjugate() + b.conjugate()


def test_conjugate_ix():
    assert (I * CRational(3)).conjugate() == -I * CRational(3)


def test_powers():
    a = CRational(Fraction(2, 3), Fraction(-1, 2))
    assert a ** 0 == ONE
    assert a ** 3 == a * a * a
    assert a ** -2 == ONE / (a * a)


def test_division_by_zero():
    import pytest
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO

from fractions import Fraction

import pytest

from liftcalc.gaussian import ONE, ZERO, GaussianRational, I


def test_normalized_representation_is_unique():
    assert GaussianRational(Fraction(2, 4), Fraction(1, 2)) == GaussianRational(Fraction(1, 2), Fraction(1, 2))
    assert hash(GaussianRational(Fraction(6, 3))) == hash(GaussianRational(2))


def test_i_squared():
    assert I * I == -ONE
    assert I * I + ONE == ZERO


def test_field_operations_match_python_complex():
    a = GaussianRational(Fraction(3, 2), -2)
    b = GaussianRational(-1, Fraction(1, 3))
    for got, want in [(a + b, complex(a) + complex(b)), (a - b, complex(a) - complex(b)),
                      (a * b, complex(a) * complex(b)), (a / b, complex(a) / complex(b))]:
        assert abs(complex(got) - want) < 1e-12


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_conjugate_and_predicates():
    z = GaussianRational(2, 5)
    assert z.conjugate() == GaussianRational(2, -5)
    assert (z * z.conjugate()).is_real()
    assert GaussianRational(3).is_integer()
    assert not GaussianRational(Fraction(1, 2)).is_integer()

import cmath
import math
from fractions import Fraction

import pytest

from zxlab.core.field import FieldElement, add, conj, divide, from_dyadic_phase, mul, to_float


def omega(order, power=1):
    return FieldElement.root_of_unity(power, order)


class TestCanonicalForm:
    @pytest.mark.parametrize(
        "element, text",
        [
            (FieldElement.zero(), "cyclo(2; 0; 0)"),
            (FieldElement.one(), "cyclo(2; 0; 1)"),
            (FieldElement.from_fraction(Fraction(3, 4)), "cyclo(2; 2; 3)"),
            (FieldElement.from_fraction(Fraction(-1, 3)), "cyclo(2; /3; -1)"),
            (FieldElement.imag_unit(), "cyclo(4; 0; 0,1)"),
            (FieldElement.sqrt2(), "cyclo(8; 0; 0,1,0,-1)"),
            (FieldElement.inv_sqrt2(), "cyclo(8; 1; 0,1,0,-1)"),
        ],
    )
    def test_text(self, element, text):
        assert str(element) == text
        assert FieldElement.parse(text) == element

    def test_order_reduces(self):
        # ω_8^2 = i lives in the order-4 field
        element = FieldElement(8, [0, 0, 1, 0])
        assert element.order == 4
        assert element == FieldElement.imag_unit()

    def test_common_factor_reduces(self):
        element = FieldElement(4, [2, 4], 6)
        assert element.coeffs == (1, 2)
        assert element.denom == 3
        assert element.denom_exp is None

    def test_negative_denominator(self):
        assert FieldElement(2, [1], -2) == FieldElement.from_fraction(Fraction(-1, 2))

    def test_zero_is_unique(self):
        assert FieldElement(16, [0] * 8, 5) == FieldElement.zero()
        assert FieldElement(16, [0] * 8, 5).order == 2

    @pytest.mark.parametrize("order", [0, 3, 6, 12])
    def test_invalid_order(self, order):
        with pytest.raises(ValueError):
            FieldElement(order, [1])

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            FieldElement(2, [1], 0)

    @pytest.mark.parametrize(
        "text", ["cyclo(4; 0; 1)", "cyclo(3; 0; 1)", "sqrt(2)", "cyclo(2; x; 1)"]
    )
    def test_parse_invalid(self, text):
        with pytest.raises(ValueError):
            FieldElement.parse(text)

    def test_immutable(self):
        with pytest.raises(AttributeError):
            FieldElement.one()._order = 4


class TestArithmetic:
    def test_sqrt2_squared(self):
        assert (omega(8) + omega(8, -1)) ** 2 == 2
        assert FieldElement.sqrt2() * FieldElement.inv_sqrt2() == 1

    def test_root_of_unity_cycle(self):
        assert omega(16) ** 16 == 1
        assert omega(16) ** 8 == -1
        assert omega(8, 2) == FieldElement.imag_unit()

    @pytest.mark.parametrize("numerator, denom_exp, expected", [(0, 3, 1), (1, 0, -1), (2, 1, -1)])
    def test_dyadic_phase(self, numerator, denom_exp, expected):
        assert from_dyadic_phase(numerator, denom_exp) == expected

    def test_dyadic_phase_negative_exponent(self):
        with pytest.raises(ValueError):
            from_dyadic_phase(1, -1)

    def test_mixed_orders(self):
        total = FieldElement.imag_unit() + FieldElement.inv_sqrt2()
        assert total.order == 8
        assert cmath.isclose(complex(total), 1j + 1 / math.sqrt(2), abs_tol=1e-15)

    def test_rational_coercion(self):
        assert FieldElement.imag_unit() * Fraction(1, 2) == FieldElement(4, [0, 1], 2)
        assert 1 - FieldElement.one() == 0
        assert add(1, Fraction(1, 2)) == FieldElement.from_fraction(Fraction(3, 2))
        assert mul(2, FieldElement.inv_sqrt2()) == FieldElement.sqrt2()

    def test_conj(self):
        assert conj(omega(8)) == omega(8, 7)
        assert FieldElement.imag_unit().conj() == -FieldElement.imag_unit()
        value = omega(16, 3) + Fraction(1, 4)
        assert (value * value.conj()).conj() == value * value.conj()

    @pytest.mark.parametrize(
        "numerator, denominator, expected",
        [
            (FieldElement(4, [1, 1]), FieldElement(4, [1, -1]), FieldElement.imag_unit()),
            (FieldElement.one(), FieldElement.sqrt2(), FieldElement.inv_sqrt2()),
            (FieldElement.from_int(1), FieldElement.from_int(3), Fraction(1, 3)),
        ],
    )
    def test_divide(self, numerator, denominator, expected):
        assert divide(numerator, denominator) == expected
        assert numerator / denominator == expected

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            FieldElement.one().divide(FieldElement.zero())

    def test_negative_power(self):
        assert FieldElement.sqrt2() ** -2 == Fraction(1, 2)

    def test_rational_value(self):
        assert (FieldElement.sqrt2() ** 2).rational_value() == Fraction(2)
        assert FieldElement.imag_unit().rational_value() is None

    def test_hash_matches_rationals(self):
        assert hash(FieldElement.from_fraction(Fraction(1, 2))) == hash(Fraction(1, 2))
        assert len({FieldElement(8, [0, 0, 1, 0]), FieldElement.imag_unit()}) == 1


class TestRingAxioms:
    @pytest.mark.slow
    def test_ring_axioms(self, random_field_element):
        for _ in range(5000):
            a, b, c = random_field_element(), random_field_element(), random_field_element()
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a - a == 0
            assert (a * b).conj() == a.conj() * b.conj()
            if b:
                assert (a * b).divide(b) == a

    @pytest.mark.slow
    def test_float_homomorphism(self, random_field_element):
        for _ in range(5000):
            a, b = random_field_element(), random_field_element()
            for exact, approx in [
                (a + b, complex(a) + complex(b)),
                (a * b, complex(a) * complex(b)),
                (a.conj(), complex(a).conjugate()),
            ]:
                value, bound = to_float(exact)
                assert abs(value - approx) <= 1e-12 * max(1.0, abs(approx))
                assert bound >= 0

    def test_text_round_trip(self, random_field_element):
        for _ in range(50):
            a = random_field_element()
            assert FieldElement.parse(str(a)) == a

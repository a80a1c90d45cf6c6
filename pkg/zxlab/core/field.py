"""Exact arithmetic in cyclotomic number fields of power-of-two order.

An element of Q(ω), ω = exp(2πi/d), is stored as ``(1/M)·Σ a_p ω^p`` for ``0 <= p < d/2``. The
basis is linearly independent over Q because the minimal polynomial of ω is ``x^(d/2) + 1``,
so two elements are equal exactly when their canonical forms are equal.

Canonical form:
    - ``gcd(a_0, ..., a_{d/2-1}, M) == 1`` and ``M > 0``,
    - ``d`` is the smallest power of two (at least 2) whose field contains the element,
    - zero is ``cyclo(2; 0; 0)``.
"""
from __future__ import annotations

import cmath
import math
import numbers
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import sympy

_EPSILON = sys.float_info.epsilon
_TEXT_PATTERN = re.compile(r"^\s*cyclo\(\s*(\d+)\s*;\s*(/?)\s*(\d+)\s*;\s*([-\d,\s]+)\)\s*$")


def _is_power_of_two(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


def _fold(order: int, coeffs: Sequence[int]) -> List[int]:
    """Reduce a coefficient list of any length using ω^(d/2) = -1."""
    half = order // 2
    folded = [0] * half
    for power, coeff in enumerate(coeffs):
        power %= order
        if power < half:
            folded[power] += coeff
        else:
            folded[power - half] -= coeff
    return folded


def _root_to_complex(power: int, order: int) -> complex:
    power %= order
    if power == 0:
        return 1.0 + 0.0j
    if 4 * power == order:
        return 1.0j
    return cmath.exp(2j * math.pi * power / order)


class FieldElement:
    """An immutable element of a power-of-two cyclotomic field."""

    __slots__ = ("_order", "_coeffs", "_denom")

    def __init__(self, order: int, coeffs: Sequence[int], denom: int = 1):
        if order < 2 or not _is_power_of_two(order):
            raise ValueError(f"Cyclotomic order must be a power of two >= 2 (received {order}).")
        if denom == 0:
            raise ZeroDivisionError("Field element with zero denominator.")
        self._set_canonical(order, _fold(order, [int(a) for a in coeffs]), int(denom))

    @classmethod
    def _make(cls, order: int, coeffs: List[int], denom: int) -> FieldElement:
        element = object.__new__(cls)
        element._set_canonical(order, coeffs, denom)
        return element

    def _set_canonical(self, order: int, coeffs: List[int], denom: int):
        if denom < 0:
            coeffs, denom = [-a for a in coeffs], -denom

        if not any(coeffs):
            order, coeffs, denom = 2, [0], 1
        else:
            divisor = math.gcd(denom, *coeffs)
            if divisor > 1:
                coeffs, denom = [a // divisor for a in coeffs], denom // divisor
            while order > 2 and not any(coeffs[1::2]):
                coeffs, order = coeffs[::2], order // 2

        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_coeffs", tuple(coeffs))
        object.__setattr__(self, "_denom", denom)

    def __setattr__(self, name, value):
        raise AttributeError(f"{self.__class__.__name__} is immutable.")

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self._coeffs

    @property
    def denom(self) -> int:
        return self._denom

    @property
    def denom_exp(self) -> Optional[int]:
        """`t` with denominator `2**t`, or None for a non-dyadic denominator."""
        if not _is_power_of_two(self._denom):
            return None
        return self._denom.bit_length() - 1

    # Constructors

    @classmethod
    def zero(cls) -> FieldElement:
        return cls._make(2, [0], 1)

    @classmethod
    def one(cls) -> FieldElement:
        return cls._make(2, [1], 1)

    @classmethod
    def from_int(cls, value: int) -> FieldElement:
        return cls._make(2, [int(value)], 1)

    @classmethod
    def from_fraction(cls, value: Fraction) -> FieldElement:
        value = Fraction(value)
        return cls._make(2, [value.numerator], value.denominator)

    @classmethod
    def root_of_unity(cls, power: int, order: int) -> FieldElement:
        """ω_order ** power."""
        return cls(order, [0] * (power % order) + [1])

    @classmethod
    def from_dyadic_phase(cls, numerator: int, denom_exp: int) -> FieldElement:
        """exp(i·numerator·π / 2**denom_exp), exactly."""
        if denom_exp < 0:
            raise ValueError(f"denom_exp must be non-negative (received {denom_exp}).")
        return cls.root_of_unity(numerator, 2 ** (denom_exp + 1))

    @classmethod
    def imag_unit(cls) -> FieldElement:
        return cls._make(4, [0, 1], 1)

    @classmethod
    def sqrt2(cls) -> FieldElement:
        # ω_8 + ω_8^-1 = ω_8 - ω_8^3
        return cls._make(8, [0, 1, 0, -1], 1)

    @classmethod
    def inv_sqrt2(cls) -> FieldElement:
        return cls._make(8, [0, 1, 0, -1], 2)

    @classmethod
    def parse(cls, text: str) -> FieldElement:
        """Inverse of `str(element)`."""
        match = _TEXT_PATTERN.match(text)
        if match is None:
            raise ValueError(f"Invalid field element text ({text!r}).")
        order, general, denom, coeffs = match.groups()
        denom = int(denom) if general else 2 ** int(denom)
        coeffs = [int(a) for a in coeffs.split(",") if a.strip()]
        if len(coeffs) != int(order) // 2:
            raise ValueError(f"Expected {int(order) // 2} coefficients in {text!r}.")
        return cls(int(order), coeffs, denom)

    # Arithmetic

    @classmethod
    def _coerce(cls, other) -> Optional[FieldElement]:
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, numbers.Integral):
            return cls.from_int(int(other))
        if isinstance(other, numbers.Rational):
            return cls.from_fraction(Fraction(other.numerator, other.denominator))
        return None

    def _lift(self, order: int) -> List[int]:
        """Coefficients at a larger order, by index dilation."""
        if order == self._order:
            return list(self._coeffs)
        step = order // self._order
        lifted = [0] * (order // 2)
        for power, coeff in enumerate(self._coeffs):
            lifted[power * step] = coeff
        return lifted

    def __add__(self, other) -> FieldElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = max(self._order, other._order)
        denom = self._denom * other._denom // math.gcd(self._denom, other._denom)
        scale_a, scale_b = denom // self._denom, denom // other._denom
        coeffs = [
            a * scale_a + b * scale_b for a, b in zip(self._lift(order), other._lift(order))
        ]
        return self._make(order, coeffs, denom)

    def __radd__(self, other) -> FieldElement:
        return self + other

    def __neg__(self) -> FieldElement:
        return self._make(self._order, [-a for a in self._coeffs], self._denom)

    def __sub__(self, other) -> FieldElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> FieldElement:
        return (-self) + other

    def __mul__(self, other) -> FieldElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self._order == 2 or other._order == 2:
            scalar, element = (self, other) if self._order == 2 else (other, self)
            return self._make(
                element._order,
                [a * scalar._coeffs[0] for a in element._coeffs],
                element._denom * scalar._denom,
            )
        order = max(self._order, other._order)
        half = order // 2
        product = [0] * half
        right = other._lift(order)
        for i, a in enumerate(self._lift(order)):
            if not a:
                continue
            for j, b in enumerate(right):
                if not b:
                    continue
                if i + j < half:
                    product[i + j] += a * b
                else:
                    product[i + j - half] -= a * b
        return self._make(order, product, self._denom * other._denom)

    def __rmul__(self, other) -> FieldElement:
        return self * other

    def conj(self) -> FieldElement:
        """Complex conjugate, using ω^-p = -ω^(d/2 - p)."""
        half = self._order // 2
        coeffs = [0] * half
        coeffs[0] = self._coeffs[0]
        for power in range(1, half):
            coeffs[half - power] -= self._coeffs[power]
        return self._make(self._order, coeffs, self._denom)

    def divide(self, other) -> FieldElement:
        """Exact quotient, solving the rational system for multiplication by `other`."""
        other = self._coerce(other)
        if other is None:
            raise TypeError(f"Cannot divide by {type(other).__name__}.")
        if not other:
            raise ZeroDivisionError("Division by the zero field element.")
        if not self:
            return self.zero()

        order = max(self._order, other._order)
        half = order // 2
        divisor = other._lift(order)
        columns = []
        for shift in range(half):
            column = [0] * half
            for power, coeff in enumerate(divisor):
                if power + shift < half:
                    column[power + shift] += coeff
                else:
                    column[power + shift - half] -= coeff
            columns.append(column)

        system = sympy.Matrix(half, half, lambda row, col: columns[col][row])
        solution = system.LUsolve(sympy.Matrix(self._lift(order)))
        quotient = [Fraction(int(value.p), int(value.q)) for value in solution]
        common = math.lcm(*(q.denominator for q in quotient))
        coeffs = [int(q * common) * other._denom for q in quotient]
        return self._make(order, coeffs, common * self._denom)

    def __truediv__(self, other) -> FieldElement:
        if self._coerce(other) is None:
            return NotImplemented
        return self.divide(other)

    def __rtruediv__(self, other) -> FieldElement:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other.divide(self)

    def __pow__(self, exponent: int) -> FieldElement:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.one().divide(self) ** -exponent
        result, base = self.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # Queries

    def __bool__(self) -> bool:
        return any(self._coeffs)

    def is_zero(self) -> bool:
        return not self

    def rational_value(self) -> Optional[Fraction]:
        """The element as a rational in lowest terms, or None if it is not rational."""
        if self._order != 2:
            return None
        return Fraction(self._coeffs[0], self._denom)

    def to_float(self) -> Tuple[complex, float]:
        """Complex double approximation and a bound on its absolute error."""
        value = 0j
        for power, coeff in enumerate(self._coeffs):
            if coeff:
                value += float(Fraction(coeff, self._denom)) * _root_to_complex(power, self._order)
        magnitude = float(Fraction(sum(abs(a) for a in self._coeffs), self._denom))
        return value, magnitude * _EPSILON * self._order

    def __complex__(self) -> complex:
        return self.to_float()[0]

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (
            self._order == other._order
            and self._denom == other._denom
            and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        if self._order == 2:
            return hash(Fraction(self._coeffs[0], self._denom))
        return hash((self._order, self._coeffs, self._denom))

    def __str__(self) -> str:
        denom_exp = self.denom_exp
        denom = str(denom_exp) if denom_exp is not None else f"/{self._denom}"
        coeffs = ",".join(str(a) for a in self._coeffs)
        return f"cyclo({self._order}; {denom}; {coeffs})"

    def __repr__(self) -> str:
        return f"FieldElement({str(self)!r})"

    def __reduce__(self):
        return (self.__class__, (self._order, self._coeffs, self._denom))


FieldLike = Union[int, Fraction, FieldElement]


def from_dyadic_phase(numerator: int, denom_exp: int) -> FieldElement:
    return FieldElement.from_dyadic_phase(numerator, denom_exp)


def add(x: FieldLike, y: FieldLike) -> FieldElement:
    return FieldElement._coerce(x) + y


def mul(x: FieldLike, y: FieldLike) -> FieldElement:
    return FieldElement._coerce(x) * y


def conj(x: FieldElement) -> FieldElement:
    return x.conj()


def divide(x: FieldLike, y: FieldLike) -> FieldElement:
    return FieldElement._coerce(x).divide(y)


def rational_value(x: FieldElement) -> Optional[Fraction]:
    return x.rational_value()


def to_float(x: FieldElement) -> Tuple[complex, float]:
    return x.to_float()

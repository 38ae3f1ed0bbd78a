"""Exact base fields: prime fields GF(p) and the rationals."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Raw = Union[int, Fraction]

MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class Field:
    """A prime field (``p > 0``) or the rationals (``p == 0``).

    Elements are stored raw: canonical ints in ``[0, p)`` for GF(p) and
    :class:`fractions.Fraction` for Q.  Use :meth:`scalar` to get a value
    object with arithmetic operators.
    """

    p: int = 0

    def __post_init__(self):
        if self.p != 0:
            if not _is_prime(self.p) or self.p > MAX_PRIME:
                raise ValueError(f"GF(p) needs a prime p <= 2^31, got {self.p}")

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    @property
    def characteristic(self) -> int:
        return self.p

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"

    # -- element construction --------------------------------------------
    def __call__(self, value) -> Raw:
        if isinstance(value, FieldScalar):
            value = value.value
        if isinstance(value, str):
            value = Fraction(value)
        if self.p:
            if isinstance(value, Fraction):
                return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
            return int(value) % self.p
        return Fraction(value)

    def scalar(self, value) -> "FieldScalar":
        return FieldScalar(self(value), self)

    @property
    def zero(self) -> Raw:
        return 0 if self.p else Fraction(0)

    @property
    def one(self) -> Raw:
        return 1 if self.p else Fraction(1)

    # -- arithmetic on raw values ------------------------------------------
    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- enumeration / sampling --------------------------------------------
    def elements(self) -> Iterator[int]:
        if not self.p:
            raise ValueError("QQ is not enumerable")
        return iter(range(self.p))

    def units(self) -> Iterator[int]:
        if not self.p:
            raise ValueError("QQ is not enumerable")
        return iter(range(1, self.p))

    def random(self, rng: random.Random, bound: int = 3):
        if self.p:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-bound, bound))

    def random_unit(self, rng: random.Random, bound: int = 3):
        while True:
            v = self.random(rng, bound)
            if v:
                return v

    # -- serialization -----------------------------------------------------
    def to_json(self, a):
        if self.p:
            return int(a)
        return f"{a.numerator}/{a.denominator}"

    def from_json(self, v):
        if isinstance(v, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(v, (int, str)):
            return self(v)
        raise TypeError(f"cannot parse field element {v!r}")


def GF(p: int) -> Field:
    return Field(p)


QQ = Field(0)


@dataclass(frozen=True)
class FieldScalar:
    """A field element tagged with its field, with the usual operators."""

    value: Raw
    field: Field

    def _coerce(self, other) -> Raw:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return FieldScalar(self.field.add(self.value, self._coerce(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.field.sub(self.value, self._coerce(other)), self.field)

    def __rsub__(self, other):
        return FieldScalar(self.field.sub(self._coerce(other), self.value), self.field)

    def __mul__(self, other):
        return FieldScalar(self.field.mul(self.value, self._coerce(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldScalar(self.field.div(self.value, self._coerce(other)), self.field)

    def __neg__(self):
        return FieldScalar(self.field.neg(self.value), self.field)

    def inverse(self) -> "FieldScalar":
        return FieldScalar(self.field.inv(self.value), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __bool__(self):
        return bool(self.value)

    def __repr__(self):
        return f"{self.value} in {self.field!r}"

"""Exact scalars over Q and prime fields F_p (p > 3).

Rationals are plain :class:`fractions.Fraction` values.  Residues mod p are
:class:`ModP` instances carrying their modulus, so mixing two prime fields
is caught at the first arithmetic operation.  A :class:`FieldDescriptor`
converts, parses and formats elements and answers root questions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from numbers import Integral
from typing import Iterator, Union

from .errors import FieldLacksRoot, FieldMismatch, MalformedSpec, NotPrime, UnsupportedCharacteristic

RATIONALS = "Rationals"
PRIME_FIELD = "PrimeField"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class ModP:
    """Canonical residue ``v`` in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> int | None:
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldMismatch(f"F_{self.p} and F_{other.p} elements mixed")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return ModP(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if n < 0:
            if self.v == 0:
                raise ZeroDivisionError(f"division by zero in F_{self.p}")
            return ModP(pow(pow(self.v, -1, self.p), -n, self.p), self.p)
        return ModP(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP) and other.p != self.p:
            return False
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.v == o

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


FieldElem = Union[Fraction, ModP]


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.p is not None:
                raise MalformedSpec("the rational field takes no modulus")
        elif self.kind == PRIME_FIELD:
            if self.p is None or self.p < 2:
                raise MalformedSpec("prime field needs a modulus")
            if self.p in (2, 3):
                raise UnsupportedCharacteristic(f"characteristic {self.p} is not supported (need p > 3)")
            if not is_prime(self.p):
                raise NotPrime(f"{self.p} is not prime")
        else:
            raise MalformedSpec(f"unknown field kind {self.kind!r}")

    @property
    def is_rational(self) -> bool:
        return self.kind == RATIONALS

    def __str__(self) -> str:
        return "Q" if self.is_rational else f"Fp:{self.p}"

    def __call__(self, x) -> FieldElem:
        """Convert an int, Fraction, ModP or element text into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.is_rational:
            if isinstance(x, ModP):
                raise FieldMismatch("cannot map a residue into Q")
            if isinstance(x, Integral):
                return Fraction(int(x))
            if isinstance(x, Fraction):
                return x
            raise TypeError(f"cannot convert {type(x).__name__} to Q")
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldMismatch(f"F_{x.p} element given where F_{self.p} expected")
            return x
        if isinstance(x, Integral):
            return ModP(int(x), self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        raise TypeError(f"cannot convert {type(x).__name__} to F_{self.p}")

    @property
    def zero(self) -> FieldElem:
        return self(0)

    @property
    def one(self) -> FieldElem:
        return self(1)

    def parse(self, text: str) -> FieldElem:
        """Element text: ``a/b`` or an integer over Q, a residue over F_p.

        The token ``eps`` denotes the canonical primitive cube root of 1 and
        raises :class:`FieldLacksRoot` where none exists.
        """
        s = text.strip()
        if s in ("eps", "ε"):
            e = self.primitive_cube_root()
            if e is None:
                raise FieldLacksRoot(f"{self} contains no primitive cube root of 1")
            return e
        if self.is_rational:
            if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
                raise MalformedSpec(f"bad rational {text!r}")
            try:
                return Fraction(s)
            except ZeroDivisionError:
                raise MalformedSpec(f"zero denominator in {text!r}") from None
        if not re.fullmatch(r"[+-]?\d+", s):
            raise MalformedSpec(f"bad residue {text!r} for {self}")
        return ModP(int(s), self.p)

    def format(self, x: FieldElem) -> str:
        x = self(x)
        if self.is_rational:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x.v)

    def elements(self) -> Iterator[ModP]:
        if self.is_rational:
            raise TypeError("Q is infinite")
        return (ModP(v, self.p) for v in range(self.p))

    def sqrt(self, a) -> FieldElem | None:
        return sqrt_in_field(self(a), self)

    def primitive_cube_root(self) -> FieldElem | None:
        return primitive_cube_root(self)

    def to_json(self) -> dict:
        return {"kind": self.kind} if self.is_rational else {"kind": self.kind, "p": self.p}

    @classmethod
    def from_json(cls, obj) -> "FieldDescriptor":
        if isinstance(obj, str):
            return parse_field(obj)
        if not isinstance(obj, dict) or "kind" not in obj:
            raise MalformedSpec(f"bad field object {obj!r}")
        return cls(obj["kind"], obj.get("p"))


QQ = FieldDescriptor(RATIONALS)


@lru_cache(maxsize=None)
def GF(p: int) -> FieldDescriptor:
    return FieldDescriptor(PRIME_FIELD, p)


def parse_field(spec: str) -> FieldDescriptor:
    s = spec.strip()
    if s == "Q":
        return QQ
    m = re.fullmatch(r"Fp:(\d+)", s)
    if not m:
        raise MalformedSpec(f"field spec must be 'Q' or 'Fp:<prime>', got {spec!r}")
    return GF(int(m.group(1)))


def _tonelli_shanks(a: int, p: int) -> int:
    # a is a nonzero quadratic residue
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        return pow(a, (p + 1) // 4, p)
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_in_field(a: FieldElem, field: FieldDescriptor | None = None) -> FieldElem | None:
    """Square root of ``a`` if it exists: the smaller residue, or the nonnegative rational."""
    if field is None:
        field = QQ if isinstance(a, Fraction) else GF(a.p)
    a = field(a)
    if field.is_rational:
        if a < 0:
            return None
        n, d = isqrt(a.numerator), isqrt(a.denominator)
        if n * n != a.numerator or d * d != a.denominator:
            return None
        return Fraction(n, d)
    p = field.p
    if a.v == 0:
        return ModP(0, p)
    if pow(a.v, (p - 1) // 2, p) != 1:
        return None
    r = _tonelli_shanks(a.v, p)
    return ModP(min(r, p - r), p)


def primitive_cube_root(field: FieldDescriptor) -> FieldElem | None:
    if field.is_rational or field.p % 3 != 1:
        return None
    for v in range(2, field.p):
        if pow(v, 3, field.p) == 1:
            return ModP(v, field.p)
    return None  # unreachable for p = 1 mod 3


def field_of(x) -> FieldDescriptor:
    if isinstance(x, ModP):
        return GF(x.p)
    return QQ

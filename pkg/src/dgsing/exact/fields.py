"""Coefficient fields: exact rationals and prime fields."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from sympy import isprime


class RationalField:
    """The field of rational numbers, backed by :class:`fractions.Fraction`."""

    characteristic = 0
    name = "rational"

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Integers modulo a prime ``p``; elements are canonical ints in ``[0, p)``."""

    name = "prime"

    def __init__(self, p: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = int(p)

    @property
    def characteristic(self):
        return self.p

    def __call__(self, value) -> int:
        p = self.p
        if isinstance(value, int):
            return value % p
        if isinstance(value, Rational):
            num, den = value.numerator, value.denominator
            if den % p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
            return num * pow(den, -1, p) % p
        raise TypeError(f"cannot coerce {value!r} into GF({p})")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_from_spec(spec: str):
    """Parse ``"rational"`` or ``"fp:<p>"``."""
    spec = spec.strip()
    if spec in ("rational", "QQ", "q"):
        return QQ
    if spec.startswith("fp:"):
        return PrimeField(int(spec[3:]))
    raise ValueError(f"unknown field {spec!r}; expected 'rational' or 'fp:<p>'")

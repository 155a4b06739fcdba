"""Exact Gödel, product and Łukasiewicz t-norms with their residua and negations.

Degrees are :class:`fractions.Fraction` values in ``[0, 1]``; nothing in this
package ever compares truth degrees as floats.
"""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

Degree = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_DECIMAL = re.compile(r"^(?:\d+(?:\.\d*)?|\.\d+)$")
_RATIONAL = re.compile(r"^\d+/\d+$")
MAX_DECIMALS = 9


class TNorm(enum.Enum):
    GODEL = "godel"
    PRODUCT = "product"
    LUKASIEWICZ = "lukasiewicz"

    @classmethod
    def parse(cls, text: str) -> "TNorm":
        key = text.strip().lower()
        aliases = {
            "g": cls.GODEL, "godel": cls.GODEL, "gödel": cls.GODEL, "min": cls.GODEL,
            "p": cls.PRODUCT, "product": cls.PRODUCT, "prod": cls.PRODUCT,
            "l": cls.LUKASIEWICZ, "luk": cls.LUKASIEWICZ, "lukasiewicz": cls.LUKASIEWICZ,
            "łukasiewicz": cls.LUKASIEWICZ,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown t-norm {text!r}") from None

    @property
    def idempotent(self) -> bool:
        return self is TNorm.GODEL


def to_degree(value: Union[str, int, Fraction]) -> Fraction:
    """Coerce *value* to a degree, rejecting floats and anything outside [0, 1]."""
    if isinstance(value, str):
        return parse_degree(value)
    if isinstance(value, float):
        raise TypeError("degrees must be exact; pass a string or Fraction")
    d = Fraction(value)
    if not ZERO <= d <= ONE:
        raise ValueError(f"degree {d} outside [0, 1]")
    return d


def parse_degree(text: str) -> Fraction:
    """Parse ``"0.6"``, ``"1"`` or ``"2/3"`` into an exact degree."""
    s = text.strip()
    if _RATIONAL.match(s):
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in degree {text!r}")
        d = Fraction(int(num), int(den))
    elif _DECIMAL.match(s):
        frac_digits = len(s.split(".", 1)[1]) if "." in s else 0
        if frac_digits > MAX_DECIMALS:
            raise ValueError(f"degree {text!r} has more than {MAX_DECIMALS} decimals")
        d = Fraction(s)
    else:
        raise ValueError(f"malformed degree {text!r}")
    if d > ONE:
        raise ValueError(f"degree {text!r} outside [0, 1]")
    return d


def format_degree(d: Fraction) -> str:
    """Shortest decimal with at most 9 fractional digits, else ``p/q``."""
    den = d.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    digits = max(twos, fives)
    if den != 1 or digits > MAX_DECIMALS:
        return f"{d.numerator}/{d.denominator}"
    if digits == 0:
        return str(d.numerator)
    scaled = d.numerator * 10**digits // d.denominator
    whole, frac = divmod(scaled, 10**digits)
    return f"{whole}.{frac:0{digits}d}"


def conj(k: TNorm, d: Fraction, e: Fraction) -> Fraction:
    if k is TNorm.GODEL:
        return min(d, e)
    if k is TNorm.PRODUCT:
        return d * e
    return max(d + e - ONE, ZERO)


def resid(k: TNorm, d: Fraction, e: Fraction) -> Fraction:
    if d <= e:
        return ONE
    if k is TNorm.GODEL:
        return e
    if k is TNorm.PRODUCT:
        return e / d
    return ONE - d + e


def neg(k: TNorm, d: Fraction) -> Fraction:
    if k is TNorm.LUKASIEWICZ:
        return ONE - d
    return ONE if d == ZERO else ZERO


def conj_fold(k: TNorm, degrees: Iterable[Fraction]) -> Fraction:
    """Left fold of :func:`conj`; the empty conjunction is 1."""
    return reduce(lambda acc, d: conj(k, acc, d), degrees, ONE)

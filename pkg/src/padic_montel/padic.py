"""Exact p-adic scalars, rational valuations, norms and the chordal metric.

Absolute values are never floats.  A norm ``|x| = p^e`` is stored as the
exact rational exponent ``e`` in a :class:`NormExp`; ``NormExp(None)``
stands for ``|0| = 0``.

A :class:`PadicScalar` is ``p^valuation * unit`` with ``unit`` known modulo
``p^precision``.  Scalars embedded from rationals also remember the rational
itself (while it stays small), so identities such as ``x - x == 0`` come out
as an exact zero instead of a precision failure.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Union

from .errors import DivisionByZero, PrecisionExhausted

INF = math.inf

DEFAULT_PRECISION = 64

# Rationals whose numerator+denominator exceed this many bits are carried
# by their digits only.
EXACT_BITS = 1024

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")

Rational = Union[int, Fraction]


def parse_rational(text) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` (decimal integers, optional leading minus)."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational literal: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


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


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        # strip p, p^2, p^4, ... so huge powers cost only log(v) divisions
        pw, k = p, 1
        while n % (pw * pw) == 0:
            pw *= pw
            k *= 2
        n //= pw
        v += k
    return v


def vp(x: Rational, p: int):
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


@total_ordering
@dataclass(frozen=True)
class NormExp:
    """The absolute value ``p^exp``; ``exp=None`` encodes 0 (exponent -inf)."""

    exp: Optional[Fraction]

    def __post_init__(self):
        if self.exp is not None:
            object.__setattr__(self, "exp", Fraction(self.exp))

    @property
    def is_zero(self) -> bool:
        return self.exp is None

    def __mul__(self, other: "NormExp") -> "NormExp":
        if self.exp is None or other.exp is None:
            return NEG_INF
        return NormExp(self.exp + other.exp)

    def __truediv__(self, other: "NormExp") -> "NormExp":
        if other.exp is None:
            raise DivisionByZero("division by the zero absolute value")
        if self.exp is None:
            return NEG_INF
        return NormExp(self.exp - other.exp)

    def __pow__(self, k) -> "NormExp":
        k = Fraction(k)
        if self.exp is None:
            if k <= 0:
                raise DivisionByZero("non-positive power of the zero absolute value")
            return NEG_INF
        return NormExp(self.exp * k)

    def __lt__(self, other: "NormExp") -> bool:
        if not isinstance(other, NormExp):
            return NotImplemented
        if self.exp is None:
            return other.exp is not None
        if other.exp is None:
            return False
        return self.exp < other.exp

    def to_json(self) -> dict:
        return {"exp": "-inf" if self.exp is None else format_rational(self.exp)}

    @classmethod
    def from_json(cls, data: dict) -> "NormExp":
        raw = data["exp"]
        if raw == "-inf":
            return NEG_INF
        return cls(parse_rational(raw))

    def __str__(self):
        if self.exp is None:
            return "0"
        return f"p^{format_rational(self.exp)}"


NEG_INF = NormExp(None)
ONE = NormExp(Fraction(0))


def rational_norm(x: Rational, p: int) -> NormExp:
    """Exact ``|x|_p`` of a rational."""
    v = vp(x, p)
    return NEG_INF if v == INF else NormExp(Fraction(-v))


def rational_big_norm(x: Rational, p: int) -> NormExp:
    """``max(1, |x|_p)`` of a rational."""
    return max(ONE, rational_norm(x, p))


def _small(x: Fraction) -> bool:
    return x.numerator.bit_length() + x.denominator.bit_length() <= EXACT_BITS


@dataclass(frozen=True)
class PadicScalar:
    """``p^valuation * unit`` with ``unit`` known modulo ``p^precision``.

    ``exact`` holds the rational value when it is known exactly; it is
    dropped once it grows beyond ``EXACT_BITS``.  Zero always has
    ``valuation = inf`` and ``unit = 0``.
    """

    prime: int
    valuation: Union[int, float]
    unit: int
    precision: int
    exact: Optional[Fraction] = None

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("relative precision must be at least 1")
        if self.valuation == INF:
            if self.unit != 0 or self.exact != 0:
                raise ValueError("zero must be exact with no unit part")
            return
        if self.unit % self.prime == 0 or not 0 < self.unit < self.prime ** self.precision:
            raise ValueError(f"unit {self.unit} is not a unit modulo p^{self.precision}")

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def absolute_precision(self):
        return self.valuation + self.precision

    def residue(self) -> Fraction:
        """The rational ``p^v * unit`` carried by the digits."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    def value(self) -> Fraction:
        """Exact rational value when known, else the digit residue."""
        return self.exact if self.exact is not None else self.residue()

    def with_precision(self, n: int) -> "PadicScalar":
        """Re-embed at ``n`` digits; only exact scalars can gain digits."""
        if self.exact is not None:
            return embed(self.exact, self.prime, n)
        if self.is_zero or n >= self.precision:
            return self
        return PadicScalar(self.prime, self.valuation, self.unit % self.prime ** n, n)

    def drop_exact(self) -> "PadicScalar":
        if self.exact is None or self.is_zero:
            return self
        return PadicScalar(self.prime, self.valuation, self.unit, self.precision)

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            return other
        return embed(Fraction(other), self.prime, self.precision)

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, self._coerce(other))

    def __rsub__(self, other):
        return sub(self._coerce(other), self)

    def __mul__(self, other):
        return mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, self._coerce(other))

    def __rtruediv__(self, other):
        return div(self._coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __str__(self):
        if self.is_zero:
            return "0"
        tag = "" if self.exact is None else f" (= {format_rational(self.exact)})"
        return f"{self.prime}^{self.valuation} * {self.unit} + O(p^{self.absolute_precision}){tag}"


def zero(p: int, n: int = DEFAULT_PRECISION) -> PadicScalar:
    return PadicScalar(p, INF, 0, n, Fraction(0))


def embed(x: Rational, p: int, n: int = DEFAULT_PRECISION, exact: bool = True) -> PadicScalar:
    """Embed a rational into Q_p with ``n`` digits of relative precision."""
    x = Fraction(x)
    if x == 0:
        return zero(p, n)
    v = vp(x, p)
    mod = p ** n
    num = x.numerator
    den = x.denominator
    if v > 0:
        num //= p ** v
    elif v < 0:
        den //= p ** (-v)
    unit = num * pow(den, -1, mod) % mod
    return PadicScalar(p, v, unit, n, x if exact and _small(x) else None)


def _check_prime(a: PadicScalar, b: PadicScalar) -> int:
    if a.prime != b.prime:
        raise ValueError(f"mixed primes {a.prime} and {b.prime}")
    return a.prime


def _from_exact(x: Fraction, p: int, n: int) -> PadicScalar:
    return embed(x, p, n, exact=_small(x))


def add(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    p = _check_prime(a, b)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a.exact is not None and b.exact is not None:
        return _from_exact(a.exact + b.exact, p, min(a.precision, b.precision))
    top = min(a.absolute_precision, b.absolute_precision)
    low = min(a.valuation, b.valuation)
    width = top - low
    s = 0
    for x in (a, b):
        # an operand starting at or beyond `top` is invisible at this precision
        if x.valuation < top:
            s += x.unit * p ** (x.valuation - low)
    s %= p ** width
    if s == 0:
        raise PrecisionExhausted(
            f"sum cancels all {width} known digits; only |x| <= p^{-top} is known",
            absolute_precision=top,
        )
    t = _vp_int(s, p)
    return PadicScalar(p, low + t, s // p ** t, width - t)


def neg(a: PadicScalar) -> PadicScalar:
    if a.is_zero:
        return a
    exact = None if a.exact is None else -a.exact
    return PadicScalar(a.prime, a.valuation, -a.unit % a.prime ** a.precision, a.precision, exact)


def sub(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    return add(a, neg(b))


def mul(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    p = _check_prime(a, b)
    n = min(a.precision, b.precision)
    if a.is_zero or b.is_zero:
        return zero(p, n)
    if a.exact is not None and b.exact is not None:
        return _from_exact(a.exact * b.exact, p, n)
    mod = p ** n
    return PadicScalar(p, a.valuation + b.valuation, a.unit * b.unit % mod, n)


def div(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    p = _check_prime(a, b)
    if b.is_zero:
        raise DivisionByZero("division by exact zero")
    n = min(a.precision, b.precision)
    if a.is_zero:
        return zero(p, n)
    if a.exact is not None and b.exact is not None:
        return _from_exact(a.exact / b.exact, p, n)
    mod = p ** n
    return PadicScalar(p, a.valuation - b.valuation, a.unit * pow(b.unit, -1, mod) % mod, n)


def norm(z: PadicScalar) -> NormExp:
    """``|z| = p^-valuation``."""
    if z.is_zero:
        return NEG_INF
    return NormExp(Fraction(-z.valuation))


def big_norm(z: PadicScalar) -> NormExp:
    """``||z|| = max(1, |z|)``.

    Inexact zeros cannot be constructed (cancellation raises instead), so
    the exponent is always determined.
    """
    if z.is_zero:
        return ONE
    return NormExp(Fraction(max(0, -z.valuation)))


class _Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def chordal(z, w) -> NormExp:
    """Chordal distance ``|z - w| / (||z|| ||w||)``; ``1/||z||`` against infinity."""
    if z is w:
        # the same element, whatever its precision
        return NEG_INF
    if w is INFINITY:
        return ONE / big_norm(z)
    if z is INFINITY:
        return ONE / big_norm(w)
    return norm(sub(z, w)) / (big_norm(z) * big_norm(w))

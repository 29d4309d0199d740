"""Polynomials over Q_p with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple, Union

from .errors import DegreeTooSmall, PrecisionExhausted
from .padic import (
    INF,
    NormExp,
    PadicScalar,
    embed,
    format_rational,
    is_prime,
    norm,
    parse_rational,
    rational_norm,
    vp,
)


@dataclass(frozen=True)
class Poly:
    """``a_0 + a_1 z + ... + a_d z^d`` over Q_p, coefficients low degree first."""

    prime: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("the zero polynomial has no degree")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def parse(cls, coeffs: Sequence[str], prime: int) -> "Poly":
        return cls(prime, tuple(parse_rational(c) for c in coeffs))

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self.coeffs]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def coefficient_norm(self, i: int) -> NormExp:
        return rational_norm(self.coeffs[i], self.prime)

    def require_dynamical(self) -> None:
        if self.degree < 2:
            raise DegreeTooSmall(f"degree {self.degree} < 2")

    def __call__(self, x) -> Fraction:
        """Exact evaluation at a rational."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(format_rational(c) + ("" if i == 0 else "*z" if i == 1 else f"*z^{i}"))
        return " + ".join(reversed(terms)) + f" over Q_{self.prime}"


@lru_cache(maxsize=256)
def _embedded_coeffs(f: Poly, n: int) -> Tuple[PadicScalar, ...]:
    return tuple(embed(c, f.prime, n) for c in f.coeffs)


@dataclass(frozen=True)
class OrbitPoint:
    index: int
    value: PadicScalar
    norm: NormExp


def evaluate(f: Poly, z: PadicScalar) -> PadicScalar:
    """Horner evaluation at the precision carried by ``z``."""
    if z.prime != f.prime:
        raise ValueError(f"point over Q_{z.prime}, polynomial over Q_{f.prime}")
    cs = _embedded_coeffs(f, z.precision)
    acc = cs[-1]
    for c in reversed(cs[:-1]):
        acc = acc * z + c
    return acc


def shifted_coefficients(f: Poly, a: Union[Fraction, int, PadicScalar]) -> list:
    """Coefficients ``c_0..c_d`` of ``f(a + w)`` in ``w``; ``c_0 = f(a)``.

    Rational centres are shifted in exact arithmetic.
    """
    if isinstance(a, PadicScalar):
        c = list(_embedded_coeffs(f, a.precision))
    else:
        a = Fraction(a)
        c = list(f.coeffs)
    d = f.degree
    # repeated synthetic division by (z - a)
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            c[j] = c[j] + a * c[j + 1]
    return c


def taylor_shift(f: Poly, a) -> list:
    """``c_1..c_d`` with ``f(a + w) - f(a) = sum c_i w^i``."""
    return shifted_coefficients(f, a)[1:]


def iterate(f: Poly, z: PadicScalar, n: int) -> List[OrbitPoint]:
    """The orbit ``z, f(z), ..., f^n(z)`` with exact norms."""
    f.require_dynamical()
    if n < 0:
        raise ValueError("n must be non-negative")
    points = [OrbitPoint(0, z, norm(z))]
    for k in range(1, n + 1):
        try:
            z = evaluate(f, z)
        except PrecisionExhausted as exc:
            raise PrecisionExhausted(
                f"norm of iterate {k} undetermined: {exc}",
                absolute_precision=exc.absolute_precision,
                index=k,
            ) from exc
        points.append(OrbitPoint(k, z, norm(z)))
    return points


def conjugate_translate(f: Poly, alpha) -> Poly:
    """``F(w) = f(w + alpha) - alpha``, moving the omitted point ``alpha`` to 0."""
    alpha = Fraction(alpha)
    c = shifted_coefficients(f, alpha)
    c[0] -= alpha
    return Poly(f.prime, tuple(c))


def log_norm(x: Fraction, p: int) -> Fraction:
    """Exponent of ``|x|_p`` for a non-zero rational."""
    v = vp(x, p)
    if v == INF:
        raise ValueError("log of |0|")
    return Fraction(-v)


def escape_radius(f: Poly) -> NormExp:
    """``max(1, (|a_i|/|a_d|)^(1/(d-i)), |a_d|^(-1/(d-1)))`` as an exact exponent.

    Beyond this radius ``|f(z)| = |a_d| |z|^d > |z|``.
    """
    f.require_dynamical()
    p, d = f.prime, f.degree
    lead = log_norm(f.leading, p)
    best = max(Fraction(0), -lead / (d - 1))
    for i, c in enumerate(f.coeffs[:-1]):
        if c:
            best = max(best, (log_norm(c, p) - lead) / (d - i))
    return NormExp(best)

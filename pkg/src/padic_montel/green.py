"""Green functions of polynomials over Q_p.

``G_f(z) = lim d^-n log||f^n(z)|| - log||z||``.  Every value is a rational
multiple of ``log p``; only the rational coefficient is stored.

Three evaluation routes, tried in this order:

* escape: once ``|f^n(z)|`` exceeds the escape radius each later summand is
  ``log|a_d| / d^(k+1)``, so the tail is summed in closed form;
* trapped: the orbit provably stays bounded, hence ``G_f(z) = -log||z||``;
* truncated: a rational interval built from per-step height bounds.

Truncation bound.  Write ``e_k`` for the exponent of ``||f^k(z)||``.  For
every ``w``::

    ||f(w)|| <= p^c_hi ||w||^d                 c_hi = max(0, max_i log|a_i|)
    ||f(w)|| >= p^-c_lo ||w||^d               c_lo = max(-log|a_d|, d log r_f)

(the second bound is an equality with ``log|a_d|`` beyond ``r_f`` and
trivial inside it since ``||f(w)|| >= 1``).  Summing ``e_(k+1) - d e_k`` from
``n`` on gives ``lim e_m/d^m - e_n/d^n`` in
``[-c_lo, c_hi] / ((d - 1) d^n)``; the lower end is further clipped by
``G_f >= -log||z||``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List

from .disks import MAX_DISK_SIZE, UltraDisk, disk_contains, image_disk, sample_points
from .errors import InvariantViolated, NotExact, PrecisionExhausted
from .montel import require_certified
from .padic import DEFAULT_PRECISION, NormExp, PadicScalar, big_norm, embed, format_rational, norm, parse_rational, rational_norm
from .polynomial import Poly, escape_radius, evaluate, iterate, log_norm

EXACT = "exact"
INTERVAL = "interval"

ESCAPE_TAIL = "escape_tail"
TRAPPED_ORBIT = "trapped_orbit"
TRUNCATED = "truncated"

GUARD_DIGITS = 16
TRAP_BUDGET = 64
TRAP_RADII = 12

DEFAULT_EPSILON = Fraction(1, 10 ** 6)


@dataclass(frozen=True)
class GreenValue:
    """``[lo log p, hi log p]``; ``lo == hi`` for exact values."""

    kind: str
    lo: Fraction
    hi: Fraction
    provenance: str
    n: int

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise NotExact(f"interval [{self.lo}, {self.hi}] has no single value")
        return self.lo

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "GreenValue") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "unit": "log_p",
            "provenance": self.provenance,
            "n": self.n,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GreenValue":
        return cls(data["kind"], parse_rational(data["lo"]), parse_rational(data["hi"]), data["provenance"], data["n"])


def display_decimal(q: Fraction, p: int, digits: int = 12) -> str:
    """``q * ln p`` rounded to ``digits`` significant digits (display only)."""
    if q == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits + 20
        x = Decimal(q.numerator) / Decimal(q.denominator) * Decimal(p).ln()
        return format(x, f".{digits}g")


@dataclass(frozen=True)
class SeriesTerm:
    """The k-th summand ``d^-k log(||f^(k+1) z||^(1/d) / ||f^k z||) = value * log p``."""

    k: int
    value: Fraction


def _exponents(points) -> List[Fraction]:
    return [big_norm(pt.value).exp for pt in points]


def series_terms(exps: List[Fraction], d: int) -> List[SeriesTerm]:
    return [SeriesTerm(k, (exps[k + 1] / d - exps[k]) / Fraction(d) ** k) for k in range(len(exps) - 1)]


def green_series_prefix(f: Poly, z: PadicScalar, n: int) -> List[SeriesTerm]:
    """First ``n`` summands of the series form; checks they telescope."""
    f.require_dynamical()
    d = f.degree
    exps = _exponents(iterate(f, z, n))
    terms = series_terms(exps, d)
    expected = exps[n] / Fraction(d) ** n - exps[0]
    if sum(t.value for t in terms) != expected:
        raise InvariantViolated("series prefix does not telescope", (f, z, n))
    return terms


@dataclass(frozen=True)
class _Bounds:
    r_f: object
    c_hi: Fraction
    c_lo: Fraction


def _bounds(f: Poly) -> _Bounds:
    p, d = f.prime, f.degree
    r_f = escape_radius(f)
    c_hi = max([Fraction(0)] + [log_norm(c, p) for c in f.coeffs if c])
    c_lo = max(-log_norm(f.leading, p), d * r_f.exp)
    return _Bounds(r_f, c_hi, c_lo)


def truncation_steps(f: Poly, eps: Fraction) -> int:
    """Smallest n whose truncation interval is at most ``eps`` wide."""
    b = _bounds(f)
    d = f.degree
    n = 0
    while (b.c_hi + b.c_lo) / ((d - 1) * Fraction(d) ** n) > eps:
        n += 1
    return n


def truncated_interval(f: Poly, exps: List[Fraction], n: int) -> GreenValue:
    b = _bounds(f)
    d = f.degree
    scale = (d - 1) * Fraction(d) ** n
    mid = exps[n] / Fraction(d) ** n - exps[0]
    lo = max(mid - b.c_lo / scale, -exps[0])
    hi = mid + b.c_hi / scale
    return GreenValue(INTERVAL, lo, hi, TRUNCATED, n)


def _working_point(z: PadicScalar, guard: int) -> PadicScalar:
    if z.exact is not None:
        return z.with_precision(z.precision + guard)
    return z


def _disk_trap(f: Poly, z: PadicScalar, r_f, budget: int, tries: int):
    """Look for a disk around ``z`` whose orbit nests into an earlier disk.

    Returns ``("trapped", steps)``, ``("escapes", k)`` when the whole disk
    leaves the escape radius at step k, or ``None``.
    """
    p = f.prime
    center = z.value()
    top = math.floor(r_f.exp)
    floor_exp = None if z.exact is not None else -z.absolute_precision
    for e in range(top, top - tries, -1):
        if floor_exp is not None and e < floor_exp:
            break
        disks = [UltraDisk(p, center, NormExp(Fraction(e)))]
        outcome = None
        for k in range(budget + 1):
            disk = disks[k]
            if disk.radius > r_f:
                outcome = "too_big"
                break
            cn = rational_norm(disk.center, p)
            if cn > r_f and disk.radius < cn:
                return "escapes", k
            if any(disk_contains(disks[j], disk) for j in range(k)):
                return "trapped", k
            if disk.size > MAX_DISK_SIZE:
                break
            if k < budget:
                disks.append(image_disk(f, disk).normalized())
        if outcome is None:
            # isometric wandering; finer disks behave no better
            return None
    return None


def green_value(
    f: Poly,
    z: PadicScalar,
    eps=DEFAULT_EPSILON,
    *,
    shortcuts: bool = True,
    guard: int = GUARD_DIGITS,
    trap_budget: int = TRAP_BUDGET,
) -> GreenValue:
    """``G_f(z)`` as an exact rational or an interval of width at most ``eps``.

    With ``shortcuts=False`` only the truncation route is used, which gives
    an interval independent of the escape and trapping rules.
    """
    f.require_dynamical()
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    b = _bounds(f)
    n_eps = truncation_steps(f, eps)
    x = _working_point(z, guard)
    z0 = x
    seen = {}
    exps: List[Fraction] = []
    for k in range(n_eps + 1):
        exps.append(big_norm(x).exp)
        if shortcuts:
            if norm(x) > b.r_f:
                return _escape_value(f, exps, k)
            if x in seen:
                return GreenValue(EXACT, -exps[0], -exps[0], TRAPPED_ORBIT, k)
            seen[x] = k
        if k < n_eps:
            x = _step(f, x, k + 1)
    if shortcuts:
        found = _disk_trap(f, z0, b.r_f, trap_budget, TRAP_RADII)
        if found is not None:
            what, k = found
            if what == "trapped":
                return GreenValue(EXACT, -exps[0], -exps[0], TRAPPED_ORBIT, k)
            # the disk around z0 escapes at step k > n_eps: follow the point there
            while len(exps) <= k:
                x = _step(f, x, len(exps))
                exps.append(big_norm(x).exp)
            if not norm(x) > b.r_f:
                raise InvariantViolated("escaping disk left its centre point behind", (f, z, k))
            return _escape_value(f, exps, k)
    return truncated_interval(f, exps, n_eps)


def _step(f: Poly, x: PadicScalar, index: int) -> PadicScalar:
    try:
        return evaluate(f, x)
    except PrecisionExhausted as exc:
        raise PrecisionExhausted(str(exc), absolute_precision=exc.absolute_precision, index=index) from exc


def _escape_value(f: Poly, exps: List[Fraction], n: int) -> GreenValue:
    d = f.degree
    prefix = sum((t.value for t in series_terms(exps[: n + 1], d)), Fraction(0))
    tail = log_norm(f.leading, f.prime) / (Fraction(d) ** n * (d - 1))
    value = prefix + tail
    return GreenValue(EXACT, value, value, ESCAPE_TAIL, n)


def functional_identity(f: Poly, z: PadicScalar, g_z: GreenValue, g_fz: GreenValue) -> bool:
    """``G(f z) + log||f z|| == d (G(z) + log||z||)`` for exact values."""
    if not (g_z.is_exact and g_fz.is_exact):
        raise NotExact("functional equation needs exact Green values")
    fz = evaluate(f, z)
    return g_fz.value + big_norm(fz).exp == f.degree * (g_z.value + big_norm(z).exp)


def green_functional_check(f: Poly, z: PadicScalar, eps=DEFAULT_EPSILON) -> bool:
    g_z = green_value(f, z, eps)
    g_fz = green_value(f, evaluate(f, z), eps)
    return functional_identity(f, z, g_z, g_fz)


def green_on_disk(f: Poly, disk: UltraDisk, cert, eps=DEFAULT_EPSILON, *, samples: int = 3, seed: int = 0,
                  precision: int = DEFAULT_PRECISION) -> GreenValue:
    """The constant value of ``G_f`` on a disk certified to avoid 0.

    The centre value is returned after spot checks at random points of the
    disk agree with it (exactly, or by interval overlap).
    """
    require_certified(cert, f, disk)
    p, n = f.prime, precision
    value = green_value(f, embed(disk.center, p, n), eps)
    rng = random.Random(seed)
    for pt in sample_points(disk, rng, samples):
        other = green_value(f, embed(pt, p, n), eps)
        same = value.value == other.value if value.is_exact and other.is_exact else value.overlaps(other)
        if not same:
            raise InvariantViolated("Green function not constant on a certified disk", (disk, pt, value, other))
    return value


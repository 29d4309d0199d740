"""Closed disks in Q_p and their forward images under a polynomial.

Centres are exact rationals and radii exact exponents, so disk orbits never
lose precision.  Because every point of an ultrametric disk is a centre,
orbit disks are stored with a canonical centre (the p-adic expansion of the
centre truncated at the radius); this keeps the rationals small no matter
how long the orbit runs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional

from .padic import INF, NormExp, format_rational, parse_rational, rational_norm, vp
from .polynomial import Poly, escape_radius, log_norm, shifted_coefficients

ESCAPED = "escaped"
ZERO_HIT = "zero_hit"
CONTAINED = "contained"

# Disk orbits stop (inconclusively) once a disk spans more p-adic digits
# than this; orbits shrinking onto a superattracting cycle double it.
MAX_DISK_SIZE = 2048


@dataclass(frozen=True)
class UltraDisk:
    """The closed disk ``{z : |z - center| <= p^radius_exp}``."""

    prime: int
    center: Fraction
    radius: NormExp

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center))
        if self.radius.exp is None:
            raise ValueError("disk radius must be positive")

    @classmethod
    def make(cls, prime: int, center, radius_exp) -> "UltraDisk":
        return cls(prime, Fraction(center), NormExp(Fraction(radius_exp)))

    @property
    def radius_exp(self) -> Fraction:
        return self.radius.exp

    @property
    def depth(self) -> int:
        """Smallest m with ``p^-m <= radius``: membership is ``v_p(z - a) >= m``."""
        return math.ceil(-self.radius.exp)

    @property
    def size(self) -> int:
        """Positional span, in p-adic digits, of the radius and the centre's leading digit."""
        v = vp(self.center, self.prime)
        m = self.depth
        return abs(m) if v == INF else max(abs(m), abs(v))

    def __contains__(self, x) -> bool:
        return rational_norm(Fraction(x) - self.center, self.prime) <= self.radius

    def normalized(self) -> "UltraDisk":
        """Same disk, centre replaced by its expansion truncated at the radius."""
        p, m, a = self.prime, self.depth, self.center
        v = vp(a, p)
        if v == INF or v >= m:
            return UltraDisk(p, Fraction(0), self.radius)
        num, den = a.numerator, a.denominator
        if v > 0:
            num //= p ** v
        elif v < 0:
            den //= p ** (-v)
        mod = p ** (m - v)
        u = num * pow(den, -1, mod) % mod
        return UltraDisk(p, Fraction(u) * Fraction(p) ** v, self.radius)

    def to_json(self) -> dict:
        return {"center": format_rational(self.center), "radius_exp": format_rational(self.radius.exp)}

    @classmethod
    def from_json(cls, data: dict, prime: int) -> "UltraDisk":
        return cls.make(prime, parse_rational(data["center"]), parse_rational(data["radius_exp"]))

    def __str__(self):
        return f"D({format_rational(self.center)}, p^{format_rational(self.radius.exp)})"


def image_disk(f: Poly, disk: UltraDisk) -> UltraDisk:
    """``D(f(a), s)`` with ``s = max_i |c_i| r^i`` over the shifted coefficients.

    ``s`` is the Gauss norm of ``f(a + w) - f(a)`` on ``|w| <= r``, so
    ``f(disk)`` is contained in the result.
    """
    f.require_dynamical()
    if disk.prime != f.prime:
        raise ValueError("disk and polynomial over different primes")
    c = shifted_coefficients(f, disk.center)
    e = disk.radius.exp
    s = max(log_norm(ci, f.prime) + i * e for i, ci in enumerate(c) if i > 0 and ci != 0)
    return UltraDisk(f.prime, c[0], NormExp(s))


def contains_zero(disk: UltraDisk) -> bool:
    return rational_norm(disk.center, disk.prime) <= disk.radius


def disk_contains(outer: UltraDisk, inner: UltraDisk) -> bool:
    """``inner`` is a subset of ``outer``."""
    if outer.prime != inner.prime:
        raise ValueError("disks over different primes")
    return inner.radius <= outer.radius and rational_norm(inner.center - outer.center, outer.prime) <= outer.radius


@dataclass(frozen=True)
class DiskEvent:
    index: int
    kind: str
    earlier: Optional[int] = None

    def to_json(self) -> dict:
        out = {"index": self.index, "event": self.kind}
        if self.earlier is not None:
            out["earlier"] = self.earlier
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DiskEvent":
        return cls(data["index"], data["event"], data.get("earlier"))


@dataclass
class DiskOrbit:
    """``disks[k+1]`` is the (canonicalized) image of ``disks[k]``.

    ``size_limit`` set means the orbit stopped because the last disk needs
    more than that many digits to write down.
    """

    disks: List[UltraDisk]
    events: List[DiskEvent] = field(default_factory=list)
    budget: int = 0
    size_limit: Optional[int] = None

    @property
    def final_event(self) -> Optional[DiskEvent]:
        return self.events[-1] if self.events else None

    @property
    def exhausted(self) -> bool:
        return not self.events

    def to_json(self) -> dict:
        return {
            "budget": self.budget,
            "disks": [d.to_json() for d in self.disks],
            "events": [e.to_json() for e in self.events],
            "size_limit": self.size_limit,
        }

    @classmethod
    def from_json(cls, data: dict, prime: int) -> "DiskOrbit":
        return cls(
            [UltraDisk.from_json(d, prime) for d in data["disks"]],
            [DiskEvent.from_json(e) for e in data["events"]],
            data["budget"],
            data.get("size_limit"),
        )


def classify(disks: List[UltraDisk], k: int, r_f: NormExp) -> Optional[DiskEvent]:
    """The stopping event at index ``k`` given the earlier disks, if any."""
    disk = disks[k]
    if contains_zero(disk):
        return DiskEvent(k, ZERO_HIT)
    cn = rational_norm(disk.center, disk.prime)
    if cn > r_f and disk.radius < cn:
        return DiskEvent(k, ESCAPED)
    for j in range(k):
        if disk_contains(disks[j], disk):
            return DiskEvent(k, CONTAINED, j)
    return None


def orbit_disks(f: Poly, disk: UltraDisk, budget: int, max_size: int = MAX_DISK_SIZE) -> DiskOrbit:
    """Forward disk orbit until zero is hit, the disk escapes, or it nests in an earlier one.

    Escaped: every later disk lies beyond the escape radius, so none meets 0.
    Contained at (k, j): ``D_{k+m}`` lies inside ``D_{j+m}`` for every m.
    No event means the budget (or the digit limit) ran out first.
    """
    f.require_dynamical()
    if budget < 1:
        raise ValueError("budget must be at least 1")
    r_f = escape_radius(f)
    disks = [disk]
    for k in range(budget + 1):
        event = classify(disks, k, r_f)
        if event is not None:
            return DiskOrbit(disks, [event], budget)
        if disks[k].size > max_size:
            return DiskOrbit(disks, [], budget, max_size)
        if k < budget:
            disks.append(image_disk(f, disks[k]).normalized())
    return DiskOrbit(disks, [], budget)


def sample_points(disk: UltraDisk, rng: random.Random, count: int, spread: int = 10 ** 6) -> Iterator[Fraction]:
    """Random rationals ``a + p^m t`` with t a p-integral rational."""
    p, m = disk.prime, disk.depth
    scale = Fraction(p) ** m
    for _ in range(count):
        den = rng.randrange(1, spread)
        while den % p == 0:
            den = rng.randrange(1, spread)
        yield disk.center + scale * Fraction(rng.randrange(-spread, spread), den)


def residue_points(disk: UltraDisk, digits: int) -> Iterator[Fraction]:
    """One representative ``a + p^m t`` for every ``t`` modulo ``p^digits``."""
    p, m = disk.prime, disk.depth
    scale = Fraction(p) ** m
    for t in range(p ** digits):
        yield disk.center + scale * t

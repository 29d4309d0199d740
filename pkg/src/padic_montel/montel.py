"""Certificates that a polynomial is equicontinuous on a disk.

``certify`` moves the omitted point to 0 by translation and follows the
disk orbit of the translated map.  The orbit stops with

* a nested disk (``D_k`` inside an earlier ``D_j``) or an escaped disk:
  every forward image avoids 0, which is the Montel hypothesis, so the
  map is equicontinuous on the disk;
* a disk containing 0: the hypothesis fails on this disk (this says
  nothing about equicontinuity itself);
* budget exhaustion: inconclusive.

A certificate carries every disk it relies on and is re-checked from
scratch by :func:`verify_certificate`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .disks import (
    CONTAINED,
    ESCAPED,
    ZERO_HIT,
    DiskOrbit,
    UltraDisk,
    classify,
    contains_zero,
    image_disk,
    orbit_disks,
    sample_points,
)
from .errors import CertificateRequired, InvariantViolated, PrecisionExhausted
from .padic import (
    DEFAULT_PRECISION,
    NEG_INF,
    NormExp,
    big_norm,
    chordal,
    embed,
    format_rational,
    parse_rational,
    rational_big_norm,
)
from .polynomial import Poly, conjugate_translate, escape_radius, iterate

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

ESCAPE_RULE = "escape"
CONTAINMENT_RULE = "containment"

DEFAULT_BUDGET = 256


@dataclass(frozen=True)
class MontelCertificate:
    status: str
    rule: Optional[str]
    witness: Optional[Tuple[int, ...]]
    zero_hit_index: Optional[int]
    budget: int
    orbit: DiskOrbit
    omitted_point: Fraction
    conjugated: bool
    polynomial: Poly
    disk: UltraDisk
    translated: Poly

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "rule": self.rule,
            "witness": None if self.witness is None else list(self.witness),
            "zero_hit_index": self.zero_hit_index,
            "budget": self.budget,
            "omitted_point": format_rational(self.omitted_point),
            "conjugated": self.conjugated,
            "prime": self.polynomial.prime,
            "polynomial": self.polynomial.to_json(),
            "translated_polynomial": self.translated.to_json(),
            "disk": self.disk.to_json(),
            "orbit": self.orbit.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MontelCertificate":
        p = data["prime"]
        return cls(
            status=data["status"],
            rule=data["rule"],
            witness=None if data["witness"] is None else tuple(data["witness"]),
            zero_hit_index=data["zero_hit_index"],
            budget=data["budget"],
            orbit=DiskOrbit.from_json(data["orbit"], p),
            omitted_point=parse_rational(data["omitted_point"]),
            conjugated=data["conjugated"],
            polynomial=Poly.parse(data["polynomial"], p),
            disk=UltraDisk.from_json(data["disk"], p),
            translated=Poly.parse(data["translated_polynomial"], p),
        )


def _translate(f: Poly, disk: UltraDisk, alpha: Fraction):
    if alpha == 0:
        return f, disk
    return conjugate_translate(f, alpha), UltraDisk(disk.prime, disk.center - alpha, disk.radius)


def _verdict(orbit: DiskOrbit):
    """(status, rule, witness, zero_hit_index) implied by the stopping event."""
    event = orbit.final_event
    if event is None:
        return INCONCLUSIVE, None, None, None
    if event.kind == ZERO_HIT:
        return REFUTED, None, None, event.index
    if event.kind == ESCAPED:
        return CERTIFIED, ESCAPE_RULE, (event.index,), None
    return CERTIFIED, CONTAINMENT_RULE, (event.index, event.earlier), None


def certify(f: Poly, disk: UltraDisk, alpha=0, budget: int = DEFAULT_BUDGET) -> MontelCertificate:
    """Try to prove that every ``f^k(disk)`` avoids ``alpha``."""
    f.require_dynamical()
    alpha = Fraction(alpha)
    translated, start = _translate(f, disk, alpha)
    orbit = orbit_disks(translated, start, budget)
    status, rule, witness, zero_index = _verdict(orbit)
    return MontelCertificate(
        status=status,
        rule=rule,
        witness=witness,
        zero_hit_index=zero_index,
        budget=budget,
        orbit=orbit,
        omitted_point=alpha,
        conjugated=alpha != 0,
        polynomial=f,
        disk=disk,
        translated=translated,
    )


def _recheck(cert: MontelCertificate, f: Poly) -> bool:
    if cert.polynomial != f or cert.disk.prime != f.prime:
        return False
    translated, start = _translate(f, cert.disk, Fraction(cert.omitted_point))
    if cert.translated != translated or cert.conjugated != (cert.omitted_point != 0):
        return False
    disks = cert.orbit.disks
    if not disks or disks[0] != start or cert.orbit.budget != cert.budget:
        return False
    if len(disks) - 1 > cert.budget:
        return False
    for k in range(1, len(disks)):
        if disks[k] != image_disk(translated, disks[k - 1]).normalized():
            return False
    r_f = escape_radius(translated)
    events = [classify(disks, k, r_f) for k in range(len(disks))]
    if any(e is not None for e in events[:-1]):
        return False
    final = events[-1]
    if final is None:
        limit = cert.orbit.size_limit
        if limit is None and len(disks) - 1 != cert.budget:
            return False
        if limit is not None and (disks[-1].size <= limit or any(d.size > limit for d in disks[:-1])):
            return False
    if final is not None and cert.orbit.size_limit is not None:
        return False
    recorded = cert.orbit.final_event
    if final != recorded or len(cert.orbit.events) > 1:
        return False
    if (cert.status, cert.rule, cert.witness, cert.zero_hit_index) != _verdict(cert.orbit):
        return False
    if cert.status == CERTIFIED and any(contains_zero(d) for d in disks):
        return False
    if final is not None and final.kind == CONTAINED and cert.witness != (final.index, final.earlier):
        return False
    return True


def verify_certificate(cert: MontelCertificate, f: Poly) -> bool:
    """Recompute every disk, zero test and the witness rule; False on any mismatch."""
    try:
        return _recheck(cert, f)
    except (ArithmeticError, ValueError, TypeError, IndexError):
        return False


def require_certified(cert: MontelCertificate, f: Poly, disk: UltraDisk) -> None:
    if cert.status != CERTIFIED:
        raise CertificateRequired(f"certificate status is {cert.status}")
    if cert.omitted_point != 0 or cert.polynomial != f or cert.disk != disk:
        raise CertificateRequired("certificate is not for this polynomial, disk and omitted point 0")
    if not verify_certificate(cert, f):
        raise CertificateRequired("certificate does not verify")


@dataclass(frozen=True)
class ProbeSample:
    z: Fraction
    w: Fraction
    k: int
    value: NormExp
    exact: bool = True

    def to_json(self) -> dict:
        out = {"z": format_rational(self.z), "w": format_rational(self.w), "k": self.k, "value": self.value.to_json()}
        if not self.exact:
            out["upper_bound_only"] = True
        return out


@dataclass
class ProbeReport:
    """Recomputable samples; ``value`` is a norm or a chordal distance."""

    samples: List[ProbeSample]
    max_observed: NormExp
    violations: int = 0
    bound_checked: bool = False
    unresolved: int = 0

    def to_json(self) -> dict:
        return {
            "max_observed": self.max_observed.to_json(),
            "violations": self.violations,
            "bound_checked": self.bound_checked,
            "unresolved": self.unresolved,
            "sample_count": len(self.samples),
            "samples": [s.to_json() for s in self.samples],
        }


def _orbit(f: Poly, x: Fraction, kmax: int, precision: int, retries: int = 3, partial: bool = False):
    """Orbit of a rational, quadrupling the precision on cancellation.

    With ``partial`` the longest determinable prefix is returned instead of
    raising once the retries are used up.
    """
    n = precision
    for attempt in range(retries + 1):
        try:
            return iterate(f, embed(x, f.prime, n), kmax)
        except PrecisionExhausted as exc:
            if attempt == retries:
                if not partial:
                    raise
                return iterate(f, embed(x, f.prime, n), exc.index - 1)
            n *= 4


def norm_invariance_probe(f: Poly, disk: UltraDisk, cert: MontelCertificate, samples: int = 100,
                          kmax: int = 50, seed: int = 0, precision: int = DEFAULT_PRECISION) -> ProbeReport:
    """Check ``|f^k(z)| = |f^k(a)|`` for random z in a disk certified to avoid 0."""
    require_certified(cert, f, disk)
    a = disk.center
    ref = [pt.norm for pt in _orbit(f, a, kmax, precision)]
    rng = random.Random(seed)
    points = [a] + list(sample_points(disk, rng, max(samples - 1, 0)))
    out: List[ProbeSample] = []
    for z in points:
        for pt in _orbit(f, z, kmax, precision):
            if pt.norm != ref[pt.index]:
                raise InvariantViolated(
                    f"|f^{pt.index}(z)| != |f^{pt.index}(a)|", {"z": z, "k": pt.index, "got": pt.norm, "want": ref[pt.index]}
                )
            out.append(ProbeSample(z, a, pt.index, pt.norm))
    return ProbeReport(out, max((s.value for s in out), default=NEG_INF), bound_checked=True)


def _distance(x, y) -> Tuple[NormExp, bool]:
    try:
        return chordal(x, y), True
    except PrecisionExhausted as exc:
        # |x - y| <= p^-A, and the big norms are exact
        bound = NormExp(Fraction(-exc.absolute_precision))
        return bound / (big_norm(x) * big_norm(y)), False


def equicontinuity_probe(f: Poly, disk: UltraDisk, samples: int = 20, kmax: int = 20, seed: int = 0,
                         cert: Optional[MontelCertificate] = None,
                         precision: int = DEFAULT_PRECISION) -> ProbeReport:
    """Chordal distances ``rho(f^k z, f^k w)`` for random pairs in the disk.

    Given a certificate for (f, disk, 0), every distance is compared with
    ``r_k / ||a_k||^2`` where ``D(a_k, r_k)`` is the k-th orbit disk:
    norms are constant on disks that avoid 0, so this bound is exact data.
    """
    f.require_dynamical()
    bounds = None
    if cert is not None:
        require_certified(cert, f, disk)
        bounds = []
        d_k = disk
        for k in range(kmax + 1):
            if contains_zero(d_k):
                raise InvariantViolated("certified orbit disk meets 0", {"k": k, "disk": d_k})
            bounds.append(d_k.radius / rational_big_norm(d_k.center, f.prime) ** 2)
            d_k = image_disk(f, d_k).normalized()
    rng = random.Random(seed)
    pts = list(sample_points(disk, rng, 2 * samples))
    out: List[ProbeSample] = []
    violations = unresolved = 0
    for z, w in zip(pts[::2], pts[1::2]):
        oz = _orbit(f, z, kmax, precision, partial=True)
        ow = _orbit(f, w, kmax, precision, partial=True)
        # iterates whose norm cannot be pinned down at any tried precision
        unresolved += kmax + 1 - min(len(oz), len(ow))
        for a, b in zip(oz, ow):
            rho, exact = _distance(a.value, b.value)
            out.append(ProbeSample(z, w, a.index, rho, exact))
            if bounds is not None and rho > bounds[a.index]:
                if exact:
                    violations += 1
                else:
                    unresolved += 1
    if violations:
        raise InvariantViolated(f"{violations} chordal distances exceed the certified bound")
    return ProbeReport(out, max((s.value for s in out), default=NEG_INF), 0, bounds is not None, unresolved)

"""Green functions and Montel-type equicontinuity certificates for polynomial dynamics over Q_p."""

from .disks import DiskOrbit, UltraDisk, contains_zero, disk_contains, image_disk, orbit_disks
from .errors import (
    CertificateRequired,
    DegreeTooSmall,
    DivisionByZero,
    InvariantViolated,
    NotExact,
    PadicError,
    PrecisionExhausted,
)
from .green import GreenValue, SeriesTerm, green_functional_check, green_on_disk, green_series_prefix, green_value
from .montel import (
    MontelCertificate,
    ProbeReport,
    certify,
    equicontinuity_probe,
    norm_invariance_probe,
    verify_certificate,
)
from .padic import INFINITY, NormExp, PadicScalar, big_norm, chordal, embed, norm, parse_rational, vp
from .polynomial import OrbitPoint, Poly, conjugate_translate, escape_radius, evaluate, iterate, taylor_shift

__version__ = "0.1.0"

__all__ = [
    "CertificateRequired",
    "DegreeTooSmall",
    "DiskOrbit",
    "DivisionByZero",
    "GreenValue",
    "INFINITY",
    "InvariantViolated",
    "MontelCertificate",
    "NormExp",
    "NotExact",
    "OrbitPoint",
    "PadicError",
    "PadicScalar",
    "Poly",
    "PrecisionExhausted",
    "ProbeReport",
    "SeriesTerm",
    "UltraDisk",
    "big_norm",
    "certify",
    "chordal",
    "conjugate_translate",
    "contains_zero",
    "disk_contains",
    "embed",
    "equicontinuity_probe",
    "escape_radius",
    "evaluate",
    "green_functional_check",
    "green_on_disk",
    "green_series_prefix",
    "green_value",
    "image_disk",
    "iterate",
    "norm",
    "norm_invariance_probe",
    "orbit_disks",
    "parse_rational",
    "taylor_shift",
    "verify_certificate",
    "vp",
]

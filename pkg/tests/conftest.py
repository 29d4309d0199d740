import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from padic_montel import Poly, UltraDisk, certify
from padic_montel.montel import CERTIFIED, CONTAINMENT_RULE

PRIMES = (2, 3, 5)


def rationals(max_num=10 ** 6, max_den=10 ** 4, nonzero=False):
    num = st.integers(-max_num, max_num)
    if nonzero:
        num = num.filter(bool)
    return st.builds(Fraction, num, st.integers(1, max_den))


def random_rational(rng, p=None, spread=10 ** 4, vspread=4):
    """A rational with a random p-power factor."""
    x = Fraction(rng.randrange(-spread, spread), rng.randrange(1, spread))
    if p is not None:
        x *= Fraction(p) ** rng.randint(-vspread, vspread)
    return x


def random_poly(rng, p, degrees=(2, 3, 4), vspread=2):
    d = rng.choice(degrees)
    cs = []
    for _ in range(d):
        cs.append(Fraction(0) if rng.random() < 0.3 else random_rational(rng, p, 30, vspread))
    lead = Fraction(0)
    while lead == 0:
        lead = random_rational(rng, p, 30, vspread)
    return Poly(p, tuple(cs + [lead]))


def random_disk(rng, p, integral_radius=True):
    e = rng.randint(-4, 1) if integral_radius else Fraction(rng.randint(-12, 3), rng.randint(1, 3))
    return UltraDisk.make(p, random_rational(rng, p, 200, 2), e)


def _build_corpus(seed=20260, wanted=40, attempts=4000):
    rng = random.Random(seed)
    hand = [
        (Poly(3, (0, 0, 1)), UltraDisk.make(3, 1, -1)),
        (Poly(2, (0, 0, 1)), UltraDisk.make(2, 1, -1)),
        (Poly(2, (-1, 0, 1)), UltraDisk.make(2, 0, 0)),
        (Poly(5, (0, 0, 5)), UltraDisk.make(5, Fraction(1, 25), -1)),
        (Poly(3, (0, 0, 3)), UltraDisk.make(3, Fraction(1, 3), -2)),
    ]
    certs = [certify(f, disk, 0, 64) for f, disk in hand]
    tries = 0
    while sum(c.status == CERTIFIED for c in certs) < wanted and tries < attempts:
        tries += 1
        p = rng.choice(PRIMES)
        f = random_poly(rng, p, degrees=(2, 3))
        disk = random_disk(rng, p)
        certs.append(certify(f, disk, 0, 64))
    # integral maps on unit disks, where containment witnesses live
    tries = 0
    while sum(c.rule == CONTAINMENT_RULE for c in certs) < wanted // 2 and tries < attempts:
        tries += 1
        p = rng.choice(PRIMES)
        f = random_poly(rng, p, degrees=(2, 3), vspread=0)
        f = Poly(p, tuple(Fraction(c.numerator % p ** 3) for c in f.coeffs[:-1]) + (f.leading,))
        disk = UltraDisk.make(p, rng.randrange(1, p ** 3), rng.randint(-3, -1))
        cert = certify(f, disk, 0, 64)
        if cert.status == CERTIFIED:
            certs.append(cert)
    return certs


_CORPUS = None


def corpus():
    global _CORPUS
    if _CORPUS is None:
        _CORPUS = _build_corpus()
    return _CORPUS


@pytest.fixture(scope="session")
def certificates():
    return corpus()


@pytest.fixture(scope="session")
def certified(certificates):
    return [c for c in certificates if c.status == CERTIFIED]


# acceptance criteria report their verdict lines here
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])

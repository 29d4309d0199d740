import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rationals
from padic_montel.errors import DivisionByZero, PrecisionExhausted
from padic_montel.padic import (
    INFINITY,
    NEG_INF,
    ONE,
    NormExp,
    add,
    big_norm,
    chordal,
    div,
    embed,
    format_rational,
    is_prime,
    mul,
    norm,
    parse_rational,
    rational_norm,
    sub,
    vp,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def brute_unit(x, p, n):
    """The unit residue by search, independent of modular inversion."""
    v = 0
    while x.numerator % p == 0:
        x /= p
        v += 1
    while x.denominator % p == 0:
        x *= p
        v -= 1
    mod = p ** n
    return v, next(u for u in range(mod) if (u * x.denominator - x.numerator) % mod == 0)


class TestVp:
    def test_examples(self):
        assert vp(12, 2) == 2
        assert vp(Fraction(1, 9), 3) == -2
        assert vp(0, 5) == math.inf

    def test_large_powers(self):
        assert vp(Fraction(7 ** 300 * 5, 7 ** 3), 7) == 297
        assert vp(-(2 ** 1000), 2) == 1000


class TestEmbed:
    def test_examples(self):
        x = embed(12, 2, 4)
        assert (x.valuation, x.unit) == (2, 3)
        y = embed(Fraction(1, 3), 2, 3)
        assert (y.valuation, y.unit) == (0, 3)
        assert embed(0, 7, 5).valuation == math.inf

    @given(rationals(nonzero=True), st.sampled_from([2, 3, 5]), st.integers(1, 5))
    def test_against_search(self, x, p, n):
        e = embed(x, p, n)
        assert (e.valuation, e.unit) == brute_unit(x, p, n)


class TestArithmetic:
    def test_examples(self):
        s = add(embed(1, 3, 4), embed(3, 3, 4))
        assert s.valuation == 0 and norm(s) == ONE
        assert sub(embed(1, 2, 3), embed(1, 2, 3)).is_zero
        assert mul(embed(6, 3, 4), embed(3, 3, 4)).valuation == 2

    def test_cancellation_reduces_precision(self):
        a = embed(1, 3, 10, exact=False)
        b = embed(1 + 3 ** 4, 3, 10, exact=False)
        diff = sub(b, a)
        assert diff.valuation == 4 and diff.precision == 6

    def test_full_cancellation_raises(self):
        a = embed(Fraction(1, 7), 2, 8, exact=False)
        with pytest.raises(PrecisionExhausted) as info:
            sub(a, a)
        assert info.value.absolute_precision == 8

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            div(embed(1, 5), embed(0, 5))

    def test_mul_precision_is_min(self):
        a = embed(Fraction(1, 3), 2, 9, exact=False)
        b = embed(5, 2, 4, exact=False)
        assert mul(a, b).precision == 4
        assert div(a, b).valuation == 0

    @given(rationals(nonzero=True), rationals(nonzero=True), st.sampled_from(SMALL_PRIMES))
    def test_ultrametric_law(self, x, y, p):
        nx, ny, ns = rational_norm(x, p), rational_norm(y, p), rational_norm(x + y, p)
        assert ns <= max(nx, ny)
        if nx != ny:
            assert ns == max(nx, ny)

    @given(rationals(nonzero=True), rationals(nonzero=True), st.sampled_from([2, 3, 5]),
           st.sampled_from(["add", "sub", "mul", "div"]))
    def test_digit_path_matches_rationals(self, x, y, p, op):
        n = 12
        exact = {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y}[op]
        fn = {"add": add, "sub": sub, "mul": mul, "div": div}[op]
        a, b = embed(x, p, n, exact=False), embed(y, p, n, exact=False)
        try:
            got = fn(a, b)
        except PrecisionExhausted:
            # only possible when the exact result is divisible by p^(known digits)
            assert exact == 0 or vp(exact, p) >= min(vp(x, p), vp(y, p)) + n
            return
        assert got.valuation == vp(exact, p)
        ref = embed(exact, p, got.precision)
        assert got.unit == ref.unit

    @given(rationals(), rationals(), st.sampled_from([2, 3, 5]))
    def test_exact_path_matches_rationals(self, x, y, p):
        got = add(embed(x, p), embed(y, p))
        assert got.value() == x + y


class TestNorms:
    def test_big_norm_examples(self):
        assert big_norm(embed(Fraction(1, 2), 2)).exp == 1
        assert big_norm(embed(8, 2)).exp == 0
        assert big_norm(embed(0, 2)).exp == 0

    def test_big_norm_random(self):
        rng = random.Random(7)
        for _ in range(1000):
            p = rng.choice([2, 3, 5])
            x = Fraction(rng.randrange(1, 10 ** 6), rng.randrange(1, 10 ** 6)) * Fraction(p) ** rng.randint(-9, 9)
            assert big_norm(embed(x, p)).exp == max(0, -vp(x, p))

    def test_normexp_json(self):
        for e in (NEG_INF, ONE, NormExp(Fraction(-7, 3))):
            assert NormExp.from_json(e.to_json()) == e
        assert NEG_INF.to_json() == {"exp": "-inf"}
        assert NEG_INF < NormExp(-10 ** 9)


class TestChordal:
    def test_examples(self):
        assert chordal(embed(2, 2), embed(0, 2)).exp == -1
        assert chordal(embed(4, 2), INFINITY).exp == 0
        z = embed(Fraction(5, 9), 3)
        assert chordal(z, z) == NEG_INF
        assert chordal(INFINITY, INFINITY) == NEG_INF

    @settings(max_examples=300)
    @given(rationals(), rationals(), rationals(), st.sampled_from([2, 3, 5]))
    def test_metric(self, x, y, z, p):
        ex, ey, ez = (embed(t, p) for t in (x, y, z))
        dxy, dyx = chordal(ex, ey), chordal(ey, ex)
        assert dxy == dyx
        assert dxy <= ONE
        assert chordal(ex, ez) <= max(dxy, chordal(ey, ez))
        for a in (ex, ey, ez):
            assert chordal(a, INFINITY) <= ONE


class TestParsing:
    def test_literals(self):
        assert parse_rational("-12/8") == Fraction(-3, 2)
        assert parse_rational("7") == 7
        assert format_rational(Fraction(-3, 2)) == "-3/2"
        for bad in ("1.5", "1/0", "", "a", "1/-2", "+3"):
            with pytest.raises(ValueError):
                parse_rational(bad)

    def test_is_prime(self):
        assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

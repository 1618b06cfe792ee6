"""Factorization, cyclotomic coefficients, and coefficient heights.

sympy is the oracle wherever a value is derivable; the classical identities
(degree, palindromy, values at 0 and 1, height invariance under the radical)
are asserted as properties.
"""
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcond import numtheory as nt


# ---------------------------------------------------------------------------
# factorize / Conductor


def _sympy_factors(n):
    return tuple(sorted(sympy.factorint(n).items()))


@pytest.mark.parametrize(
    "n",
    list(range(1, 64)) + [360, 1024, 6469693230, 2**31 - 1, 600851475143],
)
def test_factorize_matches_sympy(n):
    c = nt.factorize(n)
    assert c.n == n
    assert c.factors == _sympy_factors(n)
    assert c.phi == sympy.totient(n)
    assert c.omega == len(c.factors)
    rad = 1
    for p, _ in c.factors:
        rad *= p
    assert c.rad == rad


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=1, max_value=10**7))
def test_factorize_reconstructs(n):
    c = nt.factorize(n)
    prod = 1
    for p, e in c.factors:
        assert e >= 1
        assert nt.is_prime(p)
        prod *= p**e
    assert prod == n
    assert tuple(sorted(c.factors)) == c.factors


@pytest.mark.parametrize("bad", [0, -7, 2.5, "12", None, True])
def test_factorize_rejects_non_positive_ints(bad):
    with pytest.raises(ValueError):
        nt.factorize(bad)


def test_factorize_accepts_numpy_ints():
    assert nt.factorize(np.int64(12)).factors == ((2, 2), (3, 1))


def test_conductor_guards_inconsistent_factors():
    with pytest.raises(ValueError):
        nt.Conductor(n=6, factors=((2, 1),), phi=2, rad=2, omega=1)


def test_as_conductor_passthrough():
    c = nt.factorize(12)
    assert nt.as_conductor(c) is c
    assert nt.as_conductor(12) == c


# ---------------------------------------------------------------------------
# is_prime / first_primes


def test_is_prime_matches_sympy_small():
    for n in range(-3, 2000):
        assert nt.is_prime(n) == sympy.isprime(n), n


@pytest.mark.parametrize(
    "n,expected",
    [
        (561, False),  # Carmichael
        (3215031751, False),  # strong pseudoprime to bases 2,3,5,7
        (3825123056546413051, False),  # strong pseudoprime to first 9 prime bases
        (2**61 - 1, True),  # Mersenne prime
        (10**18 + 9, True),
    ],
)
def test_is_prime_hard_cases(n, expected):
    assert nt.is_prime(n) == expected


def test_first_primes():
    assert nt.first_primes(5) == [2, 3, 5, 7, 11]
    assert nt.first_primes(4, exclude=(2,)) == [3, 5, 7, 11]
    assert nt.first_primes(0) == []


# ---------------------------------------------------------------------------
# cyclotomic_poly


def _sympy_cyclotomic(n):
    x = sympy.symbols("x")
    return np.array(
        sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1], dtype=object
    )


@pytest.mark.parametrize(
    "n", list(range(1, 131)) + [210, 255, 385, 420, 1024, 1155, 4620]
)
def test_cyclotomic_matches_sympy(n):
    got = nt.cyclotomic_poly(n)
    want = _sympy_cyclotomic(n)
    assert got.shape == want.shape
    assert all(int(a) == int(b) for a, b in zip(got, want))


def test_cyclotomic_pinned_small():
    assert nt.cyclotomic_poly(1).tolist() == [-1, 1]
    assert nt.cyclotomic_poly(2).tolist() == [1, 1]
    assert nt.cyclotomic_poly(4).tolist() == [1, 0, 1]
    assert nt.cyclotomic_poly(6).tolist() == [1, -1, 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=3000))
def test_cyclotomic_classical_properties(n):
    coeffs = nt.cyclotomic_poly(n)
    c = nt.factorize(n)
    assert coeffs.size == c.phi + 1
    assert int(coeffs[-1]) == 1  # monic
    assert int(coeffs[0]) == 1  # constant term is 1 for every n >= 2
    # self-reciprocal for n >= 2
    assert [int(v) for v in coeffs] == [int(v) for v in coeffs[::-1]]
    # value at 1: p for prime powers, 1 otherwise
    at_one = sum(int(v) for v in coeffs)
    assert at_one == (c.factors[0][0] if c.omega == 1 else 1)


def test_cyclotomic_stride_substitution():
    # Phi_{n}(x) = Phi_{rad}(x^{n/rad}): nonzero coefficients sit on the stride
    for n, stride in [(8, 4), (36, 6), (1008, 24)]:
        coeffs = nt.cyclotomic_poly(n)
        rad = nt.factorize(n).rad
        assert stride == n // rad
        dense = nt.cyclotomic_poly(rad)
        assert all(int(v) == 0 for i, v in enumerate(coeffs) if i % stride)
        assert [int(v) for v in coeffs[::stride]] == [int(v) for v in dense]


# ---------------------------------------------------------------------------
# height


def test_height_anchors():
    assert nt.height(1) == 1
    assert nt.height(2) == 1
    assert nt.height(105) == 2  # smallest conductor with a coefficient of size 2
    assert nt.height(385) == 3
    assert nt.height(1365) == 4


@pytest.mark.parametrize("n", list(range(1, 260)) + [385, 770, 1155, 1365, 2310])
def test_height_equals_max_coefficient(n):
    coeffs = nt.cyclotomic_poly(n)
    assert nt.height(n) == max(abs(int(v)) for v in coeffs)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=5000), st.integers(min_value=1, max_value=4))
def test_height_radical_invariance(n, k):
    # multiplying in more powers of existing primes never changes the height
    c = nt.factorize(n)
    lifted = n * (c.factors[0][0] ** k if c.factors else 1)
    assert nt.height(lifted) == nt.height(n)


# ---------------------------------------------------------------------------
# exact fallback machinery


def test_series_paths_agree():
    for rad in (15, 105, 255, 385):
        num_terms = nt.factorize(rad).phi + 1
        nt._radical_series.cache_clear()
        fast = nt._radical_series(rad, num_terms)
        primes = [p for p, _ in nt.factorize(rad).factors]
        k = len(primes)
        terms = []
        for bits in range(1 << k):
            e = 1
            pop = 0
            for i in range(k):
                if bits >> i & 1:
                    e *= primes[i]
                    pop += 1
            if e >= num_terms:
                continue
            terms.append((e, -1 if (k - pop) % 2 else 1))
        terms.sort(reverse=True)
        slow = nt._series_run(terms, num_terms, exact=True)
        assert slow.dtype == object
        assert [int(a) for a in fast] == [int(b) for b in slow]


def test_overflow_fallback_still_exact(monkeypatch):
    # force the int64 guard to trip so the object-dtype path carries the run
    monkeypatch.setattr(nt, "_INT64_CAP", 8)
    nt._radical_series.cache_clear()
    try:
        got = nt.cyclotomic_poly(105)
        assert got.dtype == object
        want = _sympy_cyclotomic(105)
        assert all(int(a) == int(b) for a, b in zip(got, want))
    finally:
        monkeypatch.undo()
        nt._radical_series.cache_clear()

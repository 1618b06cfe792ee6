"""Exact integer and polynomial number theory.

Factorization with cached multiplicative data, cyclotomic polynomials with
exact integer coefficients, and their heights (maximum absolute coefficient).

Cyclotomic polynomials are computed over the squarefree radical first and then
lifted by exponent substitution, so the expensive exact arithmetic never runs
at a degree larger than phi(rad(n)).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_SIEVE_LIMIT = 1_000_000
_spf = None  # smallest-prime-factor table, built on first use

# int64 headroom for the exact series arithmetic; anything that might exceed
# this falls back to arbitrary-precision objects.
_INT64_CAP = 1 << 62


def _smallest_prime_factors() -> np.ndarray:
    global _spf
    if _spf is None:
        n = _SIEVE_LIMIT
        spf = np.zeros(n + 1, dtype=np.int32)
        spf[1] = 1
        for p in range(2, int(n ** 0.5) + 1):
            if spf[p] == 0:
                sl = spf[p * p :: p]
                sl[sl == 0] = p
                spf[p] = p
        spf[spf == 0] = 0  # placeholder; fixed below
        rest = np.nonzero(spf == 0)[0]
        spf[rest] = rest  # untouched entries are prime
        _spf = spf
    return _spf


@dataclass(frozen=True)
class Conductor:
    """A positive integer with its factorization and multiplicative data.

    Attributes
    ----------
    n : int
        The integer itself.
    factors : tuple of (prime, exponent)
        Prime factorization, primes strictly increasing, exponents >= 1.
    phi : int
        Euler totient.
    rad : int
        Radical (product of the distinct primes).
    omega : int
        Number of distinct prime factors.
    """

    n: int
    factors: tuple
    phi: int
    rad: int
    omega: int

    def __post_init__(self):
        prod = 1
        for p, e in self.factors:
            prod *= p ** e
        if prod != self.n:
            raise ValueError(f"factors {self.factors} do not multiply to {self.n}")


@lru_cache(maxsize=None)
def factorize(n: int) -> Conductor:
    """Factor a positive integer into a Conductor.

    Trial division driven by a smallest-prime-factor sieve below 10^6, plain
    trial division above it.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"conductor must be a positive integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"conductor must be a positive integer, got {n}")
    factors = []
    m = n
    if n <= _SIEVE_LIMIT:
        spf = _smallest_prime_factors()
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    else:
        p = 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                factors.append((p, e))
            p += 1 if p == 2 else 2
        if m > 1:
            factors.append((m, 1))
        factors.sort()
    phi = 1
    rad = 1
    for p, e in factors:
        phi *= p ** (e - 1) * (p - 1)
        rad *= p
    return Conductor(n=n, factors=tuple(factors), phi=phi, rad=rad, omega=len(factors))


def as_conductor(n) -> Conductor:
    """Coerce an int or Conductor to a Conductor."""
    if isinstance(n, Conductor):
        return n
    return factorize(n)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3 * 10^24."""
    n = int(n)
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def first_primes(count: int, exclude=()) -> list:
    """The first `count` primes not contained in `exclude`."""
    out = []
    p = 2
    excl = set(exclude)
    while len(out) < count:
        if is_prime(p) and p not in excl:
            out.append(p)
        p += 1
    return out


class _Int64Overflow(Exception):
    pass


def _mul_one_minus_xe(a: np.ndarray, e: int) -> np.ndarray:
    # a(x) * (1 - x^e), truncated to len(a) terms
    out = a.copy()
    out[e:] = out[e:] - a[:-e]
    return out


def _div_one_minus_xe(a: np.ndarray, e: int) -> np.ndarray:
    # a(x) / (1 - x^e) as a power series: cumulative sums along each residue
    # class mod e
    n = a.size
    pad = (-n) % e
    if pad:
        a = np.concatenate([a, np.zeros(pad, dtype=a.dtype)])
    b = np.cumsum(a.reshape(-1, e), axis=0).reshape(-1)
    return b[:n]


def _series_run(terms, num_terms: int, exact: bool) -> np.ndarray:
    dtype = object if exact else np.int64
    a = np.zeros(num_terms, dtype=dtype)
    a[0] = 1
    cur_max = 1
    for e, mu in terms:
        if not exact:
            if mu > 0:
                if cur_max > _INT64_CAP // 2:
                    raise _Int64Overflow
            else:
                class_len = -(-num_terms // e)
                if cur_max > _INT64_CAP // max(class_len, 1):
                    raise _Int64Overflow
        if mu > 0:
            a = _mul_one_minus_xe(a, e)
        else:
            a = _div_one_minus_xe(a, e)
        if not exact:
            cur_max = int(np.abs(a).max())
    return a


@lru_cache(maxsize=128)
def _radical_series(rad: int, num_terms: int) -> np.ndarray:
    """Coefficients of Phi_rad mod x^num_terms for squarefree rad >= 2.

    Uses the Moebius product over the divisors e of rad,
    prod (1 - x^e)^{mu(rad/e)}, with multiplications done as shifted
    subtractions and divisions as stride cumulative sums.  Exact: int64 with a
    pre-op bound check, falling back to arbitrary precision on overflow risk.
    """
    c = factorize(rad)
    primes = [p for p, _ in c.factors]
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
            continue  # (1 - x^e) is the identity under truncation
        mu = -1 if (k - pop) % 2 else 1
        terms.append((e, mu))
    terms.sort(reverse=True)
    try:
        out = _series_run(terms, num_terms, exact=False)
    except _Int64Overflow:
        out = _series_run(terms, num_terms, exact=True)
    out.setflags(write=False)
    return out


def cyclotomic_poly(n: int) -> np.ndarray:
    """Exact coefficients of the n-th cyclotomic polynomial, ascending degree.

    Returns an int64 array when every coefficient fits comfortably, otherwise
    an object array of Python ints.  The result is monic of degree phi(n).

    Examples
    --------
    >>> cyclotomic_poly(4)
    array([1, 0, 1])
    >>> cyclotomic_poly(6)
    array([ 1, -1,  1])
    """
    c = as_conductor(n)
    if c.n == 1:
        return np.array([-1, 1], dtype=np.int64)
    rad_coeffs = _radical_series(c.rad, factorize(c.rad).phi + 1)
    stride = c.n // c.rad
    if stride == 1:
        return rad_coeffs.copy()
    out = np.zeros(c.phi + 1, dtype=rad_coeffs.dtype)
    out[::stride] = rad_coeffs
    return out


@lru_cache(maxsize=None)
def _radical_height(rad: int) -> int:
    c = factorize(rad)
    if c.omega <= 2:
        # Phi_p, Phi_2p (= Phi_p(-x)) and Phi_pq all have coefficients in
        # {-1, 0, 1}; cross-checked against the series path in the tests.
        return 1
    # Phi_rad is palindromic for rad >= 3, so the lower half carries every
    # coefficient magnitude.
    half = _radical_series(rad, c.phi // 2 + 1)
    return int(max(abs(int(v)) for v in half) if half.dtype == object
               else np.abs(half).max())


def height(n: int) -> int:
    """A(n): the maximum absolute coefficient of Phi_n.  A(n) = A(rad(n))."""
    c = as_conductor(n)
    return _radical_height(c.rad)

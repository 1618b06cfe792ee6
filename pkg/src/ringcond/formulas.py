"""Closed forms and upper bounds for embedding-matrix condition numbers.

Every evaluator returns a BoundReport.  Reports carry the numeric value, an
exact symbolic form c*sqrt(d) with rational c, d whenever the quantity has
one, and a base-10 logarithm that stays finite even when the value itself
overflows a double (the general bound reaches 10^360 around n = 10^5 with six
prime factors).  Evaluators never raise on a hypothesis violation: they come
back with applicable=False and a reason, so sweep loops can dispatch without
try/except pyramids.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numtheory import Conductor, as_conductor, first_primes, height, is_prime


class Kind(enum.Enum):
    EXACT_CLOSED = "ExactClosed"        # closed-form equality, power basis
    EXACT_TWISTED = "ExactTwisted"      # closed-form equality, twisted basis
    EXACT_QUADRATIC = "ExactQuadratic"  # closed-form equality, one real quadratic block
    BOUND_GENERAL = "BoundGeneral"      # coefficient-height bound, any conductor
    BOUND_REFINED = "BoundRefined"      # radical-power bound, up to six prime factors
    BOUND_CYCLOMQ = "BoundCycloMQ"      # twisted cyclo-multiquadratic bound
    BOUND_QUADRATIC = "BoundQuadratic"  # 2 + sqrt(p) envelope for one block
    BOUND_HYBRID = "BoundHybrid"        # refined bound times quadratic envelopes
    HEIGHT_BOUND = "HeightBound"        # coefficient-height estimate, not a condition number


@dataclass(frozen=True)
class SymbolicValue:
    """Exact value coeff * sqrt(radicand) with rational parts."""

    coeff: Fraction
    radicand: Fraction = Fraction(1)

    def __float__(self) -> float:
        try:
            return float(self.coeff) * math.sqrt(float(self.radicand))
        except OverflowError:
            return math.inf

    def __mul__(self, other: "SymbolicValue") -> "SymbolicValue":
        return SymbolicValue(self.coeff * other.coeff, self.radicand * other.radicand)

    def log10(self) -> float:
        if self.coeff <= 0:
            raise ValueError("log10 of a nonpositive symbolic value")
        c, r = self.coeff, self.radicand
        return (math.log10(c.numerator) - math.log10(c.denominator)
                + 0.5 * (math.log10(r.numerator) - math.log10(r.denominator)))

    def equals(self, other: "SymbolicValue") -> bool:
        # c1*sqrt(d1) = c2*sqrt(d2)  <=>  same sign and c1^2 d1 = c2^2 d2
        if (self.coeff > 0) != (other.coeff > 0):
            return self.coeff == other.coeff == 0
        return self.coeff ** 2 * self.radicand == other.coeff ** 2 * other.radicand


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one evaluator on one input.

    value is +inf when the quantity exceeds double range; log10_value stays
    finite in that case.  symbolic is present only for exact closed forms and
    for bounds that happen to be rational multiples of a square root.
    exponent is the growth-order metadata some bounds carry (the power of m
    in their asymptotic envelope).
    """

    kind: Kind
    value: float
    applicable: bool = True
    reason: str = ""
    conductor: Optional[Conductor] = None
    quad_primes: tuple = ()
    symbolic: Optional[SymbolicValue] = None
    log10_value: Optional[float] = None
    exponent: Optional[int] = None

    def __float__(self) -> float:
        return self.value


def _inapplicable(kind: Kind, reason: str, c: Optional[Conductor] = None,
                  primes: tuple = ()) -> BoundReport:
    return BoundReport(kind=kind, value=math.nan, applicable=False, reason=reason,
                       conductor=c, quad_primes=primes)


def _from_symbolic(kind: Kind, sym: SymbolicValue, c=None, primes=(),
                   exponent=None) -> BoundReport:
    return BoundReport(kind=kind, value=float(sym), conductor=c, quad_primes=primes,
                       symbolic=sym, log10_value=sym.log10(), exponent=exponent)


def _check_primes(c: Conductor, primes) -> tuple:
    primes = tuple(int(p) for p in primes)
    if len(set(primes)) != len(primes):
        raise ValueError(f"quadratic primes must be distinct, got {primes}")
    for p in primes:
        if not is_prime(p):
            raise ValueError(f"quadratic primes must be prime, got {p}")
        if c.n % p == 0:
            raise ValueError(f"quadratic prime {p} divides the conductor {c.n}")
    return primes


# ---------------------------------------------------------------------------
# Exact equalities.

def cond_exact_prime_power(n) -> BoundReport:
    """Power-basis condition number phi(n) * sqrt(2 - 2/p), exact for
    conductors with one odd prime (n = p^k or n = 2^k p^l, p the odd prime;
    pure two-powers take p = 2)."""
    c = as_conductor(n)
    if c.n < 2:
        return _inapplicable(Kind.EXACT_CLOSED, "need n >= 2", c)
    odd = [p for p, _ in c.factors if p != 2]
    if len(odd) > 1:
        return _inapplicable(
            Kind.EXACT_CLOSED,
            f"n = {c.n} has {len(odd)} odd prime factors; closed form needs at most one",
            c)
    p = odd[0] if odd else 2
    sym = SymbolicValue(Fraction(c.phi), Fraction(2 * (p - 1), p))
    return _from_symbolic(Kind.EXACT_CLOSED, sym, c)


def cond_exact_twisted(n) -> BoundReport:
    """Twisted-basis condition number phi(n) * sqrt(2^omega * prod (1 - 1/p)),
    exact for every conductor n >= 2."""
    c = as_conductor(n)
    if c.n < 2:
        return _inapplicable(Kind.EXACT_TWISTED, "need n >= 2", c)
    rad = Fraction(1 << c.omega)
    for p, _ in c.factors:
        rad *= Fraction(p - 1, p)
    return _from_symbolic(Kind.EXACT_TWISTED, SymbolicValue(Fraction(c.phi), rad), c)


def cond_quadratic(p) -> BoundReport:
    """Condition number of the 2x2 block for Q(sqrt p): sqrt(p) + 1/sqrt(p)
    when p = 2,3 (mod 4), and (p+5)/(2 sqrt p) when p = 1 (mod 4)."""
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"expected a prime, got {p}")
    if p % 4 == 1:
        sym = SymbolicValue(Fraction(p + 5, 2 * p), Fraction(p))
    else:
        sym = SymbolicValue(Fraction(p + 1, p), Fraction(p))
    return _from_symbolic(Kind.EXACT_QUADRATIC, sym, primes=(p,))


def cond_exact_cyclomq_twisted(n, primes) -> BoundReport:
    """Exact twisted-basis condition number of the compositum of the n-th
    cyclotomic field with Q(sqrt p) for each listed prime: the cyclotomic
    twisted value times the quadratic-block values (Kronecker multiplicativity)."""
    c = as_conductor(n)
    primes = _check_primes(c, primes)
    base = cond_exact_twisted(c)
    if not base.applicable:
        return _inapplicable(Kind.EXACT_TWISTED, base.reason, c, primes)
    sym = base.symbolic
    for p in primes:
        sym = sym * cond_quadratic(p).symbolic
    return _from_symbolic(Kind.EXACT_TWISTED, sym, c, primes)


# ---------------------------------------------------------------------------
# Upper bounds.

def cond_bound_general(n, coeff_height=None) -> BoundReport:
    """Coefficient-height bound 2 * rad(n) * n^(2^omega + omega + 2) * A,
    where A defaults to the true cyclotomic coefficient height of n.

    Valid for every n >= 2 but astronomically loose beyond omega = 3; the
    value field overflows to +inf past about 10^308 while log10_value and the
    symbolic integer stay exact."""
    c = as_conductor(n)
    if c.n < 2:
        return _inapplicable(Kind.BOUND_GENERAL, "need n >= 2", c)
    a = height(c.n) if coeff_height is None else int(coeff_height)
    if a < 1:
        raise ValueError(f"coefficient height must be >= 1, got {a}")
    e = (1 << c.omega) + c.omega + 2
    exact = 2 * c.rad * c.n ** e * a
    sym = SymbolicValue(Fraction(exact))
    rep = _from_symbolic(Kind.BOUND_GENERAL, sym, c, exponent=e)
    if math.isinf(rep.value):
        rep = BoundReport(kind=rep.kind, value=rep.value, conductor=c,
                          symbolic=sym, log10_value=rep.log10_value, exponent=e,
                          reason="exceeds double range; log10_value and symbolic stay exact")
    return rep


_REFINED_EXP = {1: 0, 2: 1, 3: 2, 4: 4, 5: 7, 6: 11}


def cond_bound_refined(n) -> BoundReport:
    """Radical-power bound 4 * phi(rad n)^e * phi(n)^2 with the exponent e
    depending only on omega(n) (0, 1, 2, 4, 7, 11 for omega = 1..6).
    Polynomial in n, unlike the general bound's n^(2^omega) blow-up."""
    c = as_conductor(n)
    if c.omega < 1 or c.omega > 6:
        return _inapplicable(
            Kind.BOUND_REFINED,
            f"omega(n) = {c.omega} outside the proven range 1..6", c)
    e = _REFINED_EXP[c.omega]
    phi_rad = 1
    for p, _ in c.factors:
        phi_rad *= p - 1
    exact = 4 * phi_rad ** e * c.phi ** 2
    sym = SymbolicValue(Fraction(exact))
    return _from_symbolic(Kind.BOUND_REFINED, sym, c, exponent=2 + e)


def cond_bound_quadratic(p) -> BoundReport:
    """Envelope 2 + sqrt(p) for a quadratic block, both residue classes."""
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"expected a prime, got {p}")
    return BoundReport(kind=Kind.BOUND_QUADRATIC, value=2.0 + math.sqrt(p),
                       quad_primes=(p,), log10_value=math.log10(2.0 + math.sqrt(p)),
                       exponent=0)


def cond_bound_cyclomq(n, primes) -> BoundReport:
    """Twisted cyclo-multiquadratic bound phi(n) * 2^(omega/2) * prod (2 + sqrt p)."""
    c = as_conductor(n)
    primes = _check_primes(c, primes)
    if c.n < 2:
        return _inapplicable(Kind.BOUND_CYCLOMQ, "need n >= 2", c, primes)
    log10 = (math.log10(c.phi) + 0.5 * c.omega * math.log10(2.0)
             + sum(math.log10(2.0 + math.sqrt(p)) for p in primes))
    value = c.phi * 2.0 ** (0.5 * c.omega)
    for p in primes:
        value *= 2.0 + math.sqrt(p)
    sym = SymbolicValue(Fraction(c.phi), Fraction(1 << c.omega)) if not primes else None
    return BoundReport(kind=Kind.BOUND_CYCLOMQ, value=value, conductor=c,
                       quad_primes=primes, symbolic=sym, log10_value=log10)


_HYBRID_EXP = {1: 2, 2: 3, 3: 4, 4: 6, 5: 9, 6: 13}


def hybrid_bound(n, primes) -> BoundReport:
    """Power-basis cyclo-multiquadratic bound: the refined cyclotomic bound
    times prod (2 + sqrt p) over the quadratic primes.  exponent records the
    power of m in the growth envelope (m^2 .. m^13 as omega runs 1..6)."""
    c = as_conductor(n)
    primes = _check_primes(c, primes)
    base = cond_bound_refined(c)
    if not base.applicable:
        return _inapplicable(Kind.BOUND_HYBRID, base.reason, c, primes)
    value = base.value
    log10 = base.log10_value
    for p in primes:
        value *= 2.0 + math.sqrt(p)
        log10 += math.log10(2.0 + math.sqrt(p))
    return BoundReport(kind=Kind.BOUND_HYBRID, value=value, conductor=c,
                       quad_primes=primes, log10_value=log10,
                       exponent=_HYBRID_EXP[c.omega])


# ---------------------------------------------------------------------------
# Supporting estimates.

def height_bound_56(n) -> BoundReport:
    """Coefficient-height upper estimates for 4 <= omega(n) <= 6 in terms of
    the smallest prime factors p < q < r < s of n:

        omega = 4:  p (p - 1) (p q - 1)
        omega = 5:  (135/512)  p^7  q^3  r
        omega = 6:  (18225/262144) p^15 q^7 r^3 s
    """
    c = as_conductor(n)
    if not 4 <= c.omega <= 6:
        return _inapplicable(
            Kind.HEIGHT_BOUND,
            f"omega(n) = {c.omega} outside the estimated range 4..6", c)
    ps = [p for p, _ in c.factors]
    p, q = ps[0], ps[1]
    if c.omega == 4:
        sym = SymbolicValue(Fraction(p * (p - 1) * (p * q - 1)))
    elif c.omega == 5:
        r = ps[2]
        sym = SymbolicValue(Fraction(135 * p ** 7 * q ** 3 * r, 512))
    else:
        r, s = ps[2], ps[3]
        sym = SymbolicValue(Fraction(18225 * p ** 15 * q ** 7 * r ** 3 * s, 262144))
    return _from_symbolic(Kind.HEIGHT_BOUND, sym, c)


def omega_upper_bound(n) -> float:
    """Unconditional bound omega(n) <= 1.3841 * ln n / ln ln n for n >= 3."""
    n = int(n)
    if n < 3:
        raise ValueError(f"bound needs n >= 3, got {n}")
    return 1.3841 * math.log(n) / math.log(math.log(n))

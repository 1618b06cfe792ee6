"""Change-of-basis matrices between coordinate and canonical embeddings.

Cyclotomic Vandermonde matrices on primitive roots of unity, their twisted
Kronecker factorization over prime-power parts, real 2x2 quadratic-field
blocks, and the tensor assemblies for cyclo-multiquadratic composita, plus
numeric condition numbers for all of them.

Ordering conventions (the matrices, unlike their condition numbers, depend on
them): primitive roots are enumerated by ascending residue k with
gcd(k, n) = 1, tensor factors by ascending prime.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .numtheory import Conductor, as_conductor, is_prime

# pi to more digits than any supported significand; np.pi is only a double
_PI_STR = "3.14159265358979323846264338327950288419716939937510582097494459"

_MAX_DIMENSION = 4096


class Basis(enum.Enum):
    POWER = "power"
    TWISTED = "twisted"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class EmbeddingSpec:
    """A conductor, an optional list of extra quadratic primes, and a basis.

    quad_primes must be distinct primes none of which divides the conductor;
    the hybrid basis requires at least one, the power basis none.
    """

    conductor: Conductor
    quad_primes: tuple = ()
    basis: Basis = Basis.POWER

    def __post_init__(self):
        c = as_conductor(self.conductor)
        object.__setattr__(self, "conductor", c)
        primes = tuple(int(p) for p in self.quad_primes)
        object.__setattr__(self, "quad_primes", primes)
        if len(set(primes)) != len(primes):
            raise ValueError(f"quad_primes must be distinct, got {primes}")
        for p in primes:
            if not is_prime(p):
                raise ValueError(f"quad_primes entries must be prime, got {p}")
            if c.n % p == 0:
                raise ValueError(f"quadratic prime {p} divides the conductor {c.n}")
        if self.basis == Basis.HYBRID and not primes:
            raise ValueError("hybrid basis requires a nonempty quad_primes list")
        if self.basis == Basis.POWER and primes:
            raise ValueError("power basis takes no quadratic primes")

    @property
    def dimension(self) -> int:
        return self.conductor.phi * (1 << len(self.quad_primes))


def _two_pi():
    real = linalg.active_precision().real_dtype
    if real is np.longdouble:
        return np.longdouble(2) * np.longdouble(_PI_STR)
    return 2.0 * np.pi


def primitive_roots_of_unity(n) -> np.ndarray:
    """exp(2*pi*i*k/n) for the ascending k coprime to n, at active precision."""
    c = as_conductor(n)
    if c.n < 2:
        raise ValueError("need a conductor n >= 2")
    ks = np.arange(1, c.n, dtype=np.int64)
    ks = ks[np.gcd(ks, c.n) == 1]
    real = linalg.active_precision().real_dtype
    theta = _two_pi() * ks.astype(real) / real(c.n)
    return np.cos(theta) + np.sin(theta) * linalg.active_precision().complex_dtype(1j)


def cyclotomic_vandermonde(n) -> np.ndarray:
    """phi(n) x phi(n) Vandermonde on the primitive n-th roots of unity."""
    return linalg.vandermonde(primitive_roots_of_unity(n))


def twisted_vandermonde(n) -> np.ndarray:
    """Kronecker product of cyclotomic Vandermondes over the prime-power
    parts of n, ascending primes.  For a prime power this is just the
    cyclotomic Vandermonde itself."""
    c = as_conductor(n)
    if c.n < 2:
        raise ValueError("need a conductor n >= 2")
    out = None
    for p, e in c.factors:
        v = cyclotomic_vandermonde(p ** e)
        out = v if out is None else linalg.kronecker(out, v)
    return out


def quadratic_block(p: int) -> np.ndarray:
    """2x2 real integral-basis block for Q(sqrt(p)).

    Rows evaluate the integral basis at the two real embeddings: (1, +-sqrt p)
    when p = 2,3 (mod 4), and (1, (1 +- sqrt p)/2) when p = 1 (mod 4).
    """
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"expected a prime, got {p}")
    real = linalg.active_precision().real_dtype
    s = np.sqrt(real(p))
    one = real(1)
    if p % 4 == 1:
        half = real(1) / real(2)
        return np.array([[one, (one + s) * half], [one, (one - s) * half]])
    return np.array([[one, s], [one, -s]])


def embedding_matrix(spec: EmbeddingSpec, cap: int = _MAX_DIMENSION) -> np.ndarray:
    """Materialize the spec's change-of-basis matrix.

    power basis -> V_{Phi_n}; twisted -> the twisted Vandermonde tensored with
    the quadratic blocks; hybrid -> V_{Phi_n} tensored with the quadratic
    blocks.  Dimensions above `cap` are refused: a dense Frobenius condition
    number needs the dense inverse, so large parameters belong to the formula
    evaluators instead.
    """
    dim = spec.dimension
    if dim > cap:
        raise ValueError(
            f"embedding dimension {dim} exceeds the materialization cap {cap}"
        )
    if spec.basis == Basis.POWER:
        return cyclotomic_vandermonde(spec.conductor)
    if spec.basis == Basis.TWISTED:
        out = twisted_vandermonde(spec.conductor)
    else:
        out = cyclotomic_vandermonde(spec.conductor)
    for p in sorted(spec.quad_primes):
        out = linalg.kronecker(out, quadratic_block(p))
    return out


def numeric_cond(spec: EmbeddingSpec, cap: int = _MAX_DIMENSION):
    """Numeric Frobenius condition number of the spec's matrix."""
    return linalg.condition_number(embedding_matrix(spec, cap=cap))

"""Exact modular polynomial arithmetic with instrumented operation counts.

Three transform families over Z_q[x, t_1..t_r] / (x^{m_cyclo} + 1, t_i^2 - d_i):

  * negacyclic NTT for the power-of-two cyclotomic axis,
  * diagonal-scaled Walsh-Hadamard transform for the multiquadratic axes
    (linear multiplication count: only the diagonal multiplies, the
    butterflies are sign-only),
  * their tensor combination for the mixed ring,

plus a quadratic-time schoolbook multiplier used as the correctness oracle
and an RNS layer that CRT-splits big-integer coefficients across several
ring-compatible primes.

Everything is plain Python integers: exact for any modulus up to the 62-bit
cap, no intermediate-overflow analysis needed.  Each context carries a
counter of data-dependent modular multiplications and additions; table
precomputation at context build time is deliberately not counted.

Coefficient layout for the mixed ring: index e*m_cyclo + j holds the
coefficient of x^j * prod(t_i for set bits i of e).  The evaluation domain
uses the same flat layout with the cyclotomic axis transformed within each
block and the quadratic sign choices across blocks.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Sequence

from .numtheory import factorize, is_prime

_Q_CAP = 1 << 62


class Domain(enum.Enum):
    COEFFICIENT = "coefficient"
    EVALUATION = "evaluation"


class DomainError(ValueError):
    """Transform applied to a PolyVec tagged with the wrong domain."""


class OpCounter:
    __slots__ = ("muls", "adds")

    def __init__(self):
        self.muls = 0
        self.adds = 0

    def reset(self):
        self.muls = 0
        self.adds = 0


def _bitrev(x: int, bits: int) -> int:
    out = 0
    for _ in range(bits):
        out = (out << 1) | (x & 1)
        x >>= 1
    return out


def _sqrt_mod(a: int, q: int) -> int:
    """Tonelli-Shanks square root of a quadratic residue a mod an odd prime q."""
    a %= q
    if a == 0:
        return 0
    if q % 4 == 3:
        return pow(a, (q + 1) // 4, q)
    # write q-1 = odd * 2^twos, walk the 2-Sylow subgroup down
    odd, twos = q - 1, 0
    while odd % 2 == 0:
        odd //= 2
        twos += 1
    z = 2
    while pow(z, (q - 1) // 2, q) != q - 1:
        z += 1
    c = pow(z, odd, q)
    t = pow(a, odd, q)
    s = pow(a, (odd + 1) // 2, q)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % q
            i += 1
        b = pow(c, 1 << (twos - i - 1), q)
        c = b * b % q
        twos = i
        t = t * c % q
        s = s * b % q
    return s


@dataclass
class RingContext:
    """Parameters plus precomputed tables for one modulus.

    Immutable after construction apart from the counter.  Use make_context;
    the constructor trusts its inputs.
    """

    q: int
    m_cyclo: int
    quad_d: tuple
    psi: int
    quad_roots: tuple
    counter: OpCounter = field(default_factory=OpCounter)

    def __post_init__(self):
        self.r = len(self.quad_d)
        self.m = self.m_cyclo << self.r
        self.log_mc = self.m_cyclo.bit_length() - 1
        mc, q = self.m_cyclo, self.q
        # bit-reversed twiddle tables; index len+i at butterfly stage len
        ipsi = pow(self.psi, q - 2, q)
        self._fwd = [pow(self.psi, _bitrev(i, self.log_mc), q) for i in range(mc)]
        self._inv = [pow(ipsi, _bitrev(i, self.log_mc), q) for i in range(mc)]
        self._mc_inv = pow(mc, q - 2, q) if mc > 1 else 1
        # diagonal tables over quadratic monomial masks
        diag = [1] * (1 << self.r)
        dprod = [1] * (1 << self.r)
        for i in range(self.r):
            for e in range(1 << i):
                diag[e | (1 << i)] = diag[e] * self.quad_roots[i] % q
                dprod[e | (1 << i)] = dprod[e] * (self.quad_d[i] % q) % q
        self._diag = diag
        self._dprod = dprod
        inv2r = pow(1 << self.r, q - 2, q)
        self._idiag = [inv2r * pow(d, q - 2, q) % q for d in diag]
        invm = pow(self.m % q, q - 2, q)
        self._hybrid_idiag = [invm * pow(d, q - 2, q) % q for d in diag]

    def poly(self, values: Sequence[int], domain: Domain = Domain.COEFFICIENT) -> "PolyVec":
        """Reduce a length-m integer sequence mod q and wrap it."""
        vals = tuple(int(v) % self.q for v in values)
        return PolyVec(vals, domain, self)

    def reset_counter(self):
        self.counter.reset()


@dataclass(frozen=True)
class PolyVec:
    """Length-m residue vector with a domain tag, bound to its context."""

    values: tuple
    domain: Domain
    ctx: RingContext

    def __post_init__(self):
        if len(self.values) != self.ctx.m:
            raise ValueError(
                f"expected {self.ctx.m} residues, got {len(self.values)}")
        q = self.ctx.q
        for v in self.values:
            if not 0 <= v < q:
                raise ValueError(f"residue {v} outside [0, {q})")


def make_context(q: int, m_cyclo: int, quad_d: Sequence[int] = ()) -> RingContext:
    """Validate parameters, search roots, and precompute tables (uncounted).

    psi is the smallest 2*m_cyclo-th root of -1 mod q: take any quadratic
    non-residue x, then psi0 = x^((q-1)/(2 m_cyclo)) has exact order
    2*m_cyclo, and psi0 * <psi0^2> enumerates every solution of
    y^{m_cyclo} = -1, so the minimum over that coset is global.  Quadratic
    roots s_i = sqrt(d_i) come from Tonelli-Shanks, canonicalized to
    min(s, q-s).
    """
    q, m_cyclo = int(q), int(m_cyclo)
    if not is_prime(q) or q == 2:
        raise ValueError(f"q = {q} is not an odd prime")
    if q >= _Q_CAP:
        raise ValueError(f"q = {q} does not fit in 62 bits")
    if m_cyclo < 1 or m_cyclo & (m_cyclo - 1):
        raise ValueError(f"m_cyclo = {m_cyclo} is not a power of two")
    if (q - 1) % (2 * m_cyclo):
        raise ValueError(f"q = {q} is not 1 mod {2 * m_cyclo}; no negacyclic NTT")
    quad_d = tuple(int(d) for d in quad_d)
    if len(set(quad_d)) != len(quad_d):
        raise ValueError(f"duplicate d_i in {quad_d}")
    roots = []
    for d in quad_d:
        if d < 1:
            raise ValueError(f"d_i must be positive, got {d}")
        if any(e > 1 for _, e in factorize(d).factors):
            raise ValueError(f"d_i must be squarefree, got {d}")
        if pow(d, (q - 1) // 2, q) != 1:
            raise ValueError(f"{d} is a quadratic non-residue mod {q}")
        s = _sqrt_mod(d, q)
        roots.append(min(s, q - s))

    x = 2
    while pow(x, (q - 1) // 2, q) != q - 1:
        x += 1
    psi0 = pow(x, (q - 1) // (2 * m_cyclo), q)
    gen = psi0 * psi0 % q
    psi, cur = psi0, psi0
    for _ in range(m_cyclo - 1):
        cur = cur * gen % q
        if cur < psi:
            psi = cur
    assert pow(psi, m_cyclo, q) == q - 1
    return RingContext(q, m_cyclo, quad_d, psi, tuple(roots))


# ---------------------------------------------------------------------------
# Transform kernels on mutable lists.  Counter increments are batched per
# loop but tally exactly one mul per performed modular multiplication.

def _ntt_block(a: List[int], base: int, ctx: RingContext):
    q, mc, tw = ctx.q, ctx.m_cyclo, ctx._fwd
    cnt = ctx.counter
    t = mc
    lvl = 1
    while lvl < mc:
        t >>= 1
        for i in range(lvl):
            w = tw[lvl + i]
            j0 = base + 2 * i * t
            for j in range(j0, j0 + t):
                u = a[j]
                v = a[j + t] * w % q
                a[j] = (u + v) % q
                a[j + t] = (u - v) % q
        cnt.muls += lvl * t
        cnt.adds += 2 * lvl * t
        lvl <<= 1


def _intt_block(a: List[int], base: int, ctx: RingContext, scale: bool):
    q, mc, tw = ctx.q, ctx.m_cyclo, ctx._inv
    cnt = ctx.counter
    t = 1
    lvl = mc >> 1
    while lvl >= 1:
        j0 = base
        for i in range(lvl):
            w = tw[lvl + i]
            for j in range(j0, j0 + t):
                u = a[j]
                v = a[j + t]
                a[j] = (u + v) % q
                a[j + t] = (u - v) * w % q
            j0 += 2 * t
        cnt.muls += lvl * t
        cnt.adds += 2 * lvl * t
        t <<= 1
        lvl >>= 1
    if scale:
        inv = ctx._mc_inv
        for j in range(base, base + mc):
            a[j] = a[j] * inv % q
        cnt.muls += mc


def _hadamard(a: List[int], ctx: RingContext, block: int):
    # sign-only butterflies across the quadratic axes; block = entries that
    # share one quadratic mask (1 standalone, m_cyclo in the hybrid layout)
    q = ctx.q
    size = len(a)
    for i in range(ctx.r):
        half = block << i
        step = half << 1
        for start in range(0, size, step):
            for j in range(start, start + half):
                u = a[j]
                v = a[j + half]
                a[j] = (u + v) % q
                a[j + half] = (u - v) % q
    ctx.counter.adds += ctx.r * size


def _require(a: PolyVec, domain: Domain):
    if a.domain != domain:
        raise DomainError(f"expected a {domain.value}-domain vector, got {a.domain.value}")


def _pure_cyclo(ctx: RingContext):
    if ctx.r:
        raise ValueError("context has a multiquadratic part; use hybrid_forward")
    if ctx.m_cyclo < 2:
        raise ValueError("NTT needs m_cyclo >= 2")


def _pure_quad(ctx: RingContext):
    if ctx.r == 0:
        raise ValueError("context has no multiquadratic part")
    if ctx.m_cyclo != 1:
        raise ValueError("context has a cyclotomic part; use hybrid_forward")


def ntt_forward(a: PolyVec) -> PolyVec:
    """Negacyclic NTT: coefficients -> evaluations at odd powers of psi,
    (m/2) log2 m counted multiplications."""
    ctx = a.ctx
    _pure_cyclo(ctx)
    _require(a, Domain.COEFFICIENT)
    vals = list(a.values)
    _ntt_block(vals, 0, ctx)
    return PolyVec(tuple(vals), Domain.EVALUATION, ctx)


def ntt_inverse(a: PolyVec) -> PolyVec:
    """Inverse NTT, (m/2) log2 m + m counted multiplications (the +m is the
    final 1/m scaling)."""
    ctx = a.ctx
    _pure_cyclo(ctx)
    _require(a, Domain.EVALUATION)
    vals = list(a.values)
    _intt_block(vals, 0, ctx, scale=True)
    return PolyVec(tuple(vals), Domain.COEFFICIENT, ctx)


def wht_forward(a: PolyVec) -> PolyVec:
    """Scaled Walsh-Hadamard transform: multiply coefficient e by
    prod s_i^{e_i} (2^r - 1 counted multiplications; the unit e=0 factor is
    elided), then sign-only butterflies (r 2^r additions, zero
    multiplications)."""
    ctx = a.ctx
    _pure_quad(ctx)
    _require(a, Domain.COEFFICIENT)
    q, diag = ctx.q, ctx._diag
    vals = list(a.values)
    for e in range(1, len(vals)):
        vals[e] = vals[e] * diag[e] % q
    ctx.counter.muls += len(vals) - 1
    _hadamard(vals, ctx, 1)
    return PolyVec(tuple(vals), Domain.EVALUATION, ctx)


def wht_inverse(a: PolyVec) -> PolyVec:
    """Inverse: sign-only butterflies, then the merged diagonal
    (2^r prod s_i^{e_i})^{-1}, exactly 2^r counted multiplications."""
    ctx = a.ctx
    _pure_quad(ctx)
    _require(a, Domain.EVALUATION)
    q, idiag = ctx.q, ctx._idiag
    vals = list(a.values)
    _hadamard(vals, ctx, 1)
    for e in range(len(vals)):
        vals[e] = vals[e] * idiag[e] % q
    ctx.counter.muls += len(vals)
    return PolyVec(tuple(vals), Domain.COEFFICIENT, ctx)


def hybrid_forward(a: PolyVec) -> PolyVec:
    """Tensor transform: NTT within each quadratic-mask block, then a full
    diagonal (uniform m multiplications, unit factors included), then
    sign-only butterflies across blocks.  Counted multiplications exactly
    (m/2) log2(m_cyclo) + m."""
    ctx = a.ctx
    if ctx.r == 0 or ctx.m_cyclo < 2:
        raise ValueError("degenerate tensor: use ntt_forward or wht_forward directly")
    _require(a, Domain.COEFFICIENT)
    q, mc, diag = ctx.q, ctx.m_cyclo, ctx._diag
    vals = list(a.values)
    for e in range(1 << ctx.r):
        _ntt_block(vals, e * mc, ctx)
    for e in range(1 << ctx.r):
        d = diag[e]
        for j in range(e * mc, (e + 1) * mc):
            vals[j] = vals[j] * d % q
    ctx.counter.muls += ctx.m
    _hadamard(vals, ctx, mc)
    return PolyVec(tuple(vals), Domain.EVALUATION, ctx)


def hybrid_inverse(a: PolyVec) -> PolyVec:
    """Inverse tensor transform, same multiplication count as the forward:
    butterflies, unscaled inverse NTT per block, then one merged diagonal
    (m_cyclo 2^r prod s_i^{e_i})^{-1}."""
    ctx = a.ctx
    if ctx.r == 0 or ctx.m_cyclo < 2:
        raise ValueError("degenerate tensor: use ntt_inverse or wht_inverse directly")
    _require(a, Domain.EVALUATION)
    q, mc, idiag = ctx.q, ctx.m_cyclo, ctx._hybrid_idiag
    vals = list(a.values)
    _hadamard(vals, ctx, mc)
    for e in range(1 << ctx.r):
        _intt_block(vals, e * mc, ctx, scale=False)
    for e in range(1 << ctx.r):
        d = idiag[e]
        for j in range(e * mc, (e + 1) * mc):
            vals[j] = vals[j] * d % q
    ctx.counter.muls += ctx.m
    return PolyVec(tuple(vals), Domain.COEFFICIENT, ctx)


def pointwise_mul(a: PolyVec, b: PolyVec) -> PolyVec:
    """Coordinatewise product in the evaluation domain; m counted
    multiplications.  Implements ring multiplication there."""
    if a.ctx is not b.ctx:
        raise ValueError("operands from different contexts")
    _require(a, Domain.EVALUATION)
    _require(b, Domain.EVALUATION)
    q = a.ctx.q
    vals = tuple(u * v % q for u, v in zip(a.values, b.values))
    a.ctx.counter.muls += a.ctx.m
    return PolyVec(vals, Domain.EVALUATION, a.ctx)


def schoolbook_mul(a: PolyVec, b: PolyVec) -> PolyVec:
    """Quadratic-time oracle: expand the product monomial by monomial and
    reduce with x^{m_cyclo} = -1 and t_i^2 = d_i.  Counts one multiplication
    per coefficient product plus one per needed d-product factor."""
    if a.ctx is not b.ctx:
        raise ValueError("operands from different contexts")
    _require(a, Domain.COEFFICIENT)
    _require(b, Domain.COEFFICIENT)
    ctx = a.ctx
    q, mc, dprod = ctx.q, ctx.m_cyclo, ctx._dprod
    out = [0] * ctx.m
    muls = adds = 0
    for i1, u in enumerate(a.values):
        if u == 0:
            continue
        e1, j1 = divmod(i1, mc)
        for i2, v in enumerate(b.values):
            e2, j2 = divmod(i2, mc)
            c = u * v % q
            muls += 1
            common = e1 & e2
            if common:
                c = c * dprod[common] % q
                muls += 1
            j = j1 + j2
            if j >= mc:  # negacyclic wraparound
                j -= mc
                c = q - c if c else 0
            idx = (e1 ^ e2) * mc + j
            out[idx] = (out[idx] + c) % q
            adds += 1
    ctx.counter.muls += muls
    ctx.counter.adds += adds
    return PolyVec(tuple(out), Domain.COEFFICIENT, ctx)


def count_report(ctx: RingContext) -> dict:
    """Totals since construction or the last reset_counter()."""
    return {"muls": ctx.counter.muls, "adds": ctx.counter.adds}


# ---------------------------------------------------------------------------
# RNS layer: coefficient-wise CRT across several ring-compatible primes.

@dataclass(frozen=True)
class RnsContext:
    contexts: tuple          # one RingContext per modulus, same (m_cyclo, quad_d)
    modulus_product: int     # Q = prod q_i, arbitrary precision

    @property
    def moduli(self) -> tuple:
        return tuple(c.q for c in self.contexts)


def make_rns_context(moduli: Sequence[int], m_cyclo: int,
                     quad_d: Sequence[int] = ()) -> RnsContext:
    moduli = tuple(int(q) for q in moduli)
    if len(set(moduli)) != len(moduli):
        raise ValueError(f"moduli must be pairwise distinct, got {moduli}")
    ctxs = tuple(make_context(q, m_cyclo, quad_d) for q in moduli)
    big_q = 1
    for q in moduli:
        big_q *= q
    return RnsContext(ctxs, big_q)


def rns_decompose(coeffs: Sequence[int], rns: RnsContext) -> List[PolyVec]:
    """Reduce arbitrary-precision coefficients into one PolyVec per modulus."""
    coeffs = [int(c) for c in coeffs]
    return [ctx.poly(coeffs) for ctx in rns.contexts]


def rns_reconstruct(parts: Sequence[PolyVec], rns: RnsContext) -> List[int]:
    """Explicit CRT back to integers in [0, Q)."""
    if len(parts) != len(rns.contexts):
        raise ValueError(
            f"expected {len(rns.contexts)} limbs, got {len(parts)}")
    for part, ctx in zip(parts, rns.contexts):
        if part.ctx is not ctx:
            raise ValueError("limb bound to a different context (moduli mismatch)")
    big_q = rns.modulus_product
    basis = []
    for ctx in rns.contexts:
        qi = ctx.q
        rest = big_q // qi
        basis.append(rest * pow(rest % qi, qi - 2, qi))
    m = rns.contexts[0].m
    out = []
    for j in range(m):
        acc = 0
        for part, b in zip(parts, basis):
            acc += part.values[j] * b
        out.append(acc % big_q)
    return out

"""Modular polynomial arithmetic: context construction, the three transform
families, multiplication counting, the schoolbook oracle, and the RNS layer.

The schoolbook path is the oracle for every transform-based product; counts
are asserted as exact integers against the closed forms.
"""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcond import ringarith as ra


def ctx_cyclo(q=97, m=8):
    return ra.make_context(q, m)


def ctx_quad(q=17, d=(2,)):
    return ra.make_context(q, 1, d)


def ctx_hybrid(q=12289, m=4, d=(2, 3)):
    return ra.make_context(q, m, d)


def rand_poly(ctx, rng):
    return ctx.poly([rng.randrange(ctx.q) for _ in range(ctx.m)])


# ---------------------------------------------------------------------------
# context construction


def test_make_context_pinned_psi():
    # the canonical worked example: q=17, m=4 has psi=2 (2^4 = 16 = -1 mod 17)
    ctx = ra.make_context(17, 4)
    assert ctx.psi == 2
    assert pow(ctx.psi, ctx.m_cyclo, ctx.q) == ctx.q - 1


def test_make_context_pinned_quad_root():
    ctx = ra.make_context(17, 1, (2,))
    assert ctx.quad_roots == (6,)  # 6^2 = 36 = 2 mod 17; canonical min(6, 11)


def test_psi_is_smallest_solution():
    for q, m in [(17, 4), (97, 8), (257, 16), (7681, 256)]:
        ctx = ra.make_context(q, m)
        brute = min(
            y for y in range(1, q) if pow(y, m, q) == q - 1
        )
        assert ctx.psi == brute


def test_quad_roots_are_canonical_square_roots():
    ctx = ra.make_context(12289, 1, (2, 3, 5))
    for d, s in zip(ctx.quad_d, ctx.quad_roots):
        assert s * s % ctx.q == d
        assert s <= ctx.q - s


def test_make_context_validation():
    with pytest.raises(ValueError):
        ra.make_context(16, 4)  # q not prime
    with pytest.raises(ValueError):
        ra.make_context(17, 3)  # m not a power of two
    with pytest.raises(ValueError):
        ra.make_context(13, 8)  # 2m does not divide q-1
    with pytest.raises(ValueError):
        ra.make_context(17, 1, (3,))  # 3 is a quadratic non-residue mod 17
    with pytest.raises(ValueError):
        ra.make_context(17, 1, (2, 2))  # repeated d
    with pytest.raises(ValueError):
        ra.make_context(17, 1, (4,))  # not squarefree
    import sympy

    with pytest.raises(ValueError):  # prime, but too large for the exact engine
        ra.make_context(int(sympy.nextprime(1 << 62)), 2)


def test_scalar_ring_is_allowed_but_has_no_transform():
    # m_cyclo = 1 with no quadratic part: the ring is just Z_q
    ctx = ra.make_context(17, 1)
    a, b = ctx.poly([5]), ctx.poly([7])
    assert ra.schoolbook_mul(a, b).values == (35 % 17,)
    with pytest.raises(ValueError):
        ra.ntt_forward(a)
    with pytest.raises(ValueError):
        ra.wht_forward(a)


def test_polyvec_validation():
    ctx = ctx_cyclo()
    with pytest.raises(ValueError):
        ctx.poly([1, 2, 3])  # wrong length
    # the convenience constructor reduces mod q ...
    assert ctx.poly([97] * 8).values == (0,) * 8
    assert ctx.poly([-1] * 8).values == (96,) * 8
    # ... while direct construction is strict about the residue range
    with pytest.raises(ValueError):
        ra.PolyVec((0,) * 7 + (97,), ra.Domain.COEFFICIENT, ctx)
    with pytest.raises(ValueError):
        ra.PolyVec((0,) * 7 + (-1,), ra.Domain.COEFFICIENT, ctx)


# ---------------------------------------------------------------------------
# negacyclic NTT


def test_ntt_output_ordering_is_bitrev_odd_powers():
    # entry i of the forward transform is a(psi^(2*bitrev(i)+1))
    ctx = ctx_cyclo(97, 8)
    rng = random.Random(5)
    a = rand_poly(ctx, rng)
    out = ra.ntt_forward(a)
    q, m = ctx.q, ctx.m
    for i in range(m):
        e = 2 * ra._bitrev(i, 3) + 1
        x = pow(ctx.psi, e, q)
        want = 0
        for c in reversed(a.values):
            want = (want * x + c) % q
        assert out.values[i] == want


def test_ntt_roundtrip_and_domains():
    ctx = ctx_cyclo()
    rng = random.Random(6)
    a = rand_poly(ctx, rng)
    f = ra.ntt_forward(a)
    assert f.domain == ra.Domain.EVALUATION
    back = ra.ntt_inverse(f)
    assert back.domain == ra.Domain.COEFFICIENT
    assert back.values == a.values
    with pytest.raises(ra.DomainError):
        ra.ntt_forward(f)
    with pytest.raises(ra.DomainError):
        ra.ntt_inverse(a)


def test_ntt_requires_pure_cyclotomic_context():
    with pytest.raises(ValueError):
        ra.ntt_forward(ctx_hybrid().poly([0] * 16))
    with pytest.raises(ValueError):
        ra.ntt_forward(ctx_quad().poly([0, 0]))


def test_ntt_counts_pinned_m8():
    ctx = ctx_cyclo(97, 8)
    a = ctx.poly(list(range(8)))
    ctx.reset_counter()
    ra.ntt_forward(a)
    assert ra.count_report(ctx) == {"muls": 12, "adds": 24}
    ctx.reset_counter()
    ra.ntt_inverse(ra.ntt_forward(a))
    # forward (m/2)log m + inverse (m/2)log m + m scaling muls
    assert ra.count_report(ctx)["muls"] == 12 + 12 + 8


@pytest.mark.parametrize("m", [2, 4, 16, 64, 1024])
def test_ntt_count_closed_form(m):
    q = 12289 if m <= 512 else 786433
    ctx = ra.make_context(q, m)
    a = ctx.poly([1] * m)
    ctx.reset_counter()
    ra.ntt_forward(a)
    lg = m.bit_length() - 1
    assert ctx.counter.muls == (m // 2) * lg
    assert ctx.counter.adds == m * lg


# ---------------------------------------------------------------------------
# scaled Walsh-Hadamard


def test_wht_worked_example_square():
    # (3 + 2x)^2 mod (x^2 - 2, 17): forward (15, 8), squares (4, 13),
    # inverse (0, 12), i.e. 12x
    ctx = ctx_quad(17, (2,))
    a = ctx.poly([3, 2])
    f = ra.wht_forward(a)
    assert f.values == (15, 8)
    sq = ra.pointwise_mul(f, f)
    assert sq.values == (4, 13)
    back = ra.wht_inverse(sq)
    assert back.values == (0, 12)


def test_wht_roundtrip_multi_prime():
    ctx = ra.make_context(12289, 1, (2, 3, 5))
    rng = random.Random(7)
    a = rand_poly(ctx, rng)
    assert ra.wht_inverse(ra.wht_forward(a)).values == a.values


def test_wht_counts_elide_unit_diagonal():
    ctx = ra.make_context(12289, 1, (2, 3, 5))  # r = 3
    a = ctx.poly([1] * 8)
    ctx.reset_counter()
    ra.wht_forward(a)
    # diagonal has 2^r - 1 non-unit entries (the e=0 cell multiplies by 1)
    assert ctx.counter.muls == 7
    assert ctx.counter.adds == 3 * 8
    ctx.reset_counter()
    ra.wht_inverse(ra.wht_forward(ctx.poly([1] * 8)))
    # inverse diagonal folds in 2^-r, so all 2^r entries count
    assert ctx.counter.muls == 7 + 8
    assert ctx.counter.adds == 48


def test_wht_counts_r4_adds():
    ctx = ra.make_context(12289, 1, (2, 3, 5, 7))
    a = ctx.poly([1] * 16)
    ctx.reset_counter()
    ra.wht_forward(a)
    assert ctx.counter.muls <= 16 and ctx.counter.muls == 15
    assert ctx.counter.adds == 4 * 16


def test_wht_requires_pure_quadratic_context():
    with pytest.raises(ValueError):
        ra.wht_forward(ctx_cyclo().poly([0] * 8))


# ---------------------------------------------------------------------------
# hybrid transform


def test_hybrid_roundtrip_and_counts():
    ctx = ctx_hybrid(12289, 4, (2, 3))  # m = 16
    rng = random.Random(8)
    a = rand_poly(ctx, rng)
    ctx.reset_counter()
    f = ra.hybrid_forward(a)
    # (m/2) log2(m_cyclo) + m = 8*2 + 16
    assert ctx.counter.muls == 32
    back = ra.hybrid_inverse(f)
    assert back.values == a.values
    # inverse costs the same as the forward by the merged diagonal
    assert ctx.counter.muls == 64


def test_hybrid_requires_both_axes():
    with pytest.raises(ValueError):
        ra.hybrid_forward(ctx_cyclo().poly([0] * 8))
    with pytest.raises(ValueError):
        ra.hybrid_forward(ctx_quad().poly([0, 0]))


# ---------------------------------------------------------------------------
# pointwise / schoolbook oracle agreement


def test_pointwise_requires_evaluation_domain():
    ctx = ctx_cyclo()
    a = ctx.poly([1] * 8)
    with pytest.raises(ra.DomainError):
        ra.pointwise_mul(a, a)


def test_pointwise_rejects_mixed_contexts():
    a = ra.ntt_forward(ctx_cyclo(97, 8).poly([1] * 8))
    b = ra.ntt_forward(ctx_cyclo(113, 8).poly([1] * 8))
    with pytest.raises(ValueError):
        ra.pointwise_mul(a, b)


def test_schoolbook_identities():
    ctx = ctx_hybrid(12289, 4, (2, 3))
    one = ctx.poly([1] + [0] * 15)
    rng = random.Random(9)
    a = rand_poly(ctx, rng)
    assert ra.schoolbook_mul(a, one).values == a.values
    # x^(mc-1) * x = x^mc = -1 in the negacyclic factor
    x1 = ctx.poly([0, 1] + [0] * 14)
    x3 = ctx.poly([0, 0, 0, 1] + [0] * 12)
    got = ra.schoolbook_mul(x1, x3)
    want = [0] * 16
    want[0] = ctx.q - 1
    assert got.values == tuple(want)
    # t_i^2 = d_i: the generator of each quadratic factor squares to d_i
    t1 = [0] * 16
    t1[1 * ctx.m_cyclo] = 1  # mask e = 01: the sqrt(2) generator
    got = ra.schoolbook_mul(ctx.poly(t1), ctx.poly(t1))
    want = [0] * 16
    want[0] = 2
    assert got.values == tuple(want)


def _transform_pair(ctx):
    if ctx.r == 0:
        return ra.ntt_forward, ra.ntt_inverse
    if ctx.m_cyclo == 1:
        return ra.wht_forward, ra.wht_inverse
    return ra.hybrid_forward, ra.hybrid_inverse


@pytest.mark.parametrize(
    "maker",
    [
        lambda: ctx_cyclo(97, 8),
        lambda: ctx_cyclo(7681, 64),
        lambda: ctx_quad(17, (2,)),
        lambda: ra.make_context(12289, 1, (2, 3, 5)),
        lambda: ctx_hybrid(12289, 4, (2, 3)),
        lambda: ctx_hybrid(7681, 16, (5,)),
    ],
)
def test_transform_multiplication_matches_schoolbook(maker):
    ctx = maker()
    fwd, inv = _transform_pair(ctx)
    rng = random.Random(10)
    for _ in range(6):
        a, b = rand_poly(ctx, rng), rand_poly(ctx, rng)
        via_transform = inv(ra.pointwise_mul(fwd(a), fwd(b)))
        assert via_transform.values == ra.schoolbook_mul(a, b).values


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=256), min_size=16, max_size=16),
       st.lists(st.integers(min_value=0, max_value=256), min_size=16, max_size=16))
def test_hybrid_homomorphism_property(xs, ys):
    ctx = ra.make_context(12289, 4, (2, 3))
    a = ctx.poly(xs)
    b = ctx.poly(ys)
    lhs = ra.hybrid_inverse(ra.pointwise_mul(ra.hybrid_forward(a), ra.hybrid_forward(b)))
    assert lhs.values == ra.schoolbook_mul(a, b).values


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=7680), min_size=32, max_size=32))
def test_ntt_roundtrip_property(xs):
    ctx = ra.make_context(7681, 32)
    a = ctx.poly(xs)
    assert ra.ntt_inverse(ra.ntt_forward(a)).values == a.values


# ---------------------------------------------------------------------------
# RNS / CRT layer


def test_rns_pinned_limbs():
    rns = ra.make_rns_context((17, 97), 4)
    assert rns.moduli == (17, 97)
    assert rns.modulus_product == 1649
    parts = ra.rns_decompose([100, 0, 1648, 5], rns)
    assert parts[0].values == (15, 0, 1648 % 17, 5)
    assert parts[1].values == (3, 0, 1648 % 97, 5)
    back = ra.rns_reconstruct(parts, rns)
    assert back == [100, 0, 1648, 5]


def test_rns_rejects_duplicate_moduli():
    with pytest.raises(ValueError):
        ra.make_rns_context((17, 17), 4)


def test_rns_rejects_foreign_limbs():
    rns = ra.make_rns_context((17, 97), 4)
    other = ra.make_context(113, 4)
    parts = ra.rns_decompose([1, 2, 3, 4], rns)
    with pytest.raises(ValueError):
        ra.rns_reconstruct([parts[0], other.poly([1, 2, 3, 4])], rns)
    with pytest.raises(ValueError):
        ra.rns_reconstruct(parts[:1], rns)


def test_rns_big_coefficient_multiply():
    # negacyclic product with coefficients far beyond any single modulus,
    # checked against exact integer arithmetic
    rns = ra.make_rns_context((7681, 12289, 15361), 8)
    big_q = rns.modulus_product
    rng = random.Random(11)
    a = [rng.randrange(10**6) for _ in range(8)]
    b = [rng.randrange(10**6) for _ in range(8)]
    prods = []
    for pa, pb in zip(ra.rns_decompose(a, rns), ra.rns_decompose(b, rns)):
        f = ra.ntt_forward(pa)
        g = ra.ntt_forward(pb)
        prods.append(ra.ntt_inverse(ra.pointwise_mul(f, g)))
    got = ra.rns_reconstruct(prods, rns)
    want = [0] * 8
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            k = i + j
            if k < 8:
                want[k] += ai * bj
            else:
                want[k - 8] -= ai * bj
    assert got == [w % big_q for w in want]


# ---------------------------------------------------------------------------
# counter hygiene


def test_counter_reset_and_batching():
    ctx = ctx_cyclo(97, 8)
    a = ctx.poly([1] * 8)
    ra.ntt_forward(a)
    assert ctx.counter.muls > 0
    ctx.reset_counter()
    assert ra.count_report(ctx) == {"muls": 0, "adds": 0}


def test_pointwise_counts_one_mul_per_slot():
    ctx = ctx_cyclo(97, 8)
    f = ra.ntt_forward(ctx.poly([1] * 8))
    ctx.reset_counter()
    ra.pointwise_mul(f, f)
    assert ctx.counter.muls == 8
    assert ctx.counter.adds == 0

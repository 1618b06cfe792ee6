"""Command-line front end: conductor sweeps, transform benchmarks, verification.

Three subcommands:

  cond    sweep a conductor range and emit one CSV row per n with the exact
          formulas, the bounds, and (under a dimension cap) numeric
          condition numbers for both bases
  bench   compare counted multiplications and wall-clock of a full-size
          negacyclic NTT against the tensor hybrid at the same dimension
  verify  run the cross-module invariant suites

CSV numbers use 12 significant digits; values beyond double range are
rendered from their exact integer form, so the sweep stays meaningful where
the general bound reaches 10^350.  All columns except the bench timing
medians are byte-deterministic for a fixed configuration.
"""
from __future__ import annotations

import argparse
import csv
import math
import random
import statistics
import sys
import time
from dataclasses import dataclass
from decimal import Context as DecimalContext
from typing import Optional, Sequence

from . import _checks, embeddings, formulas, linalg, ringarith
from .embeddings import Basis, EmbeddingSpec
from .numtheory import factorize, first_primes, height, is_prime

_DEFAULT_SWEEP_LIMIT = 100_000
_TWELVE = DecimalContext(prec=12)


@dataclass(frozen=True)
class SweepConfig:
    n_min: int
    n_max: int
    omega_filter: Optional[int]      # None means any
    numeric_cap: int = 512
    out_path: str = "-"
    basis: Basis = Basis.POWER
    quad_primes: tuple = ()

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise ValueError(f"empty range [{self.n_min}, {self.n_max}]")
        if self.n_min < 1:
            raise ValueError("range must start at 1 or above")
        if not 0 <= self.numeric_cap <= 4096:
            raise ValueError("numeric cap must lie in [0, 4096]")


def _fmt(value, exact_int: Optional[int] = None) -> str:
    """12-significant-digit cell; empty for missing, exact-integer fallback
    when the double overflowed."""
    if value is None:
        return ""
    x = float(value)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        if exact_int is None:
            return "inf"
        return str(_TWELVE.create_decimal(exact_int)).lower()
    return f"{x:.11e}"


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


COND_HEADER = ["n", "omega", "phi", "rad", "A_n", "exact_closed", "exact_twisted",
               "bound_refined", "bound_general_over_A", "numeric_power",
               "numeric_twisted"]


def cmd_cond(config: SweepConfig) -> int:
    try:
        fh, owned = _open_out(config.out_path)
    except OSError as exc:
        print(f"cannot open output: {exc}", file=sys.stderr)
        return 2
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COND_HEADER)
        for n in range(max(config.n_min, 2), config.n_max + 1):
            c = factorize(n)
            if config.omega_filter is not None and c.omega != config.omega_filter:
                continue
            closed = formulas.cond_exact_prime_power(c)
            twisted = formulas.cond_exact_twisted(c)
            refined = formulas.cond_bound_refined(c)
            # the general bound scales linearly in the height, so the
            # height-normalized column is just the bound evaluated at height 1
            over_a = formulas.cond_bound_general(c, coeff_height=1)
            num_p = num_t = None
            if 0 < c.phi <= config.numeric_cap:
                num_p = embeddings.numeric_cond(EmbeddingSpec(c))
                num_t = embeddings.numeric_cond(EmbeddingSpec(c, basis=Basis.TWISTED))
            writer.writerow([
                n, c.omega, c.phi, c.rad, height(n),
                _fmt(closed.value if closed.applicable else None),
                _fmt(twisted.value if twisted.applicable else None),
                _fmt(refined.value if refined.applicable else None),
                _fmt(over_a.value if over_a.applicable else None,
                     exact_int=over_a.symbolic.coeff.numerator if over_a.symbolic else None),
                _fmt(num_p), _fmt(num_t),
            ])
    finally:
        if owned:
            fh.close()
    return 0


def _bench_prime(m_total: int, quad_d: Sequence[int], q_bits: int) -> int:
    """Smallest prime of the requested size splitting both rings: q = 1 mod
    2*m_total (the full-size NTT needs it; the hybrid's subgroup condition
    follows) with every d_i a residue."""
    step = 2 * m_total
    q = (((1 << (q_bits - 1)) // step) + 1) * step + 1
    while q < (1 << 62):
        if is_prime(q) and all(pow(d, (q - 1) // 2, q) == 1 for d in quad_d):
            return q
        q += step
    raise ValueError(f"no suitable prime below 2^62 for m={m_total}, qbits={q_bits}")


BENCH_HEADER = ["m_cyclo", "r", "m_total", "q",
                "ntt_fwd_muls", "ntt_fwd_adds", "ntt_inv_muls", "ntt_inv_adds",
                "hybrid_fwd_muls", "hybrid_fwd_adds", "hybrid_inv_muls",
                "hybrid_inv_adds", "counted_ratio", "asymptotic_ratio",
                "ntt_swap_ms", "hybrid_swap_ms"]


def _timed_swap(fwd, inv, poly, trials: int) -> float:
    samples = []
    for _ in range(trials):
        t0 = time.perf_counter()
        back = inv(fwd(poly))
        samples.append((time.perf_counter() - t0) * 1e3)
        if back.values != poly.values:
            raise AssertionError("swap round-trip violated during bench")
    return statistics.median(samples)


def cmd_bench(m_cyclo: int, r: int, q_bits: int, trials: int, out_path: str) -> int:
    u = m_cyclo.bit_length() - 1
    m_total = m_cyclo << r
    quad_d = tuple(first_primes(r, exclude=(2,)))   # conductor is a 2-power
    try:
        q = _bench_prime(m_total, quad_d, q_bits)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    rng = random.Random(987654321)
    base_ctx = ringarith.make_context(q, m_total, ())
    data = [rng.randrange(q) for _ in range(m_total)]
    base_poly = base_ctx.poly(data)

    def measure(ctx, fwd, inv, poly):
        ctx.reset_counter()
        f = fwd(poly)
        fwd_counts = (ctx.counter.muls, ctx.counter.adds)
        ctx.reset_counter()
        inv(f)
        inv_counts = (ctx.counter.muls, ctx.counter.adds)
        ctx.reset_counter()
        ms = _timed_swap(fwd, inv, poly, trials)
        return fwd_counts, inv_counts, ms

    try:
        base_f, base_i, base_ms = measure(
            base_ctx, ringarith.ntt_forward, ringarith.ntt_inverse, base_poly)
        if r == 0:
            hyb_f, hyb_i, hyb_ms = base_f, base_i, base_ms
        else:
            hyb_ctx = ringarith.make_context(q, m_cyclo, quad_d)
            hyb_poly = hyb_ctx.poly(data)
            hyb_f, hyb_i, hyb_ms = measure(
                hyb_ctx, ringarith.hybrid_forward, ringarith.hybrid_inverse, hyb_poly)
    except AssertionError as exc:
        print(str(exc), file=sys.stderr)
        return 1

    try:
        fh, owned = _open_out(out_path)
    except OSError as exc:
        print(f"cannot open output: {exc}", file=sys.stderr)
        return 2
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        writer.writerow([
            m_cyclo, r, m_total, q,
            base_f[0], base_f[1], base_i[0], base_i[1],
            hyb_f[0], hyb_f[1], hyb_i[0], hyb_i[1],
            _fmt(base_f[0] / hyb_f[0]),
            _fmt((u + r) / u) if u else "",
            _fmt(base_ms), _fmt(hyb_ms),
        ])
    finally:
        if owned:
            fh.close()
    return 0


def cmd_verify(full: bool) -> int:
    failures = _checks.run(full=full)
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringcond",
        description="Condition-number tables and exact transform benchmarks "
                    "for cyclotomic and multiquadratic rings.")
    parser.add_argument("--precision", choices=["double", "extended"],
                        default="double",
                        help="floating precision for numeric condition numbers")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cond = sub.add_parser("cond", help="conductor sweep to CSV")
    p_cond.add_argument("--min", type=int, required=True)
    p_cond.add_argument("--max", type=int, required=True)
    p_cond.add_argument("--omega", default="any",
                        help="restrict to a fixed number of distinct primes (1..6)")
    p_cond.add_argument("--numeric-cap", type=int, default=512,
                        help="largest matrix dimension to invert numerically (0 disables)")
    p_cond.add_argument("--limit", type=int, default=_DEFAULT_SWEEP_LIMIT,
                        help="safety ceiling on --max; raise explicitly for big sweeps")
    p_cond.add_argument("--out", required=True, help="output CSV path ('-' for stdout)")

    p_bench = sub.add_parser("bench", help="NTT vs hybrid swap benchmark")
    p_bench.add_argument("--mcyclo", type=int, required=True,
                         help="cyclotomic block size, a power of two >= 2")
    p_bench.add_argument("--r", type=int, required=True,
                         help="number of quadratic generators")
    p_bench.add_argument("--qbits", type=int, default=30,
                         help="target modulus size in bits")
    p_bench.add_argument("--trials", type=int, default=3)
    p_bench.add_argument("--out", required=True)

    p_verify = sub.add_parser("verify", help="run invariant suites")
    p_verify.add_argument("--full", action="store_true",
                          help="extended ranges plus the analytic sweeps")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    linalg.set_precision(args.precision)

    if args.command == "cond":
        if args.omega == "any":
            omega = None
        else:
            try:
                omega = int(args.omega)
            except ValueError:
                parser.error(f"--omega must be an integer or 'any', got {args.omega!r}")
            if not 1 <= omega <= 6:
                parser.error("--omega must lie in 1..6")
        if args.max > args.limit:
            parser.error(f"--max {args.max} exceeds the sweep limit {args.limit}; "
                         f"raise --limit if intended")
        try:
            config = SweepConfig(args.min, args.max, omega,
                                 numeric_cap=args.numeric_cap, out_path=args.out)
        except ValueError as exc:
            parser.error(str(exc))
        return cmd_cond(config)

    if args.command == "bench":
        if args.mcyclo < 2 or args.mcyclo & (args.mcyclo - 1):
            parser.error("--mcyclo must be a power of two >= 2")
        if args.r < 0:
            parser.error("--r must be nonnegative")
        if not 8 <= args.qbits <= 62:
            parser.error("--qbits must lie in [8, 62]")
        if args.trials < 1:
            parser.error("--trials must be positive")
        return cmd_bench(args.mcyclo, args.r, args.qbits, args.trials, args.out)

    return cmd_verify(args.full)


if __name__ == "__main__":
    sys.exit(main())

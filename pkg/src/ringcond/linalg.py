"""Dense complex matrix kernel with selectable working precision.

Frobenius norms, Kronecker products, matrix inversion (LAPACK at double
precision, a compensated double-double Newton refinement at extended
precision, and a generic pivoted LU used for cross-checks and error
reporting), plus Vandermonde construction and its explicit inverse via
elementary symmetric polynomials.

Precision model: matrices are plain numpy arrays.  ``double`` works in
complex128 and uses LAPACK.  ``extended`` stores entries as clongdouble
(x87 80-bit) and carries inversions at >= 106 effective significand bits
through error-free-split BLAS products, which on a single core is two
orders of magnitude faster than scalar long-double loops.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Precision:
    name: str
    complex_dtype: object
    real_dtype: object
    eps: float


DOUBLE = Precision("double", np.complex128, np.float64, float(np.finfo(np.float64).eps))
EXTENDED = Precision(
    "extended", np.clongdouble, np.longdouble, float(np.finfo(np.longdouble).eps)
)

_BY_NAME = {"double": DOUBLE, "extended": EXTENDED}
_active = DOUBLE


def active_precision() -> Precision:
    return _active


def set_precision(p) -> Precision:
    """Set the process-wide working precision ("double" or "extended")."""
    global _active
    if isinstance(p, str):
        if p not in _BY_NAME:
            raise ValueError(f"unknown precision {p!r}; expected 'double' or 'extended'")
        p = _BY_NAME[p]
    _active = p
    return p


@contextmanager
def precision(p):
    old = _active
    set_precision(p)
    try:
        yield _active
    finally:
        set_precision(old)


class SingularMatrixError(ValueError):
    """Raised when a matrix is singular to working precision."""


_EPS = {
    np.dtype(np.complex128): float(np.finfo(np.float64).eps),
    np.dtype(np.clongdouble): float(np.finfo(np.longdouble).eps),
    np.dtype(np.float64): float(np.finfo(np.float64).eps),
    np.dtype(np.longdouble): float(np.finfo(np.longdouble).eps),
}


def _as_square(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def frobenius(a):
    """Frobenius norm sqrt(sum |a_ij|^2), in the array's real dtype."""
    a = np.asarray(a)
    if np.iscomplexobj(a):
        s = (a.real * a.real).sum() + (a.imag * a.imag).sum()
    else:
        s = (a * a).sum()
    return np.sqrt(s)


def kronecker(a, b) -> np.ndarray:
    """Kronecker product, dtype-promoting block matrix (a_ij * b)."""
    return np.kron(np.asarray(a), np.asarray(b))


def _plain_lu_invert(a: np.ndarray) -> np.ndarray:
    """Generic in-place LU with partial pivoting; works for any complex dtype.

    Kept as the reference path: it is the only one that runs entirely in the
    array's own dtype, and it reports the offending pivot when the matrix is
    singular to working precision.
    """
    a = _as_square(a)
    n = a.shape[0]
    A = a.copy()
    B = np.eye(n, dtype=A.dtype)
    scale = np.abs(A).max()
    eps = _EPS.get(A.dtype, float(np.finfo(np.float64).eps))
    tiny = n * eps * float(scale)
    for k in range(n):
        col = np.abs(A[k:, k])
        j = int(np.argmax(col))
        pm = float(col[j])
        if pm <= tiny:
            raise SingularMatrixError(
                f"matrix is singular to working precision: pivot magnitude "
                f"{pm:.3e} at elimination column {k} (threshold {tiny:.3e})"
            )
        if j:
            A[[k, k + j], :] = A[[k + j, k], :]
            B[[k, k + j], :] = B[[k + j, k], :]
        A[k + 1 :, k] = A[k + 1 :, k] / A[k, k]
        if k + 1 < n:
            A[k + 1 :, k + 1 :] -= np.outer(A[k + 1 :, k], A[k, k + 1 :])
            B[k + 1 :, :] -= np.outer(A[k + 1 :, k], B[k, :])
    for k in range(n - 1, -1, -1):
        if k + 1 < n:
            B[k, :] -= A[k, k + 1 :].dot(B[k + 1 :, :])
        B[k, :] = B[k, :] / A[k, k]
    return B


# ---------------------------------------------------------------------------
# Extended-precision inversion: LAPACK seed + one Newton step whose residual
# I - A*X is computed exactly through error-free chunked BLAS products.


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split_chunks(m: np.ndarray, scale_exp: np.ndarray, t: int, k: int, axis: int):
    """Split complex double matrix into k chunk matrices of <= t mantissa bits.

    scale_exp holds per-row (axis=0) or per-column (axis=1) binary exponents;
    chunk i carries bits [e - i*t, e - (i+1)*t) of each entry, exactly.
    """
    if axis == 0:
        exp = scale_exp[:, None]
    else:
        exp = scale_exp[None, :]
    chunks = []
    rr, ii = np.array(m.real), np.array(m.imag)
    for i in range(1, k + 1):
        sh = i * t - exp
        qr = np.ldexp(np.round(np.ldexp(rr, sh)), -sh)
        qi = np.ldexp(np.round(np.ldexp(ii, sh)), -sh)
        rr = rr - qr
        ii = ii - qi
        chunks.append(qr + 1j * qi)
    return chunks


def _max_exponents(m: np.ndarray, axis: int) -> np.ndarray:
    mx = np.maximum(np.abs(m.real), np.abs(m.imag)).max(axis=1 - axis)
    mx = np.where(mx == 0, 1.0, mx)
    return np.ceil(np.log2(mx)).astype(np.int64)


def _gemm_exact_dd(a: np.ndarray, b: np.ndarray):
    """a @ b for complex128 inputs with ~2^-100 relative accuracy, as (hi, lo).

    Entries are split into mantissa chunks narrow enough that every chunk
    product accumulates exactly in a double-precision BLAS gemm; the partial
    products are then recombined with compensated summation.
    """
    n = a.shape[1]
    t = max((53 - int(np.ceil(np.log2(max(n, 2))))) // 2, 8)
    k = int(np.ceil(53.0 / t)) + 1
    ea = _max_exponents(a, axis=0)
    eb = _max_exponents(b, axis=1)
    ca = _split_chunks(a, ea, t, k, axis=0)
    cb = _split_chunks(b, eb, t, k, axis=1)
    hi = np.zeros_like(a, shape=(a.shape[0], b.shape[1]))
    lo = np.zeros_like(hi)
    for i in range(k):
        for j in range(k):
            if i + j > k:
                continue  # below 2^-(t*(k+1)) of the result scale
            p = ca[i] @ cb[j]
            hi, e = _two_sum(hi, p)
            lo = lo + e
    hi, e = _two_sum(hi, lo)
    return hi, e


def _invert_extended(a: np.ndarray) -> np.ndarray:
    """Inverse of a clongdouble matrix to better than extended accuracy.

    LAPACK double inverse, then Newton refinement X <- X + X(I - AX) with the
    residual computed in ~106-bit compensated arithmetic.  Falls back to the
    in-dtype LU when LAPACK flags singularity or refinement cannot contract.
    """
    a = _as_square(a)
    n = a.shape[0]
    ahi = a.astype(np.complex128)
    alo = (a - ahi).astype(np.complex128)
    try:
        x = np.linalg.inv(ahi)
    except np.linalg.LinAlgError:
        return _plain_lu_invert(a)
    eye = np.eye(n, dtype=np.complex128)
    xhi, xlo = x, None  # lo part appears only after the first correction
    for _ in range(2):
        p_hi, p_lo = _gemm_exact_dd(ahi, xhi)
        r_hi, e1 = _two_sum(eye, -p_hi)
        r_lo = e1 - p_lo - alo @ xhi
        if xlo is not None:
            r_lo = r_lo - ahi @ xlo
        rnorm = float(np.abs(frobenius(r_hi + r_lo)))
        if rnorm > 0.25 * np.sqrt(n):
            return _plain_lu_invert(a)  # LAPACK seed too inaccurate to refine
        dx = xhi @ r_hi
        dx_lo = xhi @ r_lo if xlo is None else xlo @ r_hi + xhi @ r_lo
        xhi, e = _two_sum(xhi, dx)
        xlo = (e if xlo is None else xlo + e) + dx_lo
        if rnorm < 1e-9 * n:
            break
    return xhi.astype(np.clongdouble) + xlo.astype(np.clongdouble)


def invert(a) -> np.ndarray:
    """Matrix inverse at the array's precision.

    complex128 goes through LAPACK; clongdouble through the compensated
    refinement path; real input is promoted to the active precision first.
    Singular matrices raise SingularMatrixError carrying the pivot magnitude.
    """
    a = _as_square(a)
    if not np.iscomplexobj(a):
        a = a.astype(active_precision().complex_dtype)
    if a.dtype == np.dtype(np.clongdouble):
        return _invert_extended(a)
    try:
        return np.linalg.inv(a)
    except np.linalg.LinAlgError:
        # rerun the reference LU purely to report which pivot collapsed
        return _plain_lu_invert(a)


def condition_number(a):
    """Frobenius condition number ||A|| * ||A^{-1}||."""
    a = _as_square(a)
    return frobenius(a) * frobenius(invert(a))


# ---------------------------------------------------------------------------
# Vandermonde matrices and the explicit symmetric-polynomial inverse.


def _check_distinct(roots: np.ndarray):
    n = roots.size
    scale = float(np.abs(roots).max()) if n else 0.0
    tol = 1e-12 * max(scale, 1e-300)
    for i in range(n - 1):
        d = np.abs(roots[i + 1 :] - roots[i])
        if d.size and float(d.min()) <= tol:
            j = i + 1 + int(np.argmin(d))
            raise ValueError(
                f"duplicate roots: |roots[{i}] - roots[{j}]| = {float(d.min()):.3e} "
                f"within relative tolerance 1e-12"
            )


def vandermonde(roots) -> np.ndarray:
    """Square Vandermonde matrix, row i = (1, r_i, r_i^2, ..., r_i^{n-1})."""
    roots = np.atleast_1d(np.asarray(roots))
    if roots.ndim != 1 or roots.size < 1:
        raise ValueError("roots must be a nonempty 1-D sequence")
    if not np.iscomplexobj(roots):
        roots = roots.astype(active_precision().complex_dtype)
    _check_distinct(roots)
    n = roots.size
    v = np.empty((n, n), dtype=roots.dtype)
    v[:, 0] = 1
    for j in range(1, n):
        v[:, j] = v[:, j - 1] * roots
    return v


def _leja_order(roots: np.ndarray) -> np.ndarray:
    # greedy max-distance (Leja) permutation: each step picks the root
    # farthest (in product of distances) from those already consumed
    n = roots.size
    order = np.empty(n, dtype=np.intp)
    taken = np.zeros(n, dtype=bool)
    gain = np.zeros(n)
    j = int(np.argmax(np.abs(roots)))
    for t in range(n):
        order[t] = j
        taken[j] = True
        with np.errstate(divide="ignore"):
            gain += np.log(np.abs(roots - roots[j]).astype(np.float64))
        gain[taken] = -np.inf
        if t + 1 < n:
            j = int(np.argmax(gain))
    return order


def vandermonde_inverse_explicit(roots) -> np.ndarray:
    """Inverse Vandermonde via elementary symmetric polynomials.

    Column j holds the coefficients of the Lagrange basis polynomial
    L_j = prod_{k != j} (x - r_k) / (r_j - r_k); the numerators come from one
    synthetic division of P(x) = prod_k (x - r_k) per column, so the whole
    inverse costs O(n^2) instead of O(n^3).
    """
    roots = np.atleast_1d(np.asarray(roots))
    if roots.ndim != 1 or roots.size < 1:
        raise ValueError("roots must be a nonempty 1-D sequence")
    if not np.iscomplexobj(roots):
        roots = roots.astype(active_precision().complex_dtype)
    _check_distinct(roots)
    n = roots.size
    # P(x) = prod (x - r_k), coefficients ascending, built incrementally.
    # The insertion order matters in floating point: consuming unit-circle
    # roots along an arc lets prefix-product coefficients grow like e^{ct}
    # (every significant digit is gone by a few hundred roots), while the
    # Leja order keeps prefixes spread out and their coefficients small.
    p = np.zeros(n + 1, dtype=roots.dtype)
    p[0] = 1
    deg = 0
    for z in roots[_leja_order(roots)]:
        nxt = np.zeros(n + 1, dtype=roots.dtype)
        nxt[1 : deg + 2] = p[: deg + 1]
        nxt[: deg + 1] -= z * p[: deg + 1]
        p = nxt
        deg += 1
    # synthetic division P / (x - r_j), vectorized across all columns j
    q = np.empty((n, n), dtype=roots.dtype)
    q[n - 1, :] = p[n]
    for i in range(n - 2, -1, -1):
        q[i, :] = p[i + 1] + roots * q[i + 1, :]
    # denominators D_j = Q_j(r_j) = prod_{k != j} (r_j - r_k), by Horner
    d = q[n - 1, :].copy()
    for i in range(n - 2, -1, -1):
        d = d * roots + q[i, :]
    return q / d[None, :]

"""Exact rational kernels of matrices, fast enough for sweep workloads.

Two routes to the same answer:

* `bareiss_kernel` - fraction-free Gaussian elimination over the integers with
  exact back-substitution.  Slow but elementary; the reference implementation
  and final fallback.

* the modular route - row reduce the integer matrix mod a 31-bit prime with
  vectorized numpy, lift the standard kernel basis back to rationals, then
  verify A v = 0 in exact integer arithmetic.  Soundness does not rest on the
  lift: a mod-p reduction of the exact matrix can only enlarge the kernel
  (an exact dependency survives reduction, so null_Q <= null_p), and the
  verified vectors are echelon-patterned hence independent, so exhibiting
  null_p exact kernel vectors pins the dimension.  Any failure escalates to
  more primes via CRT and finally to Bareiss.

Kernel bases are returned as primitive integer vectors (content 1, first
nonzero entry positive) in the standard free-column order, so both routes
produce byte-identical output.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polyring import Scalar, _frac

# Largest primes below 2**31; products of two entries stay below 2**63 during
# elimination, keeping int64 arithmetic overflow-free.
PRIMES: tuple[int, ...] = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
    2147483549, 2147483543, 2147483497, 2147483489, 2147483477,
)

_INT64_SAFE = 2**62


def rref_mod(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an int64 matrix mod p, with pivot columns."""
    a = np.mod(matrix, p).astype(np.int64, copy=True)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def kernel_mod(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int], list[int]]:
    """Standard kernel basis mod p: columns of the result, one per free column."""
    rref, pivots = rref_mod(matrix, p)
    ncols = matrix.shape[1]
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
    if pivots and free:
        basis[pivots, :] = (-rref[:, free]) % p
    return basis, pivots, free


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    inv = pow(m1 % m2, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruction(a: int, modulus: int) -> tuple[int, int] | None:
    """num/den = a (mod modulus) with |num|, den <= sqrt(modulus/2), or None."""
    bound = math.isqrt(modulus // 2)
    r0, r1 = modulus, a % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    num, den = (r1, s1) if s1 > 0 else (-r1, -s1)
    if den == 0 or den > bound or math.gcd(num, den) != 1:
        return None
    if (a * den - num) % modulus != 0:
        return None
    return num, den


def lift_residue_vector(residues: Sequence[int], modulus: int) -> list[Fraction] | None:
    """Lift a residue vector to rationals, sharing denominators across entries.

    Entries that are small balanced residues lift directly; the first entry
    that is not fixes a denominator via rational reconstruction, and later
    entries retry with the accumulated denominator before reconstructing.
    """
    bound = math.isqrt(modulus // 2)
    half = modulus // 2
    den = 1
    out: list[Fraction] = []
    for r in residues:
        v = (r * den) % modulus
        bal = v if v <= half else v - modulus
        if abs(bal) <= bound:
            out.append(Fraction(bal, den))
            continue
        rec = rational_reconstruction(r % modulus, modulus)
        if rec is None:
            return None
        num, d = rec
        out.append(Fraction(num, d))
        den = den * d // math.gcd(den, d)
        if den > bound:
            return None
    return out


def primitive_integer_vector(vec: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to coprime integers with positive first nonzero."""
    fracs = [_frac(v) for v in vec]
    denom = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = [int(f * denom) for f in fracs]
    g = math.gcd(*ints) if any(ints) else 1
    if g == 0:
        g = 1
    ints = [v // g for v in ints]
    lead = next((v for v in ints if v), 0)
    if lead < 0:
        ints = [-v for v in ints]
    return ints


def _exact_matvec_is_zero(matrix_obj: np.ndarray, max_abs: int, vec: Sequence[int]) -> bool:
    """A v == 0 over the integers, using int64 when a bound proves it safe."""
    if matrix_obj.size == 0:
        return True
    vmax = max((abs(v) for v in vec), default=0)
    ncols = matrix_obj.shape[1]
    if vmax and max_abs and max_abs * vmax * ncols < _INT64_SAFE:
        prod = matrix_obj.astype(np.int64) @ np.array(vec, dtype=np.int64)
        return not prod.any()
    v = np.array(vec, dtype=object)
    prod = matrix_obj.astype(object) @ v
    return all(x == 0 for x in prod)


def bareiss_kernel(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Kernel basis via fraction-free elimination; primitive integer vectors."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if n == 0:
        return []
    a = [[int(v) for v in row] for row in matrix]
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        lead = a[r][c]
        row_r = a[r]
        for i in range(r + 1, m):
            head = a[i][c]
            row_i = a[i]
            for j in range(c + 1, n):
                row_i[j] = (lead * row_i[j] - head * row_r[j]) // prev
            row_i[c] = 0
        prev = a[r][c]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in set(pivots)]
    basis: list[list[int]] = []
    for f in free:
        vec: list[Fraction] = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            accum = sum((Fraction(a[i][j]) * vec[j] for j in range(c + 1, n) if a[i][j]), Fraction(0))
            vec[c] = -accum / a[i][c]
        basis.append(primitive_integer_vector(vec))
    return basis


def kernel_integer_certified(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Certified rational kernel of an integer matrix, as primitive vectors.

    Tries one prime, then a three-prime CRT lift, then Bareiss.  Every returned
    basis is exactly verified regardless of which route produced it.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [[1 if j == f else 0 for j in range(n)] for f in range(n)]
    max_abs = max((abs(int(v)) for row in matrix for v in row), default=0)
    a_obj = np.array([[int(v) for v in row] for row in matrix], dtype=object)
    for prime_count in (1, 3):
        primes = PRIMES[:prime_count]
        residue_mats = []
        structure = None
        ok = True
        for p in primes:
            ap = np.array([[int(v) % p for v in row] for row in matrix], dtype=np.int64)
            basis_p, pivots, free = kernel_mod(ap, p)
            if structure is None:
                structure = (tuple(pivots), tuple(free))
            elif structure != (tuple(pivots), tuple(free)):
                ok = False
                break
            residue_mats.append(basis_p)
        if not ok or structure is None:
            continue
        nullity = residue_mats[0].shape[1]
        if nullity == 0:
            return []
        combined = residue_mats[0].astype(object)
        modulus = primes[0]
        for p, mat in zip(primes[1:], residue_mats[1:]):
            merged = np.empty_like(combined)
            for i in range(combined.shape[0]):
                for j in range(combined.shape[1]):
                    merged[i, j], _ = crt_pair(int(combined[i, j]), modulus, int(mat[i, j]), p)
            combined = merged
            modulus *= p
        vectors: list[list[int]] = []
        for j in range(nullity):
            lifted = lift_residue_vector([int(v) for v in combined[:, j]], modulus)
            if lifted is None:
                ok = False
                break
            vec = primitive_integer_vector(lifted)
            if not _exact_matvec_is_zero(a_obj, max_abs, vec):
                ok = False
                break
            vectors.append(vec)
        if ok:
            return vectors
    return bareiss_kernel([[int(v) for v in row] for row in matrix])


def rational_kernel(matrix: Sequence[Sequence[Scalar]]) -> list[list[Fraction]]:
    """Basis of the rational kernel of a matrix with rational entries.

    Returns primitive integer vectors (as Fractions), one per free column of
    the reduced form, in free-column order; [] when the kernel is trivial.
    """
    rows = [[_frac(v) for v in row] for row in matrix]
    int_rows = []
    for row in rows:
        denom = math.lcm(*(v.denominator for v in row)) if row else 1
        int_rows.append([int(v * denom) for v in row])
    basis = kernel_integer_certified(int_rows)
    return [[Fraction(v) for v in vec] for vec in basis]

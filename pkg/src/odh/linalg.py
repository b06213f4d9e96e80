"""Exact linear algebra over the rationals for ansatz systems.

Two complementary paths provide the same guarantees at different scales:

* **Small dense path** (:class:`RatMatrix`): fraction-free Bareiss
  elimination over integers (after clearing denominators row by row),
  followed by exact back-substitution.  Yields ranks and the canonical
  reduced-echelon kernel basis (free coordinates carry the identity
  pattern).  Used for matrices up to a few hundred rows/columns.

* **Large certified path** (:func:`kernel_decide`): for the homogeneous
  systems produced by ansatz searches (thousands of columns, big integer
  entries).  A fixed deterministic schedule of word-size primes drives
  modular Gauss–Jordan elimination:

  - full column rank modulo a prime certifies that the rational kernel is
    trivial (a nonzero minor modulo p is nonzero over the rationals);
  - a candidate kernel vector is reconstructed exactly by p-adic (Dixon)
    lifting on the pivot submatrix and then verified against every original
    row in exact big-integer arithmetic, which certifies non-triviality.

  Both outcomes are therefore exact; the prime schedule only affects how
  fast a certificate is found, never its validity.  Determinism of the
  schedule makes all derived outputs reproducible.

All matrices here are honest values (no mutation after construction), and
every public function is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "RatMatrix",
    "nullspace",
    "rank",
    "field_rref",
    "field_nullspace",
    "SparseSystem",
    "kernel_decide",
    "kernel_basis",
    "rows_to_int_system",
    "KernelReport",
    "LinalgError",
    "PRIME_SCHEDULE",
]

#: Deterministic schedule of elimination primes (all < 2**23 so products of
#: two reduced residues fit comfortably in int64 during vectorized updates).
PRIME_SCHEDULE: tuple[int, ...] = (
    8388593, 8388587, 8388581, 8388571, 8388547,
    8388539, 8388473, 8388461, 8388451, 8388449,
    8388439, 8388427, 8388421, 8388409, 8388377,
    8388371, 8388319, 8388301, 8388287, 8388283,
    8388277, 8388239, 8388209, 8388187, 8388113,
)


class LinalgError(RuntimeError):
    """Raised when no prime in the schedule yields a certificate (which would
    require the input to defeat 25 independent word-size primes)."""


# ----------------------------------------------------------------------
# small dense path: exact rationals
# ----------------------------------------------------------------------


class RatMatrix:
    """Dense row-major matrix of exact rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Fraction]):
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match dimensions")
        self.rows = rows
        self.cols = cols
        self.entries = [Fraction(e) for e in entries]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Fraction]]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat: list[Fraction] = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(Fraction(v) for v in row)
        return RatMatrix(r, c, flat)

    @staticmethod
    def zero(rows: int, cols: int) -> "RatMatrix":
        return RatMatrix(rows, cols, [Fraction(0)] * (rows * cols))

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        m = RatMatrix.zero(n, n)
        for i in range(n):
            m.entries[i * n + i] = Fraction(1)
        return m

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def mul_vec(self, v: Sequence[Fraction]) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append(sum((self.entries[base + j] * v[j] for j in range(self.cols)), Fraction(0)))
        return out

    def _integer_rows(self) -> list[list[int]]:
        """Rows scaled to integers (per-row lcm of denominators)."""
        out = []
        for i in range(self.rows):
            row = self.row(i)
            lcm = 1
            for v in row:
                d = v.denominator
                lcm = lcm * d // _int_gcd(lcm, d)
            out.append([int(v * lcm) for v in row])
        return out


def _bareiss_echelon(rows: list[list[int]], cols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Bareiss upper echelon form of integer rows.

    Returns the echelon rows (one per pivot, in pivot-column order) and the
    pivot column indices.
    """
    work = [list(r) for r in rows]
    m = len(work)
    pivots: list[int] = []
    ech: list[list[int]] = []
    prev = 1
    top = 0
    for j in range(cols):
        # find pivot row
        piv = None
        for i in range(top, m):
            if work[i][j]:
                piv = i
                break
        if piv is None:
            continue
        work[top], work[piv] = work[piv], work[top]
        p = work[top][j]
        for i in range(top + 1, m):
            q = work[i][j]
            row_i = work[i]
            row_t = work[top]
            for l in range(j, cols):
                row_i[l] = (p * row_i[l] - q * row_t[l]) // prev
        prev = p
        pivots.append(j)
        ech.append(work[top])
        top += 1
        if top == m:
            break
    return ech, pivots


def rank(M: RatMatrix) -> int:
    """Exact rank via fraction-free elimination."""
    if M.rows == 0 or M.cols == 0:
        return 0
    _, pivots = _bareiss_echelon(M._integer_rows(), M.cols)
    return len(pivots)


def nullspace(M: RatMatrix) -> list[list[Fraction]]:
    """Canonical basis of the right kernel.

    One basis vector per non-pivot (free) column, carrying 1 in its own
    coordinate and 0 in every other free coordinate — the reduced-echelon
    identity pattern, so identical matrices always yield identical bases.

    Example::

        >>> nullspace(RatMatrix(1, 2, [Fraction(1), Fraction(1)]))
        [[Fraction(-1, 1), Fraction(1, 1)]]
    """
    if M.cols == 0:
        return []
    if M.rows == 0:
        ech: list[list[int]] = []
        pivots: list[int] = []
    else:
        ech, pivots = _bareiss_echelon(M._integer_rows(), M.cols)
    return _kernel_from_echelon(ech, pivots, M.cols)


def _kernel_from_echelon(
    ech: Sequence[Sequence[int]], pivots: Sequence[int], cols: int
) -> list[list[Fraction]]:
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        # back-substitute pivot coordinates from the bottom up
        for t in range(len(pivots) - 1, -1, -1):
            row = ech[t]
            j = pivots[t]
            s = sum((Fraction(row[l]) * v[l] for l in range(j + 1, cols) if v[l]), Fraction(0))
            v[j] = -s / row[j]
        basis.append(v)
    return basis


# ----------------------------------------------------------------------
# generic field elimination (used with RatFun entries by the Ore layer)
# ----------------------------------------------------------------------


def field_rref(rows: list[list], zero, one) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over an arbitrary field.

    Entries must support ``+ - * /`` and truthiness (nonzero test).  Returns
    (rref rows, pivot column indices).  Pure: input rows are not mutated.
    """
    work = [list(r) for r in rows]
    m = len(work)
    cols = len(work[0]) if m else 0
    pivots: list[int] = []
    top = 0
    for j in range(cols):
        piv = None
        for i in range(top, m):
            if work[i][j]:
                piv = i
                break
        if piv is None:
            continue
        work[top], work[piv] = work[piv], work[top]
        inv = one / work[top][j]
        work[top] = [v * inv for v in work[top]]
        for i in range(m):
            if i != top and work[i][j]:
                c = work[i][j]
                work[i] = [a - c * b for a, b in zip(work[i], work[top])]
        pivots.append(j)
        top += 1
        if top == m:
            break
    return work[:top], pivots


def field_nullspace(rows: list[list], zero, one) -> list[list]:
    """Canonical kernel basis over an arbitrary field (identity pattern on
    free coordinates), built from :func:`field_rref`."""
    m = len(rows)
    cols = len(rows[0]) if m else 0
    rref, pivots = field_rref(rows, zero, one) if m else ([], [])
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for t, j in enumerate(pivots):
            v[j] = zero - rref[t][f]
        basis.append(v)
    return basis


# ----------------------------------------------------------------------
# large certified path
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SparseSystem:
    """Homogeneous integer system: one dict per row mapping column -> value."""

    rows: tuple[dict, ...]
    ncols: int

    @staticmethod
    def from_rows(rows: Sequence[dict], ncols: int) -> "SparseSystem":
        clean = tuple({int(c): int(v) for c, v in r.items() if v} for r in rows)
        return SparseSystem(clean, ncols)


@dataclass(frozen=True)
class KernelReport:
    """Outcome of :func:`kernel_decide`.

    ``has_kernel`` answers the existence question.  For a certified absence,
    some schedule prime witnessed full column rank.  For a certified
    presence, ``vector`` holds an exact integer kernel vector verified
    against every row (content-reduced, first nonzero coordinate positive).
    Probe-mode presence reports carry ``certified=False`` and no vector.
    """

    has_kernel: bool
    vector: Optional[tuple[int, ...]]
    prime_used: int
    certified: bool


def _mod_matrix(sys: SparseSystem, p: int) -> np.ndarray:
    M = np.zeros((len(sys.rows), sys.ncols), dtype=np.int64)
    for i, row in enumerate(sys.rows):
        for j, v in row.items():
            M[i, j] = v % p
    return M


def _gauss_jordan_mod(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int], list[int]]:
    """In-place Gauss–Jordan elimination mod p.

    Returns (matrix in reduced echelon layout, pivot column list, pivot row
    origin list).  Row ``t`` of the result is the reduced row whose pivot is
    ``pivots[t]``; ``row_origin[t]`` is the input row index that supplied it.
    """
    m, n = M.shape
    origin = list(range(m))
    pivots: list[int] = []
    row_origin: list[int] = []
    top = 0
    for j in range(n):
        if top == m:
            break
        col = M[top:, j]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = top + int(nz[0])
        if piv != top:
            M[[top, piv]] = M[[piv, top]]
            origin[top], origin[piv] = origin[piv], origin[top]
        inv = pow(int(M[top, j]), p - 2, p)
        M[top] = (M[top] * inv) % p
        col_vals = M[:, j].copy()
        col_vals[top] = 0
        nzrows = np.nonzero(col_vals)[0]
        if nzrows.size:
            M[nzrows] = (M[nzrows] - np.outer(col_vals[nzrows], M[top])) % p
        pivots.append(j)
        row_origin.append(origin[top])
        top += 1
    return M, pivots, row_origin


# base-2**26 limb decomposition keeps exact big-int x int64 matvecs in numpy
_LIMB_BITS = 26
_LIMB_BASE = 1 << _LIMB_BITS


def _to_limbs(values: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Decompose signed big ints into (limbs[n_limbs, n], signs[n])."""
    signs = np.array([1 if v >= 0 else -1 for v in values], dtype=np.int64)
    mags = [abs(int(v)) for v in values]
    out = []
    while any(mags):
        out.append(np.array([m & (_LIMB_BASE - 1) for m in mags], dtype=np.int64))
        mags = [m >> _LIMB_BITS for m in mags]
    if not out:
        out.append(np.zeros(len(values), dtype=np.int64))
    return np.stack(out), signs


class _LimbMatrix:
    """Big-integer matrix stored as signed base-2**26 limb planes, supporting
    exact matrix-vector products with small (word-size) integer vectors."""

    def __init__(self, rows: Sequence[Sequence[int]]):
        m = len(rows)
        n = len(rows[0]) if m else 0
        flat = [int(v) for row in rows for v in row]
        limbs, signs = _to_limbs(flat)
        # store sign directly inside each limb plane
        self.planes = [
            (pl * signs).reshape(m, n) for pl in limbs
        ]
        self.shape = (m, n)

    def matvec(self, x: np.ndarray) -> list[int]:
        """Exact product with an int64 vector of entries |x_i| < 2**25."""
        m, _ = self.shape
        total = [0] * m
        shift = 0
        for plane in self.planes:
            part = plane @ x  # exact in int64: |entries| < 2**26, |x| < 2**25, n < 2**12
            for i in range(m):
                total[i] += int(part[i]) << shift
            shift += _LIMB_BITS
        return total


def _rational_reconstruct(a: int, m: int) -> Optional[tuple[int, int]]:
    """Reconstruct a rational n/d with |n|, d <= sqrt(m/2) from a mod m."""
    from math import isqrt

    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    d = abs(s1)
    n = r1 if s1 >= 0 else -r1
    if d == 0 or _int_gcd(abs(n), d) != 1:
        return None
    if d > bound + 1:
        return None
    return n, d


def _hadamard_bits(B_rows: list[list[int]], rhs: list[int]) -> int:
    """Upper bound on the bit size of numerators/denominators of the Cramer
    solution of B u = rhs: log2 of the Hadamard bound over rows augmented
    with their right-hand sides (every Cramer determinant is a minor-with-
    replacement whose rows are subvectors of the augmented rows)."""
    import math

    total = 0.0
    for row, b in zip(B_rows, rhs):
        s = sum(v * v for v in row) + b * b
        total += math.log2(s) / 2 if s else 0.0
    return int(total) + 2


def _recombine_digits(digits: list[np.ndarray], p: int, n: int) -> list[int]:
    """Combine p-adic digits (least significant first) into residues mod p^s
    by divide and conquer."""

    def rec(lo: int, hi: int) -> tuple[list[int], int]:
        if hi - lo == 1:
            return [int(v) for v in digits[lo]], p
        mid = (lo + hi) // 2
        low_vals, low_mod = rec(lo, mid)
        high_vals, high_mod = rec(mid, hi)
        return (
            [lv + low_mod * hv for lv, hv in zip(low_vals, high_vals)],
            low_mod * high_mod,
        )

    vals, _ = rec(0, len(digits))
    return vals


def _dixon_candidates(B_rows: list[list[int]], rhs: list[int], p: int):
    """Yield exact rational candidate solutions of B u = rhs at geometrically
    growing p-adic precisions, ending at the Hadamard-certain precision.

    Yields nothing if B is singular mod p (caller should try another prime).
    The final yielded candidate is guaranteed correct when B is nonsingular
    over the rationals; earlier ones are opportunistic early exits that the
    caller must verify.
    """
    n = len(B_rows)
    if n == 0:
        yield []
        return
    Bp = np.array([[v % p for v in row] for row in B_rows], dtype=np.int64)
    aug = np.concatenate([Bp, np.eye(n, dtype=np.int64)], axis=1)
    red, pivots, _ = _gauss_jordan_mod(aug, p)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        return
    Binv = np.ascontiguousarray(red[:n, n:])
    B_limbs = _LimbMatrix(B_rows)

    # enough digits that p^s exceeds twice the square of the Hadamard bound
    cap = max(8, (2 * _hadamard_bits(B_rows, rhs) + 4) // 23 + 2)
    checkpoints = []
    c = 256
    while c < cap:
        checkpoints.append(c)
        c *= 4
    checkpoints.append(cap)

    digits: list[np.ndarray] = []
    r = [int(v) for v in rhs]
    exact = False
    for step in range(cap):
        if not any(r):
            exact = True
            break
        rp = np.array([v % p for v in r], dtype=np.int64)
        x = (Binv @ rp) % p
        digits.append(x)
        bx = B_limbs.matvec(x)
        r = [(ri - bi) // p for ri, bi in zip(r, bx)]
        if step + 1 in checkpoints or step + 1 == cap:
            cand = _reconstruct_vector(digits, p, n)
            if cand is not None:
                yield cand
    if exact:
        if not digits:
            yield [Fraction(0)] * n
            return
        # residual hit zero: the digit expansion IS the (nonnegative integer)
        # solution, no balancing needed
        vals = _recombine_digits(digits, p, n)
        yield [Fraction(v) for v in vals]


def _reconstruct_vector(digits: list[np.ndarray], p: int, n: int) -> Optional[list[Fraction]]:
    """Vector rational reconstruction with a shared running denominator.

    Coordinates of a kernel vector share the pivot determinant as a common
    denominator, so after one extended-Euclid reconstruction the remaining
    coordinates are usually recovered by a single modular multiplication
    each; the expensive Euclid runs only when the running denominator must
    grow.  Any false accept is caught by the caller's exact verification.
    """
    from math import isqrt

    vals = _recombine_digits(digits, p, n)
    mod = p ** len(digits)
    bound = isqrt(mod // 2)
    half = mod // 2
    D = 1
    out: list[Fraction] = []
    for v in vals:
        w = (v * D) % mod
        wb = w - mod if w > half else w
        if abs(wb) <= bound:
            out.append(Fraction(wb, D))
            continue
        rec = _rational_reconstruct(w, mod)
        if rec is None:
            return None
        nn, dd = rec
        if dd == 0:
            return None
        D *= dd
        out.append(Fraction(nn, D))
    return out


def _normalize_int_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    den_lcm = 1
    for q in v:
        d = q.denominator
        den_lcm = den_lcm * d // _int_gcd(den_lcm, d)
    ints = [int(q * den_lcm) for q in v]
    g = 0
    for q in ints:
        g = _int_gcd(g, abs(q))
    if g > 1:
        ints = [q // g for q in ints]
    for q in ints:
        if q:
            if q < 0:
                ints = [-w for w in ints]
            break
    return tuple(ints)


def _verify_kernel(sys: SparseSystem, v: Sequence[int]) -> bool:
    for row in sys.rows:
        s = 0
        for j, c in row.items():
            s += c * v[j]
        if s:
            return False
    return True


def kernel_decide(sys: SparseSystem, probe: bool = False) -> KernelReport:
    """Decide whether the integer system has a nontrivial rational kernel.

    Certified mode (default): the answer is exact.  Absence is witnessed by
    full column rank modulo a schedule prime; presence by an exact integer
    kernel vector verified against every row.

    Probe mode: absence stays certified, but modular rank deficiency is
    reported as presence *without* extracting a vector (``certified=False``).
    Searches use probes for interior bisection steps and re-certify final
    cells exactly.
    """
    if sys.ncols == 0:
        return KernelReport(False, None, PRIME_SCHEDULE[0], True)
    if not sys.rows or all(not r for r in sys.rows):
        v = tuple([1] + [0] * (sys.ncols - 1))
        return KernelReport(True, v, PRIME_SCHEDULE[0], True)
    for p in PRIME_SCHEDULE:
        M = _mod_matrix(sys, p)
        red, pivots, row_origin = _gauss_jordan_mod(M, p)
        if len(pivots) == sys.ncols:
            return KernelReport(False, None, p, True)
        pivot_set = set(pivots)
        f = next(j for j in range(sys.ncols) if j not in pivot_set)
        if probe:
            return KernelReport(True, None, p, False)
        # exact extraction: solve the pivot square system B u = -col_f,
        # then place 1 in coordinate f (the canonical vector for the modular
        # pivot structure) and verify against the entire original system
        B_rows = [[sys.rows[i].get(j, 0) for j in pivots] for i in row_origin]
        rhs = [-sys.rows[i].get(f, 0) for i in row_origin]
        for u in _dixon_candidates(B_rows, rhs, p):
            full = [Fraction(0)] * sys.ncols
            full[f] = Fraction(1)
            for idx, j in enumerate(pivots):
                full[j] = u[idx]
            vec = _normalize_int_vector(full)
            if any(vec) and _verify_kernel(sys, vec):
                return KernelReport(True, vec, p, True)
        # wrong modular pivot structure for this prime; try the next one
    raise LinalgError("prime schedule exhausted without a certificate")


def kernel_basis(sys: SparseSystem) -> list[tuple[int, ...]]:
    """Certified basis of the rational kernel, as coprime integer vectors.

    For every free column of the modular echelon form the canonical kernel
    vector (one in the free coordinate, zero in the other free coordinates,
    pivot coordinates solved by exact p-adic lifting) is extracted and
    verified against all original rows.  The verified vectors are linearly
    independent because each is supported on a distinct free coordinate,
    and reduction modulo p cannot increase matrix rank, so the modular
    kernel dimension bounds the rational one from above:

        #verified vectors = dim ker (mod p) >= dim ker (over Q)

    Equality forces the verified vectors to span, so they form a basis and
    the rational kernel is exactly their span.  An empty result certifies a
    trivial kernel.  When a lift fails to verify (the prime's pivot
    structure disagrees with the rational one) the whole basis is retried
    under the next schedule prime.
    """
    if sys.ncols == 0:
        return []
    if not sys.rows or all(not r for r in sys.rows):
        basis = []
        for f in range(sys.ncols):
            v = [0] * sys.ncols
            v[f] = 1
            basis.append(tuple(v))
        return basis
    for p in PRIME_SCHEDULE:
        M = _mod_matrix(sys, p)
        red, pivots, row_origin = _gauss_jordan_mod(M, p)
        if len(pivots) == sys.ncols:
            return []
        pivot_set = set(pivots)
        free = [j for j in range(sys.ncols) if j not in pivot_set]
        B_rows = [[sys.rows[i].get(j, 0) for j in pivots] for i in row_origin]
        basis = []
        for f in free:
            rhs = [-sys.rows[i].get(f, 0) for i in row_origin]
            found = None
            for u in _dixon_candidates(B_rows, rhs, p):
                full = [Fraction(0)] * sys.ncols
                full[f] = Fraction(1)
                for idx, j in enumerate(pivots):
                    full[j] = u[idx]
                vec = _normalize_int_vector(full)
                if any(vec) and _verify_kernel(sys, vec):
                    found = vec
                    break
            if found is None:
                break
            basis.append(found)
        else:
            return basis
        # wrong modular pivot structure for this prime; try the next one
    raise LinalgError("prime schedule exhausted without a certificate")


def rows_to_int_system(rows: Sequence[dict], ncols: int) -> SparseSystem:
    """Scale each Fraction-valued row to integers (the kernel is unchanged
    by nonzero row scaling) and drop empty rows."""
    from math import lcm

    int_rows = []
    for row in rows:
        entries = {j: v for j, v in row.items() if v}
        if not entries:
            continue
        scale = lcm(*(v.denominator for v in entries.values()))
        int_rows.append({j: int(v * scale) for j, v in entries.items()})
    return SparseSystem(rows=tuple(int_rows), ncols=ncols)

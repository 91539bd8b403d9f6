"""Exact integer partition engine.

Partitions are plain tuples of weakly decreasing positive ints; the empty
tuple is the partition of 0.  Everything here is exact integer arithmetic:
enumeration (capped), bounded-part counting DPs, Durfee rectangle
decomposition at an integer offset, truncated generating-function series,
and the bijection sending a finite occupancy window to the partition of its
total left displacement.
"""

from dataclasses import dataclass


class SizeLimit(Exception):
    """Raised when an exhaustive computation is asked beyond its cap."""


ENUMERATION_CAP = 60


def as_partition(parts):
    """Validate and canonicalize to a tuple; rejects non-monotone input."""
    p = tuple(int(x) for x in parts)
    for i in range(len(p) - 1):
        if p[i] < p[i + 1]:
            raise ValueError(f"parts must be weakly decreasing, got {p}")
    if p and p[-1] < 1:
        raise ValueError(f"parts must be positive, got {p}")
    return p


def enumerate_partitions(n):
    """All partitions of n in lexicographically decreasing order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > ENUMERATION_CAP:
        raise SizeLimit(f"enumeration capped at n={ENUMERATION_CAP}, got {n}")
    out = []

    def rec(remaining, cap, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(cap, remaining), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def count_partitions(n):
    """p(n) by the Euler product DP."""
    return series_partition_gf(n).coeff(n)


def count_bounded(n, max_parts, max_size):
    """Partitions of n into at most max_parts parts, each at most max_size.

    DP over allowed part sizes s = 1..max_size with
    B_s(v, j) = B_{s-1}(v, j) + B_s(v - s, j - 1): either no part equals s,
    or remove one copy of s (spending one of the j part slots).
    """
    if n < 0:
        return 0
    if n == 0:
        return 1
    # B[v][j], updated in increasing v so the second term sees the same s
    B = [[1 if v == 0 else 0 for _ in range(max_parts + 1)] for v in range(n + 1)]
    for s in range(1, max_size + 1):
        for v in range(s, n + 1):
            for j in range(1, max_parts + 1):
                B[v][j] += B[v - s][j - 1]
    return B[n][max_parts]


@dataclass(frozen=True)
class DurfeeDecomposition:
    """Maximal (n_offset+k) x k rectangle of a partition plus the leftover
    partitions to its right and below; zero parts are dropped from right."""

    n_offset: int
    k: int
    right: tuple
    below: tuple

    def reassemble(self):
        side = self.n_offset + self.k
        padded = list(self.right) + [0] * (self.k - len(self.right))
        # side 0 rows with no right part carry nothing
        parts = [r + side for r in padded if r + side > 0] + list(self.below)
        return as_partition(parts)


def durfee_decompose(p, n_offset):
    """Decompose around the maximal rectangle of side lengths n_offset+k by k.

    k is the unique index >= max(-n_offset, 0) with lam_k >= n_offset+k and
    lam_{k+1} <= n_offset+k, reading lam_0 = +inf and lam_i = 0 past the last
    part.
    """
    lam = as_partition(p)
    ell = len(lam)

    def lam_at(i):
        if i == 0:
            return float("inf")
        return lam[i - 1] if i <= ell else 0

    k_lo = max(-n_offset, 0)
    k_hi = max(ell, -n_offset) + 1
    hits = [
        k
        for k in range(k_lo, k_hi + 1)
        if lam_at(k) >= n_offset + k and lam_at(k + 1) <= n_offset + k
    ]
    assert len(hits) == 1, f"rectangle index not unique: {hits} for {lam}, n={n_offset}"
    k = hits[0]
    side = n_offset + k
    right = tuple(lam[i] - side for i in range(min(k, ell)) if lam[i] - side > 0)
    below = lam[k:]
    return DurfeeDecomposition(n_offset=n_offset, k=k, right=right, below=below)


def count_distinct_exactly_k(n, k):
    """Partitions of n into exactly k distinct positive parts.

    Recursion on subtracting 1 from every part: the smallest part either
    stays positive (still k parts) or was 1 and vanishes (k-1 parts).
    """
    if k < 0 or n < 0:
        return 0
    table = {}

    def rec(v, j):
        if j == 0:
            return 1 if v == 0 else 0
        if v < j * (j + 1) // 2:
            return 0
        key = (v, j)
        if key not in table:
            table[key] = rec(v - j, j) + rec(v - j, j - 1)
        return table[key]

    return rec(n, k)


def count_distinct_bounded(n, k, m):
    """Partitions of n into exactly k distinct parts, each in 1..m.

    Independent DP on whether the part m is used; deliberately not derived
    from the q-binomial polynomial so the two can cross-check each other.
    """
    if k < 0 or n < 0 or m < 0:
        return 0
    table = {}

    def rec(v, j, top):
        if j == 0:
            return 1 if v == 0 else 0
        if top < j or v < j * (j + 1) // 2:
            return 0
        key = (v, j, top)
        if key not in table:
            use = rec(v - top, j - 1, top - 1) if v >= top else 0
            table[key] = rec(v, j, top - 1) + use
        return table[key]

    return rec(n, k, m)


class IntSeries:
    """Truncated power series in q with exact integer coefficients.

    Arithmetic is exact for powers <= cutoff and drops everything above.
    """

    __slots__ = ("coeffs", "cutoff")

    def __init__(self, coeffs, cutoff):
        cs = list(coeffs)[: cutoff + 1]
        cs += [0] * (cutoff + 1 - len(cs))
        self.coeffs = [int(c) for c in cs]
        self.cutoff = cutoff

    def coeff(self, i):
        if i < 0:
            return 0
        if i > self.cutoff:
            raise IndexError(f"coefficient {i} beyond cutoff {self.cutoff}")
        return self.coeffs[i]

    def __add__(self, other):
        if self.cutoff != other.cutoff:
            raise ValueError("cutoff mismatch")
        return IntSeries(
            [a + b for a, b in zip(self.coeffs, other.coeffs)], self.cutoff
        )

    def __mul__(self, other):
        if self.cutoff != other.cutoff:
            raise ValueError("cutoff mismatch")
        N = self.cutoff
        out = [0] * (N + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(0, N - i + 1):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return IntSeries(out, N)

    def shift(self, k):
        """Multiply by q^k, dropping overflow past the cutoff."""
        return IntSeries([0] * k + self.coeffs, self.cutoff)

    def __eq__(self, other):
        return (
            isinstance(other, IntSeries)
            and self.cutoff == other.cutoff
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"IntSeries({self.coeffs}, cutoff={self.cutoff})"

    @staticmethod
    def one(cutoff):
        return IntSeries([1], cutoff)


def series_partition_gf(N):
    """Coefficients p(0..N) of prod_{s>=1} 1/(1-q^s), by the Euler DP."""
    p = [0] * (N + 1)
    p[0] = 1
    for s in range(1, N + 1):
        for v in range(s, N + 1):
            p[v] += p[v - s]
    return IntSeries(p, N)


def series_bounded_parts(max_size, N):
    """Truncated series of prod_{s=1}^{max_size} 1/(1-q^s): partitions with
    all parts <= max_size.  By conjugation this also counts partitions into
    at most max_size parts."""
    p = [0] * (N + 1)
    p[0] = 1
    for s in range(1, min(max_size, N) + 1):
        for v in range(s, N + 1):
            p[v] += p[v - s]
    return IntSeries(p, N)


def window_state_to_partition(bits, k):
    """Partition of the total left displacement of k particles in a finite
    window, relative to the packed state with all k at the right end.

    bits[j] is the occupancy of the j-th window site, left to right.  The
    i-th particle from the left at (1-indexed) position p_i contributes the
    part (width - k + i) - p_i; zero parts are dropped.
    """
    bits = [int(b) for b in bits]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0/1")
    width = len(bits)
    positions = [j + 1 for j, b in enumerate(bits) if b == 1]
    if len(positions) != k:
        raise ValueError(f"window holds {len(positions)} particles, expected {k}")
    parts = [(width - k + i + 1) - p for i, p in enumerate(positions)]
    return as_partition([d for d in parts if d > 0])

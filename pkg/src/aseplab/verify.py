"""Checks of the partition identities behind the stationary window laws.

Each numeric verifier evaluates both sides of an identity independently in
floating point and reports the relative deviation next to a rigorous bound
on what truncation alone could contribute; a check passes only when the
deviation is explained by tolerance plus truncation.  The *_exact variants
avoid floats entirely: integer polynomial arithmetic on one side, explicit
partition counting on the other, so they either agree coefficient by
coefficient or the identity is simply false in that range.
"""

from dataclasses import dataclass

from .partitions import (
    IntSeries,
    count_bounded,
    count_distinct_bounded,
    count_distinct_exactly_k,
    durfee_decompose,
    enumerate_partitions,
    series_bounded_parts,
    series_partition_gf,
)
from .qseries import (
    DEFAULT_POLICY,
    IntPoly,
    QParam,
    TruncationNotConverged,
    jacobi_triple_product,
    pochhammer_finite,
    pochhammer_infinite,
    qbinomial,
    qbinomial_poly,
)

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class IdentityReport:
    name: str
    params: dict
    lhs: float
    rhs: float
    tol: float
    trunc_bound: float = 0.0

    @property
    def abs_dev(self):
        return abs(self.lhs - self.rhs)

    @property
    def rel_dev(self):
        scale = max(abs(self.lhs), abs(self.rhs), 1e-300)
        return self.abs_dev / scale

    @property
    def passed(self):
        return self.rel_dev <= self.tol + self.trunc_bound

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        pstr = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return (
            f"{status} {self.name} [{pstr}] lhs={self.lhs:.12e} "
            f"rhs={self.rhs:.12e} rel_dev={self.rel_dev:.2e} "
            f"bound={self.tol + self.trunc_bound:.2e}"
        )


def verify_durfee(q, n_offset=0, pol=DEFAULT_POLICY, tol=DEFAULT_TOL):
    """Rectangle sum against the full partition generating function:
    sum_{k >= max(-n,0)} q^{k(n+k)} / ((q;q)_{n+k} (q;q)_k) = 1/(q;q)_infty."""
    QParam(q)
    n = int(n_offset)
    denom, dbound = pochhammer_infinite(q, q, pol)
    lhs = 1.0 / denom

    k = max(-n, 0)
    k0 = k
    term = q ** (k * (n + k)) / (
        pochhammer_finite(q, q, n + k) * pochhammer_finite(q, q, k)
    )
    acc = term
    tail = 0.0
    while True:
        r = q ** (n + 2 * k + 1) / (
            (1.0 - q ** (n + k + 1)) * (1.0 - q ** (k + 1))
        )
        if r < 1.0 and term * r / (1.0 - r) < 1e-16 * acc:
            tail = term * r / (1.0 - r)
            break
        term *= r
        acc += term
        k += 1
        if k - k0 > pol.max_terms:
            raise TruncationNotConverged(f"rectangle sum at q={q}, n={n}")
    return IdentityReport(
        name="durfee",
        params={"q": q, "n_offset": n},
        lhs=lhs,
        rhs=acc,
        tol=tol,
        trunc_bound=dbound + tail / acc,
    )


def verify_durfee_exact(N, n_offset):
    """Exact version, two independent ways: every partition of every n <= N
    reassembles from its rectangle decomposition, and the rectangle sum of
    integer series reproduces the partition generating function mod q^{N+1}."""
    n = int(n_offset)
    for size in range(0, N + 1):
        for lam in enumerate_partitions(size):
            dec = durfee_decompose(lam, n)
            if dec.reassemble() != lam:
                return False
            if dec.k < max(-n, 0) or len(dec.right) > dec.k:
                return False
            if any(x > n + dec.k for x in dec.below):
                return False

    p = series_partition_gf(N)
    total = IntSeries([], N)
    k = max(-n, 0)
    while k * (n + k) <= N:
        right = series_bounded_parts(k, N)  # <= k parts, by conjugation
        below = series_bounded_parts(n + k, N)
        total = total + (right * below).shift(k * (n + k))
        k += 1
    return total == p


def verify_euler(q, z, pol=DEFAULT_POLICY, tol=DEFAULT_TOL):
    """prod_{i>=0} (1 + z q^i) = sum_k z^k q^{k(k-1)/2} / (q;q)_k."""
    QParam(q)
    lhs, lbound = pochhammer_infinite(-z, q, pol)

    term = 1.0
    acc = 1.0
    k = 0
    tail = 0.0
    while True:
        r = abs(z) * q**k / (1.0 - q ** (k + 1))
        if r < 1.0 and abs(term) * r / (1.0 - r) < 1e-16 * abs(acc):
            tail = abs(term) * r / (1.0 - r)
            break
        term *= z * q**k / (1.0 - q ** (k + 1))
        acc += term
        k += 1
        if k > pol.max_terms:
            raise TruncationNotConverged(f"euler sum at q={q}, z={z}")
    return IdentityReport(
        name="euler",
        params={"q": q, "z": z},
        lhs=lhs,
        rhs=acc,
        tol=tol,
        trunc_bound=lbound + tail / max(abs(acc), 1e-300),
    )


def verify_euler_exact(N, K):
    """Coefficient triangle of prod_{i=0}^{N} (1 + z q^i) for z-degree <= K,
    checked against two partition counts: staircase-shifted box partitions
    and partitions into distinct nonnegative parts."""
    cur = [IntPoly.one()]
    for i in range(0, N + 1):
        new = []
        for k in range(0, min(len(cur), K) + 1):
            poly = IntPoly([])
            if k < len(cur):
                poly = poly + cur[k]
            if k >= 1:
                poly = poly + cur[k - 1].shift(i)
            new.append(poly)
        cur = new

    for k in range(0, K + 1):
        poly = cur[k]
        deg = poly.degree if poly.coeffs else 0
        stair = k * (k - 1) // 2
        for n in range(0, deg + 1):
            c = poly.coeff(n)
            boxed = count_bounded(n - stair, k, N - k + 1) if n >= stair else 0
            if c != boxed:
                return False
            if n <= N:
                # up to q^N the truncated product agrees with the infinite
                # one, whose z^k q^n coefficient counts k distinct parts
                # >= 0: either all positive or a zero part plus k-1 positive
                distinct = count_distinct_exactly_k(n, k)
                if k >= 1:
                    distinct += count_distinct_exactly_k(n, k - 1)
                if c != distinct:
                    return False
    return True


def verify_qbinomial(q, z, m, tol=DEFAULT_TOL):
    """Finite form: prod_{i=0}^{m-1} (1 + z q^i)
    = sum_k qbinom(m,k) q^{k(k-1)/2} z^k.  No truncation on either side."""
    QParam(q)
    lhs = 1.0
    for i in range(m):
        lhs *= 1.0 + z * q**i
    rhs = sum(
        qbinomial(m, k, q) * q ** (k * (k - 1) // 2) * z**k for k in range(m + 1)
    )
    return IdentityReport(
        name="qbinomial",
        params={"q": q, "z": z, "m": m},
        lhs=lhs,
        rhs=rhs,
        tol=tol,
    )


def verify_qbinomial_exact(m):
    """z-degree k coefficient of prod_{i=0}^{m-1} (1 + z q^i) equals
    q^{k(k-1)/2} qbinom(m,k) as integer polynomials, and its q-coefficients
    count partitions into k distinct parts from {1..m}."""
    cur = [IntPoly.one()]
    for i in range(0, m):
        new = []
        for k in range(0, len(cur) + 1):
            poly = IntPoly([])
            if k < len(cur):
                poly = poly + cur[k]
            if k >= 1:
                poly = poly + cur[k - 1].shift(i)
            new.append(poly)
        cur = new

    for k in range(0, m + 1):
        expect = qbinomial_poly(m, k).shift(k * (k - 1) // 2)
        if cur[k] != expect:
            return False
        deg = cur[k].degree if cur[k].coeffs else 0
        for t in range(0, deg + 1):
            if cur[k].coeff(t) != count_distinct_bounded(t + k, k, m):
                return False
    return True


def verify_jacobi(q, z, pol=DEFAULT_POLICY, tol=DEFAULT_TOL):
    """Two-sided theta sum against its triple product."""
    lhs, rhs = jacobi_triple_product(z, q, pol)
    return IdentityReport(
        name="jacobi",
        params={"q": q, "z": z},
        lhs=lhs,
        rhs=rhs,
        tol=tol,
    )

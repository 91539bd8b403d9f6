"""q-series kernel: q-Pochhammer symbols, q-binomial coefficients and the
classical manipulation identities built from them.

Floating evaluators use plain double precision; infinite products truncate
on term magnitude and return a rigorous geometric tail bound alongside the
value.  Exact identity checks go through IntPoly, a minimal arbitrary
precision integer polynomial in q.
"""

from dataclasses import dataclass
import math


class TruncationNotConverged(Exception):
    """Raised when an infinite product/sum hits max_terms before reaching eps."""


@dataclass(frozen=True)
class QParam:
    """Asymmetry parameter, strictly inside (0,1)."""

    q: float

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie strictly in (0,1), got {self.q}")


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for infinite products/sums."""

    eps: float = 1e-16
    max_terms: int = 100_000

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


DEFAULT_POLICY = TruncationPolicy()


def _qval(q):
    return q.q if isinstance(q, QParam) else QParam(q).q


def pochhammer_finite(a, q, n):
    """(a;q)_n = prod_{i=0}^{n-1} (1 - a q^i); empty product is 1."""
    qv = _qval(q)
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1.0
    aq = float(a)
    for _ in range(n):
        out *= 1.0 - aq
        aq *= qv
    return out


def log_pochhammer_finite(a, q, n):
    """log (a;q)_n for a < 1 where every factor is positive."""
    qv = _qval(q)
    out = 0.0
    aq = float(a)
    for _ in range(n):
        f = 1.0 - aq
        if f <= 0.0:
            raise ValueError("log form needs all factors positive")
        out += math.log(f)
        aq *= qv
    return out


def pochhammer_infinite(a, q, pol=DEFAULT_POLICY):
    """(a;q)_infty with truncation on |a q^i| < pol.eps.

    Returns (value, bound) where bound is a rigorous relative error bound for
    the dropped tail, from sum_{i>=K} |a| q^i <= |a| q^K / (1-q).
    """
    qv = _qval(q)
    av = float(a)
    if av == 0.0:
        return 1.0, 0.0
    out = 1.0
    t = av
    for _ in range(pol.max_terms):
        if abs(t) < pol.eps:
            # |log prod_{i>=K}(1-t_i)| <= sum |t_i|/(1-|t_i|), geometric in i
            s = abs(t) / ((1.0 - qv) * (1.0 - abs(t)))
            return out, math.expm1(s)
        out *= 1.0 - t
        t *= qv
    raise TruncationNotConverged(
        f"(a;q)_infty with a={av}, q={qv} did not reach eps={pol.eps} "
        f"in {pol.max_terms} terms"
    )


def log_neg_pochhammer_infinite(x, q, pol=DEFAULT_POLICY):
    """log (-q^x;q)_infty = sum_{i>=0} log(1+q^{x+i}), stable for any real x.

    Returns (logvalue, bound); bound is relative on the value, as in
    pochhammer_infinite.
    """
    qv = _qval(q)
    lq = math.log(qv)
    out = 0.0
    for i in range(pol.max_terms):
        t = (x + i) * lq
        if t > 0:
            # q^{x+i} > 1: log(1+e^t) = t + log1p(e^-t)
            out += t + math.log1p(math.exp(-t))
        else:
            term = math.exp(t)
            if term < pol.eps:
                s = term / ((1.0 - qv) * (1.0 - term))
                return out, math.expm1(s)
            out += math.log1p(term)
    raise TruncationNotConverged(
        f"(-q^{x};q)_infty with q={qv} did not reach eps={pol.eps} "
        f"in {pol.max_terms} terms"
    )


def qbinomial(m, k, q):
    """Gaussian binomial [m k]_q; 0 outside 0 <= k <= m.

    The out of range convention matches the combinatorial count (no
    partitions fit in a negative box) and closes the Pascal recursion.
    """
    if k < 0 or k > m:
        return 0.0
    qv = _qval(q)
    out = 1.0
    for i in range(k):
        out *= (1.0 - qv ** (m - i)) / (1.0 - qv ** (i + 1))
    return out


def log_qbinomial(m, k, q):
    if k < 0 or k > m:
        raise ValueError("log form needs 0 <= k <= m")
    qv = _qval(q)
    out = 0.0
    for i in range(k):
        out += math.log1p(-qv ** (m - i)) - math.log1p(-qv ** (i + 1))
    return out


class IntPoly:
    """Exact integer polynomial in q, coefficients indexed by power.

    Stored with trailing zeros stripped; the zero polynomial has empty
    coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(int(c) for c in cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(
            [self.coeff(i) + other.coeff(i) for i in range(n)]
        )

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    def shift(self, k):
        """Multiply by q^k."""
        if not self.coeffs:
            return IntPoly()
        return IntPoly((0,) * k + self.coeffs)

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, q):
        out = 0.0
        for c in reversed(self.coeffs):
            out = out * q + c
        return out

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    @staticmethod
    def one():
        return IntPoly((1,))


def qbinomial_poly(m, k):
    """[m k]_q as an exact IntPoly, built from the q-Pascal recursion
    [m k] = q^k [m-1 k] + [m-1 k-1]."""
    if not (0 <= k <= m):
        raise ValueError(f"need 0 <= k <= m, got m={m}, k={k}")
    # row r holds [r j]_q for j = 0..r
    row = [IntPoly.one()]
    for r in range(1, m + 1):
        new = [IntPoly.one()]
        for j in range(1, r):
            new.append(row[j].shift(j) + row[j - 1])
        new.append(IntPoly.one())
        row = new
    return row[k]


def q_pascal_check(m, k):
    """Exact check of [m k]_q == q^k [m-1 k]_q + [m-1 k-1]_q."""
    if not (0 <= k <= m) or m < 1:
        raise ValueError(f"need m >= 1 and 0 <= k <= m, got m={m}, k={k}")
    lhs = qbinomial_poly(m, k)
    a = qbinomial_poly(m - 1, k).shift(k) if k <= m - 1 else IntPoly()
    b = qbinomial_poly(m - 1, k - 1) if k >= 1 else IntPoly()
    return lhs == a + b


def pochhammer_inversion(k, q):
    """Both sides of (q^{-k};q)_k = (q;q)_k / ((-1)^k q^{k(k+1)/2})."""
    qv = _qval(q)
    lhs = pochhammer_finite(qv ** (-k) if k > 0 else 1.0, qv, k)
    rhs = pochhammer_finite(qv, qv, k) / ((-1.0) ** k * qv ** (k * (k + 1) / 2))
    return lhs, rhs


def shifted_pochhammer_ratio(c, d, j, m_j, m_prev, q, pol=DEFAULT_POLICY):
    """Both sides of the shifted Pochhammer ratio used when telescoping the
    second class position law:

      (-q^{c+d+2-j-m_j};q)_{mhat} / (-q^{c+d-j-m_j};q)_infty
        = 1 / ((1+q^{c+d-j-m_j})(1+q^{c+d+1-j-m_j})(-q^{c+d-(j-1)-m_prev};q)_infty)

    with mhat = m_j - m_prev - 1.
    """
    if not (2 <= j <= d):
        raise ValueError("need 2 <= j <= d")
    if not (m_prev < m_j):
        raise ValueError("need m_prev < m_j")
    qv = _qval(q)
    mhat = m_j - m_prev - 1

    num = pochhammer_finite(-(qv ** (c + d + 2 - j - m_j)), qv, mhat)
    den, _ = pochhammer_infinite(-(qv ** (c + d - j - m_j)), qv, pol)
    lhs = num / den

    f1 = 1.0 + qv ** (c + d - j - m_j)
    f2 = 1.0 + qv ** (c + d + 1 - j - m_j)
    tail, _ = pochhammer_infinite(-(qv ** (c + d - (j - 1) - m_prev)), qv, pol)
    rhs = 1.0 / (f1 * f2 * tail)
    return lhs, rhs


def jacobi_triple_product(z, q, pol=DEFAULT_POLICY):
    """Both sides of sum_l q^{l(l+1)/2} z^l = (q;q)_inf (-qz;q)_inf (-1/z;q)_inf.

    The sum truncates over a symmetric range in l once both wing terms drop
    below pol.eps relative to the running sum.
    """
    if z == 0.0:
        raise ValueError("z must be nonzero")
    qv = _qval(q)

    total = 1.0  # l = 0 term
    for l in range(1, pol.max_terms):
        t_pos = qv ** (l * (l + 1) / 2) * z ** l
        t_neg = qv ** (l * (l - 1) / 2) * z ** (-l)
        total += t_pos + t_neg
        if abs(t_pos) < pol.eps * max(1.0, abs(total)) and abs(t_neg) < pol.eps * max(
            1.0, abs(total)
        ):
            break
    else:
        raise TruncationNotConverged("triple product sum did not converge")

    p1, _ = pochhammer_infinite(qv, qv, pol)
    p2, _ = pochhammer_infinite(-qv * z, qv, pol)
    p3, _ = pochhammer_infinite(-1.0 / z, qv, pol)
    return total, p1 * p2 * p3

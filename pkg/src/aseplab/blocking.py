"""Product blocking measures for ASEP on Z.

Parameterized by q in (0,1) and a real center c, the measure fills site i
with probability 1/(1+q^(i-c)): far-left sites are almost surely empty,
far-right sites almost surely occupied, and site i=c (when integral) is a
fair coin.  The conserved quantity N counts holes at positive sites minus
particles at nonpositive ones.

Closed-form laws evaluated here: the N distribution, the half-infinite
left-particle-count law, the finite-window particle-count law, and the
right-hole law obtained from particle-hole symmetry.  Everything heavy goes
through log space so large |c - m| and k are safe.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .partitions import SizeLimit
from .qseries import (
    DEFAULT_POLICY,
    QParam,
    TruncationNotConverged,
    log_neg_pochhammer_infinite,
    log_pochhammer_finite,
    log_qbinomial,
)


class WindowTooNarrow(Exception):
    """Boundary marginals deviate from the frozen outside values by > eps."""


@dataclass(frozen=True)
class AsepParams:
    """Right jump rate 1, left jump rate q, blocking measure centered at c."""

    q: float
    c: float = 0.0

    def __post_init__(self):
        QParam(self.q)  # range check

    def with_c(self, c):
        return replace(self, c=c)


def _log_sigmoid(t):
    """log(1/(1+e^t)), stable for any real t."""
    if t >= 0:
        return -t - math.log1p(math.exp(-t))
    return -math.log1p(math.exp(t))


def _log1p_qpow(x, lq):
    """log(1 + q^x) given lq = log q, stable for any real x."""
    u = x * lq
    if u > 0:
        return u + math.log1p(math.exp(-u))
    return math.log1p(math.exp(u))


def marginal(i, z, p):
    """Single-site weight q^{-(i-c)z} / (1 + q^{-(i-c)}).

    z=1 gives 1/(1+q^{i-c}); the two values sum to 1 exactly.
    """
    if z not in (0, 1):
        raise ValueError("z must be 0 or 1")
    t = (i - p.c) * math.log(p.q)
    # occupation prob is sigmoid(-t)
    return math.exp(_log_sigmoid(t if z == 1 else -t))


def occupation_profile(sites, p):
    """Vector of marginal(i, 1, p) over an integer array of sites."""
    t = (np.asarray(sites, dtype=float) - p.c) * math.log(p.q)
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = np.exp(-t[pos]) / (1.0 + np.exp(-t[pos]))
    out[~pos] = 1.0 / (1.0 + np.exp(t[~pos]))
    return out


@dataclass
class WindowState:
    """Occupancies on [lo, hi] with the frozen outside convention:
    sites < lo empty, sites > hi occupied (the a.s. ground-state tails)."""

    lo: int
    hi: int
    bits: np.ndarray

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("need lo <= hi")
        bits = np.asarray(self.bits, dtype=np.uint8)
        if bits.shape != (self.hi - self.lo + 1,):
            raise ValueError("bits length must be hi-lo+1")
        if not np.all((bits == 0) | (bits == 1)):
            raise ValueError("bits must be 0/1")
        self.bits = bits

    @property
    def width(self):
        return self.hi - self.lo + 1

    @property
    def sites(self):
        return np.arange(self.lo, self.hi + 1)

    def occupancy(self, i):
        """Occupancy of any site, applying the outside convention."""
        if i < self.lo:
            return 0
        if i > self.hi:
            return 1
        return int(self.bits[i - self.lo])

    def particle_count(self):
        return int(self.bits.sum())

    def conserved_N(self):
        """Holes at sites >= 1 minus particles at sites <= 0, exact.

        The frozen outside tails contribute: every site in [1, lo-1] is an
        outside hole, every site in [hi+1, 0] an outside particle.
        """
        sites = self.sites
        holes_right = int(((sites >= 1) & (self.bits == 0)).sum())
        parts_left = int(((sites <= 0) & (self.bits == 1)).sum())
        return holes_right + max(self.lo - 1, 0) - parts_left - max(-self.hi, 0)

    def copy(self):
        return WindowState(self.lo, self.hi, self.bits.copy())


@dataclass(frozen=True)
class CountDist:
    """Distribution of an integer count on a contiguous support."""

    n_min: int
    probs: np.ndarray

    @property
    def support(self):
        return np.arange(self.n_min, self.n_min + len(self.probs))

    @property
    def total(self):
        return float(self.probs.sum())

    def prob(self, n):
        i = n - self.n_min
        if 0 <= i < len(self.probs):
            return float(self.probs[i])
        return 0.0


def sample_blocking(window, p, rng, eps=1e-12):
    """Exact product sample of the blocking measure restricted to a window.

    Requires the boundary sites to already be frozen to ground state within
    eps, so the cut bias is quantifiable.
    """
    lo, hi = window
    if lo > hi:
        raise ValueError("need lo <= hi")
    if marginal(lo, 1, p) > eps or marginal(hi, 0, p) > eps:
        raise WindowTooNarrow(
            f"window [{lo},{hi}] boundary marginals deviate by more than "
            f"eps={eps} from the frozen outside values (c={p.c}, q={p.q})"
        )
    probs = occupation_profile(np.arange(lo, hi + 1), p)
    bits = (rng.random(hi - lo + 1) < probs).astype(np.uint8)
    return WindowState(lo, hi, bits)


def prob_N(n, p, pol=DEFAULT_POLICY):
    """P(N = n) = q^{n(n+1)/2 - nc} / sum_l q^{l(l+1)/2 - lc}.

    The normalizer is summed symmetrically out from its largest term until
    terms drop below 1e-18 of it; convergence is super-geometric.
    """

    def expo(l):
        return l * (l + 1) / 2.0 - l * p.c

    center = round(p.c - 0.5)
    e0 = min(expo(center - 1), expo(center), expo(center + 1))
    total = 0.0
    for direction in (1, -1):
        l = center if direction == 1 else center - 1
        for _ in range(pol.max_terms):
            term = p.q ** (expo(l) - e0)
            total += term
            if term < 1e-18:
                break
            l += direction
        else:
            raise TruncationNotConverged("normalizer of the N law")
    return p.q ** (expo(n) - e0) / total


def prob_N_at(m, n, p, pol=DEFAULT_POLICY):
    """P(N rebased at m+1/2 equals n): a left shift by m adds m to N."""
    return prob_N(n + m, p, pol)


def prob_left_particles(m, k, p, pol=DEFAULT_POLICY):
    """P(k particles at or left of site m) under the blocking measure:
    q^{k(c-m)+k(k-1)/2} / ((q;q)_k (-q^{c-m};q)_infty)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    lq = math.log(p.q)
    logp = (k * (p.c - m) + k * (k - 1) / 2.0) * lq
    logp -= log_pochhammer_finite(p.q, p.q, k)
    log_tail, _ = log_neg_pochhammer_infinite(p.c - m, p.q, pol)
    return math.exp(logp - log_tail)


def prob_window_particles(m1, m2, k, p):
    """P(k particles strictly between m1 and m2), window width
    m2-m1-1 =: mhat; exact finite formula, no truncation."""
    mhat = m2 - m1 - 1
    if mhat < 1:
        raise ValueError("need m1 + 1 < m2")
    if not (0 <= k <= mhat):
        raise ValueError(f"need 0 <= k <= {mhat}, got {k}")
    lq = math.log(p.q)
    logp = (k * (p.c + 1 - m2) + k * (k - 1) / 2.0) * lq
    logp -= sum(_log1p_qpow(p.c + 1 - m2 + i, lq) for i in range(mhat))
    logp += log_qbinomial(mhat, k, p.q)
    return math.exp(logp)


def prob_right_holes(m, n, p, pol=DEFAULT_POLICY):
    """P(n holes strictly right of site m); equals the left-particle law
    under c -> 2m+1-c by particle-hole symmetry."""
    return prob_left_particles(m, n, p.with_c(2 * m + 1 - p.c), pol)


@dataclass(frozen=True)
class RelationCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def rel_dev(self):
        scale = max(abs(self.lhs), abs(self.rhs))
        if scale == 0.0:
            return 0.0
        return abs(self.lhs - self.rhs) / scale


def shift_relation_checks(p, m, k, pol=DEFAULT_POLICY):
    """Evaluate both sides of the lattice-shift and c-shift relations.

    Shifting the lattice left by one step equals raising c by one; stepping
    c down by one multiplies the laws by explicit factors built from the
    single-site normalizer Z^c_{m+1} = 1 + q^{c-(m+1)}.  Returns the list of
    RelationCheck rows; callers apply their tolerance.
    """
    q, c = p.q, p.c
    up = p.with_c(c + 1)
    down = p.with_c(c - 1)
    z_factor = 1.0 + q ** (c - m - 1)
    checks = [
        RelationCheck(
            "particle lattice-shift",
            prob_left_particles(m, k, p, pol),
            prob_left_particles(m + 1, k, up, pol),
        ),
        RelationCheck(
            "hole lattice-shift",
            prob_right_holes(m, k, p, pol),
            prob_right_holes(m + 1, k, up, pol),
        ),
        RelationCheck(
            "N lattice-shift",
            prob_N_at(m, k, p, pol),
            prob_N_at(m + 1, k, up, pol),
        ),
        RelationCheck(
            "particle c-step",
            prob_left_particles(m, k, down, pol),
            q ** (-k) / z_factor * prob_left_particles(m, k, p, pol),
        ),
        RelationCheck(
            "hole c-step",
            prob_right_holes(m, k, down, pol),
            q ** (k + (m + 1 - c)) * z_factor * prob_right_holes(m, k, p, pol),
        ),
        RelationCheck(
            "N c-step",
            prob_N_at(m, k, down, pol),
            q ** (k + (m + 1 - c)) * prob_N_at(m, k, p, pol),
        ),
    ]
    return checks


def brute_force_window_law(m1, m2, p):
    """Exact window particle-count law by enumerating all 2^mhat patterns
    with their product weights.  Independent oracle for
    prob_window_particles; exponential on purpose, capped at mhat = 20."""
    mhat = m2 - m1 - 1
    if mhat < 1:
        raise ValueError("need m1 + 1 < m2")
    if mhat > 20:
        raise SizeLimit(f"window enumeration capped at 20 sites, got {mhat}")
    sites = range(m1 + 1, m2)
    # evaluate both one-site weights directly; 1-p would lose digits when
    # the occupation probability is within ~1e-9 of 1
    log_p1 = np.array([math.log(marginal(i, 1, p)) for i in sites])
    log_p0 = np.array([math.log(marginal(i, 0, p)) for i in sites])
    patterns = np.arange(2 ** mhat, dtype=np.int64)
    bits = (patterns[:, None] >> np.arange(mhat)) & 1
    logw = bits @ log_p1 + (1 - bits) @ log_p0
    counts = bits.sum(axis=1)
    probs = np.zeros(mhat + 1)
    np.add.at(probs, counts, np.exp(logw))
    return CountDist(n_min=0, probs=probs)

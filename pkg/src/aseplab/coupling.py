"""Two-species basic coupling for ASEP in a finite window.

The pair (xi, x) carries a xi-configuration (rate 1 right, rate q left,
exclusion) plus d labels x_1 < ... < x_d marking which particles, counted
from the leftmost, are second class.  Labels swap with neighbouring
unlabeled particles only when the two particles sit on adjacent sites:
label right-jump rate q, left-jump rate 1, never moving past another label.
Removing the labeled particles from xi yields the first-class process eta.

The label chain alone is positive recurrent with the product-form law pi;
jointly, blocking measure times pi is reversible, so a replica started from
an exact sample stays in law for all t.  Site exchanges across the frozen
window boundary are disabled; the simulator counts how often the labels get
near enough to the edge for that truncation to matter instead of assuming
it never does.
"""

from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from .blocking import (
    RelationCheck,
    WindowState,
    marginal,
    prob_left_particles,
    prob_window_particles,
    sample_blocking,
)
from .qseries import (
    DEFAULT_POLICY,
    QParam,
    log_neg_pochhammer_infinite,
    log_pochhammer_finite,
)


class AbsorbingState(Exception):
    """Total transition rate is zero; the window holds no movable matter."""


class LabelOutOfRange(Exception):
    """A label exceeds the number of particles present in the window."""


class BoundaryContamination(Exception):
    """Second-class particles spent too much probe time near the frozen
    boundary for the run to stand in for the infinite-volume process."""


def as_labels(x):
    labels = tuple(int(v) for v in x)
    if any(b <= a for a, b in zip(labels, labels[1:])) or (
        labels and labels[0] < 0
    ):
        raise ValueError(f"labels must satisfy 0 <= x1 < ... < xd, got {labels}")
    return labels


@dataclass
class CoupledState:
    xi: WindowState
    labels: tuple

    def __post_init__(self):
        self.labels = as_labels(self.labels)
        if self.labels and self.labels[-1] >= self.xi.particle_count():
            raise LabelOutOfRange(
                f"label {self.labels[-1]} but only "
                f"{self.xi.particle_count()} particles in window"
            )

    @property
    def d(self):
        return len(self.labels)

    def particle_sites(self):
        return self.xi.sites[self.xi.bits == 1]

    def copy(self):
        return CoupledState(xi=self.xi.copy(), labels=self.labels)


@dataclass(frozen=True)
class Transition:
    """kind 'particle': the particle at site idx hops to idx+step.
    kind 'label': label slot j=idx moves to particle index x_j + step."""

    kind: str
    idx: int
    step: int


@dataclass(frozen=True)
class EventRecord:
    time: float
    kind: str
    idx: int
    step: int


def enabled_transitions(s, p):
    """All currently possible moves with their rates.

    Particle hops respect exclusion and stay inside the window.  A label
    swap needs its two particles on adjacent sites and the target particle
    unlabeled; swaps whose partner particle lies outside the window are
    dropped with the boundary (the contamination monitor accounts for them).
    """
    q = p.q
    xi = s.xi
    bits = xi.bits
    out = []
    for j in range(xi.width - 1):
        a, b = bits[j], bits[j + 1]
        if a == 1 and b == 0:
            out.append((Transition("particle", xi.lo + j, 1), 1.0))
        elif a == 0 and b == 1:
            out.append((Transition("particle", xi.lo + j + 1, -1), q))
    if s.labels:
        pos = np.flatnonzero(bits) + xi.lo
        n_part = len(pos)
        label_set = set(s.labels)
        for slot, x in enumerate(s.labels):
            right = x + 1
            if right < n_part and right not in label_set and pos[right] == pos[x] + 1:
                out.append((Transition("label", slot, 1), q))
            left = x - 1
            if left >= 0 and left not in label_set and pos[left] == pos[x] - 1:
                out.append((Transition("label", slot, -1), 1.0))
    return out


def apply_transition(s, tr):
    """Apply one move, returning a fresh CoupledState."""
    if tr.kind == "particle":
        xi = s.xi.copy()
        i = tr.idx - xi.lo
        xi.bits[i] = 0
        xi.bits[i + tr.step] = 1
        return CoupledState(xi=xi, labels=s.labels)
    labels = list(s.labels)
    labels[tr.idx] += tr.step
    return CoupledState(xi=s.xi, labels=tuple(labels))


def choose_transition(s, p, rng):
    """Exponential holding time at the total rate, then a transition drawn
    proportionally to its rate.  Draw order is fixed (holding time first)
    so trajectories are seed-reproducible."""
    trans = enabled_transitions(s, p)
    total = sum(r for _, r in trans)
    if total <= 0.0:
        raise AbsorbingState("no enabled transitions")
    dt = rng.exponential(1.0 / total)
    u = rng.random() * total
    acc = 0.0
    chosen = trans[-1][0]
    for tr, r in trans:
        acc += r
        if u < acc:
            chosen = tr
            break
    return chosen, dt


def gillespie_step(s, p, rng):
    """One exact continuous-time step of the coupled chain."""
    tr, dt = choose_transition(s, p, rng)
    return apply_transition(s, tr), dt


def second_class_positions(s):
    """Sites of the labeled particles: label x picks the (x+1)-th particle
    from the left."""
    pos = s.particle_sites()
    if s.labels and s.labels[-1] >= len(pos):
        raise LabelOutOfRange("labels exceed particles present")
    return tuple(int(pos[x]) for x in s.labels)


def labels_from_positions(xi, X):
    """Inverse of second_class_positions: ranks of the given occupied sites."""
    pos = list(xi.sites[xi.bits == 1])
    try:
        return tuple(pos.index(site) for site in X)
    except ValueError as e:
        raise ValueError(f"site in {X} holds no particle") from e


def eta_from(s):
    """First-class configuration: xi with the labeled particles removed."""
    eta = s.xi.copy()
    for site in second_class_positions(s):
        eta.bits[site - eta.lo] = 0
    return eta


def pi_label(x, q):
    """Stationary label law pi(x) = prod_{i<=d}(1-q^i) * q^{sum x - d(d-1)/2}."""
    labels = as_labels(x)
    qv = q.q if isinstance(q, QParam) else q
    d = len(labels)
    out = 1.0
    for i in range(1, d + 1):
        out *= 1.0 - qv ** i
    return out * qv ** (sum(labels) - d * (d - 1) // 2)


def pi_detailed_balance_check(d, q, cap):
    """All balance relations pi(x) q = pi(x + e_j) over states with
    x_d <= cap; returns RelationCheck rows."""
    qv = q.q if isinstance(q, QParam) else q
    checks = []
    for x in itertools.combinations(range(cap + 1), d):
        for j in range(d):
            y = list(x)
            y[j] += 1
            if j + 1 < d and y[j] == x[j + 1]:
                continue  # ordering broken, move not allowed
            checks.append(
                RelationCheck(
                    f"pi balance {x} -> {tuple(y)}",
                    pi_label(x, qv) * qv,
                    pi_label(tuple(y), qv),
                )
            )
    return checks


def sample_pi(d, q, rng):
    """Exact pi sample via independent geometric gaps.

    x_1 and the successive gaps x_j - x_{j-1} - 1 are geometric on {0,1,...}
    with ratios q^d, q^{d-1}, ..., q: the nested-sum form of the
    normalization read backwards.
    """
    qv = q.q if isinstance(q, QParam) else q
    if d == 0:
        return ()
    x = []
    cur = int(rng.geometric(1.0 - qv ** d)) - 1
    x.append(cur)
    for j in range(2, d + 1):
        gap = int(rng.geometric(1.0 - qv ** (d + 1 - j))) - 1
        cur += 1 + gap
        x.append(cur)
    return tuple(x)


def _log1p_qpow(x, lq):
    u = x * lq
    if u > 0:
        return u + math.log1p(math.exp(-u))
    return math.log1p(math.exp(u))


def prob_second_class_at(m, p, d):
    """P(a second class particle occupies site m) at stationarity:
    (1-q^d) q^{c-m} / ((1+q^{c-m})(1+q^{c+d-m}))."""
    if d < 1:
        raise ValueError("d must be positive")
    lq = math.log(p.q)
    u = p.c - m
    logv = (
        math.log1p(-(p.q ** d))
        + u * lq
        - _log1p_qpow(u, lq)
        - _log1p_qpow(u + d, lq)
    )
    return math.exp(logv)


def prob_positions(m, p, d=None):
    """Joint law of the d second-class positions (Thm of the d-label chain):
    prod_i (1-q^i) * q^{dc - sum m_j} / prod_j (1+q^{c+d-j-m_j})(1+q^{c+d+1-j-m_j})."""
    mvec = tuple(int(v) for v in m)
    if d is None:
        d = len(mvec)
    if d != len(mvec) or d < 1:
        raise ValueError("m must have length d >= 1")
    if any(b <= a for a, b in zip(mvec, mvec[1:])):
        raise ValueError("positions must be strictly increasing")
    lq = math.log(p.q)
    logv = 0.0
    for i in range(1, d + 1):
        logv += math.log1p(-(p.q ** i))
    for j, mj in enumerate(mvec, start=1):
        u = p.c - mj
        logv += u * lq
        logv -= _log1p_qpow(u + d - j, lq)
        logv -= _log1p_qpow(u + d + 1 - j, lq)
    return math.exp(logv)


def _hat_pairs(mvec, kvec):
    for j in range(1, len(mvec)):
        yield kvec[j] - kvec[j - 1] - 1, mvec[j] - mvec[j - 1] - 1


def conditional_xi_given_labels(m, k, p, pol=DEFAULT_POLICY):
    """P(xi has particles at every m_j with exactly k_1 particles strictly
    left of m_1 and k_j - k_{j-1} - 1 strictly between m_{j-1} and m_j).

    This is the xi-event on which the labels k point at the sites m.
    Returns 0 when some between-window would need more particles than sites.
    """
    mvec = tuple(int(v) for v in m)
    kvec = as_labels(k)
    d = len(mvec)
    if d != len(kvec) or d < 1:
        raise ValueError("m and k must share a positive length")
    if any(b <= a for a, b in zip(mvec, mvec[1:])):
        raise ValueError("positions must be strictly increasing")
    if any(kh > mh for kh, mh in _hat_pairs(mvec, kvec)):
        return 0.0
    q, c = p.q, p.c
    lq = math.log(q)
    k1 = kvec[0]
    logv = (k1 + 1) * (c - mvec[0]) * lq + k1 * (k1 + 1) / 2.0 * lq
    logv -= log_pochhammer_finite(q, q, k1)
    log_tail, _ = log_neg_pochhammer_infinite(c - mvec[-1], q, pol)
    logv -= log_tail
    for j in range(1, d):
        kh = kvec[j] - kvec[j - 1] - 1
        mh = mvec[j] - mvec[j - 1] - 1
        logv += (kh + 1) * (c - mvec[j]) * lq + kh * (kh + 1) / 2.0 * lq
        logv += log_pochhammer_finite(q, q, mh)
        logv -= log_pochhammer_finite(q, q, kh)
        logv -= log_pochhammer_finite(q, q, mh - kh)
    return math.exp(logv)


def conditional_xi_given_labels_factored(m, k, p, pol=DEFAULT_POLICY):
    """Same probability assembled from the independent pieces the product
    measure splits it into: site marginals, the left-tail count law, and
    the between-window count laws."""
    mvec = tuple(int(v) for v in m)
    kvec = as_labels(k)
    d = len(mvec)
    if d != len(kvec) or d < 1:
        raise ValueError("m and k must share a positive length")
    if any(b <= a for a, b in zip(mvec, mvec[1:])):
        raise ValueError("positions must be strictly increasing")
    if any(kh > mh for kh, mh in _hat_pairs(mvec, kvec)):
        return 0.0
    out = 1.0
    for mj in mvec:
        out *= marginal(mj, 1, p)
    out *= prob_left_particles(mvec[0] - 1, kvec[0], p, pol)
    for j in range(1, d):
        kh = kvec[j] - kvec[j - 1] - 1
        mh = mvec[j] - mvec[j - 1] - 1
        if mh == 0:
            continue  # adjacent marked sites, nothing in between
        out *= prob_window_particles(mvec[j - 1], mvec[j], kh, p)
    return out


def mean_and_sem(total, total_sq, n):
    """Mean and standard error from accumulated sums over n replicas."""
    mean = total / n
    if n < 2:
        return mean, np.full_like(np.asarray(mean, dtype=float), np.inf)
    var = (total_sq - total * mean) / (n - 1)
    var = np.maximum(var, 0.0)
    return mean, np.sqrt(var / n)


@dataclass
class SimulationReport:
    """Mergeable statistics from replicas of the coupled simulation.

    Per-site arrays aggregate replica time-means (sum and sum of squares)
    so cross-replica standard errors are available; dicts hold per-replica
    observation frequencies of the position/label vectors plus raw counts.
    """

    lo: int
    hi: int
    d: int
    q: float
    c: float
    T: float
    probe_times: tuple
    n_replicas: int = 0
    n_events: int = 0
    total_probes: int = 0
    contaminated_probes: int = 0
    N_violations: int = 0
    xi_probe_occ: np.ndarray = None
    eta_probe_occ: np.ndarray = None
    xi_mean_sum: np.ndarray = None
    xi_mean_sumsq: np.ndarray = None
    eta_mean_sum: np.ndarray = None
    eta_mean_sumsq: np.ndarray = None
    x_counts: dict = field(default_factory=dict)
    label_counts: dict = field(default_factory=dict)
    x_freq_sum: dict = field(default_factory=dict)
    x_freq_sumsq: dict = field(default_factory=dict)
    label_freq_sum: dict = field(default_factory=dict)
    label_freq_sumsq: dict = field(default_factory=dict)
    event_log: list = None

    @property
    def width(self):
        return self.hi - self.lo + 1

    @property
    def sites(self):
        return np.arange(self.lo, self.hi + 1)

    @property
    def n_probes(self):
        return len(self.probe_times)

    @property
    def contamination_fraction(self):
        if self.total_probes == 0:
            return 0.0
        return self.contaminated_probes / self.total_probes

    def meta(self):
        return {
            "lo": self.lo,
            "hi": self.hi,
            "d": self.d,
            "q": self.q,
            "c": self.c,
            "T": self.T,
            "replicas": self.n_replicas,
            "probes_per_replica": self.n_probes,
            "events": self.n_events,
            "contaminated_probes": self.contaminated_probes,
            "total_probes": self.total_probes,
            "N_violations": self.N_violations,
        }

    def xi_site_stats(self):
        return mean_and_sem(self.xi_mean_sum, self.xi_mean_sumsq, self.n_replicas)

    def eta_site_stats(self):
        return mean_and_sem(self.eta_mean_sum, self.eta_mean_sumsq, self.n_replicas)

    def x_freq_stats(self):
        out = {}
        for key in self.x_freq_sum:
            out[key] = mean_and_sem(
                self.x_freq_sum[key], self.x_freq_sumsq.get(key, 0.0), self.n_replicas
            )
        return out

    def label_freq_stats(self):
        out = {}
        for key in self.label_freq_sum:
            out[key] = mean_and_sem(
                self.label_freq_sum[key],
                self.label_freq_sumsq.get(key, 0.0),
                self.n_replicas,
            )
        return out

    def _same_layout(self, other):
        return (
            (self.lo, self.hi, self.d, self.q, self.c, self.T, self.probe_times)
            == (
                other.lo,
                other.hi,
                other.d,
                other.q,
                other.c,
                other.T,
                other.probe_times,
            )
        )

    def merge(self, other):
        if not self._same_layout(other):
            raise ValueError("cannot merge reports with different run layouts")
        self.n_replicas += other.n_replicas
        self.n_events += other.n_events
        self.total_probes += other.total_probes
        self.contaminated_probes += other.contaminated_probes
        self.N_violations += other.N_violations
        self.xi_probe_occ += other.xi_probe_occ
        self.eta_probe_occ += other.eta_probe_occ
        self.xi_mean_sum += other.xi_mean_sum
        self.xi_mean_sumsq += other.xi_mean_sumsq
        self.eta_mean_sum += other.eta_mean_sum
        self.eta_mean_sumsq += other.eta_mean_sumsq
        for src, dst in [
            (other.x_counts, self.x_counts),
            (other.label_counts, self.label_counts),
            (other.x_freq_sum, self.x_freq_sum),
            (other.x_freq_sumsq, self.x_freq_sumsq),
            (other.label_freq_sum, self.label_freq_sum),
            (other.label_freq_sumsq, self.label_freq_sumsq),
        ]:
            for key, val in src.items():
                dst[key] = dst.get(key, 0) + val
        return self


def _empty_report(lo, hi, d, p, T, probe_times):
    width = hi - lo + 1
    n = len(probe_times)
    return SimulationReport(
        lo=lo,
        hi=hi,
        d=d,
        q=p.q,
        c=p.c,
        T=T,
        probe_times=tuple(probe_times),
        xi_probe_occ=np.zeros((n, width)),
        eta_probe_occ=np.zeros((n, width)),
        xi_mean_sum=np.zeros(width),
        xi_mean_sumsq=np.zeros(width),
        eta_mean_sum=np.zeros(width),
        eta_mean_sumsq=np.zeros(width),
    )


def simulate_stationary(
    p,
    d,
    window,
    T,
    rng,
    probes=10,
    eps=1e-6,
    margin=5,
    max_contamination=None,
    keep_log=False,
):
    """One replica: exact (mu^c x pi) start, Gillespie to time T, state
    recorded at probes+1 evenly spaced times including t=0.

    The probe at a time inside a holding interval sees the state holding
    there.  Contamination = probes where some second-class particle sits
    within `margin` sites of the window edge; if max_contamination is given
    and the final fraction exceeds it, BoundaryContamination is raised
    after the statistics are complete.
    """
    lo, hi = window
    xi = sample_blocking(window, p, rng, eps=eps)
    labels = sample_pi(d, p.q, rng)
    state = CoupledState(xi=xi, labels=labels)

    if T > 0 and probes >= 1:
        probe_times = [0.0] + [i * T / probes for i in range(1, probes + 1)]
    else:
        probe_times = [0.0]
    rep = _empty_report(lo, hi, d, p, T, probe_times)
    rep.n_replicas = 1
    if keep_log:
        rep.event_log = []

    n_probes = len(probe_times)
    xi_acc = np.zeros(rep.width)
    eta_acc = np.zeros(rep.width)
    x_local = {}
    label_local = {}

    def record(idx):
        bits = state.xi.bits
        rep.xi_probe_occ[idx] += bits
        xi_acc[:] += bits
        X = second_class_positions(state) if d else ()
        eta = eta_from(state) if d else state.xi
        rep.eta_probe_occ[idx] += eta.bits
        eta_acc[:] += eta.bits
        rep.total_probes += 1
        if d:
            x_local[X] = x_local.get(X, 0) + 1
            label_local[state.labels] = label_local.get(state.labels, 0) + 1
            if X[0] < lo + margin or X[-1] > hi - margin:
                rep.contaminated_probes += 1
        if state.xi.conserved_N() != eta.conserved_N() - d:
            rep.N_violations += 1

    record(0)
    idx = 1
    t = 0.0
    while idx < n_probes:
        tr, dt = choose_transition(state, p, rng)
        t_next = t + dt
        while idx < n_probes and probe_times[idx] <= t_next:
            record(idx)
            idx += 1
        if keep_log:
            rep.event_log.append(EventRecord(t_next, tr.kind, tr.idx, tr.step))
        state = apply_transition(state, tr)
        t = t_next
        rep.n_events += 1

    rep.xi_mean_sum += xi_acc / n_probes
    rep.xi_mean_sumsq += (xi_acc / n_probes) ** 2
    rep.eta_mean_sum += eta_acc / n_probes
    rep.eta_mean_sumsq += (eta_acc / n_probes) ** 2
    for key, cnt in x_local.items():
        f = cnt / n_probes
        rep.x_counts[key] = rep.x_counts.get(key, 0) + cnt
        rep.x_freq_sum[key] = rep.x_freq_sum.get(key, 0.0) + f
        rep.x_freq_sumsq[key] = rep.x_freq_sumsq.get(key, 0.0) + f * f
    for key, cnt in label_local.items():
        f = cnt / n_probes
        rep.label_counts[key] = rep.label_counts.get(key, 0) + cnt
        rep.label_freq_sum[key] = rep.label_freq_sum.get(key, 0.0) + f
        rep.label_freq_sumsq[key] = rep.label_freq_sumsq.get(key, 0.0) + f * f

    if (
        max_contamination is not None
        and rep.contamination_fraction > max_contamination
    ):
        raise BoundaryContamination(
            f"{rep.contaminated_probes}/{rep.total_probes} probes saw a "
            f"second-class particle within {margin} sites of the boundary "
            f"(allowed fraction {max_contamination})"
        )
    return rep


def replica_rng(seed, index):
    """Documented stream-splitting rule: replica i draws from
    default_rng(SeedSequence([seed, i]))."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def run_ensemble(
    p,
    d,
    window,
    T,
    replicas,
    seed,
    probes=10,
    eps=1e-6,
    margin=5,
    max_contamination=None,
    workers=1,
):
    """Independent replicas with per-replica RNG streams, merged in replica
    order so the result does not depend on scheduling."""
    if replicas < 1:
        raise ValueError("need at least one replica")

    def one(i):
        return simulate_stationary(
            p,
            d,
            window,
            T,
            replica_rng(seed, i),
            probes=probes,
            eps=eps,
            margin=margin,
            max_contamination=None,
            keep_log=False,
        )

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, range(replicas)))
    else:
        results = [one(i) for i in range(replicas)]
    merged = results[0]
    for rep in results[1:]:
        merged.merge(rep)
    if (
        max_contamination is not None
        and merged.contamination_fraction > max_contamination
    ):
        raise BoundaryContamination(
            f"{merged.contaminated_probes}/{merged.total_probes} probes "
            f"contaminated (allowed fraction {max_contamination})"
        )
    return merged

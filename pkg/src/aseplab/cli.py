"""Command-line front end.

Three subcommands: `verify` runs identity checks (numeric or exact),
`simulate` runs the coupled second-class Monte Carlo against the closed
forms, `dist` tabulates any closed-form law on a grid.  Output is CSV
(RFC-4180-style quoting, one `#`-prefixed metadata line on top) or JSON
(`{"meta": {...}, "rows": [...]}`).  With a fixed --seed every byte of the
output except the timestamp inside the metadata is reproducible.
"""

import argparse
import itertools
import json
import sys
from datetime import datetime, timezone

from .blocking import (
    AsepParams,
    WindowTooNarrow,
    marginal,
    prob_left_particles,
    prob_N,
    prob_right_holes,
    prob_window_particles,
)
from .coupling import (
    BoundaryContamination,
    pi_label,
    prob_positions,
    prob_second_class_at,
    run_ensemble,
)
from .qseries import DEFAULT_POLICY, q_pascal_check
from .verify import (
    verify_durfee,
    verify_durfee_exact,
    verify_euler,
    verify_euler_exact,
    verify_jacobi,
    verify_qbinomial,
    verify_qbinomial_exact,
)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _csv_quote(s):
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _emit(args, meta, header, rows):
    """Serialize one table.  CSV: meta as a single # line, then header and
    rows; JSON: {"meta", "rows"} with row dicts keyed by the header."""
    if args.format == "json":
        payload = {
            "meta": meta,
            "rows": [dict(zip(header, row)) for row in rows],
        }
        text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    else:
        lines = ["# " + json.dumps(meta, sort_keys=True)]
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_csv_quote(_fmt(v)) for v in row))
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(args, extra=None):
    meta = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "truncation": {
            "eps": DEFAULT_POLICY.eps,
            "max_terms": DEFAULT_POLICY.max_terms,
        },
    }
    for key in ("q", "c", "d", "seed", "tol"):
        if hasattr(args, key) and getattr(args, key) is not None:
            meta[key] = getattr(args, key)
    if getattr(args, "window", None) is not None:
        meta["window"] = list(args.window)
    if extra:
        meta.update(extra)
    return meta


def _parse_window(text):
    try:
        lo, hi = text.split(":")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    if lo >= hi:
        raise argparse.ArgumentTypeError("window needs lo < hi")
    return lo, hi


def _parse_span(text):
    """Integer or inclusive lo:hi range."""
    if ":" in text:
        lo, hi = text.split(":")
        lo, hi = int(lo), int(hi)
        if lo > hi:
            raise argparse.ArgumentTypeError("range needs lo <= hi")
        return lo, hi
    v = int(text)
    return v, v


def _q_arg(text):
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("q must lie in (0,1)")
    return v


def _seed_arg(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in uint64")
    return v


def _require(parser, cond, msg):
    if not cond:
        parser.error(msg)  # exits 2


# ---------------------------------------------------------------- verify


def cmd_verify(parser, args):
    rows = []
    header = [
        "identity",
        "params",
        "lhs",
        "rhs",
        "rel_dev",
        "trunc_bound",
        "tol",
        "passed",
    ]

    def add(report):
        pstr = ";".join(f"{k}={_fmt(v)}" for k, v in report.params.items())
        rows.append(
            [
                report.name,
                pstr,
                report.lhs,
                report.rhs,
                report.rel_dev,
                report.trunc_bound,
                report.tol,
                report.passed,
            ]
        )
        return report.passed

    def add_exact(name, params, ok):
        pstr = ";".join(f"{k}={_fmt(v)}" for k, v in params.items())
        rows.append([name, pstr, None, None, None, None, None, ok])
        return ok

    ok = True
    tol = args.tol
    kw = {} if tol is None else {"tol": tol}
    if args.exact:
        if args.identity in ("durfee", "all"):
            for n in range(-3, 4):
                ok &= add_exact(
                    "durfee_exact",
                    {"N": args.N, "n_offset": n},
                    verify_durfee_exact(args.N, n),
                )
        if args.identity in ("euler", "all"):
            ok &= add_exact(
                "euler_exact",
                {"N": args.N, "K": args.K},
                verify_euler_exact(args.N, args.K),
            )
        if args.identity in ("qbinomial", "all"):
            for m in range(0, args.m + 1):
                ok &= add_exact(
                    "qbinomial_exact", {"m": m}, verify_qbinomial_exact(m)
                )
            pascal = all(
                q_pascal_check(m, k)
                for m in range(1, args.m + 1)
                for k in range(0, m + 1)
            )
            ok &= add_exact("q_pascal", {"m_max": args.m}, pascal)
        if args.identity == "jacobi":
            parser.error("jacobi has no exact mode; drop --exact")
    else:
        _require(parser, args.q is not None, "--q is required for numeric checks")
        q, z = args.q, args.z
        if args.identity in ("durfee", "all"):
            ok &= add(verify_durfee(q, args.n_offset, **kw))
        if args.identity in ("euler", "all"):
            ok &= add(verify_euler(q, z, **kw))
        if args.identity in ("qbinomial", "all"):
            ok &= add(verify_qbinomial(q, z, args.m, **kw))
        if args.identity in ("jacobi", "all"):
            ok &= add(verify_jacobi(q, z, **kw))

    meta = _meta(args, {"identity": args.identity, "exact": bool(args.exact)})
    _emit(args, meta, header, rows)
    return 0 if ok else 1


# -------------------------------------------------------------- simulate


def cmd_simulate(parser, args):
    _require(parser, args.replicas >= 1, "--replicas must be >= 1")
    _require(parser, args.d >= 0, "--d must be >= 0")
    _require(parser, args.T >= 0, "--T must be >= 0")
    p = AsepParams(q=args.q, c=args.c)
    try:
        rep = run_ensemble(
            p,
            args.d,
            args.window,
            args.T,
            replicas=args.replicas,
            seed=args.seed,
            probes=args.probes,
            eps=args.window_eps,
            margin=args.margin,
            max_contamination=args.max_contamination,
            workers=args.workers,
        )
    except BoundaryContamination as e:
        print(f"boundary contamination: {e}", file=sys.stderr)
        return 1

    header = ["table", "key", "count", "empirical", "sem", "analytic", "z"]
    rows = []

    def z_of(mean, sem, target):
        if sem > 0:
            return (mean - target) / sem
        return None

    mean, sem = rep.xi_site_stats()
    for j, site in enumerate(rep.sites):
        t = marginal(int(site), 1, p)
        rows.append(
            ["xi_site", str(site), None, float(mean[j]), float(sem[j]), t,
             z_of(float(mean[j]), float(sem[j]), t)]
        )
    pe = AsepParams(q=p.q, c=p.c + rep.d)
    mean, sem = rep.eta_site_stats()
    for j, site in enumerate(rep.sites):
        t = marginal(int(site), 1, pe)
        rows.append(
            ["eta_site", str(site), None, float(mean[j]), float(sem[j]), t,
             z_of(float(mean[j]), float(sem[j]), t)]
        )
    if rep.d:
        freq = rep.x_freq_stats()
        for key in sorted(rep.x_counts):
            m, s = freq[key]
            t = prob_positions(key, p)
            rows.append(
                ["x", ",".join(map(str, key)), rep.x_counts[key],
                 float(m), float(s), t, z_of(float(m), float(s), t)]
            )
        lfreq = rep.label_freq_stats()
        for key in sorted(rep.label_counts):
            m, s = lfreq[key]
            t = pi_label(key, p.q)
            rows.append(
                ["label", ",".join(map(str, key)), rep.label_counts[key],
                 float(m), float(s), t, z_of(float(m), float(s), t)]
            )

    meta = _meta(args, rep.meta())
    meta["contamination_fraction"] = rep.contamination_fraction
    _emit(args, meta, header, rows)
    return 1 if rep.N_violations else 0


# ------------------------------------------------------------------ dist


def cmd_dist(parser, args):
    p = AsepParams(q=args.q, c=args.c)
    rows = []
    header = ["key", "prob"]

    if args.law == "N":
        span = args.n or (-10, 10)
        header = ["key", "prob", "ratio", "ratio_expected"]
        for n in range(span[0], span[1] + 1):
            pr = prob_N(n, p)
            ratio = pr / prob_N(n - 1, p)
            rows.append([str(n), pr, ratio, p.q ** (n - p.c)])
        total = sum(r[1] for r in rows)
        rows.append(["sum", total, None, None])
    elif args.law == "left-particles":
        _require(parser, args.m is not None and args.m[0] == args.m[1],
                 "--m must be a single site")
        span = args.k or (0, 20)
        _require(parser, span[0] >= 0, "k must be >= 0")
        for k in range(span[0], span[1] + 1):
            rows.append([str(k), prob_left_particles(args.m[0], k, p)])
        rows.append(["sum", sum(r[1] for r in rows)])
    elif args.law == "window-particles":
        _require(parser, args.m1 is not None and args.m2 is not None,
                 "--m1 and --m2 are required")
        mhat = args.m2 - args.m1 - 1
        _require(parser, mhat >= 1, "need m2 > m1 + 1")
        span = args.k or (0, mhat)
        _require(parser, 0 <= span[0] and span[1] <= mhat,
                 f"k must lie in 0..{mhat}")
        for k in range(span[0], span[1] + 1):
            rows.append([str(k), prob_window_particles(args.m1, args.m2, k, p)])
        rows.append(["sum", sum(r[1] for r in rows)])
    elif args.law == "right-holes":
        _require(parser, args.m is not None and args.m[0] == args.m[1],
                 "--m must be a single site")
        span = args.n or (0, 20)
        _require(parser, span[0] >= 0, "n must be >= 0")
        for n in range(span[0], span[1] + 1):
            rows.append([str(n), prob_right_holes(args.m[0], n, p)])
        rows.append(["sum", sum(r[1] for r in rows)])
    elif args.law == "second-class":
        _require(parser, args.d >= 1, "--d must be >= 1")
        span = args.m or (-10, 10)
        for m in range(span[0], span[1] + 1):
            rows.append([str(m), prob_second_class_at(m, p, args.d)])
        rows.append(["sum", sum(r[1] for r in rows)])
    elif args.law == "positions":
        _require(parser, args.d >= 1, "--d must be >= 1")
        span = args.m or (-8, 8)
        sites = range(span[0], span[1] + 1)
        for tup in itertools.combinations(sites, args.d):
            rows.append([",".join(map(str, tup)), prob_positions(tup, p, args.d)])
        rows.append(["sum", sum(r[1] for r in rows)])
    elif args.law == "pi":
        _require(parser, args.d >= 1, "--d must be >= 1")
        for tup in itertools.combinations(range(args.cap + 1), args.d):
            rows.append([",".join(map(str, tup)), pi_label(tup, p.q)])
        rows.append(["sum", sum(r[1] for r in rows)])

    meta = _meta(args, {"law": args.law})
    _emit(args, meta, header, rows)
    return 0


# ------------------------------------------------------------------ main


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aseplab",
        description="Blocking-measure laws, identity checks, and coupled "
        "second-class simulations for ASEP on Z.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("verify", help="identity checks")
    sp.add_argument(
        "--identity",
        required=True,
        choices=("durfee", "euler", "qbinomial", "jacobi", "all"),
    )
    sp.add_argument("--exact", action="store_true",
                    help="integer/combinatorial suites instead of floats")
    sp.add_argument("--q", type=_q_arg, default=None)
    sp.add_argument("--z", type=float, default=1.0)
    sp.add_argument("--n-offset", dest="n_offset", type=int, default=0)
    sp.add_argument("--m", type=int, default=12, help="max m for qbinomial")
    sp.add_argument("--N", type=int, default=25, help="exact-suite size cap")
    sp.add_argument("--K", type=int, default=6, help="exact euler z-degree")
    sp.add_argument("--tol", type=float, default=None)
    common(sp)

    sp = sub.add_parser("simulate", help="coupled Monte Carlo vs closed forms")
    sp.add_argument("--q", type=_q_arg, required=True)
    sp.add_argument("--c", type=float, default=0.0)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--window", type=_parse_window, required=True,
                    metavar="LO:HI", help="use --window=-25:25 for negatives")
    sp.add_argument("--T", type=float, default=50.0)
    sp.add_argument("--replicas", type=int, default=200)
    sp.add_argument("--seed", type=_seed_arg, default=0)
    sp.add_argument("--probes", type=int, default=10)
    sp.add_argument("--window-eps", dest="window_eps", type=float, default=1e-6,
                    help="max admissible boundary-marginal defect")
    sp.add_argument("--margin", type=int, default=5)
    sp.add_argument("--max-contamination", dest="max_contamination",
                    type=float, default=None)
    sp.add_argument("--workers", type=int, default=1)
    common(sp)

    sp = sub.add_parser("dist", help="tabulate a closed-form law")
    sp.add_argument(
        "--law",
        required=True,
        choices=(
            "N",
            "left-particles",
            "window-particles",
            "right-holes",
            "second-class",
            "positions",
            "pi",
        ),
    )
    sp.add_argument("--q", type=_q_arg, required=True)
    sp.add_argument("--c", type=float, default=0.0)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--m", type=_parse_span, default=None,
                    metavar="M|LO:HI")
    sp.add_argument("--m1", type=int, default=None)
    sp.add_argument("--m2", type=int, default=None)
    sp.add_argument("--n", type=_parse_span, default=None, metavar="N|LO:HI")
    sp.add_argument("--k", type=_parse_span, default=None, metavar="K|LO:HI")
    sp.add_argument("--cap", type=int, default=20,
                    help="label support cap for --law pi")
    common(sp)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "verify":
            return cmd_verify(parser, args)
        if args.command == "simulate":
            return cmd_simulate(parser, args)
        if args.command == "dist":
            return cmd_dist(parser, args)
    except SystemExit as e:  # parser.error inside handlers
        return int(e.code or 0)
    except (ValueError, WindowTooNarrow) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())

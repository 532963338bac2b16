"""Command-line entry point: ``excheck <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__, embedding, expsums, fewnomial, gadget, ordinary, primes, report
from .errors import BudgetExceeded, InvalidArgument, InvalidParameter, NeedsMorePrecision, NumericFailure

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _dump(obj, path):
    text = json.dumps(report._plain(obj), sort_keys=True, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(args, name, rows, columns=None, path=None):
    if path:
        p = Path(path)
        return report.emit_csv(p.stem, rows, p.parent, columns)
    if args.csv_dir:
        return report.emit_csv(name, rows, args.csv_dir, columns)
    return None


# ---------------------------------------------------------------- subcommands

def cmd_ordinary(args) -> int:
    rec = ordinary.verify_bound(args.n)
    out = rec.to_dict()
    out["embedding_checked"] = None
    ok = rec.passed
    if args.embed:
        emb = embedding.embed_real(rec.m)
        scan = embedding.scan_triples(emb)
        agree = (scan.mismatches == 0 and embedding.scan_vertical_lines(emb) == 0
                 and scan.gap_ratio >= embedding.MIN_GAP_RATIO
                 and embedding.max_points_on_pair_lines(emb) <= 3)
        out["embedding_checked"] = agree
        out["embedding"] = {"triples": scan.triples, "gap_ratio": min(scan.gap_ratio, 1e300),
                            "min_noncollinear_det": scan.min_noncollinear_det}
        ok &= agree
    if args.json:
        _dump(out, args.json)
    if args.json != "-":
        print(f"n={rec.n} m={rec.m} s={rec.s} ord={rec.ord} lower_bound={float(rec.lower_bound):.4f} "
              f"bipartite={rec.bipartite} embedding_checked={out['embedding_checked']} "
              f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_expsum(args) -> int:
    ks = range(1, args.kmax + 1)
    if args.baseline == "clunie":
        sups = [expsums.clunie_baseline(k, args.nmax) for k in ks]
    else:
        oracle = (expsums.ScrambleOracle.zeros() if args.baseline == "vdc"
                  else expsums.ScrambleOracle(args.seed))
        sups = [s.sup_abs for s in expsums.sup_partial_sums_many(oracle, ks, args.nmax)]
    rows = [{"k": k, "sup_abs": s, "envelope": expsums.envelope(k), "ratio": s / expsums.envelope(k)}
            for k, s in zip(ks, sups)]
    _csv(args, "expsum_ratio", rows, ["k", "sup_abs", "envelope", "ratio"], args.csv)
    best = max(rows, key=lambda r: r["ratio"])
    summary = {"seed": None if args.baseline else args.seed, "baseline": args.baseline,
               "kmax": args.kmax, "nmax": args.nmax, "max_ratio": best["ratio"], "argmax_k": best["k"]}
    if args.json:
        _dump({**summary, "rows": rows}, args.json)
    if args.json != "-":
        print(f"kmax={args.kmax} nmax={args.nmax} baseline={args.baseline or 'scrambled'} "
              f"max_ratio={best['ratio']:.6f} at k={best['k']}")
    return EXIT_OK if math.isfinite(best["ratio"]) else EXIT_FAIL


def cmd_gadget(args) -> int:
    G = gadget.build_graph(args.m)
    out = {"m": args.m, "vertices": G.vertex_count, "edges": G.edge_count, "blocks": len(G.blocks),
           "deg_v": len(G.nbrs[G.v]), "k4_free": gadget.check_k4_free(G)}
    ok = out["k4_free"] and G.vertex_count == 20 * args.m + 31
    if args.chromatic:
        res = gadget.chromatic_number(G)
        cert = res.unsat_certificate
        out["chromatic_number"] = res.chi
        out["unsat_nodes"] = cert.nodes if cert else None
        out["coloring"] = {G.vertices[i].dot_name(): c for i, c in enumerate(res.coloring)}
        out["minus_edge_2_degenerate"] = gadget.all_proper_subgraphs_3colorable(G)
        ok &= res.chi == 4 and out["minus_edge_2_degenerate"]
    if args.max_chords:
        info = gadget.max_chords(G, cap=args.cap)
        out["max_chords"] = info["max_chords"]
        out["cycles"] = info["cycles"]
        w = info["witness"]
        out["witness_cycle"] = [G.vertices[i].dot_name() for i in w.vertices] if w else None
        ok &= info["max_chords"] <= 10
    if args.dot:
        Path(args.dot).write_text(gadget.to_dot(G), encoding="utf-8")
    if args.json:
        _dump(out, args.json)
    if args.json != "-":
        print(" ".join(f"{k}={v}" for k, v in out.items() if k not in ("coloring", "witness_cycle")),
              "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fewnomial(args) -> int:
    inst = fewnomial.build_instance(args.N, args.K, args.bits)
    h = fewnomial.height_M(inst)
    exact = [str(fewnomial.derivative_exact(inst.spec, k)) for k in range(args.N + 2)]
    residuals = [float(fewnomial.derivative_at_root(inst, k)) for k in range(args.N + 2)]
    out = {**inst.to_dict(), "M": inst.ctx.nstr(h.M, 20), "limit_gap": h.limit_gap,
           "exact_derivatives": exact, "derivative_residuals": residuals,
           "endpoint_residuals": [float(r) for r in inst.endpoint_residuals()]}
    ok = exact == ["0"] * (args.N + 1) + ["1"]
    if args.sweep:
        rows = []
        K = 2
        while K <= args.K:
            g = fewnomial.height_M(fewnomial.build_instance(args.N, K))
            rows.append({"N": args.N, "K": K, "M": float(g.M), "gap": g.limit_gap})
            K *= 2
        out["sweep"] = rows
        _csv(args, "height_sweep", rows, ["N", "K", "M", "gap"])
    if args.json:
        _dump(out, args.json)
    if args.json != "-":
        print(f"N={args.N} K={args.K} M={inst.ctx.nstr(h.M, 12)} x0={inst.ctx.nstr(inst.x0, 12)} "
              f"bits={inst.precision_bits} certified_digits={inst.certified_digits} "
              f"{'PASS' if ok else 'FAIL'}")
        print("coefficients:", ", ".join(out["coefficients"]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_primes(args) -> int:
    res = primes.sweep(args.a, args.nmax, coprime=not args.no_coprime)
    out = res.to_dict()
    if args.witnesses:
        out["witnesses"] = [primes.witness_prime(args.a, n).to_dict() for n in res.holding]
    if args.json:
        _dump(out, args.json)
    if args.json != "-":
        print(f"a={args.a} nmax={args.nmax} coprime={not args.no_coprime} "
              f"count={len(res.holding)} max={res.maximum}")
    return EXIT_OK


def _check_target(path):
    if path and path != "-" and not Path(path).parent.is_dir():
        raise OSError(f"output directory does not exist: {Path(path).parent}")


def cmd_all(args) -> int:
    _check_target(args.json)
    if args.csv_dir and not Path(args.csv_dir).is_dir():
        raise OSError(f"CSV directory does not exist: {args.csv_dir}")
    cfg = report.RunConfig(seed=args.seed, workers=args.workers,
                           profile="quick" if args.quick else "full",
                           json_path=args.json, csv_dir=args.csv_dir, timings=args.timings,
                           only=tuple(args.only) if args.only else None)
    rep = report.run_all(cfg)
    if args.json:
        if args.json == "-":
            sys.stdout.write(report.report_json(rep))
        else:
            report.write_report(rep, args.json)
    if args.csv_dir:
        for name, rows in sorted(rep["_series"].items()):
            report.emit_csv(name, rows, args.csv_dir)
    if args.json != "-":
        for c in rep["claims"]:
            print(f"{c['status'].upper():8s} {c['claim_id']}")
        s = rep["summary"]
        print(f"{s['pass']} pass, {s['fail']} fail, {s['measured']} measured; "
              f"sha256 {report.report_digest(rep)}")
    return report.exit_code(rep)


# ---------------------------------------------------------------- parser

def _seed(text: str) -> str:
    t = text.lower().removeprefix("0x")
    if not t or len(t) > 64 or any(c not in "0123456789abcdef" for c in t):
        raise argparse.ArgumentTypeError("seed must be a hex string of at most 256 bits")
    return t.rjust(64, "0")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _global_options(p, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=_seed, default=d(None),
                   help=f"256-bit hex seed (default: ${report.SEED_ENV} or the reference seed)")
    p.add_argument("--workers", type=_positive, default=d(1), help="worker processes")
    p.add_argument("--json", metavar="PATH", default=d(None), help="write JSON here ('-' for stdout)")
    p.add_argument("--csv-dir", metavar="DIR", default=d(None), help="directory for CSV series")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="excheck", description="Verification suite for five explicit constructions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ordinary", parents=[common], help="ordinary-line construction for n points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--embed", action="store_true", help="also cross-check on the real cubic (7m <= 105)")
    p.set_defaults(func=cmd_ordinary)

    p = sub.add_parser("expsum", parents=[common], help="exponential-sum envelope table")
    p.add_argument("--kmax", type=_positive, default=256)
    p.add_argument("--nmax", type=_positive, default=1 << 20)
    p.add_argument("--baseline", choices=["clunie", "vdc"])
    p.add_argument("--csv", metavar="PATH", help="write the (k, sup_abs, envelope, ratio) table here")
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("gadget", parents=[common], help="pentagon caterpillar graph G_m")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--max-chords", action="store_true")
    p.add_argument("--chromatic", action="store_true")
    p.add_argument("--cap", type=_positive, default=gadget.DEFAULT_CYCLE_CAP)
    p.add_argument("--dot", metavar="PATH")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("fewnomial", parents=[common], help="the sparse polynomial f_{N,K}")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--bits", type=int)
    p.add_argument("--sweep", action="store_true", help="height for K = 2, 4, ... up to --K")
    p.set_defaults(func=cmd_fewnomial)

    p = sub.add_parser("primes", parents=[common], help="n - a k^2 prime sweep")
    p.add_argument("--a", type=_positive, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--no-coprime", action="store_true", help="check every k, not only gcd(k, n) = 1")
    p.add_argument("--witnesses", action="store_true")
    p.set_defaults(func=cmd_primes)

    p = sub.add_parser("all", parents=[common], help="run every claim and write the report")
    p.add_argument("--quick", action="store_true", help="small parameters (seconds, not minutes)")
    p.add_argument("--timings", action="store_true", help="record runtimes (makes the report nondeterministic)")
    p.add_argument("--only", nargs="+", metavar="PREFIX", help="claim id prefixes to run")
    p.set_defaults(func=cmd_all)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = _seed(report.default_seed())
    try:
        return args.func(args)
    except (InvalidParameter, InvalidArgument, NeedsMorePrecision, NumericFailure, BudgetExceeded) as exc:
        print(f"excheck: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"excheck: io error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

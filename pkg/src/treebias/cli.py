"""Command-line front end.

Subcommands map one-to-one onto the library analyses:

  analyze    type map + gap/bound report for a tree file (exit 0 iff the
             claimed bound holds for that tree)
  enumerate  exhaustive gap-vs-bound check over all labeled trees up to
             n_max (exit nonzero if any tree violates the bound)
  construct  exploration-construction trace for a tree file
  exact      vertex/edge/parent densities for a pmf spec
  mono       monotonicity verdict for a pmf spec or Poisson rate(s)
  simulate   seeded Monte Carlo estimates
  figures    regenerate the preset figure data (fig1 | fig2)

Every command is deterministic given its flags; the default seed is the
fixed constant 20250811, not wall-clock time.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .densities import (
    MonoVerdict,
    Significance,
    density_report,
    mono_condition,
    scan_poisson_mono,
)
from .errors import TreeBiasError
from .finite import exhaustive_check, exploration_construction, verify_theorem
from .pmf import poisson_truncated
from .simulate import (
    classify_to_depth,
    estimate_edge_densities,
    export_colored_dot,
    sample_tree,
    types_as_map,
)
from .trees import vertex_types

DEFAULT_SEED = 20250811


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_pmf(args) -> "OffspringPmf":
    if getattr(args, "poisson", None) is not None:
        return poisson_truncated(args.poisson, args.eps)
    if getattr(args, "pmf", None):
        return io.load_pmf_spec(args.pmf, mode=args.mode)
    raise TreeBiasError("give --pmf JSON/file or --poisson RATE")


def cmd_analyze(args) -> int:
    tree = io.load_tree(args.tree, root=args.root)
    report = verify_theorem(tree)
    types = {v: t for v, t in enumerate(vertex_types(tree))}
    doc = io.types_to_json(types)
    doc["report"] = io.theorem_report_json(report)
    _write(io.dump_json(doc), args.out)
    return 0 if report.holds else 1


def cmd_enumerate(args) -> int:
    summary = exhaustive_check(args.n_max, threads=args.threads)
    _write(io.dump_json(io.summary_json(summary)), args.out)
    return 0 if summary.total_violations == 0 else 1


def cmd_construct(args) -> int:
    tree = io.load_tree(args.tree, root=args.root)
    trace = exploration_construction(tree)
    _write(io.dump_json(io.trace_json(trace)), args.out)
    return 0


def cmd_exact(args) -> int:
    p = _load_pmf(args)
    report = density_report(p)
    _write(io.dump_json(io.density_report_json(report, p)), args.out)
    return 0 if report.significance in (Significance.SIGNIFICANT,
                                        Significance.STRICTLY_SIGNIFICANT) else 1


def cmd_mono(args) -> int:
    if args.scan:
        lo, hi, step = args.scan
        points = scan_poisson_mono(lo, hi, step, eps=args.eps,
                                   k_tilde_set=args.k_tilde or None)
        doc = {"scan": [
            {"lambda": pt.lam, "verdict": pt.verdict.value,
             **({"witness": io.witness_json(pt.witness)}
                if pt.witness else {})}
            for pt in points]}
        _write(io.dump_json(doc), args.out)
        return 0 if all(pt.verdict is MonoVerdict.HOLDS for pt in points) else 2
    p = _load_pmf(args)
    res = mono_condition(p, k_max=args.k_max, cert_eps=args.cert_eps,
                         k_tilde_set=args.k_tilde or None)
    if args.format == "csv":
        lam = args.poisson if args.poisson is not None else None
        _write(io.mono_values_csv(res, lam=lam), args.out)
    else:
        _write(io.dump_json(io.mono_result_json(res)), args.out)
    if res.verdict is MonoVerdict.HOLDS:
        return 0
    return 2 if res.verdict is MonoVerdict.FAILS else 3


def cmd_simulate(args) -> int:
    p = _load_pmf(args)
    if args.format == "dot":
        t = sample_tree(p, args.depth, args.seed)
        types = types_as_map(t, classify_to_depth(t))
        shown = t.to_tree(max_gen=min(args.depth, t.depth_sampled))
        shown_types = {v: types[v] for v in range(shown.n) if v in types}
        _write(export_colored_dot(shown, shown_types), args.out)
        return 0
    est = estimate_edge_densities(p, args.depth, args.replicas, args.seed,
                                  threads=args.threads)
    if args.format == "csv":
        _write(io.estimate_csv(est), args.out)
    else:
        _write(io.dump_json(io.estimate_json(est)), args.out)
    return 0


def cmd_figures(args) -> int:
    from . import figures  # deferred: pulls in matplotlib

    outdir = Path(args.out or "figures_out")
    if args.which == "fig1":
        written = figures.make_fig1(outdir, seed=args.seed)
    else:
        written = figures.make_fig2(outdir, eps=args.eps)
    sys.stdout.write("\n".join(str(p) for p in written) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="treebias",
        description="Friendship-bias vertex types on finite trees and "
                    "Galton-Watson trees")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_pmf_flags(sp):
        sp.add_argument("--pmf", help="pmf spec as JSON text or a file path")
        sp.add_argument("--poisson", type=float, metavar="RATE",
                        help="truncated Poisson offspring")
        sp.add_argument("--eps", type=float, default=1e-12,
                        help="Poisson truncation tail mass")
        sp.add_argument("--mode", choices=("exact", "float"), default="float",
                        help="numeric mode for --pmf weights")

    sp = sub.add_parser("analyze", help="type map and gap report for a tree")
    sp.add_argument("tree", help="edge list or JSON tree file")
    sp.add_argument("--root", type=int, default=None)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_analyze)

    sp = sub.add_parser("enumerate", help="check all labeled trees up to n_max")
    sp.add_argument("n_max", type=int)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_enumerate)

    sp = sub.add_parser("construct", help="exploration trace for a tree")
    sp.add_argument("tree")
    sp.add_argument("--root", type=int, default=None)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_construct)

    sp = sub.add_parser("exact", help="limiting densities for a pmf")
    add_pmf_flags(sp)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_exact)

    sp = sub.add_parser("mono", help="monotonicity of the tail probabilities")
    add_pmf_flags(sp)
    sp.add_argument("--scan", nargs=3, type=float,
                    metavar=("LO", "HI", "STEP"),
                    help="verdicts over a grid of Poisson rates")
    sp.add_argument("--k-max", type=int, default=None)
    sp.add_argument("--cert-eps", type=float, default=1e-9)
    sp.add_argument("--k-tilde", type=int, nargs="*", default=None,
                    help="restrict parent offspring values")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_mono)

    sp = sub.add_parser("simulate", help="seeded Monte Carlo estimates")
    add_pmf_flags(sp)
    sp.add_argument("--depth", "-m", type=int, default=10)
    sp.add_argument("--replicas", "-r", type=int, default=200)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--format", choices=("json", "csv", "dot"),
                    default="json")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("figures", help="regenerate preset figure data")
    sp.add_argument("which", choices=("fig1", "fig2"))
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.add_argument("--out", help="output directory (default figures_out)")
    sp.set_defaults(fn=cmd_figures)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (TreeBiasError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 64


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

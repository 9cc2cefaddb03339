"""Parsing and serialization for trees, pmf specs, and reports.

Tree files are either a newline-separated edge list (``u v`` per line,
``#`` comments allowed) or JSON ``{"edges": [[u, v], ...], "root": r}``.
Pmf specs are JSON: ``{"pmf": {"1": 0.01, "3": 0.94}}`` with weights as
numbers or fraction strings ("94/100"), or ``{"poisson": 2.0, "eps": 1e-12}``.
All JSON output uses sorted keys so byte-identical reruns compare equal.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .densities import DensityReport, MonoResult
from .finite import ExhaustiveSummary, ExplorationTrace, TheoremReport
from .pmf import OffspringPmf, make_pmf, poisson_truncated
from .simulate import SimEstimate, TraceRow
from .trees import Tree, VertexType, build_tree


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------

def parse_tree_text(text: str, root: Optional[int] = None) -> Tree:
    """Tree from an edge-list or JSON description."""
    stripped = text.strip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        edges = [(int(u), int(v)) for u, v in doc["edges"]]
        r = int(doc.get("root", 0)) if root is None else root
        return build_tree(edges, root=r)
    edges = []
    for line in stripped.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        u, v = line.split()
        edges.append((int(u), int(v)))
    return build_tree(edges, root=root if root is not None else 0)


def load_tree(path: Union[str, Path], root: Optional[int] = None) -> Tree:
    return parse_tree_text(Path(path).read_text(), root=root)


def types_to_json(types: dict[int, VertexType]) -> dict:
    return {"types": {str(v): t.symbol for v, t in sorted(types.items())}}


# ---------------------------------------------------------------------------
# Pmf specs
# ---------------------------------------------------------------------------

def _parse_weight(x, exact: bool):
    if exact:
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"exact mode needs int/str/Fraction weights, got {x!r}")
    return float(Fraction(x)) if isinstance(x, str) else float(x)


def load_pmf_spec(spec: str, mode: str = "float") -> OffspringPmf:
    """Pmf from a JSON string or a path to a JSON file.

    ``mode="exact"`` parses decimal literals as exact fractions, so
    ``0.94`` means 94/100.
    """
    text = spec
    p = Path(spec)
    try:
        if p.exists() and p.is_file():
            text = p.read_text()
    except OSError:
        pass
    exact = mode == "exact"
    doc = json.loads(text, parse_float=Fraction if exact else float)
    if "poisson" in doc:
        lam = float(doc["poisson"])
        eps = float(doc.get("eps", 1e-12))
        return poisson_truncated(lam, eps)
    if "pmf" not in doc:
        raise ValueError('pmf spec needs a "pmf" or "poisson" key')
    entries = {int(k): _parse_weight(v, exact) for k, v in doc["pmf"].items()}
    return make_pmf(entries, label=doc.get("label", ""))


def pmf_spec_json(p: OffspringPmf) -> dict:
    """Round-trippable spec for an existing pmf."""
    if p.exact:
        weights = {str(k): str(w) for k, w in sorted(p.weights.items())}
    else:
        weights = {str(k): float(w) for k, w in sorted(p.weights.items())}
    doc = {"pmf": weights}
    if p.label:
        doc["label"] = p.label
    return doc


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------

def _num(x) -> float:
    return float(x)


def theorem_report_json(r: TheoremReport) -> dict:
    return {"n": r.n, "gap": r.gap, "bound": r.bound,
            "is_path": r.is_path, "holds": r.holds}


def trace_json(tr: ExplorationTrace) -> dict:
    return {
        "root": tr.root,
        "lower_bound": tr.lower_bound,
        "final_counts": tr.final_counts.as_dict(),
        "all_steps_meet_claimed_bounds": tr.all_steps_meet_claimed_bounds,
        "steps": [
            {
                "index": s.index,
                "case": s.case.value,
                "added": list(s.added),
                "anchor": s.anchor,
                "anchor_degree": s.anchor_degree,
                "path_length": s.path_length,
                "neutral_parent_case": s.neutral_parent_case,
                "counts": s.counts.as_dict(),
                "delta": s.delta,
                "claimed_delta_bound": s.claimed_delta_bound,
                "meets_claimed_bound": s.meets_claimed_bound,
            }
            for s in tr.steps
        ],
    }


def summary_json(s: ExhaustiveSummary) -> dict:
    return {
        "n_max": s.n_max,
        "total_trees": s.total_trees,
        "total_violations": s.total_violations,
        "per_n": [
            {
                "n": x.n,
                "trees": x.trees,
                "violations": x.violations,
                "tight": x.tight,
                "paths": x.paths,
                "example_violations": [list(map(list, e))
                                       for e in x.example_violations],
            }
            for x in s.per_n
        ],
    }


def density_report_json(r: DensityReport, pmf: OffspringPmf) -> dict:
    return {
        "pmf_spec": pmf_spec_json(pmf),
        "vertex": {t.symbol: _num(v) for t, v in r.vertex.items()},
        "edge": {a.symbol + b.symbol: _num(v)
                 for (a, b), v in r.edge.items()},
        "parent": {t.symbol: _num(v) for t, v in r.parent.items()},
        "truncation_error": r.truncation_error,
        "significance": r.significance.value,
        "correlation_gap": _num(r.correlation_gap),
    }


def witness_json(w) -> dict:
    return {"k_tilde": w.k_tilde, "k_from": w.k_from, "k_to": w.k_to,
            "value_from": w.value_from, "value_to": w.value_to}


def mono_result_json(r: MonoResult) -> dict:
    doc = {
        "verdict": r.verdict.value,
        "k_checked": list(r.k_checked),
        "cert_eps": r.cert_eps,
        "certified": r.certified,
    }
    if r.witness is not None:
        doc["witness"] = witness_json(r.witness)
    return doc


def mono_values_csv(r: MonoResult, lam: Optional[float] = None) -> str:
    """CSV grid ``k_tilde,k,lambda,f`` of the checked tail probabilities."""
    rows = ["k_tilde,k,lambda,f"]
    lam_str = "" if lam is None else repr(float(lam))
    for kt in sorted(r.values):
        for k, f in r.values[kt]:
            rows.append(f"{kt},{k},{lam_str},{f!r}")
    return "\n".join(rows) + "\n"


def estimate_json(e: SimEstimate) -> dict:
    return {
        "pmf_label": e.pmf_label,
        "depth": e.depth,
        "replicas": e.replicas,
        "seed": e.seed,
        "survival_rate": e.survival_rate,
        "vertex": {t.symbol: {"estimate": v[0], "stderr": v[1]}
                   for t, v in e.vertex.items()},
        "edge": {a.symbol + b.symbol: {"estimate": v[0], "stderr": v[1]}
                 for (a, b), v in e.edge.items()},
    }


def estimate_csv(e: SimEstimate) -> str:
    rows = [f"# pmf={e.pmf_label} seed={e.seed} replicas={e.replicas}",
            "m,type,ratio,stderr"]
    for t, (est, se) in e.vertex.items():
        rows.append(f"{e.depth},{t.symbol},{est!r},{se!r}")
    rows.append("m,parent_type,child_type,ratio,stderr")
    for (a, b), (est, se) in e.edge.items():
        rows.append(f"{e.depth},{a.symbol},{b.symbol},{est!r},{se!r}")
    return "\n".join(rows) + "\n"


def trace_csv(rows: list[TraceRow], label: str, seed: int) -> str:
    out = [f"# pmf={label} seed={seed}", "m,type,ratio,counted"]
    for r in rows:
        for t, ratio in r.ratios.items():
            out.append(f"{r.m},{t.symbol},{ratio!r},{r.counted}")
    return "\n".join(out) + "\n"


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"

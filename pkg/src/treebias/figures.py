"""Preset figure data: colored tree realizations and tail-probability curves.

Two presets mirror the simulation study this toolkit reproduces:

* ``fig1``: one Poisson(lam) tree per lam in {0.1, 0.5, 1, 2}, shown to
  generation 6 with every vertex colored by its type in the infinite
  tree (red positive, blue negative, plain neutral).  Emits one DOT file
  per rate plus a rendered PNG panel.
* ``fig2``: curves k -> P(kt + S_k - k(k+1) > 0) for kt in
  {1, 2, 5, 8, 10} and lam in {1.5, 2, 3, 7}.  Emits a CSV grid plus a
  rendered PNG panel.

Rendering uses matplotlib's Agg backend; the data files are the primary
output and are written regardless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .densities import poisson_tail_f
from .pmf import poisson_truncated
from .simulate import (
    SampledTree,
    classify_to_depth,
    export_colored_dot,
    sample_tree,
    types_as_map,
)
from .trees import Tree, VertexType

FIG1_LAMBDAS = (0.1, 0.5, 1.0, 2.0)
FIG1_DEPTH = 6
FIG2_K_TILDES = (1, 2, 5, 8, 10)
FIG2_LAMBDAS = (1.5, 2.0, 3.0, 7.0)
FIG2_K_RANGE = tuple(range(1, 13))

_COLOR = {VertexType.POSITIVE: "#d62728",
          VertexType.NEGATIVE: "#1f77b4",
          VertexType.NEUTRAL: "white"}


def _tree_layout(tree: Tree) -> dict[int, tuple[float, float]]:
    """x by in-order leaf rank, y by depth below the root."""
    depth = {tree.root: 0}
    order = [tree.root]
    for v in order:
        for c in tree.children[v]:
            depth[c] = depth[v] + 1
            order.append(c)
    pos: dict[int, tuple[float, float]] = {}
    next_x = [0.0]

    def place(v: int) -> float:
        kids = tree.children[v]
        if not kids:
            x = next_x[0]
            next_x[0] += 1.0
        else:
            xs = [place(c) for c in kids]
            x = sum(xs) / len(xs)
        pos[v] = (x, -float(depth[v]))
        return x

    place(tree.root)
    return pos


def _draw_tree(ax, tree: Tree, types: dict[int, VertexType], title: str) -> None:
    pos = _tree_layout(tree)
    for u, v in tree.edges():
        ax.plot([pos[u][0], pos[v][0]], [pos[u][1], pos[v][1]],
                color="0.6", lw=0.7, zorder=1)
    xs = [pos[v][0] for v in range(tree.n)]
    ys = [pos[v][1] for v in range(tree.n)]
    colors = [_COLOR[types.get(v, VertexType.NEUTRAL)] for v in range(tree.n)]
    ax.scatter(xs, ys, s=28, c=colors, edgecolors="black",
               linewidths=0.5, zorder=2)
    ax.set_title(title, fontsize=10)
    ax.set_axis_off()


def _fig1_sample(lam: float, seed: int) -> tuple[SampledTree, dict[int, VertexType]]:
    """A displayable realization: deterministically the largest tree among
    a fixed window of derived seeds (subcritical rates die almost
    immediately, so most draws are a bare root)."""
    p = poisson_truncated(lam)
    best = None
    for attempt in range(seed, seed + 64):
        t = sample_tree(p, FIG1_DEPTH, attempt)
        if best is None or t.n_vertices > best.n_vertices:
            best = t
        if best.n_vertices > 40:
            break
    per_gen = classify_to_depth(best)
    return best, types_as_map(best, per_gen)


def make_fig1(outdir: Path, seed: int) -> list[Path]:
    """Colored tree realizations for Poisson rates 0.1, 0.5, 1, 2."""
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    fig, axes = plt.subplots(2, 2, figsize=(11, 11))
    for ax, lam in zip(axes.flat, FIG1_LAMBDAS):
        t, types = _fig1_sample(lam, seed)
        shown = t.to_tree(max_gen=min(FIG1_DEPTH, t.depth_sampled))
        shown_types = {v: types[v] for v in range(shown.n) if v in types}
        dot = export_colored_dot(shown, shown_types,
                                 name=f"poisson_{str(lam).replace('.', '_')}")
        path = outdir / f"fig1_lambda{lam:g}.dot"
        path.write_text(dot)
        written.append(path)
        _draw_tree(ax, shown, shown_types,
                   f"Poisson({lam:g}), generations 0..{FIG1_DEPTH}")
    png = outdir / "fig1.png"
    fig.tight_layout()
    fig.savefig(png, dpi=150)
    plt.close(fig)
    written.append(png)
    return written


def fig2_rows(eps: float = 1e-12) -> list[tuple[int, int, float, float]]:
    """(k_tilde, k, lambda, f) for the preset grid."""
    rows = []
    for lam in FIG2_LAMBDAS:
        for kt in FIG2_K_TILDES:
            for k in FIG2_K_RANGE:
                rows.append((kt, k, lam, poisson_tail_f(kt, k, lam, eps)))
    return rows


def make_fig2(outdir: Path, eps: float = 1e-12) -> list[Path]:
    """Tail-probability curves and their CSV grid."""
    outdir.mkdir(parents=True, exist_ok=True)
    rows = fig2_rows(eps)
    csv_path = outdir / "fig2.csv"
    lines = ["k_tilde,k,lambda,f"]
    for kt, k, lam, f in rows:
        lines.append(f"{kt},{k},{lam!r},{f!r}")
    csv_path.write_text("\n".join(lines) + "\n")

    fig, axes = plt.subplots(2, 2, figsize=(10, 8))
    for ax, lam in zip(axes.flat, FIG2_LAMBDAS):
        for kt in FIG2_K_TILDES:
            pts = [(k, f) for (kt_, k, lam_, f) in rows
                   if kt_ == kt and lam_ == lam]
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker="o", ms=3, label=f"parent offspring {kt}")
        ax.set_title(f"rate {lam:g}")
        ax.set_xlabel("k")
        ax.set_ylabel("P(tail > 0)")
        ax.legend(fontsize=7)
    fig.tight_layout()
    png = outdir / "fig2.png"
    fig.savefig(png, dpi=150)
    plt.close(fig)
    return [csv_path, png]

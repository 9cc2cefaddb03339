"""Seeded Monte Carlo over Galton-Watson trees, typed exactly per vertex.

A tree targeted at depth ``m`` draws offspring counts for every vertex
through generation ``m+1``: that is exactly the information needed to
type every vertex at generation <= m with respect to the infinite tree
(a vertex's type depends on its parent's degree and its children's
degrees).  Children of generation-(m+1) vertices exist only as counts.

Density estimation counts generations 2..m.  The root has no parent and
its children see a parent of degree X rather than X+1, so generations 0
and 1 follow boundary laws; from generation 2 on, the per-vertex type
law is exactly the limiting one, which makes the estimator unbiased at
every finite depth.  Directed edges are counted for parent generations
2..m-1 for the same reason.

Reproducibility: replica ``i`` of a run seeded with ``s`` uses a Philox
stream keyed by ``(s, i)``; results are reduced in replica order, so any
thread count yields byte-identical output.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .errors import AllExtinct, InsufficientDepth, MemoryCapExceeded
from .pmf import OffspringPmf, validate_gw_conditions
from .trees import Tree, VertexType

DEFAULT_MAX_VERTICES = 10 ** 8

TYPE_ORDER = (VertexType.NEGATIVE, VertexType.NEUTRAL, VertexType.POSITIVE)
EDGE_ORDER = tuple((a, b) for a in TYPE_ORDER for b in TYPE_ORDER)


def _replica_rng(seed: int, replica: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(replica,))
    return np.random.Generator(np.random.Philox(ss))


def _sampler(p: OffspringPmf):
    """(values, cum) arrays for inverse-cdf draws from ``p``."""
    values = np.array(sorted(p.weights), dtype=np.int64)
    w = np.array([float(p.weights[int(v)]) for v in values])
    return values, np.cumsum(w)


def _draw(rng: np.random.Generator, size: int, values, cum) -> np.ndarray:
    u = rng.random(size)
    idx = np.searchsorted(cum, u, side="right")
    return values[np.minimum(idx, len(values) - 1)]


def _sample_layers(rng, values, cum, depth: int, max_vertices: int):
    """Offspring counts and parent indices for generations 0..depth.

    Stops early (extinct=True) as soon as a generation is empty; the
    last stored generation then has all-zero offspring, so every stored
    vertex is fully typable.
    """
    offspring = [_draw(rng, 1, values, cum)]
    parents = [np.zeros(0, dtype=np.int64)]
    total = 1
    extinct = False
    for _ in range(depth):
        z_next = int(offspring[-1].sum())
        if z_next == 0:
            extinct = True
            break
        total += z_next
        if total > max_vertices:
            raise MemoryCapExceeded(
                f"sampling would exceed {max_vertices} vertices")
        parents.append(np.repeat(np.arange(len(offspring[-1])), offspring[-1]))
        offspring.append(_draw(rng, z_next, values, cum))
    return offspring, parents, extinct


def _gen_types(offspring, parents, g: int) -> np.ndarray:
    """Types (-1/0/+1) of the generation-g vertices, exact integer bias."""
    x = offspring[g].astype(np.int64)
    deg = x + (1 if g else 0)
    if g == 0:
        par = np.zeros(len(x), dtype=np.int64)
    else:
        pdeg = offspring[g - 1].astype(np.int64) + (1 if g > 1 else 0)
        par = pdeg[parents[g]]
    if g + 1 < len(offspring):
        child_deg = offspring[g + 1].astype(np.int64) + 1
        ends = np.cumsum(x)
        starts = ends - x
        pref = np.concatenate(([0], np.cumsum(child_deg)))
        child_sum = pref[ends] - pref[starts]
    else:
        if x.any():
            raise InsufficientDepth(
                f"generation {g + 1} was never sampled")
        child_sum = np.zeros(len(x), dtype=np.int64)
    num = par + child_sum - deg * deg
    return np.sign(num).astype(np.int8)


@dataclass(frozen=True)
class SampledTree:
    """One sampled tree: offspring counts per generation, parent links,
    target depth m, and whether the process died by generation m+1."""

    pmf_label: str
    seed: int
    target_depth: int
    offspring: tuple[np.ndarray, ...]
    parents: tuple[np.ndarray, ...]
    extinct: bool

    @property
    def depth_sampled(self) -> int:
        return len(self.offspring) - 1

    def z(self, g: int) -> int:
        """Number of vertices in generation g."""
        if g > self.depth_sampled:
            return 0
        return len(self.offspring[g])

    @property
    def n_vertices(self) -> int:
        return sum(len(x) for x in self.offspring)

    def generation_sizes(self) -> list[int]:
        return [len(x) for x in self.offspring]

    def to_tree(self, max_gen: Optional[int] = None) -> Tree:
        """Materialize generations 0..max_gen as a rooted Tree.

        Vertex ids are generation-major (root 0, then generation 1, ...),
        so children of each vertex are contiguous ascending ids.
        """
        top = self.depth_sampled if max_gen is None else min(
            max_gen, self.depth_sampled)
        sizes = [len(self.offspring[g]) for g in range(top + 1)]
        offsets = np.concatenate(([0], np.cumsum(sizes)))
        n = int(offsets[-1])
        parent = [-1] * n
        children: list[list[int]] = [[] for _ in range(n)]
        for g in range(1, top + 1):
            base = int(offsets[g])
            pbase = int(offsets[g - 1])
            for i, pi in enumerate(self.parents[g]):
                v = base + i
                u = pbase + int(pi)
                parent[v] = u
                children[u].append(v)
        degree = tuple(len(children[v]) + (1 if parent[v] >= 0 else 0)
                       for v in range(n))
        return Tree(root=0, parent=tuple(parent),
                    children=tuple(tuple(c) for c in children), degree=degree)

    def generation_of(self, max_gen: Optional[int] = None) -> dict[int, int]:
        """Vertex id -> generation, for the ids used by ``to_tree``."""
        top = self.depth_sampled if max_gen is None else min(
            max_gen, self.depth_sampled)
        out = {}
        vid = 0
        for g in range(top + 1):
            for _ in range(len(self.offspring[g])):
                out[vid] = g
                vid += 1
        return out


def sample_tree(p: OffspringPmf, m: int, seed: int,
                max_vertices: int = DEFAULT_MAX_VERTICES) -> SampledTree:
    """Sample one tree with offspring drawn through generation m+1.

    Extinction (possible when p0 > 0) is a flagged outcome, not an
    error; an extinct tree is complete and fully typable.
    """
    if m < 0:
        raise ValueError("depth must be non-negative")
    values, cum = _sampler(p)
    rng = _replica_rng(seed, 0)
    offspring, parents, extinct = _sample_layers(
        rng, values, cum, m + 1, max_vertices)
    return SampledTree(pmf_label=p.label, seed=seed, target_depth=m,
                       offspring=tuple(offspring), parents=tuple(parents),
                       extinct=extinct)


def classify_to_depth(t: SampledTree, depth: Optional[int] = None
                      ) -> list[np.ndarray]:
    """Types of every vertex at generations 0..depth, one array per
    generation.

    ``depth`` defaults to the tree's target depth.  A surviving tree
    cannot be typed beyond its target depth (the offspring buffer is
    missing); an extinct tree is complete, so all of its generations are
    typable and the returned list simply ends where the tree does.
    """
    if depth is None:
        depth = t.target_depth
    if depth > t.target_depth and not t.extinct:
        raise InsufficientDepth(
            f"tree was sampled for depth {t.target_depth}, asked {depth}")
    top = min(depth, t.depth_sampled)
    if not t.extinct:
        top = min(top, t.depth_sampled - 1)
    return [_gen_types(t.offspring, t.parents, g) for g in range(top + 1)]


def types_as_map(t: SampledTree, per_gen: list[np.ndarray]) -> dict[int, VertexType]:
    """Flatten per-generation types to {vertex id: VertexType} using the
    same generation-major ids as ``SampledTree.to_tree``."""
    out = {}
    vid = 0
    for arr in per_gen:
        for s in arr:
            out[vid] = VertexType(int(s))
            vid += 1
    return out


# ---------------------------------------------------------------------------
# Density estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimEstimate:
    """Monte Carlo ratios with across-replica standard errors."""

    pmf_label: str
    depth: int
    replicas: int
    seed: int
    survival_rate: float
    vertex: dict[VertexType, tuple[float, float]]
    edge: dict[tuple[VertexType, VertexType], tuple[float, float]]


def _replica_ratios(p, m: int, seed: int, replica: int, max_vertices: int,
                    want_edges: bool):
    values, cum = _sampler(p)
    rng = _replica_rng(seed, replica)
    offspring, parents, extinct = _sample_layers(
        rng, values, cum, m + 1, max_vertices)
    if extinct:
        return None
    tcounts = np.zeros(3, dtype=np.int64)
    types = {}
    for g in range(2, m + 1):
        types[g] = _gen_types(offspring, parents, g)
        tcounts += np.bincount(types[g] + 1, minlength=3)
    ecounts = np.zeros(9, dtype=np.int64)
    if want_edges:
        for g in range(2, m):
            rep = np.repeat(types[g], offspring[g])
            codes = 3 * (rep.astype(np.int64) + 1) + (types[g + 1] + 1)
            ecounts += np.bincount(codes, minlength=9)
    tr = tcounts / tcounts.sum()
    er = ecounts / ecounts.sum() if want_edges and ecounts.sum() else np.zeros(9)
    return tr, er


def _estimate(p: OffspringPmf, m: int, replicas: int, seed: int,
              threads: int, max_vertices: int, want_edges: bool) -> SimEstimate:
    if m < 2:
        raise ValueError("density estimation needs depth m >= 2")
    if want_edges and m < 3:
        raise ValueError("edge estimation needs depth m >= 3")
    if replicas < 1:
        raise ValueError("need at least one replica")
    report = validate_gw_conditions(p)
    if not report.supercritical:
        warnings.warn(f"offspring mean {report.mean:g} <= 1: "
                      "most replicas will go extinct", stacklevel=2)

    def run(i: int):
        return _replica_ratios(p, m, seed, i, max_vertices, want_edges)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(replicas)))
    else:
        results = [run(i) for i in range(replicas)]

    kept = [r for r in results if r is not None]
    if not kept:
        raise AllExtinct(f"all {replicas} replicas went extinct")
    vmat = np.stack([r[0] for r in kept])
    emat = np.stack([r[1] for r in kept])

    def stats(mat):
        mu = mat.mean(axis=0)
        if mat.shape[0] > 1:
            se = mat.std(axis=0, ddof=1) / np.sqrt(mat.shape[0])
        else:
            se = np.zeros(mat.shape[1])
        return mu, se

    vmu, vse = stats(vmat)
    emu, ese = stats(emat)
    vertex = {t: (float(vmu[i]), float(vse[i]))
              for i, t in enumerate(TYPE_ORDER)}
    edge = {pair: (float(emu[i]), float(ese[i]))
            for i, pair in enumerate(EDGE_ORDER)}
    return SimEstimate(pmf_label=p.label, depth=m, replicas=replicas,
                       seed=seed, survival_rate=len(kept) / replicas,
                       vertex=vertex, edge=edge)


def estimate_densities(p: OffspringPmf, m: int, replicas: int, seed: int,
                       threads: int = 1,
                       max_vertices: int = DEFAULT_MAX_VERTICES) -> SimEstimate:
    """Per-replica vertex-type ratios over generations 2..m, averaged
    over non-extinct replicas."""
    return _estimate(p, m, replicas, seed, threads, max_vertices,
                     want_edges=False)


def estimate_edge_densities(p: OffspringPmf, m: int, replicas: int, seed: int,
                            threads: int = 1,
                            max_vertices: int = DEFAULT_MAX_VERTICES
                            ) -> SimEstimate:
    """Directed parent->child edge-type ratios (parent generations
    2..m-1) alongside the vertex ratios."""
    return _estimate(p, m, replicas, seed, threads, max_vertices,
                     want_edges=True)


# ---------------------------------------------------------------------------
# Convergence trace
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceRow:
    m: int
    counted: int
    ratios: dict[VertexType, float]


def convergence_trace(p: OffspringPmf, m_max: int, seed: int,
                      max_vertices: int = DEFAULT_MAX_VERTICES
                      ) -> list[TraceRow]:
    """Single-tree ratios N_m[x] / N_m for m = 2..m_max.

    Counts generations 2..m of one tree, so successive rows share all
    earlier generations; the last row is the best single-tree estimate.
    """
    if m_max < 2:
        raise ValueError("trace needs m_max >= 2")
    t = sample_tree(p, m_max, seed, max_vertices)
    per_gen = classify_to_depth(t)
    if len(per_gen) <= 2:
        raise AllExtinct("tree died before generation 2; nothing to count")
    counts = np.zeros(3, dtype=np.int64)
    rows = []
    for m in range(2, m_max + 1):
        if m < len(per_gen):
            counts += np.bincount(per_gen[m] + 1, minlength=3)
        total = int(counts.sum())
        ratios = {t_: float(counts[i] / total)
                  for i, t_ in enumerate(TYPE_ORDER)}
        rows.append(TraceRow(m=m, counted=total, ratios=ratios))
    return rows


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------

_DOT_STYLE = {
    VertexType.POSITIVE: ' [style=filled, fillcolor="#d62728", color="#d62728"]',
    VertexType.NEGATIVE: ' [style=filled, fillcolor="#1f77b4", color="#1f77b4"]',
    VertexType.NEUTRAL: "",
}


def export_colored_dot(tree: Tree, types: Mapping[int, VertexType],
                       name: str = "friendship_types") -> str:
    """DOT graph with positive vertices red, negative blue, neutral as
    plain circles.  Vertices missing from ``types`` are drawn gray."""
    lines = [f"graph {name} {{", "  node [shape=circle, label=\"\"];"]
    for v in range(tree.n):
        t = types.get(v)
        if t is None:
            lines.append(f'  {v} [style=filled, fillcolor="#cccccc"];')
        else:
            lines.append(f"  {v}{_DOT_STYLE[t]};")
    for u, v in tree.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Significance of finite trees: lower bound, exploration replay, enumeration.

Two independent verification routes are provided for the claim that the
significance gap N+ - N- of a finite tree is bounded below by
``1 + sum(d_u - 2 for d_u >= 3)``:

* ``exhaustive_check`` enumerates every labeled tree (one per Pruefer
  sequence) up to a size cap and measures the gap directly;
* ``exploration_construction`` replays the incremental construction that
  grows the tree from a branching point, recording the per-step change of
  the gap together with the per-case bound each step is claimed to meet.

Both routes report what they find; neither assumes the bound is true.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .errors import NoBranchingPoint, SizeOutOfRange
from .trees import Tree, TypeCounts, build_tree, reroot, type_counts

ENUMERATION_MAX_N = 10
EXHAUSTIVE_MAX_N = 9


# ---------------------------------------------------------------------------
# Theorem report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TheoremReport:
    """Gap vs. claimed lower bound for one tree."""

    n: int
    gap: int
    bound: int
    is_path: bool
    holds: bool


def branching_lower_bound(t: Tree) -> int:
    """Claimed lower bound ``1 + sum(d_u - 2 : d_u >= 3)`` for the gap.

    Requires at least one branching point (degree >= 3); paths are
    governed by the exact rule gap == 1 iff n == 3.
    """
    if t.is_path():
        raise NoBranchingPoint("tree has no vertex of degree >= 3")
    return 1 + sum(d - 2 for d in t.degree if d >= 3)


def verify_theorem(t: Tree) -> TheoremReport:
    """Check the significance claim on one tree.

    Paths must satisfy gap == 1 iff n == 3 (exact, always true);
    branching trees are checked against ``branching_lower_bound``.
    """
    counts = type_counts(t)
    gap = counts.gap
    if t.is_path():
        bound = 1 if t.n == 3 else 0
        return TheoremReport(n=t.n, gap=gap, bound=bound, is_path=True,
                             holds=gap == bound)
    bound = branching_lower_bound(t)
    return TheoremReport(n=t.n, gap=gap, bound=bound, is_path=False,
                         holds=gap >= bound)


# ---------------------------------------------------------------------------
# Exploration construction
# ---------------------------------------------------------------------------

class StepCase(str, Enum):
    ROOT = "root"
    BRANCH_FANOUT = "branch_fanout"
    PATH_EXTENSION = "path_extension"


@dataclass(frozen=True)
class StepRecord:
    """One step of the construction, with exact counts on the subtree built
    so far.

    ``claimed_delta_bound`` is the per-case lower bound the step is claimed
    to satisfy (fanout of the root: equality at d-1; later fanouts: d-2;
    path extensions: 0); ``meets_claimed_bound`` records whether it did.
    """

    index: int
    case: StepCase
    added: tuple[int, ...]
    anchor: int
    anchor_degree: int
    path_length: int
    neutral_parent_case: bool
    counts: TypeCounts
    delta: int
    claimed_delta_bound: int
    meets_claimed_bound: bool


@dataclass(frozen=True)
class ExplorationTrace:
    root: int
    steps: tuple[StepRecord, ...]
    final_counts: TypeCounts
    lower_bound: int

    @property
    def all_steps_meet_claimed_bounds(self) -> bool:
        return all(s.meets_claimed_bound for s in self.steps)


def exploration_construction(t: Tree) -> ExplorationTrace:
    """Replay the incremental construction from a branching point.

    The tree is re-rooted at its lowest-id branching point.  Step 1 places
    the root; step 2 adds all of its children; each later step expands the
    lowest-id leaf of the current subtree that is not a leaf of the full
    tree, either fanning out a branching point or extending a path until
    the next leaf or branching point.  Vertex types and counts are exact
    on every intermediate subtree.
    """
    bps = t.branching_points()
    if not bps:
        raise NoBranchingPoint("construction needs a branching point")
    t = reroot(t, bps[0])
    root = t.root

    in_tree = [False] * t.n
    padj: list[list[int]] = [[] for _ in range(t.n)]  # adjacency so far
    ptype: list[int] = [0] * t.n                      # sign of partial bias
    counts = [0, 0, 0]                                # [minus, zero, plus]

    def retype(v: int) -> None:
        d = len(padj[v])
        num = sum(len(padj[w]) for w in padj[v]) - d * d
        new = (num > 0) - (num < 0)
        counts[ptype[v] + 1] -= 1
        counts[new + 1] += 1
        ptype[v] = new

    def attach(v: int, parent_v: int) -> None:
        in_tree[v] = True
        padj[v].append(parent_v)
        padj[parent_v].append(v)
        counts[1] += 1  # enters as neutral, retyped below

    def gap() -> int:
        return counts[2] - counts[0]

    def snapshot() -> TypeCounts:
        return TypeCounts(n_plus=counts[2], n_zero=counts[1], n_minus=counts[0])

    steps: list[StepRecord] = []

    # Step 1: the root alone (neutral by the empty-sum convention).
    in_tree[root] = True
    counts[1] += 1
    steps.append(StepRecord(
        index=1, case=StepCase.ROOT, added=(root,), anchor=root,
        anchor_degree=t.degree[root], path_length=0,
        neutral_parent_case=False, counts=snapshot(), delta=0,
        claimed_delta_bound=0, meets_claimed_bound=True))

    # Step 2: all children of the root.
    prev_gap = gap()
    kids = t.children[root]
    for c in kids:
        attach(c, root)
    for v in (root, *kids):
        retype(v)
    delta = gap() - prev_gap
    bound2 = t.degree[root] - 1
    steps.append(StepRecord(
        index=2, case=StepCase.BRANCH_FANOUT, added=tuple(kids), anchor=root,
        anchor_degree=t.degree[root], path_length=0,
        neutral_parent_case=False, counts=snapshot(), delta=delta,
        claimed_delta_bound=bound2, meets_claimed_bound=delta == bound2))

    remaining = t.n - 1 - len(kids)
    index = 2
    while remaining:
        index += 1
        # Lowest-id leaf of the subtree with unexplored descendants.
        u = min(v for v in range(t.n)
                if in_tree[v] and len(padj[v]) == 1 and t.degree[v] > 1)
        parent_u = padj[u][0]
        prev_gap = gap()

        if t.degree[u] >= 3:
            added = t.children[u]
            for c in added:
                attach(c, u)
            case = StepCase.BRANCH_FANOUT
            path_length = 0
            claimed = t.degree[u] - 2
        else:
            # Degree-2 leaf: extend the path up to a leaf or branching point.
            chain = []
            v = u
            while True:
                nxt = next(c for c in t.children[v])
                attach(nxt, v)
                chain.append(nxt)
                if t.degree[nxt] != 2:
                    break
                v = nxt
            added = tuple(chain)
            case = StepCase.PATH_EXTENSION
            path_length = len(chain)
            claimed = 0

        for v in {u, parent_u, *added}:
            retype(v)
        delta = gap() - prev_gap
        neutral_case = (case is StepCase.PATH_EXTENSION and path_length == 1
                        and len(padj[parent_u]) == 3)
        meets = (delta >= claimed) if case is StepCase.BRANCH_FANOUT \
            else (delta >= 0)
        steps.append(StepRecord(
            index=index, case=case, added=added, anchor=u,
            anchor_degree=t.degree[u], path_length=path_length,
            neutral_parent_case=neutral_case, counts=snapshot(), delta=delta,
            claimed_delta_bound=claimed, meets_claimed_bound=meets))
        remaining -= len(added)

    final = snapshot()
    assert final == type_counts(t), "incremental typing drifted from exact"
    return ExplorationTrace(root=root, steps=tuple(steps), final_counts=final,
                            lower_bound=branching_lower_bound(t))


# ---------------------------------------------------------------------------
# Pruefer enumeration
# ---------------------------------------------------------------------------

def prufer_to_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Decode a Pruefer sequence over 0..n-1 into the n-1 tree edges."""
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def enumerate_labeled_trees(n: int) -> Iterator[Tree]:
    """All n**(n-2) labeled trees on 0..n-1, one per Pruefer sequence."""
    if not 2 <= n <= ENUMERATION_MAX_N:
        raise SizeOutOfRange(f"n must be in 2..{ENUMERATION_MAX_N}, got {n}")
    for seq in itertools.product(range(n), repeat=n - 2):
        yield build_tree(prufer_to_edges(seq, n), root=0)


def random_labeled_tree(n: int, rng: np.random.Generator) -> Tree:
    """Uniform labeled tree on 0..n-1 via a random Pruefer sequence."""
    if n < 2:
        raise SizeOutOfRange("random trees need n >= 2")
    seq = rng.integers(0, n, size=max(n - 2, 0))
    return build_tree(prufer_to_edges([int(x) for x in seq], n), root=0)


# ---------------------------------------------------------------------------
# Exhaustive check (vectorized across all Pruefer sequences)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SizeSummary:
    """Exhaustive results for one tree size."""

    n: int
    trees: int
    violations: int
    tight: int
    paths: int
    example_violations: tuple[tuple[tuple[int, int], ...], ...]


@dataclass(frozen=True)
class ExhaustiveSummary:
    n_max: int
    per_n: tuple[SizeSummary, ...]

    @property
    def total_trees(self) -> int:
        return sum(s.trees for s in self.per_n)

    @property
    def total_violations(self) -> int:
        return sum(s.violations for s in self.per_n)


def _batch_gap_bound(n: int, seqs: np.ndarray):
    """Gap, bound and path mask for a batch of Pruefer sequences.

    ``seqs`` has shape (batch, n-2).  Decoding mirrors prufer_to_edges
    (smallest leaf first) simultaneously for every tree in the batch.
    """
    batch = seqs.shape[0]
    rows = np.arange(batch)
    degree = np.ones((batch, n), dtype=np.int16)
    for i in range(n - 2):
        np.add.at(degree, (rows, seqs[:, i]), 1)
    final_degree = degree.copy()

    edges_u = np.empty((batch, n - 1), dtype=np.int16)
    edges_v = np.empty((batch, n - 1), dtype=np.int16)
    for i in range(n - 2):
        leaf = np.argmax(degree == 1, axis=1)
        x = seqs[:, i]
        edges_u[:, i] = leaf
        edges_v[:, i] = x
        degree[rows, leaf] = 0  # consumed
        degree[rows, x] -= 1
    u = np.argmax(degree == 1, axis=1)
    degree[rows, u] = 0
    v = np.argmax(degree == 1, axis=1)
    edges_u[:, n - 2] = u
    edges_v[:, n - 2] = v

    nbr_sum = np.zeros((batch, n), dtype=np.int32)
    fd = final_degree.astype(np.int32)
    for i in range(n - 1):
        eu = edges_u[:, i].astype(np.intp)
        ev = edges_v[:, i].astype(np.intp)
        nbr_sum[rows, eu] += fd[rows, ev]
        nbr_sum[rows, ev] += fd[rows, eu]

    numer = nbr_sum - fd * fd
    gap = (numer > 0).sum(axis=1) - (numer < 0).sum(axis=1)
    is_path = final_degree.max(axis=1) <= 2
    bound = 1 + np.where(fd >= 3, fd - 2, 0).sum(axis=1)
    return gap, bound, is_path, edges_u, edges_v


def _check_prefix(n: int, lead: int, max_examples: int):
    """Exhaustive results over one leading-Pruefer-symbol partition."""
    path_target = 1 if n == 3 else 0
    size = n ** max(n - 3, 0) if n > 2 else 1
    seqs = np.empty((size, max(n - 2, 0)), dtype=np.int16)
    if n > 2:
        seqs[:, 0] = lead
        rest = np.arange(size, dtype=np.int64)
        for pos in range(n - 3, 0, -1):
            seqs[:, pos] = rest % n
            rest //= n
    gap, bound, is_path, eu, ev = _batch_gap_bound(n, seqs)
    holds = np.where(is_path, gap == path_target, gap >= bound)
    bad = ~holds
    examples = []
    if bad.any():
        for j in np.flatnonzero(bad)[:max_examples]:
            examples.append(tuple(
                (int(eu[j, i]), int(ev[j, i])) for i in range(n - 1)))
    return (size, int(bad.sum()), int((~is_path & (gap == bound)).sum()),
            int(is_path.sum()), examples)


def _check_size(n: int, max_examples: int = 3, threads: int = 1) -> SizeSummary:
    leads = range(n if n > 2 else 1)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda lead: _check_prefix(n, lead, max_examples), leads))
    else:
        parts = [_check_prefix(n, lead, max_examples) for lead in leads]

    trees = violations = tight = paths = 0
    examples: list[tuple[tuple[int, int], ...]] = []
    for size, bad, tight_k, paths_k, ex in parts:
        trees += size
        violations += bad
        tight += tight_k
        paths += paths_k
        examples.extend(ex[: max(0, max_examples - len(examples))])
    assert trees == n ** (n - 2)
    return SizeSummary(n=n, trees=trees, violations=violations, tight=tight,
                       paths=paths, example_violations=tuple(examples))


def exhaustive_check(n_max: int = 8, threads: int = 1) -> ExhaustiveSummary:
    """Measure gap vs. bound over every labeled tree with 2 <= n <= n_max.

    Returns per-size tree counts, violation counts (trees whose gap falls
    short of the claimed bound), and tight counts (branching trees whose
    gap equals the bound), with a few violating edge lists kept as
    witnesses.  Partitions are split by leading Pruefer symbol across
    ``threads`` workers and merged in partition order, so the result is
    identical for any thread count.
    """
    if not 2 <= n_max <= EXHAUSTIVE_MAX_N:
        raise SizeOutOfRange(f"n_max must be in 2..{EXHAUSTIVE_MAX_N}")
    per_n = tuple(_check_size(n, threads=threads)
                  for n in range(2, n_max + 1))
    return ExhaustiveSummary(n_max=n_max, per_n=per_n)

"""Finite rooted trees and integer-exact friendship-bias vertex types.

The friendship-bias of a vertex ``v`` is the average degree of its
neighbours minus its own degree.  Its sign is decided here with pure
integer arithmetic: ``v`` is positive/neutral/negative according to

    sign( sum(deg(w) for w ~ v) - deg(v)**2 )

which equals the sign of the rational bias because ``deg(v) > 0`` for
every vertex of a tree with at least one edge.  Neutrality is an exact
event, so no floating point is involved anywhere in the typing path.

Vertices are dense integers ``0..n-1``.  Trees are immutable after
construction and safe to share across workers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import (
    CycleDetected,
    Disconnected,
    DuplicateEdge,
    UnknownRoot,
    UnknownVertex,
)

Edge = tuple[int, int]


class VertexType(IntEnum):
    """Sign alphabet for vertex types, ordered Negative < Neutral < Positive."""

    NEGATIVE = -1
    NEUTRAL = 0
    POSITIVE = 1

    @property
    def symbol(self) -> str:
        return {-1: "-", 0: "0", 1: "+"}[self.value]

    @classmethod
    def from_sign(cls, x: int) -> "VertexType":
        return cls((x > 0) - (x < 0))


@dataclass(frozen=True)
class TypeCounts:
    """Counts of positive / neutral / negative vertices; sums to n."""

    n_plus: int
    n_zero: int
    n_minus: int

    @property
    def total(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus

    @property
    def gap(self) -> int:
        """N+ - N-, the significance gap."""
        return self.n_plus - self.n_minus

    def as_dict(self) -> dict[str, int]:
        return {"+": self.n_plus, "0": self.n_zero, "-": self.n_minus}


@dataclass(frozen=True)
class Tree:
    """Immutable rooted tree on vertices 0..n-1.

    ``parent[v]`` is -1 for the root; ``children[v]`` lists children in
    ascending id order; ``degree[v]`` is the undirected degree.
    """

    root: int
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    degree: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parent)

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise UnknownVertex(f"vertex {v} not in 0..{self.n - 1}")

    def neighbors(self, v: int) -> Iterator[int]:
        if self.parent[v] >= 0:
            yield self.parent[v]
        yield from self.children[v]

    def edges(self) -> Iterator[Edge]:
        """Parent->child edges in child-id order."""
        for v, p in enumerate(self.parent):
            if p >= 0:
                yield (p, v)

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if self.degree[v] == 1]

    @property
    def max_degree(self) -> int:
        return max(self.degree)

    def is_path(self) -> bool:
        return self.max_degree <= 2

    def branching_points(self) -> list[int]:
        """Vertices of degree >= 3, ascending."""
        return [v for v in range(self.n) if self.degree[v] >= 3]


def build_tree(edges: Iterable[Edge], root: int = 0) -> Tree:
    """Build a rooted tree from an undirected edge list.

    Vertex ids must be the dense set 0..n-1.  Parent/children maps are
    derived by BFS from ``root``; children are ordered by ascending id.

    Raises
    ------
    DuplicateEdge   the same undirected pair appears twice
    CycleDetected   self-loop, or more than n-1 edges
    Disconnected    fewer than n-1 edges, or unreachable vertices
    UnknownRoot     root is not a vertex
    """
    edge_list: list[Edge] = []
    seen: set[Edge] = set()
    vertices: set[int] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise CycleDetected(f"self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"edge {key} given twice")
        seen.add(key)
        edge_list.append(key)
        vertices.add(u)
        vertices.add(v)

    if not edge_list:
        if root != 0:
            raise UnknownRoot(f"singleton tree must use root 0, got {root}")
        return Tree(root=0, parent=(-1,), children=((),), degree=(0,))

    n = len(vertices)
    if vertices != set(range(n)):
        raise UnknownVertex(f"vertex ids must be dense 0..{n - 1}")
    if root not in vertices:
        raise UnknownRoot(f"root {root} is not a vertex")
    if len(edge_list) > n - 1:
        raise CycleDetected(f"{len(edge_list)} edges on {n} vertices")
    if len(edge_list) < n - 1:
        raise Disconnected(f"{len(edge_list)} edges cannot connect {n} vertices")

    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edge_list:
        adj[u].append(v)
        adj[v].append(u)

    parent = [-2] * n
    parent[root] = -1
    order = deque([root])
    visited = 1
    while order:
        u = order.popleft()
        for w in adj[u]:
            if parent[w] == -2:
                parent[w] = u
                visited += 1
                order.append(w)
    if visited != n:
        raise Disconnected("edge set is not connected")

    children = tuple(
        tuple(sorted(w for w in adj[v] if parent[w] == v)) for v in range(n)
    )
    degree = tuple(len(adj[v]) for v in range(n))
    return Tree(root=root, parent=tuple(parent), children=children, degree=degree)


def reroot(t: Tree, new_root: int) -> Tree:
    """Same undirected tree, re-rooted at ``new_root``."""
    t.check_vertex(new_root)
    if new_root == t.root:
        return t
    return build_tree(t.edges(), root=new_root)


def bias_numerator(t: Tree, v: int) -> int:
    """Signed integer with the same sign as the friendship-bias of ``v``.

    Returns ``sum(deg(w) for w ~ v) - deg(v)**2``; 0 for an isolated
    root (empty-sum convention).
    """
    t.check_vertex(v)
    return sum(t.degree[w] for w in t.neighbors(v)) - t.degree[v] ** 2


def vertex_type(t: Tree, v: int) -> VertexType:
    """Type of a single vertex: sign of its friendship-bias."""
    return VertexType.from_sign(bias_numerator(t, v))


def vertex_types(t: Tree) -> list[VertexType]:
    """Types of all vertices, indexed by vertex id."""
    return [VertexType.from_sign(bias_numerator(t, v)) for v in range(t.n)]


def type_counts(t: Tree) -> TypeCounts:
    """Counts of positive / neutral / negative vertices of ``t``."""
    n_plus = n_zero = n_minus = 0
    for v in range(t.n):
        s = bias_numerator(t, v)
        if s > 0:
            n_plus += 1
        elif s < 0:
            n_minus += 1
        else:
            n_zero += 1
    return TypeCounts(n_plus=n_plus, n_zero=n_zero, n_minus=n_minus)


def average_bias(t: Tree) -> Fraction:
    """Exact rational average of the friendship-bias over all vertices.

    Non-negative for every tree, with equality exactly for the regular
    trees (a single vertex or a single edge).
    """
    total = Fraction(0)
    for v in range(t.n):
        d = t.degree[v]
        if d == 0:
            continue
        total += Fraction(sum(t.degree[w] for w in t.neighbors(v)), d) - d
    return total / t.n

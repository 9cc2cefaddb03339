"""Independent brute-force oracles used across the test suite.

Everything here recomputes quantities from first principles — literal
neighbour-degree pictures and exhaustive enumeration over offspring
tuples — without touching the library's evaluation paths, so agreement
with the library is meaningful evidence, not circularity.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


# ---------------------------------------------------------------------------
# Finite trees, straight from the edge list
# ---------------------------------------------------------------------------

def adjacency(edges):
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    return adj


def brute_types(edges):
    """vertex -> -1/0/+1 by literally averaging neighbour degrees."""
    adj = adjacency(edges)
    deg = {v: len(ns) for v, ns in adj.items()}
    out = {}
    for v, ns in adj.items():
        avg = Fraction(sum(deg[w] for w in ns), deg[v])
        diff = avg - deg[v]
        out[v] = (diff > 0) - (diff < 0)
    return out

def brute_counts(edges):
    """(n_plus, n_zero, n_minus) from brute_types."""
    types = brute_types(edges)
    vals = list(types.values())
    return (sum(t == 1 for t in vals), sum(t == 0 for t in vals),
            sum(t == -1 for t in vals))


# ---------------------------------------------------------------------------
# Offspring-law oracles over exact Fraction weight maps
# ---------------------------------------------------------------------------

def sb_weights(p: dict[int, Fraction]) -> dict[int, Fraction]:
    mu = sum(Fraction(k) * w for k, w in p.items())
    return {k: Fraction(k) * w / mu for k, w in p.items() if k > 0}


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def enum_vertex_split(p: dict[int, Fraction], k: int):
    """(neg, zero, pos) for a bulk vertex with k children, enumerating the
    parent's offspring count (size-biased) and each child's offspring.

    Works on the raw degree picture: the vertex has degree k+1, its
    parent degree Xt+1, and child j degree X_j+1.
    """
    pt = sb_weights(p)
    out = [Fraction(0)] * 3
    for xt, wt in pt.items():
        for xs in itertools.product(p.items(), repeat=k):
            w = wt
            nbr = xt + 1
            for xj, wj in xs:
                w *= wj
                nbr += xj + 1
            num = nbr - (k + 1) ** 2
            out[_sign(num) + 1] += w
    return tuple(out)


def enum_vertex_densities(p: dict[int, Fraction]):
    """{-1/0/+1: density} by total probability over the own offspring count."""
    out = {-1: Fraction(0), 0: Fraction(0), 1: Fraction(0)}
    for k, wk in p.items():
        neg, zero, pos = enum_vertex_split(p, k)
        out[-1] += wk * neg
        out[0] += wk * zero
        out[1] += wk * pos
    return out


def enum_edge_densities(p: dict[int, Fraction]):
    """{(parent sign, child sign): density} over directed edges.

    Enumerates the entire two-generation neighbourhood of an edge: the
    grandparent's offspring count (size-biased), the parent's offspring
    count (size-biased), the k_t - 1 sibling offspring counts, the
    child's offspring count, and the child's children's counts.
    """
    pt = sb_weights(p)
    out = {(a, b): Fraction(0) for a in (-1, 0, 1) for b in (-1, 0, 1)}
    for kt, wkt in pt.items():
        for k, wk in p.items():
            for xstar, wstar in pt.items():
                for sibs in itertools.product(p.items(), repeat=kt - 1):
                    w1 = wkt * wk * wstar
                    parent_nbr = (xstar + 1) + (k + 1)
                    for xj, wj in sibs:
                        w1 *= wj
                        parent_nbr += xj + 1
                    pnum = parent_nbr - (kt + 1) ** 2
                    for ys in itertools.product(p.items(), repeat=k):
                        w = w1
                        child_nbr = kt + 1
                        for yj, wj in ys:
                            w *= wj
                            child_nbr += yj + 1
                        cnum = child_nbr - (k + 1) ** 2
                        out[(_sign(pnum), _sign(cnum))] += w
    return out


def enum_parent_marginal(p: dict[int, Fraction]):
    table = enum_edge_densities(p)
    out = {s: Fraction(0) for s in (-1, 0, 1)}
    for (a, _), w in table.items():
        out[a] += w
    return out


# ---------------------------------------------------------------------------
# Closed forms for the two- and three-atom families
# ---------------------------------------------------------------------------

def two_atom_closed(q: Fraction, a: int):
    """(f_neg, f_zero, f_pos) for p_1 = q, p_a = 1 - q."""
    one = Fraction(1)
    mu = q + a * (one - q)
    f_pos = q - q ** 3 / mu
    f_zero = (q ** 3 + a * (one - q) ** (a + 2)) / mu
    f_neg = (one - q) - a * (one - q) ** (a + 2) / mu
    return f_neg, f_zero, f_pos


def three_atom_closed(q: Fraction, qh: Fraction, a: int):
    """(f_neg, f_zero, f_pos) for p_1 = q, p_2 = qh, p_a = 1 - q - qh,
    derived from the degree picture (valid for a >= 5).

    A degree-3 vertex is negative exactly when its three neighbours'
    offspring counts are all 1, two 1 one 2, or one 1 two 2; weighting
    the parent slot by the size-biased law gives the cubic below.
    """
    one = Fraction(1)
    pa = one - q - qh
    mu = q + 2 * qh + a * pa
    neg2 = q ** 3 + 4 * q ** 2 * qh + 5 * q * qh ** 2
    f_pos = q + qh - (q ** 3 + 2 * qh ** 4 + qh * neg2) / mu
    f_zero = (q ** 3 + 2 * qh ** 4 + a * pa ** (a + 2)) / mu
    f_neg = pa + (qh * neg2 - a * pa ** (a + 2)) / mu
    return f_neg, f_zero, f_pos


# ---------------------------------------------------------------------------
# Random pmf generators (seeded by the caller)
# ---------------------------------------------------------------------------

def random_exact_pmf(rng: np.random.Generator, lo: int = 1, hi: int = 8,
                     max_atoms: int = 4) -> dict[int, Fraction]:
    size = int(rng.integers(2, max_atoms + 1))
    support = rng.choice(np.arange(lo, hi + 1), size=size, replace=False)
    raw = rng.integers(1, 10, size=size)
    total = int(raw.sum())
    return {int(k): Fraction(int(w), total)
            for k, w in zip(sorted(int(s) for s in support), raw)}


def random_float_pmf(rng: np.random.Generator, lo: int = 1, hi: int = 8,
                     max_atoms: int = 4) -> dict[int, float]:
    exact = random_exact_pmf(rng, lo, hi, max_atoms)
    return {k: float(w) for k, w in exact.items()}

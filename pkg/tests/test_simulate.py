"""Seeded sampling, exact per-vertex typing, and estimator behavior."""

import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from treebias import (
    AllExtinct,
    InsufficientDepth,
    MemoryCapExceeded,
    VertexType,
    build_tree,
    classify_to_depth,
    convergence_trace,
    estimate_densities,
    estimate_edge_densities,
    export_colored_dot,
    make_pmf,
    poisson_truncated,
    sample_tree,
    type_counts,
    types_as_map,
    vertex_densities,
    vertex_type,
)

NEG, ZERO, POS = (VertexType.NEGATIVE, VertexType.NEUTRAL,
                  VertexType.POSITIVE)

HALF_HALF = make_pmf({1: 0.5, 2: 0.5})
REGULAR2 = make_pmf({2: 1})


class TestSampling:
    def test_regular_tree_generation_sizes(self):
        t = sample_tree(REGULAR2, 3, seed=1)
        assert t.generation_sizes() == [1, 2, 4, 8, 16]  # through m+1
        assert not t.extinct

    def test_generation_bookkeeping(self):
        t = sample_tree(HALF_HALF, 6, seed=2)
        sizes = t.generation_sizes()
        cum = np.cumsum(sizes)
        for m in range(1, len(sizes)):
            assert cum[m] - cum[m - 1] == t.z(m)

    def test_deterministic_given_seed(self):
        a = sample_tree(HALF_HALF, 8, seed=9)
        b = sample_tree(HALF_HALF, 8, seed=9)
        assert a.generation_sizes() == b.generation_sizes()
        for x, y in zip(a.offspring, b.offspring):
            assert np.array_equal(x, y)

    def test_subcritical_mostly_extinct(self):
        p = poisson_truncated(0.5)
        extinct = sum(sample_tree(p, 6, seed=s).extinct for s in range(60))
        assert extinct > 50  # survival to depth 8 is rare at rate 0.5

    def test_memory_cap(self):
        with pytest.raises(MemoryCapExceeded):
            sample_tree(make_pmf({8: 1}), 10, seed=1, max_vertices=500)


class TestClassification:
    def test_regular_m2(self):
        t = sample_tree(REGULAR2, 2, seed=3)
        per_gen = classify_to_depth(t)
        # root: degree 2 against two degree-3 children -> positive;
        # generation 1 sees the shallow root -> negative; bulk neutral.
        assert list(per_gen[0]) == [1]
        assert list(per_gen[1]) == [-1, -1]
        assert list(per_gen[2]) == [0, 0, 0, 0]

    def test_star_root(self):
        t = sample_tree(make_pmf({5: 1}), 0, seed=4)
        per_gen = classify_to_depth(t)
        assert list(per_gen[0]) == [1]  # degree 5 vs. five degree-6 children

    def test_matches_tree_core_on_materialized_tree(self):
        # Interior generations (everything whose full neighbourhood is
        # materialized) must agree with the finite-tree typing.
        t = sample_tree(HALF_HALF, 5, seed=5)
        per_gen = classify_to_depth(t)
        tree = t.to_tree()
        gen_of = t.generation_of()
        for v in range(tree.n):
            g = gen_of[v]
            if g <= t.target_depth - 1:
                expected = vertex_type(tree, v)
                assert per_gen[g][v - sum(t.z(h) for h in range(g))] == expected

    def test_extinct_tree_fully_typable(self):
        p = poisson_truncated(0.5)
        seed = next(s for s in range(100)
                    if sample_tree(p, 6, seed=s).extinct)
        t = sample_tree(p, 6, seed=seed)
        per_gen = classify_to_depth(t)
        assert len(per_gen) == t.depth_sampled + 1

    def test_insufficient_depth_beyond_target(self):
        t = sample_tree(REGULAR2, 3, seed=6)
        with pytest.raises(InsufficientDepth):
            classify_to_depth(t, depth=5)


class TestEstimates:
    def test_regular_bulk_is_all_neutral(self):
        est = estimate_densities(REGULAR2, m=6, replicas=3, seed=1)
        assert est.vertex[ZERO] == (1.0, 0.0)
        assert est.survival_rate == 1.0

    def test_regular_edges_all_neutral(self):
        est = estimate_edge_densities(REGULAR2, m=6, replicas=3, seed=1)
        assert est.edge[(ZERO, ZERO)] == (1.0, 0.0)

    def test_ratios_sum_to_one(self):
        est = estimate_edge_densities(HALF_HALF, m=8, replicas=20, seed=7)
        assert abs(sum(v[0] for v in est.vertex.values()) - 1) < 1e-12
        assert abs(sum(v[0] for v in est.edge.values()) - 1) < 1e-12

    def test_determinism_across_threads(self):
        a = estimate_edge_densities(HALF_HALF, m=8, replicas=24, seed=11,
                                    threads=1)
        b = estimate_edge_densities(HALF_HALF, m=8, replicas=24, seed=11,
                                    threads=4)
        assert a == b

    def test_half_half_close_to_exact(self):
        est = estimate_densities(HALF_HALF, m=10, replicas=100, seed=12)
        exact = vertex_densities(make_pmf({1: F(1, 2), 2: F(1, 2)}))
        for t in (NEG, ZERO, POS):
            mu, se = est.vertex[t]
            assert abs(mu - float(exact[t])) <= 5 * se

    def test_edge_row_sums_approximate_parent_marginal(self):
        from treebias import parent_marginal
        est = estimate_edge_densities(HALF_HALF, m=10, replicas=100, seed=13)
        ft = parent_marginal(make_pmf({1: F(1, 2), 2: F(1, 2)}))
        for a in (NEG, ZERO, POS):
            row = sum(est.edge[(a, b)][0] for b in (NEG, ZERO, POS))
            ses = [est.edge[(a, b)][1] for b in (NEG, ZERO, POS)]
            assert abs(row - float(ft[a])) <= 5 * max(max(ses), 1e-4)

    def test_subcritical_survival_and_extinction(self):
        p = poisson_truncated(0.8)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            est = estimate_densities(p, m=4, replicas=50, seed=14)
        assert 0 < est.survival_rate < 1

    def test_all_extinct(self):
        p = poisson_truncated(0.1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with pytest.raises(AllExtinct):
                estimate_densities(p, m=6, replicas=3, seed=15)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            estimate_densities(HALF_HALF, m=1, replicas=5, seed=1)
        with pytest.raises(ValueError):
            estimate_edge_densities(HALF_HALF, m=2, replicas=5, seed=1)


class TestConvergenceTrace:
    def test_regular_constant(self):
        rows = convergence_trace(REGULAR2, 6, seed=1)
        assert all(r.ratios[ZERO] == 1.0 for r in rows)

    def test_half_half_endpoint_near_exact(self):
        rows = convergence_trace(HALF_HALF, 14, seed=3)
        assert rows[-1].m == 14
        assert abs(rows[-1].ratios[POS] - 5 / 12) < 0.05
        assert abs(rows[-1].ratios[NEG] - 5 / 12) < 0.05

    def test_counts_monotone(self):
        rows = convergence_trace(HALF_HALF, 10, seed=4)
        counted = [r.counted for r in rows]
        assert all(b >= a for a, b in zip(counted, counted[1:]))


class TestDotExport:
    def test_path3_colors(self):
        t = build_tree([(0, 1), (1, 2)], root=0)
        types = {v: vertex_type(t, v) for v in range(3)}
        dot = export_colored_dot(t, types)
        assert dot.count('fillcolor="#d62728"') == 2  # two positive ends
        assert dot.count('fillcolor="#1f77b4"') == 1  # one negative middle
        assert "0 -- 1;" in dot and "1 -- 2;" in dot

    def test_regular_tree_mixed(self):
        t = sample_tree(REGULAR2, 3, seed=1)
        types = types_as_map(t, classify_to_depth(t))
        shown = t.to_tree(max_gen=3)
        dot = export_colored_dot(shown, {v: types[v] for v in range(shown.n)})
        assert dot.startswith("graph")

    def test_sampled_tree_matches_tree_core_counts(self):
        # The DOT payload tree is a faithful finite tree.
        t = sample_tree(HALF_HALF, 4, seed=8)
        tree = t.to_tree()
        assert type_counts(tree).total == tree.n

"""Parsing and serialization round-trips."""

import json
from fractions import Fraction as F

import pytest

from treebias import convergence_trace, estimate_edge_densities, make_pmf
from treebias.io import (
    estimate_csv,
    load_pmf_spec,
    parse_tree_text,
    pmf_spec_json,
    trace_csv,
    types_to_json,
)
from treebias.trees import VertexType


class TestTreeParsing:
    def test_edge_list_with_comments(self):
        t = parse_tree_text("# a path\n0 1\n\n1 2  # tail\n")
        assert t.n == 3 and t.degree == (1, 2, 1)

    def test_json_form(self):
        t = parse_tree_text(json.dumps(
            {"edges": [[0, 1], [0, 2]], "root": 2}))
        assert t.root == 2

    def test_types_json(self):
        doc = types_to_json({0: VertexType.POSITIVE, 1: VertexType.NEGATIVE})
        assert doc == {"types": {"0": "+", "1": "-"}}


class TestPmfSpecs:
    def test_float_weights(self):
        p = load_pmf_spec('{"pmf": {"1": 0.3, "4": 0.7}}')
        assert not p.exact and p.support == (1, 4)

    def test_exact_decimal_literals(self):
        p = load_pmf_spec('{"pmf": {"1": 0.01, "3": 0.99}}', mode="exact")
        assert p.exact and p.weights[1] == F(1, 100)

    def test_fraction_strings(self):
        p = load_pmf_spec('{"pmf": {"1": "1/3", "2": "2/3"}}', mode="exact")
        assert p.weights == {1: F(1, 3), 2: F(2, 3)}

    def test_poisson_spec(self):
        p = load_pmf_spec('{"poisson": 2.0, "eps": 1e-12}')
        assert p.weights[0] == pytest.approx(0.1353352832366127)

    def test_round_trip_exact_thirds(self):
        p = make_pmf({1: F(1, 3), 2: F(2, 3)})
        spec = json.dumps(pmf_spec_json(p))
        q = load_pmf_spec(spec, mode="exact")
        assert q.weights == p.weights

    def test_file_path_spec(self, tmp_path):
        f = tmp_path / "p.json"
        f.write_text('{"pmf": {"2": 1.0}}')
        assert load_pmf_spec(str(f)).support == (2,)

    def test_rejects_unknown_shape(self):
        with pytest.raises(ValueError):
            load_pmf_spec('{"weights": {"2": 1.0}}')


class TestCsv:
    def test_estimate_csv_headers(self):
        est = estimate_edge_densities(make_pmf({2: 1}), m=4, replicas=2,
                                      seed=1)
        text = estimate_csv(est)
        assert "m,type,ratio,stderr" in text
        assert "m,parent_type,child_type,ratio,stderr" in text
        assert text.startswith("#")

    def test_trace_csv(self):
        rows = convergence_trace(make_pmf({2: 1}), 4, seed=1)
        text = trace_csv(rows, label="regular", seed=1)
        lines = text.strip().splitlines()
        assert lines[0].startswith("# pmf=regular")
        assert lines[1] == "m,type,ratio,counted"
        assert len(lines) == 2 + 3 * len(rows)

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_left_resolving_graph
from lgkt.graphs import (GraphError, build_e0minus, letter_range, make_graph,
                         outgoing_labels, parse_graph, relative_range,
                         serialize_graph, validate_family, validate_graph)


class TestParsing:
    def test_even_shift_document(self):
        g = parse_graph('{"edges": [["A","1","A"],["A","0","B"],["B","0","A"]]}')
        assert g.vertices == ("A", "B")
        assert len(g.edges) == 3
        assert g.alphabet == ("0", "1")

    def test_isolated_vertex(self):
        g = parse_graph({"vertices": ["v"], "edges": []})
        assert g.vertices == ("v",)
        assert g.edges == ()
        assert g.alphabet == ()

    def test_undeclared_vertex_rejected(self):
        with pytest.raises(GraphError):
            parse_graph({"vertices": ["u"], "edges": [["u", "a", "w"]]})

    def test_duplicate_edge_rejected(self):
        with pytest.raises(GraphError):
            make_graph([["u", "a", "w"], ["u", "a", "w"]])

    def test_parallel_edges_distinct_labels_allowed(self):
        g = make_graph([["u", "a", "w"], ["u", "b", "w"]])
        assert len(g.edges) == 2

    def test_malformed_document(self):
        with pytest.raises(GraphError):
            parse_graph("{not json")
        with pytest.raises(GraphError):
            parse_graph({"edges": [["a", "b"]]})
        with pytest.raises(GraphError):
            parse_graph({"edges": [], "extra": 1})

    def test_serialize_roundtrip(self, even_shift):
        assert parse_graph(serialize_graph(even_shift)) == even_shift

    def test_roundtrip_random(self):
        rng = random.Random(5)
        for _ in range(25):
            g = random_left_resolving_graph(rng, rng.randint(1, 7),
                                            rng.randint(1, 3))
            text = serialize_graph(g)
            assert serialize_graph(parse_graph(text)) == text


class TestRanges:
    def test_letter_zero(self, even_shift):
        assert relative_range(even_shift, {"A", "B"}, "0") == {"A", "B"}

    def test_empty_start(self, even_shift):
        assert relative_range(even_shift, set(), "0110") == frozenset()

    def test_two_step(self, even_shift):
        assert relative_range(even_shift, {"A"}, "00") == {"A"}

    def test_unknown_letter_is_empty(self, even_shift):
        assert relative_range(even_shift, {"A"}, "z") == frozenset()

    def test_outgoing_labels(self, even_shift):
        assert outgoing_labels(even_shift, {"A"}) == {"0", "1"}
        assert outgoing_labels(even_shift, {"B"}) == {"0"}
        assert outgoing_labels(even_shift, set()) == frozenset()

    @settings(max_examples=100, deadline=None)
    @given(st.randoms(use_true_random=False),
           st.integers(min_value=2, max_value=7),
           st.integers(min_value=1, max_value=3),
           st.integers(min_value=1, max_value=4))
    def test_left_resolving_difference_identity(self, rng, n, k, wlen):
        # on a left-resolving graph ranges respect set differences
        g = random_left_resolving_graph(rng, n, k)
        verts = list(g.vertices)
        a_set = frozenset(v for v in verts if rng.random() < 0.6)
        b_set = frozenset(v for v in a_set if rng.random() < 0.5)
        word = [rng.choice(g.alphabet) for _ in range(wlen)]
        lhs = relative_range(g, a_set - b_set, word)
        rhs = relative_range(g, a_set, word) - relative_range(g, b_set, word)
        assert lhs == rhs

    @settings(max_examples=100, deadline=None)
    @given(st.randoms(use_true_random=False),
           st.integers(min_value=1, max_value=7),
           st.integers(min_value=1, max_value=3))
    def test_range_composition_and_monotonicity(self, rng, n, k):
        g = random_left_resolving_graph(rng, n, k)
        verts = list(g.vertices)
        a_set = frozenset(v for v in verts if rng.random() < 0.5)
        b_set = a_set | frozenset(v for v in verts if rng.random() < 0.3)
        word = [rng.choice(g.alphabet) for _ in range(rng.randint(1, 3))]
        extra = rng.choice(g.alphabet)
        composed = relative_range(g, relative_range(g, a_set, word), (extra,))
        assert composed == relative_range(g, a_set, list(word) + [extra])
        assert relative_range(g, a_set, word) <= relative_range(g, b_set, word)


class TestValidateGraph:
    def test_even_shift_flags(self, even_shift):
        report = validate_graph(even_shift)
        assert report.value("left_resolving")
        assert not report.value("has_sinks")
        assert not report.value("has_sources")
        assert report.value("set_finite_at_horizon")
        assert report.value("receiver_set_finite_at_horizon")

    def test_left_resolving_witness(self):
        g = make_graph([["1", "a", "2"], ["3", "a", "2"]])
        report = validate_graph(g)
        assert not report.value("left_resolving")
        assert report["left_resolving"].witness == "vertex 2, label a"

    def test_isolated_vertex_flags(self):
        g = make_graph([], vertices=["v"])
        report = validate_graph(g)
        assert report.value("has_sinks")
        assert report.value("has_sources")
        assert report["has_sinks"].witness == "vertex v"


class TestValidateFamily:
    def test_three_vertex_example(self):
        # two a-edges into the middle vertex, loops labelled b everywhere;
        # the family validates despite the graph not being left-resolving
        g = make_graph([["v1", "a", "v2"], ["v3", "a", "v2"],
                        ["v1", "b", "v1"], ["v2", "b", "v2"],
                        ["v3", "b", "v3"]])
        fam = [frozenset(), frozenset({"v2"}), frozenset({"v3"}),
               frozenset({"v1", "v3"}), frozenset({"v2", "v3"}),
               frozenset({"v1", "v2", "v3"})]
        report = validate_family(g, fam)
        assert report.value("accommodating")
        assert report.value("weakly_left_resolving")
        assert report.value("regular")
        assert not validate_graph(g).value("left_resolving")

    def test_all_subsets_of_left_resolving(self, even_shift):
        fam = [frozenset(s) for s in ({"A"}, {"B"}, {"A", "B"})]
        report = validate_family(even_shift, fam)
        assert report.value("weakly_left_resolving")
        assert report.value("regular")
        assert report.value("accommodating")

    def test_empty_family_member_only(self, even_shift):
        report = validate_family(even_shift, [frozenset()])
        assert not report.value("accommodating")
        assert "not representable" in report["accommodating"].witness

    def test_all_subsets_random_left_resolving(self):
        rng = random.Random(13)
        for _ in range(20):
            g = random_left_resolving_graph(rng, rng.randint(1, 5),
                                            rng.randint(1, 3))
            subsets = []
            verts = list(g.vertices)
            for mask in range(1, 2 ** len(verts)):
                subsets.append(frozenset(
                    v for i, v in enumerate(verts) if mask >> i & 1))
            report = validate_family(g, subsets)
            assert report.value("weakly_left_resolving")
            assert report.value("regular")

    def test_duplicates_rejected(self, even_shift):
        with pytest.raises(GraphError):
            validate_family(even_shift, [frozenset({"A"}), frozenset({"A"})])


class TestBuildE0Minus:
    def test_even_shift(self, even_shift):
        fam = build_e0minus(even_shift)
        assert frozenset({"A", "B"}) in fam  # r(0)
        assert frozenset({"A"}) in fam       # r(1)
        assert frozenset({"B"}) in fam       # r({A}, 0)
        report = validate_family(even_shift, fam)
        assert report.value("accommodating")

    def test_single_loop(self):
        g = make_graph([["v", "a", "v"]])
        assert build_e0minus(g) == (frozenset({"v"}),)

    def test_o2(self, o2):
        assert build_e0minus(o2) == (frozenset({"v"}),)

    def test_sink_singletons_included(self):
        g = make_graph([["u", "a", "w"]], vertices=["u", "w"])
        fam = build_e0minus(g)
        assert frozenset({"w"}) in fam

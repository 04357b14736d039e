import random

import pytest

from conftest import random_left_resolving_graph
from lgkt.covers import predecessor_cover
from lgkt.graphs import make_graph, relative_range
from lgkt.partitions import (PartitionError, class_relative_range, lambda_set,
                             refine_tower)


class TestLambdaSet:
    def test_even_shift_b_level1(self, even_shift):
        assert lambda_set(even_shift, "B", 1) == {"0"}

    def test_even_shift_a_level2(self, even_shift):
        # words read along the path: B -0-> A -1-> A contributes "01"
        assert lambda_set(even_shift, "A", 2) == {"0", "1", "00", "01", "11"}

    def test_no_incoming(self):
        g = make_graph([["u", "a", "w"]])
        assert lambda_set(g, "u", 3) == frozenset()

    def test_cap(self, even_shift):
        with pytest.raises(PartitionError):
            lambda_set(even_shift, "A", 5, cap=10)


class TestRefineTower:
    def test_even_shift_stabilizes_immediately(self, even_shift):
        tower = refine_tower(even_shift)
        assert tower.stabilized_at == 1
        assert all(len(p) == 2 for p in tower.partitions)

    def test_merge_equal_incoming(self):
        g = make_graph([["3", "a", "1"], ["3", "a", "2"],
                        ["1", "b", "3"], ["2", "c", "3"]])
        tower = refine_tower(g)
        assert tower.at_level(1).classes == (frozenset({"1", "2"}),
                                             frozenset({"3"}))

    def test_krieger_cover_discrete_from_two(self, even_shift):
        cover = predecessor_cover(even_shift).cover
        tower = refine_tower(cover)
        assert len(tower.at_level(1)) == 2
        assert len(tower.at_level(2)) == 3
        assert tower.stabilized_at == 2

    def test_precondition_sources_rejected(self):
        g = make_graph([["u", "a", "w"], ["w", "b", "w"]])
        with pytest.raises(PartitionError, match="has_sources"):
            refine_tower(g)

    def test_precondition_left_resolving(self):
        g = make_graph([["1", "a", "2"], ["3", "a", "2"], ["2", "b", "1"],
                        ["2", "c", "3"], ["1", "d", "1"]])
        with pytest.raises(PartitionError, match="left_resolving"):
            refine_tower(g)

    def test_stabilization_is_permanent(self):
        rng = random.Random(99)
        for _ in range(30):
            g = random_left_resolving_graph(rng, rng.randint(1, 8),
                                            rng.randint(1, 3))
            tower = refine_tower(g)
            assert tower.stabilized_at is not None  # finite graphs stabilize
            s = tower.stabilized_at
            assert tower.at_level(s) == tower.at_level(s + 1)
            # one further level is reachable through the stabilized fallback
            assert tower.at_level(s + 5) == tower.at_level(s)

    def test_refinement_property(self):
        rng = random.Random(4)
        for _ in range(30):
            g = random_left_resolving_graph(rng, rng.randint(2, 8), 2)
            tower = refine_tower(g)
            for lo, hi in zip(tower.partitions, tower.partitions[1:]):
                for cls in hi.classes:
                    containers = [c for c in lo.classes if cls <= c]
                    assert len(containers) == 1


class TestOracleEquivalence:
    def test_classes_match_lambda_sets(self):
        rng = random.Random(20240810)
        for _ in range(40):
            g = random_left_resolving_graph(rng, rng.randint(1, 8),
                                            rng.randint(1, 3))
            tower = refine_tower(g, max_level=4)
            for level in range(1, min(4, tower.horizon) + 1):
                part = tower.at_level(level)
                lam = {v: lambda_set(g, v, level) for v in g.vertices}
                for v in g.vertices:
                    for w in g.vertices:
                        same_class = part.class_of[v] == part.class_of[w]
                        assert same_class == (lam[v] == lam[w])


class TestClassRelativeRange:
    def test_even_shift_singletons(self, even_shift):
        tower = refine_tower(even_shift)
        # canonical order puts {A} first, {B} second
        assert tower.at_level(1).classes == (frozenset({"A"}),
                                             frozenset({"B"}))
        assert class_relative_range(even_shift, tower, 1, 0, "0") == (1,)
        assert class_relative_range(even_shift, tower, 1, 1, "0") == (0,)

    def test_letter_not_outgoing(self, even_shift):
        tower = refine_tower(even_shift)
        assert class_relative_range(even_shift, tower, 1, 1, "1") == ()

    def test_union_exactness(self):
        rng = random.Random(6)
        for _ in range(20):
            g = random_left_resolving_graph(rng, rng.randint(2, 7), 2)
            tower = refine_tower(g)
            for level in range(1, tower.horizon):
                part = tower.at_level(level)
                nxt = tower.at_level(level + 1)
                for idx, cls in enumerate(part.classes):
                    for a in g.alphabet:
                        pieces = class_relative_range(g, tower, level, idx, a)
                        assert len(pieces) == len(set(pieces))
                        union = frozenset().union(
                            *(nxt.classes[i] for i in pieces)) \
                            if pieces else frozenset()
                        assert union == relative_range(g, cls, (a,))

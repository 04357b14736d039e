import pytest

from lgkt.engine import EngineError
from lgkt.levels import (GeneratorSpec, LevelSystem, LevelSystemError,
                         builtin_generator, from_symbolic_matrix_system,
                         limit_ktheory, parse_level_system, validate_levels)
from lgkt.zmodule import IntMatrix


def dyck(max_level):
    return builtin_generator(GeneratorSpec("dyck2", max_level=max_level))


def int_line(max_level):
    return builtin_generator(GeneratorSpec("int_line", max_level=max_level))


class TestSymbolicMatrixSystems:
    def test_constant_full_shift_system(self):
        # one symbol class, two edges: the difference map is [-1] forever
        ls = from_symbolic_matrix_system([IntMatrix([[2]])] * 4,
                                         [IntMatrix([[1]])] * 4)
        result = limit_ktheory(ls)
        assert result.k0.group_string() == "0"
        assert result.k1.group_string() == "0"

    def test_identity_system(self):
        ls = from_symbolic_matrix_system([IntMatrix.zero(2, 2)] * 3,
                                         [IntMatrix.identity(2)] * 3)
        result = limit_ktheory(ls)
        assert result.k0.group_string() == "0"
        assert result.k1.group_string() == "0"

    def test_negative_entries_rejected(self):
        with pytest.raises(LevelSystemError):
            from_symbolic_matrix_system([IntMatrix([[-1]])],
                                        [IntMatrix([[1]])])

    def test_incompatible_system_rejected(self):
        # inclusions that do not intertwine with the difference maps
        m = [IntMatrix([[2, 0], [0, 2]]), IntMatrix([[3, 0], [0, 2]])]
        i = [IntMatrix([[1, 1], [0, 1]]), IntMatrix.identity(2)]
        with pytest.raises(LevelSystemError, match="intertwining"):
            from_symbolic_matrix_system(m, i)


class TestDyckGenerator:
    def test_level_one_printed_columns(self):
        ls = dyck(2)
        assert ls.dims == (2, 4, 8)
        assert ls.labels[0] == ("a", "b")
        assert ls.labels[1] == ("aa", "ab", "ba", "bb")
        assert ls.phi[0].columns() == [(-1, -2, 0, -1), (-1, 0, -2, -1)]
        assert ls.incl[0].columns() == [(1, 0, 1, 0), (0, 1, 0, 1)]

    def test_level_two_printed_columns(self):
        ls = dyck(2)
        hi = ls.labels[2]
        assert hi == ("aaa", "aab", "aba", "abb", "baa", "bab", "bba", "bbb")
        expected = {
            "aa": {"aaa": -1, "aab": -1, "aba": -1, "bba": -1},
            "ab": {"aaa": -1, "aab": 1, "aba": -2, "abb": -1, "baa": -1,
                   "bab": 1, "bba": -1},
            "ba": {"aab": -1, "aba": 1, "abb": -1, "baa": -1, "bab": -2,
                   "bba": 1, "bbb": -1},
            "bb": {"aab": -1, "bab": -1, "bba": -1, "bbb": -1},
        }
        for j, w in enumerate(ls.labels[1]):
            col = ls.phi[1].column(j)
            assert list(col) == [expected[w].get(v, 0) for v in hi]

    def test_levelwise_groups(self):
        result = limit_ktheory(dyck(4))
        for row in result.levels:
            assert row.ker == "0"
            assert row.coker == f"Z^{2 ** row.level} + Z/2"

    def test_limit_classification(self):
        result = limit_ktheory(dyck(4))
        assert result.k1.group_string() == "0"
        assert result.k0.classification == "split_pattern"
        assert result.k0.infinite_free
        assert result.k0.base.torsion == (2,)
        assert result.k0.group_string() == "Z^inf + Z/2"

    def test_connecting_maps_fix_torsion(self):
        # the first connecting map of the cokernel tower sends the order-2
        # generator to the order-2 generator
        from lgkt.zmodule import induced_hom
        ls = dyck(3)
        hom = induced_hom(ls.phi[0], ls.phi[1], ls.incl[1], "cokernel")
        src_t = list(hom.source.gen_orders()).index(2)
        tgt_t = list(hom.target.gen_orders()).index(2)
        assert hom.matrix.data[tgt_t][src_t] % 2 == 1
        for i, order in enumerate(hom.target.gen_orders()):
            if order == 0:
                assert hom.matrix.data[i][src_t] == 0


class TestIntLineGenerator:
    def test_level_one_columns(self):
        ls = int_line(1)
        assert ls.labels[0] == ("0", "rest1")
        assert ls.labels[1] == ("-1", "0", "1", "rest2")
        # chi_0 -> -chi_1 - chi_{-1}; chi_rest1 -> -2 chi_0 - chi_rest2
        assert ls.phi[0].columns() == [(-1, 0, -1, 0), (0, -2, 0, -1)]
        assert ls.incl[0].columns() == [(0, 1, 0, 0), (1, 0, 1, 1)]

    def test_interior_column(self):
        ls = int_line(3)
        labels_lo = ls.labels[1]
        labels_hi = ls.labels[2]
        j = labels_lo.index("1")
        col = ls.phi[1].column(j)
        expected = {"1": 1, "0": -1, "2": -1}
        assert list(col) == [expected.get(v, 0) for v in labels_hi]

    def test_every_level_reports_z2(self):
        result = limit_ktheory(int_line(10))
        assert len(result.levels) == 10
        for row in result.levels:
            assert row.ker == "0"
            assert row.coker == "Z^2"
        assert result.k0.classification == "stabilized"
        assert result.k0.group_string() == "Z^2"
        assert result.k1.group_string() == "0"


class TestFromGraph:
    def test_matches_omega_mode(self, even_shift):
        from lgkt.engine import ktheory_of_labelled_graph
        ls = builtin_generator(GeneratorSpec("from_graph", max_level=4,
                                             graph=even_shift))
        assert ls.dims == (2, 2, 2, 2, 2)
        assert all(m == IntMatrix.identity(2) for m in ls.incl)
        result = limit_ktheory(ls)
        omega = ktheory_of_labelled_graph(even_shift)
        assert result.k0.base == omega.k0
        assert result.k1.base == omega.k1

    def test_krieger_cover_export(self, even_shift):
        from lgkt.covers import predecessor_cover
        from lgkt.engine import ktheory_of_labelled_graph
        cover = predecessor_cover(even_shift).cover
        ls = builtin_generator(GeneratorSpec("from_graph", max_level=5,
                                             graph=cover))
        assert ls.dims == (2, 3, 3, 3, 3, 3)
        result = limit_ktheory(ls)
        omega = ktheory_of_labelled_graph(cover)
        assert result.k0.classification == "stabilized"
        assert result.k0.base == omega.k0
        assert result.k1.base == omega.k1


class TestValidateLevels:
    def test_generator_output_valid(self):
        report = validate_levels(dyck(3))
        assert report.value("inclusions_unit")
        assert report.value("intertwining")

    def test_perturbed_entry_detected(self):
        ls = int_line(3)
        bad_rows = [list(r) for r in ls.phi[0].data]
        bad_rows[0][0] += 1
        bad = LevelSystem(ls.dims, (IntMatrix(bad_rows),) + ls.phi[1:],
                          ls.incl, ls.labels)
        report = validate_levels(bad)
        assert not report.value("intertwining")
        assert "levels 1/2" in report["intertwining"].witness
        with pytest.raises(EngineError):
            limit_ktheory(bad)

    def test_zero_inclusion_column_detected(self):
        ls = int_line(2)
        zero = IntMatrix.zero(ls.incl[0].rows, ls.incl[0].cols)
        bad = LevelSystem(ls.dims, ls.phi, (zero,) + ls.incl[1:], ls.labels)
        report = validate_levels(bad)
        assert not report.value("inclusions_unit")

    def test_document_roundtrip(self):
        ls = dyck(2)
        doc = ls.to_document()
        assert all(isinstance(x, str)
                   for m in doc["phi"] for row in m for x in row)
        back = parse_level_system(doc)
        assert back.dims == ls.dims
        assert back.phi == ls.phi
        assert back.incl == ls.incl

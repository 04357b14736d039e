import json

import pytest

from lgkt.cli import main

EVEN_SHIFT = {"vertices": ["A", "B"],
              "edges": [["A", "1", "A"], ["A", "0", "B"], ["B", "0", "A"]]}


@pytest.fixture
def even_shift_file(tmp_path):
    path = tmp_path / "even_shift.graph"
    path.write_text(json.dumps(EVEN_SHIFT))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCommands:
    def test_ktheory_text(self, capsys, even_shift_file):
        code, out, _ = run(capsys, "ktheory", even_shift_file)
        assert code == 0
        assert "K0: 0" in out and "K1: 0" in out
        assert "stabilized at level 1" in out

    def test_ktheory_structured(self, capsys, even_shift_file):
        code, out, _ = run(capsys, "--emit", "structured", "ktheory",
                           even_shift_file)
        assert code == 0
        doc = json.loads(out)
        assert doc["k0"] == "0" and doc["k1"] == "0"
        assert doc["mode"] == "stabilized"

    def test_levels_generator(self, capsys):
        code, out, _ = run(capsys, "levels", "--generator", "int_line",
                           "--horizon", "10")
        assert code == 0
        assert "K0: Z^2" in out and "K1: 0" in out
        assert "stabilized" in out

    def test_levels_file(self, capsys, tmp_path):
        from lgkt.levels import GeneratorSpec, builtin_generator
        doc = builtin_generator(GeneratorSpec("dyck2", max_level=2)).to_document()
        path = tmp_path / "system.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "levels", str(path))
        assert code == 0
        assert "Z^inf + Z/2" in out

    def test_validate_failure_exit_code(self, capsys, tmp_path):
        path = tmp_path / "bad.graph"
        path.write_text(json.dumps({
            "edges": [["1", "a", "2"], ["3", "a", "2"], ["2", "b", "1"],
                      ["2", "c", "3"], ["1", "d", "1"]]}))
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 1
        assert "left_resolving: false (vertex 2, label a)" in out

    def test_validate_ok(self, capsys, even_shift_file):
        code, out, _ = run(capsys, "validate", even_shift_file)
        assert code == 0
        assert "result: ok" in out

    def test_partitions(self, capsys, even_shift_file):
        code, out, _ = run(capsys, "partitions", even_shift_file)
        assert code == 0
        assert "level 1: {A}" in out
        assert "stabilized at level 1" in out

    def test_graph_mode(self, capsys, tmp_path):
        path = tmp_path / "o3.graph"
        path.write_text(json.dumps({"edges": [["v", "a", "v"], ["v", "b", "v"],
                                              ["v", "c", "v"]]}))
        code, out, _ = run(capsys, "graph", str(path))
        assert code == 0
        assert "K0: Z/2" in out

    def test_family_from_file(self, capsys, even_shift_file, tmp_path):
        fam = tmp_path / "family.json"
        fam.write_text(json.dumps({"sets": [["A"], ["B"], ["A", "B"]]}))
        code, out, _ = run(capsys, "family", even_shift_file, "--family",
                           str(fam))
        assert code == 0
        assert "K0: 0" in out

    def test_family_default_generated(self, capsys, even_shift_file):
        code, out, _ = run(capsys, "family", even_shift_file)
        assert code == 0
        assert "mode: explicit_family" in out

    def test_cover(self, capsys, even_shift_file):
        code, out, _ = run(capsys, "cover", even_shift_file)
        assert code == 0
        assert "state q0 = {A}" in out
        assert out.count("edge:") == 5

    def test_precondition_failure_exit1(self, capsys, tmp_path):
        path = tmp_path / "source.graph"
        path.write_text(json.dumps({"edges": [["u", "a", "w"],
                                              ["w", "b", "w"]]}))
        code, _, err = run(capsys, "ktheory", str(path))
        assert code == 1
        assert "has_sources" in err

    def test_input_error_exit2(self, capsys, tmp_path):
        path = tmp_path / "broken.graph"
        path.write_text(json.dumps({"vertices": ["u"],
                                    "edges": [["u", "a", "w"]]}))
        code, _, err = run(capsys, "ktheory", str(path))
        assert code == 2
        assert "declared vertex" in err

    def test_missing_file_exit(self, capsys):
        with pytest.raises(SystemExit):
            main(["ktheory", "/nonexistent/path.graph"])


class TestDeterminism:
    def test_identical_invocations_identical_bytes(self, capsys,
                                                   even_shift_file):
        outputs = []
        for _ in range(2):
            code, out, _ = run(capsys, "--emit", "structured", "ktheory",
                               even_shift_file)
            assert code == 0
            outputs.append(out)
        assert outputs[0] == outputs[1]

    def test_structured_roundtrips_schema(self, capsys, even_shift_file):
        from lgkt.schemas import ReportDoc
        _, out, _ = run(capsys, "--emit", "structured", "ktheory",
                        even_shift_file)
        ReportDoc.model_validate(json.loads(out))

import json
import subprocess
import sys
from pathlib import Path

import pytest

from qprefix import QVector, render
from qprefix.cli import main
from qprefix.codebook import (
    CodebookError,
    codebook_from_dict,
    codebook_to_dict,
    read_codebook,
    write_codebook,
)

BOOKS = Path(__file__).resolve().parent.parent / "codebooks"


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEval:
    def test_prefix_example(self, capsys):
        code, out, _ = cli(capsys, "eval", "dm(1/sqrt(2)*|1> + 1/sqrt(2)*|110>)^2")
        assert code == 0
        assert out.splitlines()[0] == "0.5 |1><1| + 0.5 |11><11|"

    def test_norm_example(self, capsys):
        code, out, _ = cli(capsys, "eval", "norm((3/5*|e>+4/5*|0>) (x)[{1}] |1>)")
        assert code == 0 and out.strip() == "0.8"

    def test_malformed(self, capsys):
        code, out, err = cli(capsys, "eval", "<|0| , |0|>")
        assert code == 2 and not out
        assert "line 1, column 2" in err

    def test_evaluation_error(self, capsys):
        code, _, err = cli(capsys, "eval", "dm(|0> + |1>)")
        assert code == 3 and "squared norm" in err

    def test_vector_norm_line(self, capsys):
        code, out, _ = cli(capsys, "eval", "(|0> + |00>) . (|0> - |00>)")
        assert out.splitlines() == ["1 |00> - 1 |0000>", "norm: 1.414213562"]

    def test_json_round_trips_through_codebook_reader(self, capsys):
        code, out, _ = cli(capsys, "--json", "eval", "3/5*|e> + 4/5*|01>")
        data = json.loads(out)
        assert data["kind"] == "vector" and data["norm"] == pytest.approx(1)
        book = codebook_from_dict(data["codebook"])
        assert book.code[0][""] == pytest.approx(0.6)

    def test_bindings_codebook(self, capsys):
        code, out, _ = cli(capsys, "eval", "<phi | phi>", "--bindings", str(BOOKS / "leaky_pair.json"))
        assert code == 0 and out.strip() == "1"

    def test_bindings_expressions(self, capsys, tmp_path):
        path = tmp_path / "env.json"
        path.write_text(json.dumps({"a": "1/sqrt(2)*|0> + 1/sqrt(2)*|1>", "c": 2}))
        code, out, _ = cli(capsys, "eval", "c*a", "--bindings", str(path))
        assert code == 0 and out.splitlines()[0] == "1.414213562 |0> + 1.414213562 |1>"

    def test_complex_amplitudes_from_codebook(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"format_version": 1, "vectors": [
            {"label": "z", "terms": [{"string": "1", "re": "0.6", "im": "-0.8"}]}]}))
        _, out, _ = cli(capsys, "eval", "z", "--bindings", str(path))
        assert out.splitlines()[0] == "(0.6-0.8i) |1>"


class TestRender:
    def test_scalars(self):
        assert render.format_scalar(0.5) == "0.5"
        assert render.format_scalar(-0.0) == "0"
        assert render.format_scalar(2j) == "2i"
        assert render.format_scalar(1 - 2j) == "(1-2i)"
        assert render.format_scalar(1 / 3) == "0.3333333333"

    def test_ordering_and_signs(self):
        v = QVector({"11": 1, "": -0.5, "0": 0.25})
        assert render.render(v) == "-0.5 |e> + 0.25 |0> + 1 |11>"
        assert render.render(QVector()) == "0"


class TestCheck:
    def test_leaky_pair(self, capsys):
        code, out, _ = cli(capsys, "check", str(BOOKS / "leaky_pair.json"))
        assert code == 0
        assert "prefix-free under conditions 1-4" in out

    def test_self_prefix(self, capsys):
        code, out, _ = cli(capsys, "check", str(BOOKS / "self_prefix.json"), "--condition", "1")
        assert code == 1
        assert "s=0 overlap 0.5" in out

    def test_empty_list(self, capsys, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"format_version": 1, "vectors": []}))
        code, _, err = cli(capsys, "check", str(path))
        assert code == 2 and "non-empty" in err

    def test_json(self, capsys):
        code, out, _ = cli(capsys, "check", str(BOOKS / "self_prefix.json"), "--json")
        data = json.loads(out)
        assert code == 1 and data["prefix_free"] is False
        assert set(data["conditions"]) == {"1", "2", "3", "4"}
        assert data["conditions"]["1"]["witness"]["suffix"] == "0"

    def test_missing_file(self, capsys):
        code, _, err = cli(capsys, "check", "/nonexistent/book.json")
        assert code == 2


class TestKraft:
    def test_example(self, capsys):
        code, out, _ = cli(capsys, "kraft", str(BOOKS / "kraft_example.json"))
        assert code == 0
        assert out.splitlines()[0] == "0.625 ≤ 0.7803300859 ≤ 0.8125 ≤ 1"

    def test_classical(self, capsys):
        code, out, _ = cli(capsys, "kraft", str(BOOKS / "classical.json"))
        assert out.splitlines()[0] == "1 = 1 = 1 ≤ 1"
        assert "equality case: yes" in out

    def test_non_orthonormal(self, capsys):
        code, _, err = cli(capsys, "kraft", str(BOOKS / "non_orthonormal.json"))
        assert code == 3 and "<a|b> = 0.7071067812" in err

    def test_json(self, capsys):
        code, out, _ = cli(capsys, "kraft", str(BOOKS / "kraft_example.json"), "--json")
        data = json.loads(out)
        assert data["sum_base"] == 0.625
        assert data["equality_case"] is False
        assert len(data["witnesses"]) == 3


class TestRestrictConcat:
    def test_restrict(self, capsys):
        code, out, _ = cli(
            capsys, "restrict", "1/sqrt(2)*|00> - 1/sqrt(2)*|1111>", "--index", "[1,3]"
        )
        assert code == 0
        assert out.splitlines()[0] == "0.5 |00><00| + 0.5 |111><111|"

    def test_prefix_flag(self, capsys):
        _, out, _ = cli(capsys, "restrict", "dm(1/sqrt(2)*|1> + 1/sqrt(2)*|110>)", "--prefix", "2")
        assert out.splitlines()[0] == "0.5 |1><1| + 0.5 |11><11|"

    def test_bad_index(self, capsys):
        code, _, _ = cli(capsys, "restrict", "|0>", "--index", "[3,1]")
        assert code == 2

    def test_concat_report(self, capsys):
        code, out, _ = cli(
            capsys, "concat", "1/sqrt(2)*|0> + 1/sqrt(2)*|00>", "1/sqrt(2)*|0> - 1/sqrt(2)*|00>"
        )
        lines = out.splitlines()
        assert lines[0] == "0.5 |00> - 0.5 |0000>"
        assert "lost weight: 0.5" in lines

    def test_concat_needs_vectors(self, capsys):
        code, _, _ = cli(capsys, "concat", "dm(|0>)", "|1>")
        assert code == 3


class TestOracle:
    def test_random_run(self, capsys):
        code, out, _ = cli(capsys, "--json", "oracle", "--cells", "5", "--trials", "100", "--seed", "7")
        data = json.loads(out)
        assert code == 0 and data["max_deviation"] < 1e-12

    def test_guard(self, capsys):
        code, _, _ = cli(capsys, "oracle", "--cells", "12")
        assert code == 4

    def test_expr(self, capsys):
        code, out, _ = cli(
            capsys, "oracle", "--cells", "4", "--trials", "0",
            "--expr", "1/sqrt(2)*|00> - 1/sqrt(2)*|1111>", "--index", "[1,3]",
        )
        assert code == 0
        assert "on [1,3]: deviation 0" in out

    def test_codebook_every_prefix(self, capsys):
        code, out, _ = cli(capsys, "--json", "oracle", "--cells", "3", "--trials", "0",
                           "--codebook", str(BOOKS / "kraft_example.json"))
        data = json.loads(out)
        assert code == 0 and len(data["fixed"]) == 3 * 4

    def test_string_too_long_for_cells(self, capsys):
        code, _, _ = cli(capsys, "oracle", "--cells", "2", "--expr", "|0000>")
        assert code == 4

    def test_deterministic(self, capsys):
        a = cli(capsys, "--json", "oracle", "--trials", "10", "--seed", "3")[1]
        b = cli(capsys, "oracle", "--trials", "10", "--seed", "3", "--json")[1]
        assert a == b


class TestCodebookFile:
    def test_round_trip(self, tmp_path):
        book = read_codebook(BOOKS / "kraft_example.json")
        path = tmp_path / "copy.json"
        write_codebook(path, book.code, book.metadata)
        again = read_codebook(path)
        assert again.code == book.code and again.metadata == book.metadata

    def test_numbers_accepted(self):
        book = codebook_from_dict(
            {"format_version": 1, "vectors": [{"label": "x", "terms": [{"string": "", "re": 1}]}]}
        )
        assert book.code[0][""] == 1

    @pytest.mark.parametrize(
        "data",
        [
            [],
            {"format_version": 2, "vectors": [{"terms": [{"string": "0", "re": "1"}]}]},
            {"format_version": 1, "vectors": [{"terms": [{"string": "0x", "re": "1"}]}]},
            {"format_version": 1, "vectors": [{"terms": [{"string": "0", "re": "abc"}]}]},
            {"format_version": 1, "vectors": [{"terms": [{"string": "0", "re": "0"}]}]},
            {"format_version": 1, "vectors": [{"terms": [{"string": "0", "re": "1"},
                                                          {"string": "0", "re": "1"}]}]},
            {"format_version": 1, "vectors": [{"label": "a", "terms": [{"string": "0", "re": "1"}]},
                                              {"label": "a", "terms": [{"string": "1", "re": "1"}]}]},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(CodebookError):
            codebook_from_dict(data)

    def test_to_dict_uses_decimal_strings(self):
        data = codebook_to_dict(read_codebook(BOOKS / "leaky_pair.json").code)
        assert all(isinstance(t["re"], str) for v in data["vectors"] for t in v["terms"])


def test_tolerance_env(monkeypatch, capsys):
    monkeypatch.setenv("QPREFIX_TOLERANCE", "-1")
    code, _, _ = cli(capsys, "eval", "|0>")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qprefix", "kraft", str(BOOKS / "classical.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "1 = 1 = 1 ≤ 1"

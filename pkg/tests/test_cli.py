import io
import json
import subprocess
import sys

import pytest

from graphkt.cli import run
from graphkt.graph import cuntz_graph, make_problem
from graphkt.intmat import AbelianGroup
from graphkt.invariants import graded_k_homology, graded_k_theory


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc, encoding="utf-8")
    return str(path)


@pytest.fixture
def o2(tmp_path):
    return write(tmp_path, "o2.graph", cuntz_graph(2).to_document("all_regular"))


@pytest.fixture
def o3(tmp_path):
    return write(tmp_path, "o3.graph", cuntz_graph(3).to_document("all_regular"))


def test_ktheory_o2(o2):
    code, out, _ = invoke("ktheory", o2)
    assert code == 0
    assert "K0^gr = 0, K1^gr = 0" in out


def test_khomology_o3(o3):
    code, out, _ = invoke("khomology", o3)
    assert code == 0
    assert "K0_gr = 0, K1_gr = Z/2" in out


def test_missing_file_names_it(tmp_path):
    missing = str(tmp_path / "missing.graph")
    code, out, err = invoke("ktheory", missing)
    assert code == 2 and out == ""
    assert "missing.graph" in err


def test_parse_error_exit_code(tmp_path):
    bad = write(tmp_path, "bad.graph", {"vertices": ["u"], "edges": [
        {"id": "e", "source": "u", "range": "nowhere"}]})
    code, _, err = invoke("all", bad)
    assert code == 2 and "nowhere" in err


def test_invalid_flag_exit_code(o2, capsys):
    assert invoke("ktheory", o2, "--format", "yaml")[0] == 2
    assert invoke("frobnicate", o2)[0] == 2


def test_all_reports_duality(o3):
    code, out, _ = invoke("all", o3)
    assert code == 0
    assert "[PASS] duality" in out


def test_classical_forces_trivial_grading(tmp_path):
    path = write(tmp_path, "g.graph", cuntz_graph(4, odd=3).to_document(["v"]))
    code, out, _ = invoke("classical", path)
    assert code == 0
    assert "K0^gr = Z/3, K1^gr = 0" in out
    assert "K1_gr = Z/3" in out


def test_snf_command(tmp_path):
    path = write(tmp_path, "m.json", {"matrix": [[2, 4], [6, 8]]})
    code, out, _ = invoke("snf", path, "--format", "machine")
    assert code == 0
    doc = json.loads(out)
    assert doc["diagonal"] == [2, 4] and doc["rank"] == 2
    assert AbelianGroup.parse(doc["groups"]["coker"]["text"]) == AbelianGroup(0, (2, 4))


def test_snf_empty_matrix(tmp_path):
    path = write(tmp_path, "m.json", {"matrix": [[], [], []], "cols": 0})
    code, out, _ = invoke("snf", path, "--format", "machine")
    assert code == 0
    assert json.loads(out)["groups"]["coker"]["free_rank"] == 3


def test_snf_bad_document(tmp_path):
    path = write(tmp_path, "m.json", {"matrix": [[1, 2], [3]]})
    assert invoke("snf", path)[0] == 2


def test_tails_command(tmp_path):
    doc = {"vertices": ["v", "w"], "edges": [
        {"id": "a", "source": "v", "range": "v"}, {"id": "b", "source": "v", "range": "v"}]}
    path = write(tmp_path, "t.graph", doc)
    code, out, _ = invoke("tails", path, "--at", "w", "--max-length", "4", "--format", "machine")
    assert code == 0
    rec = json.loads(out)
    lengths = rec["tails"][0]["by_length"]
    assert [x["length"] for x in lengths] == [1, 2, 3, 4]
    assert len({json.dumps(x["groups"]) for x in lengths}) == 1

    code, out, _ = invoke("tails", path, "--at", "v", "--at", "w", "--max-length", "2")
    assert code == 1
    assert "at v: error" in out and "at w: baseline" in out

    assert invoke("tails", path, "--at", "w", "--max-length", "0")[0] == 2


def test_check_passes(tmp_path):
    doc = {"vertices": ["a", "b", "c"], "edges": [
        {"id": "1", "source": "a", "range": "b", "parity": 1},
        {"id": "2", "source": "b", "range": "c"},
        {"id": "3", "source": "c", "range": "a"},
        {"id": "4", "source": "a", "range": "a"},
        {"id": "5", "source": "b", "range": "b", "parity": 1}], "relative_set": ["a", "c"]}
    path = write(tmp_path, "c.graph", doc)
    code, out, _ = invoke("check", path, "--seed", "5")
    assert code == 0, out
    assert "FAIL" not in out


def test_emit_flags(tmp_path):
    path = write(tmp_path, "g.graph", cuntz_graph(3, odd=1).to_document(["v"]))
    code, out, _ = invoke("ktheory", path, "--emit-matrices", "--emit-kernel-basis",
                          "--format", "machine")
    rec = json.loads(out)
    assert rec["matrices"]["ktheory_matrix"]["entries"] == [[0]]
    assert rec["kernel_basis"]["vectors"] == [[1]]
    code, out, _ = invoke("ktheory", path, "--emit-matrices")
    assert "ktheory_matrix (1x1):" in out


def test_machine_output_round_trips(tmp_path):
    p = make_problem(cuntz_graph(5, odd=1), ["v"])
    path = write(tmp_path, "g.graph", p.graph.to_document(["v"]))
    code, out, _ = invoke("all", path, "--format", "machine")
    rec = json.loads(out)
    kt, kh = graded_k_theory(p), graded_k_homology(p)
    expected = {**kt.groups, **kh.groups}
    for name, group in expected.items():
        entry = rec["groups"][name]
        assert AbelianGroup.parse(entry["text"]) == group
        assert AbelianGroup(entry["free_rank"], tuple(entry["invariant_factors"])) == group


def test_machine_output_is_byte_stable(tmp_path):
    doc = cuntz_graph(3, odd=1).to_document("all_regular")
    compact = write(tmp_path, "a.graph", json.dumps(doc, separators=(",", ":")))
    spaced = write(tmp_path, "b.graph", json.dumps(doc, indent=4))
    for cmd in ("all", "check"):
        a = invoke(cmd, compact, "--format", "machine", "--seed", "3")[1]
        b = invoke(cmd, spaced, "--format", "machine", "--seed", "3")[1]
        assert a == b


def test_module_entry_point(o3):
    proc = subprocess.run(
        [sys.executable, "-m", "graphkt", "khomology", o3], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "K1_gr = Z/2" in proc.stdout

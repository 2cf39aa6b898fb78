import json

import pytest

from schmidt3q import __version__
from schmidt3q.cli import fmt_number, jsonable, run

KEYS = {"command", "target", "results", "verdicts", "seed", "tool_version"}


def run_json(capsys, argv):
    code = run(argv + ["--json"])
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == KEYS and doc["tool_version"] == __version__
    return code, doc


def test_gate_json(capsys):
    code, doc = run_json(capsys, ["gate", "U5_thm1"])
    assert code == 0
    res = doc["results"][0]
    assert res["certificate_terms"] == 5 and res["claimed_rank"] == 5
    assert doc["verdicts"] == {"unitarity": "PASS"}
    assert len(res["matrix"]) == 8 and len(res["matrix"][0][0]) == 2


def test_gate_text_rounds(capsys):
    assert run(["gate", "H"]) == 0
    out = capsys.readouterr().out
    assert "0.707107" in out and "0.7071067811" not in out


def test_gate_non_unitary_tensor(capsys):
    assert run(["gate", "T_lemma2"]) == 0
    assert "NOT-CLAIMED" in capsys.readouterr().out


def test_verify_c5(capsys):
    assert run(["verify", "C5"]) == 0
    out = capsys.readouterr().out
    assert "C5" in out and "rank-4" in out and "FAIL" not in out


def test_rank_u8_seed7(capsys):
    code, doc = run_json(capsys, ["rank", "U8", "--seed", "7"])
    assert code == 0 and doc["seed"] == 7
    assert doc["results"][0]["certified_upper"] == 8
    assert doc["verdicts"] == {"U8": "OPEN"}


def test_rank_cut(capsys):
    code, doc = run_json(capsys, ["rank", "FREDKIN", "--cut", "C|AB"])
    assert code == 0 and doc["results"][0]["rank"] == 4


def test_rank_circuit_file(tmp_path, capsys):
    f = tmp_path / "u4.txt"
    f.write_text("cnot 1 2\ncnot 0 1\n")
    code, doc = run_json(capsys, ["rank", "--circuit", str(f)])
    assert code == 0 and doc["results"][0]["als_upper"] == 4


def test_eval(tmp_path, capsys):
    f = tmp_path / "c.txt"
    f.write_text("h 2\ntoffoli 0 1 2\nh 2\n")
    code, doc = run_json(capsys, ["eval", str(f)])
    assert code == 0
    assert doc["results"][0]["rank_report"]["als_upper"] == 2


def test_eval_four_qubits(tmp_path, capsys):
    f = tmp_path / "c.txt"
    f.write_text("qubits 4\ncnot 0 3\n")
    code, doc = run_json(capsys, ["eval", str(f)])
    assert code == 0 and doc["results"][0]["bipartite_ranks"]["A|BCD"] == 2


def test_decompose(capsys):
    code, doc = run_json(capsys, ["decompose", "U3_pauli", "--rank", "3"])
    assert code == 0 and doc["results"][0]["converged"]
    assert len(doc["results"][0]["factors"]["a"]) == 4


@pytest.mark.parametrize("argv, message", [
    (["eval", "missing.txt"], "file not found"),
    (["gate", "nope"], "unknown gate"),
    (["verify", "C99"], "unknown claim"),
    (["rank", "bullock16"], "three qubits"),
    (["rank", "H", "--cut", "A|B|C"], "invalid cut"),
    (["decompose", "bullock16", "--rank", "2"], "not a three-qubit gate"),
])
def test_usage_errors(argv, message, capsys):
    assert run(argv) == 2
    assert message in capsys.readouterr().err


def test_bad_circuit_file(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("cnot 0 3\n")
    assert run(["eval", str(f)]) == 2
    assert "index out of range" in capsys.readouterr().err


def test_unknown_command():
    with pytest.raises(SystemExit) as info:
        run(["frobnicate"])
    assert info.value.code == 2


def test_json_is_byte_identical(capsys):
    run(["rank", "U4", "--json"])
    first = capsys.readouterr().out
    run(["rank", "U4", "--json"])
    assert capsys.readouterr().out == first


def test_helpers():
    assert jsonable(1 + 2j) == [1.0, 2.0]
    assert jsonable(float("inf")) is None
    assert jsonable(frozenset({8, 7})) == [7, 8]
    assert fmt_number(1e-17 + 0.5j) == "0.5j"
    assert fmt_number(1 / 3) == "0.333333"

import json

import pytest

from dihedral_polytopes.cli import EXIT_FAIL, EXIT_PASS, EXIT_SKIP, EXIT_USAGE, build_document, exit_status, main, parse_n
from dihedral_polytopes.report import Report


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_usage(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    capsys.readouterr()
    return exc.value.code


def test_parse_n():
    assert parse_n("3..5") == [3, 4, 5]
    assert parse_n("4") == [4]


def test_build_qn3(capsys):
    code, out, _ = run(capsys, "build", "qn", "3")
    doc = json.loads(out)
    assert code == EXIT_PASS
    assert list(doc) == ["model", "n", "dim", "vertices", "equations", "inequalities"]
    assert (len(doc["vertices"]), len(doc["equations"]), len(doc["inequalities"])) == (6, 5, 9)


def test_build_dpn4(capsys):
    _, out, _ = run(capsys, "build", "dpn", "4")
    doc = json.loads(out)
    assert len(doc["vertices"]) == 8 and doc["dim"] == 5


@pytest.mark.parametrize(
    "argv",
    [
        ("build", "qn", "1"),
        ("build", "dpn", "2"),
        ("verify", "nonsense", "--n", "3"),
        ("verify", "theorem1"),
        ("verify", "theorem1", "--n", "x"),
        ("verify", "theorem1", "--n", "3", "--n-range", "3", "4"),
        ("verify", "corollary", "--n", "3"),
        ("verify", "theorem1", "--n", "3", "--jobs", "0"),
        ("ehrhart", "qn", "3", "--kmax", "-1"),
    ],
)
def test_usage_errors(capsys, argv):
    assert run_usage(capsys, *argv) == EXIT_USAGE


def test_ehrhart_csv(capsys):
    code, out, _ = run(capsys, "ehrhart", "qn", "3", "--kmax", "6", "--format", "csv")
    lines = out.splitlines()
    assert code == EXIT_PASS
    assert lines[0] == "k,count,hstar,codegree,normalized_volume"
    assert [int(l.split(",")[1]) for l in lines[1:]] == [1, 6, 21, 55, 120, 231, 406]
    assert [l.split(",")[2] for l in lines[1:4]] == ["1", "1", "1"]


def test_ehrhart_dpn4(capsys):
    _, out, _ = run(capsys, "ehrhart", "dpn", "4")
    row = json.loads(out)
    assert row["hstar"] == [1, 2, 1]
    assert row["codegree"] == 4 and row["normalized_volume"] == 4


def test_ehrhart_over_capacity(capsys):
    code, out, _ = run(capsys, "ehrhart", "qn", "9")
    assert code == EXIT_SKIP
    assert json.loads(out)["status"] == "skipped"


def test_env_cap_override(capsys, monkeypatch):
    monkeypatch.setenv("DIHEDRAL_CAP_N", "2")
    code, _, _ = run(capsys, "ehrhart", "qn", "3")
    assert code == EXIT_SKIP
    monkeypatch.setenv("DIHEDRAL_CAP_N", "abc")
    assert run_usage(capsys, "ehrhart", "qn", "3") == EXIT_USAGE


def test_verify_theorem3_n5(capsys):
    code, out, err = run(capsys, "verify", "theorem3", "--n", "5")
    rows = [json.loads(l) for l in out.splitlines()]
    assert code == EXIT_PASS
    hstar = next(r for r in rows if r["claim"] == "theorem3.hstar")
    assert hstar["details"]["hstar"] == [1, 1, 1, 1, 1]
    assert "4 passed" in err


def test_verify_tinhofer(capsys):
    code, out, _ = run(capsys, "verify", "tinhofer", "--n", "3")
    assert code == EXIT_PASS
    assert json.loads(out)["details"]["vertices"] == 6


def test_verify_all_is_deterministic_across_jobs(capsys):
    code1, out1, _ = run(capsys, "verify", "all", "--n", "3..4")
    code2, out2, _ = run(capsys, "verify", "all", "--n-range", "3", "4", "--jobs", "2")
    assert code1 == code2 == EXIT_PASS
    assert out1 == out2


def test_verify_skip_exit_code(capsys):
    code, _, _ = run(capsys, "verify", "theorem2", "--n", "8")
    assert code == EXIT_SKIP


def test_build_round_trip_verdicts(capsys, tmp_path):
    path = tmp_path / "q4.json"
    assert main(["build", "qn", "4", "--out", str(path)]) == EXIT_PASS
    code, out, _ = run(capsys, "verify", "theorem1", "--input", str(path))
    from_file = [json.loads(l) for l in out.splitlines()]
    _, out, _ = run(capsys, "verify", "theorem1", "--n", "4")
    direct = [json.loads(l) for l in out.splitlines()]
    assert code == EXIT_PASS
    assert all(r["status"] == "pass" for r in from_file if r["claim"].startswith("input."))
    assert [r for r in from_file if not r["claim"].startswith("input.")] == direct


def test_input_detects_tampering(capsys, tmp_path):
    doc = build_document("qn", 3)
    doc["inequalities"][0]["rhs"] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "compressed", "--input", str(path))
    assert code == EXIT_FAIL
    failed = {json.loads(l)["claim"] for l in out.splitlines() if json.loads(l)["status"] == "fail"}
    assert "input.vertices_satisfy" in failed


def test_build_is_byte_identical(capsys):
    _, a, _ = run(capsys, "build", "dpn", "5")
    _, b, _ = run(capsys, "build", "dpn", "5")
    assert a == b


def test_subgroups_csv(capsys):
    code, out, _ = run(capsys, "subgroups", "--n", "4", "--format", "csv")
    lines = out.splitlines()
    assert code == EXIT_PASS
    assert len(lines) == 11
    assert sum(",false,false," in l for l in lines) == 3


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "compressed", "--n", "3", "--timing")
    assert "elapsed" in json.loads(out)


def test_exit_status_precedence():
    rep = Report("x")
    rep.check("a", "", lambda: (True, {}))
    assert exit_status([rep]) == EXIT_PASS
    from dihedral_polytopes.config import CapacityError

    def skip():
        raise CapacityError("too big")

    rep.check("b", "", skip)
    assert exit_status([rep]) == EXIT_SKIP
    rep.check("c", "", lambda: (False, {}))
    assert exit_status([rep]) == EXIT_FAIL

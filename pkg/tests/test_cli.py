import json
import subprocess
import sys

import pytest

from vcsp_backdoor import CostFunction, Instance, detect_backdoor_exhaustive
from vcsp_backdoor.backdoor import node_bound
from vcsp_backdoor.cli import main
from vcsp_backdoor.fileformat import emit_instance, load_instance

from helpers import family

LANGS = "min_closed,submodular"
XOR = CostFunction.from_relation(2, 2, [(0, 1), (1, 0)])
IMPLIES = CostFunction.from_relation(2, 2, [(0, 0), (0, 1), (1, 1)])


def write(tmp_path, inst, name="p.json", languages=()):
    path = tmp_path / name
    path.write_text(emit_instance(inst, languages))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out.strip()
    return code, (json.loads(out.splitlines()[-1]) if out else None)


def test_detect_k0_in_class(tmp_path, capsys):
    path = write(tmp_path, Instance.create(3, 2, [((0, 1), IMPLIES)]))
    for mode in ("branching", "exhaustive"):
        code, out = run(capsys, "detect", "--instance", path, "--k", 0, "--languages", LANGS, "--mode", mode)
        assert code == 0 and out["backdoor"] == []


def test_detect_needs_two(tmp_path, capsys):
    inst = Instance.create(4, 2, [((0, 1), XOR), ((2, 3), XOR)])
    assert detect_backdoor_exhaustive(inst, 1, family()) is None
    path = write(tmp_path, inst)
    code, out = run(capsys, "detect", "--instance", path, "--k", 1, "--languages", LANGS, "--mode", "branching")
    assert code == 1 and out["backdoor"] is None
    code, out = run(capsys, "detect", "--instance", path, "--k", 2, "--languages", LANGS)
    assert code == 0 and out["backdoor"] == [0, 2]


def test_gen_then_pipeline_matches_exhaustive_solve(tmp_path, capsys):
    path = str(tmp_path / "cv.json")
    assert main(["gen", "cut_vertex", "--seed", "4", "--size", "size1=3", "--out", path]) == 0
    report = tmp_path / "report.json"
    code, piped = run(capsys, "pipeline", "--instance", path, "--k", 1, "--languages", LANGS, "--report", report)
    assert code == 0 and piped["backdoor"] == [0]
    code, brute = run(capsys, "solve", "--instance", path, "--mode", "exhaustive")
    assert code == 0 and piped["cost"] == brute["cost"]
    rep = json.loads(report.read_text())
    assert rep["command"] == "pipeline" and rep["exit_code"] == 0
    assert rep["result"] == piped
    assert set(rep["stats"]) == {"nodes_visited", "assignments_checked"} and rep["stats"]["nodes_visited"] > 0
    assert rep["wall_time_seconds"] >= 0


def test_solve_through_backdoor(tmp_path, capsys):
    path = str(tmp_path / "pb.json")
    main(["gen", "planted_backdoor", "--seed", "2", "--size", "n=7", "--out", path])
    code, brute = run(capsys, "solve", "--instance", path, "--mode", "exhaustive")
    report = tmp_path / "r.json"
    code, viabd = run(capsys, "solve", "--instance", path, "--mode", "branching", "--k", 2, "--languages", LANGS, "--report", report)
    assert code == 0 and viabd["cost"] == brute["cost"]
    assert json.loads(report.read_text())["stats"]["nodes_visited"] <= node_bound(family(), 2)
    code, scat = run(capsys, "solve", "--instance", path, "--mode", "branching", "--k", 2, "--languages", LANGS, "--scattered")
    assert code == 0 and scat["cost"] == brute["cost"]


def test_verify(tmp_path, capsys):
    path = str(tmp_path / "cv.json")
    main(["gen", "cut_vertex", "--out", path])
    args = ["verify", "--instance", path, "--languages", LANGS, "--backdoor", "0"]
    code, out = run(capsys, *args, "--scattered", "true")
    assert code == 0 and out["is_backdoor"] is True
    code, out = run(capsys, *args, "--scattered", "false")
    assert code == 1 and out["is_backdoor"] is False
    code, _ = run(capsys, "verify", "--instance", path, "--languages", LANGS, "--backdoor", "99")
    assert code == 2


def test_finitize_and_to_csp_outputs(tmp_path, capsys):
    path = str(tmp_path / "cv.json")
    main(["gen", "cut_vertex", "--out", path])
    fin_path, csp_path = tmp_path / "fin.json", tmp_path / "csp.json"
    code, out = run(capsys, "finitize", "--instance", path, "--k", 1, "--languages", LANGS, "--out", fin_path)
    assert code == 0 and out["types"] >= 1
    fin = load_instance(str(fin_path))
    assert fin.metadata["transform"] == "finitize" and len(fin.languages) == 2
    code, out = run(capsys, "to-csp", "--instance", path, "--k", 1, "--languages", LANGS, "--out", csp_path)
    assert code == 0
    csp = load_instance(str(csp_path))
    meta = csp.metadata
    assert meta["domain"][:2] == ["d:0", "d:1"] and meta["domain"][-1] == "eps"
    assert len(meta["domain"]) == csp.instance.domain_size == out["domain_size"]
    fresh = [v for vs in meta["fresh"].values() for v in vs]
    assert not set(fresh) & set(meta["original_variables"])
    assert all(c.function.is_crisp for c in csp.instance.constraints)
    # the emitted crisp languages can be used directly
    code, out = run(capsys, "detect", "--instance", csp_path, "--k", 1, "--scattered", "--languages", ",".join(csp.languages))
    assert code == 0 and out["backdoor"] == [0]


def test_arity_gate_is_no(tmp_path, capsys):
    wide = CostFunction(4, 2, [0] * 16)
    path = write(tmp_path, Instance.create(4, 2, [((0, 1, 2, 3), wide)]))
    for cmd in ("finitize", "to-csp", "pipeline"):
        code, out = run(capsys, cmd, "--instance", path, "--k", 1, "--languages", LANGS)
        assert code == 1 and out["result"] == "NO"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["detect", "--instance", "missing.json", "--k", "1", "--languages", LANGS],
        ["detect", "--k", "1", "--languages", LANGS],
        ["gen", "cut_vertex", "--size", "size1=1"],
        ["gen", "cut_vertex", "--size", "oops"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_bad_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"domain_size": 2, "num_variables": 1, "constraints": [{"scope": [0], "table": ["0"]}]}')
    assert main(["solve", "--instance", str(bad)]) == 2
    assert "constraints[0].table" in capsys.readouterr().err
    good = write(tmp_path, Instance.create(2, 2, [((0, 1), XOR)]))
    assert main(["detect", "--instance", good, "--k", "1", "--languages", "nope"]) == 2
    assert main(["detect", "--instance", good, "--k", "-1", "--languages", LANGS]) == 2
    assert main(["detect", "--instance", good, "--k", "1", "--languages", LANGS, "--mode", "branching", "--scattered"]) == 2


def test_refusals_exit_3(tmp_path, capsys):
    big = write(tmp_path, Instance.create(40, 2))
    assert main(["solve", "--instance", big, "--mode", "exhaustive"]) == 3
    lang_doc = tmp_path / "lang.json"
    lang_doc.write_text(
        json.dumps(
            {
                "domain_size": 2,
                "num_variables": 2,
                "constraints": [],
                "languages": [{"name": "F", "functions": [{"arity": 1, "table": ["0", "inf"]}]}],
            }
        )
    )
    assert main(["pipeline", "--instance", str(lang_doc), "--k", "1", "--languages", "F"]) == 3


def test_module_entry_point(tmp_path):
    out = tmp_path / "h.json"
    proc = subprocess.run(
        [sys.executable, "-m", "vcsp_backdoor", "gen", "random_horn", "--seed", "1", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run(
        [sys.executable, "-m", "vcsp_backdoor", "detect", "--instance", str(out), "--k", "0", "--languages", "horn"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["backdoor"] == []

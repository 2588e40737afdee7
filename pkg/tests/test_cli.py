"""Command line behavior: exit codes, JSON payloads, file outputs."""
import json
from pathlib import Path

import pytest

from obslat import jsonio
from obslat.cli import _merge_grid_flag, main

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def c(name: str) -> str:
    return str(CORPUS / name)


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv) -> tuple[int, dict]:
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_lattice_list_and_check(capsys, tmp_path):
    code, payload = run_json(capsys, "lattice", "list")
    assert code == 0 and "mo2" in payload["lattices"]

    code, payload = run_json(capsys, "lattice", "check", "-i", "o6")
    assert code == 0
    assert payload["distributive"] is False
    assert payload["orthomodular"] is False
    assert payload["orthomodular_witness"] == ["a", "b"]

    dot = tmp_path / "hasse.dot"
    code, _, _ = run(capsys, "lattice", "check", "-i", c("mo2.json"),
                     "--dot", str(dot))
    assert code == 0
    assert "digraph" in dot.read_text()


def test_stone_commands(capsys):
    code, payload = run_json(capsys, "stone", "quasipoints",
                             "--lattice", "mo2")
    assert code == 0 and payload["count"] == 4
    code, payload = run_json(capsys, "stone", "dual-ideals",
                             "--lattice", "b3")
    assert code == 0 and payload["count"] == 7


def test_spectral_commands(capsys, tmp_path):
    fam = c("family_mo2.json")
    code, payload = run_json(capsys, "spectral", "eval",
                             "--family", fam, "--at", "1.0")
    assert code == 0 and payload["element"] == "a"

    out = tmp_path / "restricted.json"
    code, payload = run_json(capsys, "spectral", "restrict", "--family", fam,
                             "--to", "a'", "--out", str(out))
    assert code == 0 and payload["breakpoints"] == [[2.0, "a'"]]
    reloaded = jsonio.load_family(str(out))
    assert reloaded.breakpoints == ((2.0, reloaded.lattice.index("a'")),)

    code, payload = run_json(capsys, "spectral", "spectrum", "--family", fam)
    assert code == 0 and payload["spectrum"] == [1.0, 2.0]


def test_obs_commands(capsys, tmp_path):
    code, payload = run_json(capsys, "obs", "eval",
                             "--family", c("family_mo2.json"),
                             "--ideal", "a,1")
    assert code == 0 and payload["value"] == 1.0

    code, payload = run_json(capsys, "obs", "check",
                             "--table", c("table_mo2.json"))
    assert code == 0 and payload["intersection_condition"]

    code, payload = run_json(capsys, "obs", "check",
                             "--table", c("table_bad_mo2.json"))
    assert code == 1
    assert payload["intersection_witness"] == {
        "family": [["a", "1"], ["b", "1"]], "intersection": ["1"],
        "sup_of_values": 1.5, "value": 2.0}

    out = tmp_path / "fam.json"
    code, payload = run_json(capsys, "obs", "reconstruct",
                             "--table", c("table_mo2.json"),
                             "--out", str(out))
    assert code == 0
    assert jsonio.load_family(str(out)).breakpoints == \
        tuple((lam, jsonio.load_lattice("mo2").index(nm))
              for lam, nm in payload["breakpoints"])

    code, out_text, err = run(capsys, "obs", "reconstruct",
                              "--table", c("table_bad_mo2.json"))
    assert code == 1
    assert json.loads(err)["witness"]["sup_of_values"] == 1.5


def test_vn_commands(capsys, tmp_path):
    code, payload = run_json(capsys, "vn", "spectral-family",
                             c("matrix_a.json"))
    assert code == 0 and payload["dim"] == 3
    assert payload["steps"][-1]["rank"] == 3

    code, payload = run_json(capsys, "vn", "order",
                             c("matrix_low.json"), c("matrix_high.json"))
    assert code == 0
    assert payload == {"a_leq_b": True, "b_leq_a": False}

    out = tmp_path / "rho.json"
    code, payload = run_json(capsys, "vn", "restrict",
                             "--algebra", c("gens_diag.json"),
                             "--op", c("matrix_a.json"),
                             "--map", "rho", "--out", str(out))
    assert code == 0
    assert out.is_file()

    code, payload = run_json(capsys, "vn", "core",
                             "--algebra", c("gens_diag.json"),
                             "--proj", c("proj_q.json"))
    assert code == 0
    core = jsonio.load_matrix(payload["core"])
    support = jsonio.load_matrix(payload["support"])
    import numpy as np
    assert np.allclose(core, np.zeros((3, 3)))
    assert np.trace(support).real == pytest.approx(2.0)


def test_classical_commands(capsys):
    code, payload = run_json(capsys, "classical", "induce",
                             "--space", c("space_sierpinski.json"),
                             "--fn", c("fn_flat.json"))
    assert code == 0
    assert payload["induced"] == {"1": 1.0, "2": 1.0, "3": 1.0}

    code, payload = run_json(capsys, "classical", "check-continuity",
                             "--space", c("space_sierpinski.json"),
                             "--fn", c("fn_id.json"))
    assert code == 1
    assert payload["witness"] == {"neighbor": "1", "point": "2",
                                  "values": [1.0, 0.0]}

    code, payload = run_json(capsys, "classical", "check-continuity",
                             "--family", c("topfam_abs.json"))
    assert code == 0 and payload["continuous"]

    code, payload = run_json(capsys, "classical", "check-continuity",
                             "--family", c("topfam_stepline.json"))
    assert code == 1
    assert payload["witness"] == {"closure": ["u0", "v1"], "lambda": -2.0,
                                  "mu": -1.5, "value": ["u0"]}

    code, _, _ = run(capsys, "classical", "check-continuity")
    assert code == 2


def test_classical_demo_and_grid_flag(capsys):
    # a negative lower bound must survive argparse
    code, payload = run_json(capsys, "classical", "demo",
                             "--family", "id", "--grid", "-2:2:0.25")
    assert code == 0 and payload["mismatches"] == 0

    code, payload = run_json(capsys, "classical", "demo",
                             "--family", "step", "--grid", "0:3:0.5")
    assert code == 0 and payload["continuous"]

    code, _, _ = run(capsys, "classical", "demo",
                     "--family", "id", "--grid", "nope")
    assert code == 2

    merged = _merge_grid_flag(["demo", "--grid", "-2:2:0.25", "--seed", "7"])
    assert merged == ["demo", "--grid=-2:2:0.25", "--seed", "7"]
    untouched = _merge_grid_flag(["demo", "--grid", "0:3:0.5"])
    assert untouched == ["demo", "--grid", "0:3:0.5"]


def test_context_commands(capsys, tmp_path):
    code, payload = run_json(capsys, "context", "glue",
                             "--diagram", c("diagram_qubit.json"),
                             "--sections", c("section_clash.json"))
    assert code == 0
    assert payload["commuting_ok"] is True
    assert payload["increasing_ok"] is False
    assert payload["extendable"] == "no"

    out = tmp_path / "section.json"
    code, _ = run_json(capsys, "context", "from-operator",
                       "--op", c("op_qubit.json"),
                       "--diagram", c("diagram_qubit.json"),
                       "--out", str(out))
    assert code == 0
    code, payload = run_json(capsys, "context", "glue",
                             "--diagram", c("diagram_qubit.json"),
                             "--sections", str(out))
    assert code == 0 and payload["extendable"] == "yes"

    # a section that is not even locally consistent fails the check
    broken = json.loads((CORPUS / "section_clash.json").read_text())
    broken["values"]["Az"]["{1,2}"] = 0.5
    bad = tmp_path / "broken.json"
    bad.write_text(json.dumps(broken))
    code, _, err = run(capsys, "context", "glue",
                       "--diagram", c("diagram_qubit.json"),
                       "--sections", str(bad))
    assert code == 1
    assert json.loads(err)["witness"]["kind"] == "not-increasing-in-context"


def test_presheaf_commands(capsys):
    code, payload = run_json(capsys, "presheaf", "check",
                             "-i", c("presheaf_mo2.json"))
    assert code == 1
    assert payload["presheaf_laws"] is True and payload["sheaf"] is False
    assert payload["existence_failure"]["cover"] == ["a", "a'", "b"]

    code, payload = run_json(capsys, "presheaf", "check",
                             "-i", c("presheaf_fn.json"))
    assert code == 0 and payload["sheaf"] is True

    code, payload = run_json(capsys, "presheaf", "sheafify",
                             "-i", c("presheaf_mo2.json"))
    assert code == 0 and payload["quasipoints"] == 4
    assert payload["section_counts"]["{1,2,3,4}"] == 16


def test_error_exits(capsys, tmp_path):
    code, _, err = run(capsys, "lattice", "check", "-i", "no_such.json")
    assert code == 2 and "no such file" in err

    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run(capsys, "lattice", "check", "-i", str(bad))
    assert code == 2 and "malformed" in err

    code, _, err = run(capsys, "obs", "eval",
                       "--family", c("family_mo2.json"), "--ideal", " , ")
    assert code == 2


def test_json_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "presheaf", "check",
                      "-i", c("presheaf_mo2.json"), "--format", "json")
    _, second, _ = run(capsys, "presheaf", "check",
                       "-i", c("presheaf_mo2.json"), "--format", "json")
    assert first == second
    _, a1, _ = run(capsys, "vn", "spectral-family", c("matrix_a.json"),
                   "--format", "json")
    _, a2, _ = run(capsys, "vn", "spectral-family", c("matrix_a.json"),
                   "--format", "json")
    assert a1 == a2


def test_suite_reports_nine_passing_criteria(capsys):
    code, payload = run_json(capsys, "suite", "--seed", "7")
    assert code == 0
    assert len(payload["results"]) == 9
    assert all(r["passed"] for r in payload["results"])
    assert [r["number"] for r in payload["results"]] == list(range(1, 10))

"""Command-line behavior: round trips, reports, exit codes, rendering."""

import json
import xml.etree.ElementTree as ET
from fractions import Fraction as F

from thickset.cli import main


def run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_thickness_round_trip(tmp_path, capsys):
    stage_file = tmp_path / "k.json"
    code, _, _ = run(
        ["construct", "--middle-alpha", "1/5", "--depth", "8", "--out", str(stage_file)],
        capsys,
    )
    assert code == 0
    code, out, _ = run(["thickness", str(stage_file)], capsys)
    assert code == 0
    assert out.splitlines()[0] == "2"
    assert "argmin endpoint" in out


def test_construct_serialize_parse_identity(tmp_path, capsys):
    stage_file = tmp_path / "k.json"
    run(["construct", "--random-thick", "3/2", "--depth", "5", "--seed", "9",
         "--out", str(stage_file)], capsys)
    first = json.loads(stage_file.read_text())
    run(["construct", "--random-thick", "3/2", "--depth", "5", "--seed", "9",
         "--out", str(stage_file)], capsys)
    assert json.loads(stage_file.read_text()) == first


def test_thickness_json_report(tmp_path, capsys):
    stage_file = tmp_path / "k.json"
    run(["construct", "--middle-alpha", "1/3", "--depth", "3", "--out", str(stage_file)], capsys)
    code, out, _ = run(["thickness", str(stage_file), "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["thickness"] == "1"
    assert data["argmin"]["side"] in ("left", "right")


def test_bridges_report(tmp_path, capsys):
    stage_file = tmp_path / "k.json"
    run(["construct", "--middle-alpha", "1/3", "--depth", "2", "--out", str(stage_file)], capsys)
    code, out, _ = run(["bridges", str(stage_file)], capsys)
    assert code == 0
    reports = json.loads(out)["reports"]
    assert len(reports) == 2 * 3  # four intervals, three bounded gaps
    assert all(r["local_thickness"] == "1" for r in reports)


def test_check_gap_lemma_report(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run(["construct", "--middle-alpha", "1/3", "--depth", "3", "--out", str(a)], capsys)
    run(["construct", "--middle-alpha", "1/5", "--depth", "3", "--out", str(b)], capsys)
    code, out, _ = run(["check-gap-lemma", str(a), str(b)], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["verdict"]["applies"] is True
    assert data["intersection"] is not None


def test_find_3ap_witness_json(capsys):
    code, out, _ = run(
        ["find-3ap", "--set-family", "middle-alpha:1/3", "--max-depth", "10"], capsys
    )
    assert code == 0
    witness = json.loads(out)
    assert witness["x"] == "2/3"
    assert witness["t"] == ["1/3", "1/3"]
    assert len(witness["chains"]) == 3
    assert all(len(chain) == witness["depth"] + 1 for chain in witness["chains"])


def test_find_config_witness_json(capsys):
    code, out, err = run(
        ["find-config", "--set-family", "middle-alpha:1/5", "--f", "1,1/10",
         "--max-depth", "10"],
        capsys,
    )
    assert code == 0
    witness = json.loads(out)
    assert set(witness) == {"x", "t", "ft", "depth", "chains"}
    assert witness["depth"] >= 10
    t_lo, t_hi = F(witness["t"][0]), F(witness["t"][1])
    assert 0 < t_lo <= t_hi
    assert "min image thickness" in err


def test_find_config_hypothesis_exit_code(capsys):
    code, _, err = run(
        ["find-config", "--set-family", "middle-alpha:1/5", "--f", "0,1",
         "--max-depth", "6"],
        capsys,
    )
    assert code == 1
    assert "hypothesis violated" in err and "slope window" in err


def test_find_3ap_thin_family_exit_code(capsys):
    code, _, err = run(
        ["find-3ap", "--set-family", "middle-alpha:1/2", "--max-depth", "6"], capsys
    )
    assert code == 1
    assert "hypothesis violated" in err


def test_counterexample_with_parts_sidecar(tmp_path, capsys):
    stage_file = tmp_path / "cx.json"
    parts_file = tmp_path / "parts.json"
    code, _, _ = run(
        ["counterexample", "--tau", "101/100", "--eps", "1/1000",
         "--out", str(stage_file), "--parts", str(parts_file)],
        capsys,
    )
    assert code == 0
    stage = json.loads(stage_file.read_text())
    assert len(stage["intervals"]) == 5
    parts = json.loads(parts_file.read_text())
    assert set(parts) >= {"I1", "I2", "I3", "I4", "I5", "G1", "G2", "G3", "G4",
                          "alpha", "beta"}
    assert parts["G2"] == ["-1/1000", "0"]


def test_verify_counterexample_all_pass(capsys):
    code, out, _ = run(
        ["verify-counterexample", "--tau", "101/100", "--eps", "1/1000"], capsys
    )
    assert code == 0
    report = json.loads(out)
    assert report["all_passed"] is True
    assert report["thickness"] == "101/100"


def test_render_svg_structure(tmp_path, capsys):
    stage_file = tmp_path / "k.json"
    run(["construct", "--middle-alpha", "1/3", "--depth", "3", "--out", str(stage_file)], capsys)
    svg_file = tmp_path / "k.svg"
    code, _, _ = run(["render", str(stage_file), "--out", str(svg_file)], capsys)
    assert code == 0
    root = ET.fromstring(svg_file.read_text())  # valid XML
    ns = "{http://www.w3.org/2000/svg}"
    intervals = [e for e in root.iter(f"{ns}line") if e.get("class") == "interval"]
    bridges = [e for e in root.iter(f"{ns}path") if e.get("class") == "bridge"]
    assert len(intervals) == 8
    assert len(bridges) == 2 * 7  # two bridges per bounded gap


def test_render_log_scale_counterexample(tmp_path, capsys):
    stage_file = tmp_path / "cx.json"
    run(["counterexample", "--tau", "101/100", "--eps", "1/1000",
         "--out", str(stage_file)], capsys)
    svg_file = tmp_path / "cx.svg"
    code, _, _ = run(["render", str(stage_file), "--out", str(svg_file), "--log-x"], capsys)
    assert code == 0
    root = ET.fromstring(svg_file.read_text())
    ns = "{http://www.w3.org/2000/svg}"
    intervals = [e for e in root.iter(f"{ns}line") if e.get("class") == "interval"]
    assert len(intervals) == 5


def test_sweep_reports_probe_outcomes(tmp_path, capsys):
    out_file = tmp_path / "sweep.json"
    code, _, _ = run(
        ["sweep", "--set-family", "middle-alpha:1/5", "--slope-min", "1/2",
         "--slope-max", "3/2", "--steps", "5", "--max-depth", "5",
         "--out", str(out_file)],
        capsys,
    )
    assert code == 0
    data = json.loads(out_file.read_text())
    assert "experimental" in data["mode"]
    assert data["window"] == ["2/3", "3/2"]
    assert len(data["results"]) == 5
    statuses = {r["slope"]: r["status"] for r in data["results"]}
    assert statuses["1"] == "ok"  # slope 1 is inside the window
    inside = {r["slope"]: r["in_window"] for r in data["results"]}
    assert inside["1/2"] is False and inside["1"] is True
    assert inside["3/2"] is False  # the window is open at its edge


def test_sweep_parallel_matches_sequential(tmp_path, capsys):
    args = ["sweep", "--set-family", "middle-alpha:1/5", "--slope-min", "3/4",
            "--slope-max", "5/4", "--steps", "3", "--max-depth", "4"]
    seq_file = tmp_path / "seq.json"
    par_file = tmp_path / "par.json"
    assert run(args + ["--out", str(seq_file)], capsys)[0] == 0
    assert run(args + ["--jobs", "2", "--out", str(par_file)], capsys)[0] == 0
    assert json.loads(seq_file.read_text()) == json.loads(par_file.read_text())


def test_render_single_interval_stage(tmp_path, capsys):
    stage_file = tmp_path / "one.json"
    stage_file.write_text('{"depth": 0, "intervals": [["0", "1"]]}')
    svg_file = tmp_path / "one.svg"
    code, _, _ = run(["render", str(stage_file), "--out", str(svg_file)], capsys)
    assert code == 0
    root = ET.fromstring(svg_file.read_text())
    ns = "{http://www.w3.org/2000/svg}"
    assert len([e for e in root.iter(f"{ns}line") if e.get("class") == "interval"]) == 1


def test_malformed_json_reports_byte_offset(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"depth": 1, "intervals": [["0", "1/3"],')
    code, _, err = run(["thickness", str(bad)], capsys)
    assert code == 3
    assert "JSON parse error at byte" in err


def test_unknown_verb_prints_usage(capsys):
    code, _, err = run(["frobnicate"], capsys)
    assert code == 3
    assert "usage" in err.lower()


def test_missing_file_is_usage_class_error(capsys):
    code, _, err = run(["thickness", "/nonexistent/path.json"], capsys)
    assert code == 3
    assert "not found" in err


def test_precision_env_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("THICKSET_PRECISION", "1/1048576")
    code, out, _ = run(
        ["find-config", "--set-family", "middle-alpha:1/5", "--f", "1",
         "--max-depth", "6"],
        capsys,
    )
    assert code == 0
    witness = json.loads(out)
    assert F(witness["t"][0]) > 0

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from dirichlet_composition.cli import RunConfig, main
from dirichlet_composition.compactness import CSV_COLUMNS
from dirichlet_composition.mapspec import parse_map
from dirichlet_composition.mobius import maps_equal


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


# -- classify -------------------------------------------------------------------------


def test_classify_rotation(capsys):
    doc = run_json(capsys, "classify", "--map", "rot:1.5708")
    assert doc["schema_version"] == "1" and doc["kind"] == "classification"
    assert doc["classification"] == "Elliptic"
    assert doc["fixed_points"]["points"] == [[0.0, 0.0]]
    assert doc["fixed_points"]["at_infinity"]
    assert doc["sup_norm"] == pytest.approx(1)


def test_classify_hyperbolic(capsys):
    doc = run_json(capsys, "classify", "--map", "hyp:t=0.5")
    assert doc["classification"] == "Hyperbolic"
    pts = sorted(p[0] for p in doc["fixed_points"]["points"])
    assert pts == pytest.approx([-1, 1])
    assert maps_equal(parse_map(doc["krein_adjoint"]), parse_map("hyp:t=-0.5"))


def test_classify_parabolic(capsys):
    doc = run_json(capsys, "classify", "--map", "auto:a=0.70710678+0i,theta=1.57079633")
    assert doc["classification"] == "Parabolic"
    (point,) = doc["fixed_points"]["points"]
    assert complex(*point) == pytest.approx(np.exp(1j * math.pi / 4), abs=1e-4)


def test_classify_identity(capsys):
    doc = run_json(capsys, "classify", "--map", "id")
    assert doc["classification"] == "Identity" and doc["fixed_points"] is None


@pytest.mark.parametrize("spec", ["rot:0.3", "hyp:t=-0.2", "auto:a=0.3-0.4i,theta=2", "2i,1,1,-2i"])
def test_classify_map_round_trips(capsys, spec):
    doc = run_json(capsys, "classify", "--map", spec)
    assert maps_equal(parse_map(doc["map"]), parse_map(spec))


# -- exit codes ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv,code",
    [
        (["classify", "--map", "rot:x"], 2),
        (["classify"], 2),
        (["classify", "--map", "1,1,0,2"], 3),
        (["diff-scan", "--phi", "2,0,0,1", "--psi", "id"], 4),
        (["diff-scan", "--phi", "id", "--psi", "hyp:t=3"], 2),
        (["commutator", "--phi", "1,1,0,2", "--psi", "id"], 3),
        (["commutator", "--phi", "id", "--psi", "rot:1", "--kmin", "9", "--kmax", "3"], 2),
        (["diff-scan", "--phi", "id", "--psi", "id", "--rho", "1.5"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == "" and err.startswith("error:")


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["diff-scan", "--format", "xml"])
    assert info.value.code == 2


def test_run_config_defaults():
    config = RunConfig()
    assert (config.directions, config.k_min, config.k_max, config.q_threshold) == (256, 4, 40, 1e-3)
    assert (config.rho, config.order) == (0.9, 512)
    with pytest.raises(ValueError):
        RunConfig(seed=2**64)


# -- diff-scan ----------------------------------------------------------------------------


def test_diff_scan_negation(capsys):
    doc = run_json(capsys, "diff-scan", "--phi", "rot:3.14159265", "--psi", "id")
    assert doc["verdict"] == "condition_fails"
    assert doc["witness"]["q_deepest"] == pytest.approx(4, abs=1e-6)
    ladder = doc["witness_ladder"]
    assert ladder["case_report"]["case"] == "III-c"
    assert len(ladder["ratio"]) == 37 and ladder["bound_violations"] == 0


def test_diff_scan_identity(capsys):
    doc = run_json(capsys, "diff-scan", "--phi", "id", "--psi", "id")
    assert doc["verdict"] == "condition_holds_numerically"
    assert doc["max_q_deepest"] == 0 and doc["witness"] is None and doc["witness_ladder"] is None


def test_diff_scan_case_one_pair(capsys):
    doc = run_json(capsys, "diff-scan", "--phi", "hyp:t=0.5", "--psi", "a=1,b=1,c=0,d=2")
    assert doc["verdict"] == "condition_fails"
    # the largest q sits in the lower half of the circle, towards -1
    zeta = complex(*doc["witness"]["zeta"])
    assert zeta.real < 0 and zeta.imag < 0
    assert doc["witness_ladder"]["case_report"]["case"] == "I"
    # zeta = -1 is itself a persistent witness
    q_minus_one = doc["q_deepest"][128]
    assert q_minus_one == pytest.approx(1 / 3, abs=1e-9)


def test_diff_scan_csv(capsys):
    code, out, _ = run(
        capsys, "diff-scan", "--phi", "rot:1", "--psi", "id", "--format", "csv", "--directions", "4"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 1 + 4 * 37


def test_diff_scan_writes_artifacts(capsys, tmp_path):
    out = tmp_path / "scan.json"
    code, stdout, _ = run(capsys, "diff-scan", "--phi", "rot:1", "--psi", "id", "--out", str(out))
    assert code == 0 and stdout == ""
    doc = json.loads(out.read_text())
    assert doc["cells_ref"] == "scan.cells.csv"
    cells = (tmp_path / "scan.cells.csv").read_bytes()
    assert cells.count(b"\r\n") == 1 + 256 * 37


# -- commutator --------------------------------------------------------------------------


def test_commutator_rotations(capsys):
    doc = run_json(capsys, "commutator", "--phi", "rot:0.7", "--psi", "rot:2.1")
    assert doc["decision"] == "compact_nontrivially" and doc["clause"] == "both-elliptic"


def test_commutator_same_axis(capsys):
    doc = run_json(capsys, "commutator", "--phi", "hyp:t=0.3", "--psi", "hyp:t=0.7")
    assert doc["decision"] == "compact_nontrivially" and doc["clause"] == "same-fixed-points"


def test_commutator_not_compact(capsys, tmp_path):
    out = tmp_path / "c.json"
    code, _, _ = run(
        capsys, "commutator", "--phi", "hyp:t=0.5", "--psi", "rot:3.14159265", "--out", str(out)
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["decision"] == "not_compact"
    assert doc["evidence"]["verdict"] == "condition_fails"
    assert doc["evidence_ref"] == "c.evidence.json"
    evidence = json.loads((tmp_path / "c.evidence.json").read_text())
    assert evidence["kind"] == "boundary_scan" and evidence["verdict"] == "condition_fails"


def test_commutator_identity_is_out_of_scope(capsys):
    doc = run_json(capsys, "commutator", "--phi", "id", "--psi", "hyp:t=0.5")
    assert doc["decision"] == "out_of_scope" and doc["clause"] == "identity-exclusion"


def test_commutator_trace(capsys, tmp_path):
    out = tmp_path / "t.json"
    argv = ["commutator", "--phi", "rot:1.5707963267948966", "--psi", "rot:1.5707963267948966"]
    code, _, _ = run(capsys, *argv, "--trace", "--kmin", "4", "--kmax", "8", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["trace"]["norm"]) == 5
    assert all(v < 1e-12 for v in doc["trace"]["norm"])
    rows = list(csv.reader(io.StringIO((tmp_path / "t.trace.csv").read_bytes().decode())))
    assert rows[0] == ["k", "delta", "norm"] and [r[0] for r in rows[1:]] == ["4", "5", "6", "7", "8"]


def test_commutator_trace_reports_absent_rungs(capsys):
    argv = ["commutator", "--phi", "hyp:t=0.5", "--psi", "rot:3.14159265", "--trace"]
    doc = run_json(capsys, *argv, "--kmin", "4", "--kmax", "10", "--directions", "16")
    norms = doc["trace"]["norm"]
    # taken along the scan witness; unresolved rungs are null, resolved ones stay away from 0
    assert None in norms
    assert all(v > 0.5 for v in norms if v is not None)


# -- selftest ----------------------------------------------------------------------------


def test_selftest_default(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 16 and all(line.startswith("PASS ") for line in lines[:-1])
    assert lines[-1] == "selftest: 15 passed, 0 failed, 0 skipped"


def test_selftest_low_order_skips(capsys):
    code, out, _ = run(capsys, "selftest", "--order", "8")
    assert code == 0
    assert "SKIP oracle.kernel_reproducing" in out
    assert out.splitlines()[-1].endswith("0 failed, 1 skipped")


def test_selftest_corrupted_tolerance(capsys):
    code, out, _ = run(capsys, "selftest", "--eps-eq", "10")
    assert code == 1
    assert "FAIL mobius.maps_equal_discriminates" in out
    assert "PASS mobius.krein_involution" in out


# -- determinism and entry point ---------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["diff-scan", "--phi", "hyp:t=0.5", "--psi", "1,1,0,2", "--directions", "64"],
        ["commutator", "--phi", "hyp:t=0.5", "--psi", "rot:2", "--trace", "--kmax", "12"],
        ["selftest", "--seed", "7"],
    ],
)
def test_artifacts_are_byte_identical(capsys, tmp_path, argv):
    blobs = []
    for run_dir in ("a", "b"):
        d = tmp_path / run_dir
        d.mkdir()
        assert main(argv + ["--out", str(d / "out.json")]) == 0
        blobs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    capsys.readouterr()
    assert blobs[0] == blobs[1]
    assert len(blobs[0]) >= 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dirichlet_composition", "classify", "--map", "hyp:t=0.5"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["classification"] == "Hyperbolic"

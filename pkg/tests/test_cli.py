import json

import numpy as np
import pytest

import srgo.cli as cli
from srgo.homogeneity import INCONCLUSIVE, HomogeneityCertificate


def run(args):
    return cli.main(args)


def test_validate_ok(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert run(["validate", "--model", "heisenberg", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["valid"] is True
    assert payload["model"] == "heisenberg"
    assert "valid" in capsys.readouterr().err


def test_validate_unknown_model(capsys):
    assert run(["validate", "--model", "missing"]) == 2
    assert "unknown model" in capsys.readouterr().err


def test_validate_rejects_broken_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    # [e1,e2] = e3 together with [e1,e3] = e1 violates Jacobi.
    bad.write_text(json.dumps({
        "dim": 3,
        "constants": [[1, 2, 3, 1, 1], [1, 3, 1, 1, 1]],
        "k_basis": [],
        "m_basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "delta_basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    }))
    assert run(["validate", "--model", str(bad)]) == 2


def test_integrate_csv(tmp_path):
    out = tmp_path / "h.csv"
    code = run([
        "integrate", "--model", "heisenberg", "--p0", "1,0,1",
        "--T", "1", "--step", "0.001", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,p_1,p_2,p_3,p_4,H,C1,C2"
    assert len(lines) == 1002
    last = [float(x) for x in lines[-1].split(",")]
    assert last[1] == pytest.approx(np.cos(1.0), abs=1e-8)
    assert last[2] == pytest.approx(np.sin(1.0), abs=1e-8)


def test_integrate_heisenberg_period(tmp_path):
    out = tmp_path / "loop.csv"
    assert run([
        "integrate", "--model", "heisenberg", "--p0", "1,0,1",
        "--T", str(2 * np.pi), "--step", "0.001", "--out", str(out),
    ]) == 0
    lines = out.read_text().splitlines()
    row = [float(x) for x in lines[-1].split(",")]
    t_last, last = row[0], np.array(row[1:5])
    exact = np.array([np.cos(t_last), np.sin(t_last), 1.0, 0.0])
    assert np.max(np.abs(last - exact)) < 1e-8


def test_integrate_bad_parameters():
    assert run(["integrate", "--model", "heisenberg", "--p0", "1,0,1",
                "--T", "0", "--step", "0.001"]) == 2
    assert run(["integrate", "--model", "heisenberg", "--p0", "1,0",
                "--T", "1", "--step", "0.001"]) == 2


def test_integrate_blowup(tmp_path):
    out = tmp_path / "b.csv"
    code = run([
        "integrate", "--model", "so3_generic",
        "--p0", "1e80,2e80,3e80", "--T", "1", "--step", "0.001",
        "--out", str(out),
    ])
    assert code == 3


def test_integrate_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["integrate", "--model", "cartan", "--p0", "1,0.3,0.2,0.1,0.05",
            "--T", "2", "--step", "0.001"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_integrate_horizontal_columns(tmp_path):
    out = tmp_path / "g.csv"
    assert run([
        "integrate", "--model", "heisenberg", "--p0", "1,0,1",
        "--T", "0.1", "--step", "0.01", "--out", str(out), "--horizontal",
    ]) == 0
    header = out.read_text().splitlines()[0]
    assert "g_11" in header and "g_44" in header


def test_phase_portrait(tmp_path):
    out = tmp_path / "pp.csv"
    assert run([
        "integrate", "--model", "so3_axisym", "--phase-portrait",
        "--samples", "10", "--T", "2", "--step", "0.01",
        "--seed", "1", "--out", str(out),
    ]) == 0
    lines = out.read_text().splitlines()
    kinds = {line.split(",")[0] for line in lines[1:]}
    assert kinds == {"arrow", "trajectory"}


def test_phase_portrait_circles(tmp_path):
    # Trajectories close onto circles about the p3-axis.
    out = tmp_path / "pp.csv"
    assert run([
        "integrate", "--model", "so3_axisym", "--phase-portrait",
        "--samples", "8", "--T", "10", "--step", "0.001", "--out", str(out),
    ]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    by_id = {}
    for r in rows:
        if r[0] == "trajectory":
            by_id.setdefault(r[1], []).append([float(x) for x in r[3:7]])
    assert by_id
    for pts in by_id.values():
        pts = np.array(pts)
        radii = np.hypot(pts[:, 0], pts[:, 1])
        assert np.max(np.abs(radii - radii[0])) < 1e-6
        assert np.max(np.abs(pts[:, 2] - pts[0, 2])) < 1e-6


def test_check_exit_codes(tmp_path):
    out = tmp_path / "c.json"
    assert run(["check", "--model", "cartan", "--p0", "1,0.3,0,0,0",
                "--out", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] == "homogeneous"
    assert run(["check", "--model", "cartan", "--p0", "1,0,0,1,0"]) == 1
    assert run(["check", "--model", "cartan", "--p0", "1,0"]) == 2
    assert run(["check", "--model", "cartan", "--p0", "1,0,0,1,0,5"]) == 2


def test_check_inconclusive_exit(monkeypatch):
    cert = HomogeneityCertificate(INCONCLUSIVE, None, 1e-8, 1e-8)
    monkeypatch.setattr(cli, "check_homogeneous", lambda p, threshold: cert)
    assert run(["check", "--model", "heisenberg", "--p0", "1,0,1"]) == 4


def test_go_command(tmp_path):
    out = tmp_path / "go.json"
    assert run(["go", "--model", "free_step2_rank3", "--samples", "100",
                "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["verdict"] == "GO_affirmed_up_to_degree"
    assert payload["degree_cap"] == 4

    assert run(["go", "--model", "cartan", "--samples", "100",
                "--out", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] == "GO_refuted_with_witness"


def test_go_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["go", "--model", "cartan", "--samples", "50", "--seed", "7"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_exist_command(tmp_path):
    out = tmp_path / "e.json"
    assert run(["exist", "--model", "so3_kp", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["success"] is True
    assert payload["route"] == "eigenvector"
    assert payload["audit"]["homogeneous"] is True


def test_model_file_through_cli(tmp_path):
    import srgo

    spec = srgo.load_model("so3_axisym")
    model_file = tmp_path / "model.json"
    spec.save(model_file)
    assert run(["validate", "--model", str(model_file)]) == 0


def test_requires_p0(capsys):
    with pytest.raises(SystemExit):
        run(["check", "--model", "heisenberg"])

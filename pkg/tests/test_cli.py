import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fracbb.cli import main
from fracbb.fileio import load_coefficients, save_coefficients, save_grid_csv
from fracbb.spectral import GridField, SpectralField, inverse_transform


def run_cli(args):
    return main([str(a) for a in args])


def test_apply_op_fraclap_example(tmp_path):
    src = tmp_path / "one_mode.json"
    out = tmp_path / "out.json"
    save_coefficients(SpectralField(1, 4, {(3,): 1.0}), src)
    assert run_cli(["apply-op", "--op", "fraclap", "--s", 0.25, "--in", src, "--out", out]) == 0
    result = load_coefficients(out)
    assert abs(result.get(3).p0() - math.sqrt(3.0)) < 1e-12


def test_decompose_example(tmp_path):
    src = tmp_path / "e1.json"
    save_coefficients(SpectralField(1, 2, {(1,): 1.0}, zero_mean=True), src)
    prefix = tmp_path / "dec"
    assert run_cli(["decompose", "--dim", 1, "--in", src, "--out-prefix", prefix]) == 0
    part0 = load_coefficients(f"{prefix}_part0.json")
    part1 = load_coefficients(f"{prefix}_part1.json")
    assert abs(part0.get(1).p0() - 0.5) < 1e-12
    assert abs(part1.get(1).p0() - 0.5j) < 1e-12
    report = json.loads(open(f"{prefix}_report.json").read())
    assert report["schema_version"] == 1
    assert abs(report["bound_ratio"] - 1 / math.sqrt(2)) < 1e-12


def test_decompose_dim_mismatch_exit_code(tmp_path):
    src = tmp_path / "e1.json"
    save_coefficients(SpectralField(1, 2, {(1,): 1.0}, zero_mean=True), src)
    assert run_cli(["decompose", "--dim", 2, "--in", src, "--out-prefix", tmp_path / "x"]) == 2


def test_verify_bb_deterministic_bytes(tmp_path):
    args = [
        "verify-bb", "--dim", 1, "--band", 8, "--samples", 3, "--seed", 7,
        "--tol", 1e-6,
    ]
    out1 = (tmp_path / "r1.json", tmp_path / "r1.csv")
    out2 = (tmp_path / "r2.json", tmp_path / "r2.csv")
    for json_path, csv_path in (out1, out2):
        code = run_cli(args + ["--out-json", json_path, "--out-csv", csv_path])
        assert code == 0
    assert out1[0].read_bytes() == out2[0].read_bytes()
    assert out1[1].read_bytes() == out2[1].read_bytes()
    lines = out1[1].read_text().splitlines()
    assert lines[0] == "# schema_version=1"
    assert lines[1].startswith("# config=")
    assert lines[2] == "id,lhs,rhs,ratio,gap_0,gap_1"


def test_transform_round_trip_via_files(tmp_path):
    field = SpectralField(1, 3, {(1,): 1.0, (-2,): 0.5j})
    grid_path = tmp_path / "grid.csv"
    coeff_path = tmp_path / "coeffs.json"
    save_grid_csv(inverse_transform(field, 12), grid_path)
    assert run_cli([
        "transform", "--direction", "forward", "--in", grid_path,
        "--out", coeff_path, "--dim", 1, "--band", 3,
    ]) == 0
    back = load_coefficients(coeff_path)
    assert (back.get(1) - field.get(1)).norm() < 1e-12
    assert (back.get(-2) - field.get(-2)).norm() < 1e-12
    grid2_path = tmp_path / "grid2.csv"
    assert run_cli([
        "transform", "--direction", "inverse", "--in", coeff_path,
        "--out", grid2_path, "--points", 12,
    ]) == 0
    assert grid2_path.exists()


def test_norm_command(tmp_path, capsys):
    src = tmp_path / "f.json"
    save_coefficients(SpectralField(1, 2, {(1,): 1.0}, zero_mean=True), src)
    assert run_cli(["norm", "--in", src, "--kind", "sobolev", "--s", -0.5, "--homogeneous"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == pytest.approx(1.0)
    assert payload["schema_version"] == 1


def test_mixed_norm_command(tmp_path, capsys):
    src = tmp_path / "f.json"
    save_coefficients(SpectralField(1, 2, {(1,): 1.0}, zero_mean=True), src)
    assert run_cli(["mixed-norm", "--in", src, "--homogeneous", "--tol", 1e-7]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == pytest.approx(1.0, abs=1e-6)
    assert payload["gap"] <= 1e-7
    assert payload["iterations"] >= 1


def test_mixed_norm_split_dump(tmp_path, capsys):
    src = tmp_path / "f.json"
    save_coefficients(SpectralField(1, 3, {(1,): 1.0, (2,): 1j}, zero_mean=True), src)
    prefix = tmp_path / "split"
    assert run_cli([
        "mixed-norm", "--in", src, "--homogeneous", "--dump-split", prefix,
    ]) == 0
    capsys.readouterr()
    h = load_coefficients(f"{prefix}_h.json")
    g_hat = load_coefficients(f"{prefix}_g_coeffs.json")
    for m in [(1,), (2,)]:
        total = g_hat.get(m) + h.get(m)
        expected = 1.0 if m == (1,) else 1j
        assert abs(total.p0() - expected) < 1e-8


def test_bilinear_a_command(capsys):
    assert run_cli(["bilinear-a", "--a", 1.0, "--b", 0.5, "--truncations", "10,100"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["limit"] == pytest.approx(math.pi - 0.5)
    assert len(payload["partial_sums"]) == 2
    assert payload["sup_partial"] <= math.pi + 0.6


def test_bilinear_a_sequence_mode(tmp_path, capsys):
    f1 = tmp_path / "f1.json"
    f2 = tmp_path / "f2.json"
    save_coefficients(SpectralField(1, 2, {(1,): 1.0, (-1,): 1.0}), f1)
    save_coefficients(SpectralField(1, 2, {(1,): 1.0, (-1,): 1.0}), f2)
    assert run_cli(["bilinear-a", "--in1", f1, "--in2", f2, "--truncations", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"]["re"] == pytest.approx(0.0)
    assert payload["value"]["im"] == pytest.approx(0.0)


def test_kernel_command(tmp_path):
    out = tmp_path / "k.json"
    report = tmp_path / "scan.csv"
    assert run_cli([
        "kernel", "--dim", 2, "--band", 4, "--axis", 1,
        "--scan-bands", "4,8", "--out", out, "--report", report,
    ]) == 0
    k = load_coefficients(out)
    assert abs(k.get((1, 0)).p0() - 1.0) < 1e-12
    lines = report.read_text().splitlines()
    assert lines[0] == "# schema_version=1"
    assert lines[1].startswith("# config=")
    assert lines[2] == "band,sup,ratio"
    assert len(lines) == 5


def test_verify_bergman_command(tmp_path):
    out = tmp_path / "bergman.csv"
    out_json = tmp_path / "bergman.json"
    assert run_cli([
        "verify-bergman", "--corpus-size", 2, "--decay", 1.0, "--order", 8,
        "--radii", "0.9,0.99", "--tol", 1e-6, "--seed", 1,
        "--out", out, "--out-json", out_json,
    ]) == 0
    lines = out.read_text().splitlines()
    assert lines[2] == "series_id,r,bergman,l1,hminushalf,mixed,ratio"
    assert len(lines) == 3 + 2 * 2
    payload = json.loads(out_json.read_text())
    assert payload["aggregates"]["max_ratio"] == pytest.approx(math.sqrt(math.pi), rel=1e-3)


def test_exit_codes(tmp_path):
    # input error: missing file
    assert run_cli(["norm", "--in", tmp_path / "missing.json", "--kind", "l1"]) == 2
    # input error: nonzero mean for invD
    src = tmp_path / "mean.json"
    save_coefficients(SpectralField(1, 2, {(0,): 1.0}), src)
    assert run_cli(["apply-op", "--op", "invD", "--in", src, "--out", tmp_path / "o.json"]) == 2
    # non-convergence exit code 3: an over-tight tolerance with a tiny cap
    hard = tmp_path / "hard.json"
    rng = np.random.default_rng(0)
    save_coefficients(
        SpectralField(1, 8, {(n,): complex(rng.normal(), rng.normal()) for n in range(-8, 9) if n}),
        hard,
    )
    code = run_cli([
        "mixed-norm", "--in", hard, "--homogeneous", "--tol", 1e-15,
        "--max-iterations", 100,
    ])
    assert code == 3


def test_pipeline_forward_apply_norm(tmp_path, capsys):
    # grid CSV -> coefficients -> fractional Laplacian -> Sobolev norm
    x = np.arange(16) * 2 * np.pi / 16
    grid = GridField.from_scalar(np.exp(1j * x) + 0.5 * np.exp(-2j * x))
    grid_path = tmp_path / "g.csv"
    save_grid_csv(grid, grid_path)
    coeff_path = tmp_path / "c.json"
    assert run_cli([
        "transform", "--direction", "forward", "--in", grid_path,
        "--out", coeff_path, "--dim", 1, "--band", 4,
    ]) == 0
    scaled_path = tmp_path / "s.json"
    assert run_cli([
        "apply-op", "--op", "fraclap", "--s", 0.5, "--in", coeff_path,
        "--out", scaled_path,
    ]) == 0
    assert run_cli(["norm", "--in", scaled_path, "--kind", "sobolev", "--s", -0.5, "--homogeneous"]) == 0
    payload = json.loads(capsys.readouterr().out)
    # (-Lap)^{1/2} then H^{-1/2}: each mode contributes |n|^{1/2} |a_n|
    expected = math.sqrt((1.0**0.5 * 1.0) ** 2 + (2.0**0.5 * 0.5) ** 2)
    assert payload["value"] == pytest.approx(expected, abs=1e-10)


def test_apply_op_stdout_default(tmp_path, capsys):
    src = tmp_path / "f.json"
    save_coefficients(SpectralField(1, 2, {(1,): 1.0}), src)
    assert run_cli(["apply-op", "--op", "riesz", "--in", src]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["entries"][0]["im"] == pytest.approx(1.0)


def test_empty_field_round_trip(tmp_path):
    src = tmp_path / "empty.json"
    save_coefficients(SpectralField(2, 3, {}), src)
    back = load_coefficients(src)
    assert back.dim == 2 and back.band == 3 and not back.coeffs


def test_console_script_help():
    proc = subprocess.run(
        [sys.executable, "-m", "fracbb.cli", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    for command in ["transform", "apply-op", "kernel", "norm", "mixed-norm",
                    "verify-bb", "verify-bergman", "bilinear-a", "decompose"]:
        assert command in proc.stdout

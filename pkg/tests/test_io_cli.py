import struct

import numpy as np
import pytest

from randsymp import cli
from randsymp import io as rio
from randsymp.errors import (AssumptionViolation, ConvergenceError, GapError, RankError,
                             SnapshotFormatError, StructureError)
from randsymp.sketching import srft_threshold
from randsymp.symplectic import OrthoSymplecticBasis, check_structure, csvd

from conftest import random_snapshots, snapshots_with_spectrum

SMALL = ["--n-xi1", "3", "--n-xi2", "8", "--nt", "10"]


def run(tmp, *argv):
    return cli.main(["--out", str(tmp), *argv])


# ---------------------------------------------------------------- formats

def test_matrix_round_trip(tmp_path):
    A = np.arange(12.0).reshape(4, 3) / 7
    rio.write_matrix(tmp_path / "a.bin", A)
    raw = (tmp_path / "a.bin").read_bytes()
    assert raw[:4] == b"SYMP"
    assert struct.unpack_from("<IQQ", raw, 4) == (1, 4, 3)
    assert len(raw) == 24 + 12 * 8
    B = rio.read_matrix(tmp_path / "a.bin")
    assert np.array_equal(A, B)


def test_basis_round_trip(tmp_path):
    V = csvd(random_snapshots(1, 6, 9), 3)
    rio.write_basis(tmp_path / "v.bin", V)
    W = rio.read_basis(tmp_path / "v.bin")
    assert np.array_equal(V.assemble(), W.assemble())


@pytest.mark.parametrize("mutate, message", [
    (lambda b: b[:10], "truncated header"),
    (lambda b: b"XXXX" + b[4:], "bad magic"),
    (lambda b: b[:4] + struct.pack("<I", 2) + b[8:], "version"),
    (lambda b: b[:-8], "header declares"),
    (lambda b: b + b"\0" * 8, "header declares"),
])
def test_corrupt_files_rejected(tmp_path, mutate, message):
    rio.write_matrix(tmp_path / "a.bin", np.ones((2, 3)))
    bad = tmp_path / "bad.bin"
    bad.write_bytes(mutate((tmp_path / "a.bin").read_bytes()))
    with pytest.raises(SnapshotFormatError, match=message):
        rio.read_matrix(bad)


def test_odd_rows_rejected(tmp_path):
    rio.write_matrix(tmp_path / "a.bin", np.ones((3, 2)))
    with pytest.raises(SnapshotFormatError):
        rio.read_snapshots(tmp_path / "a.bin")
    with pytest.raises(SnapshotFormatError):
        rio.read_basis(tmp_path / "a.bin")
    with pytest.raises(SnapshotFormatError):
        rio.read_matrix(tmp_path / "missing.bin")


def test_complex_matrix_rejected():
    with pytest.raises(ValueError):
        rio.encode_matrix(np.ones((2, 2), dtype=complex))


def test_sidecar_round_trip(tmp_path):
    meta = {"k": 3, "x": 0.1, "flag": True, "mu": [1.0, 1.1], "none": None, "big": float("inf")}
    rio.write_sidecar(tmp_path / "m.meta", meta)
    text = (tmp_path / "m.meta").read_text()
    assert text == "k=3\nx=0.1\nflag=true\nmu=1.0 1.1\nnone=\nbig=inf\n"
    assert rio.read_sidecar(tmp_path / "m.meta") == {
        "k": "3", "x": "0.1", "flag": "true", "mu": "1.0 1.1", "none": "", "big": "inf"}
    with pytest.raises(ValueError):
        rio.write_sidecar(tmp_path / "bad.meta", {"a=b": 1})


def test_float_cells_round_trip_exactly(tmp_path):
    vals = [1 / 3, 1e-300, 275.690722965827, -0.0]
    rio.write_csv(tmp_path / "t.csv", ["v"], [{"v": v} for v in vals])
    back = [rio.parse_float(r["v"]) for r in rio.read_csv(tmp_path / "t.csv")]
    assert back == vals


def test_exit_codes_distinct():
    codes = [cli.EXIT_ARGUMENT, RankError.exit_code, GapError.exit_code, AssumptionViolation.exit_code,
             SnapshotFormatError.exit_code, ConvergenceError.exit_code, StructureError.exit_code]
    assert codes == [2, 3, 4, 5, 6, 7, 8]


# ---------------------------------------------------------------- pipeline

@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    assert run(out, "snapshots", *SMALL) == 0
    assert run(out, "basis", "--method", "rcsvd", "--k", "3", "--p-ovs", "2", "--q-pow", "1",
               "--seed", "4", "--repeat", "2") == 0
    assert run(out, "bounds", "--k", "2", "4", "--p-ovs", "2", "threshold", "--q-pow", "0", "1",
               "--seeds", "1", "2") == 0
    assert run(out, "figures") == 0
    return out


def test_snapshot_file_and_sidecar(pipeline):
    Xs = rio.read_snapshots(pipeline / "snapshots.bin")
    assert Xs.data.shape == (48, 110)
    meta = rio.read_sidecar(pipeline / "snapshots.bin.meta")
    assert meta["mu"] == "1.0 1.1 1.2 1.3 1.4 1.5 1.6 1.7 1.8 1.9 2.0"
    assert (meta["nt"], meta["N"], meta["include_initial"]) == ("10", "24", "false")


def test_snapshots_deterministic(pipeline, tmp_path):
    assert run(tmp_path, "snapshots", *SMALL, "--jobs", "2") == 0
    assert (tmp_path / "snapshots.bin").read_bytes() == (pipeline / "snapshots.bin").read_bytes()


def test_basis_deterministic(pipeline, tmp_path):
    args = ["basis", "--snapshots", str(pipeline / "snapshots.bin"), "--method", "rcsvd", "--k", "3",
            "--p-ovs", "2", "--q-pow", "1", "--seed", "4", "--repeat", "1"]
    assert run(tmp_path, *args) == 0
    name = "basis_rcsvd_k3_p2_q1_seed4.bin"
    assert (tmp_path / name).read_bytes() == (pipeline / name).read_bytes()
    meta = rio.read_sidecar(tmp_path / (name + ".meta"))
    assert meta["seed"] == "4" and float(meta["time_median_s"]) > 0


def test_csvd_basis_structure(pipeline, tmp_path):
    assert run(tmp_path, "basis", "--snapshots", str(pipeline / "snapshots.bin"),
               "--method", "csvd", "--k", "5", "--repeat", "1") == 0
    V = rio.read_basis(tmp_path / "basis_csvd_k5.bin")
    assert check_structure(V, 1e-10 * np.sqrt(10))["pass"]


def test_bounds_schema(pipeline):
    expected = [
        "k", "p_label", "p_ovs", "q_pow", "s", "seed", "method", "kind", "stabilize", "status", "time_s",
        "n_s", "e_proj_frob", "e_proj_sq", "tail", "C", "failure_prob", "alpha", "gamma",
        "eta_det", "eta_det_adv", "eta_det_adv_sharp", "eta_prob", "eta_prob_adv", "eta_prob_adv_sharp",
        "eff_det", "eff_det_adv", "eff_prob", "eff_prob_adv", "eff_det_adv_sharp", "eff_prob_adv_sharp",
        "eff_literal_det", "eff_literal_det_adv", "eff_literal_prob", "eff_literal_prob_adv",
        "zero_error", "violations", "assumption_violation",
    ]
    rows = rio.read_csv(pipeline / "bounds.csv")
    assert list(rows[0]) == expected
    assert len(rows) == 2 * 2 * 2 * 2
    assert list(rio.read_csv(pipeline / "bounds_mean.csv")[0]) == cli.MEAN_COLUMNS
    assert list(rio.read_csv(pipeline / "csvd.csv")[0]) == cli.CSVD_COLUMNS


def test_bounds_rows_valid(pipeline):
    rows = rio.read_csv(pipeline / "bounds.csv")
    for row in rows:
        if row["p_label"] == "threshold":
            # the threshold sketch is wider than the 110 snapshots
            assert row["status"] == "infeasible"
            assert int(row["p_ovs"]) + int(row["k"]) > 110 and row["eta_det"] == ""
            continue
        assert row["status"] == "ok" and row["assumption_violation"] == "false"
        for name in ("eff_det", "eff_det_adv", "eff_prob", "eff_prob_adv"):
            assert float(row[name]) >= 1.0
    mean = rio.read_csv(pipeline / "bounds_mean.csv")
    assert {r["n_ok"] for r in mean if r["p_label"] == "threshold"} == {"0"}
    assert {r["n_ok"] for r in mean if r["p_label"] == "2"} == {"2"}


def test_figure_tables(pipeline):
    fig = pipeline / "figures"
    names = sorted(p.name for p in fig.iterdir())
    assert names == sorted(f"{f}_q{q}.dat" for f in ("fig1_errors", "fig2_runtimes", "fig3_eff_det",
                                                     "fig4_eff_prob") for q in (0, 1))
    lines = (fig / "fig1_errors_q0.dat").read_text().splitlines()
    assert lines[0].split() == ["k", "csvd", "rcsvd_p2", "rcsvd_pthreshold"]
    assert [line.split()[0] for line in lines[1:]] == ["2", "4"]


def test_figures_rerun_identical(pipeline, tmp_path):
    assert run(pipeline, "figures", "--figures-dir", str(tmp_path)) == 0
    for p in (pipeline / "figures").iterdir():
        assert (tmp_path / p.name).read_bytes() == p.read_bytes()


def test_figure_table_four_series():
    mean = [{"k": "10", "p_label": p, "q_pow": "0", "e_proj_sq": "1.0", "time_s": "0.1"}
            for p in ("5", "20", "threshold")]
    tables = cli.figure_tables(mean, [{"k": "10", "e_proj_sq": "0.5", "time_s": "2.0"}])
    header = tables["fig1_errors_q0.dat"].splitlines()[0].split()
    assert header[1:] == ["csvd", "rcsvd_p5", "rcsvd_p20", "rcsvd_pthreshold"]


def test_figures_empty_dir(tmp_path, capsys):
    assert run(tmp_path, "figures") == 6
    assert "bounds_mean.csv" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []


def test_end_to_end_byte_reproducible(pipeline, tmp_path):
    assert run(tmp_path, "snapshots", *SMALL) == 0
    assert run(tmp_path, "bounds", "--k", "2", "4", "--p-ovs", "2", "threshold", "--q-pow", "0", "1",
               "--seeds", "1", "2") == 0
    assert run(tmp_path, "figures") == 0
    drop = {"time_s"}
    for name in ("bounds.csv",):
        a, b = rio.read_csv(tmp_path / name), rio.read_csv(pipeline / name)
        assert [{k: v for k, v in r.items() if k not in drop} for r in a] == \
               [{k: v for k, v in r.items() if k not in drop} for r in b]
    for name in ("fig1_errors_q0.dat", "fig3_eff_det_q1.dat", "fig4_eff_prob_q0.dat"):
        assert (tmp_path / "figures" / name).read_bytes() == (pipeline / "figures" / name).read_bytes()


# ---------------------------------------------------------------- options and errors

def test_seed_required(pipeline, tmp_path, capsys):
    code = run(tmp_path, "basis", "--snapshots", str(pipeline / "snapshots.bin"), "--k", "3")
    assert code == 2 and "--seed" in capsys.readouterr().err
    assert run(tmp_path, "bounds", "--snapshots", str(pipeline / "snapshots.bin")) == 2


def test_bad_snapshot_file(tmp_path):
    (tmp_path / "snapshots.bin").write_bytes(b"nope")
    assert run(tmp_path, "basis", "--method", "csvd", "--k", "2") == 6


def test_rank_error_exit(tmp_path, capsys):
    rio.write_snapshots(tmp_path / "snapshots.bin", np.outer(np.arange(1.0, 9.0), np.ones(12)))
    assert run(tmp_path, "basis", "--k", "2", "--seed", "0", "--repeat", "1") == 3
    assert run(tmp_path, "basis", "--k", "2", "--method", "csvd", "--repeat", "1") == 3
    assert "numerical rank" in capsys.readouterr().err
    # sketch wider than the snapshot set is an argument error
    assert run(tmp_path, "basis", "--k", "2", "--p-ovs", "20", "--seed", "0") == 2


def test_gap_error_exit(tmp_path):
    Xs = snapshots_with_spectrum(0, 8, 12, [3.0, 2.0, 1.0, 1.0, 0.5])
    rio.write_snapshots(tmp_path / "snapshots.bin", Xs)
    assert run(tmp_path, "basis", "--k", "3", "--p-ovs", "9", "--method", "rcsvd-real",
               "--seed", "0", "--repeat", "1") == 4


def test_unknown_method_and_profile(tmp_path):
    assert run(tmp_path, "basis", "--method", "svd", "--k", "2") == 2
    assert run(tmp_path, "snapshots", "--profile", "huge") == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["basis", "--k", "two"])
    assert exc.value.code == 2


def test_config_and_flag_precedence(pipeline, tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text(
        "[model]\nn_xi1 = 3\nn_xi2 = 8\nnt = 4\n"
        "[snapshots]\nmu = 1.0, 1.5\n"
        f"[paths]\nout = {tmp_path / 'from_config'}\n")
    assert cli.main(["--config", str(ini), "snapshots"]) == 0
    X = rio.read_snapshots(tmp_path / "from_config" / "snapshots.bin")
    assert X.data.shape == (48, 8)
    assert cli.main(["--config", str(ini), "--out", str(tmp_path / "flag"), "snapshots", "--nt", "6"]) == 0
    assert rio.read_snapshots(tmp_path / "flag" / "snapshots.bin").data.shape == (48, 12)


def test_output_env(monkeypatch, tmp_path):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "env"))
    assert cli.main(["snapshots", *SMALL, "--mu", "1.0"]) == 0
    assert (tmp_path / "env" / "snapshots.bin").is_file()


def test_bad_config_value(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[model]\nnt = many\n")
    assert cli.main(["--config", str(ini), "--out", str(tmp_path), "snapshots"]) == 2


def test_resolve_p():
    assert cli.resolve_p(5, 10, 100) == 5
    assert cli.resolve_p("threshold", 1, 100) is None
    assert cli.resolve_p("threshold", 10, 16500) == srft_threshold(10, 16500) - 10 == 1539


# ---------------------------------------------------------------- rom

@pytest.fixture(scope="module")
def desk_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("desk")
    assert run(out, "snapshots") == 0
    return out


def _rom(out, k):
    assert run(out, "basis", "--method", "csvd", "--k", str(k), "--repeat", "1") == 0
    assert run(out, "rom", "--basis", str(out / f"basis_csvd_k{k}.bin"),
               "--output", str(out / f"rom_k{k}.csv")) == 0
    return rio.read_csv(out / f"rom_k{k}.csv")


def test_rom_full_basis(tmp_path):
    # k = N: the identity viewed as an ortho-symplectic basis
    rio.write_basis(tmp_path / "eye.bin", OrthoSymplecticBasis(np.eye(24), np.zeros((24, 24))))
    assert run(tmp_path, "rom", *SMALL, "--basis", str(tmp_path / "eye.bin")) == 0
    rows = rio.read_csv(tmp_path / "rom_mu1.5.csv")
    assert list(rows[0]) == cli.ROM_COLUMNS and len(rows) == 11
    assert max(float(r["state_error"]) for r in rows) <= 1e-10


def test_rom_dimension_mismatch(pipeline, tmp_path):
    assert run(tmp_path, "basis", "--snapshots", str(pipeline / "snapshots.bin"),
               "--method", "csvd", "--k", "2", "--repeat", "1") == 0
    assert run(tmp_path, "rom", "--basis", str(tmp_path / "basis_csvd_k2.bin")) == 2


def _integrated_error(out, k):
    return sum(float(r["state_error"]) for r in _rom(out, k))


def test_rom_desk_energy(desk_run):
    h = np.array([float(r["hamiltonian_rom"]) for r in _rom(desk_run, 20)])
    assert np.max(np.abs(h - h[0])) <= 1e-8 * abs(h[0])


def test_rom_error_trend_resolved_range(desk_run):
    errs = [_integrated_error(desk_run, k) for k in (40, 30, 20)]
    assert errs[0] <= errs[1] <= errs[2]


@pytest.mark.xfail(strict=True, reason="below k=20 the desk ROM error saturates near 100% and "
                   "its ordering in k is not monotone (k=20 slightly above k=10)")
def test_rom_error_trend_down_to_k10(desk_run):
    errs = [_integrated_error(desk_run, k) for k in (40, 20, 10)]
    assert errs[0] <= errs[1] <= errs[2]


def test_figures_render(pipeline, tmp_path):
    pytest.importorskip("matplotlib")
    assert run(pipeline, "figures", "--figures-dir", str(tmp_path), "--render") == 0
    png = tmp_path / "fig1_errors_q0.png"
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

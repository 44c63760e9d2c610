import subprocess
import sys

from crystalprobe.cli import main


def run_cli(args):
    return main(list(args))


def test_spectrum_command(tmp_path):
    out = tmp_path / "modes.csv"
    code = run_cli(["spectrum", "--out", str(out), "--override", "n_ions=20",
                    "--override", "delta=0.1"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "index,k_index,branch,omega,s1"
    assert len(lines) == 20  # header + 19 probe-coupled modes


def test_dynamics_command_and_columns(tmp_path):
    out = tmp_path / "dyn.csv"
    code = run_cli(["dynamics", "--out", str(out), "--override", "n_ions=20",
                    "--override", "tau_max=10", "--override", "dtau=0.1"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "tau,D_opt,V,B,rho_eg_re,rho_eg_im"
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == 1.0


def test_blp_command(tmp_path):
    out = tmp_path / "blp.csv"
    code = run_cli(["blp", "--out", str(out), "--override", "n_ions=20",
                    "--override", "tau_max=20", "--override", "dtau=0.1"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "theta,phi,measure,n_revivals,xi,soft_gap"


def test_config_file_and_override_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n_ions = 24\ndelta = 0.2\ntau_max = 10\ndtau = 0.1\n")
    out = tmp_path / "o.csv"
    code = run_cli(["dynamics", "--config", str(cfg), "--out", str(out),
                    "--override", "delta=0.05"])
    assert code == 0
    assert out.exists()


def test_shipped_study_configs_parse():
    import glob
    import os

    from crystalprobe.experiments import parse_config

    paths = sorted(glob.glob(os.path.join(os.path.dirname(__file__), "..", "configs", "*.cfg")))
    assert len(paths) >= 6
    for p in paths:
        with open(p) as fh:
            cfg = parse_config(fh.read())
        cfg.chain_params()
        cfg.time_grid()


def test_unknown_config_key_exits_2(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    assert run_cli(["dynamics", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2


def test_bad_parameter_exits_2(tmp_path):
    assert run_cli(["dynamics", "--out", str(tmp_path / "x.csv"),
                    "--override", "delta=0"]) == 2
    assert run_cli(["dynamics", "--out", str(tmp_path / "x.csv"),
                    "--override", "n_ions=7"]) == 2


def test_missing_out_exits_2():
    assert run_cli(["dynamics", "--override", "n_ions=20"]) == 2


def test_numerical_failure_exits_3(tmp_path):
    # floor above the soft gap: spectrum construction fails numerically
    code = run_cli(["spectrum", "--out", str(tmp_path / "x.csv"),
                    "--override", "n_ions=20", "--override", "delta=1e-5",
                    "--override", "omega_floor=0.5"])
    assert code == 3


def test_cli_entry_point_subprocess(tmp_path):
    out = tmp_path / "modes.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "crystalprobe.cli", "spectrum", "--out", str(out),
         "--override", "n_ions=20"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_sweep_delta_cli_determinism(tmp_path):
    args = ["sweep-delta", "--override", "n_ions=20", "--override", "tau_max=20",
            "--override", "dtau=0.1", "--override", "eta=0.5",
            "--override", "delta_values=1e-4,1e-2,-1e-3,-1e-5"]
    out1, out8 = tmp_path / "t1.csv", tmp_path / "t8.csv"
    assert run_cli(args + ["--out", str(out1), "--threads", "1"]) == 0
    assert run_cli(args + ["--out", str(out8), "--threads", "8"]) == 0
    assert out1.read_bytes() == out8.read_bytes()


def test_spectrum_command_zigzag_side(tmp_path):
    out = tmp_path / "zig.csv"
    code = run_cli(["spectrum", "--out", str(out), "--override", "n_ions=20",
                    "--override", "delta=-0.1"])
    assert code == 0
    lines = out.read_text().splitlines()
    branches = {line.split(",")[2] for line in lines[1:]}
    assert branches <= {"x", "y"}
    omegas = [float(line.split(",")[3]) for line in lines[1:]]
    assert omegas == sorted(omegas)


def test_validate_command():
    assert run_cli(["validate"]) == 0


def test_optimize_pair_cli(tmp_path):
    out = tmp_path / "grid.csv"
    code = run_cli(["optimize-pair", "--out", str(out), "--threads", "4",
                    "--override", "n_ions=12", "--override", "tau_max=5",
                    "--override", "dtau=0.1", "--override", "n_theta=3",
                    "--override", "n_phi=4", "--override", "eta=0.4"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "theta,phi,measure"
    assert len(lines) == 13

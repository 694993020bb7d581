import numpy as np
import pytest

from rigidloc.cli import main
from rigidloc.errors import ConfigurationError
from rigidloc.harness import DEFAULT_SIGMA_GRID, DEFAULT_ZETA_THETA
from rigidloc.scenario import load_scenario


def write_scenario(tmp_path, text, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


FULL_SCENARIO = """
room:
  width: 12.0
  height: 9.0
anchors:
  count: 5
body:
  count: 4
  radius: 0.8
  wall_clearance: 2.0
noise:
  sigma: [0.2, 0.4]
  zeta_theta_degrees: 10.0
  tt_noisy: true
experiment:
  trials: 50
  methods: [mds, smds_full]
  master_seed: 99
  fixed_pose: true
  workers: 2
  output: results.csv
"""


def test_empty_scenario_gives_defaults(tmp_path):
    cfg = load_scenario(write_scenario(tmp_path, ""))
    assert cfg.sigma_grid == DEFAULT_SIGMA_GRID
    assert cfg.zeta_theta == pytest.approx(DEFAULT_ZETA_THETA)
    assert cfg.rho is None
    assert cfg.trials == 1000
    assert cfg.scene.n_anchors == 8 and cfg.scene.n_landmarks == 8
    assert cfg.workers == 1
    assert not cfg.fixed_pose


def test_full_scenario_parses(tmp_path):
    cfg = load_scenario(write_scenario(tmp_path, FULL_SCENARIO))
    assert cfg.scene.room_width == 12.0 and cfg.scene.room_height == 9.0
    assert cfg.scene.n_anchors == 5 and cfg.scene.n_landmarks == 4
    assert cfg.scene.body_radius == 0.8
    assert cfg.scene.wall_clearance == 2.0
    assert cfg.sigma_grid == (0.2, 0.4)
    assert cfg.zeta_theta == pytest.approx(np.deg2rad(10.0))
    assert cfg.tt_noisy
    assert cfg.trials == 50
    assert cfg.methods == ("mds", "smds_full")
    assert cfg.master_seed == 99
    assert cfg.fixed_pose
    assert cfg.workers == 2
    assert cfg.output_path == "results.csv"


def test_scalar_sigma_becomes_grid(tmp_path):
    cfg = load_scenario(write_scenario(tmp_path, "noise:\n  sigma: 0.5\n"))
    assert cfg.sigma_grid == (0.5,)


def test_rho_excludes_zeta(tmp_path):
    cfg = load_scenario(write_scenario(tmp_path, "noise:\n  rho: 120.0\n"))
    assert cfg.rho == 120.0
    assert cfg.zeta_theta is None
    both = "noise:\n  rho: 120.0\n  zeta_theta_degrees: 5.0\n"
    with pytest.raises(ConfigurationError):
        load_scenario(write_scenario(tmp_path, both, name="both.yaml"))


def test_top_level_seed_alias(tmp_path):
    cfg = load_scenario(write_scenario(tmp_path, "seed: 4242\n"))
    assert cfg.master_seed == 4242


def test_explicit_anchor_positions(tmp_path):
    text = """
anchors:
  positions: [[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0]]
"""
    cfg = load_scenario(write_scenario(tmp_path, text))
    assert cfg.scene.n_anchors == 4
    assert cfg.scene.anchor_positions.shape == (2, 4)
    assert cfg.scene.anchor_positions[0, 1] == 10.0


def test_explicit_body_points(tmp_path):
    text = """
body:
  points: [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
"""
    cfg = load_scenario(write_scenario(tmp_path, text))
    assert cfg.scene.n_landmarks == 3
    assert cfg.scene.body_points.shape == (2, 3)


def test_unknown_keys_rejected(tmp_path):
    with pytest.raises(ConfigurationError):
        load_scenario(write_scenario(tmp_path, "bogus_section: 1\n"))
    with pytest.raises(ConfigurationError):
        load_scenario(write_scenario(tmp_path, "noise:\n  sigmaa: 0.5\n"))


def test_malformed_scenario_rejected(tmp_path):
    with pytest.raises(ConfigurationError):
        load_scenario(write_scenario(tmp_path, "- just\n- a list\n"))
    with pytest.raises(ConfigurationError):
        load_scenario(write_scenario(tmp_path, "room: [unclosed\n"))


SMALL_RUN = """
noise:
  sigma: [0.3]
experiment:
  trials: 8
  methods: [smds_full]
  master_seed: 7
"""


def test_cli_run_writes_csv(tmp_path, capsys):
    scenario = write_scenario(tmp_path, SMALL_RUN)
    out = tmp_path / "res.csv"
    assert main(["run", scenario, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "method,sigma,mse_t,rmse_t,mse_Q,conv_rate,crlb_t,crlb_Q,trials"
    assert len(lines) == 2
    assert lines[1].startswith("smds_full,0.3,")
    assert "wrote 1 rows" in capsys.readouterr().out


def test_cli_run_prints_without_out(tmp_path, capsys):
    scenario = write_scenario(tmp_path, SMALL_RUN)
    assert main(["run", scenario]) == 0
    out = capsys.readouterr().out
    assert out.startswith("method,sigma,")
    assert out.count("\n") == 2


def test_cli_run_overrides(tmp_path, capsys):
    scenario = write_scenario(tmp_path, SMALL_RUN)
    rc = main(["run", scenario, "--sigma-grid", "0.2,0.6",
               "--trials", "5", "--methods", "mds", "--seed", "11"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("mds,0.2,")
    assert lines[2].startswith("mds,0.6,")


def test_cli_crlb(tmp_path, capsys):
    scenario = write_scenario(tmp_path, "noise:\n  sigma: [0.2, 0.5]\n")
    assert main(["crlb", scenario]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "sigma,crlb_t,crlb_alpha,crlb_Q"
    assert len(lines) == 3
    first = [float(x) for x in lines[1].split(",")]
    second = [float(x) for x in lines[2].split(",")]
    assert first[0] == 0.2 and second[0] == 0.5
    assert second[1] > first[1] > 0.0


def test_cli_crlb_writes_file(tmp_path, capsys):
    scenario = write_scenario(tmp_path, "noise:\n  sigma: [0.2]\n")
    out = tmp_path / "bounds.csv"
    assert main(["crlb", scenario, "--out", str(out)]) == 0
    assert out.read_text().startswith("sigma,crlb_t,")


def test_cli_missing_file(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.yaml")]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_bad_method(tmp_path, capsys):
    scenario = write_scenario(tmp_path, SMALL_RUN)
    assert main(["run", scenario, "--methods", "bogus"]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_demo(capsys):
    assert main(["demo"]) == 0
    out = capsys.readouterr().out
    assert "method,sigma," in out
    # 4 grid points x 3 methods plus header and the scene banner
    assert sum(1 for line in out.splitlines() if line.count(",") == 8) >= 13

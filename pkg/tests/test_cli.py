"""Scenario parsing, CLI dispatch, artifact layout, and determinism."""

import json

import numpy as np
import pytest

from floquet_bic.cli import run_scenario
from floquet_bic.scenario import ScenarioError, load_scenario, parse_grid

# [run] last so tests can append subcommand-specific keys to it
TINY = """
[model]
profile = paper_defect
n_sites = 21
k = 0.3
g = 0.21
gamma = 1.0
omega = 1.0
gamma_norm = 2.4308

[output]
dir = {out}

[run]
steps_per_period = 128
"""


def _write(tmp_path, body, name="scenario.cfg"):
    p = tmp_path / name
    p.write_text(body)
    return p


def test_parse_grid_forms():
    assert np.allclose(parse_grid("lin:0:1:5"), np.linspace(0, 1, 5))
    assert np.allclose(parse_grid("geom:1:100:3"), [1, 10, 100])
    assert np.allclose(parse_grid("0.5, 1, 2"), [0.5, 1, 2])
    with pytest.raises(ScenarioError):
        parse_grid("lin:0:1")
    with pytest.raises(ScenarioError):
        parse_grid("")


def test_unknown_keys_rejected(tmp_path):
    bad = TINY.format(out=tmp_path / "o") + "\ntypo_key = 3\n"
    p = _write(tmp_path, bad)
    with pytest.raises(ScenarioError, match="typo_key"):
        load_scenario(p, "spectrum")
    bad2 = TINY.format(out=tmp_path / "o").replace("steps_per_period", "steps_per_perod")
    p2 = _write(tmp_path, bad2, "b2.cfg")
    with pytest.raises(ScenarioError, match="steps_per_perod"):
        load_scenario(p2, "spectrum")


def test_run_section_keys_are_per_subcommand(tmp_path):
    body = TINY.format(out=tmp_path / "o") + "gamma_grid = 1, 2\n"
    p = _write(tmp_path, body)
    load_scenario(p, "decay")  # fine for decay
    with pytest.raises(ScenarioError, match="gamma_grid"):
        load_scenario(p, "spectrum")


def test_overrides_applied_and_validated(tmp_path):
    p = _write(tmp_path, TINY.format(out=tmp_path / "o"))
    scn = load_scenario(p, "spectrum", ["model.gamma=2.5", "run.steps_per_period=64"])
    assert scn.model["gamma"] == "2.5"
    assert scn.run["steps_per_period"] == "64"
    with pytest.raises(ScenarioError):
        load_scenario(p, "spectrum", ["nonsense"])
    with pytest.raises(ScenarioError):
        load_scenario(p, "spectrum", ["model.not_a_key=1"])


def test_spectrum_run_writes_artifacts_and_manifest(tmp_path):
    out = tmp_path / "out"
    p = _write(tmp_path, TINY.format(out=out))
    assert run_scenario(str(p), "spectrum") == 0
    spectrum = out / "spectrum.csv"
    manifest = json.loads((out / "manifest_spectrum.json").read_text())
    assert spectrum.exists() and (out / "profiles.csv").exists()
    assert manifest["subcommand"] == "spectrum"
    assert manifest["scenario"]["model"]["n_sites"] == "21"
    assert "spectrum.csv" in manifest["artifacts"]
    lines = spectrum.read_text().splitlines()
    assert lines[0] == "mode_index,re_eps,im_eps,ipr,label"
    assert len(lines) == 22


def test_collision_requires_force(tmp_path):
    out = tmp_path / "out"
    p = _write(tmp_path, TINY.format(out=out))
    assert run_scenario(str(p), "spectrum") == 0
    assert run_scenario(str(p), "spectrum") == 1  # refuses to overwrite
    assert run_scenario(str(p), "spectrum", force=True) == 0


def test_rerun_is_byte_identical(tmp_path):
    out = tmp_path / "out"
    p = _write(tmp_path, TINY.format(out=out))
    assert run_scenario(str(p), "spectrum") == 0
    first = (out / "spectrum.csv").read_bytes()
    first_prof = (out / "profiles.csv").read_bytes()
    assert run_scenario(str(p), "spectrum", force=True) == 0
    assert (out / "spectrum.csv").read_bytes() == first
    assert (out / "profiles.csv").read_bytes() == first_prof


def test_empty_grid_fails_before_compute(tmp_path):
    body = TINY.format(out=tmp_path / "o") + "gamma_grid = \n"
    p = _write(tmp_path, body)
    assert run_scenario(str(p), "decay") == 1


def test_decay_requires_some_grid(tmp_path):
    p = _write(tmp_path, TINY.format(out=tmp_path / "o"))
    assert run_scenario(str(p), "decay") == 1


def test_unknown_config_name():
    assert run_scenario("no_such_preset", "spectrum", out_dir="/tmp/x") == 1


def test_full_precision_csv(tmp_path):
    out = tmp_path / "out"
    p = _write(tmp_path, TINY.format(out=out))
    run_scenario(str(p), "spectrum")
    row = (out / "spectrum.csv").read_text().splitlines()[1].split(",")
    # 17 significant digits in scientific notation
    mantissa = row[1].split("e")[0].replace("-", "")
    assert len(mantissa.replace(".", "")) == 17


def test_presets_resolve_and_parse():
    from floquet_bic.cli import _resolve_config

    for name, sub in [
        ("fig2", "ipr-map"),
        ("fig3", "spectrum"),
        ("fig4", "evolve"),
        ("fig5", "decay"),
        ("fig5c", "evolve"),
        ("fig6", "scatter"),
        ("fig7", "scatter"),
        ("fig8", "nonlinear"),
        ("fig9", "multimode"),
    ]:
        path = _resolve_config(name)
        scn = load_scenario(path, sub)
        assert scn.lattice().n_sites == 101


def test_check_mode_runs_convergence(tmp_path, capsys):
    # the 1e-9 doubling criterion is calibrated for the default step density
    out = tmp_path / "out"
    p = _write(tmp_path, TINY.format(out=out))
    stat = run_scenario(str(p), "spectrum", overrides=["run.steps_per_period=2048"], check=True)
    assert stat == 0
    assert "doubling shift" in capsys.readouterr().out


def test_hfe_subcommand_outputs(tmp_path):
    out = tmp_path / "out"
    # n_sites = 31: the smallest chain where extended modes stay below the
    # IPR threshold, so the dark BIC is identified for the comparison report
    body = (
        TINY.format(out=out).replace("n_sites = 21", "n_sites = 31")
        + "omega_list = 1, 10\ngamma_norm_grid = lin:2.3:2.5:5\n"
    )
    p = _write(tmp_path, body)
    assert run_scenario(str(p), "hfe") == 0
    for f in ("named_rates.csv", "beta_roots.csv", "reduced_eigs.csv", "comparison.json"):
        assert (out / f).exists()
    roots = (out / "beta_roots.csv").read_text().splitlines()
    assert roots[0] == "omega,gamma_star"
    star = float(roots[2].split(",")[1])
    assert abs(star - 2.40509) < 5e-4


def test_scatter_subcommand_tiny(tmp_path):
    out = tmp_path / "out"
    body = (
        TINY.format(out=out)
        + "gamma_list = 0, 0.5\nt_final_periods = 2\npacket_center = -3\npacket_width = 1.5\n"
    )
    p = _write(tmp_path, body)
    assert run_scenario(str(p), "scatter") == 0
    refl = (out / "reflectivity.csv").read_text().splitlines()
    assert refl[0].startswith("gamma,r,")
    assert len(refl) == 3
    assert (out / "traj_g0.csv").exists() and (out / "spectrum_g0.5.csv").exists()

"""Command-line front end: scenario dispatch, output management, provenance.

    floquet-bic <subcommand> --config <file-or-preset> --out <dir> [options]

Subcommands: spectrum, ipr-map, evolve, scatter, decay, nonlinear,
multimode, hfe.  Preset scenario names fig2 .. fig9 (plus fig5c) resolve to
packaged config files reproducing the reference parameter sets.  File
formats are documented in docs/formats.md.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from .experiments import (
    PacketSpec,
    dark_bic_evolution,
    decay_sweep,
    gaussian_packet,
    ipr_map,
    nonlinear_stability,
    reflectivity,
)
from .floquet import classified_spectrum, monodromy
from .hfe import bessel_j, beta_root, effective_model, hfe_vs_exact, reduced_chain
from .integrator import DEFAULT_STEPS_PER_PERIOD, evolve
from .lattice import LatticeConfig, site_indices, with_loss_strength
from .scenario import ScenarioConfig, ScenarioError, load_scenario, parse_grid, write_csv, write_manifest

SUBCOMMANDS = (
    "spectrum",
    "ipr-map",
    "evolve",
    "scatter",
    "decay",
    "nonlinear",
    "multimode",
    "hfe",
)


def _resolve_config(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    preset = resources.files("floquet_bic").joinpath(f"presets/{name}.cfg")
    if preset.is_file():
        return Path(str(preset))
    raise ScenarioError(f"config {name!r} is neither a file nor a known preset")


def _gnum(x: float) -> str:
    # compact value tag for per-point artifact names
    return f"{x:g}"


class _Writer:
    """Tracks artifacts and enforces the overwrite policy."""

    def __init__(self, out_dir: Path, force: bool):
        self.out_dir = out_dir
        self.force = force
        self.artifacts: list[str] = []
        out_dir.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        if p.exists() and not self.force:
            raise FileExistsError(f"{p} exists; pass --force to overwrite")
        self.artifacts.append(name)
        return p

    def csv(self, name: str, header, rows) -> Path:
        return write_csv(self.path(name), header, rows)

    def json(self, name: str, payload: dict) -> Path:
        import json

        p = self.path(name)
        with open(p, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return p


def _write_trajectory(w: _Writer, tag: str, traj) -> None:
    n = site_indices(traj.config.n_sites)
    rows = []
    for i, t in enumerate(traj.times):
        for j in range(traj.config.n_sites):
            c = traj.states[i, j]
            rows.append((t, n[j], c.real, c.imag, abs(c) ** 2))
    w.csv(f"traj{tag}.csv", ["t", "n", "re_c", "im_c", "abs2"], rows)
    norms = traj.norms()
    w.csv(
        f"summary{tag}.csv",
        ["t", "norm", "p"],
        [(t, norms[i], traj.leak[i]) for i, t in enumerate(traj.times)],
    )


def _write_profile(w: _Writer, name: str, config: LatticeConfig, profile: np.ndarray) -> None:
    n = site_indices(config.n_sites)
    w.csv(
        name,
        ["n", "re", "im", "abs2"],
        [(n[j], profile[j].real, profile[j].imag, abs(profile[j]) ** 2) for j in range(len(n))],
    )


def _write_spectrum(w: _Writer, tag: str, spec) -> None:
    w.csv(
        f"spectrum{tag}.csv",
        ["mode_index", "re_eps", "im_eps", "ipr", "label"],
        [(m.mode_index, m.re, m.im, m.ipr, m.label) for m in spec.modes],
    )
    N = len(spec.modes[0].profile)
    n = site_indices(N)
    rows = []
    for m in spec.modes:
        for j in range(N):
            c = m.profile[j]
            rows.append((m.mode_index, n[j], c.real, c.imag, abs(c) ** 2))
    w.csv(f"profiles{tag}.csv", ["mode_index", "n", "re", "im", "abs2"], rows)


def _run_steps(run: dict) -> int:
    return int(run.get("steps_per_period", DEFAULT_STEPS_PER_PERIOD))


def _gamma_list(run: dict, config: LatticeConfig) -> list[float]:
    if "gamma_list" in run:
        return [float(v) for v in parse_grid(run["gamma_list"])]
    return [float(config.loss.max())]


def _convergence_check(config: LatticeConfig, steps: int) -> None:
    """Doubling verification: quasi-energies shift < 1e-9, else abort."""
    from .floquet import floquet_spectrum

    e1 = floquet_spectrum(monodromy(config, steps), config.drive_frequency).quasi_energies()
    e2 = floquet_spectrum(monodromy(config, 2 * steps), config.drive_frequency).quasi_energies()
    e1 = e1[np.isfinite(e1)]
    e2 = e2[np.isfinite(e2)]
    # modes are not returned in a step-count-stable order; pair each quasi-
    # energy with its nearest counterpart
    shift = float(np.max(np.min(np.abs(e1[:, None] - e2[None, :]), axis=1), initial=0.0))
    if shift >= 1e-9:
        raise RuntimeError(
            f"convergence check failed: quasi-energy shift {shift:.3e} >= 1e-9 "
            f"when doubling steps_per_period from {steps}"
        )
    print(f"[check] quasi-energy doubling shift {shift:.3e} < 1e-9")


def _cmd_spectrum(scn: ScenarioConfig, w: _Writer, jobs: int) -> None:
    config = scn.lattice()
    spec = classified_spectrum(config, _run_steps(scn.run))
    _write_spectrum(w, "", spec)


def _cmd_ipr_map(scn: ScenarioConfig, w: _Writer, jobs: int) -> None:
    base = scn.lattice()
    run = scn.run
    grid = parse_grid(run.get("gamma_norm_grid", "lin:1.5:3.5:201"))
    for gamma in _gamma_list(run, base):
        config = with_loss_strength(base, gamma)
        m = ipr_map(config, grid, _run_steps(run), jobs=jobs)
        tag = f"_g{_gnum(gamma)}"
        rows = []
        qrows = []
        for i, gn in enumerate(m.gamma_norms):
            for mode in range(m.ipr.shape[1]):
                rows.append((gn, mode, m.ipr[i, mode]))
                qrows.append((gn, mode, m.re_eps[i, mode], m.im_eps[i, mode]))
        w.csv(f"iprmap{tag}.csv", ["gamma_norm", "mode_index", "ipr"], rows)
        w.csv(f"qmap{tag}.csv", ["gamma_norm", "mode_index", "re_eps", "im_eps"], qrows)


def _cmd_evolve(scn: ScenarioConfig, w: _Writer, jobs: int) -> None:
    base = scn.lattice()
    run = scn.run
    horizon = float(run.get("horizon_periods", 8.0))
    report = {}
    for gamma in _gamma_list(run, base):
        config = with_loss_strength(base, gamma)
        rep = dark_bic_evolution(
            config, horizon, _run_steps(run), int(run.get("samples_per_period", 32))
        )
        tag = f"_g{_gnum(gamma)}"
        _write_trajectory(w, tag, rep.trajectory)
        _write_profile(w, f"profile{tag}_initial.csv", config, rep.initial_profile)
        _write_profile(w, f"profile{tag}_final.csv", config, rep.final_profile)
        report[f"gamma={_gnum(gamma)}"] = {
            "overlap": rep.overlap,
            "p_final": rep.p_final,
            "dark_quasi_energy": [rep.dark_quasi_energy.real, rep.dark_quasi_energy.imag],
            "lossy_population": rep.lossy_population,
        }
    w.json("report.json", report)


def _cmd_scatter(scn: ScenarioConfig, w: _Writer, jobs: int) -> None:
    base = scn.lattice()
    run = scn.run
    packet = PacketSpec(
        center=float(run.get("packet_center", -20)),
        width=float(run.get("packet_width", 4)),
        momentum=float(run.get("packet_momentum", np.pi / 2)),
    )
    periods = float(run.get("t_final_periods", 30.0))
    steps = _run_steps(run)
    want_traj = run.get("write_trajectories", "true").lower() in ("1", "true", "yes")
    want_spec = run.get("write_spectra", "true").lower() in ("1", "true", "yes")
    rrows = []
    for gamma in _gamma_list(run, base):
        config = with_loss_strength(base, gamma)
        tag = f"_g{_gnum(gamma)}"
        if want_spec:
            _write_spectrum(w, tag, classified_spectrum(config, steps))
        traj = evolve(
            config,
            gaussian_packet(packet, config.n_sites),
            periods * config.drive.period,
            steps,
            samples_per_period=int(run.get("samples_per_period", 8)),
        )
        if want_traj:
            _write_trajectory(w, tag, traj)
        r = reflectivity(traj, traj.times[-1])
        rrows.append((gamma, r.r, r.t_f, r.norm0, r.final_norm, r.left_population))
    w.csv(
        "reflectivity.csv",
        ["gamma", "r", "t_f", "norm0", "final_norm", "left_population"],
        rrows,
    )


def _cmd_decay(scn: ScenarioConfig, w: _Writer, jobs: int) -> None:
    base = scn.lattice()
    run = scn.run
    steps = _run_steps(run)
    t_probe = float(run["t_probe"]) if "t_probe" in run else None
    wrote = False
    for variable, key in (("gamma", "gamma_grid"), ("omega", "omega_grid")):
        if key not in run:
            continue
        wrote = True
        grid = parse_grid(run[key])
        retune = run.get("retune_gamma_norm", "false").lower() in ("1", "true", "yes")
        points = decay_sweep(base, variable, grid, t_probe, retune, steps, jobs=jobs)
        w.csv(
            f"decay_{variable}.csv",
            [variable, "p", "re_eps_dark", "im_eps_dark", "gamma_norm"],
            [
                (p.value, p.p, p.dark_quasi_energy.real, p.dark_quasi_energy.imag, p.gamma_norm)
                for p in points
            ],
        )
    if not wrote:
        raise ScenarioError("decay needs gamma_grid and/or omega_grid in [run]")


def _cmd_nonlinear(scn: ScenarioConfig, w: _Writer, jobs: int) -> None:
    from .lattice import with_nonlinearity_strength

    base = scn.lattice()
    run = scn.run
    u_grid = parse_grid(run.get("u_list", "0, 0.5, 1, 2"))
    horizon = float(run.get("horizon_periods", 8.0))
    steps = _run_steps(run)
    points = nonlinear_stability(base, u_grid, horizon, steps)
    w.csv("nonlinear.csv", ["u", "p", "overlap"], [(p.u, p.p, p.overlap) for p in points])
    if "traj_u" in run:
        # space-time record of one nonlinear run, for density-map panels
        u = float(run["traj_u"])
        config = with_nonlinearity_strength(base, u)
        from .floquet import dark_mode as _dm
        from .integrator import StateVector as _SV

        linear = with_nonlinearity_strength(base, 0.0)
        dark = _dm(classified_spectrum(linear, steps))
        traj = evolve(
            config,
            _SV(dark.profile),
            horizon * config.drive.period,
            steps,
            samples_per_period=int(run.get("samples_per_period", 32)),
        )
        _write_trajectory(w, f"_u{_gnum(u)}", traj)
        _write_profile(w, f"profile_u{_gnum(u)}_initial.csv", config, dark.profile)
        _write_profile(w, f"profile_u{_gnum(u)}_final.csv", config, traj.states[-1])


def _cmd_multimode(scn: ScenarioConfig, w: _Writer, jobs: int) -> None:
    from .lattice import multimode_profile

    base = scn.lattice()
    run = scn.run
    horizon = float(run.get("horizon_periods", 80.0))
    steps = _run_steps(run)
    m_list = [int(v) for v in parse_grid(run.get("m_list", "4, 5"))]
    report = {}
    for M in m_list:
        config = multimode_profile(
            base.n_sites,
            M,
            float(base.hopping[0]),
            float(base.hopping[base.site_offset]),
            float(base.loss.max()),
            f0=base.drive_amplitude,
            omega=base.drive_frequency,
            a=base.lattice_constant,
        )
        rep = dark_bic_evolution(config, horizon, steps, int(run.get("samples_per_period", 8)))
        tag = f"_M{M}"
        _write_trajectory(w, tag, rep.trajectory)
        _write_profile(w, f"profile{tag}.csv", config, rep.initial_profile)
        report[f"M={M}"] = {
            "overlap": rep.overlap,
            "p_final": rep.p_final,
            "dark_quasi_energy": [rep.dark_quasi_energy.real, rep.dark_quasi_energy.imag],
            "lossy_population": rep.lossy_population,
        }
    w.json("report.json", report)


def _cmd_hfe(scn: ScenarioConfig, w: _Writer, jobs: int) -> None:
    base = scn.lattice()
    run = scn.run
    k = float(base.hopping[0])
    g = float(base.hopping[base.site_offset])
    omega = base.drive_frequency
    grid = parse_grid(run.get("gamma_norm_grid", "lin:2.2:2.6:81"))
    models = [(gn, effective_model(base, gn, omega)) for gn in grid]
    w.csv(
        "named_rates.csv",
        ["gamma_norm", "eta", "zeta", "alpha", "beta", "q"],
        [(gn,) + tuple(m.rates) + (m.q,) for gn, m in models],
    )
    omegas = parse_grid(run.get("omega_list", "1, 3, 10"))
    w.csv(
        "beta_roots.csv",
        ["omega", "gamma_star"],
        [(wv, beta_root(k, g, wv)) for wv in omegas],
    )
    M = int(run.get("reduced_m", 3))
    gn_star = beta_root(k, g, omega)
    zeta = g * bessel_j(0, gn_star)
    chain = reduced_chain(M, zeta, float(base.loss.max()))
    w.csv(
        "reduced_eigs.csv",
        ["m", "index", "re_e", "im_e"],
        [(M, i, e.real, e.imag) for i, e in enumerate(chain.eigenvalues)],
    )
    comparison = hfe_vs_exact(base, _run_steps(run))
    w.json("comparison.json", comparison.as_dict())


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "ipr-map": _cmd_ipr_map,
    "evolve": _cmd_evolve,
    "scatter": _cmd_scatter,
    "decay": _cmd_decay,
    "nonlinear": _cmd_nonlinear,
    "multimode": _cmd_multimode,
    "hfe": _cmd_hfe,
}


def run_scenario(
    config_path: str,
    subcommand: str,
    out_dir: str | None = None,
    overrides: list[str] = (),
    jobs: int = 1,
    force: bool = False,
    check: bool = False,
) -> int:
    """Execute one scenario; returns a process exit status."""
    try:
        path = _resolve_config(config_path)
        scn = load_scenario(path, subcommand, overrides)
        out = Path(out_dir) if out_dir else Path(scn.output.get("dir", "out"))
        w = _Writer(out, force)
        t0 = time.perf_counter()
        if check and subcommand in ("spectrum", "ipr-map", "evolve", "multimode", "hfe"):
            _convergence_check(scn.lattice(), _run_steps(scn.run))
        _HANDLERS[subcommand](scn, w, jobs)
        wall = time.perf_counter() - t0
        write_manifest(out, subcommand, scn, w.artifacts, wall)
    except (ScenarioError, FileExistsError, LookupError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="floquet-bic",
        description="Floquet spectra and dark BICs in driven dissipative lattices",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="scenario file or preset name (fig2..fig9)")
    parser.add_argument("--out", default=None, help="output directory (overrides [output] dir)")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--force", action="store_true", help="overwrite existing artifacts")
    parser.add_argument(
        "--check", action="store_true", help="run the step-doubling convergence check first"
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override a config value (repeatable)",
    )
    args = parser.parse_args(argv)
    return run_scenario(
        args.config,
        args.subcommand,
        args.out,
        args.overrides,
        jobs=max(1, args.jobs),
        force=args.force,
        check=args.check,
    )


if __name__ == "__main__":
    raise SystemExit(main())

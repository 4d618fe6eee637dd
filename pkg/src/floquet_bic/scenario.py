"""Scenario configs (INI files), grid parsing, CSV/JSON artifact writers.

A scenario file has three sections: [model] builds the LatticeConfig,
[run] carries subcommand-specific controls, [output] the destination.
Unknown keys are rejected so a typo cannot silently fall back to a default,
and every run writes a manifest that reconstructs it bit-identically.
All CSV floats use 17-significant-digit scientific notation.
"""

from __future__ import annotations

import configparser
import json
import platform
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .lattice import (
    LatticeConfig,
    explicit_profile,
    multimode_profile,
    paper_defect_profile,
    uniform_profile,
)

__all__ = [
    "ScenarioConfig",
    "ScenarioError",
    "load_scenario",
    "parse_grid",
    "write_csv",
    "write_manifest",
    "fmt",
]

_MODEL_KEYS = {
    "profile",
    "n_sites",
    "k",
    "g",
    "gamma",
    "m",
    "omega",
    "a",
    "f0",
    "gamma_norm",
    "u",
    "hopping",
    "loss",
    "nonlinearity",
}

# run keys accepted per subcommand, beyond the common integrator controls
_COMMON_RUN_KEYS = {"steps_per_period", "frame", "samples_per_period"}
_RUN_KEYS = {
    "spectrum": set(),
    "ipr-map": {"gamma_norm_grid", "gamma_list"},
    "evolve": {"horizon_periods", "gamma_list"},
    "scatter": {
        "gamma_list",
        "t_final_periods",
        "packet_center",
        "packet_width",
        "packet_momentum",
        "write_trajectories",
        "write_spectra",
    },
    "decay": {"gamma_grid", "omega_grid", "t_probe", "retune_gamma_norm"},
    "nonlinear": {"u_list", "horizon_periods", "traj_u"},
    "multimode": {"m_list", "horizon_periods"},
    "hfe": {"gamma_norm_grid", "omega_list", "reduced_m"},
}
_OUTPUT_KEYS = {"dir"}


class ScenarioError(ValueError):
    """Configuration file problem, reported with the offending section/key."""


@dataclass
class ScenarioConfig:
    """Parsed scenario: model dict, run dict, output dict (strings resolved)."""

    model: dict
    run: dict
    output: dict
    source: str = ""

    def lattice(self) -> LatticeConfig:
        return _build_lattice(self.model)

    def as_dict(self) -> dict:
        return {"model": self.model, "run": self.run, "output": self.output}


def parse_grid(text: str) -> np.ndarray:
    """Grid syntax: 'lin:a:b:n', 'geom:a:b:n', or a comma-separated list."""
    text = text.strip()
    for prefix, builder in (("lin", np.linspace), ("geom", np.geomspace)):
        if text.startswith(prefix + ":"):
            parts = text.split(":")
            if len(parts) != 4:
                raise ScenarioError(f"bad grid spec {text!r}: want {prefix}:start:stop:count")
            a, b, n = float(parts[1]), float(parts[2]), int(parts[3])
            if n < 1:
                raise ScenarioError(f"bad grid spec {text!r}: count must be >= 1")
            return builder(a, b, n)
    vals = [v for v in (s.strip() for s in text.split(",")) if v]
    if not vals:
        raise ScenarioError(f"empty grid spec {text!r}")
    return np.array([float(v) for v in vals])


def _floats(text: str) -> np.ndarray:
    return parse_grid(text)


def _build_lattice(model: dict) -> LatticeConfig:
    profile = model.get("profile", "paper_defect")
    drive = {
        "omega": float(model.get("omega", 1.0)),
        "a": float(model.get("a", 1.0)),
    }
    if "gamma_norm" in model and "f0" in model:
        raise ScenarioError("[model] give either gamma_norm or f0, not both")
    if "gamma_norm" in model:
        drive["gamma_norm"] = float(model["gamma_norm"])
    elif "f0" in model:
        drive["f0"] = float(model["f0"])

    n_sites = int(model.get("n_sites", 101))
    u = float(model.get("u", 0.0))
    try:
        if profile == "paper_defect":
            return paper_defect_profile(
                n_sites,
                float(model.get("k", 0.3)),
                float(model.get("g", 0.21)),
                float(model.get("gamma", 0.0)),
                u=u,
                **drive,
            )
        if profile == "multimode":
            return multimode_profile(
                n_sites,
                int(model.get("m", 3)),
                float(model.get("k", 0.3)),
                float(model.get("g", 0.21)),
                float(model.get("gamma", 0.0)),
                u=u,
                **drive,
            )
        if profile == "uniform":
            return uniform_profile(n_sites, float(model.get("k", 0.3)), u=u, **drive)
        if profile == "explicit":
            for key in ("hopping", "loss"):
                if key not in model:
                    raise ScenarioError(f"[model] profile=explicit requires key '{key}'")
            nl = _floats(model["nonlinearity"]) if "nonlinearity" in model else None
            return explicit_profile(
                _floats(model["hopping"]), _floats(model["loss"]), nonlinearity=nl, **drive
            )
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"[model] {exc}") from exc
    raise ScenarioError(f"[model] unknown profile {profile!r}")


def load_scenario(path: str | Path, subcommand: str, overrides: list[str] = ()) -> ScenarioConfig:
    """Read and validate a scenario file for one subcommand.

    overrides are 'section.key=value' strings applied before validation.
    """
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ScenarioError(f"config parse error in {path}: {exc}") from exc

    sections = {"model": {}, "run": {}, "output": {}}
    for sec in parser.sections():
        if sec not in sections:
            raise ScenarioError(f"unknown section [{sec}] in {path}")
        sections[sec] = dict(parser.items(sec))

    for ov in overrides:
        if "=" not in ov or "." not in ov.split("=", 1)[0]:
            raise ScenarioError(f"bad override {ov!r}: want section.key=value")
        target, value = ov.split("=", 1)
        sec, key = target.split(".", 1)
        if sec not in sections:
            raise ScenarioError(f"bad override {ov!r}: unknown section {sec!r}")
        sections[sec][key.strip()] = value.strip()

    if subcommand not in _RUN_KEYS:
        raise ScenarioError(f"unknown subcommand {subcommand!r}")
    for key in sections["model"]:
        if key not in _MODEL_KEYS:
            raise ScenarioError(f"unknown key '{key}' in [model] of {path}")
    allowed = _COMMON_RUN_KEYS | _RUN_KEYS[subcommand]
    for key in sections["run"]:
        if key not in allowed:
            raise ScenarioError(f"unknown key '{key}' in [run] for subcommand '{subcommand}'")
    for key in sections["output"]:
        if key not in _OUTPUT_KEYS:
            raise ScenarioError(f"unknown key '{key}' in [output] of {path}")

    return ScenarioConfig(
        model=sections["model"], run=sections["run"], output=sections["output"], source=str(path)
    )


def fmt(x) -> str:
    """One CSV cell: full-precision scientific notation for floats."""
    if isinstance(x, (float, np.floating)):
        return f"{x:.16e}"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> Path:
    """Write rows of cells with a header line; floats at 17 significant digits."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(c) for c in row) + "\n")
    return path


def write_manifest(
    out_dir: Path,
    subcommand: str,
    scenario: ScenarioConfig,
    artifacts: list[str],
    wall_time_s: float,
    extra: dict | None = None,
) -> Path:
    """Provenance record; contains everything needed to re-run the scenario."""
    import scipy

    manifest = {
        "subcommand": subcommand,
        "scenario": scenario.as_dict(),
        "artifacts": sorted(artifacts),
        "wall_time_s": wall_time_s,
        "versions": {
            "floquet_bic": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }
    if extra:
        manifest.update(extra)
    path = Path(out_dir) / f"manifest_{subcommand.replace('-', '_')}.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path

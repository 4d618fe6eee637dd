"""Wave packets, reflectivity, sweeps, and the stability experiments."""

import numpy as np
import pytest

from floquet_bic.experiments import (
    PacketSpec,
    dark_bic_evolution,
    decay_sweep,
    gaussian_packet,
    ipr_map,
    nonlinear_stability,
    profile_overlap,
    reflectivity,
    reflectivity_sweep,
)
from floquet_bic.integrator import evolve
from floquet_bic.lattice import paper_defect_profile, site_indices, uniform_profile


def test_gaussian_packet_shape_and_phase():
    spec = PacketSpec(center=-20, width=4.0)
    sv = gaussian_packet(spec, 101)
    n = site_indices(101)
    dens = np.abs(sv.amplitudes) ** 2
    assert n[np.argmax(dens)] == -20
    peak = np.abs(sv.amplitudes)[n == -20][0]
    for side in (-24, -16):
        assert np.abs(sv.amplitudes)[n == side][0] / peak == pytest.approx(
            np.exp(-1.0), abs=1e-12
        )
    # construction check: amplitude and the -pi/2-per-site phase ramp
    a = sv.amplitudes
    rebuilt = np.exp(-((n - spec.center) ** 2) / spec.width**2 - 1j * np.pi / 2 * n)
    rebuilt /= np.linalg.norm(rebuilt)
    assert np.max(np.abs(a - rebuilt)) < 1e-15
    assert np.sum(dens) == pytest.approx(1.0, abs=1e-12)


def test_gaussian_packet_momentum_zero_is_real():
    sv = gaussian_packet(PacketSpec(center=0, width=3.0, momentum=0.0), 31)
    assert np.allclose(sv.amplitudes.imag, 0.0)
    assert np.all(sv.amplitudes.real > 0)


def test_gaussian_packet_edge_warning():
    with pytest.warns(UserWarning, match="edge"):
        gaussian_packet(PacketSpec(center=0, width=30.0), 21)


def test_packet_spec_validation():
    with pytest.raises(ValueError):
        PacketSpec(center=0, width=-1.0)
    with pytest.raises(ValueError):
        PacketSpec(center=0, width=1.0, momentum=4.0)


def test_reflectivity_bounds_and_fields():
    cfg = paper_defect_profile(41, 0.3, 0.21, 0.5, gamma_norm=1.8, omega=1.0)
    packet = gaussian_packet(PacketSpec(center=-8, width=2.5), 41)
    traj = evolve(cfg, packet, 6 * cfg.drive.period, steps_per_period=512)
    r = reflectivity(traj, traj.times[-1])
    assert 0.0 <= r.r <= 1.0 + 1e-9
    assert r.norm0 == pytest.approx(1.0, abs=1e-12)
    assert r.left_population <= r.final_norm + 1e-12
    assert r.r_initial_norm <= r.r + 1e-12  # dissipative run: final norm <= norm0
    with pytest.raises(ValueError):
        reflectivity(traj, traj.times[-1] + 5.0)


def test_reflectivity_defect_free_transmission():
    # nothing to reflect from: packet crosses the center
    cfg = uniform_profile(101, 0.3, gamma_norm=1.0, omega=1.0)
    packet = gaussian_packet(PacketSpec(center=-20, width=4.0), 101)
    traj = evolve(cfg, packet, 30 * cfg.drive.period, steps_per_period=1024)
    r = reflectivity(traj, traj.times[-1])
    assert r.r < 0.05


def test_reflectivity_sweep_single_point_equals_direct_call():
    cfg = paper_defect_profile(41, 0.3, 0.21, 1.0, gamma_norm=1.8, omega=1.0)
    packet = PacketSpec(center=-8, width=2.5)
    sweep = reflectivity_sweep(cfg, [1.0], packet, periods=4, steps_per_period=256)
    traj = evolve(
        cfg, gaussian_packet(packet, 41), 4 * cfg.drive.period, steps_per_period=256
    )
    direct = reflectivity(traj, traj.times[-1])
    assert len(sweep) == 1
    assert sweep[0].r == pytest.approx(direct.r, abs=1e-14)


def test_ipr_map_shapes_and_monotone_mode_order():
    cfg = paper_defect_profile(41, 0.3, 0.21, 1.0, omega=1.0)
    m = ipr_map(cfg, [1.8, 2.4], steps_per_period=256)
    assert m.ipr.shape == (2, 41)
    assert m.re_eps.shape == (2, 41)
    assert np.all(np.diff(m.re_eps, axis=1) >= -1e-15)
    with pytest.raises(ValueError):
        ipr_map(cfg, [], steps_per_period=256)


def test_decay_sweep_reports_points_and_skips_missing():
    cfg = paper_defect_profile(101, 0.3, 0.21, 1.0, gamma_norm=2.4308, omega=1.0)
    points = decay_sweep(cfg, "gamma", [1.0], steps_per_period=512)
    assert len(points) == 1 and points[0].value == 1.0
    assert points[0].p > 0
    # a lossless chain never hosts a dark BIC: every grid point is skipped
    lossless = uniform_profile(41, 0.3, gamma_norm=1.8, omega=1.0)
    with pytest.warns(UserWarning, match="skipping"):
        empty = decay_sweep(lossless, "omega", [1.0], steps_per_period=256)
    assert empty == []
    # sweeping gamma needs a loss pattern to rescale
    with pytest.raises(ValueError, match="lossy"):
        decay_sweep(lossless, "gamma", [0.5], steps_per_period=256)


def test_decay_sweep_validation():
    cfg = paper_defect_profile(41, 0.3, 0.21, 1.0, gamma_norm=2.4308)
    with pytest.raises(ValueError):
        decay_sweep(cfg, "gamma", [])
    with pytest.raises(ValueError):
        decay_sweep(cfg, "k", [1.0])


def test_profile_overlap_phase_insensitive():
    a = np.array([1.0, 2.0, 0.5j])
    assert profile_overlap(a, np.exp(1j * 0.7) * a) == pytest.approx(1.0, abs=1e-13)
    b = np.array([1.0, 0.0, 0.0])
    c = np.array([0.0, 1.0, 0.0])
    assert profile_overlap(b, c) == pytest.approx(0.0, abs=1e-13)


def test_dark_bic_evolution_report():
    cfg = paper_defect_profile(101, 0.3, 0.21, 1.0, gamma_norm=2.4308, omega=1.0)
    rep = dark_bic_evolution(cfg, 2.0, steps_per_period=1024, samples_per_period=16)
    assert 0.9 < rep.overlap <= 1.0 + 1e-12
    assert rep.p_final > 0
    assert rep.lossy_population < 1e-2
    assert len(rep.period_norms) >= 2
    # norm-leak identity on the run
    drop = rep.trajectory.initial_norm - np.sum(np.abs(rep.trajectory.states[-1]) ** 2)
    assert abs(drop - rep.p_final) < 1e-8


def test_nonlinear_stability_u_zero_matches_linear_dark_decay():
    cfg = paper_defect_profile(
        101, 0.3, 0.21, 1.0, gamma_norm=2.4308, omega=1.0, u=1.0
    )
    from floquet_bic.lattice import with_nonlinearity_strength

    pts = nonlinear_stability(cfg, [0.0], horizon_periods=1.0, steps_per_period=1024)
    rep = dark_bic_evolution(with_nonlinearity_strength(cfg, 0.0), 1.0, steps_per_period=1024)
    # u=0 reduces to the linear dark-BIC run (the dark state comes from the
    # linear spectrum in both paths)
    assert pts[0].p == pytest.approx(rep.p_final, abs=1e-12)
    assert pts[0].overlap == pytest.approx(rep.overlap, abs=1e-12)


def test_ipr_map_structure_with_and_without_loss():
    # lossless: localized interior modes only near the band collapse;
    # dissipative: a high-IPR interior band across the whole drive range;
    # near the collapse, bright stripes at the extreme mode indices (BOCs)
    from floquet_bic.lattice import with_loss_strength

    j0_zero = 2.4048255576957724
    grid = [1.6, 1.8, j0_zero, 2.8, 3.2]
    base = paper_defect_profile(101, 0.3, 0.21, 1.0, omega=1.0)

    def interior_bound_count(m, i):
        interior = slice(10, 91)  # away from the spectral edges
        return int(np.sum(m.ipr[i, interior] >= 0.1))

    lossless = ipr_map(with_loss_strength(base, 0.0), grid, steps_per_period=1024)
    counts0 = [interior_bound_count(lossless, i) for i in range(len(grid))]
    assert counts0[2] > 0  # collapse point hosts localized interior modes
    assert counts0[0] == counts0[1] == counts0[3] == counts0[4] == 0

    lossy = ipr_map(base, grid, steps_per_period=1024)
    counts1 = [interior_bound_count(lossy, i) for i in range(len(grid))]
    assert counts1[1] > 0 and counts1[2] > 0  # BICs well away from collapse
    assert sum(c > 0 for c in counts1) > 2

    # BOC stripes at the top/bottom mode indices near the collapse
    edges = np.concatenate([lossy.ipr[2, :8], lossy.ipr[2, -8:]])
    assert np.sum(edges >= 0.1) >= 4

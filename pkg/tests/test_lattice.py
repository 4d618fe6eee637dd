"""Lattice construction, parameter profiles, and Hamiltonian structure."""

import numpy as np
import pytest

from floquet_bic.lattice import (
    LatticeConfig,
    explicit_profile,
    hamiltonian_at,
    multimode_profile,
    paper_defect_profile,
    rotating_hamiltonian_at,
    site_indices,
    uniform_profile,
    with_drive,
    with_loss_strength,
)


def test_uniform_quarter_period_diagonal_vanishes():
    # cos(omega * T/4) = 0, so the drive term drops out exactly
    cfg = uniform_profile(11, 0.3, gamma_norm=2.0, omega=1.0)
    T = cfg.drive.period
    H = hamiltonian_at(cfg, T / 4)
    assert np.allclose(np.diag(H), 0.0, atol=1e-12)
    assert np.allclose(np.diag(H, 1), 0.3)


def test_paper_profile_diagonal_at_t0():
    cfg = paper_defect_profile(101, 0.3, 0.21, 1.0, f0=0.5, omega=1.0)
    H = hamiltonian_at(cfg, 0.0)
    off = cfg.site_offset
    assert H[off + 1, off + 1] == pytest.approx(0.5 * 1.0 - 1j * 1.0)
    assert H[off - 1, off - 1] == pytest.approx(-0.5 * 1.0 - 1j * 1.0)
    # loss only at n = +-1
    gam = -np.diag(H).imag
    expected = np.zeros(101)
    expected[off - 1] = expected[off + 1] = 1.0
    assert np.allclose(gam, expected)


def test_static_hermitian_limit():
    cfg = uniform_profile(9, 0.4, f0=0.0, omega=2.0)
    for t in (0.0, 0.37, 5.1):
        H = hamiltonian_at(cfg, t)
        assert np.allclose(H, H.conj().T)
        assert np.allclose(H.imag, 0.0)


def test_loss_part_anti_hermitian_invariant():
    cfg = paper_defect_profile(31, 0.3, 0.21, 2.0, gamma_norm=1.7, omega=1.3)
    for t in (0.0, 0.21, 1.9):
        H = hamiltonian_at(cfg, t)
        Hh = H + 1j * np.diag(cfg.loss)
        assert np.max(np.abs(Hh - Hh.conj().T)) < 1e-14


def test_drive_periodicity():
    cfg = paper_defect_profile(21, 0.3, 0.21, 1.0, gamma_norm=2.4, omega=0.7)
    T = cfg.drive.period
    for t in (0.0, 0.3, 2.11):
        assert np.allclose(hamiltonian_at(cfg, t), hamiltonian_at(cfg, t + T), atol=1e-12)
        assert np.allclose(
            rotating_hamiltonian_at(cfg, t), rotating_hamiltonian_at(cfg, t + T), atol=1e-12
        )


def test_paper_defect_profile_layout():
    cfg = paper_defect_profile(101, 0.3, 0.21, 1.0)
    off = cfg.site_offset
    n_bond = np.arange(100) - off
    g_bonds = (n_bond >= -3) & (n_bond <= 2)
    assert np.all(cfg.hopping[g_bonds] == 0.21)
    assert np.all(cfg.hopping[~g_bonds] == 0.3)
    lossy = np.flatnonzero(cfg.loss) - off
    assert list(lossy) == [-1, 1]


def test_paper_defect_uniform_limit():
    cfg = paper_defect_profile(101, 0.3, 0.3, 0.0)
    assert np.all(cfg.hopping == 0.3)
    assert np.all(cfg.loss == 0.0)


def test_smallest_legal_profile():
    cfg = paper_defect_profile(9, 0.3, 0.21, 0.5)
    assert cfg.n_sites == 9
    assert list(site_indices(9)) == list(range(-4, 5))
    with pytest.raises(ValueError):
        paper_defect_profile(7, 0.3, 0.21, 0.5)


def test_multimode_matches_paper_profile_at_m3():
    a = paper_defect_profile(101, 0.3, 0.21, 1.0, gamma_norm=2.4, omega=1.0, u=0.5)
    b = multimode_profile(101, 3, 0.3, 0.21, 1.0, gamma_norm=2.4, omega=1.0, u=0.5)
    assert np.array_equal(a.hopping, b.hopping)
    assert np.array_equal(a.loss, b.loss)
    assert np.array_equal(a.nonlinearity, b.nonlinearity)
    assert a.drive_amplitude == b.drive_amplitude


@pytest.mark.parametrize(
    "M, lossy_sites",
    [(4, [-2, 0, 2]), (5, [-3, -1, 1, 3])],
)
def test_multimode_loss_positions(M, lossy_sites):
    cfg = multimode_profile(101, M, 0.3, 0.21, 1.0)
    off = cfg.site_offset
    assert list(np.flatnonzero(cfg.loss) - off) == lossy_sites
    n_bond = np.arange(100) - off
    g_bonds = (n_bond >= -M) & (n_bond <= M - 1)
    assert np.all(cfg.hopping[g_bonds] == 0.21)
    assert np.all(cfg.hopping[~g_bonds] == 0.3)


def test_multimode_rejects_oversized_m():
    with pytest.raises(ValueError):
        multimode_profile(9, 4, 0.3, 0.21, 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        LatticeConfig(10, np.ones(9), np.zeros(10), 0.0, 1.0)  # even N
    with pytest.raises(ValueError):
        LatticeConfig(9, np.ones(9), np.zeros(9), 0.0, 1.0)  # bad hopping length
    with pytest.raises(ValueError):
        explicit_profile(np.ones(8), -np.ones(9))  # gain is not allowed
    with pytest.raises(ValueError):
        uniform_profile(9, 0.3, omega=-1.0)


def test_config_immutable():
    cfg = uniform_profile(9, 0.3)
    with pytest.raises(Exception):
        cfg.hopping[0] = 1.0
    with pytest.raises(Exception):
        cfg.n_sites = 11


def test_with_drive_fixed_gamma_norm():
    cfg = paper_defect_profile(21, 0.3, 0.21, 1.0, gamma_norm=2.4, omega=1.0)
    c2 = with_drive(cfg, gamma_norm=2.4, omega=5.0)
    assert c2.drive.gamma_norm == pytest.approx(2.4)
    assert c2.drive_amplitude == pytest.approx(2.4 * 5.0)


def test_with_loss_strength_preserves_pattern():
    cfg = multimode_profile(31, 4, 0.3, 0.21, 0.7)
    c2 = with_loss_strength(cfg, 3.0)
    assert np.array_equal(np.flatnonzero(c2.loss), np.flatnonzero(cfg.loss))
    assert set(c2.loss[c2.loss > 0]) == {3.0}
    assert np.all(with_loss_strength(cfg, 0.0).loss == 0.0)
    with pytest.raises(ValueError, match="lossy"):
        with_loss_strength(uniform_profile(9, 0.3), 1.0)

"""Eigenmode extraction, pairing, and the planar closed forms."""

import numpy as np
import pytest

from rototrap import (
    DefectiveMatrix,
    DegenerateModeVector,
    ModeVector,
    UnstableConfig,
    char_poly_coeffs,
    eigenmodes,
    krein_sign,
    make_config,
    planar_frequencies,
    planar_mode_vector,
    planar_trap,
    select_positive_signature_modes,
    solve_cubic,
    symplectic_form,
    symplectic_normalize,
)

from conftest import V123, fig1_config, fig2_config, random_config


# -- eigenmodes --------------------------------------------------------------

def test_static_trap_spectrum_and_vectors():
    cfg = make_config(V123, [0.0, 0.0, 1.0], 0.0)
    ms = eigenmodes(cfg.dynamics_matrix)
    expected = sorted([1.0, -1.0, np.sqrt(2), -np.sqrt(2), np.sqrt(3), -np.sqrt(3)])
    assert np.allclose(sorted(ms.omegas.real), expected, atol=1e-9)
    assert np.allclose(ms.omegas.imag, 0.0, atol=1e-9)
    # uncoupled oscillators: each eigenvector lives on one axis and its momentum
    for mv in ms:
        support = np.flatnonzero(np.abs(mv.xbar) > 1e-9)
        assert len(support) == 2
        assert support[1] - support[0] == 3


def test_eigenmodes_residual_and_normalization(rng):
    cfg = random_config(rng)
    m = cfg.dynamics_matrix
    for mv in eigenmodes(m):
        res = np.linalg.norm(m @ mv.xbar - 1j * mv.omega * mv.xbar)
        assert res < 1e-9 * np.linalg.norm(mv.xbar) * max(1.0, np.linalg.norm(m))
        big = mv.xbar[np.argmax(np.abs(mv.xbar))]
        assert big == pytest.approx(1.0, abs=1e-12)


def test_frequencies_pair_and_sum_to_zero(rng):
    for _ in range(20):
        cfg = random_config(rng)
        try:
            ms = eigenmodes(cfg.dynamics_matrix)
        except DefectiveMatrix:
            continue
        assert abs(np.sum(ms.omegas)) < 1e-9
        for i, j in ms.pairs:
            assert abs(ms[i].omega + ms[j].omega) < 1e-8 * (1.0 + abs(ms[i].omega))


def test_omega_squared_matches_chi_roots(rng):
    for _ in range(20):
        cfg = random_config(rng)
        coeffs = char_poly_coeffs(cfg)
        chi = np.array(list(solve_cubic(coeffs)))
        try:
            ms = eigenmodes(cfg.dynamics_matrix)
        except DefectiveMatrix:
            continue
        sq = np.array([ms[i].omega ** 2 for i, _ in ms.pairs])
        scale = 1.0 + np.max(np.abs(chi))
        chi_s = np.array(sorted(chi, key=lambda z: (round(z.real, 7), z.imag)))
        sq_s = np.array(sorted(sq, key=lambda z: (round(z.real, 7), z.imag)))
        assert np.allclose(chi_s, sq_s, atol=1e-8 * scale)


def test_defective_matrix_raises():
    # free particle: double zero eigenvalue with a single eigenvector
    with pytest.raises(DefectiveMatrix):
        eigenmodes(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_mode_set_json_layout():
    ms = eigenmodes(fig1_config(1.0).dynamics_matrix)
    obj = ms.to_json_obj()
    assert len(obj) == 6
    for entry in obj:
        assert set(entry) == {"omega_re", "omega_im", "xbar"}
        assert len(entry["xbar"]) == 6
        assert set(entry["xbar"][0]) == {"re", "im"}


# -- symplectic sign selection -----------------------------------------------

def test_krein_signs_split_pairs():
    ms = eigenmodes(fig1_config(1.0).dynamics_matrix)
    for i, j in ms.pairs:
        si, sj = krein_sign(ms[i]), krein_sign(ms[j])
        assert si * sj < 0


def test_symplectic_normalize_unit_product():
    ms = eigenmodes(fig1_config(1.0).dynamics_matrix)
    for mv, _ in select_positive_signature_modes(ms):
        unit = symplectic_normalize(mv)
        assert krein_sign(unit) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        neg = ModeVector(ms[0].omega, np.conj(ms[0].xbar))
        sign = krein_sign(neg)
        symplectic_normalize(neg if sign < 0 else ms[0])


def test_select_positive_signature_modes_stable():
    ms = eigenmodes(fig1_config(1.0).dynamics_matrix)
    sel = select_positive_signature_modes(ms)
    assert len(sel) == 3
    mags = [abs(mv.omega) for mv, _ in sel]
    assert mags == sorted(mags)
    assert all(s > 0 for _, s in sel)


def test_select_positive_signature_modes_unstable():
    # inside the exponential window a pair loses its sign split
    ms = eigenmodes(fig2_config(1.2).dynamics_matrix)
    with pytest.raises(UnstableConfig):
        select_positive_signature_modes(ms)


def test_symplectic_form_layout():
    j = symplectic_form(2)
    assert np.allclose(j, [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    assert np.allclose(symplectic_form(3) @ symplectic_form(3), -np.eye(6))


# -- planar closed forms -----------------------------------------------------

def test_planar_frequencies_static_limit():
    pf = planar_frequencies(1.0, 2.0, 0.0)
    assert pf.omega_plus_sq == pytest.approx(2.0, abs=1e-12)
    assert pf.omega_minus_sq == pytest.approx(1.0, abs=1e-12)


def test_planar_frequencies_benchmark():
    pf = planar_frequencies(1.0, 2.0, 0.5)
    s = np.sqrt(7.0)
    assert pf.omega_plus_sq == pytest.approx((3.5 + s) / 2.0, abs=1e-12)
    assert pf.omega_minus_sq == pytest.approx((3.5 - s) / 2.0, abs=1e-12)
    assert pf.omega_plus_sq == pytest.approx(3.072876, abs=1e-6)
    assert pf.omega_minus_sq == pytest.approx(0.427124, abs=1e-6)


def test_planar_frequencies_match_planar_eigenmodes(rng):
    for _ in range(500):
        vx, vy = rng.uniform(0.1, 5.0, size=2)
        om = rng.uniform(0.0, 3.0)
        pf = planar_frequencies(vx, vy, om)
        try:
            ms = eigenmodes(planar_trap(vx, vy, om).dynamics_matrix)
        except DefectiveMatrix:
            continue
        sq = sorted(np.real(ms.omegas ** 2))
        scale = 1.0 + abs(pf.omega_plus_sq)
        assert abs(sq[0] - pf.omega_minus_sq) < 1e-9 * scale
        assert abs(sq[-1] - pf.omega_plus_sq) < 1e-9 * scale


def test_planar_frequencies_reject_bad_potential():
    with pytest.raises(ValueError):
        planar_frequencies(-1.0, 2.0, 0.5)


def test_planar_mode_vector_benchmark():
    w = np.sqrt(planar_frequencies(1.0, 2.0, 0.5).omega_minus_sq)
    mv = planar_mode_vector(w, 1.0, 0.5)
    raw = np.array([0.653546j, 0.322876, -0.588562, 0.537784j])
    # parallel up to the deterministic normalization
    ratio = mv.xbar / raw
    assert np.allclose(ratio, ratio[0], atol=1e-5)
    # first equation of motion: i w x = Omega y + p_x
    x, y, px, _ = raw
    assert 1j * w * x == pytest.approx(0.5 * y + px, abs=1e-5)
    assert (0.5 * y + px).real == pytest.approx(-0.427124, abs=1e-5)


def test_planar_mode_vector_parity():
    w = np.sqrt(planar_frequencies(1.0, 2.0, 0.5).omega_minus_sq)
    plus = planar_mode_vector(w, 1.0, 0.5)
    minus = planar_mode_vector(-w, 1.0, 0.5)
    # x and p_y flip sign under w -> -w, y and p_x do not; compare the
    # normalization-free component ratios
    flipped = plus.xbar * np.array([-1.0, 1.0, 1.0, -1.0])
    ratio = minus.xbar / flipped
    assert np.allclose(ratio, ratio[0], atol=1e-10)


def test_planar_mode_vector_satisfies_eigenproblem(rng):
    for _ in range(50):
        vx, vy = rng.uniform(0.1, 5.0, size=2)
        om = rng.uniform(0.05, 3.0)
        m4 = planar_trap(vx, vy, om).dynamics_matrix
        pf = planar_frequencies(vx, vy, om)
        for sq in pf:
            w = np.sqrt(complex(sq))
            mv = planar_mode_vector(w, vx, om)
            res = np.linalg.norm(m4 @ mv.xbar - 1j * w * mv.xbar)
            assert res < 1e-9 * np.linalg.norm(mv.xbar) * max(1.0, np.linalg.norm(m4))


def test_planar_mode_vector_degenerate():
    with pytest.raises(DegenerateModeVector):
        planar_mode_vector(1.0, 1.0, 0.0)

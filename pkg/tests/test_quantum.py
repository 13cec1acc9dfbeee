"""Riccati evolution, stationary Gaussian states, and Wigner diagnostics."""

import numpy as np
import pytest

from rototrap import (
    ComplexKappa,
    GaussianState,
    InInstabilityRegion,
    ModeSet,
    ModeVector,
    NoValidRoot,
    NotNormalizable,
    NotSymmetric,
    RiccatiTrajectory,
    SingularD,
    StepTooLarge,
    eigenmodes,
    evolve_riccati,
    line_trap,
    make_config,
    normalization_constant,
    planar_stationary_K,
    planar_trap,
    region_map,
    riccati_rhs,
    select_positive_signature_modes,
    stationary_K_from_modes,
    wigner_decompose_into_invariants,
    wigner_form,
)

from conftest import V123, fig2_config, fig3_config, random_config, sample_region_omegas


SQRT_V = np.diag([1.0, np.sqrt(2.0), np.sqrt(3.0)])


# -- Riccati right side ------------------------------------------------------

def test_rhs_zero_for_static_ground_state():
    cfg = make_config(V123, [0.0, 0.0, 1.0], 0.0)
    assert np.max(np.abs(riccati_rhs(SQRT_V, cfg))) < 1e-12


def test_rhs_of_diagonal_ansatz_is_commutator():
    # under rotation the static ground state fails exactly by -[W, K]
    cfg = fig2_config(0.7)
    w = cfg.omega_matrix
    expected = -(w @ SQRT_V - SQRT_V @ w)
    assert np.allclose(riccati_rhs(SQRT_V, cfg), expected, atol=1e-12)


def test_rhs_zero_for_planar_embedding():
    cfg = fig2_config(0.5)
    k = planar_stationary_K(1.0, 2.0, 3.0, 0.5).matrix3()
    assert np.max(np.abs(riccati_rhs(k, cfg))) < 1e-10


def test_rhs_rejects_asymmetric_k():
    cfg = fig2_config(0.5)
    k = np.array([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], dtype=complex)
    with pytest.raises(NotSymmetric):
        riccati_rhs(k, cfg)


# -- evolution ---------------------------------------------------------------

def test_isotropic_ground_state_is_stationary():
    cfg = make_config(np.eye(3), [0.0, 0.0, 1.0], 0.0)
    traj = evolve_riccati(np.eye(3, dtype=complex), cfg, 5.0, 1e-2)
    assert np.max(np.abs(traj.ks - np.eye(3))) < 1e-10


def test_breathing_mode_matches_scalar_solution():
    # 1D, V=1: k(t) = (k0 cos t + i sin t) / (cos t + i k0 sin t)
    trap = line_trap(1.0)
    k0 = 2.0
    traj = evolve_riccati(np.array([[k0 + 0j]]), trap, np.pi, 1e-3)
    t = traj.times
    exact = (k0 * np.cos(t) + 1j * np.sin(t)) / (np.cos(t) + 1j * k0 * np.sin(t))
    assert np.max(np.abs(traj.ks[:, 0, 0] - exact)) < 1e-8
    # breathing at twice the trap frequency: period pi
    assert abs(traj.final_k[0, 0] - k0) < 1e-8


def test_direct_and_linearized_agree(rng):
    for _ in range(3):
        cfg = random_config(rng, omega=0.3)
        k0 = stationary_K_from_modes(cfg).k + 0.1 * np.eye(3)
        a = evolve_riccati(k0, cfg, 20.0, 4e-3, method="direct")
        b = evolve_riccati(k0, cfg, 20.0, 4e-3, method="linearized")
        assert np.max(np.abs(a.ks - b.ks)) < 1e-7


def test_evolution_preserves_symmetry(rng):
    cfg = random_config(rng, omega=0.4)
    k0 = stationary_K_from_modes(cfg).k + 0.05j * np.eye(3)
    for method in ("direct", "linearized"):
        traj = evolve_riccati(k0, cfg, 10.0, 5e-3, method=method)
        asym = np.max(np.abs(traj.ks - np.transpose(traj.ks, (0, 2, 1))))
        assert asym < 1e-9


def test_stationary_state_stays_put():
    cfg = fig3_config(0.5)
    k0 = stationary_K_from_modes(cfg).k
    traj = evolve_riccati(k0, cfg, 20.0, 5e-3)
    assert np.max(np.abs(traj.ks - k0)) < 1e-6


def test_evolve_riccati_guards():
    cfg = fig2_config(0.5)
    with pytest.raises(StepTooLarge):
        evolve_riccati(np.eye(3, dtype=complex), cfg, 1.0, 1.0)
    with pytest.raises(ValueError):
        evolve_riccati(np.eye(3, dtype=complex), cfg, 1.0, -0.1)
    with pytest.raises(ValueError):
        evolve_riccati(np.eye(3, dtype=complex), cfg, 1.0, 1e-2, method="magic")


def test_linearized_caustic_raises():
    # K0 = 0 is a classical (non-normalizable) start: D(t) = diag(cos t, cos 2t)
    # passes through zero and the reconstruction must refuse
    trap = planar_trap(1.0, 4.0, 0.0)
    with pytest.raises(SingularD):
        evolve_riccati(
            np.zeros((2, 2), dtype=complex),
            trap,
            np.pi / 2.0 * 1.01,
            (np.pi / 2.0) / 1000.0,
            method="linearized",
        )


def test_riccati_trajectory_csv_layout():
    cfg = fig2_config(0.5)
    traj = evolve_riccati(SQRT_V.astype(complex), cfg, 0.05, 1e-2)
    lines = traj.to_csv().strip().split("\n")
    assert lines[0] == (
        "t,k11_re,k11_im,k12_re,k12_im,k13_re,k13_im,"
        "k22_re,k22_im,k23_re,k23_im,k33_re,k33_im"
    )
    assert len(lines) == len(traj) + 1
    assert len(lines[1].split(",")) == 13


# -- stationary states from modes --------------------------------------------

def test_stationary_static_trap():
    cfg = make_config(V123, [0.0, 0.0, 1.0], 0.0)
    state = stationary_K_from_modes(cfg)
    assert np.allclose(state.k, SQRT_V, atol=1e-10)


def test_stationary_matches_planar_closed_form_s1():
    cfg = fig2_config(0.5)
    state = stationary_K_from_modes(cfg)
    assert np.max(np.abs(state.k - planar_stationary_K(1.0, 2.0, 3.0, 0.5).matrix3())) < 1e-10


def test_stationary_matches_planar_closed_form_s2():
    cfg = fig2_config(2.0)
    state = stationary_K_from_modes(cfg)
    assert np.max(np.abs(state.k - planar_stationary_K(1.0, 2.0, 3.0, 2.0).matrix3())) < 1e-10


def test_stationary_riccati_residual_in_all_stable_regions(rng):
    cfg = fig3_config(0.5)
    for region in ("S1", "S2", "S3"):
        for om in sample_region_omegas(cfg, region, 2, rng):
            c = cfg.with_omega(om)
            state = stationary_K_from_modes(c)
            res = np.max(np.abs(riccati_rhs(state.k, c)))
            assert res < 1e-9 * max(1.0, np.max(np.abs(state.k)))
            assert state.re_min_eig() > 0


def test_stationary_rejects_instability_region():
    with pytest.raises(InInstabilityRegion):
        stationary_K_from_modes(fig2_config(1.2))


def test_stationary_invariant_under_mode_rescaling(rng):
    cfg = fig3_config(0.5)
    base = stationary_K_from_modes(cfg)
    ms = eigenmodes(cfg.dynamics_matrix)
    scales = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    doctored = ModeSet(
        [
            ModeVector(mv.omega, mv.xbar * (s if abs(s) > 0.1 else 1.0), normalize=False)
            for mv, s in zip(ms.modes, scales)
        ],
        ms.pairs,
    )
    other = stationary_K_from_modes(cfg, modes=doctored)
    assert np.max(np.abs(other.k - base.k)) < 1e-10


def test_stability_correspondence_across_regions():
    # quantum construction succeeds exactly on the classically stable set
    cfg = fig3_config(0.5)
    rmap = region_map(cfg)
    for om in np.linspace(0.05, 3.4, 28):
        lab = rmap.locate(om)
        if lab.boundary:
            continue
        if lab.label.startswith("S"):
            state = stationary_K_from_modes(cfg.with_omega(om))
            assert state.re_min_eig() > 0
        else:
            with pytest.raises(InInstabilityRegion):
                stationary_K_from_modes(cfg.with_omega(om))


def test_wrong_pair_selection_degenerates():
    # assembling from a mode and its own sign partner leaves Re K with a
    # zero eigenvalue, which is why that choice is rejected
    cfg = fig3_config(0.5)
    ms = eigenmodes(cfg.dynamics_matrix)
    sel = [mv for mv, _ in select_positive_signature_modes(ms)]
    partner = ModeVector(-sel[0].omega, np.conj(sel[0].xbar), normalize=False)
    cols = [sel[0], partner, sel[1]]
    dmat = np.column_stack([mv.xbar[:3] for mv in cols])
    nmat = np.column_stack([mv.xbar[3:] for mv in cols])
    k = -1j * (nmat @ np.linalg.inv(dmat))
    eigs = np.linalg.eigvalsh(0.5 * np.real(k + k.T))
    assert np.min(np.abs(eigs)) < 1e-8
    assert np.max(np.abs(eigs)) > 0.1


# -- planar closed form ------------------------------------------------------

def test_planar_static_limit():
    psk = planar_stationary_K(1.0, 2.0, 3.0, 0.0)
    assert psk.alpha == pytest.approx(1.0, abs=1e-12)
    assert psk.beta == pytest.approx(np.sqrt(2.0), abs=1e-12)
    assert psk.gamma == 0.0
    assert psk.vz == 3.0


def test_planar_benchmark_s1():
    psk = planar_stationary_K(1.0, 2.0, 3.0, 0.5)
    assert psk.gamma == pytest.approx(-0.104356076261, abs=1e-9)
    assert psk.alpha == pytest.approx(0.952120850728, abs=1e-9)
    assert psk.beta == pytest.approx(1.454388623069, abs=1e-9)
    assert psk.kappa == pytest.approx(-0.654653670708, abs=1e-9)
    # unsquared constraint holds with both sides equal
    lhs = psk.alpha * (0.5 - psk.gamma)
    rhs = psk.beta * (0.5 + psk.gamma)
    assert lhs == pytest.approx(rhs, abs=1e-10)
    assert lhs == pytest.approx(0.575420, abs=1e-5)


def test_planar_benchmark_s2():
    psk = planar_stationary_K(1.0, 2.0, 3.0, 2.0)
    assert psk.gamma == pytest.approx(0.202041029, abs=1e-8)
    assert psk.alpha == pytest.approx(1.359773765, abs=1e-8)
    assert psk.beta == pytest.approx(1.110250630, abs=1e-8)
    assert psk.kappa == pytest.approx(-np.sqrt(1.5), abs=1e-8)


def test_planar_matrix_embedding():
    psk = planar_stationary_K(1.0, 2.0, 3.0, 0.5)
    k2 = psk.matrix2()
    assert k2[0, 1] == k2[1, 0] == 1j * psk.gamma
    k3 = psk.matrix3()
    assert k3[2, 2] == pytest.approx(np.sqrt(3.0))
    assert np.max(np.abs(k3[2, :2])) == 0.0


def test_planar_inside_window_complex_kappa():
    with pytest.raises(ComplexKappa):
        planar_stationary_K(1.0, 2.0, 3.0, 1.2)


def test_planar_degenerate_no_valid_root():
    # symmetric trap exactly at its collapsed window edge
    with pytest.raises(NoValidRoot):
        planar_stationary_K(1.0, 1.0, 1.0, 1.0)


def test_planar_rejects_bad_inputs():
    with pytest.raises(ValueError):
        planar_stationary_K(-1.0, 2.0, 3.0, 0.5)
    with pytest.raises(ValueError):
        planar_stationary_K(1.0, 2.0, 3.0, -0.5)


# -- normalization and Wigner form -------------------------------------------

def test_normalization_examples():
    assert normalization_constant(np.eye(3, dtype=complex)) == pytest.approx(
        np.pi ** -0.75, abs=1e-12
    )
    expect = np.sqrt(np.sqrt(6.0) / np.pi ** 1.5)
    assert normalization_constant(SQRT_V.astype(complex)) == pytest.approx(
        expect, abs=1e-12
    )
    with pytest.raises(NotNormalizable):
        normalization_constant(np.diag([1.0, -1.0, 1.0]).astype(complex))


def test_wigner_form_isotropic():
    wf = wigner_form(np.eye(2, dtype=complex))
    assert np.allclose(wf.w, 2.0 * np.eye(4), atol=1e-12)
    assert wf.norm_const == pytest.approx(np.pi ** -2)


def test_wigner_form_diagonal():
    wf = wigner_form(np.diag([1.0, np.sqrt(2.0)]).astype(complex))
    assert np.allclose(wf.w[2:, 2:], 2.0 * np.diag([1.0, 1.0 / np.sqrt(2.0)]), atol=1e-12)
    assert np.allclose(wf.w[:2, :2], 2.0 * np.diag([1.0, np.sqrt(2.0)]), atol=1e-12)
    assert np.allclose(wf.w[:2, 2:], 0.0, atol=1e-12)


def test_wigner_det_counts_phase_space_cells(rng):
    for _ in range(10):
        cfg = random_config(rng, omega=0.3)
        k = stationary_K_from_modes(cfg).k
        wf = wigner_form(k)
        d = k.shape[0]
        assert np.linalg.det(wf.w) == pytest.approx(2.0 ** (2 * d), rel=1e-9)
        assert np.min(np.linalg.eigvalsh(wf.w)) > 0


def test_wigner_form_rejects_unnormalizable():
    with pytest.raises(NotNormalizable):
        wigner_form(np.diag([1.0, -0.3]).astype(complex))


# -- Wigner decomposition ----------------------------------------------------

def test_wigner_decompose_planar_static():
    trap = planar_trap(1.0, 2.0, 0.0)
    k = np.diag([1.0, np.sqrt(2.0)]).astype(complex)
    dec = wigner_decompose_into_invariants(wigner_form(k), trap)
    assert dec.residual < 1e-10
    assert dec.coefficients[0] == pytest.approx(4.0 - np.sqrt(2.0), abs=1e-9)
    assert dec.coefficients[1] == pytest.approx(np.sqrt(2.0) - 2.0, abs=1e-9)
    assert abs(dec.coefficients[0]) == pytest.approx(2.585786, abs=1e-6)
    assert abs(dec.coefficients[1]) == pytest.approx(0.585786, abs=1e-6)
    # closed forms agree with the least-squares route, including signs
    assert dec.closed_form == pytest.approx(dec.coefficients, abs=1e-9)


def test_wigner_decompose_planar_rotating():
    trap = planar_trap(1.0, 2.0, 0.5)
    psk = planar_stationary_K(1.0, 2.0, 1.0, 0.5)
    dec = wigner_decompose_into_invariants(wigner_form(psk.matrix2()), trap)
    assert dec.residual < 1e-8
    assert dec.closed_form == pytest.approx(dec.coefficients, abs=1e-8)


def test_wigner_decompose_isotropic_skips_closed_form():
    trap = planar_trap(1.5, 1.5, 0.0)
    k = np.sqrt(1.5) * np.eye(2, dtype=complex)
    dec = wigner_decompose_into_invariants(wigner_form(k), trap)
    assert dec.residual < 1e-8
    assert dec.closed_form is None


def test_wigner_decompose_3d_span():
    cfg = fig3_config(0.5)
    k = stationary_K_from_modes(cfg).k
    dec = wigner_decompose_into_invariants(wigner_form(k), cfg)
    assert dec.residual < 1e-6
    assert len(dec.coefficients) == 3
    assert dec.closed_form is None


# -- GaussianState container -------------------------------------------------

def test_gaussian_state_json_roundtrip():
    cfg = fig2_config(0.5)
    state = stationary_K_from_modes(cfg)
    obj = state.to_json_obj()
    back = GaussianState.from_json_obj(obj)
    assert np.allclose(back.k, state.k, atol=1e-15)
    assert back.dim == 3


def test_gaussian_state_requires_symmetry():
    with pytest.raises(NotSymmetric):
        GaussianState(np.array([[1.0, 0.2], [0.0, 1.0]], dtype=complex))

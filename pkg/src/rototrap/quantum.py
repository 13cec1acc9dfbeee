"""Gaussian states of the rotating trap.

A Gaussian wave function psi = C exp(-r.K.r / 2) stays Gaussian under the
quadratic Hamiltonian; its complex symmetric matrix K obeys the matrix
Riccati equation (hbar = m = 1, W the rotation block)

    dK/dt = -i K^2 + i V - [W, K],

which linearizes through K = -i N D^{-1} with dD/dt = N - W D and
dN/dt = -V D - W N. Stationary K is assembled from classical normal modes:
stack the position parts of three selected modes into a matrix script-D and
the momentum parts into script-N, then K = -i script-N script-D^{-1}.

Sign convention, load-bearing: modes evolve as exp(+i omega t), so the
eigenvalue problem reads M Xbar = i omega Xbar. The opposite convention
silently flips every sign-selection rule below. Selection takes, from each
+- frequency pair, the member with positive symplectic sign
-i Xbar^dag J Xbar; in the lowest stability region that keeps all three
frequencies positive, above the exponential window the smallest flips
negative, and above the oscillatory window the middle one does. Inside
instability windows no choice makes Re K positive definite, so the
classical and quantum stability regions coincide.
"""

from typing import NamedTuple, Optional, Tuple

import numpy as np

from .errors import (
    ComplexKappa,
    DegenerateFrequencies,
    InInstabilityRegion,
    NearSingular,
    NoValidRoot,
    NotNormalizable,
    NotInSpan,
    NotSymmetric,
    SingularD,
    SingularModeMatrix,
    StepTooLarge,
    UnstableConfig,
)
from .modes import eigenmodes, select_positive_signature_modes
from .numerics import cinv3, fmt17, posdef_min_eig, rk4_integrate

__all__ = [
    "GaussianState",
    "RiccatiTrajectory",
    "PlanarStationaryK",
    "WignerForm",
    "WignerDecomposition",
    "riccati_rhs",
    "evolve_riccati",
    "stationary_K_from_modes",
    "planar_stationary_K",
    "normalization_constant",
    "wigner_form",
    "wigner_decompose_into_invariants",
]


class GaussianState:
    """Complex symmetric K matrix of a Gaussian wave function.

    Symmetry is required on input (within 1e-9 relative, then exactly
    symmetrized); positive definiteness of Re K is what makes the state
    normalizable and is checked by the operations that need it, not here,
    so transient states from evolution can be represented too.
    """

    def __init__(self, k):
        k = np.asarray(k, dtype=complex)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise ValueError("K must be a square matrix")
        asym = float(np.max(np.abs(k - k.T)))
        if asym > 1e-9 * max(1.0, float(np.max(np.abs(k)))):
            raise NotSymmetric(f"K asymmetry {asym:.3e} exceeds tolerance")
        self.k = 0.5 * (k + k.T)
        self.k.setflags(write=False)

    @property
    def dim(self):
        return self.k.shape[0]

    def re_min_eig(self):
        return posdef_min_eig(np.real(self.k))

    def to_json_obj(self):
        return {
            "k": [[{"re": z.real, "im": z.imag} for z in row] for row in self.k]
        }

    @classmethod
    def from_json_obj(cls, obj):
        rows = obj["k"]
        k = np.array(
            [[complex(c["re"], c["im"]) for c in row] for row in rows]
        )
        return cls(k)

    def __repr__(self):
        return f"GaussianState(dim={self.dim})"


def _k_array(k):
    if isinstance(k, GaussianState):
        return k.k
    k = np.asarray(k, dtype=complex)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ValueError("K must be a square matrix")
    return k


def riccati_rhs(k, cfg):
    """dK/dt = -i K^2 + i V - [W, K], symmetrized output.

    For symmetric K the right side is symmetric identically (the
    commutator of antisymmetric with symmetric is symmetric); an asymmetry
    beyond 1e-12 therefore flags a non-symmetric input.
    """
    k = _k_array(k)
    v = cfg.v
    w = cfg.omega_matrix
    out = -1j * (k @ k) + 1j * v - (w @ k - k @ w)
    asym = float(np.max(np.abs(out - out.T)))
    if asym > 1e-12 * max(1.0, float(np.max(np.abs(out)))):
        raise NotSymmetric(f"Riccati right side asymmetric by {asym:.3e}")
    return 0.5 * (out + out.T)


# independent real components of symmetric K, upper triangle row-major
def _triu_indices(d):
    return [(i, j) for i in range(d) for j in range(i, d)]


class RiccatiTrajectory:
    """K(t) along a Riccati evolution, one matrix per accepted step."""

    def __init__(self, times, ks, method):
        self.times = np.asarray(times, dtype=float)
        self.ks = np.asarray(ks, dtype=complex)
        self.method = method

    def __len__(self):
        return len(self.times)

    @property
    def final_k(self):
        return self.ks[-1]

    def to_csv(self):
        d = self.ks.shape[1]
        cols = ["t"]
        for i, j in _triu_indices(d):
            cols += [f"k{i + 1}{j + 1}_re", f"k{i + 1}{j + 1}_im"]
        lines = [",".join(cols)]
        for row in range(len(self.times)):
            vals = [fmt17(self.times[row])]
            for i, j in _triu_indices(d):
                z = self.ks[row, i, j]
                vals += [fmt17(z.real), fmt17(z.imag)]
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"


def evolve_riccati(k0, cfg, t_end, dt, method="direct"):
    """Integrate the Riccati flow by one of two independent routes.

    direct runs RK4 on the Riccati equation itself; linearized runs RK4 on
    the (D, N) pair from D(0) = I, N(0) = i K0 and reconstructs
    K = -i N D^{-1} at every step. The two must agree within 1e-7 over a
    run, which is the standing cross-check on both. Raises SingularD when
    D becomes ill-conditioned (a caustic of the linearized flow) and
    StepTooLarge under the same step bound as forced evolution.
    """
    k0 = _k_array(k0)
    d = k0.shape[0]
    m = cfg.dynamics_matrix
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dt * np.linalg.norm(m, 1) > 0.1:
        raise StepTooLarge(
            f"dt = {dt:.3g} too large for ||M||_1 = {np.linalg.norm(m, 1):.3g}"
        )
    v = cfg.v
    w = cfg.omega_matrix

    if method == "direct":

        def rhs(t, y):
            return riccati_rhs(y, cfg)

        traj = rk4_integrate(rhs, k0, t_end, dt)
        return RiccatiTrajectory(traj.times, traj.states, method)

    if method == "linearized":
        y0 = np.stack([np.eye(d, dtype=complex), 1j * k0])

        def rhs(t, y):
            dd, nn = y[0], y[1]
            return np.stack([nn - w @ dd, -v @ dd - w @ nn])

        traj = rk4_integrate(rhs, y0, t_end, dt)
        ks = np.empty((len(traj), d, d), dtype=complex)
        for i in range(len(traj)):
            dd, nn = traj.states[i]
            try:
                ks[i] = -1j * (nn @ cinv3(dd))
            except NearSingular as exc:
                raise SingularD(
                    f"D singular at t = {traj.times[i]:.6g}: {exc}"
                ) from exc
        return RiccatiTrajectory(traj.times, ks, method)

    raise ValueError(f"method must be 'direct' or 'linearized', got {method!r}")


def stationary_K_from_modes(cfg, modes=None):
    """Stationary Gaussian state assembled from classical normal modes.

    From each +- frequency pair the member with positive symplectic sign is
    selected (see module docstring); position parts form the columns of
    script-D, momentum parts those of script-N, and K = -i script-N
    script-D^{-1}. Mode normalization cancels in the product, so the result
    is scaling-invariant (a precomputed or rescaled mode set may be passed
    in). Succeeds exactly on stable configs; inside instability windows the
    frequencies leave the real axis or the symplectic sign degenerates and
    no positive-definite Re K exists.
    """
    ms = eigenmodes(cfg.dynamics_matrix) if modes is None else modes
    dim = ms[0].dim
    try:
        selected = [mv for mv, _ in select_positive_signature_modes(ms)]
    except UnstableConfig as exc:
        raise InInstabilityRegion(str(exc)) from exc
    absom = [abs(mv.omega) for mv in selected]
    gap_tol = 1e-8 * (1.0 + absom[-1])
    if any(absom[i + 1] - absom[i] < gap_tol for i in range(len(absom) - 1)):
        raise DegenerateFrequencies(
            f"|omega| values {absom} not distinct within {gap_tol:.3g}"
        )
    dmat = np.column_stack([mv.xbar[:dim] for mv in selected])
    nmat = np.column_stack([mv.xbar[dim:] for mv in selected])
    try:
        k = -1j * (nmat @ cinv3(dmat))
    except NearSingular as exc:
        raise SingularModeMatrix(f"mode position matrix singular: {exc}") from exc
    state = GaussianState(k)
    if state.re_min_eig() <= 1e-10:
        raise InInstabilityRegion(
            "selected signs give non-positive Re K: unstable config"
        )
    return state


class PlanarStationaryK(NamedTuple):
    """Closed-form stationary state for rotation about the z principal axis.

    K restricted to the plane is [[alpha, i gamma], [i gamma, beta]] and the
    axial direction stays at sqrt(Vz); kappa = -alpha/beta is the in-plane
    amplitude ratio.
    """

    alpha: float
    beta: float
    gamma: float
    kappa: float
    vz: float

    def matrix2(self):
        return np.array(
            [[self.alpha, 1j * self.gamma], [1j * self.gamma, self.beta]]
        )

    def matrix3(self):
        k = np.zeros((3, 3), dtype=complex)
        k[:2, :2] = self.matrix2()
        k[2, 2] = np.sqrt(self.vz)
        return k


def _planar_gamma_candidates(vx, vy, omega):
    # squared constraint: (Vx-Vy) g^2 - 2 W (Vx+Vy-2W^2) g + W^2 (Vx-Vy) = 0
    if omega == 0.0:
        return [0.0]
    a = vx - vy
    b = -2.0 * omega * (vx + vy - 2.0 * omega * omega)
    c = omega * omega * (vx - vy)
    if a == 0.0:
        if b == 0.0:
            raise NoValidRoot(
                "gamma equation degenerates (symmetric trap at its window edge)"
            )
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise ComplexKappa(
            f"gamma discriminant {disc:.3e} < 0: no real squeezing parameters "
            "(exponential instability window)"
        )
    s = np.sqrt(disc)
    return [(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)]


def planar_stationary_K(vx, vy, vz, omega):
    """Stationary K for z-axis rotation, solved in closed form.

    Squaring the stationarity constraint alpha (W - gamma) = beta
    (W + gamma) gives a quadratic for gamma; both roots are computed,
    alpha and beta are taken as the positive square roots of
    Vx - W^2 + (gamma + W)^2 and Vy - W^2 + (gamma - W)^2, and the
    unsquared constraint decides which root is genuine (squaring admits a
    spurious branch). A complex gamma pair means the rotation rate sits in
    the exponential window (ComplexKappa); real roots that all fail the
    unsquared constraint likewise signal instability (NoValidRoot).
    """
    if vx <= 0 or vy <= 0 or vz <= 0:
        raise ValueError("vx, vy, vz must be positive")
    if omega < 0:
        raise ValueError("omega must be >= 0")
    best = None
    for gamma in _planar_gamma_candidates(vx, vy, omega):
        a2 = vx - omega * omega + (gamma + omega) ** 2
        b2 = vy - omega * omega + (gamma - omega) ** 2
        if a2 <= 0 or b2 <= 0:
            continue
        alpha = float(np.sqrt(a2))
        beta = float(np.sqrt(b2))
        lhs = alpha * (omega - gamma)
        rhs = beta * (omega + gamma)
        scale = max(1.0, abs(lhs), abs(rhs), alpha, beta)
        if abs(lhs - rhs) <= 1e-10 * scale:
            best = PlanarStationaryK(alpha, beta, float(gamma), -alpha / beta, float(vz))
            break
    if best is None:
        raise NoValidRoot(
            "no gamma root satisfies the unsquared constraint: unstable config"
        )
    return best


def normalization_constant(k):
    """C = sqrt(det(Re K / sqrt(pi))) for a normalizable state."""
    k = _k_array(k)
    kr = np.real(k)
    if posdef_min_eig(kr) <= 1e-10:
        raise NotNormalizable("Re K is not positive definite")
    d = k.shape[0]
    return float(np.sqrt(np.linalg.det(kr) / np.pi ** (d / 2.0)))


class WignerForm(NamedTuple):
    """Symmetric matrix of the Wigner exponent, W(X) = M exp(-X.w.X / 2)."""

    w: np.ndarray
    norm_const: float


def wigner_form(k):
    """Phase-space quadratic form of the Gaussian's Wigner function.

    Completing the square in the Fourier transform gives, with
    K = K_R + i K_I,

        w = 2 [[K_R + K_I K_R^{-1} K_I,  K_I K_R^{-1}],
               [K_R^{-1} K_I,            K_R^{-1}   ]],

    in (r, p) ordering, with normalization M = pi^{-d}. The form is
    positive definite with det w = 2^{2d}: a pure Gaussian fills exactly
    one phase-space cell.
    """
    k = _k_array(k)
    kr = np.real(k)
    ki = np.imag(k)
    if posdef_min_eig(kr) <= 1e-10:
        raise NotNormalizable("Re K is not positive definite")
    kri = np.linalg.inv(kr)
    d = k.shape[0]
    w = np.zeros((2 * d, 2 * d))
    w[:d, :d] = kr + ki @ kri @ ki
    w[:d, d:] = ki @ kri
    w[d:, :d] = kri @ ki
    w[d:, d:] = kri
    w = 2.0 * 0.5 * (w + w.T)
    return WignerForm(w, float(np.pi ** (-d)))


class WignerDecomposition(NamedTuple):
    coefficients: Tuple[float, ...]
    residual: float
    closed_form: Optional[Tuple[float, float]]


def wigner_decompose_into_invariants(wf, cfg):
    """Expand the Wigner exponent over the conserved quadratic forms.

    A stationary Wigner function can only depend on constants of motion,
    so its exponent must be a combination of the invariant quadratic
    forms: C1 and C2 in the plane, C1, C2 and a third invariant in 3D. The
    third comes from the completed null-space basis (see the invariants
    module: the closed-form third expression fails its defining equations,
    so the numerically completed invariant is used for span tests).

    Returns least-squares coefficients and the relative residual; in the
    planar case the closed forms

        k1 = 2 (beta Vy - alpha Vx) / (alpha beta (Vy - Vx)),
        k2 = 2 (alpha - beta) / (alpha beta (Vy - Vx))

    are evaluated alongside for comparison (skipped within 1e-8 of the
    symmetric trap where they degenerate to 0/0). The coefficients satisfy
    w = k1 G1 + k2 G2 for the exponent written as exp(-X.w.X / 2); quoting
    the combination without that minus sign flips the overall sign, which
    is the one documented discrepancy against the source expressions.
    """
    from .invariants import build_invariant, completed_third_invariant, quadratic_form

    w = np.asarray(wf.w if isinstance(wf, WignerForm) else wf, dtype=float)
    d = w.shape[0] // 2
    if d == 2:
        invs = [build_invariant("C1", cfg), build_invariant("C2_2D", cfg)]
    else:
        invs = [
            build_invariant("C1", cfg),
            build_invariant("C2_3D", cfg),
            completed_third_invariant(cfg),
        ]
    gs = [quadratic_form(iv) for iv in invs]
    a = np.column_stack([g.reshape(-1) for g in gs])
    coef, *_ = np.linalg.lstsq(a, w.reshape(-1), rcond=None)
    resid = float(
        np.linalg.norm(w.reshape(-1) - a @ coef) / np.linalg.norm(w)
    )
    if resid > 1e-6:
        raise NotInSpan(
            f"Wigner form residual {resid:.3e} outside the invariant span"
        )
    closed = None
    if d == 2:
        vx, vy = float(cfg.v[0, 0]), float(cfg.v[1, 1])
        if abs(vy - vx) >= 1e-8:
            psk = planar_stationary_K(vx, vy, 1.0, cfg.omega)
            al, be = psk.alpha, psk.beta
            closed = (
                2.0 * (be * vy - al * vx) / (al * be * (vy - vx)),
                2.0 * (al - be) / (al * be * (vy - vx)),
            )
    return WignerDecomposition(tuple(float(x) for x in coef), resid, closed)

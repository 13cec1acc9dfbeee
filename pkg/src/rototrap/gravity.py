"""Gravity in the corotating frame and the resonances it drives.

A constant lab-frame acceleration g splits into a part along the rotation
axis, which is static in the corotating frame, and a transverse part that
whirls at the rotation rate and acts as a periodic drive,

    g(t) = g_par + g_perp cos(Omega t) - (n x g_perp) sin(Omega t).

Resonances occur where the drive frequency Omega meets a mode frequency,
i.e. on the omega = Omega section of the characteristic polynomial: the
degree-6 terms cancel there and the condition collapses to the biquadratic
D Omega^4 + E Omega^2 + F = 0 with two real roots. Whether a resonance
actually grows depends on which stability region its root falls in, so
reports carry region labels.
"""

from typing import NamedTuple

import numpy as np

from .errors import DegenerateD, InsufficientSpan, StepTooLarge
from .numerics import fmt17, rk4_integrate
from .stability import region_map, solve_cubic
from .trap import char_poly_coeffs

__all__ = [
    "DecomposedGravity",
    "ResonanceCoeffs",
    "ResonanceReport",
    "GrowthReport",
    "decompose_gravity",
    "gravity_in_rotating_frame",
    "resonance_coefficients",
    "resonant_frequencies",
    "classify_resonances",
    "default_forced_dt",
    "forced_evolve",
    "growth_classification",
    "trajectory_to_csv",
]


class DecomposedGravity(NamedTuple):
    g_par: np.ndarray
    g_perp: np.ndarray
    axis: np.ndarray


def decompose_gravity(g, n):
    """Split g into components parallel and orthogonal to the axis n."""
    g = np.asarray(g, dtype=float)
    n = np.asarray(n, dtype=float)
    if g.shape != (3,) or not np.all(np.isfinite(g)):
        raise ValueError("g must be a finite 3-vector")
    nrm = np.linalg.norm(n)
    if abs(nrm - 1.0) > 1e-6:
        raise ValueError(f"axis must be unit length, got |n| = {nrm:.9g}")
    n = n / nrm
    g_par = (g @ n) * n
    return DecomposedGravity(g_par, g - g_par, n)


def gravity_in_rotating_frame(dg, omega, t):
    """The corotating-frame acceleration at time t.

    Equals Re(g_par + (g_perp + i n x g_perp) exp(i Omega t)); the
    transverse part rotates rigidly, so |g(t)| and g(t).n are constants.
    """
    wt = omega * t
    return (
        dg.g_par
        + dg.g_perp * np.cos(wt)
        - np.cross(dg.axis, dg.g_perp) * np.sin(wt)
    )


class ResonanceCoeffs(NamedTuple):
    """Coefficients of the resonance biquadratic D x^2 + E x + F in x = Omega^2."""

    d: float
    e: float
    f: float


def resonance_coefficients(cfg):
    """D = -2(TrV - n.V.n), E as below, F = -DetV.

    E = ((TrV)^2 - TrV^2)/2 + TrV (n.V.n) - n.V^2.n. These are exactly the
    omega = Omega section of the characteristic polynomial: P(Omega) with
    omega set to Omega reduces to D Omega^4 + E Omega^2 + F.
    """
    v = cfg.v
    n = cfg.axis
    tr = float(np.trace(v))
    nvn = float(n @ v @ n)
    nv2n = float(n @ v @ v @ n)
    d = -2.0 * (tr - nvn)
    e = 0.5 * (tr * tr - float(np.trace(v @ v))) + tr * nvn - nv2n
    f = -float(np.linalg.det(v))
    return ResonanceCoeffs(d, e, f)


class ResonanceReport:
    """The two resonant frequencies (as Omega^2) with their region labels."""

    def __init__(self, omega1_sq, omega2_sq, region1=None, region2=None):
        self.omega1_sq = float(omega1_sq)
        self.omega2_sq = float(omega2_sq)
        self.region1 = region1
        self.region2 = region2

    @property
    def omega1(self):
        return float(np.sqrt(max(self.omega1_sq, 0.0)))

    @property
    def omega2(self):
        return float(np.sqrt(max(self.omega2_sq, 0.0)))

    def to_json_obj(self):
        return {
            "omega1_sq": self.omega1_sq,
            "omega2_sq": self.omega2_sq,
            "omega1": self.omega1,
            "omega2": self.omega2,
            "region1": self.region1,
            "region2": self.region2,
        }

    def __repr__(self):
        return (
            f"ResonanceReport(omega1_sq={self.omega1_sq:.6g} [{self.region1}], "
            f"omega2_sq={self.omega2_sq:.6g} [{self.region2}])"
        )


def resonant_frequencies(cfg, rmap=None):
    """Roots of the resonance biquadratic, sorted, with stability regions.

    Raises DegenerateD when the trap is fully symmetric about the axis
    (|D| < 1e-12): the equation degenerates to a single root and the
    generic analysis does not apply.
    """
    d, e, f = resonance_coefficients(cfg)
    if abs(d) < 1e-12:
        raise DegenerateD("trap is degenerate along the rotation axis (D ~ 0)")
    disc = max(e * e - 4.0 * d * f, 0.0)
    s = np.sqrt(disc)
    roots = sorted([(-e - s) / (2.0 * d), (-e + s) / (2.0 * d)])
    if rmap is None:
        rmap = region_map(cfg)
    labels = [
        str(rmap.locate(float(np.sqrt(x)))) if x >= 0 else None for x in roots
    ]
    return ResonanceReport(roots[0], roots[1], labels[0], labels[1])


def classify_resonances(cfg, rmap=None):
    """Resonance report with region labels for each root.

    Equivalent to intersecting the parabola chi = Omega^2 with the chi
    branches of a stability scan; here the roots come from the biquadratic
    and the labels from the window arithmetic.
    """
    return resonant_frequencies(cfg, rmap=rmap)


def default_forced_dt(cfg):
    """dt = (2 pi / max(Omega, max mode frequency)) / 200."""
    roots = solve_cubic(char_poly_coeffs(cfg))
    om_max = max(float(np.sqrt(abs(r))) for r in roots)
    fastest = max(cfg.omega, om_max, 1e-6)
    return 2.0 * np.pi / fastest / 200.0


def forced_evolve(cfg, g, t_end, dt=None, x0=None):
    """Integrate dX/dt = M X + (0, g(t)) from X(0) = 0 (by default).

    The zero start isolates the driven particular solution from
    initial-condition transients. Raises StepTooLarge when
    dt ||M||_1 > 0.1, long before RK4 becomes inaccurate.
    """
    if dt is None:
        dt = default_forced_dt(cfg)
    m = cfg.dynamics_matrix
    if dt * np.linalg.norm(m, 1) > 0.1:
        raise StepTooLarge(f"dt = {dt:.3g} too large for ||M||_1 = {np.linalg.norm(m, 1):.3g}")
    dg = decompose_gravity(g, cfg.axis)
    omega = cfg.omega
    x0 = np.zeros(6) if x0 is None else np.asarray(x0, dtype=float)

    def rhs(t, y):
        out = m @ y
        out[3:] += gravity_in_rotating_frame(dg, omega, t)
        return out

    return rk4_integrate(rhs, x0, t_end, dt)


def _linfit(x, y):
    # least squares with R^2 and the slope's standard error
    n = len(x)
    xm = x.mean()
    ym = y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    slope = sxy / sxx
    resid = y - (ym + slope * (x - xm))
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    se = np.sqrt(ss_res / ((n - 2) * sxx)) if n > 2 else np.inf
    return slope, r2, se


class GrowthReport(NamedTuple):
    label: str
    slope: float
    r2_linear: float
    slope_se: float
    log_slope: float
    r2_log: float
    log_slope_se: float
    n_windows: int


def growth_classification(traj, rotation_period):
    """Classify a forced trajectory as Bounded, LinearGrowth, or ExponentialGrowth.

    The position-amplitude envelope is sampled as one peak per rotation
    period and fit twice, linearly and in the log. LinearGrowth needs
    linear R^2 > 0.99 with a positive slope larger than 5 standard errors;
    ExponentialGrowth needs the same on the log fit and takes precedence
    when it also outfits the linear model. Anything else is Bounded.
    Requires at least 20 periods of data.
    """
    t = traj.times
    period = float(rotation_period)
    if period <= 0:
        raise ValueError("rotation_period must be positive")
    span = t[-1] - t[0]
    n_win = int(np.floor(span / period))
    if n_win < 20:
        raise InsufficientSpan(
            f"trajectory spans {span / period:.2f} rotation periods, need >= 20"
        )
    d = traj.states.shape[1] // 2
    amp = np.linalg.norm(np.real(traj.states[:, :d]), axis=1)
    centers = []
    peaks = []
    for k in range(n_win):
        lo = t[0] + k * period
        sel = (t >= lo) & (t < lo + period)
        if not sel.any():
            continue
        centers.append(lo + 0.5 * period)
        peaks.append(float(amp[sel].max()))
    centers = np.array(centers)
    peaks = np.array(peaks)

    if peaks.max() <= 1e-300:
        return GrowthReport("Bounded", 0.0, 0.0, np.inf, 0.0, 0.0, np.inf, len(peaks))

    slope, r2_lin, se_lin = _linfit(centers, peaks)
    pos = peaks > 0
    if pos.sum() >= max(20, 0.9 * len(peaks)):
        lslope, r2_log, se_log = _linfit(centers[pos], np.log(peaks[pos]))
    else:
        lslope, r2_log, se_log = 0.0, 0.0, np.inf

    lin_ok = r2_lin > 0.99 and slope > 0 and slope > 5.0 * se_lin
    exp_ok = r2_log > 0.99 and lslope > 0 and lslope > 5.0 * se_log
    if exp_ok and (not lin_ok or r2_log > r2_lin):
        label = "ExponentialGrowth"
    elif lin_ok:
        label = "LinearGrowth"
    else:
        label = "Bounded"
    return GrowthReport(
        label, slope, r2_lin, se_lin, lslope, r2_log, se_log, len(peaks)
    )


def trajectory_to_csv(traj):
    """Phase-space trajectory as CSV with header t,x,y,z,px,py,pz."""
    lines = ["t,x,y,z,px,py,pz"]
    for i in range(len(traj)):
        row = [fmt17(traj.times[i])]
        row += [fmt17(v) for v in np.real(traj.states[i])]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"

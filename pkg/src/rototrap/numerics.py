"""Shared numerical kernels.

Fixed-step RK4 for linear and Riccati systems, dense nonsymmetric
eigendecomposition, positive-definiteness tests, and small complex-matrix
inversion. Fixed-step integration is deliberate: every system here is small
and smooth, and reproducible CSV output matters more than adaptive speed.
"""

import numpy as np

from .errors import (
    ConvergenceFailure,
    NearSingular,
    NonFiniteState,
    NotSymmetric,
)

__all__ = [
    "OmegaRange",
    "Trajectory",
    "rk4_integrate",
    "eig_general",
    "posdef_min_eig",
    "cinv3",
    "fmt17",
]


def fmt17(x):
    """Format a real number with 17 significant digits, locale-free."""
    return format(float(x), ".17g")


class OmegaRange:
    """A uniform grid of rotation rates.

    Parameters
    ----------
    start, stop : float
        Endpoints, start < stop.
    steps : int
        Number of grid points, at least 2. Endpoints are included.
    """

    def __init__(self, start, stop, steps):
        start = float(start)
        stop = float(stop)
        steps = int(steps)
        if not start < stop:
            raise ValueError(f"OmegaRange requires start < stop, got [{start}, {stop}]")
        if steps < 2:
            raise ValueError(f"OmegaRange requires steps >= 2, got {steps}")
        self.start = start
        self.stop = stop
        self.steps = steps

    def values(self):
        return np.linspace(self.start, self.stop, self.steps)

    def __repr__(self):
        return f"OmegaRange({self.start}, {self.stop}, steps={self.steps})"


class Trajectory:
    """Time series of states sampled on a strictly increasing time grid.

    ``states[i]`` is the state at ``times[i]``; states may be real or complex
    vectors (flattened K matrices for Riccati runs).
    """

    def __init__(self, times, states):
        times = np.asarray(times, dtype=float)
        states = np.asarray(states)
        if times.ndim != 1 or len(times) != len(states):
            raise ValueError("times and states must be matching 1D sequences")
        if len(times) > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        self.times = times
        self.states = states

    def __len__(self):
        return len(self.times)

    @property
    def final_state(self):
        return self.states[-1]


def rk4_integrate(rhs, y0, t_end, dt, t0=0.0):
    """Integrate dy/dt = rhs(t, y) with classical fixed-step RK4.

    The last step is shortened so the trajectory lands exactly on ``t_end``.
    Every accepted step is recorded. On overflow raises NonFiniteState
    carrying the finite part of the trajectory, so scans over unstable
    configs can report the failure without dying.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    y = np.asarray(y0).copy()
    if y.dtype.kind not in "fc":
        y = y.astype(float)
    t = float(t0)
    t_end = float(t_end)
    times = [t]
    states = [y.copy()]
    # the 1e-12 slack avoids a spurious tiny final step from roundoff
    span = t_end - t
    if span < 0:
        raise ValueError("t_end must be >= t0")
    n_full = int(np.floor(span / dt + 1e-12))
    steps = [dt] * n_full
    rem = span - n_full * dt
    if rem > 1e-12 * max(1.0, abs(t_end)):
        steps.append(rem)
    for h in steps:
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t + h
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(
                f"state became non-finite at t={t:.6g}",
                trajectory=Trajectory(times, states),
            )
        times.append(t)
        states.append(y.copy())
    return Trajectory(times, states)


def eig_general(m):
    """Eigendecomposition of a small (at most 6x6) general real/complex matrix.

    Returns (eigenvalues, eigenvectors) with eigenvectors as columns.
    Each pair satisfies ||M v - lam v|| < 1e-9 ||v|| relative to the matrix
    scale; failure of the underlying solver or of that residual raises
    ConvergenceFailure.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eig_general expects a square matrix")
    if m.shape[0] > 6:
        raise ValueError("eig_general is limited to matrices up to 6x6")
    try:
        lam, vec = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    scale = max(1.0, float(np.linalg.norm(m)))
    for i in range(len(lam)):
        v = vec[:, i]
        res = np.linalg.norm(m @ v - lam[i] * v)
        if res > 1e-9 * scale * np.linalg.norm(v):
            raise ConvergenceFailure(
                f"eigenpair {i} residual {res:.3e} exceeds tolerance"
            )
    return lam, vec


def posdef_min_eig(s):
    """Smallest eigenvalue of a symmetric real matrix.

    The input must be symmetric within 1e-10 (absolute, relative to its own
    scale); otherwise NotSymmetric is raised.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("posdef_min_eig expects a square matrix")
    asym = np.max(np.abs(s - s.T))
    if asym > 1e-10 * max(1.0, float(np.max(np.abs(s)))):
        raise NotSymmetric(f"matrix asymmetry {asym:.3e} exceeds 1e-10")
    return float(np.linalg.eigvalsh(0.5 * (s + s.T))[0])


def cinv3(m):
    """Inverse of a 3x3 (or smaller) complex matrix with conditioning guard.

    Raises NearSingular when the condition number reaches 1e12 or the
    identity residual ||M M^-1 - I|| fails to meet 1e-10.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] > 3:
        raise ValueError("cinv3 expects a square matrix up to 3x3")
    try:
        cond = np.linalg.cond(m)
    except np.linalg.LinAlgError as exc:
        raise NearSingular(f"condition estimate failed: {exc}") from exc
    if not np.isfinite(cond) or cond >= 1e12:
        raise NearSingular(f"condition number {cond:.3e} >= 1e12")
    inv = np.linalg.inv(m)
    res = np.linalg.norm(m @ inv - np.eye(m.shape[0]))
    if res > 1e-10:
        raise NearSingular(f"inverse residual {res:.3e} exceeds 1e-10")
    return inv

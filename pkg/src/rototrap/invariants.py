"""Quadratic constants of motion of the rotating trap.

A quadratic form C = p.T p / 2 + r.W p + r.U r / 2 is conserved along
dX/dt = M X exactly when the matrix triple satisfies

    0 = [Wm, T] + W + W^T,
    0 = [Wm, U] - W V - V W^T,
    0 = [Wm, W] + U - V T,

with Wm the rotation block. Three independent solutions exist in 3D (the
count follows the dimension). The first is the Hamiltonian itself,
(T, W, U) = (I, Wm, V). Closed-form expressions for the second and third
are built here; the second checks out to rounding, while the displayed
third fails its own defining equations by a large margin, so alongside it
this module solves the defining equations directly as a homogeneous linear
system and completes the basis from the numerical null space. Residuals of
everything are reported, never patched.
"""

from typing import NamedTuple, Tuple

import numpy as np

from .errors import NumericError, WrongDimension
from .modes import select_positive_signature_modes, symplectic_form

__all__ = [
    "QuadraticInvariant",
    "InvarianceResiduals",
    "AmplitudeDecomposition",
    "build_invariant",
    "invariance_residuals",
    "evaluate_invariant",
    "quadratic_form",
    "trajectory_drift",
    "amplitude_energies",
    "invariance_nullspace",
    "completed_third_invariant",
]

INVARIANT_LABELS = ("C1", "C2_2D", "C2_3D", "C3")


class QuadraticInvariant:
    """Matrix triple (T, W, U) of a conserved quadratic form.

    T and U must be symmetric (within 1e-12 relative to their scale); W is
    unconstrained. The label records which closed form or construction the
    triple came from.
    """

    def __init__(self, t_mat, w_mat, u_mat, label):
        t_mat = np.asarray(t_mat, dtype=float)
        w_mat = np.asarray(w_mat, dtype=float)
        u_mat = np.asarray(u_mat, dtype=float)
        for name, mat in (("T", t_mat), ("U", u_mat)):
            asym = float(np.max(np.abs(mat - mat.T)))
            if asym > 1e-12 * max(1.0, float(np.max(np.abs(mat)))):
                raise ValueError(f"{name} matrix asymmetry {asym:.3e} too large")
        self.t_mat = 0.5 * (t_mat + t_mat.T)
        self.w_mat = w_mat
        self.u_mat = 0.5 * (u_mat + u_mat.T)
        self.label = str(label)
        for m in (self.t_mat, self.w_mat, self.u_mat):
            m.setflags(write=False)

    @property
    def dim(self):
        return self.t_mat.shape[0]

    def to_json_obj(self):
        return {
            "label": self.label,
            "t_mat": self.t_mat.tolist(),
            "w_mat": self.w_mat.tolist(),
            "u_mat": self.u_mat.tolist(),
        }

    def __repr__(self):
        return f"QuadraticInvariant({self.label}, dim={self.dim})"


def _planar_axis_index(cfg):
    # rotation about a principal axis with V decoupled along it
    axis = getattr(cfg, "axis", None)
    if axis is None:
        return None
    i = int(np.argmax(np.abs(axis)))
    rest = np.delete(axis, i)
    if abs(abs(axis[i]) - 1.0) > 1e-12 or np.max(np.abs(rest)) > 1e-12:
        return None
    v = cfg.v
    scale = max(1.0, float(np.max(np.abs(v))))
    off = [abs(v[i, j]) for j in range(3) if j != i]
    if max(off) > 1e-12 * scale:
        return None
    return i


def build_invariant(label, cfg):
    """Closed-form invariant triple for a config.

    C1 = (I, Wm, V) in any dimension. C2_2D applies to the planar problem
    (a 2D config, or a 3D one rotating about a principal axis that V
    leaves decoupled); anything else raises WrongDimension. C2_3D and C3
    are the 3D closed forms; the C3 triple is built exactly as displayed
    in its source even though its residuals are far from zero, so the
    defect stays visible (see completed_third_invariant for the usable
    replacement).
    """
    v = cfg.v
    wm = cfg.omega_matrix
    dim = v.shape[0]
    if label == "C1":
        return QuadraticInvariant(np.eye(dim), wm, v, "C1")
    if label == "C2_2D":
        if dim != 2 and (dim != 3 or _planar_axis_index(cfg) is None):
            raise WrongDimension(
                "C2_2D needs a planar config or principal-axis rotation "
                "with a decoupled axis"
            )
        w3 = wm @ wm @ wm
        t = v
        w = wm @ v + 2.0 * v @ wm + 2.0 * w3
        u = v @ v + v @ wm @ wm - wm @ v @ wm
        return QuadraticInvariant(t, w, u, "C2_2D")
    if dim != 3:
        raise WrongDimension(f"{label} is defined for 3D configs")
    o2 = wm @ wm
    if label == "C2_3D":
        t = v - 3.0 * o2
        w = wm @ v + 2.0 * v @ wm - wm @ o2
        u = v @ v - v @ o2 - o2 @ v - wm @ v @ wm
        return QuadraticInvariant(t, w, u, "C2_3D")
    if label == "C3":
        om2 = cfg.omega ** 2
        trv = float(np.trace(v))
        t = (
            3.0 * v @ v
            + 4.0 * o2 @ v
            + 4.0 * v @ o2
            + wm @ v @ wm
            + 8.0 * om2 * v
            - 13.0 * trv * (om2 * np.eye(3) - o2)
        )
        u = (
            3.0 * v @ v @ v
            - 2.0 * v @ o2 @ o2
            - 2.0 * o2 @ o2 @ v
            + 3.0 * o2 @ v @ o2
            - om2 * wm @ v @ wm
            - 3.0 * v @ v @ o2
            - 3.0 * o2 @ v @ v
            - 3.0 * wm @ v @ v @ wm
            - 9.0 * v @ o2 @ v
            - 6.0 * v @ wm @ v @ wm
            - 6.0 * wm @ v @ wm @ v
            - 5.0 * om2 * v @ v
            + 13.0 * float(np.trace(v @ o2)) * v
        )
        w = (
            -2.0 * wm @ o2 @ o2
            - 2.0 * v @ wm @ o2
            + 2.0 * wm @ o2 @ v
            + 7.0 * o2 @ v @ wm
            + 4.0 * wm @ v @ o2
            + 3.0 * wm @ v @ v
            + 6.0 * v @ wm @ v
            + 6.0 * v @ v @ wm
        )
        return QuadraticInvariant(t, w, u, "C3")
    raise ValueError(f"unknown invariant label {label!r}")


class InvarianceResiduals(NamedTuple):
    """Max-norms of the three defining equations, in their listed order."""

    eq_t: float
    eq_u: float
    eq_w: float

    @property
    def worst(self):
        return max(self)


def invariance_residuals(inv, cfg):
    """How far a triple is from solving the defining equations."""
    t, w, u = inv.t_mat, inv.w_mat, inv.u_mat
    v = cfg.v
    wm = cfg.omega_matrix
    e1 = wm @ t - t @ wm + w + w.T
    e2 = wm @ u - u @ wm - w @ v - v @ w.T
    e3 = wm @ w - w @ wm + u - v @ t
    return InvarianceResiduals(
        float(np.max(np.abs(e1))),
        float(np.max(np.abs(e2))),
        float(np.max(np.abs(e3))),
    )


def evaluate_invariant(inv, x):
    """C(X) = p.T p / 2 + r.W p + r.U r / 2 for X = (r, p)."""
    x = np.asarray(x)
    d = inv.dim
    r = np.real(x[:d])
    p = np.real(x[d:])
    return float(
        0.5 * p @ inv.t_mat @ p + r @ inv.w_mat @ p + 0.5 * r @ inv.u_mat @ r
    )


def quadratic_form(inv):
    """The 2d x 2d symmetric matrix G with C(X) = X.G X / 2."""
    d = inv.dim
    g = np.zeros((2 * d, 2 * d))
    g[:d, :d] = inv.u_mat
    g[:d, d:] = inv.w_mat
    g[d:, :d] = inv.w_mat.T
    g[d:, d:] = inv.t_mat
    return g


def trajectory_drift(inv, traj):
    """max_t |C(t) - C(0)| / (1 + |C(0)|) along a homogeneous trajectory."""
    vals = np.array([evaluate_invariant(inv, s) for s in traj.states])
    return float(np.max(np.abs(vals - vals[0])) / (1.0 + abs(vals[0])))


class AmplitudeDecomposition(NamedTuple):
    """Per-mode energies omega_k |a_k|^2 of a phase-space point."""

    energies: Tuple[float, ...]
    omegas: Tuple[float, ...]
    amplitudes: Tuple[complex, ...]


def amplitude_energies(modes, x):
    """Split the energy of X over normal modes.

    Selects the positive-symplectic member of each frequency pair,
    rescales it so -i Xbar^dag J Xbar = 1, and projects
    a_k = -i Xbar_k^dag J X. The signed frequencies omega_k then weight
    |a_k|^2 so the sum reproduces the Hamiltonian; negative omega_k terms
    appear above the first stability region. Only meaningful for stable
    configs (UnstableConfig otherwise).
    """
    x = np.asarray(x, dtype=float)
    sel = select_positive_signature_modes(modes)
    jm = symplectic_form(modes[0].dim)
    energies = []
    omegas = []
    amps = []
    for mv, s in sel:
        xb = mv.xbar / np.sqrt(s)
        a = complex(-1j * (np.conj(xb) @ (jm @ x)))
        om = float(mv.omega.real)
        energies.append(om * abs(a) ** 2)
        omegas.append(om)
        amps.append(a)
    return AmplitudeDecomposition(tuple(energies), tuple(omegas), tuple(amps))


# -- defining equations as a linear system -----------------------------------

def _vec_triple(t, u, w):
    return np.concatenate([t.ravel(), u.ravel(), w.ravel()])


def _unvec_triple(vec, d):
    n = d * d
    return (
        vec[:n].reshape(d, d),
        vec[n: 2 * n].reshape(d, d),
        vec[2 * n:].reshape(d, d),
    )


def invariance_nullspace(cfg, rel_threshold=1e-10):
    """Null space of the defining equations, solved blind.

    Unknowns are the 3 d^2 entries of (T, U, W); rows are the three matrix
    equations (3 d^2 of them) plus elementwise symmetry constraints on T
    and U (2 d^2 rows). Returns (dimension, basis rows, singular values)
    with the null decided by singular values below rel_threshold times the
    largest. For generic 3D configs the dimension is exactly 3,
    independent of any closed-form expression.
    """
    v = cfg.v
    wm = cfg.omega_matrix
    d = v.shape[0]
    n = d * d

    def eqs(t, u, w):
        e1 = wm @ t - t @ wm + w + w.T
        e2 = wm @ u - u @ wm - w @ v - v @ w.T
        e3 = wm @ w - w @ wm + u - v @ t
        return np.concatenate([e1.ravel(), e2.ravel(), e3.ravel()])

    z = np.zeros((d, d))
    cols = []
    for k in range(n):
        e = np.zeros((d, d))
        e[k // d, k % d] = 1.0
        cols.append(eqs(e, z, z))
    for k in range(n):
        e = np.zeros((d, d))
        e[k // d, k % d] = 1.0
        cols.append(eqs(z, e, z))
    for k in range(n):
        e = np.zeros((d, d))
        e[k // d, k % d] = 1.0
        cols.append(eqs(z, z, e))
    a_evol = np.array(cols).T
    sym = np.zeros((2 * n, 3 * n))
    for k in range(n):
        i, j = k // d, k % d
        sym[k, d * i + j] += 1.0
        sym[k, d * j + i] -= 1.0
        sym[n + k, n + d * i + j] += 1.0
        sym[n + k, n + d * j + i] -= 1.0
    a_full = np.vstack([a_evol, sym])
    _, sv, vt = np.linalg.svd(a_full)
    null_dim = int(np.sum(sv < rel_threshold * sv[0]))
    basis = vt[len(sv) - null_dim:] if null_dim else None
    return null_dim, basis, sv


def completed_third_invariant(cfg):
    """Third 3D invariant, completed numerically from the null space.

    The displayed closed form for the third invariant does not solve the
    defining equations (its residuals are orders of magnitude above
    rounding), so the basis is completed honestly: take the null space of
    the defining equations and extract its component orthogonal to the
    span of C1 and C2_3D. The result is normalized to unit vector length
    with a deterministic sign.
    """
    null_dim, basis, _ = invariance_nullspace(cfg)
    if null_dim != 3:
        raise NumericError(
            f"invariance equations have null dimension {null_dim}, expected 3 "
            "(degenerate config?)"
        )
    c1 = build_invariant("C1", cfg)
    c2 = build_invariant("C2_3D", cfg)
    known = np.column_stack(
        [
            _vec_triple(c1.t_mat, c1.u_mat, c1.w_mat),
            _vec_triple(c2.t_mat, c2.u_mat, c2.w_mat),
        ]
    )
    q, _ = np.linalg.qr(known)
    proj = basis - (basis @ q) @ q.T
    _, _, vt = np.linalg.svd(proj)
    vec = vt[0]
    imax = int(np.argmax(np.abs(vec)))
    if vec[imax] < 0:
        vec = -vec
    t, u, w = _unvec_triple(vec, 3)
    return QuadraticInvariant(
        0.5 * (t + t.T), w, 0.5 * (u + u.T), "C3_completed"
    )

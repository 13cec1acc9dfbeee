"""Trap configuration and the linear dynamics it generates.

Units have m = 1 and hbar = 1 throughout; an overall frequency scale
omega_unit is carried only as a reporting label. A scenario is a symmetric
positive-definite matrix V of squared trap frequencies together with a
rotation rate Omega >= 0 about a unit axis n. In the corotating frame the
motion is linear, dX/dt = M X, for phase-space points ordered
(x, y, z, px, py, pz).

With W the cross-product matrix of the angular velocity (W u = Omega n x u),

    M = [[-W, I], [-V, -W]],

whose characteristic polynomial det(lambda I - M) contains only even powers
and, after lambda = i omega, reads P(omega) = omega^6 + A omega^4
+ B omega^2 + C with rotationally invariant coefficients A, B, C.
"""

from typing import NamedTuple

import numpy as np

from .errors import (
    InvalidConfig,
    NegativeOmega,
    NonPositivePotential,
    NonSymmetricPotential,
    OddPowersPresent,
    ZeroAxis,
)

__all__ = [
    "TrapPotential",
    "RotationSpec",
    "TrapConfig",
    "ValidatedConfig",
    "CharPolyCoeffs",
    "LinearTrap",
    "cross_matrix",
    "make_config",
    "planar_trap",
    "line_trap",
    "config_from_dict",
    "config_errors",
    "validate_config",
    "build_dynamics_matrix",
    "char_poly_coeffs",
    "char_poly_from_matrix",
]


def cross_matrix(w):
    """Antisymmetric matrix W with W @ u = w x u."""
    wx, wy, wz = np.asarray(w, dtype=float)
    return np.array([[0.0, -wz, wy], [wz, 0.0, -wx], [-wy, wx, 0.0]])


# -- validation helpers ------------------------------------------------------
# Each returns (exception class, message) pairs so the same checks feed both
# the raise-on-first paths below and the collect-everything config_errors().

def _potential_issues(v):
    issues = []
    v = np.asarray(v, dtype=float)
    if v.shape != (3, 3):
        issues.append((InvalidConfig, f"potential matrix must be 3x3, got {v.shape}"))
        return issues
    if not np.all(np.isfinite(v)):
        issues.append((InvalidConfig, "potential matrix has non-finite entries"))
        return issues
    asym = float(np.max(np.abs(v - v.T)))
    if asym > 1e-14:
        issues.append(
            (NonSymmetricPotential, f"potential asymmetry {asym:.3e} exceeds 1e-14")
        )
    min_eig = float(np.linalg.eigvalsh(0.5 * (v + v.T))[0])
    if min_eig <= 0.0:
        issues.append(
            (NonPositivePotential, f"smallest potential eigenvalue {min_eig:.6g} <= 0")
        )
    return issues


def _rotation_issues(axis, omega):
    issues = []
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,):
        issues.append((InvalidConfig, f"axis must be a 3-vector, got shape {axis.shape}"))
        return issues
    if not np.all(np.isfinite(axis)):
        issues.append((InvalidConfig, "axis has non-finite entries"))
        return issues
    nrm = float(np.linalg.norm(axis))
    if nrm < 1e-8:
        issues.append((ZeroAxis, "rotation axis has (near) zero length"))
    elif abs(nrm - 1.0) > 1e-6:
        issues.append(
            (InvalidConfig, f"axis norm {nrm:.9g} differs from 1 by more than 1e-6")
        )
    omega = float(omega)
    if not np.isfinite(omega):
        issues.append((InvalidConfig, "omega must be finite"))
    elif omega < 0.0:
        issues.append((NegativeOmega, f"omega must be >= 0, got {omega}"))
    return issues


def _raise_first(issues):
    if issues:
        cls, msg = issues[0]
        if cls is InvalidConfig:
            raise InvalidConfig(msg, errors=[m for _, m in issues])
        raise cls(msg)


class TrapPotential:
    """Symmetric positive-definite 3x3 matrix of squared trap frequencies."""

    def __init__(self, v):
        v = np.asarray(v, dtype=float)
        _raise_first(_potential_issues(v))
        self.v = 0.5 * (v + v.T)
        self.v.setflags(write=False)

    @classmethod
    def from_principal(cls, vx, vy, vz):
        """Diagonal potential from its principal values."""
        return cls(np.diag([float(vx), float(vy), float(vz)]))

    def __repr__(self):
        return f"TrapPotential({self.v.tolist()})"


class RotationSpec:
    """Rotation rate omega >= 0 about a unit axis.

    The axis is renormalized when its length is within 1e-6 of one and
    rejected otherwise; a (near) zero axis is a ZeroAxis error even at
    omega = 0, so a config always has a well-defined rotation plane.
    """

    def __init__(self, omega, axis):
        axis = np.asarray(axis, dtype=float)
        _raise_first(_rotation_issues(axis, omega))
        self.omega = float(omega)
        self.axis = axis / np.linalg.norm(axis)
        self.axis.setflags(write=False)

    @property
    def omega_vec(self):
        return self.omega * self.axis

    @property
    def omega_matrix(self):
        return cross_matrix(self.omega_vec)

    def __repr__(self):
        return f"RotationSpec(omega={self.omega}, axis={self.axis.tolist()})"


class TrapConfig:
    """A full scenario: potential, rotation, and the frequency unit."""

    def __init__(self, potential, rotation, omega_unit=1.0):
        if not isinstance(potential, TrapPotential):
            potential = TrapPotential(potential)
        if not isinstance(rotation, RotationSpec):
            raise TypeError("rotation must be a RotationSpec")
        omega_unit = float(omega_unit)
        if not (np.isfinite(omega_unit) and omega_unit > 0):
            raise InvalidConfig(f"omega_unit must be positive, got {omega_unit}")
        self.potential = potential
        self.rotation = rotation
        self.omega_unit = omega_unit


class ValidatedConfig:
    """Validated scenario with the derived matrices cached.

    Exposes the duck interface shared with the planar/line reductions:
    ``v``, ``omega``, ``omega_matrix``, ``dynamics_matrix``, ``dim``.
    """

    dim = 3

    def __init__(self, config):
        if not isinstance(config, TrapConfig):
            raise TypeError("ValidatedConfig wraps a TrapConfig")
        self.config = config
        self.v = config.potential.v
        self.axis = config.rotation.axis
        self.omega = config.rotation.omega
        self.omega_unit = config.omega_unit
        self._m = None

    @property
    def omega_vec(self):
        return self.omega * self.axis

    @property
    def omega_matrix(self):
        return cross_matrix(self.omega_vec)

    @property
    def dynamics_matrix(self):
        if self._m is None:
            self._m = build_dynamics_matrix(self)
            self._m.setflags(write=False)
        return self._m

    def with_omega(self, omega):
        """Same potential and axis at a different rotation rate."""
        return ValidatedConfig(
            TrapConfig(
                self.config.potential,
                RotationSpec(omega, self.axis),
                self.omega_unit,
            )
        )

    def __repr__(self):
        return (
            f"ValidatedConfig(omega={self.omega}, axis={self.axis.tolist()}, "
            f"v=diag?{bool(np.allclose(self.v, np.diag(np.diag(self.v))))})"
        )


def make_config(v, axis, omega, omega_unit=1.0):
    """Build a ValidatedConfig from raw pieces.

    ``v`` is either a length-3 sequence of principal values or a full 3x3
    symmetric matrix.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim == 1:
        pot = TrapPotential.from_principal(*v)
    else:
        pot = TrapPotential(v)
    return ValidatedConfig(TrapConfig(pot, RotationSpec(omega, axis), omega_unit))


class LinearTrap:
    """Minimal d-dimensional trap: V, the Omega block, and M = [[-W, I], [-V, -W]].

    Used for the planar and one-dimensional reductions, which share all the
    Riccati and invariant machinery with the 3D case.
    """

    def __init__(self, v, omega_matrix, omega=0.0):
        self.v = np.asarray(v, dtype=float)
        self.omega_matrix = np.asarray(omega_matrix, dtype=float)
        self.omega = float(omega)
        self.dim = self.v.shape[0]

    @property
    def dynamics_matrix(self):
        d = self.dim
        m = np.zeros((2 * d, 2 * d))
        m[:d, :d] = -self.omega_matrix
        m[:d, d:] = np.eye(d)
        m[d:, :d] = -self.v
        m[d:, d:] = -self.omega_matrix
        return m


def planar_trap(vx, vy, omega):
    """In-plane reduction for rotation about a principal axis."""
    w = np.array([[0.0, -omega], [omega, 0.0]])
    return LinearTrap(np.diag([float(vx), float(vy)]), w, omega)


def line_trap(v):
    """One-dimensional static trap with squared frequency v."""
    return LinearTrap(np.array([[float(v)]]), np.zeros((1, 1)), 0.0)


# -- JSON-shaped configuration -----------------------------------------------

_TOP_KEYS = {"potential", "axis", "omega", "omega_unit"}
_POT_KEYS = {"diag", "matrix"}


def _dict_structure_issues(d):
    issues = []
    if not isinstance(d, dict):
        return [(InvalidConfig, "config document must be a JSON object")]
    unknown = sorted(set(d) - _TOP_KEYS)
    if unknown:
        issues.append((InvalidConfig, f"unknown config fields: {unknown}"))
    for key in ("potential", "axis", "omega"):
        if key not in d:
            issues.append((InvalidConfig, f"missing required field '{key}'"))
    pot = d.get("potential")
    if pot is not None:
        if not isinstance(pot, dict):
            issues.append((InvalidConfig, "'potential' must be an object"))
        else:
            unknown = sorted(set(pot) - _POT_KEYS)
            if unknown:
                issues.append((InvalidConfig, f"unknown potential fields: {unknown}"))
            given = [k for k in _POT_KEYS if k in pot]
            if len(given) != 1:
                issues.append(
                    (InvalidConfig, "potential needs exactly one of 'diag'/'matrix'")
                )
    return issues


def _dict_potential_matrix(pot):
    if "diag" in pot:
        diag = np.asarray(pot["diag"], dtype=float)
        if diag.shape != (3,):
            raise InvalidConfig("'potential.diag' must be a length-3 array")
        return np.diag(diag)
    mat = np.asarray(pot["matrix"], dtype=float)
    if mat.shape != (3, 3):
        raise InvalidConfig("'potential.matrix' must be 3x3")
    return mat


def config_from_dict(d):
    """TrapConfig from a JSON-shaped dict.

    Schema: {"potential": {"diag": [Vx,Vy,Vz]} or {"matrix": [[..]]},
    "axis": [nx,ny,nz], "omega": rate, "omega_unit": scale (optional)}.
    Unknown fields are rejected.
    """
    _raise_first(_dict_structure_issues(d))
    v = _dict_potential_matrix(d["potential"])
    rotation = RotationSpec(d["omega"], np.asarray(d["axis"], dtype=float))
    return TrapConfig(TrapPotential(v), rotation, d.get("omega_unit", 1.0))


def config_errors(d):
    """Every validation problem of a JSON-shaped dict, as strings.

    Returns [] when the document is valid. Unlike validate_config, which
    raises on the first problem, this collects all of them.
    """
    issues = list(_dict_structure_issues(d))
    if not issues:
        try:
            pot = _dict_potential_matrix(d["potential"])
        except InvalidConfig as exc:
            issues.append((InvalidConfig, str(exc)))
        else:
            issues.extend(_potential_issues(pot))
        issues.extend(_rotation_issues(np.asarray(d["axis"], dtype=float), d["omega"]))
        unit = d.get("omega_unit", 1.0)
        try:
            unit = float(unit)
        except (TypeError, ValueError):
            issues.append((InvalidConfig, "omega_unit must be a number"))
        else:
            if not (np.isfinite(unit) and unit > 0):
                issues.append((InvalidConfig, f"omega_unit must be positive, got {unit}"))
    return [f"{cls.__name__}: {msg}" for cls, msg in issues]


def validate_config(cfg):
    """Validate and wrap a TrapConfig or a JSON-shaped dict."""
    if isinstance(cfg, ValidatedConfig):
        return cfg
    if isinstance(cfg, dict):
        cfg = config_from_dict(cfg)
    return ValidatedConfig(cfg)


# -- dynamics matrix and characteristic polynomial ---------------------------

def build_dynamics_matrix(cfg):
    """The 6x6 generator M of the corotating-frame flow dX/dt = M X."""
    w = cfg.omega_matrix
    m = np.zeros((6, 6))
    m[:3, :3] = -w
    m[:3, 3:] = np.eye(3)
    m[3:, :3] = -cfg.v
    m[3:, 3:] = -w
    return m


class CharPolyCoeffs(NamedTuple):
    """Coefficients of P(omega) = omega^6 + a omega^4 + b omega^2 + c."""

    a: float
    b: float
    c: float


def char_poly_coeffs(cfg):
    """Invariant coefficients A, B, C from the closed scalar forms.

    A = -2 Omega^2 - Tr V
    B = Omega^4 + Omega^2 (3 n.V.n - Tr V) + ((Tr V)^2 - Tr V^2) / 2
    C = Omega^2 (Tr V - Omega^2)(n.V.n) - Omega^2 (n.V^2.n) - Det V

    All three depend on V and n only through rotational invariants, which the
    dual route char_poly_from_matrix cross-checks.
    """
    v = cfg.v
    n = cfg.axis
    om2 = cfg.omega ** 2
    tr = float(np.trace(v))
    v2 = v @ v
    nvn = float(n @ v @ n)
    nv2n = float(n @ v2 @ n)
    a = -2.0 * om2 - tr
    b = om2 * om2 + om2 * (3.0 * nvn - tr) + 0.5 * (tr * tr - float(np.trace(v2)))
    c = om2 * (tr - om2) * nvn - om2 * nv2n - float(np.linalg.det(v))
    return CharPolyCoeffs(a, b, c)


def char_poly_from_matrix(m):
    """Coefficients A, B, C extracted from the matrix route.

    Runs Faddeev-LeVerrier on M to get det(lambda I - M) = sum c_k
    lambda^(6-k), demands the odd coefficients vanish (they must, by the
    block structure), and maps lambda = i omega, giving A = -c2, B = c4,
    C = -c6. Kept deliberately independent of char_poly_coeffs.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (6, 6):
        raise ValueError("char_poly_from_matrix expects the 6x6 dynamics matrix")
    c = np.zeros(7)
    c[0] = 1.0
    nk = np.zeros_like(m)
    for k in range(1, 7):
        nk = m @ nk + c[k - 1] * m
        c[k] = -np.trace(nk) / k
    scale = max(1.0, abs(c[2]), abs(c[4]), abs(c[6]))
    odd = max(abs(c[1]), abs(c[3]), abs(c[5]))
    if odd > 1e-10 * scale:
        raise OddPowersPresent(
            f"odd-power coefficients as large as {odd:.3e} (scale {scale:.3g})"
        )
    return CharPolyCoeffs(-c[2], c[4], -c[6])

"""Shared builders for the test suite.

The figure configs (all with V = diag(1,2,3)) and seeded random-config
generators used by several test modules. Tolerances live in the tests
themselves, next to the assertions they govern.
"""

import numpy as np
import pytest

from rototrap import make_config, region_map

V123 = np.diag([1.0, 2.0, 3.0])


def tilted_axis(theta):
    """Unit axis in the xz-plane at angle theta from z."""
    return np.array([np.sin(theta), 0.0, np.cos(theta)])


def diagonal_axis():
    return np.ones(3) / np.sqrt(3.0)


def fig1_config(omega=1.0):
    return make_config(V123, diagonal_axis(), omega)


def fig2_config(omega=0.5):
    return make_config(V123, [0.0, 0.0, 1.0], omega)


def fig3_config(omega=0.5):
    return make_config(V123, tilted_axis(0.1), omega)


def fig4_config(omega=0.5):
    return make_config(V123, tilted_axis(2.0 * np.pi / 5.0), omega)


def fig5_config(omega=0.5):
    return make_config(V123, tilted_axis(np.pi / 4.0), omega)


def fig6_config(omega=0.5):
    return make_config(V123, tilted_axis(np.pi / 60.0), omega)


def random_rotation(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_potential(rng, lo=0.2, hi=3.0, min_gap=0.0, rotated=True):
    """Positive-definite V with eigenvalues in [lo, hi]."""
    while True:
        vals = np.sort(rng.uniform(lo, hi, size=3))
        if np.min(np.diff(vals)) >= min_gap:
            break
    if not rotated:
        return np.diag(vals)
    q = random_rotation(rng)
    return q @ np.diag(vals) @ q.T


def random_axis(rng):
    while True:
        n = rng.standard_normal(3)
        norm = np.linalg.norm(n)
        if norm > 1e-3:
            return n / norm


def random_config(rng, omega=None, min_gap=0.0):
    if omega is None:
        omega = float(rng.uniform(0.0, 3.0))
    return make_config(
        random_potential(rng, min_gap=min_gap), random_axis(rng), omega
    )


def omega_inside(lab, frac, span_cap=3.0):
    """A rotation rate at relative position frac inside a region interval."""
    lo, hi = lab.lo, lab.hi
    if not np.isfinite(hi):
        hi = lo + span_cap
    return lo + frac * (hi - lo)


def sample_region_omegas(cfg, region, count, rng, margin=0.05):
    """Rotation rates strictly inside one region of cfg's partition."""
    rmap = region_map(cfg)
    lab = next((l for l in rmap.labels() if l.label == region), None)
    if lab is None:
        return []
    fracs = rng.uniform(margin, 1.0 - margin, size=count)
    return [omega_inside(lab, f) for f in fracs]


@pytest.fixture
def rng():
    return np.random.default_rng(987123)

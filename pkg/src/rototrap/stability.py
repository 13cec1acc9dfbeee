"""Stability analysis of the rotating trap.

The squared mode frequencies chi = omega^2 are roots of the cubic
Q(chi) = chi^3 + A chi^2 + B chi + C. Stability is read off the root
pattern: three positive real roots mean bounded motion, a negative real
root means exponential runaway, a complex pair means oscillatory
instability. Exponential windows follow from the zeros of C(Omega), the
oscillatory window from the sign of the cubic discriminant; together they
cut the Omega axis into the regions S1, I1, S2, I2, S3.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from itertools import permutations
from typing import NamedTuple, Optional

import numpy as np

from .errors import AmbiguousClassification, BracketTooSmall
from .numerics import OmegaRange, fmt17
from .trap import char_poly_coeffs

__all__ = [
    "STABLE",
    "EXPONENTIAL",
    "OSCILLATORY",
    "ChiRoots",
    "StabilityClass",
    "WindowCoeffs",
    "RegionLabel",
    "RegionMap",
    "ScanTable",
    "solve_cubic",
    "classify_chi_roots",
    "default_classify_tol",
    "window_coeffs",
    "exponential_window",
    "planar_discriminant",
    "cubic_discriminant",
    "oscillatory_window",
    "region_map",
    "region_of",
    "stability_scan",
]

STABLE = "Stable"
EXPONENTIAL = "ExponentialInstability"
OSCILLATORY = "OscillatoryInstability"

REGION_ORDER = ("S1", "I1", "S2", "I2", "S3")


class ChiRoots:
    """The three roots of Q(chi), sorted by (real part, imaginary part)."""

    def __init__(self, roots):
        roots = np.asarray(roots, dtype=complex)
        if roots.shape != (3,):
            raise ValueError("ChiRoots holds exactly three values")
        order = np.lexsort((roots.imag, roots.real))
        self.roots = roots[order]
        self.roots.setflags(write=False)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    def __len__(self):
        return 3

    def __repr__(self):
        return f"ChiRoots({self.roots.tolist()})"


class StabilityClass(NamedTuple):
    """Classification label plus the offending root index when unstable."""

    label: str
    root_index: Optional[int] = None


class WindowCoeffs(NamedTuple):
    """Coefficients of C(Omega) = -a Omega^4 + b Omega^2 - c."""

    a: float
    b: float
    c: float


class RegionLabel(NamedTuple):
    """Region name with the Omega interval it occupies.

    ``boundary`` marks a query that sat within tolerance of a window edge;
    such points report the instability side.
    """

    label: str
    lo: float
    hi: float
    boundary: bool = False

    def __str__(self):
        return self.label + ("*" if self.boundary else "")


def solve_cubic(coeffs):
    """Roots of chi^3 + A chi^2 + B chi + C.

    Companion-matrix eigenvalues followed by one guarded Newton step per
    root: the companion route is robust near double roots where the closed
    formulas cancel catastrophically, and the polish restores the last
    digits. Conjugate closure of the output is enforced exactly.
    """
    a, b, c = float(coeffs[0]), float(coeffs[1]), float(coeffs[2])

    def q(x):
        return ((x + a) * x + b) * x + c

    def dq(x):
        return (3.0 * x + 2.0 * a) * x + b

    comp = np.array([[0.0, 0.0, -c], [1.0, 0.0, -b], [0.0, 1.0, -a]])
    raw = np.linalg.eigvals(comp)

    def polish(x):
        d = dq(x)
        if d != 0:
            x2 = x - q(x) / d
            if abs(q(x2)) < abs(q(x)):
                return x2
        return x

    real = [r.real for r in raw if r.imag == 0.0]
    cplx = [r for r in raw if r.imag > 0.0]
    out = [complex(polish(r)) for r in real]
    for r in cplx:
        z = polish(r)
        out += [z, z.conjugate()]
    return ChiRoots(out)


def default_classify_tol(coeffs):
    """Scale-aware classification tolerance 1e-9 max(1, |A|, |B|, |C|)."""
    return 1e-9 * max(1.0, abs(coeffs[0]), abs(coeffs[1]), abs(coeffs[2]))


def classify_chi_roots(roots, tol):
    """Stability class from the chi root pattern.

    A root counts as real when |Im chi| < max(tol, 1e-9 (1 + |chi|)). Roots
    within tol of zero, or with an imaginary part too close to that
    threshold to call (within 1e4x of it), raise AmbiguousClassification:
    the point sits on a region boundary and the caller must refine or
    accept boundary status.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    rts = list(roots)
    real_idx = []
    for i, r in enumerate(rts):
        im_tol = max(tol, 1e-9 * (1.0 + abs(r)))
        if abs(r.imag) < im_tol:
            real_idx.append(i)
        elif abs(r.imag) < 1e4 * im_tol:
            raise AmbiguousClassification(
                f"root {r:.6g} too close to the real axis to classify",
                side="oscillatory",
                root_index=i,
            )
    if len(real_idx) < 3:
        idx = next(i for i in range(3) if i not in real_idx)
        return StabilityClass(OSCILLATORY, idx)
    for i in real_idx:
        if abs(rts[i].real) <= tol:
            raise AmbiguousClassification(
                f"root {rts[i].real:.6g} within tolerance of zero",
                side="exponential",
                root_index=i,
            )
    neg = [i for i in real_idx if rts[i].real < -tol]
    if neg:
        return StabilityClass(EXPONENTIAL, neg[0])
    return StabilityClass(STABLE)


def window_coeffs(cfg):
    """a = n.V.n, b = TrV (n.V.n) - n.V^2.n, c = Det V; all positive."""
    v = cfg.v
    n = cfg.axis
    a = float(n @ v @ n)
    b = float(np.trace(v)) * a - float(n @ v @ v @ n)
    c = float(np.linalg.det(v))
    return WindowCoeffs(a, b, c)


def exponential_window(cfg):
    """Edges (Omega-, Omega+) of the exponential instability window.

    Omega+-^2 = (b -+ sqrt(b^2 - 4ac)) / (2a); the discriminant is
    nonnegative for positive-definite V (clamped against roundoff), so the
    edges are always real, collapsing to a point for an isotropic trap.
    """
    a, b, c = window_coeffs(cfg)
    disc = max(b * b - 4.0 * a * c, 0.0)
    s = np.sqrt(disc)
    om_minus_sq = max((b - s) / (2.0 * a), 0.0)
    om_plus_sq = (b + s) / (2.0 * a)
    return float(np.sqrt(om_minus_sq)), float(np.sqrt(om_plus_sq))


def planar_discriminant(vx, vy, omega):
    """Delta = 8 Omega^2 (Vx + Vy) + (Vx - Vy)^2, nonnegative always.

    This is the discriminant of the in-plane quadratic factor for rotation
    about a principal axis; its sign rules out oscillatory instability in
    the axis-aligned case.
    """
    return 8.0 * omega * omega * (vx + vy) + (vx - vy) ** 2


def cubic_discriminant(a, b, c):
    """Discriminant of chi^3 + a chi^2 + b chi + c (negative iff complex pair)."""
    return (
        18.0 * a * b * c
        - 4.0 * a ** 3 * c
        + a * a * b * b
        - 4.0 * b ** 3
        - 27.0 * c * c
    )


def _disc_at(cfg, om):
    co = char_poly_coeffs(cfg.with_omega(om))
    d = cubic_discriminant(*co)
    scale = max(
        1.0,
        abs(18.0 * co.a * co.b * co.c),
        abs(4.0 * co.a ** 3 * co.c),
        (co.a * co.b) ** 2,
        abs(4.0 * co.b ** 3),
        27.0 * co.c * co.c,
    )
    return d, scale


def _default_bracket(cfg, om_plus):
    stop = om_plus + 2.0 * float(np.sqrt(np.trace(cfg.v))) + 1.0
    return OmegaRange(0.0, stop, 2001)


def oscillatory_window(cfg, bracket=None, tol=1e-10):
    """Interval above Omega+ where Q has a complex pair, or None.

    Located from the sign of the cubic discriminant: a coarse scan over the
    bracket finds the negative stretch, bisection then sharpens both edges
    to ``tol``. The discriminant counts as negative only below a
    term-scale-relative threshold, so double-root boundaries do not flicker.
    Raises BracketTooSmall when the discriminant is still negative at the
    bracket end, since then the window is not closed.
    """
    _, om_plus = exponential_window(cfg)
    if bracket is None:
        bracket = _default_bracket(cfg, om_plus)
    grid = bracket.values()
    grid = grid[grid > om_plus * (1.0 + 1e-12)]
    if len(grid) == 0:
        return None

    def is_neg(om):
        d, scale = _disc_at(cfg, om)
        return d < -1e-12 * scale

    flags = np.array([is_neg(om) for om in grid])
    if not flags.any():
        return None
    if flags[-1]:
        raise BracketTooSmall(
            f"discriminant still negative at Omega = {grid[-1]:.6g}; widen bracket"
        )
    first = int(np.argmax(flags))
    last = first
    while last + 1 < len(flags) and flags[last + 1]:
        last += 1

    def bisect(lo, hi, want_neg_hi):
        # invariant: exactly one edge of [lo, hi] is inside the window
        while hi - lo > tol * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if is_neg(mid) == want_neg_hi:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    lo_out = om_plus if first == 0 else grid[first - 1]
    om_a = bisect(lo_out, grid[first], want_neg_hi=True)
    om_b = bisect(grid[last], grid[last + 1], want_neg_hi=False)
    return float(om_a), float(om_b)


class RegionMap:
    """The partition of the Omega axis into S1, I1, S2, I2, S3.

    Window edges belong to the instability side and queries within
    tolerance of an edge come back flagged as boundary points, keeping
    scan output deterministic.
    """

    def __init__(self, om_minus, om_plus, oscillatory=None):
        self.om_minus = float(om_minus)
        self.om_plus = float(om_plus)
        self.oscillatory = (
            None if oscillatory is None else (float(oscillatory[0]), float(oscillatory[1]))
        )

    def labels(self):
        """Ordered list of RegionLabel intervals covering [0, inf)."""
        out = [
            RegionLabel("S1", 0.0, self.om_minus),
            RegionLabel("I1", self.om_minus, self.om_plus),
        ]
        if self.oscillatory is None:
            out.append(RegionLabel("S2", self.om_plus, np.inf))
        else:
            a, b = self.oscillatory
            out.append(RegionLabel("S2", self.om_plus, a))
            out.append(RegionLabel("I2", a, b))
            out.append(RegionLabel("S3", b, np.inf))
        return out

    def locate(self, omega):
        omega = float(omega)
        if omega < 0:
            raise ValueError("omega must be >= 0")
        edges = [(self.om_minus, "I1"), (self.om_plus, "I1")]
        if self.oscillatory is not None:
            a, b = self.oscillatory
            edges += [(a, "I2"), (b, "I2")]
        for edge, side in edges:
            if abs(omega - edge) <= 1e-9 * (1.0 + edge):
                lab = next(l for l in self.labels() if l.label == side)
                return RegionLabel(side, lab.lo, lab.hi, boundary=True)
        for lab in self.labels():
            if lab.lo <= omega < lab.hi:
                return lab
        return self.labels()[-1]


def region_map(cfg, bracket=None):
    """Compute the region partition once, for repeated lookups."""
    om_minus, om_plus = exponential_window(cfg)
    osc = oscillatory_window(cfg, bracket=bracket)
    return RegionMap(om_minus, om_plus, osc)


def region_of(cfg, omega):
    """Region label at a single rotation rate."""
    if omega < 0:
        raise ValueError("omega must be >= 0")
    return region_map(cfg).locate(omega)


# atomic per-grid-point work for the scan; order of evaluation is free,
# matching happens in a sequential post-pass
def _scan_point(cfg, om):
    coeffs = char_poly_coeffs(cfg.with_omega(om))
    roots = solve_cubic(coeffs)
    try:
        cls = classify_chi_roots(roots, default_classify_tol(coeffs))
        label = cls.label
    except AmbiguousClassification as amb:
        label = (EXPONENTIAL if amb.side == "exponential" else OSCILLATORY) + "*"
    return np.array(list(roots)), label


_PERMS = [np.array(p) for p in permutations(range(3))]


def _n_workers():
    env = os.environ.get("ROTOTRAP_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


class ScanTable:
    """One row per grid Omega: matched chi roots, class, and region.

    ``chis[i]`` keeps branch identity along the grid (nearest match to a
    secant prediction from the previous rows), so columns are continuous
    curves. ``warnings`` records region orderings that break the expected
    S1 < I1 < S2 < I2 < S3 sequence.
    """

    CSV_HEADER = "omega,chi1_re,chi1_im,chi2_re,chi2_im,chi3_re,chi3_im,class,region"

    def __init__(self, omegas, chis, classes, regions, warnings=()):
        self.omegas = np.asarray(omegas, dtype=float)
        self.chis = np.asarray(chis, dtype=complex)
        self.classes = list(classes)
        self.regions = list(regions)
        self.warnings = list(warnings)

    def __len__(self):
        return len(self.omegas)

    def to_csv(self):
        lines = [self.CSV_HEADER]
        for i in range(len(self.omegas)):
            vals = [fmt17(self.omegas[i])]
            for r in self.chis[i]:
                vals += [fmt17(r.real), fmt17(r.imag)]
            vals += [self.classes[i], self.regions[i]]
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"


def stability_scan(cfg, omega_grid):
    """Scan chi branches, classes, and regions over a grid of Omega.

    Grid points are evaluated independently (in parallel when
    ROTOTRAP_THREADS or the default worker count allows), then matched
    sequentially: each row's roots are assigned to branches by minimizing
    the distance to a secant extrapolation of the previous two rows.
    """
    if isinstance(omega_grid, OmegaRange):
        grid = omega_grid.values()
    else:
        grid = np.asarray(omega_grid, dtype=float)
        if grid.ndim != 1 or len(grid) < 2 or not np.all(np.diff(grid) > 0):
            raise ValueError("omega grid must be strictly increasing, length >= 2")

    nw = _n_workers()
    if nw > 1 and len(grid) >= 64:
        with ThreadPoolExecutor(max_workers=nw) as ex:
            results = list(ex.map(lambda om: _scan_point(cfg, om), grid))
    else:
        results = [_scan_point(cfg, om) for om in grid]

    # widen the window search past the grid: the oscillatory window must
    # close inside the bracket even when the grid stops short of it
    _, om_plus = exponential_window(cfg)
    end = max(grid[-1] + 1.0, _default_bracket(cfg, om_plus).stop)
    rmap = region_map(
        cfg, bracket=OmegaRange(0.0, end, max(len(grid), 2001))
    )

    n = len(grid)
    chis = np.empty((n, 3), dtype=complex)
    classes = []
    regions = []
    for i, (roots, label) in enumerate(results):
        if i == 0:
            chis[0] = roots
        else:
            pred = chis[i - 1] if i == 1 else 2.0 * chis[i - 1] - chis[i - 2]
            best = min(_PERMS, key=lambda p: np.sum(np.abs(roots[p] - pred) ** 2))
            chis[i] = roots[best]
        classes.append(label)
        regions.append(str(rmap.locate(grid[i])))

    warnings = []
    seen = [r.rstrip("*") for r in regions]
    order = {lab: k for k, lab in enumerate(REGION_ORDER)}
    for i in range(1, n):
        if order[seen[i]] < order[seen[i - 1]]:
            warnings.append(
                f"region order violation at omega={grid[i]:.6g}: "
                f"{seen[i - 1]} -> {seen[i]}"
            )
    return ScanTable(grid, chis, classes, regions, warnings)

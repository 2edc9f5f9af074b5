"""Explicit contraction of the region ``{alpha > Phi(H, D, beta)}``.

The region sits above the graph of a function that is not continuous, but it
is bounded above by the continuous majorant ``g = phi_upper + 1``. Three
homotopies, run one after the other, move any point to a fixed base point:

F     raise ``alpha`` to at least ``g(z)``: ``max(alpha, (g - alpha) t + alpha)``
G     lower it onto the graph of ``g``:     ``alpha (1 - t) + g t``
Base  slide ``z = (lam, H, D, beta)`` linearly to the base coordinate while
      ``alpha`` rides the graph, ``alpha = g(z(t))``.

Every sample of a generated path can be re-checked with :func:`verify_path`.
The module also has the pinching example showing why some majorant is
needed: for ``f(z) = 1/z`` (``f(0) = 0``) the region above ``f`` is
disconnected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import BadParameter, EmptyGrid, NotAmple, NotInside, PreconditionViolated
from .lepotier import _upper_from, phi_upper
from .rational import Q, RationalComplex, format_rational, to_rational
from .region import BaseCoordinate, GeoPoint
from .unionfind import UnionFind

PHASE_F = "F"
PHASE_G = "G"
PHASE_BASE = "Base"
_PHASE_ORDER = {PHASE_F: 0, PHASE_G: 1, PHASE_BASE: 2}


def g_majorant(s, z: BaseCoordinate) -> Q:
    """``phi_upper(H, D, beta) + 1``: continuous and strictly above the Le
    Potier function."""
    return phi_upper(s, z.H, z.D, z.beta) + 1


def _check_t(t):
    if not 0 <= t <= 1:
        raise BadParameter(f"homotopy parameter t={t} is outside [0, 1]")


def homotopy_F(alpha, t, g):
    _check_t(t)
    return max(alpha, (g - alpha) * t + alpha)


def homotopy_G(alpha, t, g):
    _check_t(t)
    if alpha < g:
        raise PreconditionViolated(f"homotopy_G needs alpha >= g, got alpha={alpha}, g={g}")
    return alpha * (1 - t) + g * t


def base_contraction(s, z: BaseCoordinate, t, z0: BaseCoordinate) -> BaseCoordinate:
    """Straight line from ``z`` (t=0) to ``z0`` (t=1). The ample cone is
    convex, so H stays ample."""
    for label, w in (("start", z), ("base", z0)):
        if not s.is_ample(w.H):
            raise NotAmple(f"{label} coordinate has non-ample H")
    t = to_rational(t)
    _check_t(t)
    return _lerp(z, t, z0)


def _lerp(z, t, z0):
    u = 1 - t
    return BaseCoordinate._trusted(
        RationalComplex._trusted(z.lam.re * u + z0.lam.re * t, z.lam.im * u + z0.lam.im * t),
        tuple(a * u + b * t for a, b in zip(z.H, z0.H)),
        tuple(a * u + b * t for a, b in zip(z.D, z0.D)),
        z.beta * u + z0.beta * t,
    )


@dataclass(frozen=True)
class PathSample:
    t: Q
    point: GeoPoint
    phase: str


@dataclass(frozen=True)
class ContractionPath:
    samples: tuple[PathSample, ...]
    base_point: GeoPoint


def canonical_base(s) -> BaseCoordinate:
    """``(0, H0, 0, 0)`` with H0 the surface's reference ample class."""
    zero = (Q(0),) * s.rank
    return BaseCoordinate(RationalComplex(0, 0), s.reference_ample, zero, 0)


def contract(s, p: GeoPoint, steps_per_phase: int, base: Optional[GeoPoint] = None, allow_uncertified=False):
    """Sample the F, G and Base homotopies, ``steps_per_phase`` points each.

    Global time runs over ``[0, 1]`` with each phase taking a third. Phase
    endpoints coincide with the next phase's start, so each boundary is
    sampled once: F and G drop their final instant, Base drops its first and
    ends exactly at the base point. Only the base coordinate of ``base`` is
    used; its alpha is always ``g`` there.
    """
    if steps_per_phase < 1:
        raise BadParameter(f"steps_per_phase must be >= 1, got {steps_per_phase}")
    z = p.z
    if not s.is_ample(z.H):
        raise NotAmple("start point has non-ample H")
    g = g_majorant(s, z)
    if not p.alpha > g - 1 and not allow_uncertified:
        raise NotInside(
            f"start point is not certified inside (alpha={format_rational(p.alpha)} <= "
            f"upper bound {format_rational(g - 1)}); pass allow_uncertified to override"
        )
    z0 = base.z if base is not None else canonical_base(s)
    if not s.is_ample(z0.H):
        raise NotAmple("base point has non-ample H")
    base_point = z0.with_alpha(g_majorant(s, z0))

    k = steps_per_phase
    third = Q(1, 3)
    samples = []
    for j in range(k):
        tau = Q(j, k)
        samples.append(PathSample(tau * third, z.with_alpha(homotopy_F(p.alpha, tau, g)), PHASE_F))
    lifted = homotopy_F(p.alpha, 1, g)
    for j in range(k):
        tau = Q(j, k)
        samples.append(PathSample((1 + tau) * third, z.with_alpha(homotopy_G(lifted, tau, g)), PHASE_G))
    # H stays ample along the segment (convex cone, both ends checked)
    for j in range(1, k + 1):
        tau = Q(j, k)
        zt = _lerp(z, tau, z0) if j < k else z0
        g_t = _upper_from(s, zt.H, zt.D, zt.beta, s.pair(zt.H, zt.H)) + 1
        samples.append(PathSample((2 + tau) * third, GeoPoint._trusted(zt.lam, zt.H, zt.D, zt.beta, g_t), PHASE_BASE))
    return ContractionPath(tuple(samples), base_point)


@dataclass(frozen=True)
class PathViolation:
    index: int
    phase: str
    reasons: tuple[str, ...]

    def __str__(self):
        return f"sample {self.index} [{self.phase}]: " + "; ".join(self.reasons)


@dataclass
class PathReport:
    violations: list = field(default_factory=list)
    max_jump: Q = Q(0)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_path(s, path: ContractionPath, tolerance=Q(1, 10**9)) -> PathReport:
    """Recheck every sample of a contraction path.

    Per sample: F keeps z fixed and alpha nondecreasing and at least its
    starting value; G keeps z fixed with ``alpha >= g(z) > phi_upper(z)``;
    Base has ``alpha == g(z)`` exactly and ample H. Globally: phases in
    order, t strictly increasing inside ``[0, 1]`` and starting at 0, last
    sample within ``tolerance`` of the base point. At most one violation is
    reported per sample. ``max_jump`` is the largest sup-norm step between
    consecutive samples.
    """
    tolerance = to_rational(tolerance)
    report = PathReport()
    samples = path.samples
    if not samples:
        report.violations.append(PathViolation(-1, "-", ("path has no samples",)))
        return report

    memo = [None, None]  # (H, D, beta) of the previous sample and its g

    def g_of(pt):
        # consecutive F/G samples share their z objects; skip the recompute
        key = memo[0]
        if key is not None and key[0] is pt.H and key[1] is pt.D and key[2] is pt.beta:
            return memo[1]
        hh = s.ample_square(pt.H)
        g = None if hh is None else _upper_from(s, pt.H, pt.D, pt.beta, hh) + 1
        memo[0], memo[1] = (pt.H, pt.D, pt.beta), g
        return g

    def z_of(pt):
        return (pt.lam, pt.H, pt.D, pt.beta)

    start = samples[0].point
    start_z = z_of(start)
    prev = None
    for idx, smp in enumerate(samples):
        reasons = []
        pt, z = smp.point, z_of(smp.point)
        if smp.phase not in _PHASE_ORDER:
            reasons.append(f"unknown phase {smp.phase!r}")
        if idx == 0 and smp.t != 0:
            reasons.append(f"path starts at t={smp.t}, not 0")
        if not 0 <= smp.t <= 1:
            reasons.append(f"t={smp.t} outside [0, 1]")
        if prev is not None:
            if smp.t <= prev.t:
                reasons.append(f"t not increasing ({prev.t} -> {smp.t})")
            if _PHASE_ORDER.get(smp.phase, 0) < _PHASE_ORDER.get(prev.phase, 0):
                reasons.append(f"phase {smp.phase} after {prev.phase}")
            jump = max((abs(a - b) for a, b in zip(pt.coordinates(), prev.point.coordinates()) if a is not b), default=0)
            report.max_jump = max(report.max_jump, jump)
        g = g_of(pt)
        if g is None:
            reasons.append("H is not ample")
        elif smp.phase == PHASE_F:
            if z != start_z:
                reasons.append("z moved during phase F")
            if pt.alpha < start.alpha:
                reasons.append("alpha dropped below its starting value")
            if prev is not None and prev.phase == PHASE_F and pt.alpha < prev.point.alpha:
                reasons.append("alpha decreased during phase F")
        elif smp.phase == PHASE_G:
            if z != start_z:
                reasons.append("z moved during phase G")
            if pt.alpha < g:
                reasons.append(
                    f"alpha={format_rational(pt.alpha)} below the majorant g={format_rational(g)}"
                )
        elif smp.phase == PHASE_BASE:
            if pt.alpha != g:
                reasons.append(f"alpha={format_rational(pt.alpha)} is off the graph g={format_rational(g)}")
        if reasons:
            report.violations.append(PathViolation(idx, smp.phase, tuple(reasons)))
        prev = smp

    last = samples[-1].point
    gap = max(abs(a - b) for a, b in zip(last.coordinates(), path.base_point.coordinates()))
    if gap > tolerance:
        report.violations.append(
            PathViolation(len(samples) - 1, samples[-1].phase, (f"endpoint is {gap} away from the base point",))
        )
    return report


def sample_margin(s, smp: PathSample) -> Q:
    """``alpha - phi_upper(z)``: positive means certified inside."""
    pt = smp.point
    return pt.alpha - phi_upper(s, pt.H, pt.D, pt.beta)


# -- the pinched example ---------------------------------------------------


def pinch_f(z) -> Q:
    return Q(0) if z == 0 else 1 / z


@dataclass
class PinchResult:
    xs: list
    alphas: list
    labels: list  # labels[i][j] for (xs[i], alphas[j]); -1 outside
    count: int
    representatives: list  # one (z, alpha) per component, in label order

    def label_at(self, z, alpha) -> int:
        i = self.xs.index(to_rational(z))
        j = self.alphas.index(to_rational(alpha))
        return self.labels[i][j]


def _grid_value(x):
    # a float spacing like 0.05 means the decimal 1/20, so that z = 0 is
    # actually on the grid
    return to_rational(repr(x)) if isinstance(x, float) else to_rational(x)


def _grid(lo, hi, spacing):
    n = math.floor((hi - lo) / spacing)
    return [lo + k * spacing for k in range(n + 1)]


def pinch_demo(grid_x, grid_alpha, spacing, f=pinch_f) -> PinchResult:
    """Connected components of ``{(z, alpha) : f(z) < alpha}`` sampled on a
    grid, joining 4-neighbours. Coordinates are exact rationals (floats are
    read as the decimal they print as), so the sample at ``z = 0`` really is
    ``f(0) = 0``."""
    spacing = _grid_value(spacing)
    if spacing <= 0:
        raise BadParameter(f"spacing must be positive, got {spacing}")
    x0, x1 = (_grid_value(v) for v in grid_x)
    a0, a1 = (_grid_value(v) for v in grid_alpha)
    if x1 < x0 or a1 < a0:
        raise EmptyGrid("grid ranges are empty")
    xs, alphas = _grid(x0, x1, spacing), _grid(a0, a1, spacing)
    nx, na = len(xs), len(alphas)
    inside = [[f(x) < a for a in alphas] for x in xs]

    uf = UnionFind(nx * na)
    for i in range(nx):
        for j in range(na):
            if not inside[i][j]:
                continue
            if i + 1 < nx and inside[i + 1][j]:
                uf.union(i * na + j, (i + 1) * na + j)
            if j + 1 < na and inside[i][j + 1]:
                uf.union(i * na + j, i * na + j + 1)

    labels = [[-1] * na for _ in range(nx)]
    roots = {}
    reps = []
    for i in range(nx):
        for j in range(na):
            if inside[i][j]:
                root = uf.find(i * na + j)
                if root not in roots:
                    roots[root] = len(roots)
                    reps.append((xs[i], alphas[j]))
                labels[i][j] = roots[root]
    return PinchResult(xs, alphas, labels, len(roots), reps)

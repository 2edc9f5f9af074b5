"""Brackets for the generalized Le Potier function.

For an ample class ``H``, a twisting class ``D`` and a slope ``beta`` the
function is a limsup of ``(ch2 - D.c1) / (H^2 r)`` over slope-stable sheaves
whose (normalized) slope tends to ``beta``. It is not computable in general;
we bracket it:

* from above by the closed form ``((beta - D.H/H^2)^2 - D^2/H^2) / 2``, valid
  on every surface;
* from below (relative to a declared family of stable classes) by enumerating
  line bundles in a coordinate box plus the surface's declared stable
  characters, and taking suprema over slope windows.

Slopes here are normalized, ``(H.c1) / (H^2 r)``. With that choice both the
function and the bound satisfy ``F(tH, D, beta) = F(H, D, t beta) / t^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

from .chern import ChernCharacter, bogomolov_ok
from .errors import BadParameter, EmptyGrid
from .rational import Infinite, NEG_INF, Q, as_vector, to_rational

CLOSED = "closed"
PUNCTURED = "punctured"
CONVENTIONS = (CLOSED, PUNCTURED)


@dataclass(frozen=True)
class EnumerationBox:
    """Search box for candidate classes.

    ``coord_bound`` bounds every line-bundle coordinate; ``ranges`` optionally
    replaces it with explicit inclusive per-coordinate ranges (used when a box
    is split into pieces).
    """

    coord_bound: int
    max_rank: int = 8
    slope_tolerance: Q = Q(0)
    ranges: Optional[tuple[tuple[int, int], ...]] = None

    def __post_init__(self):
        if self.coord_bound < 1:
            raise BadParameter(f"coord_bound must be >= 1, got {self.coord_bound}")
        if self.max_rank < 1:
            raise BadParameter(f"max_rank must be >= 1, got {self.max_rank}")
        object.__setattr__(self, "slope_tolerance", to_rational(self.slope_tolerance))

    def coordinate_ranges(self, rho: int) -> tuple[tuple[int, int], ...]:
        if self.ranges is not None:
            if len(self.ranges) != rho:
                raise BadParameter(f"box has {len(self.ranges)} ranges, surface rank is {rho}")
            return self.ranges
        return ((-self.coord_bound, self.coord_bound),) * rho

    def split(self, rho: int, parts: int) -> list[EnumerationBox]:
        """Partition the first coordinate range into ``parts`` disjoint boxes."""
        ranges = list(self.coordinate_ranges(rho))
        lo, hi = ranges[0]
        width = hi - lo + 1
        parts = max(1, min(parts, width))
        cuts = [lo + (width * k) // parts for k in range(parts + 1)]
        boxes = []
        for a, b in zip(cuts, cuts[1:]):
            if a <= b - 1:
                boxes.append(replace(self, ranges=tuple([(a, b - 1)] + ranges[1:])))
        return boxes


class SlopeSup(NamedTuple):
    value: object  # Q or NEG_INF
    witness: Optional[ChernCharacter]


@dataclass(frozen=True)
class WindowEntry:
    delta: Q
    punctured_sup: object
    witness: Optional[ChernCharacter]


@dataclass(frozen=True)
class PhiBracket:
    upper: Q
    pointwise: object
    witness: Optional[ChernCharacter]
    window_profile: tuple[WindowEntry, ...] = field(default=())
    convention: str = CLOSED

    def estimate(self):
        """Headline estimate for the requested limsup convention."""
        tail = self.window_profile[-1].punctured_sup if self.window_profile else NEG_INF
        if self.convention == PUNCTURED:
            return tail
        return max(self.pointwise, tail)


def phi_upper(s, H, D, beta) -> Q:
    """Closed-form upper bound ``((beta - D.H/H^2)^2 - D^2/H^2) / 2``."""
    H = as_vector(H, s.rank)
    hh = s.ample_square(H)
    if hh is None:
        s.require_ample(H)
    return _upper_from(s, H, as_vector(D, s.rank), to_rational(beta), hh)


def _upper_from(s, H, D, beta, hh):
    shift = beta - s.pair(D, H) / hh
    return (shift * shift - s.pair(D, D) / hh) / 2


def _in_slab(w, lo, hi, ranges):
    """Integer points of the box ``ranges`` with ``lo <= w.x <= hi``, in
    lexicographic order. ``lo``/``hi`` may be None (unbounded side).

    Depth-first with interval pruning on the partial sum; the last coordinate
    is solved for directly.
    """
    n = len(w)
    lo_parts = [min(wk * a, wk * b) for wk, (a, b) in zip(w, ranges)]
    hi_parts = [max(wk * a, wk * b) for wk, (a, b) in zip(w, ranges)]
    suf_lo = [Q(0)] * (n + 1)
    suf_hi = [Q(0)] * (n + 1)
    for k in range(n - 1, -1, -1):
        suf_lo[k] = suf_lo[k + 1] + lo_parts[k]
        suf_hi[k] = suf_hi[k + 1] + hi_parts[k]

    def last(partial, prefix):
        wk = w[-1]
        a, b = ranges[-1]
        if wk == 0:
            if (lo is None or partial >= lo) and (hi is None or partial <= hi):
                for x in range(a, b + 1):
                    yield prefix + (x,)
            return
        bounds = [(lo - partial) / wk if lo is not None else None, (hi - partial) / wk if hi is not None else None]
        if wk < 0:
            bounds.reverse()
        x_lo = a if bounds[0] is None else max(a, math.ceil(bounds[0]))
        x_hi = b if bounds[1] is None else min(b, math.floor(bounds[1]))
        for x in range(x_lo, x_hi + 1):
            yield prefix + (x,)

    def rec(k, partial, prefix):
        if k == n - 1:
            yield from last(partial, prefix)
            return
        a, b = ranges[k]
        for x in range(a, b + 1):
            val = partial + w[k] * x
            if hi is not None and val + suf_lo[k + 1] > hi:
                continue
            if lo is not None and val + suf_hi[k + 1] < lo:
                continue
            yield from rec(k + 1, val, prefix + (x,))

    yield from rec(0, Q(0), ())


def _applies(s, fixed_H, H) -> bool:
    """Is a character declared for polarization ``fixed_H`` usable at ``H``?
    Slope stability depends only on the ray of H, so positive multiples match."""
    if fixed_H is None:
        return True
    ratio = None
    for a, b in zip(fixed_H, H):
        if a == 0 or b == 0:
            if a != b:
                return False
            continue
        q = b / a
        if q <= 0 or (ratio is not None and q != ratio):
            return False
        ratio = q
    return ratio is not None


def enumerate_candidates(s, H, beta, delta=None, box: EnumerationBox = None) -> list[ChernCharacter]:
    """Candidate stable classes with normalized slope in ``[beta-delta, beta+delta]``.

    Line bundles ``O(L)`` with integral ``L`` in the box come first, in
    lexicographic order of ``L``; applicable declared stable characters follow
    in file order. ``delta=None`` uses ``box.slope_tolerance``; pass
    ``delta=math.inf`` for no slope restriction.
    """
    if box is None:
        raise BadParameter("an EnumerationBox is required")
    H = s.require_ample(H)
    beta = to_rational(beta)
    if delta is None:
        delta = box.slope_tolerance
    if delta == math.inf:
        lo = hi = None
    else:
        delta = to_rational(delta)
        if delta < 0:
            raise BadParameter(f"window half-width must be >= 0, got {delta}")
        lo, hi = beta - delta, beta + delta
    hh = s.pair(H, H)
    w = s.gram_times(H)
    ranges = box.coordinate_ranges(s.rank)

    out = []
    seen = set()
    for coords in _in_slab(w, None if lo is None else lo * hh, None if hi is None else hi * hh, ranges):
        L = tuple(Q(x) for x in coords)
        v = ChernCharacter(1, L, s.pair(L, L) / 2)
        out.append(v)
        seen.add(v)
    for sc in s.stable_characters:
        v = sc.character
        if v in seen or not (1 <= v.r <= box.max_rank) or not _applies(s, sc.fixed_H, H):
            continue
        if not bogomolov_ok(s, v):
            continue
        mu = s.pair(H, v.c1) / (hh * v.r)
        if (lo is None or mu >= lo) and (hi is None or mu <= hi):
            out.append(v)
            seen.add(v)
    return out


def candidate_value(s, v: ChernCharacter, H, D) -> Q:
    """``(ch2 - D.c1) / (H^2 r)``."""
    return (v.ch2 - s.pair(D, v.c1)) / (s.pair(H, H) * v.r)


def _witness_key(v):
    return (v.r, v.c1, v.ch2)


def _best(pairs):
    """Max value; ties go to the smallest witness so the result does not
    depend on enumeration order."""
    best = SlopeSup(NEG_INF, None)
    for value, v in pairs:
        if (
            best.witness is None
            or value > best.value
            or (value == best.value and _witness_key(v) < _witness_key(best.witness))
        ):
            best = SlopeSup(value, v)
    return best


def merge_sups(results) -> SlopeSup:
    """Combine suprema computed on disjoint sub-boxes."""
    return _best((r.value, r.witness) for r in results if r.witness is not None)


def phi_at_slope(s, H, D, beta, box: EnumerationBox) -> SlopeSup:
    """Supremum of the Le Potier quantity over candidates at slope exactly ``beta``."""
    D = as_vector(D, s.rank)
    cands = enumerate_candidates(s, H, beta, 0, box)
    return _best((candidate_value(s, v, H, D), v) for v in cands)


def phi_profile(s, H, D, beta, box: EnumerationBox, grid, convention=CLOSED) -> PhiBracket:
    """Upper bound, pointwise sup, and punctured-window sups over ``grid``.

    ``grid`` must be strictly decreasing and positive; the window for ``delta``
    holds candidates with ``0 < |mu - beta| <= delta``.
    """
    if convention not in CONVENTIONS:
        raise BadParameter(f"unknown convention {convention!r}")
    grid = [to_rational(d) for d in grid]
    if not grid:
        raise EmptyGrid("delta grid is empty")
    if any(d <= 0 for d in grid) or any(a <= b for a, b in zip(grid, grid[1:])):
        raise BadParameter("delta grid must be positive and strictly decreasing")
    H = s.require_ample(H)
    D = as_vector(D, s.rank)
    beta = to_rational(beta)
    upper = phi_upper(s, H, D, beta)

    hh = s.pair(H, H)
    scored = []
    for v in enumerate_candidates(s, H, beta, grid[0], box):
        dist = abs(s.pair(H, v.c1) / (hh * v.r) - beta)
        scored.append((dist, candidate_value(s, v, H, D), v))
    pointwise = _best((val, v) for dist, val, v in scored if dist == 0)
    profile = []
    for d in grid:
        sup = _best((val, v) for dist, val, v in scored if 0 < dist <= d)
        profile.append(WindowEntry(d, sup.value, sup.witness))
    return PhiBracket(upper, pointwise.value, pointwise.witness, tuple(profile), convention)


def is_minus_infinity(x) -> bool:
    return isinstance(x, Infinite) and x.sign < 0

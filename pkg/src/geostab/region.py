"""Coordinates ``(lam, H, D, beta, alpha)`` on the geometric stability
manifold, central charges, and certified membership in the region
``Phi(H, D, beta) < alpha``.

The central charge at ``lam = 0`` is

    Z0(v) = (-ch2 + D.c1 + alpha H^2 r) + i (H.c1 - beta H^2 r)

and the complex factor acts by ``Z = exp(i pi lam) Z0``. A point class has
``Z0 = -1``; a class on the real axis (normalized slope ``beta``) has
``Re Z0 = H^2 r (alpha - value)``, so positivity there is exactly the region
condition.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .chern import ChernCharacter, bogomolov_ok, skyscraper
from .errors import BadParameter, DimensionMismatch, NotPositiveDefinite
from .lattice import signature
from .lepotier import (
    CLOSED,
    CONVENTIONS,
    EnumerationBox,
    PhiBracket,
    _applies,
    candidate_value,
    enumerate_candidates,
    phi_at_slope,
    phi_profile,
    phi_upper,
)
from .rational import (
    Q,
    DEFAULT_PRECISION,
    POS_INF,
    RationalComplex,
    as_vector,
    format_rational,
    format_vector,
    outward_enclosure,
    to_rational,
)


@dataclass(frozen=True)
class BaseCoordinate:
    """The ``(lam, H, D, beta)`` part of a point; ``alpha`` is added on top."""

    lam: RationalComplex
    H: tuple[Q, ...]
    D: tuple[Q, ...]
    beta: Q

    def __post_init__(self):
        object.__setattr__(self, "lam", RationalComplex.coerce(self.lam))
        object.__setattr__(self, "H", as_vector(self.H))
        object.__setattr__(self, "D", as_vector(self.D, len(self.H)))
        object.__setattr__(self, "beta", to_rational(self.beta))

    def with_alpha(self, alpha) -> GeoPoint:
        return GeoPoint._trusted(self.lam, self.H, self.D, self.beta, to_rational(alpha))

    @classmethod
    def _trusted(cls, lam, H, D, beta):
        """Build from already-canonical fields, skipping coercion."""
        obj = object.__new__(cls)
        obj.__dict__.update(lam=lam, H=H, D=D, beta=beta)
        return obj


@dataclass(frozen=True)
class GeoPoint:
    lam: RationalComplex
    H: tuple[Q, ...]
    D: tuple[Q, ...]
    beta: Q
    alpha: Q

    def __post_init__(self):
        object.__setattr__(self, "lam", RationalComplex.coerce(self.lam))
        object.__setattr__(self, "H", as_vector(self.H))
        object.__setattr__(self, "D", as_vector(self.D, len(self.H)))
        object.__setattr__(self, "beta", to_rational(self.beta))
        object.__setattr__(self, "alpha", to_rational(self.alpha))

    @classmethod
    def _trusted(cls, lam, H, D, beta, alpha):
        obj = object.__new__(cls)
        obj.__dict__.update(lam=lam, H=H, D=D, beta=beta, alpha=alpha)
        return obj

    @property
    def z(self) -> BaseCoordinate:
        return BaseCoordinate._trusted(self.lam, self.H, self.D, self.beta)

    def coordinates(self) -> tuple[Q, ...]:
        """Flat real coordinates, used for distances along paths."""
        return (self.lam.re, self.lam.im, *self.H, *self.D, self.beta, self.alpha)

    def __str__(self):
        return (
            f"(lam={self.lam}, H={format_vector(self.H)}, D={format_vector(self.D)}, "
            f"beta={format_rational(self.beta)}, alpha={format_rational(self.alpha)})"
        )


_I_POWERS = (
    RationalComplex(1, 0),
    RationalComplex(0, 1),
    RationalComplex(-1, 0),
    RationalComplex(0, -1),
)


@dataclass(frozen=True)
class ChargeValue:
    """The exact complex number ``exp(i pi lam) * base``.

    ``lam`` and ``base`` are Gaussian rationals. The pair is kept in a canonical
    form (``0 <= Re lam < 1/2``, rotating ``base`` by powers of ``i``), which
    makes ``==`` agree with equality of the complex numbers.
    """

    lam: RationalComplex
    base: RationalComplex

    def __post_init__(self):
        lam = RationalComplex.coerce(self.lam)
        base = RationalComplex.coerce(self.base)
        if not base:
            lam = RationalComplex(0, 0)
        else:
            k = math.floor(2 * lam.re)
            lam = RationalComplex(lam.re - Q(k, 2), lam.im)
            base = base * _I_POWERS[k % 4]
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "base", base)

    def rotate(self, mu) -> ChargeValue:
        """Multiply by ``exp(i pi mu)``."""
        return ChargeValue(self.lam + RationalComplex.coerce(mu), self.base)

    def __add__(self, other):
        if not isinstance(other, ChargeValue):
            return NotImplemented
        if not other.base:
            return self
        if not self.base:
            return other
        if self.lam != other.lam:
            raise ValueError("charges with different rotations cannot be added exactly")
        return ChargeValue(self.lam, self.base + other.base)

    def __neg__(self):
        return ChargeValue(self.lam, -self.base)

    def __sub__(self, other):
        return self + (-other)

    def __complex__(self):
        return cmath.exp(1j * math.pi * complex(self.lam)) * complex(self.base)

    def enclosure(self, precision=DEFAULT_PRECISION):
        """Rigorous rational boxes ``((re_lo, re_hi), (im_lo, im_hi))``."""
        if not self.lam:
            re, im = self.base.re, self.base.im
            return (re, re), (im, im)
        return outward_enclosure(self.lam, self.base, precision)


def _check_dims(s, p: GeoPoint, v: Optional[ChernCharacter] = None):
    if len(p.H) != s.rank:
        raise DimensionMismatch(f"point has {len(p.H)} NS coordinates, surface rank is {s.rank}")
    if v is not None and len(v.c1) != s.rank:
        raise DimensionMismatch(f"character has {len(v.c1)} NS coordinates, surface rank is {s.rank}")


def charge_at_origin(s, p: GeoPoint, v: ChernCharacter) -> RationalComplex:
    """``Z0(v)``: the central charge with the complex factor set to ``lam = 0``."""
    _check_dims(s, p, v)
    hh = s.pair(p.H, p.H)
    re = -v.ch2 + s.pair(p.D, v.c1) + p.alpha * hh * v.r
    im = s.pair(p.H, v.c1) - p.beta * hh * v.r
    return RationalComplex(re, im)


def central_charge(s, p: GeoPoint, v: ChernCharacter) -> ChargeValue:
    return ChargeValue(p.lam, charge_at_origin(s, p, v))


class Verdict(enum.Enum):
    INSIDE = "Inside"
    OUTSIDE = "Outside"
    UNKNOWN = "Unknown"

    @property
    def exit_code(self) -> int:
        return {"Inside": 0, "Outside": 1, "Unknown": 2}[self.value]


@dataclass(frozen=True)
class InsideCertificate:
    """``alpha > upper`` where ``upper`` is the closed-form bound."""

    alpha: Q
    upper: Q


@dataclass(frozen=True)
class OutsideCertificate:
    """A candidate at slope ``beta`` whose value is at least ``alpha``."""

    witness: ChernCharacter
    value: Q
    convention: str = CLOSED


@dataclass(frozen=True)
class UnknownCertificate:
    pointwise: object
    upper: Q


Certificate = Union[InsideCertificate, OutsideCertificate, UnknownCertificate]


@dataclass(frozen=True)
class Membership:
    verdict: Verdict
    certificate: Certificate
    bracket: Optional[PhiBracket] = None


def membership(s, p: GeoPoint, box: EnumerationBox, grid=None, convention=CLOSED) -> Membership:
    """Three-valued test of ``Phi(H, D, beta) < alpha``.

    Inside is certified by the closed-form upper bound and holds on every
    surface. Outside needs a witness at slope exactly ``beta``, which only
    bounds the limsup from below under the closed convention; with the
    punctured convention no finite computation certifies Outside.
    """
    if convention not in CONVENTIONS:
        raise BadParameter(f"unknown convention {convention!r}")
    _check_dims(s, p)
    H = s.require_ample(p.H)
    upper = phi_upper(s, H, p.D, p.beta)
    bracket = phi_profile(s, H, p.D, p.beta, box, grid, convention) if grid else None
    if p.alpha > upper:
        return Membership(Verdict.INSIDE, InsideCertificate(p.alpha, upper), bracket)
    if bracket is not None:
        point_sup = (bracket.pointwise, bracket.witness)
    else:
        point_sup = tuple(phi_at_slope(s, H, p.D, p.beta, box))
    if convention == CLOSED and point_sup[1] is not None and p.alpha <= point_sup[0]:
        return Membership(Verdict.OUTSIDE, OutsideCertificate(point_sup[1], point_sup[0], CLOSED), bracket)
    return Membership(Verdict.UNKNOWN, UnknownCertificate(point_sup[0], upper), bracket)


def _declared(s, v: ChernCharacter, H) -> bool:
    """Is ``v`` in the candidate family: an integral line bundle or an
    applicable declared stable character?"""
    if v.r == 1 and all(c.denominator == 1 for c in v.c1) and v.ch2 == s.pair(v.c1, v.c1) / 2:
        return True
    return any(sc.character == v and _applies(s, sc.fixed_H, H) for sc in s.stable_characters)


def verify_membership(s, p: GeoPoint, m: Membership) -> bool:
    """Re-check a verdict from its certificate alone."""
    c = m.certificate
    if m.verdict is Verdict.INSIDE:
        return (
            isinstance(c, InsideCertificate)
            and c.alpha == p.alpha
            and c.upper == phi_upper(s, p.H, p.D, p.beta)
            and p.alpha > c.upper
        )
    if m.verdict is Verdict.OUTSIDE:
        if not isinstance(c, OutsideCertificate) or c.convention != CLOSED:
            return False
        v = c.witness
        if v.r < 1 or not bogomolov_ok(s, v) or not _declared(s, v, p.H):
            return False
        hh = s.pair(p.H, p.H)
        at_slope = s.pair(p.H, v.c1) == p.beta * hh * v.r
        value = candidate_value(s, v, p.H, p.D)
        return at_slope and value == c.value and p.alpha <= value
    if m.verdict is Verdict.UNKNOWN:
        return (
            isinstance(c, UnknownCertificate)
            and c.upper == phi_upper(s, p.H, p.D, p.beta)
            and c.pointwise < p.alpha <= c.upper
        )
    return False


class PositivityReport(NamedTuple):
    ok: bool
    violations: list


def charge_positivity_check(s, p: GeoPoint, box: EnumerationBox) -> PositivityReport:
    """Every candidate on the real axis (slope exactly ``beta``) must have
    ``Re Z0 > 0``; returns the ones that do not."""
    _check_dims(s, p)
    s.require_ample(p.H)
    bad = [v for v in enumerate_candidates(s, p.H, p.beta, 0, box) if charge_at_origin(s, p, v).re <= 0]
    return PositivityReport(not bad, bad)


def support_probe(s, p: GeoPoint, box: EnumerationBox, norm_gram, candidates=None):
    """Sampled infimum of ``|Z0(v)| / ||v||`` over nonzero candidate classes.

    ``norm_gram`` is a positive definite matrix on ``(r, c1, ch2)`` coordinates.
    By default the candidates are every enumerated class regardless of slope
    plus the point class. Returns a float, or POS_INF when nothing was
    sampled. A positive value is consistent with the support property on the
    sample; it proves nothing beyond it.
    """
    n = s.rank + 2
    norm = [[to_rational(x) for x in row] for row in norm_gram]
    if len(norm) != n or any(len(row) != n for row in norm):
        raise DimensionMismatch(f"norm matrix must be {n}x{n}")
    if any(norm[i][j] != norm[j][i] for i in range(n) for j in range(n)):
        raise NotPositiveDefinite("norm matrix is not symmetric")
    if signature(norm) != (n, 0, 0):
        raise NotPositiveDefinite(f"norm matrix has signature {signature(norm)}")
    _check_dims(s, p)
    if candidates is None:
        candidates = enumerate_candidates(s, p.H, p.beta, math.inf, box) + [skyscraper(s.rank)]
    best = None
    for v in candidates:
        if not v:
            continue
        x = v.as_tuple()
        nv = sum(x[i] * norm[i][j] * x[j] for i in range(n) for j in range(n))
        ratio = charge_at_origin(s, p, v).abs2() / nv
        if best is None or ratio < best:
            best = ratio
    if best is None:
        return POS_INF
    return math.sqrt(best)


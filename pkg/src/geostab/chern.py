"""Numerical Chern characters ``(rank, c1, ch2)`` on a surface.

``c1`` lives in NS(X) tensor Q (coordinates in the surface's basis) and
``ch2`` in H^4(X, Q) = Q, so a class is a rank, a rational vector and a
rational number. Functions that need the intersection pairing take the
validated surface as first argument.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, NonpositiveRank
from .rational import Q, as_vector, format_rational, format_vector, to_rational


@dataclass(frozen=True)
class ChernCharacter:
    r: int
    c1: tuple[Q, ...]
    ch2: Q

    def __post_init__(self):
        if isinstance(self.r, bool) or int(self.r) != self.r:
            raise TypeError(f"rank must be an integer, got {self.r!r}")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "c1", as_vector(self.c1))
        object.__setattr__(self, "ch2", to_rational(self.ch2))

    def _check(self, other):
        if len(self.c1) != len(other.c1):
            raise DimensionMismatch(f"c1 lengths differ: {len(self.c1)} vs {len(other.c1)}")

    def __add__(self, other):
        self._check(other)
        return ChernCharacter(
            self.r + other.r, tuple(a + b for a, b in zip(self.c1, other.c1)), self.ch2 + other.ch2
        )

    def __neg__(self):
        return ChernCharacter(-self.r, tuple(-a for a in self.c1), -self.ch2)

    def __sub__(self, other):
        return self + (-other)

    def __bool__(self):
        return bool(self.r) or any(self.c1) or bool(self.ch2)

    def as_tuple(self) -> tuple[Q, ...]:
        """Flat coordinates ``(r, c1_1, ..., c1_rho, ch2)``."""
        return (Q(self.r), *self.c1, self.ch2)

    def __str__(self):
        return f"({self.r},{format_vector(self.c1)},{format_rational(self.ch2)})"


def skyscraper(rho: int) -> ChernCharacter:
    """Class of a point: ``(0, 0, 1)``."""
    return ChernCharacter(0, (Q(0),) * rho, Q(1))


def line_bundle(s, L) -> ChernCharacter:
    L = as_vector(L, s.rank)
    return ChernCharacter(1, L, s.pair(L, L) / 2)


def slope(s, v: ChernCharacter, H) -> Q:
    """Mumford slope ``(H . c1) / r``."""
    if v.r <= 0:
        raise NonpositiveRank(f"slope needs positive rank, got r={v.r}")
    H = s.require_ample(H)
    return s.pair(H, v.c1) / v.r


def normalized_slope(s, v: ChernCharacter, H) -> Q:
    """``(H . c1) / (H^2 r)``: the slope variable of the Le Potier function.

    Rescaling ``H`` by ``t`` divides it by ``t``, the same way the closed-form
    upper bound reparametrizes; with the plain slope the two would disagree.
    """
    H = s.require_ample(H)
    return slope(s, v, H) / s.pair(H, H)


def discriminant(s, v: ChernCharacter) -> Q:
    """``c1^2 - 2 r ch2``; nonnegative for slope-semistable sheaves (Bogomolov)."""
    return s.pair(v.c1, v.c1) - 2 * v.r * v.ch2


def bogomolov_ok(s, v: ChernCharacter) -> bool:
    return discriminant(s, v) >= 0


def twist(s, v: ChernCharacter, L) -> ChernCharacter:
    """Chern character of ``E (x) L``."""
    L = as_vector(L, s.rank)
    if len(v.c1) != s.rank:
        raise DimensionMismatch(f"c1 has length {len(v.c1)}, surface rank is {s.rank}")
    r = v.r
    c1 = tuple(a + r * b for a, b in zip(v.c1, L))
    ch2 = v.ch2 + s.pair(v.c1, L) + r * s.pair(L, L) / 2
    return ChernCharacter(r, c1, ch2)


def parse_character(obj, rho=None) -> ChernCharacter:
    """Build a character from ``{"rank"|"r": .., "c1": [..], "ch2": ..}``."""
    r = obj.get("rank", obj.get("r"))
    if r is None or "c1" not in obj or "ch2" not in obj:
        raise ValueError(f"character needs rank, c1 and ch2: {obj!r}")
    r_q = to_rational(r)
    if r_q.denominator != 1:
        raise ValueError(f"rank must be an integer, got {r!r}")
    c1 = obj["c1"]
    if not isinstance(c1, (list, tuple)):
        c1 = [c1]
    return ChernCharacter(int(r_q), as_vector(c1, rho), to_rational(obj["ch2"]))

"""Exact number plumbing: rational coercion, formatting, infinities, and
Gaussian rationals.

The rational type is ``gmpy2.mpq`` (exported as ``Q``); it mixes with ints
and Fractions and compares/hashes like them. Binary floats are dyadic
rationals, so converting a float is exact and no rounding is needed on the
way in. Rounding only happens on the way out, when a
transcendental quantity (a rotation by ``exp(i*pi*lam)``) has to be printed;
see :func:`outward_enclosure`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

from gmpy2 import mpq as Q

from .errors import DimensionMismatch

DEFAULT_PRECISION = Q(1, 2**40)

_QTYPE = type(Q(0))

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")


def to_rational(x) -> Q:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions (and other numbers.Rational), finite floats
    (converted exactly), Decimals, and strings of the form ``"p/q"``,
    ``"-3"``, ``"0.25"`` or ``"1e-3"``.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if type(x) is _QTYPE:
        return x
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, Rational):
        return Q(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Q(x)
    if isinstance(x, Decimal):
        if not x.is_finite():
            raise ValueError(f"non-finite value {x!r}")
        f = Fraction(x)
        return Q(f.numerator, f.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def parse_rational(text: str) -> Q:
    m = _RATIONAL_RE.match(text)
    if m:
        q = int(m.group(2))
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Q(int(m.group(1)), q)
    try:
        f = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational literal: {text!r}") from None
    return Q(f.numerator, f.denominator)


def format_rational(q) -> str:
    """Canonical text form: ``"p/q"`` in lowest terms, bare ``"p"`` for integers."""
    if isinstance(q, Infinite):
        return str(q)
    q = to_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_vector(coords, length=None) -> tuple[Q, ...]:
    if type(coords) is tuple and all(type(c) is _QTYPE for c in coords):
        vec = coords
    else:
        vec = tuple(to_rational(c) for c in coords)
    if length is not None and len(vec) != length:
        raise DimensionMismatch(f"expected a vector of length {length}, got {len(vec)}")
    return vec


def format_vector(vec) -> str:
    return "(" + ",".join(format_rational(c) for c in vec) + ")"


@total_ordering
class Infinite:
    """Signed infinity sentinel for empty suprema and infima.

    Compares correctly against any real number; never mixes into arithmetic.
    """

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = 1 if sign > 0 else -1

    def __eq__(self, other):
        return isinstance(other, Infinite) and other.sign == self.sign

    def __lt__(self, other):
        if isinstance(other, Infinite):
            return self.sign < other.sign
        return self.sign < 0

    def __gt__(self, other):
        if isinstance(other, Infinite):
            return self.sign > other.sign
        return self.sign > 0

    def __hash__(self):
        return hash(("Infinite", self.sign))

    def __float__(self):
        return math.inf * self.sign

    def __str__(self):
        return "+inf" if self.sign > 0 else "-inf"

    __repr__ = __str__


NEG_INF = Infinite(-1)
POS_INF = Infinite(1)


@dataclass(frozen=True)
class RationalComplex:
    """A complex number with exact rational real and imaginary parts."""

    re: Q = Q(0)
    im: Q = Q(0)

    def __post_init__(self):
        object.__setattr__(self, "re", to_rational(self.re))
        object.__setattr__(self, "im", to_rational(self.im))

    @classmethod
    def _trusted(cls, re, im):
        obj = object.__new__(cls)
        obj.__dict__.update(re=re, im=im)
        return obj

    @classmethod
    def coerce(cls, z) -> RationalComplex:
        if isinstance(z, RationalComplex):
            return z
        if isinstance(z, complex):
            return cls(z.real, z.imag)
        if isinstance(z, (tuple, list)) and len(z) == 2:
            return cls(z[0], z[1])
        return cls(z, 0)

    def __add__(self, other):
        other = RationalComplex.coerce(other)
        return RationalComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-RationalComplex.coerce(other))

    def __mul__(self, other):
        other = RationalComplex.coerce(other)
        return RationalComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def abs2(self) -> Q:
        return self.re * self.re + self.im * self.im

    def __str__(self):
        sign = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)}{sign}{format_rational(abs(self.im))}i"


def outward_round(lo, hi, precision=DEFAULT_PRECISION) -> tuple[Q, Q]:
    """Widen ``[lo, hi]`` to endpoints on the grid ``precision * Z``."""
    precision = to_rational(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    lo_q = math.floor(to_rational(lo) / precision) * precision
    hi_q = math.ceil(to_rational(hi) / precision) * precision
    return Q(lo_q), Q(hi_q)


def outward_enclosure(lam: RationalComplex, base: RationalComplex, precision=DEFAULT_PRECISION):
    """Rational boxes containing the real and imaginary parts of
    ``exp(i*pi*lam) * base``, rounded outward to ``precision``.

    Uses mpmath interval arithmetic, so the boxes are rigorous.
    """
    from mpmath import iv

    precision = to_rational(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")

    def ivq(q):
        return iv.mpf(q.numerator) / iv.mpf(q.denominator)

    # enough bits that interval width is far below the output grid
    bits = max(96, precision.denominator.bit_length() - precision.numerator.bit_length() + 64)
    saved = iv.prec
    iv.prec = bits
    try:
        angle = iv.pi * ivq(lam.re)
        scale = iv.exp(-iv.pi * ivq(lam.im))
        c, s = iv.cos(angle) * scale, iv.sin(angle) * scale
        br, bi = ivq(base.re), ivq(base.im)
        re_iv = c * br - s * bi
        im_iv = s * br + c * bi
    finally:
        iv.prec = saved

    # interval endpoints are binary floats; read them off exactly
    def exact(mpf_tuple):
        sign, man, exp, _ = mpf_tuple
        value = Q(int(man)) * Q(2) ** int(exp)
        return -value if sign else value

    re_box = outward_round(*(exact(e) for e in re_iv._mpi_), precision)
    im_box = outward_round(*(exact(e) for e in im_iv._mpi_), precision)
    return re_box, im_box

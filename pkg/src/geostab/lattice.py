"""Neron-Severi lattice arithmetic: the intersection form, its signature,
and ample-cone membership.

All arithmetic is exact over the rationals. The signature is computed by
symmetric Gaussian elimination (Sylvester's law of inertia) rather than from
floating-point eigenvalues.

A surface is described by :class:`SurfaceData` and becomes usable once
:func:`validate_surface` turns it into a :class:`ValidatedSurface`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

from .chern import ChernCharacter, parse_character
from .errors import (
    DimensionMismatch,
    EmptyAmpleCone,
    InconsistentAmpleCone,
    InvalidSurface,
    NonIntegralGram,
    NonSymmetric,
    NotAmple,
    SurfaceFormatError,
    WrongSignature,
)
from .rational import Q, as_vector, format_vector, to_rational

POLYHEDRAL = "polyhedral"
POSITIVE_CONE = "positive_cone"
ALL_POLARIZATIONS = "all_polarizations"


class Signature(NamedTuple):
    pos: int
    neg: int
    zero: int = 0

    def __str__(self):
        if self.zero:
            return f"({self.pos},{self.neg}) degenerate, nullity {self.zero}"
        return f"({self.pos},{self.neg})"


def signature(matrix) -> Signature:
    """Inertia of a symmetric rational matrix by exact congruence reduction.

    Each step either finds a nonzero diagonal pivot or, when the remaining
    diagonal is zero, adds row/column ``j`` to row/column ``i`` so that the new
    pivot is ``2 a_ij``. The pivot signs give the signature.
    """
    a = [[to_rational(x) for x in row] for row in matrix]
    n = len(a)
    pos = neg = 0
    while n:
        i = next((k for k in range(n) if a[k][k] != 0), None)
        if i is None:
            ij = next(((p, q) for p in range(n) for q in range(p + 1, n) if a[p][q] != 0), None)
            if ij is None:
                return Signature(pos, neg, n)
            i, j = ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
        if i:
            a[0], a[i] = a[i], a[0]
            for row in a:
                row[0], row[i] = row[i], row[0]
        p = a[0][0]
        if p > 0:
            pos += 1
        else:
            neg += 1
        head = a[0]
        a = [[row[c] - row[0] * head[c] / p for c in range(1, n)] for row in a[1:]]
        n -= 1
    return Signature(pos, neg, 0)


def _row_reduce(rows, ncols):
    """Reduced row echelon form; returns (rref rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def matrix_rank(rows, ncols) -> int:
    return len(_row_reduce(rows, ncols)[1])


def nullspace(rows, ncols) -> list[tuple[Q, ...]]:
    rref, pivots = _row_reduce(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Q(0)] * ncols
        v[f] = Q(1)
        for row, pc in zip(rref, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class StableCharacter:
    """A user-declared slope-stable class.

    ``fixed_H`` is None when the class is stable for every polarization,
    otherwise the polarization (up to positive scaling) it was checked for.
    """

    character: ChernCharacter
    fixed_H: Optional[tuple[Q, ...]] = None

    @property
    def applicability(self):
        return ALL_POLARIZATIONS if self.fixed_H is None else {"fixed_H": list(self.fixed_H)}


@dataclass(frozen=True)
class SurfaceData:
    rank: int
    gram: tuple[tuple[Q, ...], ...]
    ample_mode: str
    ample_generators: tuple[tuple[Q, ...], ...] = ()
    ample_reference: Optional[tuple[Q, ...]] = None
    stable_characters: tuple[StableCharacter, ...] = ()
    albanese_finite: Optional[bool] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gram", tuple(tuple(to_rational(x) for x in row) for row in self.gram))
        object.__setattr__(self, "ample_generators", tuple(as_vector(g) for g in self.ample_generators))
        if self.ample_reference is not None:
            object.__setattr__(self, "ample_reference", as_vector(self.ample_reference))
        object.__setattr__(self, "stable_characters", tuple(self.stable_characters))


@dataclass(frozen=True)
class ValidatedSurface:
    """A surface whose intersection form and ample cone passed validation.

    Construct through :func:`validate_surface` only.
    """

    data: SurfaceData
    signature: Signature
    reference_ample: tuple[Q, ...]
    facets: tuple[tuple[Q, ...], ...] = ()
    _entries: tuple = field(default=(), repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.data.rank

    @property
    def gram(self):
        return self.data.gram

    @property
    def ample_mode(self) -> str:
        return self.data.ample_mode

    @property
    def stable_characters(self):
        return self.data.stable_characters

    def pair(self, a, b) -> Q:
        rho = self.data.rank
        if len(a) != rho or len(b) != rho:
            raise DimensionMismatch(f"pairing needs vectors of length {rho}, got {len(a)} and {len(b)}")
        total = _ZERO
        for i, j, g in self._entries:
            total += a[i] * g * b[j]
        return Q(total)

    def gram_times(self, a) -> tuple[Q, ...]:
        """The linear form ``b -> a . b`` as a coefficient vector."""
        out = [Q(0)] * self.rank
        for i, j, g in self._entries:
            out[j] += a[i] * g
        return tuple(out)

    def ample_square(self, H):
        """``H.H`` if ``H`` is ample, else None."""
        H = as_vector(H, self.rank)
        hh = self.pair(H, H)
        if hh <= 0:
            return None
        if self.ample_mode == POSITIVE_CONE:
            ok = self.pair(H, self.data.ample_reference) > 0
        else:
            ok = all(sum(n * h for n, h in zip(normal, H)) > 0 for normal in self.facets)
        return hh if ok else None

    def is_ample(self, H) -> bool:
        return self.ample_square(H) is not None

    def require_ample(self, H) -> tuple[Q, ...]:
        H = as_vector(H, self.rank)
        if self.ample_square(H) is None:
            raise NotAmple(f"H={format_vector(H)} is not in the open ample cone (H^2={self.pair(H, H)})")
        return H


_ZERO = Q(0)


def _cone_facets(gens, rho):
    """Inward facet normals of the full-dimensional cone spanned by ``gens``.

    A facet is spanned by rho-1 independent generators with all generators on
    one side; the open cone is where every normal is strictly positive.
    """
    facets = []
    seen = set()
    for subset in itertools.combinations(range(len(gens)), rho - 1):
        rows = [gens[k] for k in subset]
        basis = nullspace(rows, rho)
        if len(basis) != 1:
            continue
        normal = basis[0]
        values = [sum(n * g for n, g in zip(normal, gen)) for gen in gens]
        if all(v >= 0 for v in values):
            pass
        elif all(v <= 0 for v in values):
            normal = tuple(-n for n in normal)
        else:
            continue
        # normalize so duplicates collapse
        lead = next(abs(n) for n in normal if n != 0)
        key = tuple(n / lead for n in normal)
        if key not in seen:
            seen.add(key)
            facets.append(key)
    return tuple(facets)


def validate_surface(data: SurfaceData) -> ValidatedSurface:
    """Check the intersection form and ample description; raise InvalidSurface
    listing every violation, or return the validated handle."""
    violations = []
    rho = data.rank
    gram = data.gram
    if rho < 1:
        raise InvalidSurface([DimensionMismatch(f"rank must be positive, got {rho}")])
    if len(gram) != rho or any(len(row) != rho for row in gram):
        raise InvalidSurface([DimensionMismatch(f"gram must be {rho}x{rho}")])
    if any(x.denominator != 1 for row in gram for x in row):
        violations.append(NonIntegralGram("gram entries must be integers"))
    bad = [(i, j) for i in range(rho) for j in range(i + 1, rho) if gram[i][j] != gram[j][i]]
    if bad:
        violations.append(NonSymmetric(f"gram is not symmetric at entries {bad}"))
        raise InvalidSurface(violations)

    sig = signature(gram)
    if sig != Signature(1, rho - 1, 0):
        violations.append(WrongSignature(sig))

    entries = tuple((i, j, gram[i][j]) for i in range(rho) for j in range(rho) if gram[i][j])

    def pair(a, b):
        return sum((a[i] * g * b[j] for i, j, g in entries), Q(0))

    facets = ()
    reference = None
    if data.ample_mode == POSITIVE_CONE:
        A = data.ample_reference
        if A is None:
            violations.append(EmptyAmpleCone("positive_cone mode needs a reference vector"))
        elif len(A) != rho:
            violations.append(DimensionMismatch(f"reference has length {len(A)}, rank is {rho}"))
        elif pair(A, A) <= 0:
            violations.append(InconsistentAmpleCone(f"reference {format_vector(A)} has A.A={pair(A, A)} <= 0"))
        else:
            reference = A
    elif data.ample_mode == POLYHEDRAL:
        gens = data.ample_generators
        if not gens:
            violations.append(EmptyAmpleCone("polyhedral mode needs generators"))
        elif any(len(g) != rho for g in gens):
            violations.append(DimensionMismatch(f"every generator must have length {rho}"))
        elif matrix_rank(gens, rho) < rho:
            violations.append(EmptyAmpleCone("generators do not span NS_R; the cone has empty interior"))
        else:
            H0 = tuple(sum(col) for col in zip(*gens))
            if pair(H0, H0) <= 0:
                violations.append(
                    InconsistentAmpleCone(f"generator sum {format_vector(H0)} has square {pair(H0, H0)} <= 0")
                )
            else:
                outside = [g for g in gens if pair(g, g) < 0 or pair(g, H0) < 0]
                if outside:
                    violations.append(
                        InconsistentAmpleCone(
                            "generators outside the closed positive cone: "
                            + ", ".join(format_vector(g) for g in outside)
                        )
                    )
                else:
                    facets = _cone_facets(gens, rho)
                    reference = H0
    else:
        violations.append(InconsistentAmpleCone(f"unknown ample mode {data.ample_mode!r}"))

    for sc in data.stable_characters:
        if len(sc.character.c1) != rho or (sc.fixed_H is not None and len(sc.fixed_H) != rho):
            violations.append(DimensionMismatch(f"stable character {sc.character} has wrong length"))

    if violations:
        raise InvalidSurface(violations)
    return ValidatedSurface(data, sig, reference, facets, entries)


def pair(s: ValidatedSurface, a, b) -> Q:
    """Intersection product ``a^T G b``."""
    return s.pair(as_vector(a), as_vector(b))


def is_ample(s: ValidatedSurface, H) -> bool:
    """Open-cone membership; boundary points are not ample."""
    return s.is_ample(H)


# -- surface files ---------------------------------------------------------


def _vector(obj, what):
    if not isinstance(obj, (list, tuple)):
        obj = [obj]
    try:
        return as_vector(obj)
    except (TypeError, ValueError) as exc:
        raise SurfaceFormatError(f"bad {what}: {exc}") from None


def surface_from_mapping(doc, name="") -> SurfaceData:
    """Build SurfaceData from a parsed JSON/TOML document."""
    if not isinstance(doc, dict):
        raise SurfaceFormatError("surface document must be a table/object")
    try:
        rank = int(doc["rank"])
        gram = doc["gram"]
        ample = doc["ample"]
    except KeyError as exc:
        raise SurfaceFormatError(f"missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError):
        raise SurfaceFormatError("rank must be an integer") from None
    if not isinstance(gram, list) or not all(isinstance(row, list) for row in gram):
        raise SurfaceFormatError("gram must be an array of rows")
    gram = tuple(_vector(row, "gram row") for row in gram)
    if not isinstance(ample, dict) or "mode" not in ample:
        raise SurfaceFormatError("ample must be a table with a 'mode' key")
    mode = ample["mode"]
    gens = tuple(_vector(g, "ample generator") for g in ample.get("generators", []))
    ref = ample.get("reference")
    ref = _vector(ref, "ample reference") if ref is not None else None

    chars = []
    for item in doc.get("stable_characters", []):
        try:
            ch = parse_character(item)
        except (TypeError, ValueError) as exc:
            raise SurfaceFormatError(f"bad stable character: {exc}") from None
        appl = item.get("applicability", ALL_POLARIZATIONS)
        if appl == ALL_POLARIZATIONS:
            fixed = None
        elif isinstance(appl, dict) and "fixed_H" in appl:
            fixed = _vector(appl["fixed_H"], "fixed_H")
        else:
            raise SurfaceFormatError(f"bad applicability {appl!r}")
        chars.append(StableCharacter(ch, fixed))

    alb = doc.get("albanese_finite")
    if alb is not None and not isinstance(alb, bool):
        raise SurfaceFormatError("albanese_finite must be a boolean")
    return SurfaceData(
        rank=rank,
        gram=gram,
        ample_mode=mode,
        ample_generators=gens,
        ample_reference=ref,
        stable_characters=tuple(chars),
        albanese_finite=alb,
        name=str(doc.get("name", name)),
    )


def load_surface(path) -> SurfaceData:
    """Read a surface file (``.toml`` parsed as TOML, anything else as JSON)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SurfaceFormatError(f"cannot read {path}: {exc}") from None
    try:
        if path.suffix.lower() == ".toml":
            try:
                import tomllib
            except ModuleNotFoundError:  # Python < 3.11
                import tomli as tomllib
            doc = tomllib.loads(text)
        else:
            doc = json.loads(text)
    except ValueError as exc:
        raise SurfaceFormatError(f"cannot parse {path}: {exc}") from None
    return surface_from_mapping(doc, name=path.stem)


def surface_to_mapping(data: SurfaceData) -> dict:
    """Inverse of :func:`surface_from_mapping`, with rationals as strings."""
    from .rational import format_rational

    def vec(v):
        return [format_rational(x) for x in v]

    ample = {"mode": data.ample_mode}
    if data.ample_mode == POLYHEDRAL:
        ample["generators"] = [vec(g) for g in data.ample_generators]
    else:
        ample["reference"] = vec(data.ample_reference)
    doc = {"rank": data.rank, "gram": [[int(x) for x in row] for row in data.gram], "ample": ample}
    if data.stable_characters:
        doc["stable_characters"] = [
            {
                "rank": sc.character.r,
                "c1": vec(sc.character.c1),
                "ch2": format_rational(sc.character.ch2),
                "applicability": ALL_POLARIZATIONS if sc.fixed_H is None else {"fixed_H": vec(sc.fixed_H)},
            }
            for sc in data.stable_characters
        ]
    if data.albanese_finite is not None:
        doc["albanese_finite"] = data.albanese_finite
    return doc

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from geostab.errors import (
    DimensionMismatch,
    EmptyAmpleCone,
    InconsistentAmpleCone,
    InvalidSurface,
    NonIntegralGram,
    NonSymmetric,
    SurfaceFormatError,
    WrongSignature,
)
from geostab.lattice import (
    POLYHEDRAL,
    POSITIVE_CONE,
    SurfaceData,
    is_ample,
    load_surface,
    pair,
    signature,
    surface_from_mapping,
    surface_to_mapping,
    validate_surface,
)
from geostab.rational import Q

import oracles


def data(gram, mode=POSITIVE_CONE, ref=None, gens=()):
    rho = len(gram)
    if mode == POSITIVE_CONE and ref is None:
        ref = (1,) + (0,) * (rho - 1)
    return SurfaceData(rho, gram, mode, ample_generators=gens, ample_reference=ref)


def violation_types(exc):
    return {type(v) for v in exc.value.violations}


def test_p2_valid(p2):
    assert p2.signature == (1, 0, 0)


def test_quadric_valid(quadric):
    assert quadric.signature == (1, 1, 0)
    assert oracles.signature_charpoly([[0, 1], [1, 0]]) == (1, 1, 0)


def test_wrong_signature_reports_observed():
    with pytest.raises(InvalidSurface) as exc:
        validate_surface(data([[1, 0], [0, 1]]))
    (v,) = exc.value.violations
    assert isinstance(v, WrongSignature) and v.observed == (2, 0, 0)


def test_nonsymmetric():
    with pytest.raises(InvalidSurface) as exc:
        validate_surface(data([[1, 2], [0, -1]]))
    assert NonSymmetric in violation_types(exc)


def test_nonintegral_gram():
    with pytest.raises(InvalidSurface) as exc:
        validate_surface(data([["1/2"]]))
    assert NonIntegralGram in violation_types(exc)


def test_violations_are_collected():
    with pytest.raises(InvalidSurface) as exc:
        validate_surface(data([[1, 0], [0, 1]], ref=(1, 0, 0)))
    assert {WrongSignature, DimensionMismatch} <= violation_types(exc)


def test_ample_problems():
    with pytest.raises(InvalidSurface) as exc:
        validate_surface(data([[1, 0], [0, -1]], ref=(0, 1)))
    assert InconsistentAmpleCone in violation_types(exc)
    with pytest.raises(InvalidSurface) as exc:
        validate_surface(data([[1, 0], [0, -1]], mode=POLYHEDRAL, gens=((1, 0),)))
    assert EmptyAmpleCone in violation_types(exc)
    with pytest.raises(InvalidSurface) as exc:
        validate_surface(data([[1, 0], [0, -1]], mode=POLYHEDRAL, gens=((1, 0), (0, 1))))
    assert InconsistentAmpleCone in violation_types(exc)


def test_pair_examples(p2, quadric):
    assert pair(p2, (1,), (1,)) == 1
    assert pair(quadric, (1, 0), (0, 1)) == 1
    assert pair(quadric, (1, 1), (1, 1)) == 2
    with pytest.raises(DimensionMismatch):
        pair(quadric, (1,), (1, 0))


def test_is_ample_examples(p2, quadric):
    assert is_ample(p2, (1,))
    assert not is_ample(p2, (0,))
    assert not is_ample(p2, (-1,))
    assert is_ample(quadric, (1, 2))
    assert not is_ample(quadric, (1, 0))  # boundary
    assert not is_ample(quadric, (-1, -2))


def test_polyhedral_cone(f1, quadric_poly):
    # F1: nef cone spanned by the pullback of a line (1,0) and (1,-1)
    assert is_ample(f1, (2, -1))
    assert is_ample(f1, (3, -1))
    assert not is_ample(f1, (1, 0)) and not is_ample(f1, (1, -1))
    assert not is_ample(f1, (1, 1)) and not is_ample(f1, (1, -2))
    assert is_ample(quadric_poly, (1, 5)) and not is_ample(quadric_poly, (0, 1))


coords = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@given(st.tuples(coords, coords), st.tuples(coords, coords))
def test_pair_symmetric(a, b):
    s = validate_surface(data([[0, 1], [1, 0]], ref=(1, 1)))
    assert s.pair(tuple(map(Q, a)), tuple(map(Q, b))) == s.pair(tuple(map(Q, b)), tuple(map(Q, a)))
    assert s.pair(tuple(map(Q, a)), tuple(map(Q, b))) == oracles.pair([[0, 1], [1, 0]], a, b)


@given(st.tuples(coords, coords), st.fractions(min_value=0, max_value=50, max_denominator=9).filter(lambda t: t > 0))
def test_ample_scaling_invariant(H, t):
    for s in (validate_surface(data([[0, 1], [1, 0]], ref=(1, 1))),
              validate_surface(data([[1, 0], [0, -1]], mode=POLYHEDRAL, gens=((1, 0), (1, -1))))):
        assert s.is_ample(H) == s.is_ample(tuple(t * x for x in H))


@given(st.tuples(coords, coords), st.tuples(coords, coords), st.fractions(min_value=0, max_value=1, max_denominator=30))
def test_ample_convex(H1, H2, t):
    for s in (validate_surface(data([[0, 1], [1, 0]], ref=(1, 1))),
              validate_surface(data([[1, 0], [0, -1]], mode=POLYHEDRAL, gens=((1, 0), (1, -1))))):
        if s.is_ample(H1) and s.is_ample(H2) and 0 < t < 1:
            assert s.is_ample(tuple(t * a + (1 - t) * b for a, b in zip(H1, H2)))


@settings(max_examples=60)
@given(st.integers(1, 5), st.data())
def test_signature_matches_oracles(n, draw):
    entries = draw.draw(st.lists(st.integers(-4, 4), min_size=n * n, max_size=n * n))
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = entries[i * n + j]
    assert tuple(signature(m)) == oracles.signature_charpoly(m)


def test_signature_degenerate():
    assert tuple(signature([[1, 1], [1, 1]])) == (1, 0, 1)
    assert tuple(signature([[0, 0], [0, 0]])) == (0, 0, 2)
    assert tuple(signature([[0, 2, 0], [2, 0, 0], [0, 0, -3]])) == (1, 2, 0)


def test_file_roundtrip(tmp_path, f1):
    doc = surface_to_mapping(f1.data)
    path = tmp_path / "f1.json"
    path.write_text(json.dumps(doc))
    again = validate_surface(load_surface(path))
    assert again.gram == f1.gram and again.facets == f1.facets


def test_stable_character_applicability(p2):
    (sc,) = p2.stable_characters
    assert sc.fixed_H is None and sc.character.r == 2
    doc = {
        "rank": 1,
        "gram": [[1]],
        "ample": {"mode": "positive_cone", "reference": ["1"]},
        "stable_characters": [{"rank": 2, "c1": ["1"], "ch2": "-1/2", "applicability": {"fixed_H": ["2"]}}],
    }
    s = validate_surface(surface_from_mapping(doc))
    assert s.stable_characters[0].fixed_H == (Q(2),)


@pytest.mark.parametrize(
    "doc",
    [
        {"gram": [[1]], "ample": {"mode": "positive_cone", "reference": [1]}},
        {"rank": 1, "gram": [[1]], "ample": {"reference": [1]}},
        {"rank": 1, "gram": [[1]], "ample": {"mode": "positive_cone", "reference": ["x"]}},
        {"rank": 1, "gram": [[1]], "ample": {"mode": "positive_cone", "reference": [1]}, "albanese_finite": "yes"},
    ],
)
def test_bad_documents(doc):
    with pytest.raises(SurfaceFormatError):
        surface_from_mapping(doc)


def test_hodge_index_random(quadric, f1):
    rng = random.Random(7)
    for s in (quadric, f1):
        H = s.reference_ample
        hh = s.pair(H, H)
        for _ in range(200):
            x = tuple(Q(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(s.rank))
            w = tuple(a - s.pair(x, H) / hh * h for a, h in zip(x, H))
            assert s.pair(w, H) == 0
            if any(w):
                assert s.pair(w, w) < 0

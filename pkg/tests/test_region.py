import cmath
import math
import random

import pytest

from geostab.chern import ChernCharacter, line_bundle, skyscraper
from geostab.errors import DimensionMismatch, NotAmple, NotPositiveDefinite
from geostab.lepotier import CLOSED, PUNCTURED, EnumerationBox
from geostab.rational import POS_INF, Q, RationalComplex
from geostab.region import (
    ChargeValue,
    GeoPoint,
    InsideCertificate,
    OutsideCertificate,
    UnknownCertificate,
    Verdict,
    central_charge,
    charge_at_origin,
    charge_positivity_check,
    membership,
    support_probe,
    verify_membership,
)

BOX = EnumerationBox(5)
O = ChernCharacter(1, (0,), 0)
SKY = skyscraper(1)


def pt(lam, H, D, beta, alpha):
    return GeoPoint(RationalComplex.coerce(lam), H, D, beta, alpha)


def test_charge_examples(p2):
    p = pt(0, (1,), (0,), 0, 1)
    assert central_charge(p2, p, SKY).base == RationalComplex(-1, 0)
    assert charge_at_origin(p2, p, O) == RationalComplex(1, 0)
    assert central_charge(p2, p, O + SKY) == central_charge(p2, p, O) + central_charge(p2, p, SKY)
    assert charge_at_origin(p2, p, O + SKY) == RationalComplex(0, 0)


def test_skyscraper_normalized_everywhere(quadric):
    rng = random.Random(1)
    for _ in range(50):
        lam = RationalComplex(Q(rng.randint(-9, 9), 4), Q(rng.randint(-9, 9), 4))
        p = pt(lam, (1, rng.randint(1, 5)), (rng.randint(-3, 3), 0), Q(rng.randint(-5, 5), 3), rng.randint(-4, 4))
        assert central_charge(quadric, p, skyscraper(2)) == ChargeValue(lam, RationalComplex(-1, 0))


def test_charge_value_canonical():
    base = RationalComplex(2, 1)
    assert ChargeValue(RationalComplex(1, 0), base) == ChargeValue(RationalComplex(0, 0), -base)
    assert ChargeValue(RationalComplex(Q(1, 2), 0), base) == ChargeValue(0, base * RationalComplex(0, 1))
    assert ChargeValue(RationalComplex(Q(5, 2), 3), base).rotate(Q(-5, 2)) == ChargeValue(RationalComplex(0, 3), base)
    z = ChargeValue(RationalComplex(Q(1, 3), Q(-1, 5)), base)
    want = cmath.exp(1j * math.pi * complex(Q(1, 3), -0.2)) * complex(2, 1)
    assert abs(complex(z) - want) < 1e-12
    (re_lo, re_hi), (im_lo, im_hi) = z.enclosure()
    assert re_lo <= want.real <= re_hi and im_lo <= want.imag <= im_hi


def test_charge_dimension_check(p2, quadric):
    with pytest.raises(DimensionMismatch):
        central_charge(quadric, pt(0, (1, 1), (0, 0), 0, 1), O)


def test_membership_examples(p2):
    m = membership(p2, pt(0, (1,), (0,), 0, Q(1, 2)), BOX)
    assert m.verdict is Verdict.INSIDE and m.certificate == InsideCertificate(Q(1, 2), 0)
    m = membership(p2, pt(0, (1,), (0,), 0, -1), BOX)
    assert m.verdict is Verdict.OUTSIDE and m.certificate.witness == O and m.certificate.value == 0
    m = membership(p2, pt(0, (1,), (0,), 0, 0), BOX)
    assert m.verdict is Verdict.OUTSIDE
    m = membership(p2, pt(0, (1,), (0,), Q(1, 2), Q(1, 16)), BOX)
    assert m.verdict is Verdict.UNKNOWN and isinstance(m.certificate, UnknownCertificate)
    for m, p in [(membership(p2, pt(0, (1,), (0,), 0, a), BOX), pt(0, (1,), (0,), 0, a)) for a in (-1, 0, 1)]:
        assert verify_membership(p2, p, m)


def test_punctured_never_outside(p2):
    m = membership(p2, pt(0, (1,), (0,), 0, -1), BOX, convention=PUNCTURED)
    assert m.verdict is Verdict.UNKNOWN
    with pytest.raises(NotAmple):
        membership(p2, pt(0, (-1,), (0,), 0, -1), BOX)


def test_forged_certificates_rejected(p2):
    from geostab.region import Membership

    p = pt(0, (1,), (0,), 0, -1)
    fake = Membership(Verdict.OUTSIDE, OutsideCertificate(ChernCharacter(1, (1,), Q(1, 2)), Q(1, 2), CLOSED))
    assert not verify_membership(p2, p, fake)  # wrong slope
    fake = Membership(Verdict.OUTSIDE, OutsideCertificate(ChernCharacter(1, (0,), 5), Q(5), CLOSED))
    assert not verify_membership(p2, p, fake)  # not a declared class
    fake = Membership(Verdict.INSIDE, InsideCertificate(Q(-1), Q(-2)))
    assert not verify_membership(p2, p, fake)


def test_monotone_in_alpha(p2, quadric):
    rng = random.Random(5)
    for s, H in ((p2, (1,)), (quadric, (1, 2))):
        for _ in range(40):
            D = tuple(Q(rng.randint(-4, 4), 2) for _ in H)
            beta = Q(rng.randint(-6, 6), rng.randint(1, 3))
            alphas = sorted(Q(rng.randint(-40, 40), 4) for _ in range(6))
            verdicts = [membership(s, pt(0, H, D, beta, a), BOX).verdict for a in alphas]
            for k, v in enumerate(verdicts):
                if v is Verdict.INSIDE:
                    assert all(w is Verdict.INSIDE for w in verdicts[k:])
                if v is Verdict.OUTSIDE:
                    assert all(w is Verdict.OUTSIDE for w in verdicts[:k])


def test_positivity_examples(p2):
    r = charge_positivity_check(p2, pt(0, (1,), (0,), 0, Q(1, 2)), BOX)
    assert r.ok and r.violations == []
    r = charge_positivity_check(p2, pt(0, (1,), (0,), 0, -1), BOX)
    assert not r.ok and r.violations == [O]
    assert charge_positivity_check(p2, pt(0, (1,), (0,), Q(1, 3), -5), BOX).ok


def test_support_probe_examples(p2):
    p = pt(0, (1,), (0,), 0, 1)
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert support_probe(p2, p, BOX, eye, candidates=[SKY]) == 1
    assert support_probe(p2, p, BOX, eye, candidates=[]) is POS_INF
    assert support_probe(p2, p, BOX, eye, candidates=[O, SKY]) == 1
    assert support_probe(p2, p, BOX, eye) > 0
    with pytest.raises(NotPositiveDefinite):
        support_probe(p2, p, BOX, [[1, 0, 0], [0, 0, 0], [0, 0, 1]])
    with pytest.raises(NotPositiveDefinite):
        support_probe(p2, p, BOX, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])


def test_real_axis_identity(quadric):
    # for a class at normalized slope beta, Re Z0 = H^2 r (alpha - value)
    rng = random.Random(11)
    for _ in range(100):
        H = (Q(rng.randint(1, 4)), Q(rng.randint(1, 4)))
        L = (Q(rng.randint(-5, 5)), Q(rng.randint(-5, 5)))
        v = line_bundle(quadric, L)
        hh = quadric.pair(H, H)
        beta = quadric.pair(H, L) / hh
        D = (Q(rng.randint(-3, 3), 2), Q(rng.randint(-3, 3), 2))
        alpha = Q(rng.randint(-20, 20), 3)
        z0 = charge_at_origin(quadric, pt(0, H, D, beta, alpha), v)
        assert z0.im == 0
        assert z0.re == hh * (alpha - (v.ch2 - quadric.pair(D, v.c1)) / hh)

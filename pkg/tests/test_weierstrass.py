import random
from fractions import Fraction

import pytest

from lgdiv.localfields import REAL, Place, is_square_local, local_square_class
from lgdiv.weierstrass import (
    IDENTITY_CLASS,
    INFINITY,
    ECPoint,
    FactoredCubicCurve,
    SquareClassPair,
    add,
    contains,
    delta2,
    delta2_is_homomorphism_check,
    expected_local_image_order,
    good_reduction,
    in_local_image,
    hasse_ok,
    local_kummer_image,
    local_torsion_delta2_membership,
    negate,
    rational_torsion_delta2_membership,
    reduction_count,
    scalar_mul,
    two_primary_torsion_is_two_torsion,
    two_torsion_delta2_image,
    two_torsion_points,
)

DZ = FactoredCubicCurve(1365, 1430, -2795)
P = ECPoint(341, 59136)
CREUTZ = FactoredCubicCurve(0, -80, -205)
CONGRUENT = FactoredCubicCurve(0, 5, -5)
R = ECPoint(-4, 6)


def sample_points(curve, gen, n, seed=0):
    rng = random.Random(seed)
    tors = two_torsion_points(curve)
    out = []
    for _ in range(n):
        out.append(add(curve, scalar_mul(curve, rng.randint(-4, 4), gen), rng.choice(tors)))
    return out


def test_rejects_repeated_roots():
    with pytest.raises(ValueError):
        FactoredCubicCurve(1, 1, 2)


def test_dz_point_and_delta():
    assert contains(DZ, P)
    assert not contains(DZ, ECPoint(341, 59137))
    assert delta2(DZ, P) == SquareClassPair(-1, -1)
    O, P1, P2, P3 = two_torsion_points(DZ)
    assert O == INFINITY
    assert delta2(DZ, P1) == SquareClassPair(-1, -65)
    assert delta2(DZ, P2) == SquareClassPair(65, 65)
    assert delta2(DZ, P3) == SquareClassPair(65, 65) * SquareClassPair(-1, -65)
    assert delta2(DZ, P3) == SquareClassPair(-65, -1)
    assert delta2(DZ, O) == IDENTITY_CLASS


def test_off_curve_rejected():
    with pytest.raises(ValueError):
        add(DZ, ECPoint(0, 1), P)


@pytest.mark.parametrize("curve,gen", [(DZ, P), (CONGRUENT, R)])
def test_group_law_properties(curve, gen):
    pts = sample_points(curve, gen, 30, seed=1)
    for a in pts[:10]:
        assert add(curve, a, INFINITY) == a
        assert add(curve, a, negate(curve, a)) == INFINITY
        for b in pts[10:20]:
            assert add(curve, a, b) == add(curve, b, a)
            for c in pts[20:23]:
                assert add(curve, add(curve, a, b), c) == add(curve, a, add(curve, b, c))


@pytest.mark.parametrize("curve,gen", [(DZ, P), (CONGRUENT, R)])
def test_scalar_mul(curve, gen):
    acc = INFINITY
    for n in range(7):
        assert scalar_mul(curve, n, gen) == acc
        acc = add(curve, acc, gen)
    assert scalar_mul(curve, -3, gen) == negate(curve, scalar_mul(curve, 3, gen))
    for T in two_torsion_points(curve):
        assert scalar_mul(curve, 2, T) == INFINITY


@pytest.mark.parametrize("curve,gen", [(DZ, P), (CONGRUENT, R)])
def test_delta2_homomorphism(curve, gen):
    pts = sample_points(curve, gen, 12, seed=2)
    assert delta2_is_homomorphism_check(curve, pts)
    for a in pts:
        assert delta2(curve, scalar_mul(curve, 2, a)) == IDENTITY_CLASS
        for b in pts[:4]:
            assert delta2(curve, add(curve, a, b)) == delta2(curve, a) * delta2(curve, b)


def test_membership_dz():
    xi = delta2(DZ, P)
    for v in (REAL, 2, 5, 13, 3, 7, 11, 1009):
        assert local_torsion_delta2_membership(DZ, xi, v)
    assert not rational_torsion_delta2_membership(DZ, xi)
    assert rational_torsion_delta2_membership(DZ, SquareClassPair(65, 65))


def test_reduction():
    assert good_reduction(DZ, 3) and reduction_count(DZ, 3) == 4
    assert not good_reduction(DZ, 5)
    for p in (7, 11, 17, 19, 23):
        if good_reduction(DZ, p):
            n = reduction_count(DZ, p)
            assert hasse_ok(n, p) and n % 4 == 0
            # brute force over F_p x F_p
            brute = 1 + sum(1 for x in range(p) for y in range(p) if (y * y - DZ.rhs(x)) % p == 0)
            assert brute == n
    with pytest.raises(ValueError):
        good_reduction(DZ, 2)


def test_torsion_certificate():
    ok, cert = two_primary_torsion_is_two_torsion(DZ)
    assert ok and cert.prime == 3 and cert.count == 4 and cert.recheck(DZ)
    ok, cert = two_primary_torsion_is_two_torsion(CREUTZ)
    assert ok and cert.recheck(CREUTZ)


def exhaustive_image_q2(curve, k=7, jmin=-4, jmax=4):
    """delta2(E(Q_2)) by running x over all 2^j u with u a unit mod 2^k, plus e_i + 2^j u."""
    e1, e2, _ = curve.roots
    image = {IDENTITY_CLASS}
    for T in two_torsion_points(curve)[1:]:
        c1, c2 = delta2(curve, T)
        image.add(SquareClassPair(local_square_class(c1, 2), local_square_class(c2, 2)))
    for center in (0, *curve.roots):
        for j in range(jmin, jmax + 1):
            for u in range(1, 2**k, 2):
                x = center + Fraction(2) ** j * u
                rhs = curve.rhs(x)
                if rhs == 0 or not is_square_local(rhs, 2):
                    continue
                image.add(SquareClassPair(local_square_class(x - e1, 2), local_square_class(x - e2, 2)))
    return image


@pytest.mark.parametrize("curve", [DZ, CREUTZ])
def test_expected_order_at_2_by_enumeration(curve):
    # the hard-coded |E(Q_2)/2E(Q_2)| = 8 agrees with exhaustive low-precision enumeration
    image = exhaustive_image_q2(curve)
    assert len(image) == expected_local_image_order(curve, 2) == 8
    assert image == set(local_kummer_image(curve, 2, 12))


@pytest.mark.parametrize("curve", [DZ, CREUTZ])
def test_kummer_image_contains_torsion(curve):
    for v in [REAL] + [Place(p) for p in curve.bad_primes]:
        img = local_kummer_image(curve, v, 12)
        assert len(img) == expected_local_image_order(curve, v)
        for pair in two_torsion_delta2_image(curve):
            assert in_local_image(img, pair, v)

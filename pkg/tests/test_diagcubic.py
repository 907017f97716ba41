import pytest
from sympy import primerange

from lgdiv.diagcubic import (
    CertificateFailure,
    CoveringMap,
    DiagonalCubic,
    ProjPoint,
    contains,
    corollary43_case_table,
    corollary43_check,
    covering_eval,
    covering_eval_padic,
    lemma42_case,
    lemma42_conditions,
    lemma42_witness,
    local_divisibility_certificate,
    padic_projective_equal,
    primitive_roots_of_unity,
    rational_three_torsion,
    three_torsion_locus,
    verify_lemma42_point,
)
from lgdiv.localfields import REAL, PadicNumber, is_cube_local, nth_root_local
from lgdiv.search import point_search

C30 = DiagonalCubic(1, 3, 10)
PI30 = CoveringMap(C30)


def test_projpoint_canonical():
    assert ProjPoint(-22, 6, 10) == ProjPoint(11, -3, -5)
    assert ProjPoint(0, -4, 2).coords == (0, 2, -1)
    assert ProjPoint(11, -3, -5).height == 11
    with pytest.raises(ValueError):
        ProjPoint(0, 0, 0)


def test_covering_exact_point():
    assert contains(C30, (-11, 3, 5))
    assert PI30.d == 30 and PI30.target == DiagonalCubic(1, 1, 30)
    image = covering_eval(PI30, (-11, 3, 5))
    assert image == ProjPoint(1523698559, -2736572309, 826803945)
    assert not three_torsion_locus(image)


def test_covering_rejects_off_curve():
    with pytest.raises(ValueError):
        covering_eval(PI30, (1, 1, 1))


@pytest.mark.parametrize("abc", [(1, 3, 10), (1, 2, 3), (2, 3, 5), (1, 3, 17), (1, 1, 7)])
def test_covering_images_lie_on_target(abc):
    cov = CoveringMap(DiagonalCubic(*abc))
    for pt in point_search(cov.source, 60).points:
        image = covering_eval(cov, pt)
        assert contains(cov.target, image)


def test_flex_collapse():
    # points of C on XYZ = 0 land on the flex locus xyz = 0 of E
    for abc in [(1, 1, 2), (1, 1, 9), (1, 8, 3), (2, 2, 5)]:
        cov = CoveringMap(DiagonalCubic(*abc))
        for pt in point_search(cov.source, 30).points:
            if three_torsion_locus(pt):
                image = covering_eval(cov, pt)
                assert three_torsion_locus(image)
                assert image in rational_three_torsion(cov.d)


def padic_point_on_c(p, k):
    # a Q_p-point on X^3 + 3Y^3 + 10Z^3 = 0 with Y, Z units: X = cube root of -(3Y^3 + 10Z^3)
    for y in range(1, 30):
        for z in range(1, 30):
            rhs = -(3 * y**3 + 10 * z**3)
            if rhs and is_cube_local(rhs, p):
                r = nth_root_local(rhs, 3, p, k)
                if r is not None:
                    return r, PadicNumber.from_rational(y, p, k), PadicNumber.from_rational(z, p, k)
    raise AssertionError("no point found")


@pytest.mark.parametrize("p", [2, 5, 11, 17])
@pytest.mark.parametrize("lam", [-1, 2, 3, 5])
def test_covering_homogeneity(p, lam):
    if lam % p == 0:
        lam = lam + 1 if (lam + 1) % p else lam + 2
    k = 20
    pt = padic_point_on_c(p, k)
    img = covering_eval_padic(PI30, pt)
    scaled = covering_eval_padic(PI30, [lam * t for t in pt])
    ok, _ = padic_projective_equal(img, [lam**9 * t for t in img], p, 10)
    assert ok
    ok, _ = padic_projective_equal(img, scaled, p, 10)
    assert ok


def test_rational_three_torsion():
    assert rational_three_torsion(30) == [ProjPoint(1, -1, 0)]
    assert rational_three_torsion(1) == sorted({ProjPoint(1, -1, 0), ProjPoint(0, 1, -1), ProjPoint(1, 0, -1)})
    assert len(rational_three_torsion(8)) == 3


def test_roots_of_unity():
    assert primitive_roots_of_unity(3, 7) == [2, 4]
    assert primitive_roots_of_unity(9, 19) == sorted(z for z in range(1, 19) if pow(z, 9, 19) == 1 and pow(z, 3, 19) != 1)
    assert primitive_roots_of_unity(3, 5) == []


def test_cases_at_bad_places_of_30():
    assert {str(v): lemma42_case(30, v) for v in (REAL, 2, 3, 5)} == {"real": 1, "2": 1, "3": 2, "5": 1}
    with pytest.raises(ValueError):
        lemma42_case(10, 7)


@pytest.mark.parametrize("d", [30, 138, 165, 300, 354])
def test_corollary_agrees_with_lemma(d):
    for p in primerange(2, 10**4):
        if d % p == 0:
            continue
        case = corollary43_check(d, p)
        assert lemma42_conditions(d, p)[case]
        assert lemma42_case(d, p) == case


def test_414_at_7_against_cube_classes():
    # cube classes mod 7 by enumeration: the cubes are {1, 6}
    cubes = {x**3 % 7 for x in range(1, 7)}
    case = lemma42_case(414, 7)
    assert case is not None and corollary43_check(414, 7) == case
    brute = {1: 3 in cubes, 2: 138 % 7 in cubes, 3: 3 * 414 % 7 in cubes}
    assert lemma42_conditions(414, 7)[1] == brute[1]
    assert lemma42_conditions(414, 7)[2] == brute[2]
    assert lemma42_conditions(414, 7)[3] == brute[3]


def test_case_table_complete():
    rows = corollary43_case_table()
    assert len(rows) == 19
    assert {r["case"] for r in rows} == {1, 2, 3, 4, 5}


@pytest.mark.parametrize("case,d,p", [(1, 30, 2), (2, 30, 3), (1, 30, 5), (3, 12, 7), (4, 12, 19), (5, 6, 7)])
def test_lemma42_witnesses(case, d, p):
    w = lemma42_witness(case, d, p, 8)
    assert w.on_curve and w.image_matches
    assert verify_lemma42_point(case, d, p, 12)


def test_case5_uses_zeta_squared():
    w = lemma42_witness(5, 6, 7, 10)
    assert w.ok and "zeta^2" in w.note


def test_witness_refuses_wrong_case():
    with pytest.raises(ValueError):
        lemma42_witness(1, 30, 7, 8)  # 3 is not a cube in Q_7


@pytest.mark.parametrize("d", [30, 138, 165, 300, 354])
def test_certificates(d):
    cert = local_divisibility_certificate(d, spot_checks=200)
    assert cert.bad_places["real"] == 1
    assert cert.bad_places["3"] == 2
    assert all(c in (1, 2, 3, 4, 5) for c in cert.spot_checks.values())


def test_certificate_fails_for_6():
    # d' = 2 is not a cube in Q_3 and neither is 3 or 18
    with pytest.raises(CertificateFailure):
        local_divisibility_certificate(6, spot_checks=10)

"""Diagonal cubics aX^3 + bY^3 + cZ^3 = 0 and Euler's 3-covering onto x^3 + y^3 + abc z^3 = 0.

The local part decides, place by place, whether the covering
X^3 + 3Y^3 + d'Z^3 = 0 (d = 3d') has a point over Q_v mapping to a
3-torsion point, and constructs that point explicitly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

from sympy import primefactors, primerange, primitive_root

from .localfields import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    REAL,
    PadicNumber,
    Place,
    PrecisionError,
    _place,
    hensel_lift_root,
    integer_cube_root,
    is_cube_local,
    nth_root_local,
)


class DegenerateError(ValueError):
    """All coordinates of the covering map vanish at the input point."""


class CertificateFailure(RuntimeError):
    """Some place admits none of the local cases."""


@dataclass(frozen=True)
class DiagonalCubic:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a * self.b * self.c == 0:
            raise ValueError("coefficients must be nonzero")

    @property
    def coefficients(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def form(self, X, Y, Z):
        return self.a * X**3 + self.b * Y**3 + self.c * Z**3

    def __str__(self):
        terms = []
        for coef, var in zip(self.coefficients, "XYZ"):
            mag = "" if abs(coef) == 1 else str(abs(coef))
            sign = "-" if coef < 0 else "+"
            terms.append((sign, f"{mag}{var}^3"))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {sg} {t}" for sg, t in terms[1:]) + " = 0"


@dataclass(frozen=True, order=True)
class ProjPoint:
    """Primitive integer point, normalized so the first nonzero coordinate is positive."""

    X: int
    Y: int
    Z: int

    def __post_init__(self):
        X, Y, Z = int(self.X), int(self.Y), int(self.Z)
        g = gcd(gcd(X, Y), Z)
        if g == 0:
            raise ValueError("(0:0:0) is not a projective point")
        first = next(t for t in (X, Y, Z) if t)
        if first < 0:
            g = -g
        object.__setattr__(self, "X", X // g)
        object.__setattr__(self, "Y", Y // g)
        object.__setattr__(self, "Z", Z // g)

    @property
    def coords(self) -> tuple[int, int, int]:
        return (self.X, self.Y, self.Z)

    @property
    def height(self) -> int:
        return max(abs(self.X), abs(self.Y), abs(self.Z))

    def __iter__(self):
        return iter(self.coords)

    def __str__(self):
        return f"({self.X} : {self.Y} : {self.Z})"


def contains(curve: DiagonalCubic, pt) -> bool:
    return curve.form(*pt) == 0


@dataclass(frozen=True)
class CoveringMap:
    """pi : aX^3 + bY^3 + cZ^3 = 0  ->  x^3 + y^3 + d z^3 = 0 with d = abc."""

    source: DiagonalCubic
    d: int = field(init=False)

    def __post_init__(self):
        a, b, c = self.source.coefficients
        object.__setattr__(self, "d", a * b * c)

    @property
    def target(self) -> DiagonalCubic:
        return DiagonalCubic(1, 1, self.d)


def _covering_forms(a, b, c, X, Y, Z):
    X3, Y3, Z3 = X**3, Y**3, Z**3
    A, B, C = a * X3, b * Y3, c * Z3
    s = 9 * a * b * c * X3 * Y3 * Z3          # x + y
    t = (A - B) * (B - C) * (C - A)            # x - y
    z = 3 * (a * b * X3 * Y3 + b * c * Y3 * Z3 + c * a * Z3 * X3) * X * Y * Z
    # (x : y : z) scaled by 2 to stay integral at p = 2
    return s + t, s - t, 2 * z


def covering_eval(cov: CoveringMap, pt) -> ProjPoint:
    """Image of a rational point of the source curve, canonicalized."""
    pt = pt if isinstance(pt, ProjPoint) else ProjPoint(*pt)
    if not contains(cov.source, pt):
        raise ValueError(f"{pt} is not on {cov.source}")
    x, y, z = _covering_forms(*cov.source.coefficients, *pt)
    if x == y == z == 0:
        raise DegenerateError(f"all covering forms vanish at {pt}")
    out = ProjPoint(x, y, z)
    assert contains(cov.target, out), "covering image off the target curve"
    return out


def covering_eval_padic(cov: CoveringMap, coords):
    """Image of a Q_p point given as three :class:`PadicNumber` coordinates."""
    return _covering_forms(*cov.source.coefficients, *coords)


def three_torsion_locus(pt) -> bool:
    x, y, z = pt
    return x * y * z == 0


def rational_three_torsion(d: int) -> list[ProjPoint]:
    """Rational points of x^3 + y^3 + d z^3 = 0 on the flex locus xyz = 0."""
    pts = [ProjPoint(1, -1, 0)]
    r = integer_cube_root(d)
    if r is not None:
        pts += [ProjPoint(0, -r, 1), ProjPoint(-r, 0, 1)]
    return sorted(set(pts))


# ---------------------------------------------------------------------------
# p-adic projective points

def _exact(n: int, p: int) -> PadicNumber:
    if n == 0:
        return PadicNumber.zero(p, 10**6)
    return PadicNumber.from_rational(n, p, MAX_PRECISION + 10)


def _as_padic(t, p: int) -> PadicNumber:
    return t if isinstance(t, PadicNumber) else _exact(t, p)


def padic_normalize(coords, p: int):
    """Scale so the smallest valuation is 0; return ``(scaled coords, shift)``."""
    coords = [_as_padic(t, p) for t in coords]
    nonzero = [t for t in coords if not t.is_zero]
    if not nonzero:
        raise PrecisionError("all coordinates indistinguishable from zero")
    pivot = min(nonzero, key=lambda t: t.valuation)
    shift = pivot.valuation
    scale = PadicNumber(p, -shift, 1, MAX_PRECISION + 10)
    return [t * scale for t in coords], shift


def padic_projective_equal(u, w, p: int, k: int) -> tuple[bool, int]:
    """Are two Q_p-points equal modulo p**k (all 2x2 minors vanish)?

    Both tuples are first scaled to primitive form; returns ``(equal, slack)``
    where slack is the total valuation shift used by that scaling.
    """
    un, s1 = padic_normalize(u, p)
    wn, s2 = padic_normalize(w, p)
    for i in range(3):
        for j in range(i + 1, 3):
            m = un[i] * wn[j] - un[j] * wn[i]
            if m.absolute_precision < k:
                raise PrecisionError(f"minor known only to {m.absolute_precision} digits")
            if not m.is_zero and m.valuation < k:
                return False, abs(s1) + abs(s2)
    return True, abs(s1) + abs(s2)


def padic_on_curve(curve: DiagonalCubic, coords, p: int, k: int) -> bool:
    cn, _ = padic_normalize(coords, p)
    val = curve.form(*cn)
    if val.absolute_precision < k:
        raise PrecisionError("form value not known to the requested precision")
    return val.is_zero or val.valuation >= k


# ---------------------------------------------------------------------------
# local cases for the covering X^3 + 3Y^3 + d'Z^3 = 0

def _dprime(d: int) -> int:
    if d % 3:
        raise ValueError(f"d = {d} is not divisible by 3")
    return d // 3


def has_zeta9(v: Place) -> bool:
    return v.is_finite and v.p % 9 == 1


def has_zeta3(v: Place) -> bool:
    return v.is_finite and v.p % 3 == 1


def primitive_roots_of_unity(n: int, p: int) -> list[int]:
    """Residues of the primitive n-th roots of unity modulo p (empty unless n | p - 1)."""
    if (p - 1) % n:
        return []
    w = pow(primitive_root(p), (p - 1) // n, p)
    return sorted(pow(w, j, p) for j in range(1, n) if gcd(j, n) == 1)


def _zeta3_residues(p: int) -> list[int]:
    return primitive_roots_of_unity(3, p)


def _case5_zeta(v: Place, k: int = DEFAULT_PRECISION) -> PadicNumber | None:
    """A lifted primitive cube root of unity z with 3z a cube in Q_p, if any."""
    if not has_zeta3(v):
        return None
    p = v.p
    for z0 in _zeta3_residues(p):
        zeta = hensel_lift_root([1, 1, 1], p, z0, k)
        if pow(3 * zeta.residue(1) % p, (p - 1) // 3, p) == 1:
            return zeta
    return None


def lemma42_conditions(d: int, v) -> dict[int, bool]:
    """Which of the five local conditions hold over Q_v."""
    dp = _dprime(d)
    v = _place(v)
    d_cube = is_cube_local(d, v)
    return {
        1: is_cube_local(3, v),
        2: is_cube_local(dp, v),
        3: is_cube_local(3 * d, v),
        4: d_cube and has_zeta9(v),
        5: d_cube and _case5_zeta(v) is not None,
    }


def lemma42_case(d: int, v) -> int | None:
    """Least-numbered local case satisfied over Q_v, or None."""
    for case, ok in lemma42_conditions(d, v).items():
        if ok:
            return case
    return None


def _cube_class(a: int, p: int, g: int) -> int:
    """Index of the class of a unit in the cyclic group F_p^x / cubes, w.r.t. generator g."""
    h = pow(a % p, (p - 1) // 3, p)
    w = pow(g, (p - 1) // 3, p)
    for j in range(3):
        if pow(w, j, p) == h:
            return j
    raise AssertionError("not a unit")


def _case_from_classes(zeta_class: int | None, c3: int, cdp: int) -> int:
    """The corollary's case analysis in the cyclic group Z/3 of unit cube classes.

    ``zeta_class`` is None when Q_v has no primitive cube root of unity (then
    every unit is a cube).
    """
    if zeta_class is None or c3 == 0:
        return 1
    if cdp == 0:
        return 2
    if (2 * c3 + cdp) % 3 == 0:
        return 3
    # 3, d', 3d all non-cubes in a group of order 3 forces d = 3d' to be a cube
    assert (c3 + cdp) % 3 == 0
    if zeta_class == 0:
        return 4
    # zeta generates the group, so 3 * zeta**j is a cube for some j
    return 5


def corollary43_case_table() -> list[dict]:
    """Every residue pattern a good prime can have, with the case that applies.

    Rows cover p = 2 mod 3 (no cube roots of unity), p = 1 mod 9 (zeta_3 a
    cube) and p = 4, 7 mod 9 (zeta_3 not a cube), crossed with all cube
    classes of 3 and d'.
    """
    rows = [{"residue": "p = 2 mod 3", "class_3": None, "class_dprime": None,
             "case": _case_from_classes(None, 0, 0)}]
    for label, zc in (("p = 1 mod 9", 0), ("p = 4, 7 mod 9", 1)):
        for c3 in range(3):
            for cdp in range(3):
                rows.append({"residue": label, "class_3": c3, "class_dprime": cdp,
                             "case": _case_from_classes(zc, c3, cdp)})
    return rows


def corollary43_check(d: int, v) -> int:
    """The case supplied by the cyclic-group argument at a prime not dividing d."""
    dp = _dprime(d)
    v = _place(v)
    if v.is_real:
        raise ValueError("corollary43_check applies to finite primes")
    p = v.p
    if d % p == 0:
        raise ValueError(f"{p} divides d = {d}")
    if p % 3 == 2:
        return _case_from_classes(None, 0, 0)
    g = primitive_root(p)
    zeta = _zeta3_residues(p)[0]
    return _case_from_classes(_cube_class(zeta, p, g), _cube_class(3, p, g), _cube_class(dp, p, g))


# ---------------------------------------------------------------------------
# explicit local points

@dataclass
class Lemma42Witness:
    case: int
    d: int
    prime: int
    precision: int
    point: tuple | None = None
    image: tuple | None = None
    target: tuple | None = None
    on_curve: bool = False
    image_matches: bool = False
    slack: int = 0
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.on_curve and self.image_matches

    def to_dict(self) -> dict:
        def res(t):
            return None if t is None else [repr(c) for c in t]
        return {
            "case": self.case, "d": self.d, "prime": self.prime, "precision": self.precision,
            "point": res(self.point), "image": res(self.image), "target": res(self.target),
            "on_curve": self.on_curve, "image_matches": self.image_matches,
            "slack": self.slack, "note": self.note,
        }


def _root(a, n, p, N):
    r = nth_root_local(a, n, Place.finite(p), N)
    if r is None:
        raise ValueError(f"{a} has no {n}-th root in Q_{p}")
    return r


def _lemma42_points(case: int, d: int, p: int, N: int):
    """Yield ``(point, target, note)`` candidates over Q_p for the given case."""
    dp = d // 3
    one = _exact(1, p)
    zero = _exact(0, p)
    if case == 1:
        r = _root(3, 3, p, N)
        yield (-r, one, zero), (one, -one, zero), ""
    elif case == 2:
        r = _root(dp, 3, p, N)
        yield (-r, zero, one), (one, -one, zero), ""
    elif case == 3:
        r = _root(3 * d, 3, p, N)
        yield (zero, -r, _exact(3, p)), (one, -one, zero), ""
    elif case == 4:
        if p % 9 != 1:
            raise ValueError(f"Q_{p} has no primitive 9th root of unity")
        c = _root(d, 3, p, N)
        for z0 in primitive_roots_of_unity(9, p):
            z = hensel_lift_root([1, 0, 0, 1, 0, 0, 1], p, z0, N)
            X = (2 * z**5 + z**4 + z**2 + 2 * z) * c
            Y = (-(z**3) + z**2 + z - 1) * c
            yield (X, Y, _exact(-3, p)), (zero, -c, one), f"zeta9 = {z0} mod {p}"
    elif case == 5:
        zeta = _case5_zeta(Place.finite(p), N)
        if zeta is None:
            raise ValueError(f"Q_{p} has no cube root of unity z with 3z a cube")
        beta = _root_padic_cube(3 * zeta, p, N)
        c = _root(d, 3, p, N)
        three = _exact(3, p)
        for name, target in (("zeta^2", (zeta * zeta, -one, zero)), ("zeta", (zeta, -one, zero))):
            yield (beta * beta * c, beta * c, three), target, f"image ({name} : -1 : 0)"
    else:
        raise ValueError(f"unknown case {case}")


def _root_padic_cube(a: PadicNumber, p: int, N: int) -> PadicNumber:
    """Cube root of a p-adic unit (p != 3) by Hensel lifting its residue."""
    u = a.residue(N)
    r0 = next(x for x in range(1, p) if (x**3 - u) % p == 0)
    return hensel_lift_root([-u, 0, 0, 1], p, r0, N)


def lemma42_witness(case: int, d: int, v, k: int = DEFAULT_PRECISION) -> Lemma42Witness:
    """Construct the case's explicit Q_p-point on C and check its image under pi.

    Precision is doubled (up to the global cap) until both checks can be
    decided at ``k`` digits.
    """
    dp = _dprime(d)
    v = _place(v)
    if v.is_real:
        raise ValueError("explicit points are constructed at finite primes")
    p = v.p
    if not lemma42_conditions(d, v)[case]:
        raise ValueError(f"case {case} does not hold for d = {d} over Q_{p}")
    cov = CoveringMap(DiagonalCubic(1, 3, dp))
    N = k + 4
    best = Lemma42Witness(case, d, p, k)
    while True:
        try:
            for point, target, note in _lemma42_points(case, d, p, N):
                w = Lemma42Witness(case, d, p, k, point=point, target=target, note=note)
                w.on_curve = padic_on_curve(cov.source, point, p, k)
                w.image = covering_eval_padic(cov, point)
                w.image_matches, w.slack = padic_projective_equal(w.image, target, p, k)
                if w.ok:
                    return w
                best = w
            return best
        except PrecisionError:
            if N >= MAX_PRECISION:
                raise
            N = min(2 * N, MAX_PRECISION)


def verify_lemma42_point(case: int, d: int, v, k: int = DEFAULT_PRECISION) -> bool:
    return lemma42_witness(case, d, v, k).ok


# ---------------------------------------------------------------------------
# certificates

@dataclass
class LocalCertificate:
    """Per-place evidence that the covering class is locally in delta3(E[3])."""

    d: int
    bad_places: dict[str, int]
    case_table: list[dict]
    spot_checks: dict[int, int]
    seed: int

    def to_dict(self) -> dict:
        counts: dict[str, int] = {}
        for c in self.spot_checks.values():
            counts[str(c)] = counts.get(str(c), 0) + 1
        return {
            "d": self.d,
            "bad_places": dict(self.bad_places),
            "good_primes": {
                "proved_by": "case analysis on (p mod 9, cube class of 3, cube class of d')",
                "case_table": self.case_table,
                "spot_checked": len(self.spot_checks),
                "spot_check_cases": dict(sorted(counts.items())),
                "seed": self.seed,
            },
        }


def local_divisibility_certificate(d: int, *, spot_checks: int = 1000, seed: int = 0,
                                   prime_bound: int = 10**6) -> LocalCertificate:
    """Case ids at the real place and the primes dividing d, plus the good-prime argument.

    Raises :class:`CertificateFailure` if some place dividing d admits no case.
    """
    _dprime(d)
    bad: dict[str, int] = {}
    places = [REAL] + [Place.finite(p) for p in primefactors(d)]
    for v in places:
        case = lemma42_case(d, v)
        if case is None:
            raise CertificateFailure(f"no local case applies at {v} for d = {d}")
        bad[str(v)] = case
    table = corollary43_case_table()
    if any(row["case"] is None for row in table):
        raise CertificateFailure("case table has a gap")
    rng = random.Random(seed)
    pool = [p for p in primerange(2, prime_bound) if d % p]
    sample = sorted(rng.sample(pool, min(spot_checks, len(pool))))
    checks = {}
    for p in sample:
        c = corollary43_check(d, p)
        if lemma42_conditions(d, p)[c] is not True:
            raise CertificateFailure(f"case {c} claimed at {p} does not hold")
        checks[p] = c
    return LocalCertificate(d, bad, table, checks, seed)

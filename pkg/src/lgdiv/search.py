"""Rational point search and local solvability for diagonal cubics."""
from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import gcd

import numpy as np
from sympy import primefactors, primerange

from .diagcubic import DiagonalCubic, ProjPoint, contains
from .localfields import DEFAULT_PRECISION, _int_val, _place, integer_cube_root
from .weierstrass import InconclusiveError

_INT64_SAFE = 1 << 62


@dataclass
class SearchReport:
    curve: DiagonalCubic
    height_bound: int
    points: list[ProjPoint] = field(default_factory=list)
    elapsed: float = 0.0
    exhaustive: bool = True

    def within(self, H: int) -> list[ProjPoint]:
        return [pt for pt in self.points if pt.height <= H]

    def to_dict(self, canonical: bool = False) -> dict:
        out = {
            "curve": list(self.curve.coefficients),
            "height_bound": self.height_bound,
            "points": [list(pt) for pt in self.points],
            "exhaustive": self.exhaustive,
        }
        if not canonical:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def _band_numpy(a, b, c, H, xs):
    Y = np.arange(-H, H + 1, dtype=np.int64)
    bY3 = b * Y**3
    found = []
    for X in xs:
        S = a * X**3 + bY3
        mask = S % c == 0
        if X == 0:
            mask &= Y > 0
        T = -(S[mask] // c)
        Ys = Y[mask]
        z = np.rint(np.cbrt(T.astype(np.float64))).astype(np.int64)
        ok = (z**3 == T) & (np.abs(z) <= H)
        for y, zz in zip(Ys[ok].tolist(), z[ok].tolist()):
            if gcd(gcd(X, y), zz) == 1:
                found.append(ProjPoint(X, y, zz))
    return found


def _band_python(a, b, c, H, xs):
    found = []
    for X in xs:
        for y in range(1 if X == 0 else -H, H + 1):
            S = a * X**3 + b * y**3
            if S % c:
                continue
            zz = integer_cube_root(-S // c)
            if zz is not None and abs(zz) <= H and gcd(gcd(X, y), zz) == 1:
                found.append(ProjPoint(X, y, zz))
    return found


def point_search(curve: DiagonalCubic, H: int, jobs: int = 1) -> SearchReport:
    """All primitive points with max(|X|, |Y|, |Z|) <= H.

    Iterates X >= 0 and Y over [-H, H] (the sign convention makes the first
    nonzero coordinate positive) and solves cZ^3 = -(aX^3 + bY^3) exactly.
    """
    if H < 1:
        raise ValueError("height bound must be positive")
    a, b, c = curve.coefficients
    t0 = time.perf_counter()
    big = (abs(a) + abs(b) + abs(c)) * H**3
    band = _band_numpy if big < _INT64_SAFE else _band_python
    xs = list(range(0, H + 1))
    jobs = max(1, int(jobs))
    chunks = [xs[i::jobs] for i in range(jobs)]
    if jobs == 1:
        results = [band(a, b, c, H, chunks[0])]
    else:
        with ThreadPoolExecutor(jobs) as ex:
            results = list(ex.map(lambda ch: band(a, b, c, H, ch), chunks))
    points = sorted({pt for r in results for pt in r})
    assert all(contains(curve, pt) for pt in points)
    return SearchReport(curve, H, points, time.perf_counter() - t0, True)


# ---------------------------------------------------------------------------
# local solvability

def _val(n: int, p: int, cap: int) -> int:
    return cap if n == 0 else min(_int_val(n, p), cap)


def _hensel_ok(curve: DiagonalCubic, pt, p: int, cap: int) -> bool:
    """Multivariate Hensel: v(F(pt)) > 2 * min v(dF/dx_i(pt))."""
    a, b, c = curve.coefficients
    X, Y, Z = pt
    t = min(_val(3 * a * X * X, p, cap), _val(3 * b * Y * Y, p, cap), _val(3 * c * Z * Z, p, cap))
    return t < cap and _val(curve.form(X, Y, Z), p, cap) > 2 * t


# charts covering primitive triples: the first unit coordinate is 1 and the
# coordinates before it are divisible by p
_CHARTS = [
    ((1, None, None), (1, 2), ()),
    ((None, 1, None), (0, 2), (0,)),
    ((None, None, 1), (0, 1), (0, 1)),
]


def _first_level(curve: DiagonalCubic, p: int, base, free, divisible):
    """Residue triples mod p on the chart with F = 0 mod p."""
    coeffs = curve.coefficients
    s1, s2 = free
    r1 = [0] if s1 in divisible else range(p)
    r2 = [0] if s2 in divisible else range(p)
    roots: dict[int, list[int]] = {}
    if coeffs[s2] % p and len(r2) == p:
        for z in range(p):
            roots.setdefault(pow(z, 3, p), []).append(z)
    inv = pow(coeffs[s2], -1, p) if roots else None
    for d1 in r1:
        pt = list(base)
        pt[s1] = d1
        if roots:
            pt[s2] = 0
            rest = curve.form(*pt)
            for d2 in roots.get(-rest * inv % p, ()):
                pt[s2] = d2
                yield tuple(pt)
        else:
            for d2 in r2:
                pt[s2] = d2
                if curve.form(*pt) % p == 0:
                    yield tuple(pt)


def locally_solvable(curve: DiagonalCubic, v, k: int = DEFAULT_PRECISION,
                     max_nodes: int = 10**6) -> bool:
    """Does the curve have a Q_v-point?

    Residue classes of primitive triples are refined digit by digit.  A class
    is accepted as soon as a representative passes the Hensel criterion; the
    answer is False once no class survives modulo some p**j.
    """
    v = _place(v)
    if v.is_real:
        return True  # odd degree in each variable
    p = v.p
    cap = 4 * k + 8
    for base, free, divisible in _CHARTS:
        nodes = []
        for pt in _first_level(curve, p, base, free, divisible):
            if _hensel_ok(curve, pt, p, cap):
                return True
            nodes.append(pt)
        j = 1
        while nodes:
            if j >= k:
                raise InconclusiveError(f"{len(nodes)} residue classes undecided modulo {p}^{k}")
            step = p**j
            mod = step * p
            children = []
            for pt in nodes:
                for digits in product(range(p), repeat=2):
                    q = list(pt)
                    for slot, dgt in zip(free, digits):
                        q[slot] += dgt * step
                    if curve.form(*q) % mod == 0:
                        if _hensel_ok(curve, q, p, cap):
                            return True
                        children.append(tuple(q))
                if len(children) > max_nodes:
                    raise InconclusiveError(f"node budget exhausted at {p}^{j + 1}")
            nodes = children
            j += 1
    return False


def everywhere_locally_solvable(curve: DiagonalCubic, k: int = DEFAULT_PRECISION, *,
                                spot_checks: int = 100, seed: int = 0,
                                prime_bound: int = 10**4) -> tuple[bool, dict]:
    """Local solvability at the real place and every prime dividing 3abc.

    Good primes are solvable (smooth plane cubic, Hasse-Weil, then Hensel);
    that is spot-checked at ``spot_checks`` random good primes below
    ``prime_bound``.  Returns the verdict and a per-place breakdown.
    """
    a, b, c = curve.coefficients
    bad = primefactors(3 * a * b * c)
    places = {"real": True}
    for p in bad:
        places[str(p)] = locally_solvable(curve, p, k)
    pool = [p for p in primerange(2, prime_bound) if p not in bad]
    rng = random.Random(seed)
    sample = sorted(rng.sample(pool, min(spot_checks, len(pool))))
    spot = {p: locally_solvable(curve, p, k) for p in sample}
    ok = all(places.values()) and all(spot.values())
    return ok, {"places": places, "spot_checked": len(spot),
                "spot_failures": [p for p, r in spot.items() if not r]}

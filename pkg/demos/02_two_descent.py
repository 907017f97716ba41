"""A point that is 2-divisible everywhere locally but not over Q."""
from sympy import primerange

from lgdiv.weierstrass import (
    ECPoint,
    FactoredCubicCurve,
    delta2,
    local_torsion_delta2_membership,
    rational_torsion_delta2_membership,
    reduction_count,
    scalar_mul,
    two_torsion_delta2_image,
    two_torsion_points,
)

E = FactoredCubicCurve(1365, 1430, -2795)
P = ECPoint(341, 59136)
print(E, "  P =", P)

xi = delta2(E, P)
print("delta2(P) =", xi)
for T in two_torsion_points(E)[1:]:
    print(f"  delta2{T} = {delta2(E, T)}")
print("torsion image:", sorted(map(str, two_torsion_delta2_image(E))))

# delta2(P) lies in the image of torsion at every place, yet not over Q
places = ["real", 2] + list(primerange(3, 200))
print("locally in the torsion image at all places up to 200:",
      all(local_torsion_delta2_membership(E, xi, v) for v in places))
print("in the torsion image over Q:", rational_torsion_delta2_membership(E, xi))

# E(F_3) has 4 points, so there is no extra 2-power torsion over Q
print("|E(F_3)| =", reduction_count(E, 3))
print("2P =", scalar_mul(E, 2, P), " delta2(2P) =", delta2(E, scalar_mul(E, 2, P)))

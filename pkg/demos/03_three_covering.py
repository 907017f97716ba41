"""Euler's 3-covering of x^3 + y^3 + 30z^3 = 0 and the local cases at each place."""
from lgdiv.diagcubic import (
    CoveringMap,
    DiagonalCubic,
    covering_eval,
    lemma42_case,
    lemma42_witness,
    local_divisibility_certificate,
)

C = DiagonalCubic(1, 3, 10)
pi = CoveringMap(C)
Q = (-11, 3, 5)
print(C, " contains", Q, ":", C.form(*Q) == 0)
print("pi(Q) =", covering_eval(pi, Q), "on", pi.target)

for v in ["real", 2, 3, 5, 7, 19]:
    print(f"  least local case at {v}: {lemma42_case(30, v)}")

for case, p in [(1, 2), (2, 3), (1, 5)]:
    w = lemma42_witness(case, 30, p, 12)
    print(f"  case {case} over Q_{p}: on C {w.on_curve}, image matches {w.image_matches}")

cert = local_divisibility_certificate(30, spot_checks=200)
print("certificate:", cert.bad_places, "spot-checked", len(cert.spot_checks), "good primes")

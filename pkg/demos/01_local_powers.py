"""Squares and cubes in Q_p, and a p-adic cube root by Hensel lifting."""
from fractions import Fraction

from lgdiv.localfields import (
    is_cube_local,
    is_square_local,
    local_square_class,
    nth_root_local,
)

# 65 = 1 mod 8, so it is a 2-adic square; -1 is a square mod 5 and mod 13
for a, v in [(65, 2), (65, "real"), (-1, 5), (-1, 13), (-1, 3)]:
    field = "R" if v == "real" else f"Q_{v}"
    print(f"{a:>4} square in {field}: {is_square_local(a, v)}")

# cube classes: every unit is a cube when p = 2 mod 3; at 3 one looks mod 9
for a, v in [(3, 2), (3, 5), (10, 3), (3, 7), (Fraction(1, 27), 7)]:
    print(f"{str(a):>4} cube in Q_{v}: {is_cube_local(a, v)}")

# canonical representatives of Q_2^x / squares
print("classes mod squares in Q_2:", sorted({local_square_class(n, 2) for n in range(1, 64)}))

r = nth_root_local(3, 3, 2, 20)
print("cube root of 3 in Q_2:", r)
print("  its cube minus 3:", r**3 - 3)

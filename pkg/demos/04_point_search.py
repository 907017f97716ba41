"""Bounded point search and local solvability on diagonal cubics."""
import time

from lgdiv.diagcubic import DiagonalCubic
from lgdiv.search import everywhere_locally_solvable, point_search

for dp in (10, 46, 55, 100, 118):
    C = DiagonalCubic(1, 3, dp)
    t0 = time.perf_counter()
    rep = point_search(C, 2000)
    ok, info = everywhere_locally_solvable(C, 12, spot_checks=50)
    print(f"{str(C):<26} points up to 2000: {len(rep.points):>2}"
          f"  locally solvable: {ok} {sorted(info['places'])}  ({time.perf_counter() - t0:.2f}s)")
    for pt in rep.points[:3]:
        print("   ", pt)

# X^3 + 2Y^3 + 4Z^3 has neither 2-adic nor 3-adic points
ok, info = everywhere_locally_solvable(DiagonalCubic(1, 2, 4), 12, spot_checks=5)
print("X^3 + 2Y^3 + 4Z^3:", ok, info["places"])

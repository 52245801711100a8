"""Haar-random frames: alignment parameter, overlaps and expected value.

Results depend only on the seed, not on the number of workers.

Run: python3 demos/05_monte_carlo.py
"""

from jamming.combinatorics import GameParams
from jamming.montecarlo import estimate_alpha, estimate_alpha_via_pgm, estimate_Ewq, estimate_Lj

N = 200_000
for d in (2, 3, 4):
    a = estimate_alpha(d, N, seed=0)
    p = estimate_alpha_via_pgm(d, N, seed=1)
    print(f"alpha_{d}: {a.mean:.5f} +- {a.stderr:.5f}   via PGM: {p.mean:.5f} +- {p.stderr:.5f}")

params = GameParams(3, 1)
L1 = estimate_Lj(params, 1, N, seed=2)
print(f"L1 at d=2: {L1.mean:.5f} +- {L1.stderr:.5f}  (13/18 = {13 / 18:.5f})")
for method in ("direct", "decomposed"):
    e = estimate_Ewq(params, N, seed=3, method=method)
    print(f"E[omega_q] (3,1) {method:10s}: {e.mean:.5f} +- {e.stderr:.5f}  (31/54 = {31 / 54:.5f})")

assert estimate_alpha(3, 20_000, seed=9, workers=1) == estimate_alpha(3, 20_000, seed=9, workers=4)
print("worker count does not change results")

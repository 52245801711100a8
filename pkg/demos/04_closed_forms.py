"""Closed forms for harmonic and simplex strategies, and their crossover.

Run: python3 demos/04_closed_forms.py
"""

from jamming import closed_forms as cf
from jamming.combinatorics import GameParams, classical_value, classical_value_d2

print(" n   harmonic d=2   classical   ratio")
for n in (3, 5, 10, 50, 1000):
    q, c = cf.harmonic_d2_value(n), float(classical_value_d2(n))
    print(f"{n:4d}   {q:.6f}     {c:.6f}   {q / c:.5f}")
print(f"limit of the ratio: {cf.harmonic_asymptotic_ratio():.5f}")

print("\n d   mu       omega_q  omega_c  margin")
for d in range(2, 9):
    mu, omega = cf.simplex_value(d)
    print(f"{d:2d}   {mu:.4f}   {omega:.4f}   {float(classical_value(GameParams(d + 1, 1))):.4f}   "
          f"{cf.simplex_margin(d):+.4f}")
print(f"simplex stops beating classical at d* = {cf.simplex_crossover():.4f}")

L1, ratio = cf.random_frame_formulas(2, 5 / 6)
print(f"\nrandom frames, d=2: L1 = {L1:.6f} (13/18), large-n ratio {ratio:.4f}")

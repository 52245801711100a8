"""Quantum values of frame strategies, checked two ways, and the reference tables.

Run: python3 demos/03_quantum_values.py
"""

from jamming.combinatorics import GameParams
from jamming.frames import make_frame
from jamming.game import advantage_ratio, decompose_by_intersection, quantum_value, quantum_value_direct
from jamming.tables import compute_table

for family, n, d in [("simplex", 3, 2), ("sic", 4, 2), ("mub", 6, 2), ("harmonic", 7, 6), ("alltop", 7, 6)]:
    params = GameParams.from_nd(n, d)
    f = make_frame(family, n, d)
    trace, direct = quantum_value(f, params).omega, quantum_value_direct(f, params).omega
    print(f"{family:9s} (n={n}, d={d}): omega_q {trace:.6f} (pair sum {direct:.6f}), "
          f"ratio to classical {advantage_ratio(f, params):.4f}")

# Splitting the value by how many channels two safe sets share
report = decompose_by_intersection(make_frame("harmonic", 8, 3), GameParams.from_nd(8, 3))
for c in report.per_j:
    print(f"  j={c.j}: weight {c.weight:.4f}, mean squared overlap {c.mean_overlap:.4f}")
print(f"  rebuilt value {report.reconstructed_omega:.10f}")

cells = compute_table("mub-advantage", include_optimized=False)
print(f"\nmub-advantage table: {sum(c.passed for c in cells)}/{len(cells)} cells reproduced")

"""Classical values: exact formula, greedy strategy and exhaustive search.

Run: python3 demos/01_classical_values.py
"""

from jamming.combinatorics import (
    GameParams,
    brute_force_classical,
    classical_asymptote,
    classical_value,
    greedy_allocation,
    greedy_strategy,
)

# The greedy rule "output the smallest safe channel" is optimal. Its value is exact rational.
for n, k in [(3, 1), (4, 2), (6, 4), (7, 1)]:
    params = GameParams(n, k)
    print(f"(n={n}, k={k}): omega_c = {classical_value(params)} ~ {float(classical_value(params)):.4f}, "
          f"greedy allocation {greedy_allocation(params)}")

# Exhaustive search agrees, and letting Bob use a different strategy from Alice never helps.
params = GameParams(4, 1)
aligned, best = brute_force_classical(params, "aligned")
full, _ = brute_force_classical(params, "full")
print(f"\n(4,1) exhaustive: aligned {aligned}, unrestricted {full}")
print(best.to_table())

print(greedy_strategy(GameParams(3, 1)).to_table())

# Leading-order behaviour at large n with d fixed.
for n in (100, 1000, 10000):
    exact = float(classical_value(GameParams.from_nd(n, 3)))
    print(f"d=3, n={n}: exact {exact:.6f}, leading order {classical_asymptote('fixed-d', n=n, d=3):.6f}")

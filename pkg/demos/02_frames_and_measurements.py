"""Seed frames and the measurement bases built from them.

Run: python3 demos/02_frames_and_measurements.py
"""

import numpy as np

from jamming.combinatorics import GameParams
from jamming.frames import coherence, make_frame, save_frame, welch_bound
from jamming.measurement import all_bases, distance_to_seeds, gram_matrix, gram_schmidt_basis, lowdin_basis

for family, n, d in [("simplex", 4, 3), ("sic", 9, 3), ("mub", 12, 3), ("harmonic", 8, 3), ("alltop", 7, 3)]:
    f = make_frame(family, n, d)
    print(f"{family:9s} n={n:2d} d={d}: coherence {coherence(f):.4f}, Welch bound {welch_bound(n, d):.4f}")

# Löwdin orthonormalization of one safe set of the simplex frame
f = make_frame("simplex", 4, 3)
x = (0, 1, 2)
print("\nGram matrix of the simplex seeds on", x)
print(np.round(gram_matrix(f, x).real, 4))
basis = lowdin_basis(f, x)
print("orthonormal:", np.allclose(basis.vectors.conj() @ basis.vectors.T, np.eye(3)))
print(f"distance to seeds: Löwdin {distance_to_seeds(f, basis):.4f}, "
      f"Gram-Schmidt {distance_to_seeds(f, gram_schmidt_basis(f, x)):.4f}")

# Rank-deficient Gram matrices fall back to the pseudoinverse and are flagged
bases = all_bases(make_frame("alltop", 7, 6), GameParams.from_nd(7, 6))
print("\nAllTop (7,6): non-projective bases:", [x for x, b in bases.items() if not b.projective] or "none")

save_frame(make_frame("sic", 16, 4), "/tmp/sic4.json")
print("wrote /tmp/sic4.json (16 equiangular vectors in C^4)")

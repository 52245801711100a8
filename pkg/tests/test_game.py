import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from jamming.closed_forms import simplex_value
from jamming.combinatorics import GameParams, classical_value
from jamming.frames import Frame, harmonic_frame, make_frame, random_haar_frame, simplex_frame
from jamming.game import (
    advantage_ratio,
    decompose_by_intersection,
    joint_distribution,
    joint_probability,
    omega_batch,
    omega_from_vectors,
    quantum_value,
    quantum_value_direct,
)
from jamming.measurement import all_bases, lowdin_tables


def family_cases(max_sets=500):
    """Every (family, n, d) constructible here with C(n, d) <= max_sets."""
    cases = []
    for d in range(2, 7):
        cases.append(("simplex", d + 1, d))
        cases += [("harmonic", n, d) for n in range(d, 12) if comb(n, d) <= max_sets]
        cases += [("random", n, d) for n in range(d, 11) if comb(n, d) <= max_sets]
        cases += [("alltop", p, d) for p in (5, 7, 11) if p >= d and comb(p, d) <= max_sets]
    cases += [("sic", 4, 2), ("sic", 9, 3), ("mub", 6, 2), ("mub", 12, 3)]
    return cases


@pytest.mark.parametrize("family,n,d", family_cases())
def test_trace_form_matches_pair_sum(family, n, d):
    f = make_frame(family, n, d, seed=n * 10 + d)
    params = GameParams.from_nd(n, d)
    assert abs(quantum_value(f, params).omega - quantum_value_direct(f, params).omega) <= 1e-12


@pytest.mark.parametrize(
    "family,n,d,value",
    [("harmonic", 3, 2, 7 / 12), ("sic", 4, 2, 5 / 12)],
)
def test_exact_small_values(family, n, d, value):
    f = make_frame(family, n, d)
    params = GameParams.from_nd(n, d)
    assert quantum_value(f, params).omega == pytest.approx(value, abs=1e-14)
    assert quantum_value_direct(f, params).omega == pytest.approx(value, abs=1e-14)


def test_reference_spot_values():
    assert round(quantum_value(make_frame("mub", 6, 2), GameParams(6, 4)).omega, 4) == 0.2644
    assert round(advantage_ratio(make_frame("mub", 6, 2), GameParams(6, 4)), 3) == 1.082
    assert round(advantage_ratio(simplex_frame(2), GameParams(3, 1)), 3) == 1.050
    assert round(advantage_ratio(harmonic_frame(7, 6), GameParams(7, 1)), 3) == 0.998


@pytest.mark.parametrize("n", [1, 3, 5])
def test_trivial_game_with_complete_basis(n):
    f = random_haar_frame(n, n, 0)
    assert quantum_value_direct(f, GameParams(n, 0)).omega == pytest.approx(1.0, abs=1e-12)


def test_joint_distribution_examples():
    f = harmonic_frame(3, 2)
    bases = all_bases(f, GameParams(3, 1))
    assert joint_probability(bases, (0, 1), (0, 2), 0, 0) == pytest.approx(3 / 8, abs=1e-14)
    P = joint_distribution(bases, (0, 1), (0, 1))
    assert np.allclose(P, np.eye(2) / 2, atol=1e-14)
    with pytest.raises(ValueError):
        joint_probability(bases, (0, 1), (0, 2), 2, 0)
    with pytest.raises(ValueError):
        joint_probability(bases, (0, 1), (0, 2), 0, 1)


def test_non_projective_bases_lose_probability():
    v = np.array([1.0, 0.0], dtype=complex)
    f = Frame(np.array([v, v, [0.0, 1.0]]))
    bases = all_bases(f, GameParams(3, 1))
    P = joint_distribution(bases, (0, 1), (0, 1))
    assert P.sum() < 1 - 1e-6 and np.all(P >= 0)


@pytest.mark.parametrize("family,n,d", [c for c in family_cases(200) if c[2] <= 5])
def test_decomposition_reconstructs_value(family, n, d):
    f = make_frame(family, n, d, seed=1)
    params = GameParams.from_nd(n, d)
    report = decompose_by_intersection(f, params)
    assert abs(report.reconstructed_omega - quantum_value(f, params).omega) <= 1e-10
    assert math.fsum(c.weight for c in report.per_j) == pytest.approx(1.0, abs=1e-12)
    for c, emp in zip(report.per_j, report.empirical_weights):
        assert c.weight == pytest.approx(emp, abs=1e-12)


@pytest.mark.parametrize("d", range(2, 7))
def test_simplex_has_one_off_diagonal_class(d):
    report = decompose_by_intersection(simplex_frame(d), GameParams(d + 1, 1))
    mu, _ = simplex_value(d)
    by_j = {c.j: c for c in report.per_j}
    assert by_j[d - 1].mean_overlap == pytest.approx(mu**2, abs=1e-12)
    assert by_j[d].mean_overlap == pytest.approx(1.0, abs=1e-12)
    assert all(c.pair_count == 0 for c in report.per_j if c.j < d - 1)


@pytest.mark.parametrize("n", [4, 7, 10])
def test_harmonic_d2_overlaps_are_cosine_averages(n):
    report = decompose_by_intersection(harmonic_frame(n, 2), GameParams.from_nd(n, 2))
    # X = {0, m1}, Y = {0, m2} with m1 != m2: overlap cos^2(pi |m2 - m1| / 2n); shift-invariant in c
    vals = [math.cos(math.pi * abs(a - b) / (2 * n)) ** 2 for a in range(1, n) for b in range(1, n) if a != b]
    assert report.per_j[0].mean_overlap == pytest.approx(math.fsum(vals) / len(vals), abs=1e-12)


def test_batched_value_matches_single():
    params = GameParams.from_nd(6, 3)
    sets, vecs, _ = lowdin_tables(random_haar_frame(6, 3, 4), params)
    sets2, vecs2, _ = lowdin_tables(harmonic_frame(6, 3), params)
    batch = omega_batch(np.stack([vecs, vecs2]), sets, 6)
    assert batch[0] == pytest.approx(omega_from_vectors(vecs, sets, 6), abs=1e-14)
    assert batch[1] == pytest.approx(omega_from_vectors(vecs2, sets2, 6), abs=1e-14)


def test_record_shape():
    rec = quantum_value(harmonic_frame(3, 2), GameParams(3, 1)).to_record()
    assert set(rec) == {"n", "k", "d", "frame", "omega_q", "omega_c", "ratio", "method"}
    assert rec["omega_c"] == float(Fraction(5, 9)) == float(classical_value(GameParams(3, 1)))


def test_mismatched_frame_rejected():
    with pytest.raises(ValueError):
        quantum_value(harmonic_frame(5, 2), GameParams(5, 1))

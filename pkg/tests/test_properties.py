"""Randomized invariants of frames, measurements and game values (d <= 5, 100+ cases each)."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from jamming.combinatorics import GameParams, enumerate_safe_sets
from jamming.frames import Frame, clock_unitary, coherence, harmonic_frame, welch_bound
from jamming.game import joint_distribution, quantum_value
from jamming.linalg import hermitian_eig
from jamming.measurement import all_bases

from strategies import game_frames, hermitian, random_unitary, seeds

CASES = settings(max_examples=100, deadline=None)


def params_of(frame):
    return GameParams.from_nd(frame.n, frame.d)


@CASES
@given(game_frames())
def test_welch_bound(case):
    frame, _ = case
    if frame.n > frame.d:
        assert coherence(frame) >= welch_bound(frame.n, frame.d) - 1e-12


@CASES
@given(seeds, st.integers(1, 5))
def test_gershgorin_containment(seed, m):
    H = hermitian(seed, m)
    radii = np.sum(np.abs(H), axis=1) - np.abs(np.diag(H))
    for lam in hermitian_eig(H, "jacobi").eigenvalues:
        assert np.any(np.abs(lam - np.diag(H).real) <= radii + 1e-12)


@CASES
@given(game_frames())
def test_lowdin_orthonormal_and_complete(case):
    frame, _ = case
    d = frame.d
    for basis in all_bases(frame, params_of(frame)).values():
        V = basis.vectors
        if basis.projective:
            assert np.allclose(V.conj() @ V.T, np.eye(d), atol=1e-9)
            assert np.allclose(basis.operator_sum(), np.eye(d), atol=1e-9)
        else:
            P = basis.operator_sum()
            assert np.allclose(P @ P, P, atol=1e-9)


@CASES
@given(game_frames(), st.randoms(use_true_random=False))
def test_channel_permutation_invariance(case, rnd):
    frame, _ = case
    perm = list(range(frame.n))
    rnd.shuffle(perm)
    relabeled = Frame(frame.vectors[perm], frame.label)
    params = params_of(frame)
    assert abs(quantum_value(relabeled, params).omega - quantum_value(frame, params).omega) <= 1e-10


@CASES
@given(st.integers(1, 5).flatmap(lambda d: st.tuples(st.just(d), st.integers(max(d, 2), d + 5))))
def test_clock_equivariance_of_harmonic_bases(nd):
    d, n = nd
    frame = harmonic_frame(n, d)
    U = clock_unitary(n, d)
    bases = all_bases(frame, GameParams.from_nd(n, d))
    for x, basis in bases.items():
        shifted = tuple(sorted((c + 1) % n for c in x))
        for c in x:
            assert np.allclose(U @ basis.vector(c), bases[shifted].vector((c + 1) % n), atol=1e-9)


@CASES
@given(st.integers(2, 5).flatmap(lambda d: st.tuples(st.just(d), st.integers(d + 1, d + 5))), st.data())
def test_cyclic_reduction(nd, data):
    d, n = nd
    bases = all_bases(harmonic_frame(n, d), GameParams.from_nd(n, d))
    sets = enumerate_safe_sets(GameParams.from_nd(n, d))
    c = data.draw(st.integers(0, n - 1))
    through = [x for x in sets if c in x]
    x = data.draw(st.sampled_from(through))
    y = data.draw(st.sampled_from(through))

    def overlap(x, y, c):
        return abs(np.vdot(bases[x].vector(c), bases[y].vector(c))) ** 2

    def shift(s):
        return tuple(sorted((t - c) % n for t in s))

    assert abs(overlap(x, y, c) - overlap(shift(x), shift(y), 0)) <= 1e-10


@CASES
@given(game_frames())
def test_per_vector_phase_invariance(case):
    frame, rng = case
    phases = np.exp(2j * np.pi * rng.random(frame.n))
    rephased = Frame(frame.vectors * phases[:, None], frame.label)
    params = params_of(frame)
    assert abs(quantum_value(rephased, params).omega - quantum_value(frame, params).omega) <= 1e-10


@CASES
@given(game_frames())
def test_global_unitary_invariance(case):
    frame, rng = case
    rotated = frame.transform(random_unitary(rng, frame.d))
    params = params_of(frame)
    assert abs(quantum_value(rotated, params).omega - quantum_value(frame, params).omega) <= 1e-10


@CASES
@given(game_frames(), st.data())
def test_joint_probability_normalization(case, data):
    frame, _ = case
    params = params_of(frame)
    bases = all_bases(frame, params)
    sets = list(bases)
    x = data.draw(st.sampled_from(sets))
    y = data.draw(st.sampled_from(sets))
    P = joint_distribution(bases, x, y)
    assert np.all(P >= 0)
    if bases[x].projective and bases[y].projective:
        assert abs(P.sum() - 1) <= 1e-12
        assert np.allclose(P.sum(axis=1), 1 / frame.d, atol=1e-12)
        if x == y:
            assert abs(P.sum() - np.trace(P)) <= 1e-12
    else:
        assert P.sum() <= 1 + 1e-12

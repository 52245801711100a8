"""Seed frames: one unit vector in C^d per channel.

Every constructor returns an immutable :class:`Frame` whose rows are the
seed vectors. Constructions with a defining overlap property (simplex, SIC,
MUB) check that property before returning.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.linalg import helmert

from .errors import NotPrime, ParseError, UnsupportedDimension, ValidationError

NORM_TOL = 1e-9
FAMILIES = ("harmonic", "simplex", "sic", "mub", "alltop", "random", "file")


@dataclass(frozen=True, eq=False)
class Frame:
    """``n`` unit vectors in ``C^d``, stored as the rows of ``vectors``."""

    vectors: np.ndarray
    label: str = "file"
    n: int = field(init=False)
    d: int = field(init=False)

    def __post_init__(self):
        vecs = np.array(self.vectors, dtype=complex)
        if vecs.ndim != 2:
            raise ValidationError(f"frame vectors must form an (n, d) array, got shape {vecs.shape}")
        n, d = vecs.shape
        if d < 1 or n < d:
            raise ValidationError(f"frame needs n >= d >= 1, got n={n}, d={d}")
        if not np.all(np.isfinite(vecs)):
            raise ValidationError("frame has non-finite entries")
        norms = np.linalg.norm(vecs, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1) > NORM_TOL)
        if bad.size:
            raise ValidationError(
                f"vector {bad[0]} has norm {norms[bad[0]]:.12g}, expected 1 within {NORM_TOL:g}"
            )
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)

    def gram(self) -> np.ndarray:
        """Full ``n x n`` Gram matrix ``<phi_a|phi_b>``."""
        return self.vectors.conj() @ self.vectors.T

    def content_hash(self) -> str:
        return hashlib.sha256(self.vectors.tobytes()).hexdigest()

    def transform(self, U: np.ndarray, label: str | None = None) -> "Frame":
        """Apply ``U`` to every vector."""
        return Frame(self.vectors @ np.asarray(U).T, self.label if label is None else label)

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.vectors, other.vectors)

    def __hash__(self):
        return hash((self.label, self.content_hash()))


def _check(cond: bool, message: str):
    if not cond:
        raise ValidationError(message)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def harmonic_frame(n: int, d: int) -> Frame:
    """First ``d`` columns of the ``n``-point DFT, scaled to unit norm.

    ``(h_c)_j = exp(2 pi i c j / n) / sqrt(d)``.
    """
    if not n >= d >= 1:
        raise ValueError(f"harmonic frame needs n >= d >= 1, got n={n}, d={d}")
    c = np.arange(n)[:, None]
    j = np.arange(d)[None, :]
    return Frame(np.exp(2j * np.pi * ((c * j) % n) / n) / np.sqrt(d), "harmonic")


def clock_unitary(n: int, d: int) -> np.ndarray:
    """Diagonal unitary sending harmonic vector ``c`` to ``c + 1 (mod n)``."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) / n))


def simplex_frame(d: int) -> Frame:
    """``d + 1`` vectors in ``C^d`` with pairwise inner product ``-1/d``.

    The centred standard basis of ``R^(d+1)`` is rescaled to unit norm and
    written in the Helmert basis of the hyperplane orthogonal to the all-ones
    vector, which gives genuinely ``d``-dimensional coordinates.
    """
    if d < 2:
        raise ValueError(f"simplex frame needs d >= 2, got {d}")
    coords = np.sqrt((d + 1) / d) * helmert(d + 1)  # (d, d+1); column j is s_j
    frame = Frame(coords.T.astype(complex), "simplex")
    G = frame.gram()
    _check(np.allclose(G, (d + 1) / d * np.eye(d + 1) - 1 / d, atol=1e-12, rtol=0),
           "simplex Gram matrix check failed")
    return frame


def weyl_heisenberg_orbit(fiducial: np.ndarray) -> np.ndarray:
    """The ``d^2`` vectors ``X^a Z^b |psi>``, ordered by ``(a, b)``."""
    fid = np.asarray(fiducial, dtype=complex)
    d = len(fid)
    omega = np.exp(2j * np.pi * np.arange(d) / d)
    out = []
    for a in range(d):
        for b in range(d):
            out.append(np.roll(omega**b * fid, a))
    return np.array(out)


def _check_equiangular(frame: Frame, overlap_sq: float, tol: float = 1e-9):
    G = np.abs(frame.gram()) ** 2
    off = G[~np.eye(frame.n, dtype=bool)]
    worst = np.max(np.abs(off - overlap_sq))
    _check(worst <= tol, f"{frame.label} frame is not equiangular: deviation {worst:.3e}")


def sic_frame(d: int) -> Frame:
    """``d^2`` equiangular vectors with ``|<phi_a|phi_b>|^2 = 1/(d+1)``.

    Built in for ``d = 2`` (tetrahedron) and ``d = 3`` (Weyl-Heisenberg
    orbit of ``(0, 1, -1)/sqrt(2)``). Other dimensions must be loaded from a
    frame file; one for ``d = 4`` ships with the package, see
    :func:`bundled_frame`.

    Raises:
        UnsupportedDimension: ``d`` is not 2 or 3.
    """
    if d == 2:
        w = np.exp(2j * np.pi * np.arange(3) / 3)
        vecs = np.vstack([[1, 0], np.column_stack([np.full(3, 1 / np.sqrt(3)), np.sqrt(2 / 3) * w])])
    elif d == 3:
        vecs = weyl_heisenberg_orbit(np.array([0, 1, -1]) / np.sqrt(2))
    else:
        raise UnsupportedDimension(
            f"no built-in SIC for d={d}; use load_frame() "
            f"(bundled_frame('sic-4') provides d=4)"
        )
    frame = Frame(vecs, "sic")
    _check_equiangular(frame, 1 / (d + 1))
    return frame


_PAULI = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}
# Five maximal commuting sets of two-qubit Paulis; their joint eigenbases are
# mutually unbiased. The computational basis comes first.
_TWO_QUBIT_PARTITION = (
    ("ZI", "IZ", "ZZ"),
    ("XI", "IX", "XX"),
    ("YI", "IY", "YY"),
    ("XZ", "ZY", "YX"),
    ("YZ", "ZX", "XY"),
)


def _mub_bases(d: int) -> list[np.ndarray]:
    if d == 2:
        s = 1 / np.sqrt(2)
        return [
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, 1j * s], [s, -1j * s]], dtype=complex),
        ]
    if d == 4:
        bases = []
        for group in _TWO_QUBIT_PARTITION:
            # a generic weighted sum has non-degenerate joint eigenvectors
            M = sum(wt * np.kron(_PAULI[p[0]], _PAULI[p[1]])
                    for wt, p in zip((1.0, np.sqrt(2), np.pi), group))
            _, V = np.linalg.eigh(M)
            bases.append(V.T)
        bases[0] = np.eye(4, dtype=complex)
        return bases
    if is_prime(d):
        j = np.arange(d)
        bases = [np.eye(d, dtype=complex)]
        for m in range(d):
            r = np.arange(d)[:, None]
            bases.append(np.exp(2j * np.pi * ((m * j * j + r * j) % d) / d) / np.sqrt(d))
        return bases
    raise UnsupportedDimension(f"MUB frames are available for prime d and d=4, got d={d}")


def mub_frame(d: int) -> Frame:
    """``d + 1`` mutually unbiased bases of ``C^d`` stacked into ``d(d+1)`` vectors.

    The computational basis comes first. Odd primes use quadratic-phase
    bases, ``d = 2`` the Pauli eigenbases and ``d = 4`` the joint eigenbases
    of a partition of the two-qubit Pauli group.

    Raises:
        UnsupportedDimension: ``d`` is neither prime nor 4.
    """
    bases = _mub_bases(d)
    frame = Frame(np.vstack(bases), "mub")
    G = np.abs(frame.gram()) ** 2
    block = np.kron(np.eye(d + 1), np.ones((d, d)))
    expected = np.where(block == 1, np.eye(d * (d + 1)), 1 / d)
    worst = np.max(np.abs(G - expected))
    _check(worst <= 1e-9, f"MUB check failed for d={d}: deviation {worst:.3e}")
    return frame


def alltop_frame(n: int, d: int) -> Frame:
    """Cubic-phase vectors ``(phi_c)_j = exp(2 pi i c j^3 / n) / sqrt(d)``.

    Raises:
        NotPrime: ``n`` is not a prime of at least 5.
    """
    if n < 5 or not is_prime(n):
        raise NotPrime(f"AllTop frames need a prime n >= 5, got {n}")
    if not 1 <= d <= n:
        raise ValueError(f"AllTop frame needs 1 <= d <= n, got d={d}")
    c = np.arange(n)[:, None]
    j = np.arange(d)[None, :]
    return Frame(np.exp(2j * np.pi * ((c * j**3) % n) / n) / np.sqrt(d), "alltop")


def haar_vectors(rng: np.random.Generator, size: tuple[int, ...]) -> np.ndarray:
    """Haar-random unit vectors along the last axis of ``size``."""
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def random_haar_frame(n: int, d: int, seed: int) -> Frame:
    """``n`` independent Haar-random unit vectors in ``C^d``.

    Vector ``i`` is drawn from its own stream keyed by ``(seed, i)``, so any
    prefix of a larger frame is reproducible on its own.
    """
    if not n >= d >= 1:
        raise ValueError(f"random frame needs n >= d >= 1, got n={n}, d={d}")
    rows = [
        haar_vectors(np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,))), (d,))
        for i in range(n)
    ]
    return Frame(np.array(rows), "random")


def coherence(frame: Frame) -> float:
    """Largest overlap magnitude between distinct frame vectors."""
    if frame.n < 2:
        raise ValueError("coherence needs at least two vectors")
    G = np.abs(frame.gram())
    np.fill_diagonal(G, 0.0)
    return float(G.max())


def welch_bound(n: int, d: int) -> float:
    """Lower bound ``sqrt((n - d) / (d (n - 1)))`` on the coherence of ``n`` unit vectors in ``C^d``."""
    return math.sqrt((n - d) / (d * (n - 1)))


def make_frame(family: str, n: int, d: int, seed: int = 0) -> Frame:
    """Construct a frame by family name, checking that ``n`` fits the family."""
    if family == "harmonic":
        return harmonic_frame(n, d)
    if family == "alltop":
        return alltop_frame(n, d)
    if family == "random":
        return random_haar_frame(n, d, seed)
    fixed = {"simplex": (simplex_frame, d + 1), "sic": (sic_frame, d * d), "mub": (mub_frame, d * (d + 1))}
    if family not in fixed:
        raise ValueError(f"unknown frame family {family!r}")
    build, size = fixed[family]
    if n != size:
        raise ValueError(f"{family} frames in dimension {d} have n={size}, got n={n}")
    if family == "sic" and d not in (2, 3):
        return bundled_frame(f"sic-{d}")
    return build(d)


def frame_to_json(frame: Frame) -> str:
    doc = {
        "n": frame.n,
        "d": frame.d,
        "label": frame.label,
        "vectors": [[[float(z.real), float(z.imag)] for z in row] for row in frame.vectors],
    }
    return json.dumps(doc, indent=1)


def save_frame(frame: Frame, path) -> None:
    """Write ``frame`` as JSON ``{n, d, vectors: [[[re, im], ...], ...], label}``."""
    Path(path).write_text(frame_to_json(frame) + "\n", encoding="utf-8")


def _locate(text: str, needle: str) -> int | None:
    pos = text.find(needle)
    return None if pos < 0 else text.count("\n", 0, pos) + 1


def frame_from_json(text: str) -> Frame:
    """Parse and validate a frame document.

    Raises:
        ParseError: Malformed JSON or a missing/ill-typed field.
        ValidationError: Well-formed data violating a frame invariant.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("frame document must be a JSON object", line=1)
    for key in ("n", "d", "vectors"):
        if key not in doc:
            raise ParseError("missing required field", field=key)
    n, d, rows = doc["n"], doc["d"], doc["vectors"]
    for key, val in (("n", n), ("d", d)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise ParseError(f"expected an integer, got {val!r}", line=_locate(text, f'"{key}"'), field=key)
    if not isinstance(rows, list):
        raise ParseError("expected a list of vectors", line=_locate(text, '"vectors"'), field="vectors")
    vecs = np.empty((len(rows), d if rows else 0), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"expected {d} components", field=f"vectors[{i}]")
        for j, pair in enumerate(row):
            ok = (isinstance(pair, list) and len(pair) == 2
                  and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in pair))
            if not ok:
                raise ParseError(f"expected [re, im], got {pair!r}", field=f"vectors[{i}][{j}]")
            vecs[i, j] = complex(pair[0], pair[1])
    if len(rows) != n:
        raise ValidationError(f"header says n={n} but {len(rows)} vectors were given")
    label = doc.get("label", "file")
    if not isinstance(label, str):
        raise ParseError("label must be a string", field="label")
    return Frame(vecs, label)


def load_frame(path) -> Frame:
    return frame_from_json(Path(path).read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def bundled_frame(name: str) -> Frame:
    """Frames shipped as package data. ``"sic-4"`` is a validated SIC in ``C^4``."""
    known = {"sic-4": ("sic_d4.json", 1 / 5)}
    if name not in known:
        raise ValueError(f"unknown bundled frame {name!r}; available: {sorted(known)}")
    fname, overlap_sq = known[name]
    text = resources.files("jamming.data").joinpath(fname).read_text(encoding="utf-8")
    frame = frame_from_json(text)
    _check_equiangular(frame, overlap_sq)
    return frame

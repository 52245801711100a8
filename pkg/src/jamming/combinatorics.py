"""Safe-set enumeration and the classical side of the (n, k)-jamming game.

Channels are 0-based. A safe set is a sorted tuple of ``d = n - k`` distinct
channels; all safe sets are enumerated in lexicographic order, and that order
is the canonical index used by strategies, measurement bases and the CLI.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, ParseError, ValidationError

SafeSet = tuple[int, ...]

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 16


@dataclass(frozen=True)
class GameParams:
    """An (n, k)-jamming game: ``n`` channels, ``k`` jammed, ``d = n - k`` safe."""

    n: int
    k: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.k) != self.k:
            raise ValueError("n and k must be integers")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0 <= self.k < self.n:
            raise ValueError(f"need 0 <= k < n, got n={self.n}, k={self.k}")

    @classmethod
    def from_nd(cls, n: int, d: int) -> "GameParams":
        return cls(n, n - d)

    @property
    def d(self) -> int:
        return self.n - self.k

    @property
    def num_safe_sets(self) -> int:
        return comb(self.n, self.d)

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "d": self.d}


def enumerate_safe_sets(params: GameParams) -> list[SafeSet]:
    """All ``C(n, d)`` safe sets in lexicographic order."""
    return list(itertools.combinations(range(params.n), params.d))


def safe_set_index(params: GameParams) -> dict[SafeSet, int]:
    return {x: i for i, x in enumerate(enumerate_safe_sets(params))}


def classical_value(params: GameParams) -> Fraction:
    """Exact classical value ``sum_i C(n-1-i, k-i)^2 / C(n, k)^2``.

    Returned as a :class:`~fractions.Fraction`; use ``float()`` for a float.
    """
    n, k = params.n, params.k
    wins = sum(comb(n - 1 - i, k - i) ** 2 for i in range(k + 1))
    return Fraction(wins, comb(n, k) ** 2)


def classical_value_d2(n: int) -> Fraction:
    """Closed form ``2(2n-1) / (3n(n-1))`` of the classical value at d = 2."""
    if n < 3:
        raise ValueError(f"the d = 2 closed form needs n >= 3, got {n}")
    return Fraction(2 * (2 * n - 1), 3 * n * (n - 1))


def greedy_allocation(params: GameParams) -> tuple[int, ...]:
    """Number of safe sets the greedy strategy sends to each channel.

    Channel ``c`` (0-based) receives ``C(n-1-c, k-c)`` sets for ``c <= k``
    and none beyond.
    """
    n, k = params.n, params.k
    return tuple(comb(n - 1 - c, k - c) if c <= k else 0 for c in range(n))


@dataclass(frozen=True)
class ClassicalStrategy:
    """A deterministic valid strategy: one channel per safe set.

    ``assignment[i]`` is the channel output on the i-th safe set of
    :func:`enumerate_safe_sets`.
    """

    params: GameParams
    assignment: tuple[int, ...]

    def __post_init__(self):
        sets = enumerate_safe_sets(self.params)
        if len(self.assignment) != len(sets):
            raise ValidationError(
                f"assignment has {len(self.assignment)} entries, "
                f"expected {len(sets)} safe sets"
            )
        for x, c in zip(sets, self.assignment):
            if c not in x:
                raise ValidationError(f"channel {c} is not in safe set {x}")

    def allocation(self) -> tuple[int, ...]:
        """``|f^{-1}(c)|`` for every channel ``c``."""
        counts = [0] * self.params.n
        for c in self.assignment:
            counts[c] += 1
        return tuple(counts)

    def wins(self, other: "ClassicalStrategy | None" = None) -> int:
        """Winning pair count ``W(f, g) = sum_c |f^-1(c)| |g^-1(c)|``."""
        mine = self.allocation()
        theirs = mine if other is None else other.allocation()
        return sum(a * b for a, b in zip(mine, theirs))

    def value(self, other: "ClassicalStrategy | None" = None) -> Fraction:
        return Fraction(self.wins(other), self.params.num_safe_sets**2)

    def to_table(self, other: "ClassicalStrategy | None" = None) -> str:
        lines = [f"# n={self.params.n} k={self.params.k} value={self.value(other)}"]
        for x, c in zip(enumerate_safe_sets(self.params), self.assignment):
            lines.append("{" + ",".join(map(str, x)) + "} -> " + str(c))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_table(cls, text: str) -> "ClassicalStrategy":
        lines = text.splitlines()
        if not lines:
            raise ParseError("empty strategy table", line=1)
        header = re.match(r"#\s*n=(\d+)\s+k=(\d+)", lines[0])
        if header is None:
            raise ParseError("missing '# n=.. k=..' header", line=1)
        params = GameParams(int(header.group(1)), int(header.group(2)))
        by_set = {}
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            m = re.match(r"\{([\d,\s]*)\}\s*->\s*(\d+)\s*$", line)
            if m is None:
                raise ParseError(f"cannot parse {line!r}", line=lineno)
            x = tuple(int(t) for t in m.group(1).split(",") if t.strip())
            by_set[x] = int(m.group(2))
        try:
            assignment = tuple(by_set[x] for x in enumerate_safe_sets(params))
        except KeyError as exc:
            raise ParseError(f"safe set {exc.args[0]} missing from table") from None
        return cls(params, assignment)


def greedy_strategy(params: GameParams) -> ClassicalStrategy:
    """Output the smallest channel of every safe set."""
    return ClassicalStrategy(params, tuple(x[0] for x in enumerate_safe_sets(params)))


def _strategy_counts(sets: np.ndarray, n: int, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Channel choices and per-channel counts for strategies ``start..stop-1``.

    Strategy indices are mixed-radix numbers with the first safe set as the
    most significant digit, i.e. ``itertools.product`` order.
    """
    m, d = sets.shape
    idx = np.arange(start, stop, dtype=np.int64)
    powers = d ** np.arange(m - 1, -1, -1, dtype=np.int64)
    digits = (idx[:, None] // powers[None, :]) % d
    channels = sets[np.arange(m)[None, :], digits]
    rows = np.repeat(np.arange(len(idx)), m)
    counts = np.bincount(rows * n + channels.ravel(), minlength=len(idx) * n)
    return channels, counts.reshape(len(idx), n)


def brute_force_classical(
    params: GameParams, mode: str = "aligned", budget: int = DEFAULT_BUDGET
):
    """Exhaustive maximum of the classical winning probability.

    ``mode="aligned"`` searches all valid ``f`` with Bob using ``g = f``
    (``d^|S|`` candidates); ``mode="full"`` searches all valid pairs
    ``(f, g)`` (``d^(2|S|)`` candidates). Ties go to the first strategy in
    enumeration order.

    Returns ``(value, strategy)`` for aligned mode and
    ``(value, (f, g))`` for full mode, with ``value`` an exact Fraction.
    """
    if mode not in ("aligned", "full"):
        raise ValueError(f"mode must be 'aligned' or 'full', got {mode!r}")
    n, d = params.n, params.d
    sets = np.array(enumerate_safe_sets(params), dtype=np.int64)
    m = len(sets)
    n_strats = d**m
    required = n_strats if mode == "aligned" else n_strats**2
    if required > budget:
        raise BudgetExceeded(required, budget)
    norm = m * m

    if mode == "aligned":
        best, best_idx = -1, 0
        for start in range(0, n_strats, _CHUNK):
            stop = min(start + _CHUNK, n_strats)
            _, counts = _strategy_counts(sets, n, start, stop)
            wins = np.einsum("ij,ij->i", counts, counts)
            i = int(np.argmax(wins))
            if wins[i] > best:
                best, best_idx = int(wins[i]), start + i
        channels, _ = _strategy_counts(sets, n, best_idx, best_idx + 1)
        return Fraction(best, norm), ClassicalStrategy(params, tuple(int(c) for c in channels[0]))

    _, all_counts = _strategy_counts(sets, n, 0, n_strats)
    best, best_pair = -1, (0, 0)
    rows = max(1, _CHUNK // max(1, n_strats))
    for start in range(0, n_strats, rows):
        block = all_counts[start:start + rows] @ all_counts.T
        flat = int(np.argmax(block))
        i, j = divmod(flat, n_strats)
        if block[i, j] > best:
            best, best_pair = int(block[i, j]), (start + i, j)
    f_ch, _ = _strategy_counts(sets, n, best_pair[0], best_pair[0] + 1)
    g_ch, _ = _strategy_counts(sets, n, best_pair[1], best_pair[1] + 1)
    f = ClassicalStrategy(params, tuple(int(c) for c in f_ch[0]))
    g = ClassicalStrategy(params, tuple(int(c) for c in g_ch[0]))
    return Fraction(best, norm), (f, g)


def hypergeom_pj(params: GameParams, j: int) -> Fraction:
    """Probability that two random safe sets through a fixed channel meet in ``j`` channels.

    ``p(j) = C(d-1, j-1) C(k, d-j) / C(n-1, d-1)``, zero when ``d - j > k``.
    """
    d, k, n = params.d, params.k, params.n
    if not 1 <= j <= d:
        raise ValueError(f"intersection size must lie in [1, {d}], got {j}")
    return Fraction(comb(d - 1, j - 1) * comb(k, d - j), comb(n - 1, d - 1))


def intersection_pair_count(params: GameParams, j: int) -> int:
    """Ordered pairs ``(x, y)`` through a fixed channel with ``|x & y| = j``."""
    d, k, n = params.d, params.k, params.n
    if not 1 <= j <= d:
        raise ValueError(f"intersection size must lie in [1, {d}], got {j}")
    return comb(n - 1, d - 1) * comb(d - 1, j - 1) * comb(k, d - j)


def min_intersection(params: GameParams) -> int:
    return max(1, 2 * params.d - params.n)


def classical_asymptote(
    regime: str,
    *,
    n: float | None = None,
    d: int | None = None,
    k: int | None = None,
    alpha: float | None = None,
) -> float:
    """Leading-order classical value in one of three scaling regimes.

    ``"fixed-d"``: ``d^2 / ((2d - 1) n)``; ``"fixed-k"``: ``(n - k)/(n + k)``;
    ``"proportional"`` with jammed fraction ``alpha``: ``(1 - alpha)/(1 + alpha)``.
    """
    if regime == "fixed-d":
        if n is None or d is None:
            raise ValueError("fixed-d regime needs n and d")
        return d * d / ((2 * d - 1) * n)
    if regime == "fixed-k":
        if n is None or k is None:
            raise ValueError("fixed-k regime needs n and k")
        return (n - k) / (n + k)
    if regime == "proportional":
        if alpha is None or not 0 < alpha < 0.5:
            raise ValueError(f"proportional regime needs alpha in (0, 1/2), got {alpha}")
        return (1 - alpha) / (1 + alpha)
    raise ValueError(f"unknown regime {regime!r}")


def strategy_from_channels(params: GameParams, channels: Sequence[int]) -> ClassicalStrategy:
    return ClassicalStrategy(params, tuple(int(c) for c in channels))

"""Constructive word families and the zonotope optimisation behind them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .genset import GenSet, GenSetError, HullPolygon, hull, t_prime_max
from .group import Letter, Word, cross, eval_word, letter_value

# --- isoperimetrix ---------------------------------------------------------


def zonotope_area(directions: Sequence[tuple[int, int]], weights: Sequence) -> Fraction:
    """Area of the zonotope with edge vectors ``weights[t] * directions[t]``."""
    total = Fraction(0)
    m = len(directions)
    for s in range(m):
        if not weights[s]:
            continue
        for t in range(s + 1, m):
            total += weights[s] * weights[t] * abs(cross(directions[s], directions[t]))
    return total


def solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan elimination over the rationals; ``None`` if singular."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [a / p for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


@dataclass(frozen=True)
class IsoperimetrixSolution:
    directions: tuple[tuple[int, int], ...]
    weights: tuple[Fraction, ...]
    area: Fraction  # zonotope area at perimeter 2
    support: tuple[int, ...]
    multiplier: Fraction  # common value of the gradient on the support
    kkt_certified: bool

    @property
    def m_a(self) -> Fraction:
        """Area per squared perimeter: ``area(P) = M_A * P^2``."""
        return self.area / 4


def isoperimetrix(poly: HullPolygon) -> IsoperimetrixSolution:
    """Maximise zonotope area over side-length vectors on the simplex.

    The objective ``Q(b) = sum_{s<t} b_s b_t |cross(v_s, v_t)|`` is an
    indefinite quadratic, so every support ``S`` is tried: stationarity on
    ``S`` gives the linear system ``(C b)_s = lam`` for ``s`` in ``S`` with
    ``sum b = 1``. Singular systems are skipped; their stationary sets
    meet the boundary of the face and are found on a smaller support.
    """
    dirs = tuple(poly.half_vertices())
    m = len(dirs)
    if m < 2:
        raise GenSetError("hull needs at least two antipodal vertex pairs")
    C = [[abs(cross(dirs[s], dirs[t])) for t in range(m)] for s in range(m)]
    best = None
    for size in range(1, m + 1):
        for support in itertools.combinations(range(m), size):
            # unknowns: b_s for s in support, then lam
            rows = []
            for s in support:
                rows.append([Fraction(C[s][t]) for t in support] + [Fraction(-1)])
            rows.append([Fraction(1)] * size + [Fraction(0)])
            rhs = [Fraction(0)] * size + [Fraction(1)]
            sol = solve_exact(rows, rhs)
            if sol is None or any(b < 0 for b in sol[:size]):
                continue
            weights = [Fraction(0)] * m
            for s, b in zip(support, sol[:size]):
                weights[s] = b
            value = zonotope_area(dirs, weights)
            if best is None or value > best[0]:
                best = (value, tuple(weights), support, sol[size])
    assert best is not None  # single-vertex supports are always feasible
    value, weights, support, lam = best
    grad = [sum(C[s][t] * weights[t] for t in range(m)) for s in range(m)]
    certified = all(grad[s] == lam for s in support) and all(g <= lam for g in grad)
    return IsoperimetrixSolution(dirs, weights, value, support, lam, certified)


# --- apportionment ---------------------------------------------------------


@dataclass(frozen=True)
class Apportionment:
    weights: tuple[Fraction, ...]
    rows: tuple[tuple[int, ...], ...]

    def increments(self) -> list[int]:
        """Index incremented at each step ``n = 1..N``."""
        out = []
        for prev, row in zip(self.rows, self.rows[1:]):
            (j,) = [t for t in range(len(row)) if row[t] != prev[t]]
            out.append(j)
        return out


def apportion(weights: Sequence, n_max: int) -> Apportionment:
    """Greedy integer rows ``b_n`` tracking ``n * b`` with unit increments.

    At step ``n`` the coordinate maximising ``n b_j - b_(n-1)j`` is
    incremented; ties go to the lowest index.
    """
    weights = tuple(Fraction(w) for w in weights)
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError("weights must be nonnegative and sum to 1")
    denom = math.lcm(*(w.denominator for w in weights))
    scaled = [w.numerator * (denom // w.denominator) for w in weights]
    row = [0] * len(weights)
    rows = [tuple(row)]
    for n in range(1, n_max + 1):
        scores = [n * p - denom * b for p, b in zip(scaled, row)]
        j = scores.index(max(scores))
        row[j] += 1
        rows.append(tuple(row))
    return Apportionment(weights, tuple(rows))


# --- fattest words ---------------------------------------------------------


@dataclass(frozen=True)
class FattestFamily:
    gens: GenSet
    solution: IsoperimetrixSolution
    letters: tuple[Letter, ...]  # one letter per direction
    apportionment: Apportionment

    def word(self, n: int) -> Word:
        row = self.apportionment.rows[n]
        first = [letter for letter, b in zip(self.letters, row) for _ in range(b)]
        second = [(g, -s) for (g, s), b in zip(self.letters, row) for _ in range(b)]
        return Word(tuple(first + second))

    def exponent(self, n: int) -> int:
        value = eval_word(self.word(n), self.gens)
        assert value.is_central()
        return value.k


def direction_letters(gens: GenSet, directions: Sequence[tuple[int, int]]) -> tuple[Letter, ...]:
    """A letter of ``A ∪ A^-1`` with abelianization exactly each direction.

    Ties prefer the generator with smaller ``|k|``, then config order.
    """
    out = []
    for v in directions:
        options = []
        for idx, gen in enumerate(gens.generators):
            for sign in (1, -1):
                if (sign * gen.element.i, sign * gen.element.j) == v:
                    options.append((abs(gen.element.k), idx, sign))
        if not options:
            raise GenSetError(f"no generator lies on the hull vertex {v}")
        _, idx, sign = min(options)
        out.append((idx, sign))
    return tuple(out)


def fattest_family(gens: GenSet, n_max: int) -> FattestFamily:
    sol = isoperimetrix(hull(gens))
    letters = direction_letters(gens, sol.directions)
    return FattestFamily(gens, sol, letters, apportion(sol.weights, n_max))


def fattest_word(gens: GenSet, n: int) -> tuple[Word, int]:
    """The length-``2n`` word ``a_1^b1..a_m^bm a_1^-b1..a_m^-bm`` and its exponent."""
    fam = fattest_family(gens, n)
    return fam.word(n), fam.exponent(n)


# --- word surgery ----------------------------------------------------------


def cyclic_permute(w: Word, s: int) -> Word:
    if not len(w):
        if s:
            raise ValueError("cannot rotate the empty word")
        return w
    if not 0 <= s < len(w):
        raise ValueError(f"shift {s} out of range for length {len(w)}")
    return Word(w.letters[s:] + w.letters[:s])


def invert_letters(w: Word) -> Word:
    """Flip every letter's sign in place (no reversal)."""
    return Word(tuple((g, -s) for g, s in w.letters))


def insert_letter(w: Word, pos: int, letter: Letter) -> Word:
    return Word(w.letters[:pos] + (letter,) + w.letters[pos:])


def transpose(w: Word, pos: int) -> Word:
    """Swap the letters at ``pos`` and ``pos + 1``."""
    if not 0 <= pos < len(w) - 1:
        raise ValueError(f"no adjacent pair at {pos}")
    ls = list(w.letters)
    ls[pos], ls[pos + 1] = ls[pos + 1], ls[pos]
    return Word(tuple(ls))


def split(w: Word, prefix_length: int) -> tuple[Word, Word]:
    return w[:prefix_length], w[prefix_length:]


# --- interpolation ---------------------------------------------------------


def interpolate(gens: GenSet, n: int, family: FattestFamily | None = None) -> list[tuple[Word, int]]:
    """Stages from ``w_(n-1)`` to ``w_n`` through central words of length ``2n``.

    The new letter ``a`` is inserted at its final slot and ``a^-1`` one
    letter later (adjacent when ``n = 1``, where no separating letter
    exists); ``a^-1`` then moves right by adjacent transpositions. This
    takes at most ``n - 2`` transpositions, within the ``2n`` budget.
    """
    if n < 1:
        raise ValueError("interpolation starts at n = 1")
    fam = family if family is not None and len(family.apportionment.rows) > n else fattest_family(gens, n)
    prev_row, row = fam.apportionment.rows[n - 1], fam.apportionment.rows[n]
    (j,) = [t for t in range(len(row)) if row[t] != prev_row[t]]
    a = fam.letters[j]
    p = sum(row[: j + 1]) - 1  # last a in the first block of w_n
    q = n + p  # matching a^-1 in the second block
    word = insert_letter(fam.word(n - 1), p, a)
    start = p + 2 if n >= 2 else p + 1
    word = insert_letter(word, start, (a[0], -a[1]))
    target = fam.word(n)
    stages = [word]
    pos = start
    while word != target and pos < q:
        word = transpose(word, pos)
        stages.append(word)
        pos += 1
    if word != target:
        raise AssertionError("interpolation did not end at the fattest word")
    out = []
    for w in stages:
        value = eval_word(w, gens)
        assert value.is_central()
        out.append((w, value.k))
    return out


# --- spread words ----------------------------------------------------------


@dataclass(frozen=True)
class SpreadResult:
    w_plus: Word
    w_minus: Word
    gap: int
    construction: str  # "conjugation", "commutator" or "identity"


def axis_words(gens: GenSet) -> tuple[Word, Word]:
    """Geodesic words for ``x`` and ``y``."""
    cached = gens._cache.get("axis_words")
    if cached is None:
        from .metric import enumerate_ball, geodesic

        table = enumerate_ball(gens, t_prime_max(gens))
        cached = (geodesic(table, (1, 0, 0)), geodesic(table, (0, 1, 0)))
        gens._cache["axis_words"] = cached
    return cached


def _commutator_word(u: Word, v: Word) -> Word:
    return u.inverse() + v.inverse() + u + v


def spread_words(gens: GenSet, w: Word, d: int) -> SpreadResult:
    """Two words over the abelianization of ``w``, at most ``d`` letters longer, whose exponents differ as much as possible.

    Tries conjugating ``w`` by ``a^±s`` with ``s = d // 2`` and appending
    ``[w_x^t, w_y^t]`` or ``[w_y^t, w_x^t]`` with ``t = d // l_p``,
    ``l_p = 2(|w_x| + |w_y|)``; the larger spread wins (conjugation on ties).
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    candidates = []

    ab = eval_word(w, gens).abelian
    s = d // 2
    if s:
        sweeps = [abs(cross(g.element.abelian, ab)) for g in gens.generators]
        a = Word(((sweeps.index(max(sweeps)), 1),))
        pair = (a * s + w + a * (-s), a * (-s) + w + a * s)
        candidates.append(("conjugation", pair))

    wx, wy = axis_words(gens)
    t = d // (2 * (len(wx) + len(wy)))
    if t:
        u, v = wx * t, wy * t
        candidates.append(("commutator", (w + _commutator_word(u, v), w + _commutator_word(v, u))))

    best = SpreadResult(w, w, 0, "identity")
    for name, (w1, w2) in candidates:
        k1, k2 = eval_word(w1, gens).k, eval_word(w2, gens).k
        if abs(k1 - k2) > best.gap:
            plus, minus = (w1, w2) if k1 >= k2 else (w2, w1)
            best = SpreadResult(plus, minus, abs(k1 - k2), name)
    return best


# --- reordering extremes ---------------------------------------------------


@dataclass(frozen=True)
class ReorderExtremes:
    i: int
    j: int
    k_min: int
    k_max: int
    mean: Fraction
    orderings: int  # distinct orderings visited


MAX_REORDER_SIZE = 9


def reorder_extremes(
    gens: GenSet, letters: Sequence[Letter], max_size: int = MAX_REORDER_SIZE
) -> ReorderExtremes:
    """Min, max and mean exponent over every ordering of a letter multiset.

    Distinct arrangements each stand for the same number of the ``n!``
    orderings, so averaging over them gives the mean over all ``n!``.
    """
    if len(letters) > max_size:
        raise ValueError(f"multiset of size {len(letters)} exceeds cap {max_size}")
    kinds: dict[Letter, int] = {}
    for letter in letters:
        letter = (int(letter[0]), int(letter[1]))
        kinds[letter] = kinds.get(letter, 0) + 1
    values = [tuple(letter_value(gens, letter)) for letter in kinds]
    counts = list(kinds.values())
    total = len(letters)
    stats = [None, None, 0, 0]  # min, max, sum, count

    def walk(depth: int, gi: int, gj: int, gk: int) -> None:
        if depth == total:
            if stats[0] is None or gk < stats[0]:
                stats[0] = gk
            if stats[1] is None or gk > stats[1]:
                stats[1] = gk
            stats[2] += gk
            stats[3] += 1
            return
        for t, (ai, aj, ak) in enumerate(values):
            if counts[t]:
                counts[t] -= 1
                walk(depth + 1, gi + ai, gj + aj, gk + ak - gj * ai)
                counts[t] += 1

    walk(0, 0, 0, 0)
    i = sum(v[0] * c for v, c in zip(values, kinds.values()))
    j = sum(v[1] * c for v, c in zip(values, kinds.values()))
    return ReorderExtremes(i, j, stats[0], stats[1], Fraction(stats[2], stats[3]), stats[3])


def mean_offset_per_letter(gens: GenSet) -> Fraction:
    """Per-letter bound on ``|mean - center|``: ``max |k + ij/2|`` over ``A ∪ A^-1``."""
    return max(abs(Fraction(v.k) + Fraction(v.i * v.j, 2)) for _, v in gens.letters())

"""Exact ball enumeration in the Cayley graph of (H, A) and metric queries.

Tables are keyed by plain ``(i, j, k)`` tuples; :class:`GroupElement` is a
NamedTuple, so it can be used interchangeably for lookups.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping

from .genset import GenSet
from .group import INT64_MAX, GroupElement, Word

log = logging.getLogger(__name__)

DEFAULT_MEMORY_CAP = 2 * 1024**3
# rough CPython cost of one table entry (key tuple, dict slot, parent link)
BYTES_PER_ENTRY = 260
BYTES_PER_ENTRY_NO_PARENTS = 150


class OutOfRange(LookupError):
    """The element is not in the table, i.e. its length exceeds the radius."""


class InsufficientRadius(RuntimeError):
    """The table is too small to certify the requested quantity."""


class MemoryCapExceeded(MemoryError):
    """The ball would not fit under the configured memory cap."""


@dataclass(frozen=True)
class DepthRecord:
    element: GroupElement
    length: int
    depth: int
    witness: GroupElement | None = None  # a nearest strictly longer element


@dataclass(frozen=True)
class RetreatRecord:
    element: GroupElement
    length: int
    retreat_depth: int | None  # None means UNKNOWN
    escape_radius: int


def _steps(gens: GenSet) -> list[tuple[int, tuple[int, int, int]]]:
    """Distinct right-multiplication steps as ``(alphabet index, value)``."""
    seen = set()
    out = []
    for idx, (_, value) in enumerate(gens.letters()):
        if value not in seen:
            seen.add(value)
            out.append((idx, tuple(value)))
    return out


def check_overflow_bound(gens: GenSet, radius: int) -> None:
    """Refuse radii at which coordinates could leave the int64 range.

    After ``n`` letters ``|i|, |j| <= n*s`` and ``|k| <= n*(kmax + s^2) + n^2 s^2``
    where ``s`` bounds letter coordinates; checking this once up front
    lets the BFS inner loop use unchecked arithmetic.
    """
    s = max(max(abs(g.element.i), abs(g.element.j)) for g in gens.generators)
    kmax = max(abs(g.element.k) for g in gens.generators)
    n = radius
    if n * s > INT64_MAX or n * (kmax + s * s) + n * n * s * s > INT64_MAX:
        raise OverflowError(f"radius {radius} could overflow 64-bit coordinates")


@dataclass(frozen=True)
class LengthTable:
    """Exact word lengths of every element of the ball of radius ``radius``."""

    gens: GenSet
    radius: int
    lengths: Mapping[tuple[int, int, int], int]
    parent: Mapping[tuple[int, int, int], tuple[tuple[int, int, int], int]] | None
    counts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.lengths)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.lengths

    @cached_property
    def alphabet(self):
        return self.gens.letters()

    @cached_property
    def steps(self):
        return _steps(self.gens)

    @cached_property
    def cosets(self) -> dict[tuple[int, int], dict[int, int]]:
        """``(i, j) -> {k: length}`` over the stored elements."""
        out: dict[tuple[int, int], dict[int, int]] = defaultdict(dict)
        for (i, j, k), n in self.lengths.items():
            out[(i, j)][k] = n
        return dict(out)

    def elements_of_length(self, n: int) -> list[GroupElement]:
        return [GroupElement(*g) for g, m in self.lengths.items() if m == n]

    def restrict(self, radius: int) -> LengthTable:
        """The ball of a smaller radius, read off this table."""
        if radius > self.radius:
            raise InsufficientRadius(f"cannot restrict radius {self.radius} table to {radius}")
        lengths = {g: n for g, n in self.lengths.items() if n <= radius}
        parent = None
        if self.parent is not None:
            parent = {g: p for g, p in self.parent.items() if g in lengths}
        return LengthTable(self.gens, radius, lengths, parent, self.counts[: radius + 1])


def _bfs_levels(gens: GenSet, radius: int | None, parents: dict | None) -> Iterator[list]:
    """Yield BFS spheres from the identity; ``parents`` is filled if given."""
    steps = _steps(gens)
    start = (0, 0, 0)
    visited = {start: 0}
    frontier = [start]
    yield visited, frontier
    n = 0
    while radius is None or n < radius:
        n += 1
        nxt = []
        for g in frontier:
            gi, gj, gk = g
            for idx, (ai, aj, ak) in steps:
                h = (gi + ai, gj + aj, gk + ak - gj * ai)
                if h not in visited:
                    visited[h] = n
                    if parents is not None:
                        parents[h] = (g, idx)
                    nxt.append(h)
        frontier = nxt
        yield visited, frontier


def estimate_entries(size_half: int, half: int, radius: int) -> int:
    """Quartic growth model ``c R^4`` fitted to the ball of radius ``half``."""
    if half <= 0:
        return size_half
    c = size_half / half**4
    return int(c * radius**4)


def enumerate_ball(
    gens: GenSet,
    radius: int,
    *,
    parents: bool = True,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> LengthTable:
    """Breadth-first enumeration of ``{g : |g|_A <= radius}``."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if memory_cap <= 0:
        raise ValueError("memory cap must be positive")
    check_overflow_bound(gens, radius + 2)
    per_entry = BYTES_PER_ENTRY if parents else BYTES_PER_ENTRY_NO_PARENTS
    parent: dict | None = {} if parents else None
    counts = []
    visited: dict = {}
    half = radius // 2
    for n, (visited, frontier) in enumerate(_bfs_levels(gens, radius, parent)):
        counts.append(len(frontier))
        if n == half and radius >= 4:
            est = estimate_entries(len(visited), half, radius) * per_entry
            if est > memory_cap:
                raise MemoryCapExceeded(
                    f"radius {radius} needs about {est} bytes, cap is {memory_cap}"
                )
        if len(visited) * per_entry > memory_cap:
            raise MemoryCapExceeded(f"ball exceeded memory cap at radius {n}")
    log.debug("ball of radius %d: %d elements", radius, len(visited))
    return LengthTable(gens, radius, visited, parent, tuple(counts))


def enumerate_until(
    gens: GenSet, targets, max_radius: int = 64, memory_cap: int = DEFAULT_MEMORY_CAP
) -> LengthTable:
    """Smallest ball (with parent links) containing every target."""
    wanted = {tuple(t) for t in targets}
    check_overflow_bound(gens, max_radius)
    parent: dict = {}
    counts = []
    for n, (visited, frontier) in enumerate(_bfs_levels(gens, max_radius, parent)):
        counts.append(len(frontier))
        if len(visited) * BYTES_PER_ENTRY > memory_cap:
            raise MemoryCapExceeded(f"ball exceeded memory cap at radius {n}")
        if wanted.issubset(visited):
            return LengthTable(gens, n, visited, parent, tuple(counts))
    raise InsufficientRadius(f"targets not all within radius {max_radius}")


def word_length(gens: GenSet, g, max_radius: int = 256) -> int:
    """``|g|_A`` by BFS that stops as soon as ``g`` is reached."""
    target = tuple(g)
    check_overflow_bound(gens, max_radius)
    for n, (visited, _) in enumerate(_bfs_levels(gens, max_radius, None)):
        if target in visited:
            return visited[target]
    raise InsufficientRadius(f"{target} has length > {max_radius}")


# --- lookups ---------------------------------------------------------------


def length(table: LengthTable, g) -> int:
    try:
        return table.lengths[tuple(g)]
    except KeyError:
        raise OutOfRange(f"{tuple(g)} has length > {table.radius}") from None


def geodesic(table: LengthTable, g) -> Word:
    """A minimal-length word for ``g``, recovered from parent links."""
    if table.parent is None:
        raise ValueError("table was built without parent links")
    cur = tuple(g)
    length(table, cur)
    alphabet = table.alphabet
    letters = []
    while cur != (0, 0, 0):
        prev, idx = table.parent[cur]
        letters.append(alphabet[idx][0])
        cur = prev
    return Word(tuple(reversed(letters)))


def i_a_profile(table: LengthTable) -> dict[int, int]:
    """``n -> max{|k| : |z^k|_A = n}`` for the lengths realised in the table."""
    out: dict[int, int] = {}
    for k, n in table.cosets.get((0, 0), {}).items():
        if abs(k) > out.get(n, -1):
            out[n] = abs(k)
    return dict(sorted(out.items()))


def achievable_k(table: LengthTable, i: int, j: int, n_prime: int) -> list[int]:
    """Sorted ``k`` with ``|x^i y^j z^k|_A <= n_prime``."""
    if n_prime > table.radius:
        raise InsufficientRadius(f"n' = {n_prime} exceeds table radius {table.radius}")
    coset = table.cosets.get((i, j), {})
    return sorted(k for k, n in coset.items() if n <= n_prime)


def k_extremes(table: LengthTable, i: int, j: int, n_prime: int) -> tuple[int, int]:
    ks = achievable_k(table, i, j, n_prime)
    if not ks:
        raise OutOfRange(f"no element over ({i}, {j}) has length <= {n_prime}")
    return ks[0], ks[-1]


def min_coset_length(table: LengthTable, i: int, j: int) -> int:
    coset = table.cosets.get((i, j))
    if not coset:
        raise OutOfRange(f"no element over ({i}, {j}) within radius {table.radius}")
    return min(coset.values())


# --- depth -----------------------------------------------------------------


def depth(table: LengthTable, g) -> DepthRecord:
    """Distance from ``g`` to the nearest strictly longer element.

    An element missing from the table has length > radius >= |g|, so it
    counts as longer; the answer is therefore exact for every stored ``g``.
    """
    g = tuple(g)
    lengths = table.lengths
    ell = length(table, g)
    steps = table.steps
    visited = {g}
    frontier = [g]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for gi, gj, gk in frontier:
            for _, (ai, aj, ak) in steps:
                h = (gi + ai, gj + aj, gk + ak - gj * ai)
                if h in visited:
                    continue
                m = lengths.get(h)
                if m is None or m > ell:
                    return DepthRecord(GroupElement(*g), ell, d, GroupElement(*h))
                visited.add(h)
                nxt.append(h)
        frontier = nxt
    raise AssertionError("finite component in an infinite group")


def depth_scan(table: LengthTable, max_length: int | None = None) -> dict[tuple, DepthRecord]:
    """Depth of every stored element of length ``<= max_length``."""
    limit = table.radius if max_length is None else max_length
    return {
        g: depth(table, g)
        for g, n in sorted(table.lengths.items(), key=lambda t: (t[1], t[0]))
        if n <= limit
    }


# --- retreat depth ---------------------------------------------------------


def _check_escape(table: LengthTable, escape_radius: int) -> None:
    if escape_radius > table.radius:
        raise InsufficientRadius(
            f"escape radius {escape_radius} exceeds table radius {table.radius}"
        )


def retreat_depth(table: LengthTable, g, escape_radius: int) -> RetreatRecord:
    """Least ``d >= 1`` such that ``g`` reaches the escape sphere through ``|h| > |g| - d``.

    Reaching ``{h : |h| = escape_radius}`` stands in for lying in an
    unbounded component of the complement of the ball of radius ``|g| - d``.
    """
    _check_escape(table, escape_radius)
    g = tuple(g)
    ell = length(table, g)
    if ell >= escape_radius:
        raise ValueError(f"|g| = {ell} must be below the escape radius {escape_radius}")
    lengths = table.lengths
    steps = table.steps
    for d in range(1, ell + 2):
        floor = ell - d
        visited = {g}
        stack = [g]
        unknown = False
        while stack:
            gi, gj, gk = stack.pop()
            for _, (ai, aj, ak) in steps:
                h = (gi + ai, gj + aj, gk + ak - gj * ai)
                if h in visited:
                    continue
                m = lengths.get(h)
                if m is None:
                    # only reachable past the sphere; never guess
                    unknown = True
                    continue
                if m <= floor:
                    continue
                if m >= escape_radius:
                    return RetreatRecord(GroupElement(*g), ell, d, escape_radius)
                visited.add(h)
                stack.append(h)
        if unknown:
            return RetreatRecord(GroupElement(*g), ell, None, escape_radius)
    raise AssertionError("the whole group always reaches the escape sphere")


def retreat_profile(
    table: LengthTable, escape_radius: int, max_length: int | None = None
) -> dict[tuple, int]:
    """Retreat depth of every element with ``|g| <= max_length`` in one sweep.

    Adds spheres from ``escape_radius`` inwards to a union-find structure;
    an element's retreat depth is ``|g| - t`` for the largest threshold
    ``t`` at which its component of ``{t < |h| <= escape_radius}`` touches
    the escape sphere.
    """
    _check_escape(table, escape_radius)
    limit = escape_radius - 1 if max_length is None else min(max_length, escape_radius - 1)
    layers: dict[int, list] = defaultdict(list)
    for h, n in table.lengths.items():
        if n <= escape_radius:
            layers[n].append(h)
    steps = table.steps
    lengths = table.lengths
    parent: dict = {}
    escaping: dict = {}

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
            escaping[ra] = escaping[ra] or escaping.pop(rb)

    out: dict[tuple, int] = {}
    pending: list = []
    for t in range(escape_radius - 1, -2, -1):
        for h in layers.get(t + 1, ()):
            parent[h] = h
            escaping[h] = t + 1 == escape_radius
        for h in layers.get(t + 1, ()):
            hi, hj, hk = h
            for _, (ai, aj, ak) in steps:
                nb = (hi + ai, hj + aj, hk + ak - hj * ai)
                if nb in parent and lengths[nb] > t:
                    union(h, nb)
        if t + 1 <= limit:
            pending.extend(layers.get(t + 1, ()))
        still = []
        for g in pending:
            if escaping[find(g)]:
                out[g] = lengths[g] - t
            else:
                still.append(g)
        pending = still
    if pending:
        raise AssertionError("elements left unassigned after the full sweep")
    return out

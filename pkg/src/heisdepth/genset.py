"""Generating sets: parsing, validation, abelianized hull and hull norm."""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .group import IDENTITY, GroupElement, Letter, cross, element, inv


class GenSetError(ValueError):
    """Raised for malformed or non-generating configurations."""


@dataclass(frozen=True)
class Generator:
    label: str
    element: GroupElement


@dataclass(frozen=True)
class GenSet:
    """An ordered finite generating set; words always use ``A ∪ A^-1``."""

    name: str
    generators: tuple[Generator, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def labels(self) -> list[str]:
        return [g.label for g in self.generators]

    def letters(self) -> list[tuple[Letter, GroupElement]]:
        """Symmetrized alphabet: ``(letter, value)`` for every ``a^±1``."""
        out = []
        for idx, gen in enumerate(self.generators):
            out.append(((idx, 1), gen.element))
            out.append(((idx, -1), inv(gen.element)))
        return out

    def abelianizations(self) -> list[tuple[int, int]]:
        return [g.element.abelian for g in self.generators]

    def to_config(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "generators": [
                {"label": g.label, "i": g.element.i, "j": g.element.j, "k": g.element.k}
                for g in self.generators
            ],
        }


def lattice_index(vectors: Sequence[tuple[int, int]]) -> int:
    """Index of the sublattice of Z^2 spanned by ``vectors`` (0 if rank < 2).

    Computed from the Hermite normal form of the 2-column integer matrix
    whose rows are ``vectors``.
    """
    rows = [list(v) for v in vectors if v != (0, 0)]
    pivots = []
    for col in range(2):
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            head = active[0]
            reduced = [head]
            for r in active[1:]:
                q = r[col] // head[col]
                r = [a - q * b for a, b in zip(r, head)]
                (reduced if r[col] != 0 else rest).append(r)
            active = reduced
        if not active:
            return 0
        pivots.append(abs(active[0][col]))
        rows = [r for r in rest if any(r)]
    return pivots[0] * pivots[1]


def make_genset(name: str, generators: Sequence[tuple[str, Sequence[int]]]) -> GenSet:
    """Build and validate a GenSet from ``(label, (i, j, k))`` pairs."""
    gens = []
    seen: set[str] = set()
    for label, coords in generators:
        if not isinstance(label, str) or not label:
            raise GenSetError(f"generator label must be a non-empty string, got {label!r}")
        if label in seen:
            raise GenSetError(f"duplicate generator label {label!r}")
        seen.add(label)
        if len(coords) != 3:
            raise GenSetError(f"generator {label!r} needs three coordinates")
        elem = element(*coords)
        if elem == IDENTITY:
            raise GenSetError(f"generator {label!r} is the identity")
        gens.append(Generator(label, elem))
    if not gens:
        raise GenSetError("generating set is empty")
    index = lattice_index([g.element.abelian for g in gens])
    if index != 1:
        raise GenSetError(
            f"does not generate: abelianizations span a sublattice of index {index}"
        )
    return GenSet(name, tuple(gens))


def parse_validate(config: str | dict[str, Any]) -> GenSet:
    """Parse the JSON generating-set config and validate it.

    ``config`` is either JSON text or an already-decoded object with fields
    ``name`` and ``generators`` (a list of ``{"label", "i", "j", "k"}``).
    """
    if isinstance(config, str):
        try:
            config = json.loads(config)
        except json.JSONDecodeError as exc:
            raise GenSetError(f"malformed config: {exc}") from None
    if not isinstance(config, dict):
        raise GenSetError("malformed config: expected a JSON object")
    name = config.get("name")
    raw = config.get("generators")
    if not isinstance(name, str):
        raise GenSetError("malformed config: 'name' must be a string")
    if not isinstance(raw, list):
        raise GenSetError("malformed config: 'generators' must be an array")
    parsed = []
    for entry in raw:
        if not isinstance(entry, dict):
            raise GenSetError("malformed config: generator entries must be objects")
        try:
            coords = [entry.get(key, 0) for key in ("i", "j", "k")]
            label = entry["label"]
        except KeyError:
            raise GenSetError("malformed config: generator without 'label'") from None
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in coords):
            raise GenSetError(f"malformed config: non-integer exponent in {entry!r}")
        parsed.append((label, coords))
    return make_genset(name, parsed)


def load_genset(path: str | Path) -> GenSet:
    return parse_validate(Path(path).read_text(encoding="utf-8"))


def standard_genset() -> GenSet:
    return make_genset("std", [("x", (1, 0, 0)), ("y", (0, 1, 0))])


# --- hull and hull norm ----------------------------------------------------


def _upper_half(v: tuple[int, int]) -> bool:
    return v[1] > 0 or (v[1] == 0 and v[0] > 0)


def angular_key(v: tuple[int, int]):
    """Sort key placing nonzero vectors in CCW order starting from angle 0."""
    half = 0 if _upper_half(v) else 1
    x, y = v if half == 0 else (-v[0], -v[1])
    if y == 0:
        return (half, 0, Fraction(0))
    # -cot(angle) is increasing on (0, pi)
    return (half, 1, Fraction(-x, y))


@dataclass(frozen=True)
class HullPolygon:
    """``B = conv(±φ(A))`` as a strictly convex CCW vertex list."""

    vertices: tuple[tuple[int, int], ...]

    @property
    def edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        n = len(self.vertices)
        return [(self.vertices[t], self.vertices[(t + 1) % n]) for t in range(n)]

    def half_vertices(self) -> list[tuple[int, int]]:
        """One vertex per antipodal pair, CCW from angle 0."""
        return [v for v in self.vertices if _upper_half(v)]


def convex_hull(points: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Andrew's monotone chain on integer points; collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out: list[tuple[int, int]] = []
        for p in seq:
            while len(out) >= 2 and cross(
                (out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]),
                (p[0] - out[-2][0], p[1] - out[-2][1]),
            ) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return lower[:-1] + upper[:-1]


def hull(gens: GenSet) -> HullPolygon:
    pts = []
    for i, j in gens.abelianizations():
        if (i, j) != (0, 0):
            pts.extend([(i, j), (-i, -j)])
    verts = convex_hull(pts)
    if len(verts) < 4:
        raise GenSetError("abelianizations have rank < 2")
    verts.sort(key=angular_key)
    return HullPolygon(tuple(verts))


def norm_b(poly: HullPolygon, v: Sequence[int]) -> Fraction:
    """Minkowski functional of ``poly`` at the integer vector ``v``.

    Finds the edge ``(p, q)`` whose cone contains ``v`` and evaluates the
    supporting line through it.
    """
    v = (int(v[0]), int(v[1]))
    if v == (0, 0):
        return Fraction(0)
    for p, q in poly.edges:
        if cross(p, v) >= 0 and cross(v, q) >= 0:
            # line through p, q: cross(q - p, u) = cross(q - p, p)
            d = (q[0] - p[0], q[1] - p[1])
            return Fraction(cross(d, v), cross(d, p))
    raise AssertionError(f"no hull edge found for {v}")  # origin is interior


# --- generating-set constants ----------------------------------------------


@dataclass(frozen=True)
class GenSetConstants:
    k_max: int
    m_prime: int
    c_min: int
    t_max_sq: int
    t_prime_max: int | None = None

    @property
    def t_max(self) -> float:
        return math.sqrt(self.t_max_sq)


_t_prime_lock = threading.Lock()


def t_prime_max(gens: GenSet) -> int:
    """``max(|x|_A, |y|_A)``, computed once per GenSet and cached."""
    cached = gens._cache.get("t_prime_max")
    if cached is not None:
        return cached
    with _t_prime_lock:
        if "t_prime_max" not in gens._cache:
            from .metric import word_length

            gens._cache["t_prime_max"] = max(
                word_length(gens, GroupElement(1, 0, 0)),
                word_length(gens, GroupElement(0, 1, 0)),
            )
        return gens._cache["t_prime_max"]


def constants(gens: GenSet, with_t_prime: bool = False) -> GenSetConstants:
    elems = [g.element for g in gens.generators]
    k_max = max(abs(e.k) for e in elems)
    crosses = [abs(cross(a.abelian, b.abelian)) for a in elems for b in elems]
    nonzero = [c for c in crosses if c]
    if not nonzero:
        raise GenSetError("all generator pairs commute; c_min undefined")
    return GenSetConstants(
        k_max=k_max,
        m_prime=max(crosses),
        c_min=min(nonzero),
        t_max_sq=max(e.i * e.i + e.j * e.j for e in elems),
        t_prime_max=t_prime_max(gens) if with_t_prime else None,
    )

"""Reference computations that share no code paths with the package."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


# --- unitriangular matrices -------------------------------------------------
# x^i y^j z^k  <->  [[1, i, ij + k], [0, 1, j], [0, 0, 1]]


def to_matrix(g):
    i, j, k = g
    return ((1, i, i * j + k), (0, 1, j), (0, 0, 1))


def from_matrix(m):
    i, j = m[0][1], m[1][2]
    return (i, j, m[0][2] - i * j)


def matmul(a, b):
    return tuple(tuple(sum(a[r][t] * b[t][c] for t in range(3)) for c in range(3)) for r in range(3))


def mat_mul(g, h):
    return from_matrix(matmul(to_matrix(g), to_matrix(h)))


def mat_inv(g):
    i, j, c = g[0], g[1], g[0] * g[1] + g[2]
    # inverse of [[1,a,c],[0,1,b],[0,0,1]] is [[1,-a,ab-c],[0,1,-b],[0,0,1]]
    return from_matrix(((1, -i, i * j - c), (0, 1, -j), (0, 0, 1)))


# --- word lengths by multiplying out every word -----------------------------


def naive_lengths(gen_values, radius):
    """Minimal word length of every element reachable by a word of length <= radius."""
    alphabet = []
    for v in gen_values:
        alphabet.extend([tuple(v), mat_inv(tuple(v))])
    best = {(0, 0, 0): 0}
    for n in range(1, radius + 1):
        for word in itertools.product(alphabet, repeat=n):
            g = (0, 0, 0)
            for a in word:
                g = mat_mul(g, a)
            if g not in best:
                best[g] = n
    return best


# --- plane geometry ---------------------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _in_triangle(p, a, b, c):
    if _cross(a, b, c) == 0:
        return False  # degenerate; segments are handled separately
    d1, d2, d3 = _cross(a, b, p), _cross(b, c, p), _cross(c, a, p)
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


def _on_segment(p, a, b):
    return (
        _cross(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def hull_vertices(points):
    """Strict vertices: points not inside a triangle or segment of the others."""
    pts = sorted(set(points))
    out = set()
    for p in pts:
        others = [q for q in pts if q != p]
        covered = any(_on_segment(p, a, b) for a, b in itertools.combinations(others, 2)) or any(
            _in_triangle(p, a, b, c) for a, b, c in itertools.combinations(others, 3)
        )
        if not covered:
            out.add(p)
    return out


def facet_norm(vertices_ccw, v):
    """max over edges of the edge's supporting functional at v."""
    best = Fraction(0)
    n = len(vertices_ccw)
    for t in range(n):
        p, q = vertices_ccw[t], vertices_ccw[(t + 1) % n]
        normal = (q[1] - p[1], p[0] - q[0])
        level = normal[0] * p[0] + normal[1] * p[1]
        best = max(best, Fraction(normal[0] * v[0] + normal[1] * v[1], level))
    return best


def minors_index(vectors):
    g = 0
    for a, b in itertools.combinations(vectors, 2):
        g = gcd(g, a[0] * b[1] - a[1] * b[0])
    return g


# --- depth by translation ---------------------------------------------------


def translated_depth(lengths, g, probe_radius):
    """min |u| over u with |g u| > |g|, using a table for both |u| and |gu|.

    Elements missing from ``lengths`` are longer than anything stored.
    """
    ell = lengths[g]
    best = None
    for u, n in lengths.items():
        if n == 0 or n > probe_radius or (best is not None and n >= best):
            continue
        h = mat_mul(g, u)
        m = lengths.get(h)
        if m is None or m > ell:
            best = n
    return best

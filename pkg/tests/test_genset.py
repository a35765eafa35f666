import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from heisdepth.genset import (
    GenSetError,
    HullPolygon,
    constants,
    convex_hull,
    hull,
    lattice_index,
    load_genset,
    make_genset,
    norm_b,
    parse_validate,
    standard_genset,
)

from oracles import facet_norm, hull_vertices, minors_index

vec = st.tuples(st.integers(-6, 6), st.integers(-6, 6))


@given(st.lists(vec, min_size=1, max_size=6))
def test_lattice_index_matches_minors(vectors):
    assert lattice_index(vectors) == minors_index(vectors)


def test_documented_hulls():
    assert set(hull(standard_genset()).vertices) == {(1, 0), (0, 1), (-1, 0), (0, -1)}
    hexagon = make_genset("hex", [("x", (1, 0, 0)), ("y", (0, 1, 0)), ("w", (1, 1, 0))])
    assert hull(hexagon).vertices == ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))


@given(st.lists(vec, min_size=2, max_size=6))
def test_hull_matches_vertex_oracle(vectors):
    pts = []
    for v in vectors:
        if v != (0, 0):
            pts += [v, (-v[0], -v[1])]
    assume(len(set(pts)) >= 3)
    assert set(convex_hull(pts)) == hull_vertices(pts)


def random_genset(rng, size=3, spread=3):
    while True:
        gens = [(f"g{t}", (rng.randint(-spread, spread), rng.randint(-spread, spread), rng.randint(-2, 2)))
                for t in range(size)]
        try:
            return make_genset("random", gens)
        except GenSetError:
            continue


def test_norm_matches_facet_oracle():
    rng = random.Random(7)
    for _ in range(40):
        poly = hull(random_genset(rng, size=rng.randint(2, 4)))
        for _ in range(50):
            v = (rng.randint(-20, 20), rng.randint(-20, 20))
            assert norm_b(poly, v) == facet_norm(list(poly.vertices), v)


def test_documented_norms():
    diamond = hull(standard_genset())
    assert norm_b(diamond, (1, 1)) == 2
    assert norm_b(diamond, (0, 0)) == 0
    hexagon = hull(make_genset("hex", [("x", (1, 0, 0)), ("y", (0, 1, 0)), ("w", (1, 1, 0))]))
    assert norm_b(hexagon, (2, 1)) == 2
    for v in hexagon.vertices:
        assert norm_b(hexagon, v) == 1


@pytest.fixture(scope="module")
def polygons():
    rng = random.Random(11)
    return [hull(random_genset(rng, size=rng.randint(2, 4))) for _ in range(10)]


@given(vec, st.integers(1, 20), st.integers(0, 9))
def test_norm_homogeneous_and_symmetric(polygons, v, n, which):
    poly = polygons[which]
    assert norm_b(poly, (n * v[0], n * v[1])) == n * norm_b(poly, v)
    assert norm_b(poly, (-v[0], -v[1])) == norm_b(poly, v)


@given(vec, vec, st.integers(0, 9))
def test_norm_triangle_inequality(polygons, u, v, which):
    poly = polygons[which]
    assert norm_b(poly, (u[0] + v[0], u[1] + v[1])) <= norm_b(poly, u) + norm_b(poly, v)


def test_generators_lie_in_the_unit_ball():
    rng = random.Random(3)
    for _ in range(30):
        gens = random_genset(rng, size=4)
        poly = hull(gens)
        boundary = set(poly.vertices)
        for e in poly.edges:
            boundary |= {
                v for v in gens.abelianizations()
                if (e[1][0] - e[0][0]) * (v[1] - e[0][1]) == (e[1][1] - e[0][1]) * (v[0] - e[0][0])
            }
        for v in gens.abelianizations():
            if v == (0, 0):
                continue
            value = norm_b(poly, v)
            assert value <= 1
            assert (value == 1) == (v in boundary or (-v[0], -v[1]) in boundary)


def test_documented_constants():
    c = constants(standard_genset())
    assert (c.k_max, c.m_prime, c.c_min, c.t_max) == (0, 1, 1, 1)
    c = constants(make_genset("xyz", [("x", (1, 0, 0)), ("y", (0, 1, 0)), ("z", (0, 0, 1))]))
    assert (c.k_max, c.m_prime, c.c_min) == (1, 1, 1)
    c = constants(make_genset("skew", [("a", (1, 1, 3)), ("y", (0, 1, 0))]))
    assert (c.k_max, c.m_prime, c.c_min) == (3, 1, 1)
    assert c.t_max_sq == 2 and math.isclose(c.t_max, math.sqrt(2))


def test_t_prime_max_is_cached():
    gens = make_genset("xy_y", [("a", (1, 1, 0)), ("y", (0, 1, 0))])
    assert constants(gens, with_t_prime=True).t_prime_max == 2
    assert gens._cache["t_prime_max"] == 2


@pytest.mark.parametrize(
    "config, message",
    [
        ("{not json", "malformed"),
        ({"name": "a", "generators": [{"label": "x", "i": 1}, {"label": "x", "j": 1}]}, "duplicate"),
        ({"name": "a", "generators": [{"label": "x", "i": 1}, {"label": "e"}]}, "identity"),
        ({"name": "a", "generators": [{"label": "x", "i": 2}, {"label": "y", "j": 1}]}, "does not generate"),
        ({"name": "a", "generators": [{"label": "x", "i": 1.5}]}, "non-integer"),
        ({"generators": []}, "name"),
    ],
)
def test_config_errors(config, message):
    with pytest.raises(GenSetError, match=message):
        parse_validate(config)


def test_config_roundtrip(tmp_path):
    gens = make_genset("hex", [("x", (1, 0, 0)), ("y", (0, 1, 0)), ("w", (1, 1, 2))])
    path = tmp_path / "hex.json"
    path.write_text(json.dumps(gens.to_config()))
    again = load_genset(path)
    assert again.to_config() == gens.to_config()


def test_half_vertices_are_ccw_from_angle_zero():
    poly = HullPolygon(((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)))
    assert poly.half_vertices() == [(1, 0), (1, 1), (0, 1)]

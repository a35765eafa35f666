import math
import random

import pytest

from heisdepth.genset import make_genset, standard_genset
from heisdepth.group import eval_word, inv, mul
from heisdepth.metric import (
    InsufficientRadius,
    MemoryCapExceeded,
    OutOfRange,
    depth,
    depth_scan,
    enumerate_ball,
    enumerate_until,
    geodesic,
    i_a_profile,
    k_extremes,
    length,
    retreat_depth,
    retreat_profile,
    word_length,
)

from oracles import mat_inv, mat_mul, naive_lengths, translated_depth

STD = standard_genset()


@pytest.fixture(scope="module")
def ball12():
    return enumerate_ball(STD, 12)


@pytest.fixture(scope="module")
def ball16():
    return enumerate_ball(STD, 16, parents=False)


def test_small_balls():
    assert len(enumerate_ball(STD, 0)) == 1
    assert set(enumerate_ball(STD, 1).lengths) == {(0, 0, 0), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)}


def test_documented_lengths(ball12):
    assert length(ball12, (0, 0, 1)) == 4
    assert length(ball12, (2, 3, 0)) == 5
    assert length(ball12, (0, 0, 0)) == 0


def test_sphere_sizes(ball16):
    # reference counts for {x, y}, cross-checked against the naive oracle up to 6
    assert list(ball16.counts[:9]) == [1, 4, 12, 36, 82, 164, 294, 476, 724]
    assert sum(ball16.counts) == len(ball16)
    assert all(c > 0 for c in ball16.counts)
    assert all(a <= b for a, b in zip(ball16.counts[1:], ball16.counts[2:]))


def test_matches_naive_oracle_small():
    gens = make_genset("hex", [("x", (1, 0, 0)), ("y", (0, 1, 0)), ("w", (1, 1, 0))])
    table = enumerate_ball(gens, 4)
    assert table.lengths == naive_lengths([g.element for g in gens.generators], 4)


def test_geodesics_evaluate_correctly(ball12):
    rng = random.Random(1)
    sample = rng.sample(sorted(ball12.lengths), 300)
    for g in sample:
        w = geodesic(ball12, g)
        assert eval_word(w, STD) == g
        assert len(w) == ball12.lengths[g]


def test_out_of_range(ball12):
    with pytest.raises(OutOfRange):
        length(ball12, (0, 0, 100))


def test_lipschitz_and_inverse_symmetry(ball12):
    lengths = ball12.lengths
    for g, n in lengths.items():
        assert lengths[tuple(inv(g))] == n
        for _, a in STD.letters():
            m = lengths.get(tuple(mul(g, a)))
            if m is not None:
                assert abs(m - n) <= 1


def test_growth_is_quartic(ball16):
    sizes = {}
    total = 0
    for n, c in enumerate(ball16.counts):
        total += c
        sizes[n] = total
    xs = [math.log(r) for r in range(10, 17)]
    ys = [math.log(sizes[r]) for r in range(10, 17)]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    assert 3.5 <= slope <= 4.5


def test_i_a_profile(ball16):
    prof = i_a_profile(ball16)
    assert prof[0] == 0
    assert 2 not in prof
    assert prof[4] == 1
    assert prof[8] == 4


def test_k_extremes(ball12):
    assert k_extremes(ball12, 0, 0, 0) == (0, 0)
    assert k_extremes(ball12, 0, 0, 4) == (-1, 1)
    # xy = (1,1,0) and yx = (1,1,-1)
    assert k_extremes(ball12, 1, 1, 2) == (-1, 0)
    with pytest.raises(OutOfRange):
        k_extremes(ball12, 5, 5, 3)


def test_k_extremes_straddle_the_center(ball12):
    lengths = ball12.lengths
    for (i, j) in [(0, 0), (1, 1), (2, 1), (3, 0), (2, 2)]:
        base = min(n for g, n in lengths.items() if g[:2] == (i, j))
        kmin, kmax = k_extremes(ball12, i, j, base + 2)
        assert kmin <= math.ceil(-i * j / 2) and kmax >= math.floor(-i * j / 2)


def test_depth_examples(ball12):
    assert depth(ball12, (0, 0, 0)).depth == 1
    assert depth(ball12, (1, 0, 0)).depth == 1
    assert depth(ball12, (0, 0, 1)).depth == 3


def test_depth_records_are_certified(ball12):
    for g in [(0, 0, 1), (0, 0, -7), (0, 0, 4), (1, 1, 2)]:
        rec = depth(ball12, g)
        h = rec.witness
        assert ball12.lengths.get(tuple(h), 99) > rec.length
        # the witness is exactly rec.depth steps away
        u = mat_mul(mat_inv(g), tuple(h))
        assert word_length(STD, u) == rec.depth


def test_depth_matches_translation_oracle(ball12, ball16):
    scan = depth_scan(ball12, 8)
    for g, rec in scan.items():
        assert rec.depth == translated_depth(ball16.lengths, g, 8), g


def brute_retreat(table, gens, g, escape):
    ell = table.lengths[g]
    alphabet = [tuple(a) for _, a in gens.letters()]
    for d in range(1, ell + 2):
        seen, stack = {g}, [g]
        while stack:
            h = stack.pop()
            if table.lengths[h] == escape:
                return d
            for a in alphabet:
                nb = mat_mul(h, a)
                m = table.lengths.get(nb)
                if nb not in seen and m is not None and ell - d < m <= escape:
                    seen.add(nb)
                    stack.append(nb)
    return None


def test_retreat_examples(ball12):
    assert retreat_depth(ball12, (1, 0, 0), 6).retreat_depth == 1
    assert retreat_depth(ball12, (0, 0, 0), 6).retreat_depth == 1
    rec = retreat_depth(ball12, (0, 0, 1), 10)
    assert rec.retreat_depth == 2 and rec.escape_radius == 10


def test_retreat_sweep_matches_per_element_search():
    table = enumerate_ball(STD, 9)
    prof = retreat_profile(table, 8)
    for g, n in table.lengths.items():
        if n < 8:
            expected = brute_retreat(table, STD, g, 8)
            assert prof[g] == expected == retreat_depth(table, g, 8).retreat_depth


def test_retreat_precondition(ball12):
    with pytest.raises(InsufficientRadius):
        retreat_depth(ball12, (0, 0, 1), 13)
    with pytest.raises(ValueError):
        retreat_depth(ball12, (3, 3, 0), 5)


def test_memory_cap():
    with pytest.raises(MemoryCapExceeded):
        enumerate_ball(STD, 40, memory_cap=10**6)


def test_enumerate_until_finds_targets():
    table = enumerate_until(STD, [(0, 0, 9)])
    assert table.lengths[(0, 0, 9)] == 12
    assert word_length(STD, (0, 0, 9)) == 12

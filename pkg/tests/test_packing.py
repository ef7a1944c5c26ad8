import math
import random

import pytest

from mwbench import InputError, MWLattice
from mwbench.lattice import enumerate_ball
from mwbench.packing import (
    assign_to_cone,
    build_cone_cover,
    cone_count_bound,
    greedy_ball_cover,
)

UNIT1 = MWLattice(rank=1, gram=((1.0,),))
UNIT2 = MWLattice(rank=2, gram=((1.0, 0.0), (0.0, 1.0)))
HEX = MWLattice(rank=2, gram=((2.0, 1.0), (1.0, 2.0)))


def random_psd_lattice(rng, rank):
    while True:
        rows = [[rng.uniform(-1, 1) for _ in range(rank)] for _ in range(rank)]
        gram = [
            [sum(rows[i][k] * rows[j][k] for k in range(rank)) for j in range(rank)]
            for i in range(rank)
        ]
        for i in range(rank):
            gram[i][i] += 0.5
        for i in range(rank):
            for j in range(i):
                gram[i][j] = gram[j][i]
        lat = MWLattice(rank=rank, gram=tuple(tuple(r) for r in gram))
        if lat.is_positive_definite():
            return lat


def test_cone_cover_rank1():
    cover = build_cone_cover(UNIT1, 2.0)
    assert len(cover.axes) == 2
    assert cover.bound == int((1 + math.sqrt(16)) ** 1)
    assert assign_to_cone(cover, UNIT1, (-5,)) == [
        i for i, d in enumerate(cover.directions) if d[0] < 0
    ][0]


def test_cone_cover_rank2_bound_example():
    cover = build_cone_cover(UNIT2, 2.0)
    assert cover.bound == 25  # floor((1 + 4)^2)
    assert len(cover.axes) <= 25


def test_cone_axes_have_unit_gram_norm():
    cover = build_cone_cover(HEX, 2.0)
    G = HEX.matrix()
    for axis in cover.axes:
        import numpy as np

        a = np.array(axis)
        assert abs(float(a @ G @ a) - 1.0) < 1e-9


def test_cone_cover_rank0():
    zero = MWLattice(rank=0, gram=())
    cover = build_cone_cover(zero, 2.0)
    assert cover.axes == ()
    assert cover.bound == 1


def test_cone_cover_requires_c4_above_one():
    with pytest.raises(InputError):
        build_cone_cover(UNIT2, 1.0)


def test_assign_parallel_to_axis():
    cover = build_cone_cover(HEX, 2.0)
    for idx, axis in enumerate(cover.axes):
        got = assign_to_cone(cover, HEX, axis)
        # the chosen cone admits with the maximal cosine; a parallel vector
        # lands on an axis with cosine 1 up to rounding
        assert abs(_gram_cos(HEX, axis, cover.axes[got]) - 1.0) < 1e-9


def _gram_cos(lat, v, w):
    import numpy as np

    G = lat.matrix()
    v = np.array(v)
    w = np.array(w)
    return float(v @ G @ w) / math.sqrt(float(v @ G @ v) * float(w @ G @ w))


def test_assign_rejects_zero():
    cover = build_cone_cover(UNIT2, 2.0)
    with pytest.raises(InputError):
        assign_to_cone(cover, UNIT2, (0, 0))


def test_cone_cover_soundness_random_directions():
    rng = random.Random(1)
    for c4 in (1.3, 2.0, 5.0):
        cover = build_cone_cover(HEX, c4)
        for _ in range(10_000):
            v = (rng.gauss(0, 1), rng.gauss(0, 1))
            if v == (0.0, 0.0):
                continue
            assign_to_cone(cover, HEX, v)  # raises on failure


def test_same_cone_points_satisfy_pairwise_condition():
    # the per-cone audit depends on this composition: any two vectors
    # assigned to one cone must have cosine at least 1 - 1/c4
    from mwbench.lattice import cosine

    rng = random.Random(17)
    for _ in range(30):
        rank = rng.randint(2, 3)
        lat = random_psd_lattice(rng, rank)
        c4 = rng.choice([1.5, 2.0, 3.0])
        cover = build_cone_cover(lat, c4)
        pts = {tuple(rng.randint(-9, 9) for _ in range(rank)) for _ in range(60)}
        cones = {}
        for v in sorted(pts):
            if any(v):
                cones.setdefault(assign_to_cone(cover, lat, v), []).append(v)
        for members in cones.values():
            for i, a in enumerate(members):
                for b in members[:i]:
                    assert cosine(lat, a, b) >= 1 - 1 / c4 - 1e-9


def test_cone_bound_monotone_in_c4():
    prev = 0
    for c4 in (1.1, 1.5, 2.0, 3.0, 10.0, 100.0):
        b = cone_count_bound(3, c4)
        assert b >= prev
        prev = b


def test_greedy_single_center():
    pts = [(0,), (1,), (-1,)]
    cert = greedy_ball_cover(UNIT1, pts, 1.0, 1.5)
    assert len(cert.centers) == 1


def test_greedy_bound_at_equal_radii():
    cert = greedy_ball_cover(HEX, [(0, 0)], 1.0, 1.0)
    assert cert.bound == 3**2


def test_greedy_line_example():
    cert = greedy_ball_cover(UNIT1, [(-2,), (0,), (2,)], 2.0, 0.5)
    assert len(cert.centers) == 3
    assert cert.bound == 9


def test_greedy_requires_points_in_ball():
    with pytest.raises(InputError):
        greedy_ball_cover(UNIT1, [(5,)], 2.0, 0.5)


def test_greedy_requires_positive_radius():
    with pytest.raises(InputError):
        greedy_ball_cover(UNIT1, [(1,)], 2.0, 0.0)


def test_greedy_separation_and_coverage():
    rng = random.Random(7)
    for trial in range(30):
        rank = rng.randint(1, 4)
        lat = random_psd_lattice(rng, rank)
        radius = rng.uniform(1.5, 3.0)
        pts = enumerate_ball(lat, radius)
        r = rng.uniform(0.3, 1.2)
        cert = greedy_ball_cover(lat, pts, radius, r)
        assert len(cert.centers) <= cert.bound
        for i, a in enumerate(cert.centers):
            for b in cert.centers[:i]:
                diff = tuple(x - y for x, y in zip(a, b))
                assert math.sqrt(sum_q(lat, diff)) > r


def sum_q(lat, v):
    from mwbench.lattice import height

    return max(height(lat, v), 0.0)


def test_greedy_count_monotone_as_radius_shrinks():
    pts = enumerate_ball(HEX, 2.5)
    prev = 0
    for r in (2.0, 1.0, 0.6, 0.3):
        cert = greedy_ball_cover(HEX, pts, 2.5, r)
        assert len(cert.centers) >= prev
        prev = len(cert.centers)


def test_cover_json_shapes():
    cover = build_cone_cover(HEX, 2.0)
    data = cover.to_json()
    assert data["axis_count"] == len(cover.axes)
    assert all(isinstance(c, str) for d in data["directions"] for c in d)
    cert = greedy_ball_cover(UNIT1, [(-2,), (0,), (2,)], 2.0, 0.5)
    data = cert.to_json()
    assert data["center_count"] == 3
    assert data["bound"] == 9

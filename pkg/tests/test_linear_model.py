import random

import pytest

from mwbench import InputError, ResourceError
from mwbench import linear_model as lm
from mwbench.degrees import nogaalon_degree_bound

from _cover_instances import random_cover_instance, random_subspace_family


def line(q, base, direction):
    return lm.subspace(q, 2, base, [direction])


def test_subspace_canonical_form():
    a = lm.subspace(3, 2, (0, 0), [(1, 1), (2, 2)])
    b = lm.subspace(3, 2, (1, 1), [(2, 2)])
    assert a == b  # same point set, same canonical representation
    assert a.dim == 1


def test_field_size_must_be_prime():
    with pytest.raises(InputError):
        lm.subspace(4, 2, (0, 0), [])


def test_model_irredundant_union():
    point_comp = lm.subspace(3, 2, (1, 1), [])
    whole_line = line(3, (0, 0), (1, 1))
    m = lm.model(3, 2, [point_comp, whole_line])
    assert m.degree == 1
    assert m.components == (whole_line,)


def test_model_dim_and_degree_convention():
    m = lm.model(3, 2, [line(3, (0, 0), (1, 0)), lm.subspace(3, 2, (1, 1), [])])
    assert m.dim == 1
    assert m.degree == 2  # every component counts


def test_model_json_round_trip():
    m = lm.model(5, 2, [line(5, (0, 1), (1, 2)), lm.subspace(5, 2, (3, 3), [])])
    again = lm.LinearVarietyModel.from_json(m.to_json())
    assert again == m


def test_model_bezout_on_random_pairs():
    rng = random.Random(8)
    for _ in range(120):
        q = rng.choice([2, 3, 5])
        comps_v = [
            lm.subspace(
                q, 2, (rng.randrange(q), rng.randrange(q)),
                [(rng.randrange(q), rng.randrange(q))] if rng.random() < 0.8 else [],
            )
            for _ in range(rng.randint(1, 3))
        ]
        comps_w = [
            lm.subspace(
                q, 2, (rng.randrange(q), rng.randrange(q)),
                [(rng.randrange(q), rng.randrange(q))] if rng.random() < 0.8 else [],
            )
            for _ in range(rng.randint(1, 3))
        ]
        V = lm.model(q, 2, comps_v)
        W = lm.model(q, 2, comps_w)
        inter = lm.intersect_models(V, W)
        assert inter.degree <= V.degree * W.degree
        assert inter.points() == (V.points() & W.points())


def test_chow_pinning_four_lines():
    lines = [line(3, (0, 0), d) for d in [(1, 0), (1, 1), (1, 2), (0, 1)]]
    fam = lm.SubspaceFamily(tuple(lines))
    for seed in range(4):
        res = lm.chow_pinning(fam, seed)
        assert len(res["points"]) == 1  # hand count: one point suffices
        assert res["survivors"] == [seed]


def test_chow_pinning_single_member():
    fam = lm.SubspaceFamily((line(3, (0, 0), (1, 0)),))
    res = lm.chow_pinning(fam, 0)
    assert res["points"] == []
    assert res["survivors"] == [0]


def test_chow_pinning_parallel_lines():
    fam = lm.SubspaceFamily((line(3, (0, 0), (1, 0)), line(3, (0, 1), (1, 0))))
    res = lm.chow_pinning(fam, 0)
    assert len(res["points"]) == 1
    assert res["survivors"] == [0]


def test_chow_pinning_fixpoint_random_families():
    rng = random.Random(21)
    done = 0
    while done < 60:
        q = rng.choice([2, 3, 5])
        n = rng.randint(1, 3)
        dim = rng.randint(0, n - 1) if n > 1 else 0
        fam = random_subspace_family(rng, q, n, dim, rng.randint(1, 5))
        if fam is None:
            continue
        done += 1
        seed = rng.randrange(len(fam.members))
        res = lm.chow_pinning(fam, seed)
        assert seed in res["survivors"]
        x0 = fam.members[seed]
        # survivors are exactly the members containing every chosen point
        expected = [
            i
            for i, m in enumerate(fam.members)
            if all(m.contains(p) for p in res["points"])
        ]
        assert res["survivors"] == expected
        # pinned: every remaining survivor contains the whole seed member
        for i in res["survivors"]:
            assert fam.members[i].contains_subspace(x0)
        # re-adding any chosen point changes nothing
        for p in res["points"]:
            assert all(fam.members[i].contains(p) for i in res["survivors"])


def test_nogaalon_m1_returns_z():
    X = lm.model(3, 2, [line(3, (0, 0), (1, 1))])
    Z = lm.model(3, 2, [lm.subspace(3, 2, (1, 1), [])])
    out = lm.nogaalon_cover(X, 1, Z, {(1, 1)})
    assert out.points() == frozenset({(1, 1)})


def test_nogaalon_diagonal_example():
    X = lm.model(3, 2, [line(3, (0, 0), (1, 1))])
    Z = lm.model(3, 4, [lm.subspace(3, 4, (0, 0, 0, 0), [(1, 1, 1, 1)])])
    s = (2, 2)
    out = lm.nogaalon_cover(X, 2, Z, {s})
    assert out.points() == frozenset({s})


def test_nogaalon_cross_example():
    # X the affine line over F_5, Z = (X x {a}) u ({a} x X), sigma = {a}
    X = lm.model(5, 1, [lm.subspace(5, 1, (0,), [(1,)])])
    a = 2
    Z = lm.model(
        5, 2, [lm.subspace(5, 2, (0, a), [(1, 0)]), lm.subspace(5, 2, (a, 0), [(0, 1)])]
    )
    out = lm.nogaalon_cover(X, 2, Z, {(a,)})
    assert out.points() == frozenset({(a,)})


def test_nogaalon_empty_sigma():
    X = lm.model(3, 2, [line(3, (0, 0), (1, 1))])
    Z = lm.model(3, 4, [lm.subspace(3, 4, (0, 0, 0, 0), [(1, 1, 1, 1)])])
    out = lm.nogaalon_cover(X, 2, Z, set())
    assert len(out.points()) < len(X.points())


def test_nogaalon_rejects_full_z():
    X = lm.model(3, 2, [line(3, (0, 0), (1, 1))])
    full = lm.model(3, 4, [lm.subspace(3, 4, (0, 0, 0, 0), [(1, 1, 0, 0), (0, 0, 1, 1)])])
    with pytest.raises(InputError):
        lm.nogaalon_cover(X, 2, full, set())


def test_nogaalon_rejects_sigma_outside_z():
    X = lm.model(3, 2, [line(3, (0, 0), (1, 1))])
    Z = lm.model(3, 4, [lm.subspace(3, 4, (0, 0, 0, 0), [(1, 1, 1, 1)])])
    with pytest.raises(InputError):
        lm.nogaalon_cover(X, 2, Z, {(1, 1), (2, 2)})  # (1,1),(2,2) tuple not in Z


def test_brute_force_diagonal_singletons():
    X = lm.model(3, 2, [line(3, (0, 0), (1, 1))])
    Z = lm.model(3, 4, [lm.subspace(3, 4, (0, 0, 0, 0), [(1, 1, 1, 1)])])
    res = lm.brute_force_minimal_cover(X, 2, Z)
    sigmas = [tuple(map(tuple, r["sigma"])) for r in res]
    assert all(len(s) == 1 for s in sigmas)
    assert len(sigmas) == 3
    for r in res:
        assert r["cover"].degree == 1


def test_brute_force_budget():
    X = lm.model(5, 1, [lm.subspace(5, 1, (0,), [(1,)])])
    Z = lm.model(5, 2, [lm.subspace(5, 2, (0, 0), [(1, 1)])])
    with pytest.raises(ResourceError):
        lm.brute_force_minimal_cover(X, 4, Z)


def test_oracle_agreement_random_instances():
    rng = random.Random(2024)
    done = 0
    while done < 80:
        inst = random_cover_instance(rng)
        if inst is None:
            continue
        X, M, Z = inst
        try:
            results = lm.brute_force_minimal_cover(X, M, Z)
        except ResourceError:
            continue
        done += 1
        bound = nogaalon_degree_bound(M, X.dim, X.degree, Z.degree)
        for rec in results[:6]:
            sigma = set(map(tuple, rec["sigma"]))
            if not sigma:
                continue
            out = lm.nogaalon_cover(X, M, Z, sigma)
            pts = out.points()
            assert sigma <= pts
            assert len(pts) < len(X.points())
            assert out.degree <= bound

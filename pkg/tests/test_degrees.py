import math
import random
from fractions import Fraction

import pytest
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from mwbench import InputError
from mwbench.degrees import (
    AlternatingForm,
    LogTerm,
    PolarizationType,
    VarietyInvariants,
    embedding_dimension,
    generated_subvariety_bound,
    generated_subvariety_lemma_bound,
    integer_determinant,
    isogeny_degree_transport,
    minkowski_iteration_chain,
    minkowski_sum_degree_bound,
    nogaalon_degree_bound,
    pfaffian_identities,
    product_degree,
    symplectic_normal_form,
)


def random_alternating(rng, n):
    while True:
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                M[i][j] = rng.randint(-10, 10)
                M[j][i] = -M[i][j]
        if integer_determinant(M) != 0:
            return AlternatingForm(tuple(tuple(row) for row in M))


def test_variety_invariants_validation():
    VarietyInvariants(g=2, r=1, d=3, l=4)
    with pytest.raises(InputError):
        VarietyInvariants(g=2, r=3, d=1, l=2)
    with pytest.raises(InputError):
        VarietyInvariants(g=3, r=1, d=1, l=8)  # 3! does not divide 8


def test_product_degree_examples():
    assert product_degree(1, 1, 3, 5) == 2 * 15
    assert product_degree(0, 4, 7, 11) == 77
    assert product_degree(2, 2, 3, 5) == math.comb(4, 2) * 15 == 90


def test_product_degree_symmetry():
    rng = random.Random(0)
    for _ in range(200):
        a, b = rng.randint(0, 6), rng.randint(0, 6)
        x, y = rng.randint(1, 50), rng.randint(1, 50)
        assert product_degree(a, b, x, y) == product_degree(b, a, y, x)


def test_minkowski_sum_examples():
    assert minkowski_sum_degree_bound(1, 1, 1, 1) == 8
    assert minkowski_sum_degree_bound(0, 0, 4, 6) == 24
    assert minkowski_sum_degree_bound(1, 2, 2, 3) == 2**3 * math.comb(3, 1) * 6 == 144


def test_minkowski_is_power_of_two_times_product():
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.randint(0, 5), rng.randint(0, 5)
        x, y = rng.randint(1, 30), rng.randint(1, 30)
        assert minkowski_sum_degree_bound(a, b, x, y) == 2 ** (a + b) * product_degree(a, b, x, y)


def test_generated_subvariety_bound_examples():
    assert generated_subvariety_bound(2, 1, 1, 1) == 2**2 * math.comb(2, 1) == 8
    # exponent (2^3 - 2) * 1 = 6, product term C(2,2) = 1
    assert generated_subvariety_bound(2, 1, 1, 2) == 2**6 * 2 * 1 == 128
    for k in (1, 2, 3):
        ratio = generated_subvariety_bound(3, 1, 2, k) // generated_subvariety_bound(3, 1, 1, k)
        assert ratio == 2 ** (2 * k)


def test_generated_bound_is_below_the_literal_chain():
    # substituting each intermediate bound in full through the sum formula
    # exceeds the closed form, which drops repeated factors along the way
    for g, r, d in [(2, 1, 1), (3, 1, 2), (3, 2, 1), (4, 2, 3)]:
        for k in range(1, g + 1):
            assert generated_subvariety_bound(g, r, d, k) <= minkowski_iteration_chain(g, r, d, k)


def test_generated_lemma_bound_is_max_over_k():
    assert generated_subvariety_lemma_bound(3, 1, 2) == max(
        generated_subvariety_bound(3, 1, 2, k) for k in (1, 2, 3)
    )


def test_symplectic_plane_examples():
    assert symplectic_normal_form(AlternatingForm(((0, 1), (-1, 0)))).d_list == (1,)
    assert symplectic_normal_form(AlternatingForm(((0, 2), (-2, 0)))).d_list == (2,)


def test_symplectic_degenerate_rejected():
    with pytest.raises(InputError):
        AlternatingForm(((0, 0), (0, 0)))
    with pytest.raises(InputError):
        AlternatingForm(((0, 1), (1, 0)))  # not antisymmetric


def test_symplectic_random_pf_and_chain():
    rng = random.Random(99)
    for _ in range(150):
        E = random_alternating(rng, rng.choice([2, 4, 6, 8]))
        D = symplectic_normal_form(E)
        for a, b in zip(D.d_list, D.d_list[1:]):
            assert b % a == 0
        assert D.pfaffian() ** 2 == abs(E.determinant())


def test_symplectic_large_entries_and_sizes():
    rng = random.Random(123)
    for _ in range(40):
        n = rng.choice([8, 10])
        while True:
            M = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    M[i][j] = rng.randint(-100, 100)
                    M[j][i] = -M[i][j]
            if integer_determinant(M) != 0:
                break
        E = AlternatingForm(tuple(tuple(r) for r in M))
        D = symplectic_normal_form(E)
        assert D.pfaffian() ** 2 == abs(E.determinant())
        for a, b in zip(D.d_list, D.d_list[1:]):
            assert b % a == 0


def test_symplectic_agrees_with_smith_invariants():
    rng = random.Random(5)
    for _ in range(40):
        E = random_alternating(rng, rng.choice([2, 4, 6]))
        D = symplectic_normal_form(E)
        snf = smith_normal_form(Matrix([list(r) for r in E.matrix]))
        smith = sorted(abs(snf[i, i]) for i in range(snf.rows))
        assert smith == sorted(d for d in D.d_list for _ in range(2))


def test_symplectic_idempotent_on_block_form():
    rng = random.Random(13)
    for _ in range(30):
        E = random_alternating(rng, rng.choice([2, 4, 6]))
        D = symplectic_normal_form(E)
        g = len(D.d_list)
        block = [[0] * (2 * g) for _ in range(2 * g)]
        for i, d in enumerate(D.d_list):
            block[i][g + i] = d
            block[g + i][i] = -d
        again = symplectic_normal_form(AlternatingForm(tuple(tuple(r) for r in block)))
        assert again.d_list == D.d_list


def test_pfaffian_identity_examples():
    assert pfaffian_identities(2, PolarizationType((1, 1)))["deg_A"] == 2
    assert pfaffian_identities(1, PolarizationType((3,))) == {"pf": 3, "h0_dim": 3, "deg_A": 3}
    out = pfaffian_identities(3, PolarizationType((1, 2, 4)))
    assert out["pf"] == 8 and out["deg_A"] == 48
    with pytest.raises(InputError):
        pfaffian_identities(2, PolarizationType((1, 2, 4)))


def test_polarization_chain_enforced():
    with pytest.raises(InputError):
        PolarizationType((2, 3))


def test_isogeny_transport_examples():
    t = isogeny_degree_transport(2, 1, 2)  # l = g!
    assert t["deg_u0"] == 1 and t["d_prime_bound"] == 1
    assert t["faltings_shift"].is_zero()
    t = isogeny_degree_transport(2, 1, 4)
    assert t["deg_u0"] == 2 and t["deg_u"] == 8 and t["d_prime_bound"] == 8
    assert t["faltings_shift"] == LogTerm(Fraction(1, 2), Fraction(2))
    t = isogeny_degree_transport(1, 5, 6)
    assert t["d_prime_bound"] == 30
    with pytest.raises(InputError):
        isogeny_degree_transport(3, 1, 10)


def test_embedding_dimension_examples():
    assert embedding_dimension(1, 3) == 2
    assert embedding_dimension(2, 8) == 3
    with pytest.raises(InputError):
        embedding_dimension(1, 1)


def test_nogaalon_bound_examples():
    assert nogaalon_degree_bound(1, 4, 9, 13) == 13
    assert nogaalon_degree_bound(2, 1, 1, 1) == 2
    # dim 0 keeps the multinomial trivial for every M
    for M, deg_x, deg_z in [(2, 2, 5), (3, 2, 5), (3, 3, 2)]:
        assert nogaalon_degree_bound(M, 0, deg_x, deg_z) == max(
            nogaalon_degree_bound(M - 1, 0, deg_x, deg_z * deg_x ** (M - 1)),
            deg_x * deg_z + deg_z,
        )


def test_nogaalon_bound_monotone():
    rng = random.Random(3)
    for _ in range(100):
        M = rng.randint(1, 4)
        dim_x = rng.randint(0, 2)
        deg_x = rng.randint(1, 4)
        deg_z = rng.randint(1, 6)
        base = nogaalon_degree_bound(M, dim_x, deg_x, deg_z)
        assert nogaalon_degree_bound(M, dim_x, deg_x, deg_z + 1) >= base
        assert nogaalon_degree_bound(M, dim_x, deg_x + 1, deg_z) >= base


def test_integer_determinant_matches_fraction_elimination():
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(1, 6)
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        det = integer_determinant(M)
        # cofactor-free reference via fractions
        ref = _fraction_det([row[:] for row in M])
        assert det == ref


def _fraction_det(M):
    n = len(M)
    M = [[Fraction(x) for x in row] for row in M]
    sign = 1
    for k in range(n):
        pivot = next((i for i in range(k, n) if M[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            M[k], M[pivot] = M[pivot], M[k]
            sign = -sign
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            M[i] = [a - f * b for a, b in zip(M[i], M[k])]
    out = Fraction(sign)
    for i in range(n):
        out *= M[i][i]
    assert out.denominator == 1
    return int(out)

"""Exact integer ledger for degree bounds, polarization normal forms, and
isogeny transport.

Everything here is big-integer or exact-rational arithmetic: these numbers
feed constant ledgers where a silent overflow would corrupt certificates.
Logarithms are kept symbolic (coefficient and rational argument) until a
caller asks for a numeric value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError


@dataclass(frozen=True)
class LogTerm:
    """coefficient * log(argument) with the argument kept exact."""

    coefficient: Fraction
    argument: Fraction

    def __post_init__(self):
        if self.argument <= 0:
            raise InputError("log argument must be positive")

    def value(self) -> float:
        return float(self.coefficient) * math.log(self.argument)

    def is_zero(self) -> bool:
        return self.coefficient == 0 or self.argument == 1

    def to_json(self) -> dict:
        return {
            "log_coefficient": str(self.coefficient),
            "log_argument": str(self.argument),
            "numeric": self.value(),
        }


@dataclass(frozen=True)
class VarietyInvariants:
    """The numeric tuple (g, r, d, l): ambient dimension, subvariety
    dimension, subvariety degree, ambient degree."""

    g: int
    r: int
    d: int
    l: int

    def __post_init__(self):
        if self.g < 1:
            raise InputError("g must be >= 1")
        if not 0 <= self.r <= self.g:
            raise InputError("need 0 <= r <= g")
        if self.d < 1 or self.l < 1:
            raise InputError("degrees must be >= 1")
        if self.l % math.factorial(self.g) != 0:
            raise InputError(f"g! = {math.factorial(self.g)} must divide l = {self.l}")


def integer_determinant(rows) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = [[int(x) for x in row] for row in rows]
    n = len(M)
    if any(len(row) != n for row in M):
        raise InputError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class AlternatingForm:
    """Nondegenerate integer alternating form on Z^(2g)."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        n = len(rows)
        if n == 0 or n % 2 != 0 or any(len(row) != n for row in rows):
            raise InputError("alternating form needs a square matrix of even size")
        for i in range(n):
            for j in range(n):
                if rows[i][j] != -rows[j][i]:
                    raise InputError("matrix is not antisymmetric")
        if integer_determinant(rows) == 0:
            raise InputError("alternating form is degenerate")

    @property
    def genus(self) -> int:
        return len(self.matrix) // 2

    def determinant(self) -> int:
        return integer_determinant(self.matrix)


@dataclass(frozen=True)
class PolarizationType:
    """Elementary divisor chain d_1 | d_2 | ... | d_g, all positive."""

    d_list: tuple[int, ...]

    def __post_init__(self):
        ds = tuple(int(x) for x in self.d_list)
        object.__setattr__(self, "d_list", ds)
        if not ds:
            raise InputError("polarization type must be nonempty")
        if any(x < 1 for x in ds):
            raise InputError("divisors must be positive")
        for a, b in zip(ds, ds[1:]):
            if b % a != 0:
                raise InputError(f"divisibility chain broken: {a} does not divide {b}")

    def pfaffian(self) -> int:
        p = 1
        for x in self.d_list:
            p *= x
        return p


def _check_dims_degs(dim_y: int, dim_y2: int, deg_y: int, deg_y2: int) -> None:
    if dim_y < 0 or dim_y2 < 0:
        raise InputError("dimensions must be nonnegative")
    if deg_y < 1 or deg_y2 < 1:
        raise InputError("degrees must be >= 1")


def product_degree(dim_y: int, dim_y2: int, deg_y: int, deg_y2: int) -> int:
    """Degree of a product variety under the box line bundle:
    C(dim_y + dim_y2, dim_y) * deg_y * deg_y2."""
    _check_dims_degs(dim_y, dim_y2, deg_y, deg_y2)
    return math.comb(dim_y + dim_y2, dim_y) * deg_y * deg_y2


def minkowski_sum_degree_bound(dim_y: int, dim_y2: int, deg_y: int, deg_y2: int) -> int:
    """Degree bound for a pointwise sum Y + Y':
    2^(dim_y + dim_y2) * C(dim_y + dim_y2, dim_y) * deg_y * deg_y2."""
    _check_dims_degs(dim_y, dim_y2, deg_y, deg_y2)
    return 2 ** (dim_y + dim_y2) * product_degree(dim_y, dim_y2, deg_y, deg_y2)


def generated_subvariety_bound(g: int, r: int, d: int, k: int) -> int:
    """Degree bound for the k-fold sum of (X - X), dim X = r, deg X = d:

        2^((2^(k+1) - 2) r) * C(2r, r) * prod_{j=2..k} C(jr, 2r) * d^(2k)
    """
    if g < 1 or not 1 <= r <= g or not 1 <= k <= g:
        raise InputError("need 1 <= r <= g and 1 <= k <= g")
    if d < 1:
        raise InputError("degree must be >= 1")
    value = 2 ** ((2 ** (k + 1) - 2) * r) * math.comb(2 * r, r) * d ** (2 * k)
    for j in range(2, k + 1):
        value *= math.comb(j * r, 2 * r)
    return value


def generated_subvariety_lemma_bound(g: int, r: int, d: int) -> int:
    """Explicit value for the (existence-only) constant bounding the degree
    of the subgroup generated by X - X: the k-indexed product maximized
    over k <= g.  Proof-derived, not stated in closed form anywhere."""
    return max(generated_subvariety_bound(g, r, d, k) for k in range(1, g + 1))


def minkowski_iteration_chain(g: int, r: int, d: int, k: int) -> int:
    """Literal step-by-step recomputation of the k-fold sum bound through
    minkowski_sum_degree_bound, substituting each intermediate bound in
    full.  Exceeds generated_subvariety_bound, which drops repeated
    binomial factors along the way; kept as the cross-check counterpart."""
    if g < 1 or not 1 <= r <= g or not 1 <= k <= g:
        raise InputError("need 1 <= r <= g and 1 <= k <= g")
    first = minkowski_sum_degree_bound(r, r, d, d)
    chain = first
    for step in range(2, k + 1):
        chain = minkowski_sum_degree_bound(2 * r, 2 * (step - 1) * r, first, chain)
    return chain


def _congruence_swap(M: list[list[int]], a: int, b: int) -> None:
    if a == b:
        return
    M[a], M[b] = M[b], M[a]
    for row in M:
        row[a], row[b] = row[b], row[a]


def _congruence_negate(M: list[list[int]], a: int) -> None:
    M[a] = [-x for x in M[a]]
    for row in M:
        row[a] = -row[a]


def _congruence_add(M: list[list[int]], dst: int, src: int, q: int) -> None:
    """row dst += q * row src, and the same on columns."""
    if q == 0:
        return
    M[dst] = [x + q * y for x, y in zip(M[dst], M[src])]
    for row in M:
        row[dst] += q * row[src]


def symplectic_normal_form(E: AlternatingForm) -> PolarizationType:
    """Elementary divisors d_1 | ... | d_g of an integer alternating form.

    Integer congruence reduction preserving antisymmetry: pivot on the
    smallest nonzero entry, clear its row and column in symplectic pairs,
    and sweep non-divisible entries into the pivot row until the leading
    2x2 block divides everything that remains.  The product of the
    divisors squares to |det E| exactly, which is verified before
    returning.
    """
    M = [list(row) for row in E.matrix]
    n = len(M)
    divisors: list[int] = []
    t = 0
    while t < n:
        while True:
            pivot = None
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    v = abs(M[i][j])
                    if v != 0 and (best is None or v < best):
                        best = v
                        pivot = (i, j)
            if pivot is None:
                raise InputError("alternating form is degenerate")
            i0, j0 = pivot
            _congruence_swap(M, t, i0)
            if j0 == t:
                j0 = i0
            _congruence_swap(M, t + 1, j0)
            if M[t][t + 1] < 0:
                _congruence_negate(M, t)
            e = M[t][t + 1]
            # clear row t against column t+1 (pivot e) and row t+1 against
            # column t (pivot -e, hence the opposite coefficient sign)
            for j in range(t + 2, n):
                _congruence_add(M, j, t + 1, -(M[t][j] // e))
                _congruence_add(M, j, t, M[t + 1][j] // e)
            if any(M[t][j] or M[t + 1][j] for j in range(t + 2, n)):
                continue  # remainders became new, smaller pivot candidates
            offender = None
            for i in range(t + 2, n):
                for j in range(t + 2, n):
                    if M[i][j] % e != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                divisors.append(e)
                t += 2
                break
            _congruence_add(M, t, offender, 1)
    result = PolarizationType(tuple(divisors))
    det = abs(E.determinant())
    if result.pfaffian() ** 2 != det:
        raise InputError(
            f"reduction produced divisors {divisors} whose product squared is "
            f"{result.pfaffian() ** 2}, but |det E| = {det}"
        )
    return result


def pfaffian_identities(g: int, D: PolarizationType) -> dict:
    """pf = prod d_i; dim of global sections = pf; ambient degree = g! * pf."""
    if len(D.d_list) != g:
        raise InputError(f"polarization type has length {len(D.d_list)}, expected g = {g}")
    pf = D.pfaffian()
    return {"pf": pf, "h0_dim": pf, "deg_A": math.factorial(g) * pf}


def isogeny_degree_transport(g: int, d: int, l: int) -> dict:
    """Transport of degrees and height shift along the isogeny to a
    principally polarized quotient and back.

    deg_u0 = l/g!; deg_u = (l/g!)^(2g-1); pulled-back subvariety degree is
    at most d * deg_u; the height shift is (1/2) log(l/g!), kept symbolic.
    """
    if g < 1 or d < 1 or l < 1:
        raise InputError("g, d, l must be >= 1")
    fact = math.factorial(g)
    if l % fact != 0:
        raise InputError(f"g! = {fact} must divide l = {l}")
    n0 = l // fact
    deg_u = n0 ** (2 * g - 1)
    return {
        "deg_u0": n0,
        "deg_u": deg_u,
        "d_prime_bound": d * deg_u,
        "faltings_shift": LogTerm(Fraction(1, 2), Fraction(n0)),
    }


def embedding_dimension(g: int, l: int) -> int:
    """Dimension of the projective space receiving the ambient variety:
    l/g! - 1 (needs l/g! >= 2)."""
    if g < 1 or l < 1:
        raise InputError("g and l must be >= 1")
    fact = math.factorial(g)
    if l % fact != 0:
        raise InputError(f"g! = {fact} must divide l = {l}")
    n0 = l // fact
    if n0 < 2:
        raise InputError(f"l/g! = {n0} admits no projective embedding (need >= 2)")
    return n0 - 1


def ledger_records(g: int, r: int, d: int, l: int, k: int | None = None) -> list[dict]:
    """Every derived degree quantity as {name, value, lemma_tag} records,
    exact values serialized as ints or strings."""
    VarietyInvariants(g=g, r=r, d=d, l=l)
    k = k if k is not None else g
    r_pos = max(r, 1)
    transport = isogeny_degree_transport(g, d, l)
    records = [
        ("product_degree", product_degree(r, r, d, d), "product-degree"),
        ("minkowski_sum_degree_bound", minkowski_sum_degree_bound(r, r, d, d), "sum-degree-bound"),
        (
            "generated_subvariety_bound",
            generated_subvariety_bound(g, r_pos, d, k),
            "generated-degree-bound",
        ),
        (
            "generated_subvariety_lemma_bound",
            generated_subvariety_lemma_bound(g, r_pos, d),
            "generated-degree-bound (proof-derived, not stated in closed form)",
        ),
        ("deg_u0", transport["deg_u0"], "isogeny-transport"),
        ("deg_u", transport["deg_u"], "isogeny-transport"),
        ("d_prime_bound", transport["d_prime_bound"], "isogeny-transport"),
        ("faltings_shift", transport["faltings_shift"].to_json(), "isogeny-transport"),
        ("nogaalon_degree_bound_m2", nogaalon_degree_bound(2, r, d, d), "cover-recursion-bound"),
    ]
    if l // math.factorial(g) >= 2:
        records.insert(0, ("embedding_dimension", embedding_dimension(g, l), "embedding-dimension"))
    return [{"name": n, "value": v, "lemma_tag": t} for n, v, t in records]


def nogaalon_degree_bound(M: int, dim_x: int, deg_x: int, deg_z: int) -> int:
    """Exact recursive degree bound for the covering recursion:

        c(1) = deg_z
        c(M) = max( c(M-1, dim_x, deg_x, m * deg_z * deg_x^(M-1)),
                    deg_x * deg_z + deg_z )
        with m = ((M-1) dim_x)! / (dim_x!)^(M-1).
    """
    if M < 1:
        raise InputError("M must be >= 1")
    if dim_x < 0:
        raise InputError("dim_x must be nonnegative")
    if deg_x < 1 or deg_z < 1:
        raise InputError("degrees must be >= 1")
    if M == 1:
        return deg_z
    mult = math.factorial((M - 1) * dim_x) // math.factorial(dim_x) ** (M - 1)
    recursed = nogaalon_degree_bound(M - 1, dim_x, deg_x, mult * deg_z * deg_x ** (M - 1))
    return max(recursed, deg_x * deg_z + deg_z)

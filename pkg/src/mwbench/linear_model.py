"""Finite unions of affine subspaces over a small prime field: a decidable
stand-in for algebraic varieties on which the two covering procedures run
exactly.

Conventions: a single affine subspace is irreducible of degree 1; a union
has degree equal to its component count; dimension is the maximal component
dimension.  Projections, slices, intersections, and hulls are all exact
linear algebra mod q, so every step of both procedures is checkable by
brute force over points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import CertificateError, InputError, ResourceError
from .degrees import nogaalon_degree_bound

Point = tuple[int, ...]

BRUTE_FORCE_MAX_POINTS = 200
BRUTE_FORCE_MAX_M = 3
MAX_MODEL_POINTS = 300_000
MAX_ENUM_NODES = 200_000


def _rref(rows: list[list[int]], q: int) -> list[list[int]]:
    """Row-reduced echelon form over F_q (q prime); drops zero rows."""
    rows = [[x % q for x in row] for row in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[int]] = []
    pivot_cols: list[int] = []
    work = [row[:] for row in rows]
    col = 0
    r = 0
    while col < ncols and r < len(work):
        pivot_row = None
        for i in range(r, len(work)):
            if work[i][col] % q != 0:
                pivot_row = i
                break
        if pivot_row is None:
            col += 1
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = pow(work[r][col], q - 2, q)
        work[r] = [(x * inv) % q for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] % q != 0:
                f = work[i][col]
                work[i] = [(a - f * b) % q for a, b in zip(work[i], work[r])]
        pivot_cols.append(col)
        r += 1
        col += 1
    for i in range(r):
        out.append(work[i])
    return out


def _pivots(rref_rows: list[list[int]]) -> list[int]:
    cols = []
    for row in rref_rows:
        for j, x in enumerate(row):
            if x != 0:
                cols.append(j)
                break
    return cols


def _in_rowspace(rref_rows: list[list[int]], vec, q: int) -> bool:
    v = [x % q for x in vec]
    for row, col in zip(rref_rows, _pivots(rref_rows)):
        if v[col]:
            f = v[col]
            v = [(a - f * b) % q for a, b in zip(v, row)]
    return not any(v)


def _null_space(rref_rows: list[list[int]], ncols: int, q: int) -> list[list[int]]:
    """Basis of {c : row . c = 0 for all rows}."""
    pivots = _pivots(rref_rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for row, col in zip(rref_rows, pivots):
            vec[col] = (-row[f]) % q
        basis.append(vec)
    return basis


@dataclass(frozen=True)
class AffineSubspace:
    """base + span(rows) inside F_q^n, stored in canonical form."""

    q: int
    n: int
    base: Point
    rows: tuple[Point, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def size(self) -> int:
        return self.q**self.dim

    def contains(self, pt: Point) -> bool:
        diff = [(a - b) % self.q for a, b in zip(pt, self.base)]
        return _in_rowspace([list(r) for r in self.rows], diff, self.q)

    def contains_subspace(self, other: "AffineSubspace") -> bool:
        if not self.contains(other.base):
            return False
        rows = [list(r) for r in self.rows]
        return all(_in_rowspace(rows, list(r), self.q) for r in other.rows)

    def points(self) -> frozenset[Point]:
        return _subspace_points(self)

    def to_json(self) -> dict:
        return {"base": list(self.base), "basis_rows": [list(r) for r in self.rows]}


@lru_cache(maxsize=4096)
def _subspace_points(sub: AffineSubspace) -> frozenset[Point]:
    pts = []
    for coeffs in itertools.product(range(sub.q), repeat=sub.dim):
        pt = list(sub.base)
        for c, row in zip(coeffs, sub.rows):
            if c:
                pt = [(a + c * b) % sub.q for a, b in zip(pt, row)]
        pts.append(tuple(pt))
    return frozenset(pts)


def subspace(q: int, n: int, base, rows) -> AffineSubspace:
    """Canonicalize: RREF rows, base reduced modulo the direction space."""
    if q < 2 or any(q % k == 0 for k in range(2, q)):
        raise InputError(f"field size must be prime, got {q}")
    base = tuple(int(x) % q for x in base)
    if len(base) != n:
        raise InputError("base point has wrong length")
    row_list = [[int(x) % q for x in row] for row in rows]
    if any(len(r) != n for r in row_list):
        raise InputError("basis row has wrong length")
    rr = _rref(row_list, q)
    b = list(base)
    for row, col in zip(rr, _pivots(rr)):
        if b[col]:
            f = b[col]
            b = [(a - f * c) % q for a, c in zip(b, row)]
    return AffineSubspace(q, n, tuple(b), tuple(tuple(r) for r in rr))


def affine_point(q: int, n: int, pt) -> AffineSubspace:
    return subspace(q, n, pt, [])


def affine_hull(q: int, n: int, pts: list[Point]) -> AffineSubspace:
    if not pts:
        raise InputError("hull of an empty point set")
    base = pts[0]
    rows = [[(a - b) % q for a, b in zip(p, base)] for p in pts[1:]]
    return subspace(q, n, base, rows)


@dataclass(frozen=True)
class LinearVarietyModel:
    """Irredundant finite union of affine subspaces of F_q^n."""

    q: int
    n: int
    components: tuple[AffineSubspace, ...]

    @property
    def dim(self) -> int:
        if not self.components:
            return -1
        return max(c.dim for c in self.components)

    @property
    def degree(self) -> int:
        # every component counts, regardless of dimension
        return len(self.components)

    def points(self) -> frozenset[Point]:
        out: set[Point] = set()
        for c in self.components:
            out |= c.points()
        return frozenset(out)

    def contains_point(self, pt: Point) -> bool:
        return any(c.contains(pt) for c in self.components)

    def is_irreducible(self) -> bool:
        return len(self.components) == 1

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "components": [c.to_json() for c in self.components],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearVarietyModel":
        q, n = int(data["q"]), int(data["n"])
        comps = [
            subspace(q, n, c["base"], c.get("basis_rows", [])) for c in data["components"]
        ]
        return model(q, n, comps)


def model(q: int, n: int, components) -> LinearVarietyModel:
    """Canonicalize a union: drop components contained in another, sort."""
    comps = list(components)
    for c in comps:
        if c.q != q or c.n != n:
            raise InputError("component field/dimension mismatch")
    kept: list[AffineSubspace] = []
    for c in sorted(comps, key=lambda s: (-s.dim, s.base, s.rows)):
        if any(other.contains_subspace(c) for other in kept):
            continue
        kept.append(c)
    kept.sort(key=lambda s: (s.dim, s.base, s.rows))
    total = sum(c.size() for c in kept)
    if total > MAX_MODEL_POINTS:
        raise ResourceError(f"model enumerates {total}+ points, over the budget")
    return LinearVarietyModel(q, n, tuple(kept))


def intersect_models(V: LinearVarietyModel, W: LinearVarietyModel) -> LinearVarietyModel:
    """Pairwise intersection of components; degree is submultiplicative."""
    if (V.q, V.n) != (W.q, W.n):
        raise InputError("models live in different spaces")
    pieces = []
    for a in V.components:
        for b in W.components:
            c = _intersect_subspaces(a, b)
            if c is not None:
                pieces.append(c)
    return model(V.q, V.n, pieces)


def _constraints(sub: AffineSubspace) -> tuple[list[list[int]], list[int]]:
    """Rows C and vector d with sub = {x : C x = d}."""
    C = _null_space([list(r) for r in sub.rows], sub.n, sub.q)
    d = [sum(c * b for c, b in zip(row, sub.base)) % sub.q for row in C]
    return C, d


def _solve_affine(C: list[list[int]], d: list[int], n: int, q: int) -> AffineSubspace | None:
    """Solution set of C x = d as a subspace, or None if inconsistent."""
    if not C:
        return subspace(q, n, [0] * n, [[1 if j == i else 0 for j in range(n)] for i in range(n)])
    aug = [row[:] + [di] for row, di in zip(C, d)]
    rr = _rref(aug, q)
    for row in rr:
        if not any(row[:-1]) and row[-1]:
            return None
    coeff_rows = [row[:-1] for row in rr if any(row[:-1])]
    rhs = [row[-1] for row in rr if any(row[:-1])]
    pivots = _pivots(coeff_rows)
    x = [0] * n
    for row, col, r in zip(coeff_rows, pivots, rhs):
        x[col] = r
    dirs = _null_space(coeff_rows, n, q)
    return subspace(q, n, x, dirs)


def _intersect_subspaces(a: AffineSubspace, b: AffineSubspace) -> AffineSubspace | None:
    Ca, da = _constraints(a)
    Cb, db = _constraints(b)
    return _solve_affine(Ca + Cb, da + db, a.n, a.q)


@dataclass(frozen=True)
class SubspaceFamily:
    """Pairwise distinct affine subspaces of a common dimension."""

    members: tuple[AffineSubspace, ...]

    def __post_init__(self):
        if not self.members:
            raise InputError("family must be nonempty")
        dims = {m.dim for m in self.members}
        if len(dims) != 1:
            raise InputError("family members must share one dimension")
        seen = []
        for m in self.members:
            if any(m == s for s in seen):
                raise InputError("family members must be pairwise distinct")
            seen.append(m)


def chow_pinning(family: SubspaceFamily, seed: int) -> dict:
    """Greedy pinning: choose points of the seed member until the members
    containing all of them cannot be separated from the seed any further.

    Survivors always include the seed; re-adding any chosen point is a
    no-op (fixpoint).  Separating points are chosen lexicographically
    smallest.
    """
    members = family.members
    if not 0 <= seed < len(members):
        raise InputError(f"seed {seed} out of range")
    x0 = members[seed]
    x0_pts = sorted(x0.points())
    chosen: list[Point] = []
    while True:
        survivors = [
            i for i, m in enumerate(members) if all(m.contains(p) for p in chosen)
        ]
        target = None
        for i in survivors:
            if not members[i].contains_subspace(x0):
                target = i
                break
        if target is None:
            return {"points": chosen, "survivors": survivors}
        separator = next(p for p in x0_pts if not members[target].contains(p))
        chosen.append(separator)


def _product_points(pts: list[Point], m: int):
    return itertools.product(pts, repeat=m)


def _flatten(tup: tuple[Point, ...]) -> Point:
    return tuple(x for part in tup for x in part)


def _block(pt: Point, n: int, i: int) -> Point:
    return pt[i * n : (i + 1) * n]


def _project_first(sub: AffineSubspace, n: int) -> AffineSubspace:
    return subspace(sub.q, n, sub.base[:n], [r[:n] for r in sub.rows])


def _slice_first(sub: AffineSubspace, n: int, head: Point) -> AffineSubspace | None:
    """{tail : (head, tail) in sub} as a subspace of F_q^(n_tail)."""
    C, d = _constraints(sub)
    tail_n = sub.n - n
    C_tail = [row[n:] for row in C]
    d_tail = [
        (di - sum(c * h for c, h in zip(row[:n], head))) % sub.q
        for row, di in zip(C, d)
    ]
    return _solve_affine(C_tail, d_tail, tail_n, sub.q)


def _slice_last(sub: AffineSubspace, n: int, tail: Point) -> AffineSubspace | None:
    """{head : (head, tail) in sub} as a subspace of F_q^n."""
    C, d = _constraints(sub)
    C_head = [row[:n] for row in C]
    d_head = [
        (di - sum(c * t for c, t in zip(row[n:], tail))) % sub.q
        for row, di in zip(C, d)
    ]
    return _solve_affine(C_head, d_head, n, sub.q)


def nogaalon_cover(
    X: LinearVarietyModel,
    M: int,
    Z: LinearVarietyModel,
    sigma: set[Point] | frozenset[Point] | list[Point],
) -> LinearVarietyModel:
    """Recursive covering: given a proper Z inside X^M trapping all M-tuples
    from sigma, produce a proper X' inside X containing sigma, with
    component count within the exact degree recursion.

    Splits Z by whether a component surjects onto the first factor, then
    either recurses into a slice (some sigma point has a proper fiber) or
    cuts X with a non-dominant slice plus the hulls of the sigma-witnessed
    projections of the remaining components.  The hulls replace the full
    projections of the classical argument: over a tiny field a union of
    proper subspaces can exhaust X pointwise, and restricting to witnessed
    points keeps the output strictly smaller while preserving containment.
    """
    if M < 1:
        raise InputError("M must be >= 1")
    if not X.is_irreducible():
        raise InputError("X must be irreducible (a single affine subspace)")
    if Z.q != X.q or Z.n != X.n * M:
        raise InputError("Z must live in the M-th power of X's ambient space")
    q, n = X.q, X.n
    x_comp = X.components[0]
    for comp in Z.components:
        for i in range(M):
            blk = subspace(q, n, _block(comp.base, n, i), [_block(r, n, i) for r in comp.rows])
            if not x_comp.contains_subspace(blk):
                raise InputError("a component of Z leaves X^M")
    x_points = sorted(x_comp.points())
    z_points = Z.points()
    if len(z_points) >= len(x_points) ** M:
        raise InputError("Z must be a proper subvariety of X^M")
    sigma = frozenset(tuple(int(c) % q for c in p) for p in sigma)
    for p in sigma:
        if not x_comp.contains(p):
            raise InputError(f"sigma point {p} is not on X")
    for tup in _product_points(sorted(sigma), M):
        if _flatten(tup) not in z_points:
            raise InputError("sigma^M is not contained in Z")

    result = _nogaalon_recurse(x_comp, x_points, M, Z, sigma)
    bound = nogaalon_degree_bound(M, X.dim, X.degree, Z.degree)
    if result.degree > bound:
        raise CertificateError(
            f"cover has {result.degree} components, exceeding the bound {bound}"
        )
    res_pts = result.points()
    if not sigma <= res_pts:
        raise CertificateError("cover lost a sigma point")
    if len(res_pts) >= len(x_points):
        raise CertificateError("cover failed to be a proper subset of X")
    return result


def _nogaalon_recurse(
    x_comp: AffineSubspace,
    x_points: list[Point],
    M: int,
    Z: LinearVarietyModel,
    sigma: frozenset[Point],
) -> LinearVarietyModel:
    q, n = x_comp.q, x_comp.n
    if M == 1:
        return Z
    dominant = []
    other = []
    for comp in Z.components:
        if _project_first(comp, n) == x_comp:
            dominant.append(comp)
        else:
            other.append(comp)
    zp_points: set[Point] = set()
    for comp in dominant:
        zp_points |= comp.points()
    zpp_points: set[Point] = set()
    for comp in other:
        zpp_points |= comp.points()

    tail_count = len(x_points) ** (M - 1)
    w_set = set()
    for p in x_points:
        hits = sum(1 for t in zp_points if t[:n] == p)
        if hits == tail_count:
            w_set.add(p)

    sigma_pp = set()
    for tup in _product_points(sorted(sigma), M):
        if _flatten(tup) in zpp_points:
            sigma_pp.add(tup[0])
    rest = sorted(sigma - sigma_pp)

    outside_w = [p for p in rest if p not in w_set]
    if outside_w:
        pivot = outside_w[0]
        slice_comps = []
        for comp in dominant:
            s = _slice_first(comp, n, pivot)
            if s is not None:
                slice_comps.append(s)
        z1 = model(q, n * (M - 1), slice_comps)
        return _nogaalon_recurse(x_comp, x_points, M - 1, z1, sigma)

    # every remaining sigma point has a full fiber: cut X at a tail where
    # the dominant part is proper, and add the witnessed hulls of the rest
    hull_comps = []
    for comp in other:
        witnessed = sorted(
            {
                tup[0]
                for tup in _product_points(sorted(sigma), M)
                if _flatten(tup) in comp.points()
            }
        )
        if witnessed:
            hull_comps.append(affine_hull(q, n, witnessed))
    best = None
    for tail in itertools.product(x_points, repeat=M - 1):
        flat_tail = _flatten(tail)
        cut_comps = []
        for comp in dominant:
            s = _slice_last(comp, n, flat_tail)
            if s is not None:
                cut_comps.append(s)
        candidate = model(q, n, cut_comps + hull_comps)
        cand_pts = candidate.points()
        if len(cand_pts) >= len(x_points):
            continue
        if best is None or len(cand_pts) < len(best[1]):
            best = (candidate, cand_pts)
            if not cand_pts:
                break
    if best is not None:
        return best[0]
    # over a tiny field every slice cut may still exhaust X pointwise; the
    # trapped points themselves are all that must be kept, so cover them
    # directly (hull first, singletons as a last resort)
    fallbacks = [hull_comps] if not rest else [
        [affine_hull(q, n, rest)] + hull_comps,
        [affine_point(q, n, p) for p in rest] + hull_comps,
    ]
    for comps in fallbacks:
        candidate = model(q, n, comps)
        if len(candidate.points()) < len(x_points):
            return candidate
    raise CertificateError(
        "the finite model cannot reproduce the irreducibility argument "
        "on this instance: every candidate cut exhausts X pointwise"
    )


def _compatible(z_points: frozenset[Point], n: int, M: int, S: list[Point], u: Point) -> bool:
    """(S + u)^M stays inside Z, checking only tuples that involve u."""
    pool = S + [u]
    for tup in itertools.product(pool, repeat=M):
        if u in tup and _flatten(tup) not in z_points:
            return False
    return True


def brute_force_minimal_cover(X: LinearVarietyModel, M: int, Z: LinearVarietyModel) -> list[dict]:
    """Exhaustive oracle: every maximal sigma with sigma^M inside Z, each
    with a minimal proper linear cover.  Test-scale only.
    """
    if not X.is_irreducible():
        raise InputError("X must be irreducible")
    x_comp = X.components[0]
    x_points = sorted(x_comp.points())
    if len(x_points) > BRUTE_FORCE_MAX_POINTS or M > BRUTE_FORCE_MAX_M:
        raise ResourceError("instance exceeds the brute-force budget")
    q, n = X.q, X.n
    z_points = Z.points()
    if len(z_points) >= len(x_points) ** M:
        raise InputError("Z must be a proper subvariety of X^M")
    universe = [p for p in x_points if _flatten((p,) * M) in z_points]

    maximal: list[tuple[Point, ...]] = []
    nodes = 0

    def extend(S: list[Point], candidates: list[Point], excluded: list[Point]):
        nonlocal nodes
        nodes += 1
        if nodes > MAX_ENUM_NODES:
            raise ResourceError("maximal-set enumeration budget exhausted")
        extendable = [u for u in candidates if _compatible(z_points, n, M, S, u)]
        if not extendable:
            if not any(_compatible(z_points, n, M, S, u) for u in excluded):
                maximal.append(tuple(S))
            return
        for idx, u in enumerate(extendable):
            extend(
                S + [u],
                extendable[idx + 1 :],
                excluded + extendable[:idx],
            )

    extend([], universe, [])
    if not maximal and not universe:
        maximal = [()]

    results = []
    for sig in sorted(set(maximal)):
        cover = _minimal_linear_cover(x_comp, x_points, list(sig)) if sig else model(q, n, [])
        results.append({"sigma": list(sig), "cover": cover})
    return results


def _proper_subspaces_through(x_comp: AffineSubspace, pts: list[Point]) -> list[AffineSubspace]:
    """All affine subspaces strictly inside X meeting the given point set,
    enumerated through X's internal coordinates."""
    q, k = x_comp.q, x_comp.dim
    seen = set()
    # enumerate direction subspaces of F_q^k of dim < k via RREF of row sets
    all_dirs: list[tuple[tuple[int, ...], ...]] = [()]
    if k >= 1:
        vectors = [v for v in itertools.product(range(q), repeat=k) if any(v)]
        for r in range(1, k):
            for combo in itertools.combinations(vectors, r):
                rr = _rref([list(v) for v in combo], q)
                if len(rr) != r:
                    continue
                key = tuple(tuple(x) for x in rr)
                if key not in seen:
                    seen.add(key)
                    all_dirs.append(key)
    # lift internal subspaces back to ambient coordinates
    ambient_rows = [list(r) for r in x_comp.rows]
    lifted = []
    for dirs in all_dirs:
        rows = []
        for d in dirs:
            vec = [0] * x_comp.n
            for c, row in zip(d, ambient_rows):
                if c:
                    vec = [(a + c * b) % q for a, b in zip(vec, row)]
            rows.append(vec)
        lifted.append(rows)
    uniq = []
    seen2 = set()
    for pt in pts:
        for rows in lifted:
            sub = subspace(q, x_comp.n, pt, rows)
            key = (sub.base, sub.rows)
            if key not in seen2:
                seen2.add(key)
                uniq.append(sub)
    return uniq


def _minimal_linear_cover(
    x_comp: AffineSubspace, x_points: list[Point], sigma: list[Point]
) -> LinearVarietyModel:
    """Smallest-count union of proper subspaces of X covering sigma."""
    q, n = x_comp.q, x_comp.n
    sigma_set = frozenset(sigma)
    candidates = _proper_subspaces_through(x_comp, sorted(sigma_set))
    traces: dict[frozenset, AffineSubspace] = {}
    for c in candidates:
        tr = frozenset(p for p in sigma_set if c.contains(p))
        if tr and (tr not in traces or c.dim < traces[tr].dim):
            traces[tr] = c
    trace_items = sorted(traces.items(), key=lambda kv: (-len(kv[0]), kv[1].base, kv[1].rows))

    best: list[AffineSubspace] | None = None

    def search(uncovered: frozenset, chosen: list[AffineSubspace]):
        nonlocal best
        if best is not None and len(chosen) >= len(best):
            return
        if not uncovered:
            best = list(chosen)
            return
        pivot = min(uncovered)
        for tr, sub in trace_items:
            if pivot in tr:
                search(uncovered - tr, chosen + [sub])

    search(sigma_set, [])
    if best is None:
        raise CertificateError("sigma admits no proper linear cover")
    return model(q, n, best)

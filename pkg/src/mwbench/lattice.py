"""Mordell-Weil lattices: a finite-rank group modulo torsion, seen through
its Neron-Tate Gram matrix.

Vectors are integer coordinate tuples in the generator basis; the quadratic
form v^T G v plays the squared norm.  Torsion is quotiented away: it enters
counting only as a multiplicative factor supplied by configuration.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .elliptic import ECPoint, EllipticCurveQ, canonical_height, nt_pairing
from .errors import InputError, ResourceError

PSD_SLACK = 1e-9
ENUMERATION_CAP = 5_000_000

LatticeVector = tuple[int, ...]


@dataclass(frozen=True)
class MWLattice:
    """rank generators with Gram matrix G_ij = <gamma_i, gamma_j>."""

    rank: int
    gram: tuple[tuple[float, ...], ...]
    source: str = "synthetic"

    def __post_init__(self):
        if self.rank < 0:
            raise InputError("rank must be nonnegative")
        gram = tuple(tuple(float(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        if len(gram) != self.rank or any(len(row) != self.rank for row in gram):
            raise InputError(f"Gram matrix must be {self.rank}x{self.rank}")
        for i in range(self.rank):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise InputError("Gram matrix must be symmetric")
        if self.rank and self.min_eigenvalue() < -PSD_SLACK:
            raise InputError(
                f"Gram matrix is not positive semidefinite "
                f"(min eigenvalue {self.min_eigenvalue():.3e})"
            )

    def matrix(self) -> np.ndarray:
        return np.array(self.gram, dtype=float).reshape(self.rank, self.rank)

    def min_eigenvalue(self) -> float:
        if self.rank == 0:
            return 0.0
        return float(np.linalg.eigvalsh(self.matrix()).min())

    def is_positive_definite(self) -> bool:
        if self.rank == 0:
            return True
        return self.min_eigenvalue() > PSD_SLACK

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "gram": [x for row in self.gram for x in row],
            "source": self.source,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MWLattice":
        rank = int(data["rank"])
        flat = [float(x) for x in data["gram"]]
        if len(flat) != rank * rank:
            raise InputError("row-major Gram data has wrong length")
        rows = tuple(tuple(flat[i * rank : (i + 1) * rank]) for i in range(rank))
        return cls(rank=rank, gram=rows, source=str(data.get("source", "synthetic")))


def _check_vector(lat: MWLattice, v: LatticeVector) -> LatticeVector:
    v = tuple(int(c) for c in v)
    if len(v) != lat.rank:
        raise InputError(f"vector length {len(v)} does not match rank {lat.rank}")
    return v


def height(lat: MWLattice, v: LatticeVector) -> float:
    """Quadratic form value v^T G v."""
    v = _check_vector(lat, v)
    total = 0.0
    for i, vi in enumerate(v):
        if vi == 0:
            continue
        row = lat.gram[i]
        for j, vj in enumerate(v):
            if vj:
                total += vi * vj * row[j]
    return total


def pairing(lat: MWLattice, v: LatticeVector, w: LatticeVector) -> float:
    v = _check_vector(lat, v)
    w = _check_vector(lat, w)
    total = 0.0
    for i, vi in enumerate(v):
        if vi == 0:
            continue
        row = lat.gram[i]
        for j, wj in enumerate(w):
            if wj:
                total += vi * wj * row[j]
    return total


def norm(lat: MWLattice, v: LatticeVector) -> float:
    return math.sqrt(max(height(lat, v), 0.0))


def cosine(lat: MWLattice, v: LatticeVector, w: LatticeVector) -> float:
    nv, nw = norm(lat, v), norm(lat, w)
    if nv == 0.0 or nw == 0.0:
        raise InputError("cosine requires two vectors of positive norm")
    c = pairing(lat, v, w) / (nv * nw)
    return max(-1.0, min(1.0, c))


def lattice_from_curve(
    curve: EllipticCurveQ,
    generators: list[ECPoint],
    tol: float = 1e-10,
) -> MWLattice:
    """Gram matrix filled from Neron-Tate pairings of the given generators.

    The generator list is definitive: no saturation or independence check
    is attempted.  A noticeably negative eigenvalue (below -10*tol) only
    warns, since it signals heights computed too loosely rather than bad
    input.
    """
    rank = len(generators)
    gram = [[0.0] * rank for _ in range(rank)]
    for i, gi in enumerate(generators):
        gram[i][i] = canonical_height(curve, gi, tol).value
        for j in range(i):
            val = nt_pairing(curve, gi, generators[j], tol)
            gram[i][j] = gram[j][i] = val
    lat = MWLattice(rank=rank, gram=tuple(tuple(row) for row in gram), source="curve-derived")
    if rank and lat.min_eigenvalue() < -10 * tol:
        warnings.warn(
            f"curve-derived Gram matrix has eigenvalue {lat.min_eigenvalue():.3e}; "
            f"heights may need a tighter tolerance",
            stacklevel=2,
        )
    return lat


def enumerate_ball(lat: MWLattice, radius: float) -> list[LatticeVector]:
    """All integer vectors with norm <= radius, in lexicographic order.

    Uses the ellipsoid bounding box |v_i| <= radius * sqrt((G^-1)_ii), so the
    Gram matrix must be positive definite.
    """
    if radius < 0:
        raise InputError("radius must be nonnegative")
    if lat.rank == 0:
        return [()]
    if not lat.is_positive_definite():
        raise InputError(
            "enumeration needs a positive definite Gram matrix "
            "(semidefinite forms have unbounded fibers)"
        )
    G = lat.matrix()
    inv_diag = np.diag(np.linalg.inv(G))
    bounds = [int(math.floor(radius * math.sqrt(max(d, 0.0)) + 1e-9)) for d in inv_diag]
    count = 1
    for b in bounds:
        count *= 2 * b + 1
        if count > ENUMERATION_CAP:
            raise ResourceError(
                f"coordinate box of {count}+ candidates exceeds the enumeration cap"
            )
    limit = radius * radius
    hits: list[LatticeVector] = []
    for cand in itertools.product(*[range(-b, b + 1) for b in bounds]):
        if height(lat, cand) <= limit:
            hits.append(cand)
    hits.sort()
    return hits

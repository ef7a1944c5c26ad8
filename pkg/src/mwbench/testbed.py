"""The product-of-two-curves testbed: enumerate group elements of bounded
canonical height on each factor and keep the pairs lying on the equal-x
correspondence, exactly.

The correspondence x(P) = x(Q) cuts a genuine curve in the product surface
and is decidable in exact rational arithmetic.  Its geometric degree is not
derivable inside this workbench; it is a configuration input and every
report flags it as such.  Declared subgroup-translate relations (e.g. the
diagonal when both factors coincide) are filtered out of the counted set.
"""

from __future__ import annotations

import math

from .config import CurveSpec, WorkbenchConfig
from .counting import HeightedPointSet, IsolationOracle, build_constant_ledger, run_pipeline
from .elliptic import ECPoint, INFINITY, add, multiply
from .errors import InputError, ResourceError
from .lattice import MWLattice, enumerate_ball, lattice_from_curve


def _combination(spec: CurveSpec, coords) -> ECPoint:
    total = INFINITY
    for n, gen in zip(coords, spec.generators):
        if n:
            total = add(spec.curve, total, multiply(spec.curve, gen, n))
    return total


def _matches_filter(filt: dict, v, w) -> bool:
    a = int(filt.get("n_coeff", 1))
    b = int(filt.get("m_coeff", 1))
    av = tuple(a * c for c in v)
    bw = tuple(b * c for c in w)
    return av == bw


def enumerate_testbed(config: WorkbenchConfig) -> dict:
    tb = config.testbed
    if tb is None:
        raise InputError("no testbed configured")
    spec1 = config.curves[tb["curve1"]]
    spec2 = config.curves[tb["curve2"]]
    if not spec1.generators or not spec2.generators:
        raise InputError("both testbed curves need at least one generator")
    tol = float(config.pipeline["tol"])
    lat1 = lattice_from_curve(spec1.curve, spec1.generators, tol)
    lat2 = lattice_from_curve(spec2.curve, spec2.generators, tol)
    bound = float(tb["height_bound"])
    radius = math.sqrt(bound)
    side1 = enumerate_ball(lat1, radius)
    side2 = enumerate_ball(lat2, radius)
    combos = len(side1) * len(side2)
    if combos > int(tb["max_combinations"]):
        raise ResourceError(
            f"height box yields {combos} lattice combinations, over the cap "
            f"{tb['max_combinations']}"
        )

    points1 = {v: _combination(spec1, v) for v in side1}
    points2 = {w: _combination(spec2, w) for w in side2}
    filters = list(tb.get("coset_filters", []))

    pairs = []
    excluded = []
    for v in side1:
        P = points1[v]
        if P.is_infinity:
            continue
        for w in side2:
            Q = points2[w]
            if Q.is_infinity:
                continue
            if P.x != Q.x:
                continue
            record = {
                "coords1": list(v),
                "coords2": list(w),
                "point1": {"x": str(P.x), "y": str(P.y)},
                "point2": {"x": str(Q.x), "y": str(Q.y)},
            }
            if any(_matches_filter(f, v, w) for f in filters):
                excluded.append(record)
            else:
                pairs.append(record)

    rank = lat1.rank + lat2.rank
    rank_cap = int(config.pipeline.get("rank_cap", 12))
    if rank > rank_cap:
        raise InputError(f"product lattice rank {rank} exceeds the configured cap {rank_cap}")
    gram = [[0.0] * rank for _ in range(rank)]
    for i in range(lat1.rank):
        for j in range(lat1.rank):
            gram[i][j] = lat1.gram[i][j]
    for i in range(lat2.rank):
        for j in range(lat2.rank):
            gram[lat1.rank + i][lat1.rank + j] = lat2.gram[i][j]
    product_lattice = MWLattice(rank=rank, gram=tuple(tuple(row) for row in gram), source="curve-derived")

    counted = [tuple(rec["coords1"]) + tuple(rec["coords2"]) for rec in pairs]
    point_set = HeightedPointSet(product_lattice, counted, IsolationOracle("distinct"))
    ledger = build_constant_ledger(
        g=int(config.variety["g"]),
        r=int(config.variety["r"]),
        d=int(config.variety["d"]),
        l=int(config.variety["l"]),
        rank=rank,
        h_fal_proxy=float(config.constants["h_fal_proxy"]),
        c4=float(config.constants["c4"]),
        c5=float(config.constants["c5"]),
        c0=float(config.constants["c0"]),
        c_prime=float(config.constants["c_prime"]),
    )
    pipeline_report = run_pipeline(
        point_set, ledger, membership_mode=str(config.pipeline["membership_mode"])
    )

    return {
        "curve1": tb["curve1"],
        "curve2": tb["curve2"],
        "relation": tb["relation"],
        "height_bound": bound,
        "combinations": combos,
        "pairs": pairs,
        "coset_excluded": excluded,
        "empirical_count": len(pairs),
        "certified_bound": pipeline_report["certified_bound"],
        "deg_x": tb["deg_x"],
        "deg_x_source": "config-placeholder",
        "pipeline": pipeline_report,
        "ledger": ledger.to_json(),
    }

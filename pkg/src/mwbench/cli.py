"""Command-line front end.

Subcommands: height, lattice, pack, degrees, ledger, pipeline, cover,
testbed.  Reports are JSON on stdout, deterministic byte-for-byte for a
fixed config and seed.  Exit codes: 0 ok, 2 input error, 3 certificate
failure, 4 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys

from . import counting, degrees, linear_model, packing
from .config import WorkbenchConfig
from .elliptic import INFINITY, HeightValue, canonical_height, is_torsion, point
from .errors import EXIT_OK, InputError, WorkbenchError
from .lattice import enumerate_ball
from .testbed import enumerate_testbed


def _load_config(args) -> WorkbenchConfig:
    if args.config:
        return WorkbenchConfig.load(args.config)
    return WorkbenchConfig.default()


def _get_curve(config, label):
    if label not in config.curves:
        raise InputError(f"unknown curve label {label!r}")
    return config.curves[label]


def _get_lattice(config, label):
    if label not in config.lattices:
        raise InputError(f"unknown lattice label {label!r}")
    return config.lattices[label]


def cmd_height(args) -> dict:
    config = _load_config(args)
    spec = _get_curve(config, args.curve)
    if args.infinity:
        P = INFINITY
    else:
        if args.x is None or args.y is None:
            raise InputError("provide --x and --y, or --infinity")
        P = point(args.x, args.y)
    tol = args.tol if args.tol is not None else float(config.pipeline["tol"])
    hv = canonical_height(spec.curve, P, tol)
    scale = float(config.constants.get("height_scale", 1.0))
    scaled = HeightValue(hv.value * scale, hv.error_bound * scale).as_strings()
    return {
        "curve": args.curve,
        "point": "O" if P.is_infinity else {"x": str(P.x), "y": str(P.y)},
        "tol": tol,
        "height": scaled,
        "height_scale": scale,
        "torsion": is_torsion(spec.curve, P, n_max=int(config.pipeline["torsion_n_max"]), tol=tol),
    }


def cmd_lattice(args) -> dict:
    config = _load_config(args)
    lat = _get_lattice(config, args.label)
    out = {
        "label": args.label,
        "lattice": lat.to_json(),
        "min_eigenvalue": lat.min_eigenvalue(),
        "positive_definite": lat.is_positive_definite(),
    }
    if args.radius is not None:
        vectors = enumerate_ball(lat, args.radius)
        out["radius"] = args.radius
        out["vectors"] = [list(v) for v in vectors]
        out["count"] = len(vectors)
    return out


def cmd_pack(args) -> dict:
    config = _load_config(args)
    lat = _get_lattice(config, args.label)
    c4 = args.c4 if args.c4 is not None else float(config.constants["c4"])
    points = enumerate_ball(lat, args.big_radius)
    ball = packing.greedy_ball_cover(lat, points, args.big_radius, args.small_radius)
    cover = packing.build_cone_cover(lat, c4)
    return {
        "label": args.label,
        "point_count": len(points),
        "ball_cover": ball.to_json(),
        "cone_cover": cover.to_json(),
    }


def cmd_degrees(args) -> dict:
    config = _load_config(args)
    var = config.variety
    g, r, d, l = (int(var[key]) for key in ("g", "r", "d", "l"))
    k = args.k if args.k is not None else g
    return {
        "invariants": {"g": g, "r": r, "d": d, "l": l, "k": k},
        "entries": degrees.ledger_records(g, r, d, l, k),
    }


def _build_ledger(config, rank=None):
    var = config.variety
    return counting.build_constant_ledger(
        g=int(var["g"]),
        r=int(var["r"]),
        d=int(var["d"]),
        l=int(var["l"]),
        rank=int(rank if rank is not None else var.get("rank", 1)),
        h_fal_proxy=float(config.constants["h_fal_proxy"]),
        c4=float(config.constants["c4"]),
        c5=float(config.constants["c5"]),
        c0=float(config.constants["c0"]),
        c_prime=float(config.constants["c_prime"]),
    )


def cmd_ledger(args) -> dict:
    config = _load_config(args)
    ledger = _build_ledger(config, rank=args.rank)
    counting.final_count_certificate(ledger)
    return {"ledger": ledger.to_json()}


def cmd_pipeline(args) -> dict:
    config = _load_config(args)
    c4 = float(config.constants["c4"])
    ledger = _build_ledger(config, rank=1)
    n_prime = int(ledger.value("n_prime"))
    count = args.count if args.count is not None else 12
    threshold = float(config.constants["c5"]) * max(1.0, float(config.constants["h_fal_proxy"]))
    base = int(threshold**0.5) + 1
    point_set = counting.make_gap_compliant_sequence(c4, n_prime, int(ledger.value("g")), count, base_norm=base)
    small = [(-1,), (0,), (1,)]
    merged = counting.HeightedPointSet(
        point_set.lattice,
        small + point_set.points,
        counting.IsolationOracle("always-true"),
    )
    report = counting.run_pipeline(
        merged, ledger, membership_mode=str(config.pipeline["membership_mode"])
    )
    return {
        "inputs": report["inputs"],
        "ledger": ledger.to_json(),
        "per_step": report["step_log"],
        "empirical_count": report["empirical_count"],
        "certified_bound": report["certified_bound"],
        "verdict": report["verdict"],
    }


def cmd_cover(args) -> dict:
    rng = random.Random(args.seed)
    q = args.q
    # pinned instance: the q+1 lines through the origin of F_q^2
    lines = [linear_model.subspace(q, 2, (0, 0), [(1, a)]) for a in range(q)]
    lines.append(linear_model.subspace(q, 2, (0, 0), [(0, 1)]))
    family = linear_model.SubspaceFamily(tuple(lines))
    pinning = linear_model.chow_pinning(family, seed=0)

    # covering instance: diagonal inside the square of a line
    X = linear_model.model(q, 2, [linear_model.subspace(q, 2, (0, 0), [(1, 1)])])
    diag_rows = [(1, 1, 1, 1)]
    Z = linear_model.model(q, 4, [linear_model.subspace(q, 4, (0, 0, 0, 0), diag_rows)])
    sigma_point = sorted(X.points())[rng.randrange(len(X.points()))]
    cover = linear_model.nogaalon_cover(X, 2, Z, {sigma_point})
    return {
        "pinning": {
            "family_size": len(family.members),
            "points": [list(p) for p in pinning["points"]],
            "survivors": pinning["survivors"],
        },
        "cover": {
            "q": q,
            "sigma": [list(sigma_point)],
            "result": cover.to_json(),
            "degree_bound": degrees.nogaalon_degree_bound(2, X.dim, X.degree, Z.degree),
        },
        "seed": args.seed,
    }


def cmd_testbed(args) -> dict:
    config = _load_config(args)
    result = enumerate_testbed(config)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["coords1", "coords2", "x", "y1", "y2"])
            for rec in result["pairs"]:
                writer.writerow(
                    [
                        " ".join(map(str, rec["coords1"])),
                        " ".join(map(str, rec["coords2"])),
                        rec["point1"]["x"],
                        rec["point1"]["y"],
                        rec["point2"]["y"],
                    ]
                )
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwbench",
        description="workbench for canonical heights, lattice packing certificates, "
        "degree calculus, counting pipelines, and covering procedures",
    )
    parser.add_argument("--config", help="TOML or JSON config file (built-in default otherwise)")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized demo data")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("height", help="canonical height of a configured curve point")
    p.add_argument("--curve", required=True)
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--infinity", action="store_true")
    p.add_argument("--tol", type=float)
    p.set_defaults(handler=cmd_height)

    p = sub.add_parser("lattice", help="inspect a configured lattice")
    p.add_argument("--label", required=True)
    p.add_argument("--radius", type=float)
    p.set_defaults(handler=cmd_lattice)

    p = sub.add_parser("pack", help="ball-cover and cone-cover certificates")
    p.add_argument("--label", required=True)
    p.add_argument("--big-radius", type=float, required=True)
    p.add_argument("--small-radius", type=float, required=True)
    p.add_argument("--c4", type=float)
    p.set_defaults(handler=cmd_pack)

    p = sub.add_parser("degrees", help="degree calculus on the configured invariants")
    p.add_argument("--k", type=int)
    p.set_defaults(handler=cmd_degrees)

    p = sub.add_parser("ledger", help="full constant ledger with provenance")
    p.add_argument("--rank", type=int, default=1)
    p.set_defaults(handler=cmd_ledger)

    p = sub.add_parser("pipeline", help="counting pipeline on synthetic compliant data")
    p.add_argument("--count", type=int)
    p.set_defaults(handler=cmd_pipeline)

    p = sub.add_parser("cover", help="covering procedures on a finite linear model")
    p.add_argument("--q", type=int, default=3)
    p.set_defaults(handler=cmd_cover)

    p = sub.add_parser("testbed", help="enumerate the equal-x correspondence testbed")
    p.add_argument("--csv", help="also write the matched pairs as CSV to this path")
    p.set_defaults(handler=cmd_testbed)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
    except WorkbenchError as exc:
        print(json.dumps({"error": str(exc), "kind": type(exc).__name__}, sort_keys=True))
        return exc.exit_code
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

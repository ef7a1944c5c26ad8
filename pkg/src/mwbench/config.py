"""Workbench configuration: curves, lattices, numeric invariants, base
constants, and the testbed description.

Accepted on disk as TOML or JSON (decided by file extension, with a JSON
fallback for unsuffixed paths).  Curve data ships as an example config;
heights and torsion statuses are always recomputed, never read from disk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .elliptic import ECPoint, EllipticCurveQ, INFINITY, point, validate_on_curve
from .errors import InputError
from .lattice import MWLattice

DEFAULT_CONFIG: dict = {
    "constants": {
        "c4": 100.0,
        "c5": 1.0e6,
        "c0": 1.0e3,
        "c_prime": 1.0e3,
        "h_fal_proxy": 1.0,
        "height_scale": 1.0,
    },
    "pipeline": {
        "tol": 1.0e-10,
        "membership_mode": "translated-point",
        "rank_cap": 12,
        "torsion_n_max": 16,
    },
    "variety": {"g": 2, "r": 1, "d": 4, "l": 8},
    "curves": [
        {
            "label": "m2",
            "a4": "0",
            "a6": "-2",
            "generators": [["3", "5"]],
            "extra_points": [],
        },
        {
            "label": "p9",
            "a4": "0",
            "a6": "9",
            "generators": [["3", "6"]],
            "extra_points": [],
        },
        {
            "label": "t25",
            "a4": "-25",
            "a6": "0",
            "generators": [["-4", "6"]],
            "extra_points": [["0", "0"], ["5", "0"], ["-5", "0"]],
        },
        {
            "label": "p1",
            "a4": "0",
            "a6": "1",
            "generators": [],
            "extra_points": [["2", "3"], ["0", "1"], ["-1", "0"]],
        },
        {
            "label": "r2",
            "a4": "-7",
            "a6": "10",
            "generators": [["1", "2"], ["2", "2"]],
            "extra_points": [],
        },
    ],
    "lattices": [
        {"label": "hex", "rank": 2, "gram": [2.0, 1.0, 1.0, 2.0]},
        {"label": "unit3", "rank": 3, "gram": [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]},
    ],
    "testbed": {
        "curve1": "m2",
        "curve2": "p9",
        "height_bound": 6.0,
        "relation": "equal-x",
        "deg_x": 4,
        "coset_filters": [],
        "max_combinations": 10000,
    },
}


@dataclass
class CurveSpec:
    label: str
    curve: EllipticCurveQ
    generators: list[ECPoint]
    extra_points: list[ECPoint] = field(default_factory=list)


@dataclass
class WorkbenchConfig:
    constants: dict
    pipeline: dict
    variety: dict
    curves: dict[str, CurveSpec]
    lattices: dict[str, MWLattice]
    testbed: dict | None

    @classmethod
    def from_dict(cls, raw: dict) -> "WorkbenchConfig":
        merged_constants = {**DEFAULT_CONFIG["constants"], **raw.get("constants", {})}
        merged_pipeline = {**DEFAULT_CONFIG["pipeline"], **raw.get("pipeline", {})}
        variety = {**DEFAULT_CONFIG["variety"], **raw.get("variety", {})}
        for name in ("c4", "c5", "c0", "c_prime"):
            value = merged_constants.get(name)
            if not isinstance(value, (int, float)) or value <= 0:
                raise InputError(f"constant {name} must be positive, got {value!r}")
        if merged_constants["c4"] <= 1:
            raise InputError("c4 must be > 1")
        if merged_pipeline.get("tol", 0) <= 0:
            raise InputError("pipeline tol must be positive")

        curves: dict[str, CurveSpec] = {}
        for entry in raw.get("curves", []):
            label = str(entry.get("label", ""))
            if not label:
                raise InputError("every curve needs a label")
            if label in curves:
                raise InputError(f"duplicate curve label {label!r}")
            curve = EllipticCurveQ(entry["a4"], entry["a6"])
            gens = [_parse_point(p) for p in entry.get("generators", [])]
            extras = [_parse_point(p) for p in entry.get("extra_points", [])]
            for p in gens + extras:
                validate_on_curve(curve, p)
            curves[label] = CurveSpec(label, curve, gens, extras)

        lattices: dict[str, MWLattice] = {}
        for entry in raw.get("lattices", []):
            label = str(entry.get("label", ""))
            if not label:
                raise InputError("every lattice needs a label")
            if label in lattices:
                raise InputError(f"duplicate lattice label {label!r}")
            lattices[label] = MWLattice.from_json(entry)

        testbed = raw.get("testbed")
        if testbed is not None:
            testbed = {**DEFAULT_CONFIG["testbed"], **testbed}
            for key in ("curve1", "curve2"):
                if testbed[key] not in curves:
                    raise InputError(f"testbed {key} = {testbed[key]!r} is not a configured curve")
            if testbed["relation"] != "equal-x":
                raise InputError(f"unsupported testbed relation {testbed['relation']!r}")
            if testbed["height_bound"] < 0:
                raise InputError("testbed height bound must be nonnegative")
        return cls(
            constants=merged_constants,
            pipeline=merged_pipeline,
            variety=variety,
            curves=curves,
            lattices=lattices,
            testbed=testbed,
        )

    @classmethod
    def default(cls) -> "WorkbenchConfig":
        return cls.from_dict(DEFAULT_CONFIG)

    @classmethod
    def load(cls, path: str | Path) -> "WorkbenchConfig":
        path = Path(path)
        if not path.exists():
            raise InputError(f"config file {path} does not exist")
        data = path.read_bytes()
        if path.suffix.lower() == ".toml":
            raw = tomllib.loads(data.decode("utf-8"))
        elif path.suffix.lower() == ".json":
            raw = json.loads(data.decode("utf-8"))
        else:
            try:
                raw = json.loads(data.decode("utf-8"))
            except json.JSONDecodeError:
                raw = tomllib.loads(data.decode("utf-8"))
        if not isinstance(raw, dict):
            raise InputError("config root must be a table/object")
        return cls.from_dict(raw)


def _parse_point(entry) -> ECPoint:
    if entry in ("O", "infinity", None):
        return INFINITY
    if isinstance(entry, dict):
        return point(entry["x"], entry["y"])
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return point(entry[0], entry[1])
    raise InputError(f"cannot parse point {entry!r}; use [x, y] strings or 'O'")

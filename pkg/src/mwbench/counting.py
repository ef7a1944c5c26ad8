"""Executable counting automaton over concrete height data: growth and
angle predicates, the gap-principle audit, the explicit constant ledger,
and the composed certificate pipeline.

The two height inequalities (a growth condition along chains of nearly
parallel points, and a near-equal-norm condition for tuples isolated in a
difference-map fiber) are exercised here as predicates with explicit
constants, never proved.  Constants with no closed form anywhere (c4, c5,
the per-ball cap c0, the recursion stand-in c_prime) are configuration
inputs with documented defaults; every derived output is conditional on
them.  Ledger derivations are deterministic: rebuilding from the same
inputs reproduces every entry bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .degrees import LogTerm, VarietyInvariants, generated_subvariety_lemma_bound
from .errors import CertificateError, InputError
from .lattice import LatticeVector, MWLattice, cosine, height, norm
from .packing import assign_to_cone, build_cone_cover, greedy_ball_cover

DEFAULT_C4 = 100.0
DEFAULT_C5 = 1e6
DEFAULT_C0 = 1e3
DEFAULT_C_PRIME = 1e3


class IsolationOracle:
    """Total boolean oracle on index tuples: 'always-true', 'always-false',
    'distinct' (true iff the queried indices are pairwise distinct), or an
    explicit mapping."""

    MODES = ("always-true", "always-false", "distinct")

    def __init__(self, mode="distinct", table: dict | None = None):
        if table is not None:
            self.mode = "table"
            self.table = {tuple(k): bool(v) for k, v in table.items()}
        elif mode in self.MODES:
            self.mode = mode
            self.table = None
        else:
            raise InputError(f"unknown oracle mode {mode!r}")

    def query(self, indices: tuple[int, ...]) -> bool:
        if self.mode == "always-true":
            return True
        if self.mode == "always-false":
            return False
        if self.mode == "distinct":
            return len(set(indices)) == len(indices)
        if tuple(indices) not in self.table:
            raise InputError(f"isolation oracle is not total: missing {tuple(indices)}")
        return self.table[tuple(indices)]


@dataclass
class HeightedPointSet:
    """A finite point set in a Mordell-Weil lattice plus isolation data."""

    lattice: MWLattice
    points: list[LatticeVector]
    isolation_oracle: IsolationOracle = field(default_factory=IsolationOracle)

    def __post_init__(self):
        pts = [tuple(int(c) for c in p) for p in self.points]
        if len(set(pts)) != len(pts):
            raise InputError("points must be pairwise distinct")
        for p in pts:
            if len(p) != self.lattice.rank:
                raise InputError("point dimension does not match lattice rank")
        self.points = pts

    def norm_of(self, index: int) -> float:
        return norm(self.lattice, self.points[index])


def _check_indices(point_set: HeightedPointSet, indices) -> list[int]:
    out = []
    for i in indices:
        i = int(i)
        if not 0 <= i < len(point_set.points):
            raise InputError(f"point index {i} out of range")
        out.append(i)
    return out


def vojta_hypotheses(point_set: HeightedPointSet, indices: list[int], c4: float) -> bool:
    """Both chain conditions on consecutive pairs: cosine at least 1 - 1/c4
    and norm growth by a factor of at least c4."""
    if c4 <= 1:
        raise InputError("c4 must be > 1")
    idx = _check_indices(point_set, indices)
    lat = point_set.lattice
    for a, b in zip(idx, idx[1:]):
        va, vb = point_set.points[a], point_set.points[b]
        na, nb = norm(lat, va), norm(lat, vb)
        if nb < c4 * na:
            return False
        if na > 0 and nb > 0 and cosine(lat, va, vb) < 1.0 - 1.0 / c4:
            return False
    return True


def mumford_hypotheses(
    point_set: HeightedPointSet, i0: int, others: list[int], c4: float
) -> bool:
    """Near-parallel, near-equal-norm conditions against a base point, plus
    the fiber-isolation oracle on the full tuple.  Boundaries inclusive."""
    if c4 <= 1:
        raise InputError("c4 must be > 1")
    (i0,) = _check_indices(point_set, [i0])
    others = _check_indices(point_set, others)
    if not point_set.isolation_oracle.query((i0, *others)):
        return False
    lat = point_set.lattice
    v0 = point_set.points[i0]
    n0 = norm(lat, v0)
    for i in others:
        vi = point_set.points[i]
        ni = norm(lat, vi)
        if abs(n0 - ni) > (1.0 / c4) * n0:
            return False
        if n0 > 0 and ni > 0 and cosine(lat, v0, vi) < 1.0 - 1.0 / c4:
            return False
    return True


def growth_exponent(c4) -> int:
    """Smallest M >= 0 with (1 + 1/c4)^M >= c4, decided in exact rational
    arithmetic so minimality is never a float accident."""
    c4 = Fraction(c4)
    if c4 <= 1:
        raise InputError("c4 must be > 1")
    ratio = 1 + 1 / c4
    acc = Fraction(1)
    m = 0
    while acc < c4:
        acc *= ratio
        m += 1
    return m


def gap_sequence_audit(
    point_set: HeightedPointSet,
    cone_points: list[int],
    c4: float,
    nprime: int,
    g: int,
) -> dict:
    """Audit the gap-principle growth chain on one cone's points.

    cone_points must be sorted by nondecreasing norm and pairwise satisfy
    the in-cone angle condition.  Growth is checked one stride at a time
    (norm[j + nprime] > (1 + 1/c4) * norm[j]); longer strides follow by
    composition, so a violation list of stride-1 indices is complete.
    """
    if c4 <= 1:
        raise InputError("c4 must be > 1")
    if nprime < 1 or g < 1:
        raise InputError("nprime and g must be >= 1")
    idx = _check_indices(point_set, cone_points)
    lat = point_set.lattice
    norms = [norm(lat, point_set.points[i]) for i in idx]
    for a, b in zip(norms, norms[1:]):
        if b < a:
            raise InputError("cone points must be sorted by nondecreasing norm")
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            va, vb = point_set.points[idx[i]], point_set.points[idx[j]]
            if norms[i] > 0 and norms[j] > 0 and cosine(lat, va, vb) < 1.0 - 1.0 / c4:
                raise InputError(
                    f"cone points {idx[i]} and {idx[j]} violate the in-cone angle condition"
                )
    m = growth_exponent(c4)
    factor = 1 + 1 / Fraction(c4)
    violations = [
        j
        for j in range(len(norms) - nprime)
        if Fraction(norms[j + nprime]) <= factor * Fraction(norms[j])
    ]
    return {"M": m, "claimed_max_run": g * m * nprime, "violations": violations}


def integer_root_ceil(value: int, k: int) -> int:
    """Smallest integer c with c^k >= value (value >= 0, k >= 1)."""
    if value < 0 or k < 1:
        raise InputError("need value >= 0 and k >= 1")
    if value in (0, 1):
        return value
    c = round(value ** (1.0 / k))
    while c**k >= value:
        c -= 1
    while c**k < value:
        c += 1
    return c


@dataclass
class LedgerEntry:
    name: str
    value: object  # int | Fraction | float | LogTerm
    rule: str
    parents: tuple[str, ...] = ()

    def json_value(self):
        v = self.value
        if isinstance(v, LogTerm):
            return v.to_json()
        if isinstance(v, Fraction):
            return str(v)
        return v


class ConstantLedger:
    """Named constants with exact values and a derivation DAG.

    Entries are stored in insertion order; every derivation is a pure
    function of the inputs, so rebuilding reproduces the ledger verbatim.
    """

    def __init__(self, inputs: dict):
        self.inputs = dict(inputs)
        self.entries: dict[str, LedgerEntry] = {}

    def add(self, name: str, value, rule: str, parents=()) -> None:
        self.entries[name] = LedgerEntry(name, value, rule, tuple(parents))

    def has(self, name: str) -> bool:
        return name in self.entries

    def value(self, name: str):
        if name not in self.entries:
            raise InputError(f"ledger is missing entry {name!r}")
        return self.entries[name].value

    def numeric(self, name: str) -> float:
        v = self.value(name)
        if isinstance(v, LogTerm):
            return v.value()
        return float(v)

    def to_json(self) -> dict:
        return {
            "inputs": {k: _json_scalar(v) for k, v in self.inputs.items()},
            "entries": [
                {
                    "name": e.name,
                    "value": e.json_value(),
                    "lemma_tag": e.rule,
                    "parents": list(e.parents),
                }
                for e in self.entries.values()
            ],
        }


def _json_scalar(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, LogTerm):
        return v.to_json()
    return v


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(float(x))  # exact binary value of the float


def _as_int_if_integral(x: Fraction):
    return int(x) if x.denominator == 1 else x


def build_constant_ledger(
    g: int,
    r: int,
    d: int,
    l: int,
    rank: int,
    h_fal_proxy: float = 1.0,
    c4: float = DEFAULT_C4,
    c5: float = DEFAULT_C5,
    c0: float = DEFAULT_C0,
    c_prime: float = DEFAULT_C_PRIME,
    overrides: dict | None = None,
    h_x_proxy: float | None = None,
) -> ConstantLedger:
    """Derive the full constant chain from the numeric invariants and the
    four base constants.  Entries named c6..c11 and the two run thresholds
    follow the staged counting argument; any of n_prime, c7, c8, c9, c10
    may be overridden by configuration."""
    VarietyInvariants(g=g, r=r, d=d, l=l)
    if rank < 0:
        raise InputError("rank must be nonnegative")
    if c4 <= 1:
        raise InputError("c4 must be > 1")
    for name, val in (("c5", c5), ("c0", c0), ("c_prime", c_prime)):
        if val <= 0:
            raise InputError(f"{name} must be positive")
    overrides = dict(overrides or {})
    unknown = set(overrides) - {"n_prime", "c7", "c8", "c9", "c10"}
    if unknown:
        raise InputError(f"unknown ledger overrides: {sorted(unknown)}")

    led = ConstantLedger(
        {
            "g": g,
            "r": r,
            "d": d,
            "l": l,
            "rank": rank,
            "h_fal_proxy": h_fal_proxy,
            "c4": c4,
            "c5": c5,
            "c0": c0,
            "c_prime": c_prime,
            "h_x_proxy": h_x_proxy,
            "overrides": {k: _json_scalar(_exact(v)) for k, v in overrides.items()},
        }
    )
    fact = math.factorial(g)
    n0 = l // fact
    for name, value in (("g", g), ("r", r), ("d", d), ("l", l), ("rank", rank)):
        led.add(name, value, "config-input")
    led.add("h_fal_proxy", _exact(h_fal_proxy), "config-input")
    led.add("c4", _exact(c4), "config-input")
    led.add("c5", _exact(c5), "config-input")
    led.add("c0", _exact(c0), "config-input")
    led.add("c_prime", _exact(c_prime), "config-input")
    if h_x_proxy is not None:
        led.add("h_x_proxy", _exact(h_x_proxy), "config-input")

    if n0 >= 2:
        led.add("n_embed", n0 - 1, "embedding-dimension", ("g", "l"))
    led.add("deg_u0", n0, "isogeny-transport", ("g", "l"))
    led.add("deg_u", n0 ** (2 * g - 1), "isogeny-transport", ("g", "l"))
    led.add("d_prime_bound", d * n0 ** (2 * g - 1), "isogeny-transport", ("g", "d", "l"))
    led.add(
        "faltings_shift",
        LogTerm(Fraction(1, 2), Fraction(n0)),
        "isogeny-transport",
        ("g", "l"),
    )

    hf = max(Fraction(1), _exact(h_fal_proxy))
    led.add("c_nt_bound", _exact(c_prime) * hf, "norm-comparison-constant", ("c_prime", "h_fal_proxy"))
    led.add("h1_bound", _exact(c_prime) * hf, "norm-comparison-constant", ("c_prime", "h_fal_proxy"))

    m = growth_exponent(c4)
    led.add("M", m, "gap-exponent", ("c4",))

    if "n_prime" in overrides:
        n_prime = int(overrides["n_prime"])
    else:
        exact_np = Fraction(d) ** (2 * g) * _exact(c_prime) ** (rank + 1) + 1
        n_prime = int(math.ceil(exact_np))
    led.add("n_prime", n_prime, "run-length-threshold", ("d", "g", "c_prime", "rank"))

    cone_factor = (1.0 + math.sqrt(8.0 * c4)) ** rank
    lpb = int(math.ceil(cone_factor * (g * m * n_prime)))
    led.add("large_point_bound", lpb, "large-point-bound", ("c4", "rank", "g", "M", "n_prime"))
    led.add("c6", integer_root_ceil(lpb, rank + 1), "large-point-root", ("large_point_bound", "rank"))

    if "c7" in overrides:
        c7 = _exact(overrides["c7"])
    else:
        c7 = Fraction(l * d * d, fact) * _exact(c_prime)
    c7 = _as_int_if_integral(Fraction(c7))
    led.add("c7", c7, "height-removal-threshold", ("l", "d", "g", "c_prime"))
    n2 = Fraction(c7) ** (rank + 1) + 1
    led.add("n_double_prime", _as_int_if_integral(n2), "height-removal-run-threshold", ("c7", "rank"))

    prefactor = (Fraction(l, fact) + 1) ** (r + 1) * d
    led.add("height_removal_prefactor", prefactor, "height-removal-prefactor", ("g", "r", "d", "l"))
    log_term = 3.0 * math.log(n0) if n0 > 1 else 0.0
    c11 = float(prefactor) * (1.0 + float(c_prime) + log_term)
    led.add("c11", c11, "height-comparison-merge", ("height_removal_prefactor", "c_prime"))

    c8 = _exact(overrides["c8"]) if "c8" in overrides else math.sqrt(float(c5) * c11)
    led.add("c8", c8, "shrunk-ball-constant", ("c5", "c11"))
    c9 = _exact(overrides["c9"]) if "c9" in overrides else float(c5) * (c11 + 1.0)
    led.add("c9", c9, "small-height-constant", ("c5", "c11"))
    c10 = _exact(overrides["c10"]) if "c10" in overrides else led.value("c6")
    led.add("c10", c10, "translated-large-point-constant", ("c6",))

    led.add(
        "mumford_alternative_degree",
        d ** (2 * r),
        "difference-fiber-degree (proof-traceable value; the union total is left implicit upstream)",
        ("d", "r"),
    )
    led.add(
        "generated_degree_bound",
        generated_subvariety_lemma_bound(g, max(r, 1), d),
        "generated-degree-bound (proof-derived, not stated in closed form)",
        ("g", "r", "d"),
    )
    return led


def large_point_bound(ledger: ConstantLedger) -> int:
    """Cone count times the per-cone run bound, rounded up; also the source
    of the ledger's c6 entry (its (rank+1)-th root, rounded up)."""
    for needed in ("c4", "rank", "g", "M", "n_prime"):
        if not ledger.has(needed):
            raise InputError(f"ledger is missing {needed!r}")
    c4 = float(ledger.numeric("c4"))
    rank = int(ledger.value("rank"))
    g = int(ledger.value("g"))
    m = int(ledger.value("M"))
    n_prime = int(ledger.value("n_prime"))
    return int(math.ceil((1.0 + math.sqrt(8.0 * c4)) ** rank * (g * m * n_prime)))


def height_X_removal_bound(
    g: int, r: int, d: int, l: int, maxpoint_height: float, ledger: ConstantLedger | None = None
) -> float:
    """(l/g! + 1)^(r+1) * d * (max height + 3 log(l/g!)), exact prefactor."""
    VarietyInvariants(g=g, r=r, d=d, l=l)
    n0 = l // math.factorial(g)
    prefactor = (Fraction(l, math.factorial(g)) + 1) ** (r + 1) * d
    log_term = 3.0 * math.log(n0) if n0 > 1 else 0.0
    bound = float(prefactor) * (float(maxpoint_height) + log_term)
    if ledger is not None:
        ledger.add(
            "height_removal_bound", bound, "height-removal-bound", ("height_removal_prefactor",)
        )
    return bound


def merge_gap_constants(c1p, c3p, c3pp) -> dict:
    """c1 = min(c3'' / max(1, 2 c3'/c1'), c1'/2), exact in rationals."""
    c1p, c3p, c3pp = _exact(c1p), _exact(c3p), _exact(c3pp)
    if c1p <= 0 or c3p <= 0 or c3pp <= 0:
        raise InputError("merge constants must be positive")
    c1 = min(c3pp / max(Fraction(1), 2 * c3p / c1p), c1p / 2)
    return {"c1": c1}


def merge_gap_claim_check(c1p, c3p, c3pp, h_fal, hhat) -> bool:
    """The two-threshold merge, restated as pure arithmetic: whenever a
    height clears both partial thresholds it clears the merged one.  All
    comparisons are exact, so this returns True on every real instance."""
    c1p, c3p, c3pp = _exact(c1p), _exact(c3p), _exact(c3pp)
    if c1p <= 0 or c3p <= 0 or c3pp <= 0:
        raise InputError("merge constants must be positive")
    h_fal, hhat = _exact(h_fal), _exact(hhat)
    c1 = merge_gap_constants(c1p, c3p, c3pp)["c1"]
    max_h = max(Fraction(1), h_fal)
    premise = hhat > c1p * max_h - c3p and hhat > c3pp
    if not premise:
        return True
    return hhat > c1 * max_h


def final_count_certificate(ledger: ConstantLedger) -> dict:
    """Merge the staged constants into the final one:

        c = 2 max{ (c7+1)(8 c8 + 1), c0, 1 + 2 sqrt(2 c9 c0), c10 }

    and the certified count bound c^(rank+1).  Also records the two
    branch thresholds of the dichotomy feeding the merge.  Monotone in
    every input constant and in the rank."""
    for needed in ("c7", "c8", "c9", "c10", "c0", "rank", "n_double_prime"):
        if not ledger.has(needed):
            raise InputError(f"ledger is missing {needed!r}")
    rank = int(ledger.value("rank"))
    c7 = ledger.numeric("c7")
    c8 = ledger.numeric("c8")
    c9 = ledger.numeric("c9")
    c10 = ledger.numeric("c10")
    c0 = ledger.numeric("c0")
    n2 = ledger.numeric("n_double_prime")

    run_branch = n2 * (8 * c8 + 1) ** rank + c10 ** (rank + 1)
    pack_branch = c0 * (1 + 2 * math.sqrt(2 * c9 * c0)) ** rank + c10 ** (rank + 1)
    c_final = 2 * max((c7 + 1) * (8 * c8 + 1), c0, 1 + 2 * math.sqrt(2 * c9 * c0), c10)
    bound = c_final ** (rank + 1)
    ledger.add("step3_run_branch", run_branch, "dichotomy-run-branch", ("n_double_prime", "c8", "c10"))
    ledger.add("step3_pack_branch", pack_branch, "dichotomy-pack-branch", ("c0", "c9", "c10"))
    ledger.add("c_final", c_final, "final-merge", ("c7", "c8", "c9", "c10", "c0"))
    ledger.add("count_bound", bound, "final-bound", ("c_final", "rank"))
    return {"c_final": c_final, "bound": bound}


def hyp_pack_induction(g: int, d: int, rank: int, base_constants: dict) -> ConstantLedger:
    """Per-dimension constant chain for the packing hypothesis.

    base_constants supplies the dimension-0 count constant under key 'r0'
    and per-dimension pairs c1/c2 (scalars apply to every dimension).  One
    step reads: c3 = (max(c2, previous))^3, c0 = max(c1, c3).  The chain
    ends with the generated-subgroup degree bound and the squaring step
    that removes the generation hypothesis."""
    if g < 1 or d < 1 or rank < 0:
        raise InputError("need g >= 1, d >= 1, rank >= 0")
    if "r0" not in base_constants:
        raise InputError("base_constants must supply the dimension-0 constant 'r0'")

    def per_dim(key: str, dim: int):
        val = base_constants.get(key)
        if val is None:
            raise InputError(f"base_constants must supply {key!r}")
        if isinstance(val, dict):
            if dim not in val:
                raise InputError(f"base_constants[{key!r}] has no value for dimension {dim}")
            return _exact(val[dim])
        return _exact(val)

    led = ConstantLedger(
        {
            "g": g,
            "d": d,
            "rank": rank,
            "base_constants": {
                k: (_json_scalar(_exact(v)) if not isinstance(v, dict) else {i: _json_scalar(_exact(x)) for i, x in v.items()})
                for k, v in base_constants.items()
            },
        }
    )
    current = _exact(base_constants["r0"])
    led.add("pack_constant_dim0", current, "induction-base")
    for dim in range(1, g + 1):
        c1 = per_dim("c1", dim)
        c2 = per_dim("c2", dim)
        led.add(f"c1_dim{dim}", c1, "config-input")
        led.add(f"c2_dim{dim}", c2, "config-input")
        c3 = max(c2, current) ** 3
        led.add(
            f"c3_dim{dim}",
            c3,
            "induction-cube",
            (f"c2_dim{dim}", f"pack_constant_dim{dim - 1}"),
        )
        current = max(c1, c3)
        led.add(
            f"pack_constant_dim{dim}",
            current,
            "induction-max",
            (f"c1_dim{dim}", f"c3_dim{dim}"),
        )
    led.add(
        "generated_degree_bound",
        generated_subvariety_lemma_bound(g, g, d),
        "generated-degree-bound (proof-derived, not stated in closed form)",
        ("g", "d"),
    )
    led.add("pack_constant", current, "induction-result", (f"pack_constant_dim{g}",))
    led.add("final_constant_squared", current * current, "generation-squaring", ("pack_constant",))
    return led


def _ball_groups(lat, points, centers, radius):
    groups = [[] for _ in centers]
    for p in points:
        for i, c in enumerate(centers):
            diff = tuple(a - b for a, b in zip(p, c))
            if math.sqrt(max(height(lat, diff), 0.0)) <= radius:
                groups[i].append(p)
                break
    return groups


def _minimal_isolation_radius(lat, points, cap: float) -> float:
    """Smallest distance value v such that some base point sees at most cap
    other points strictly beyond v (search over the finite set only)."""
    best = None
    for q in points:
        dists = sorted(
            (
                math.sqrt(max(height(lat, tuple(a - b for a, b in zip(p, q))), 0.0))
                for p in points
            ),
            reverse=True,
        )
        k = int(cap)
        v = 0.0 if k >= len(dists) else dists[k]
        if best is None or v < best:
            best = v
    return 0.0 if best is None else best


def run_pipeline(
    point_set: HeightedPointSet,
    ledger: ConstantLedger,
    membership_mode: str = "translated-point",
    basepoint: LatticeVector | None = None,
) -> dict:
    """Compose the staged counting argument on concrete data.

    Points are split at the large-height threshold; large points are
    partitioned into cones and audited for the gap principle, small points
    are covered greedily by balls with a per-ball cap.  Every intermediate
    count is logged against its certified bound; any excess raises a
    certificate failure.  The final bound is the merged constant to the
    power rank+1.

    membership_mode selects which object is listed for each counted point:
    'translated-point' (the difference against the basepoint; default) or
    'original-point'.  The count itself is identical either way.
    """
    if membership_mode not in ("translated-point", "original-point"):
        raise InputError(f"unknown membership mode {membership_mode!r}")
    lat = point_set.lattice
    rank = int(ledger.value("rank"))
    if lat.rank != rank:
        raise InputError(f"lattice rank {lat.rank} does not match ledger rank {rank}")
    g = int(ledger.value("g"))
    c4 = float(ledger.numeric("c4"))
    c5 = float(ledger.numeric("c5"))
    c0 = float(ledger.numeric("c0"))
    n_prime = int(ledger.value("n_prime"))
    h_fal = max(1.0, float(ledger.numeric("h_fal_proxy")))

    if basepoint is None:
        basepoint = tuple([0] * lat.rank)
    basepoint = tuple(int(c) for c in basepoint)
    translated = [tuple(a - b for a, b in zip(p, basepoint)) for p in point_set.points]

    step_log: list[dict] = []

    def log(name: str, empirical, bound, tag: str):
        step_log.append(
            {"name": name, "empirical": empirical, "bound": bound, "lemma_tag": tag}
        )

    threshold = c5 * h_fal
    large = [v for v in translated if height(lat, v) >= threshold]
    small = [v for v in translated if height(lat, v) < threshold]

    m = int(ledger.value("M"))
    run_bound = g * m * n_prime
    if large:
        aux = HeightedPointSet(lat, large, point_set.isolation_oracle)
        cover = build_cone_cover(lat, c4)
        cones: dict[int, list[int]] = {}
        for i, v in enumerate(large):
            cones.setdefault(assign_to_cone(cover, lat, v), []).append(i)
        log("cone-cover", len(cones), cover.bound, "cone-cover-count")
        for cone_idx in sorted(cones):
            members = sorted(
                cones[cone_idx], key=lambda i: (norm(lat, large[i]), large[i])
            )
            audit = gap_sequence_audit(aux, members, c4, n_prime, g)
            if audit["violations"]:
                raise CertificateError(
                    f"gap-principle violations in cone {cone_idx} at strides "
                    f"{audit['violations']}"
                )
            if len(members) >= run_bound:
                raise CertificateError(
                    f"cone {cone_idx} holds {len(members)} large points, "
                    f"certified run bound is {run_bound}"
                )
            log(f"cone-{cone_idx}-run", len(members), run_bound, "per-cone-run-bound")
        lpb = large_point_bound(ledger)
        if len(large) > lpb:
            raise CertificateError(
                f"{len(large)} large points exceed the certified bound {lpb}"
            )
        log("large-points", len(large), lpb, "large-point-bound")
    else:
        log("large-points", 0, large_point_bound(ledger) if rank >= 0 else 0, "large-point-bound")

    if small:
        R = math.sqrt(threshold)
        r0 = math.sqrt(h_fal / c0)
        cert = greedy_ball_cover(lat, small, R, r0)
        log("ball-cover", len(cert.centers), cert.bound, "ball-cover-count")
        groups = _ball_groups(lat, small, cert.centers, r0)
        worst = max(len(grp) for grp in groups)
        if worst > c0:
            raise CertificateError(
                f"a small-point ball holds {worst} points, above the per-ball cap {c0:g}"
            )
        log("ball-occupancy", worst, c0, "per-ball-cap")
        c10 = ledger.numeric("c10")
        c9 = ledger.numeric("c9")
        c12 = _minimal_isolation_radius(lat, small, c10 ** (rank + 1))
        ledger.add("c12", c12, "minimal-isolation-radius (data-dependent)", ("c10", "rank"))
        log(
            "isolation-radius-check",
            c12 * c12,
            2 * c9 * h_fal,
            "shrunk-ball-threshold (informational)",
        )
    else:
        log("ball-cover", 0, 1, "ball-cover-count")

    cert = final_count_certificate(ledger)
    empirical = len(point_set.points)
    if empirical > cert["bound"]:
        raise CertificateError(
            f"empirical count {empirical} exceeds certified bound {cert['bound']}"
        )
    log("total", empirical, cert["bound"], "final-bound")
    listed = translated if membership_mode == "translated-point" else point_set.points
    return {
        "inputs": {
            "point_count": empirical,
            "membership_mode": membership_mode,
            "basepoint": list(basepoint),
            "rank": rank,
        },
        "empirical_count": empirical,
        "certified_bound": cert["bound"],
        "counted_points": [list(v) for v in listed],
        "step_log": step_log,
        "verdict": "ok",
    }


def _gap_norms(c4, nprime: int, count: int, violate_at: set[int], base_norm: int) -> list[int]:
    """Strictly increasing integer norms; the stride condition
    norm[j + nprime] > (1 + 1/c4) * norm[j] holds exactly everywhere except
    at the requested stride indices, where it fails exactly."""
    ratio = 1 + 1 / Fraction(c4)
    norms: list[int] = []
    for j in range(count):
        # wide default spacing keeps room under the cap at violated strides
        lo = norms[-1] + 4 if norms else base_norm
        if j >= nprime:
            ref = Fraction(norms[j - nprime])
            if j - nprime in violate_at:
                hi = math.floor(ref * ratio)
                if norms[-1] + 1 > hi:
                    raise InputError(
                        f"violation at stride index {j - nprime} is infeasible; "
                        f"space violations at least {nprime} apart or raise base_norm"
                    )
                norms.append(max(norms[-1] + 1, hi))
                continue
            lo = max(lo, math.floor(ref * ratio) + 1)
        norms.append(lo)
    return norms


def make_gap_compliant_sequence(
    c4: float, nprime: int, g: int, count: int, base_norm: int = 1000
) -> HeightedPointSet:
    """Synthetic rank-1 data honoring the gap principle: strictly increasing
    integer norms with norm[j + nprime] > (1 + 1/c4) * norm[j]."""
    if count >= g * growth_exponent(c4) * nprime:
        raise InputError("a compliant run must stay below the run bound")
    norms = _gap_norms(c4, nprime, count, set(), base_norm)
    lat = MWLattice(rank=1, gram=((1.0,),))
    return HeightedPointSet(lat, [(v,) for v in norms], IsolationOracle("always-true"))


def make_gap_violating_sequence(
    c4: float, nprime: int, g: int, count: int, violate_at: list[int], base_norm: int = 1000
) -> HeightedPointSet:
    """Same construction, but the growth step is deliberately capped at the
    given stride indices, so the audit must flag exactly those."""
    vset = set(int(j) for j in violate_at)
    for j in vset:
        if not 0 <= j < count - nprime:
            raise InputError(f"violation index {j} out of range")
    norms = _gap_norms(c4, nprime, count, vset, base_norm)
    lat = MWLattice(rank=1, gram=((1.0,),))
    return HeightedPointSet(lat, [(v,) for v in norms], IsolationOracle("always-true"))

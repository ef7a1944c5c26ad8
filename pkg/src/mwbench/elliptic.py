"""Exact short-Weierstrass arithmetic over Q and canonical heights.

Curves are y^2 = x^3 + a4*x + a6 with rational coefficients; points carry
exact rational coordinates.  The canonical height is the limit of
h([2^k]P) / 4^k, where h is the logarithmic height of the x-coordinate in
lowest terms.  Point doubling quadruples coordinate sizes, so the limit is
driven in two phases:

* an exact phase with full rational reduction, which also detects torsion
  (the doubling orbit of a torsion point revisits an x-coordinate);
* a tracked phase that carries the numerator/denominator pair as
  high-precision floating mantissas for magnitudes plus exact residues
  modulo a power of a fixed resultant for the gcd cancellation.  The gcd
  removed at each doubling divides 256*(4*A^3 + 27*B^2)^2, so residues
  modulo a power of that constant recover it exactly.

All group-law arithmetic is exact; only height values are floating, and
they carry an explicit error radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath as mp

from .errors import DiagnosticError, InputError, ResourceError

DEFAULT_TOL = 1e-10
TORSION_TAU = 1e-8
TORSION_N_MAX = 16

# Tate-limit budgets.  The mantissa budget absorbs cancellation losses in
# the duplication forms; the step cap bounds the residue modulus.
TATE_PRECISION_BITS = 4096
TATE_MAX_STEPS = 60
EXACT_PHASE_BITS = 768


def to_fraction(value) -> Fraction:
    """Parse exact rationals from int/str/Fraction ('3/4' and '0.25' both work)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not an exact rational: {value!r}") from exc
    if isinstance(value, float):
        raise InputError(
            f"refusing float {value!r} for exact curve data; pass a string or Fraction"
        )
    raise InputError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class EllipticCurveQ:
    """y^2 = x^3 + a4*x + a6 over Q, nonsingular."""

    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a4", to_fraction(self.a4))
        object.__setattr__(self, "a6", to_fraction(self.a6))
        if self.discriminant() == 0:
            raise InputError(
                f"singular curve: discriminant of y^2 = x^3 + ({self.a4})x + ({self.a6}) is 0"
            )

    def discriminant(self) -> Fraction:
        return -16 * (4 * self.a4**3 + 27 * self.a6**2)

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return y * y == x**3 + self.a4 * x + self.a6

    def __str__(self):
        return f"y^2 = x^3 + ({self.a4})*x + ({self.a6})"


@dataclass(frozen=True)
class ECPoint:
    """A rational point: either the point at infinity or exact (x, y)."""

    x: Fraction | None = None
    y: Fraction | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = ECPoint()


def point(x, y) -> ECPoint:
    return ECPoint(to_fraction(x), to_fraction(y))


def validate_on_curve(curve: EllipticCurveQ, P: ECPoint) -> None:
    if P.is_infinity:
        return
    if not curve.contains(P.x, P.y):
        raise InputError(f"point {P} is not on {curve}")


def negate(P: ECPoint) -> ECPoint:
    if P.is_infinity:
        return INFINITY
    return ECPoint(P.x, -P.y)


def add(curve: EllipticCurveQ, P: ECPoint, Q: ECPoint) -> ECPoint:
    """Chord-tangent addition, exact rational arithmetic."""
    validate_on_curve(curve, P)
    validate_on_curve(curve, Q)
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return INFINITY
        # doubling; P.y == Q.y != 0 here
        slope = (3 * P.x * P.x + curve.a4) / (2 * P.y)
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope * slope - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return ECPoint(x3, y3)


def subtract(curve: EllipticCurveQ, P: ECPoint, Q: ECPoint) -> ECPoint:
    return add(curve, P, negate(Q))


def multiply(curve: EllipticCurveQ, P: ECPoint, n: int) -> ECPoint:
    """[n]P by double-and-add."""
    validate_on_curve(curve, P)
    if n < 0:
        return multiply(curve, negate(P), -n)
    result = INFINITY
    addend = P
    while n:
        if n & 1:
            result = add(curve, result, addend)
        addend = add(curve, addend, addend)
        n >>= 1
    return result


@dataclass(frozen=True)
class HeightValue:
    """A nonnegative height with an explicit error radius."""

    value: float
    error_bound: float

    def __post_init__(self):
        if self.value < 0 or self.error_bound < 0:
            raise InputError("height values and error radii are nonnegative")

    def as_strings(self) -> dict:
        return {"value": repr(self.value), "error_radius": repr(self.error_bound)}


def naive_height(P: ECPoint) -> HeightValue:
    """log max(|num x|, |den x|); the height of O is 0 by convention."""
    if P.is_infinity:
        return HeightValue(0.0, 0.0)
    num, den = abs(P.x.numerator), P.x.denominator
    return HeightValue(math.log(max(num, den, 1)), 0.0)


def _integral_model(curve: EllipticCurveQ) -> tuple[int, int, int]:
    """Rescale x -> m^2 x so coefficients become integers; returns (A, B, m)."""
    m = math.lcm(curve.a4.denominator, curve.a6.denominator)
    A = curve.a4 * m**4
    B = curve.a6 * m**6
    return int(A), int(B), m


def _dup_forms(A: int, B: int, p, q):
    """Numerator/denominator forms of the x-coordinate duplication map."""
    f = p**4 - 2 * A * p**2 * q**2 - 8 * B * p * q**3 + A**2 * q**4
    g = 4 * (p**3 * q + A * p * q**3 + B * q**4)
    return f, g


class _TateLimit:
    """Drives h([2^k]P)/4^k for one point on an integral model."""

    def __init__(self, A: int, B: int, x0: Fraction, precision_bits: int, max_steps: int):
        self.A, self.B = A, B
        self.max_steps = max_steps
        self.precision_bits = precision_bits
        disc_core = 4 * A**3 + 27 * B**2
        self.resultant = 256 * disc_core**2
        # a priori envelope for |h(2Q) - 4 h(Q)|: the observed increments can
        # sit at zero for many steps (tiny starting coordinates), so the tail
        # estimate must never trust observation alone.  Upper side: coefficient
        # sums of the duplication forms.  Lower side: the cancellation is
        # bounded through the resultant and the cofactor sizes, dominated
        # generously by twice its log.
        coef_f = 1 + 2 * abs(A) + 8 * abs(B) + A * A
        coef_g = 4 * (1 + abs(A) + abs(B))
        self.envelope_floor = (
            2.0 * math.log(self.resultant + 2) + 2.0 * math.log(coef_f + coef_g + 2) + 8.0
        )
        self.p = x0.numerator
        self.q = x0.denominator
        self.heights: list[float] = []
        self.increment_sup = 0.0  # observed sup of |h(2Q) - 4 h(Q)|
        self.lost_bits = 0.0

    def run(self, tol: float) -> tuple[float, float, bool]:
        """Returns (limit value, geometric tail bound, is_exact_zero)."""
        p, q = self.p, self.q
        if q < 0:
            p, q = -p, -q
        seen = set()
        step = 0
        # exact phase: full reduction while coordinates stay small; a repeated
        # x-coordinate means the doubling orbit is finite, i.e. torsion
        while max(abs(p), q).bit_length() <= EXACT_PHASE_BITS:
            if (p, q) in seen:
                return 0.0, 0.0, True
            seen.add((p, q))
            self._record(math.log(max(abs(p), q)))
            if self._converged(tol):
                return self._finish(tol)
            f, g = _dup_forms(self.A, self.B, p, q)
            if g == 0:
                return 0.0, 0.0, True  # x is a 2-division value
            d = math.gcd(f, g)
            p, q = f // d, g // d
            if q < 0:
                p, q = -p, -q
            step += 1
            if step >= self.max_steps:
                return self._overflow(tol)
        return self._tracked_phase(p, q, tol)

    def _tracked_phase(self, p: int, q: int, tol: float):
        budget = self.max_steps - len(self.heights) + 4
        modulus = self.resultant**budget
        pr, qr = p % modulus, q % modulus
        with mp.workprec(self.precision_bits):
            pf, qf = mp.mpf(p), mp.mpf(q)
            while len(self.heights) < self.max_steps:
                mag = max(abs(pf), abs(qf))
                self._record(float(mp.log(mag)))
                if self._converged(tol):
                    return self._finish(tol)
                a = (
                    pr**4
                    - 2 * self.A * pr**2 * qr**2
                    - 8 * self.B * pr * qr**3
                    + self.A**2 * qr**4
                ) % modulus
                b = (4 * (pr**3 * qr + self.A * pr * qr**3 + self.B * qr**4)) % modulus
                d = math.gcd(math.gcd(a, b), self.resultant)
                ff, gf = _dup_forms(self.A, self.B, pf, qf)
                if gf == 0:
                    return 0.0, 0.0, True
                modulus //= d
                pr, qr = (a // d) % modulus, (b // d) % modulus
                pf, qf = ff / d, gf / d
                # cancellation in the forms plus the removed gcd eats mantissa
                new_mag = max(abs(pf), abs(qf))
                if new_mag > 0 and mag > 1:
                    self.lost_bits += max(0.0, 4 * float(mp.log(mag, 2)) - float(mp.log(new_mag, 2)))
                if self.lost_bits > self.precision_bits / 2:
                    return self._overflow(tol)
        return self._overflow(tol)

    def _record(self, h: float) -> None:
        k = len(self.heights)
        if k >= 1:
            self.increment_sup = max(self.increment_sup, abs(h - 4 * self.heights[-1]))
        self.heights.append(h)

    def _values(self):
        return [h / 4**k for k, h in enumerate(self.heights)]

    def _envelope(self) -> float:
        return max(self.increment_sup, self.envelope_floor)

    def _converged(self, tol: float) -> bool:
        # successive iterates below tol is not enough on its own: later
        # increments can still ride the geometric envelope, so the envelope
        # tail must be negligible too
        vals = self._values()
        if len(vals) < 2 or abs(vals[-1] - vals[-2]) >= tol:
            return False
        k = len(vals) - 1
        return self._envelope() / (3 * 4**k) < tol / 4

    def _finish(self, tol: float):
        vals = self._values()
        k = len(vals) - 1
        tail = self._envelope() / (3 * 4**k)
        return vals[-1], tail, False

    def _overflow(self, tol: float):
        vals = self._values()
        partial = HeightValue(max(vals[-1], 0.0) if vals else 0.0, float("inf"))
        raise ResourceError(
            f"Tate limit did not converge to {tol} within the configured budget "
            f"({self.max_steps} doublings, {self.precision_bits} mantissa bits)",
            partial=partial,
        )


def canonical_height(
    curve: EllipticCurveQ,
    P: ECPoint,
    tol: float = DEFAULT_TOL,
    precision_bits: int = TATE_PRECISION_BITS,
    max_steps: int = TATE_MAX_STEPS,
) -> HeightValue:
    """Canonical height via the doubling limit h([2^k]P)/4^k.

    Stops at the first k whose successive iterates differ by less than tol;
    the reported error radius is tol plus a geometric tail derived from the
    observed doubling increments (plus the bounded shift from the internal
    integral rescaling).
    """
    validate_on_curve(curve, P)
    if tol <= 0:
        raise InputError("tol must be positive")
    if P.is_infinity:
        return HeightValue(0.0, 0.0)
    A, B, m = _integral_model(curve)
    limit = _TateLimit(A, B, P.x * m * m, precision_bits, max_steps)
    value, tail, exact_zero = limit.run(tol)
    if exact_zero:
        return HeightValue(0.0, 0.0)
    k = len(limit.heights) - 1
    rescale = 2 * math.log(m) / 4**k if m > 1 else 0.0
    return HeightValue(max(value, 0.0), tol + tail + rescale)


def nt_pairing(
    curve: EllipticCurveQ, P: ECPoint, Q: ECPoint, tol: float = DEFAULT_TOL
) -> float:
    """(hhat(P+Q) - hhat(P) - hhat(Q)) / 2; symmetric and bilinear."""
    s = canonical_height(curve, add(curve, P, Q), tol)
    hp = canonical_height(curve, P, tol)
    hq = canonical_height(curve, Q, tol)
    return (s.value - hp.value - hq.value) / 2


def is_torsion(
    curve: EllipticCurveQ,
    P: ECPoint,
    n_max: int = TORSION_N_MAX,
    tau: float = TORSION_TAU,
    tol: float = DEFAULT_TOL,
) -> bool:
    """True iff [n]P = O for some n <= n_max, cross-checked against hhat(P) < tau.

    The two criteria must agree; a mismatch signals a tolerance set too
    loose and raises a diagnostic error rather than guessing.
    """
    validate_on_curve(curve, P)
    if P.is_infinity:
        return True
    by_multiples = False
    R = P
    for _ in range(n_max):
        R = add(curve, R, P)
        if R.is_infinity:
            by_multiples = True
            break
    by_height = canonical_height(curve, P, tol).value < tau
    if by_multiples != by_height:
        raise DiagnosticError(
            f"torsion criteria disagree for {P}: multiples up to {n_max} say "
            f"{by_multiples}, height threshold {tau} says {by_height}"
        )
    return by_multiples


def estimate_c_nt(
    curve: EllipticCurveQ, points: Iterable[ECPoint], tol: float = DEFAULT_TOL
) -> float:
    """Empirical sup of |hhat(P) - h(P)| over the sample (a lower estimate
    of the uniform comparison constant between the two heights)."""
    sup = 0.0
    for P in points:
        if P.is_infinity:
            continue
        hhat = canonical_height(curve, P, tol).value
        h = naive_height(P).value
        sup = max(sup, abs(hhat - h))
    return sup

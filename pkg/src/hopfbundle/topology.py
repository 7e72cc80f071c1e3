"""Topological examples: a free but non-proper R-action on the plane, the Cantor
encoding, the suspension model of the Hopf bundle and the Heegaard splitting.

The plane action is the unit-speed flow of v(x, y) = (cos x, sin x).  Vertical
lines x = pi/2 + k pi are orbits (special orbits); every other orbit is a
translate of y = -log|cos x| inside one strip and accumulates on both
neighbouring special orbits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

T_MAX = 50.0
SPECIAL_TOL = 1e-12
ORBIT_TOL = 1e-8
UNIT_TOL = 1e-12
HEEGAARD_TOL = 1e-9
HALF_PI = math.pi / 2
LOG2 = math.log(2.0)


class DomainError(ValueError):
    """Group parameter outside the supported range |t| <= 50."""


class NotSameOrbitError(ValueError):
    pass


class PoleError(ZeroDivisionError):
    pass


class MembershipError(ValueError):
    pass


# --- the flow on R^2 -------------------------------------------------------------

@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("plane points need finite coordinates")


def _check_t(t: float) -> None:
    if not abs(t) <= T_MAX:
        raise DomainError(f"|t| must be <= {T_MAX}, got {t!r}")


def special_index(x: float) -> int | None:
    """k with x = pi/2 + k pi (within 1e-12), or None for a regular orbit."""
    k = round((x - HALF_PI) / math.pi)
    if abs(x - (HALF_PI + k * math.pi)) <= SPECIAL_TOL:
        return k
    return None


def _strip(x: float) -> tuple[int, float]:
    """(k, x') with x = x' + k pi and x' in [-pi/2, pi/2)."""
    k = math.floor((x + HALF_PI) / math.pi)
    return k, x - k * math.pi


def _gd(u: float) -> float:
    # arcsin(tanh u) without cancellation for large |u|
    return 2.0 * math.atan(math.tanh(u / 2.0))


def g0(x: float, t: float) -> float:
    """(e^t(1+sin x) - e^-t(1-sin x)) / (e^t(1+sin x) + e^-t(1-sin x))."""
    _check_t(t)
    k = special_index(x)
    if k is not None:
        return 1.0 if k % 2 == 0 else -1.0
    _, xr = _strip(x)
    s = math.asinh(math.tan(xr))  # = atanh(sin x') on the principal strip
    k, _ = _strip(x)
    return math.tanh(t + s) if k % 2 == 0 else math.tanh(t - s)


def g(x: float, t: float) -> float:
    """First coordinate of (x, y) moved by t."""
    _check_t(t)
    if t == 0 or special_index(x) is not None:
        return x
    k, xr = _strip(x)
    s = math.asinh(math.tan(xr))
    if k % 2 == 0:
        return _gd(t + s) + k * math.pi
    # sin x = -sin x' on odd strips; g = pi - arcsin g0 + (k - 1) pi
    return math.pi - _gd(t - s) + (k - 1) * math.pi


def _log1p_sin(x: float) -> float:
    # log(1 + sin x) = log 2 + 2 log|cos(pi/4 - x/2)|
    c = abs(math.cos(math.pi / 4 - x / 2))
    return -math.inf if c == 0.0 else LOG2 + 2.0 * math.log(c)


def _log1m_sin(x: float) -> float:
    s = abs(math.sin(math.pi / 4 - x / 2))
    return -math.inf if s == 0.0 else LOG2 + 2.0 * math.log(s)


def g_tilde(x: float, t: float) -> float:
    """log((e^t(1+sin x) + e^-t(1-sin x)) / 2)."""
    _check_t(t)
    if t == 0:
        return 0.0
    k = special_index(x)
    if k is not None:
        return t if k % 2 == 0 else -t
    return float(np.logaddexp(t + _log1p_sin(x), -t + _log1m_sin(x))) - LOG2


def flow(p: PlanePoint, t: float) -> PlanePoint:
    return PlanePoint(g(p.x, t), p.y + g_tilde(p.x, t))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


@dataclass
class GroupLawVerdict:
    max_dev_g: float
    max_dev_gtilde: float
    samples: int
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.max_dev_g <= self.tol and self.max_dev_gtilde <= self.tol


def group_law_check(p: PlanePoint | Sequence, t=None, t2=None, tol: float = 1e-9) -> GroupLawVerdict:
    """g(g(x,t),t') = g(x,t+t') and g~(x,t) + g~(g(x,t),t') = g~(x,t+t').

    Accepts one sample ``(p, t, t2)`` or a sequence of such triples.
    """
    samples = [(p, t, t2)] if t is not None else list(p)
    dg = dgt = 0.0
    for q, a, b in samples:
        x = q.x
        ga = g(x, a)
        dg = max(dg, _rel(g(ga, b), g(x, a + b)))
        dgt = max(dgt, _rel(g_tilde(x, a) + g_tilde(ga, b), g_tilde(x, a + b)))
    return GroupLawVerdict(dg, dgt, len(samples), tol)


def translation_time_candidates(p: PlanePoint, q: PlanePoint) -> tuple[float, float]:
    """The two closed forms y'-y+log((1+sin x')/(1+sin x)) and y-y'+log((1-sin x)/(1-sin x'))."""
    with np.errstate(all="ignore"):
        t1 = q.y - p.y + (_log1p_sin(q.x) - _log1p_sin(p.x))
        t2 = p.y - q.y + (_log1m_sin(p.x) - _log1m_sin(q.x))
    return t1, t2


def translation_time(p: PlanePoint, q: PlanePoint, tol: float = ORBIT_TOL) -> float:
    """The unique t with flow(p, t) = q."""
    t1, t2 = translation_time_candidates(p, q)
    # use the expression whose logarithms are furthest from a pole
    plus = min(_log1p_sin(p.x), _log1p_sin(q.x))
    minus = min(_log1m_sin(p.x), _log1m_sin(q.x))
    t = t1 if plus >= minus else t2
    if not math.isfinite(t) or abs(t) > T_MAX:
        raise NotSameOrbitError("points are not on one orbit within the supported range")
    r = flow(p, t)
    if abs(r.x - q.x) > tol * max(1.0, abs(q.x)) or abs(r.y - q.y) > tol * max(1.0, abs(q.y)):
        raise NotSameOrbitError(f"flow(p, {t!r}) = {r} does not reach {q}")
    return t


@dataclass
class WitnessReport:
    pairs: list[dict]
    limit: dict
    all_same_orbit: bool
    monotone_divergence: bool

    @property
    def passed(self) -> bool:
        return self.all_same_orbit and self.monotone_divergence and self.limit["distinct_special_orbits"]

    def to_json(self) -> dict:
        return {
            "pairs": self.pairs,
            "limit": self.limit,
            "all_same_orbit": self.all_same_orbit,
            "monotone_divergence": self.monotone_divergence,
            "passed": self.passed,
        }


def witness_pair(n: int) -> tuple[PlanePoint, PlanePoint]:
    return PlanePoint(1.0 / n - HALF_PI, 0.0), PlanePoint(HALF_PI - 1.0 / n, 0.0)


def nonproperness_witness(n_max: int) -> WitnessReport:
    """Pairs on one regular orbit converging to a pair on two different special orbits."""
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    pairs = []
    ok = True
    times = []
    for n in range(3, n_max + 1):
        p, q = witness_pair(n)
        try:
            t = translation_time(p, q)
            same = True
        except NotSameOrbitError:
            t, same = None, False
        ok = ok and same
        expected = math.log((1 + math.cos(1.0 / n)) / (1 - math.cos(1.0 / n)))
        pairs.append({"n": n, "x": p.x, "x_prime": q.x, "same_orbit": same, "time": t, "closed_form": expected})
        times.append(abs(t) if t is not None else math.nan)
    mono = all(b > a for a, b in zip(times, times[1:]))
    lp, lq = PlanePoint(-HALF_PI, 0.0), PlanePoint(HALF_PI, 0.0)
    kp, kq = special_index(lp.x), special_index(lq.x)
    try:
        translation_time(lp, lq)
        limit_same = True
    except NotSameOrbitError:
        limit_same = False
    limit = {
        "p": [lp.x, lp.y],
        "q": [lq.x, lq.y],
        "special_index": [kp, kq],
        "x_difference": lq.x - lp.x,
        "same_orbit": limit_same,
        "distinct_special_orbits": kp is not None and kq is not None and kp != kq and not limit_same,
    }
    return WitnessReport(pairs, limit, ok, mono)


def orbit_samples(n_orbits: int, t_lo: float, t_hi: float, n_t: int = 200, seed=None):
    """Rows (orbit_id, x, y) tracing orbits through evenly spaced starting x in (-3pi/2, 3pi/2)."""
    _check_t(t_lo)
    _check_t(t_hi)
    rows = []
    xs = -1.5 * math.pi + (np.arange(n_orbits) + 0.5) * (3 * math.pi / n_orbits)
    ts = np.linspace(t_lo, t_hi, n_t)
    for i, x in enumerate(xs):
        p = PlanePoint(float(x), 0.0)
        for t in ts:
            q = flow(p, float(t))
            rows.append((i, q.x, q.y))
    return rows


# --- Cantor group -------------------------------------------------------------------

_ENCODE = {0: 1, 2: -1}
_DECODE = {1: 0, -1: 2}


def cantor_encode(digits: Sequence[int]) -> list[int]:
    """Ternary digits in {0, 2} to signs: 0 -> 1, 2 -> -1."""
    try:
        return [_ENCODE[d] for d in digits]
    except KeyError as exc:
        raise ValueError(f"invalid ternary digit {exc.args[0]!r}") from None


def cantor_decode(signs: Sequence[int]) -> list[int]:
    try:
        return [_DECODE[s] for s in signs]
    except KeyError as exc:
        raise ValueError(f"invalid sign {exc.args[0]!r}") from None


def cantor_interval(digits: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Closed interval of Cantor points whose ternary expansion starts with ``digits``."""
    cantor_encode(digits)
    lo = sum((Fraction(d, 3 ** (j + 1)) for j, d in enumerate(digits)), Fraction(0))
    return lo, lo + Fraction(1, 3 ** len(digits))


# --- S^3, suspension and Hopf map ---------------------------------------------------

def _unit(z: complex) -> complex:
    r = abs(z)
    if r == 0:
        raise ZeroDivisionError("phase of zero")
    return z / r


@dataclass(frozen=True)
class S3Point:
    a: complex
    c: complex

    def __post_init__(self):
        n = abs(self.a) ** 2 + abs(self.c) ** 2
        if abs(n - 1) > UNIT_TOL:
            raise ValueError(f"|a|^2 + |c|^2 = {n!r}, not 1")

    def act(self, k: complex) -> "S3Point":
        return S3Point(self.a * k, self.c * k)

    def close_to(self, other: "S3Point", tol: float = 1e-12) -> bool:
        return abs(self.a - other.a) <= tol and abs(self.c - other.c) <= tol


@dataclass(frozen=True)
class SuspensionPoint:
    """[(t, g, h)] in ([0,1] x U(1) x U(1)) / R, stored in normal form."""

    t: float
    g: complex
    h: complex

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("t must lie in [0, 1]")
        for z in (self.g, self.h):
            if abs(abs(z) - 1) > UNIT_TOL:
                raise ValueError("g and h must be unit complex numbers")
        if self.t == 0.0:
            object.__setattr__(self, "g", 1 + 0j)
        if self.t == 1.0:
            object.__setattr__(self, "h", 1 + 0j)

    def act(self, k: complex) -> "SuspensionPoint":
        return SuspensionPoint(self.t, self.g * k, self.h * k)

    def close_to(self, other: "SuspensionPoint", tol: float = 1e-12) -> bool:
        if abs(self.t - other.t) > tol:
            return False
        ok_g = self.t == 1.0 or other.t == 1.0 or abs(self.g - other.g) <= tol or self.t == 0.0
        ok_h = self.t == 0.0 or other.t == 0.0 or abs(self.h - other.h) <= tol or self.t == 1.0
        return ok_g and ok_h


def suspension_to_s3(p: SuspensionPoint) -> S3Point:
    return S3Point(math.sqrt(p.t) * p.g, math.sqrt(1 - p.t) * p.h)


def s3_to_suspension(q: S3Point) -> SuspensionPoint:
    t = min(1.0, max(0.0, abs(q.a) ** 2))
    if q.a == 0:
        return SuspensionPoint(0.0, 1 + 0j, _unit(q.c))
    if q.c == 0:
        return SuspensionPoint(1.0, _unit(q.a), 1 + 0j)
    return SuspensionPoint(t, _unit(q.a), _unit(q.c))


def hopf_projection(q: S3Point) -> tuple[complex, float]:
    """(2 a conj(c), |a|^2 - |c|^2)."""
    return 2 * q.a * q.c.conjugate(), abs(q.a) ** 2 - abs(q.c) ** 2


@dataclass(frozen=True)
class SuspensionBasePoint:
    """[(t, g)] in the suspension of U(1); the ends t = 0, 1 are single points."""

    t: float
    g: complex

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("t must lie in [0, 1]")
        if self.t in (0.0, 1.0):
            object.__setattr__(self, "g", 1 + 0j)


def suspension_projection(p: SuspensionPoint) -> SuspensionBasePoint:
    """[(t, g, h)] -> [(t, g h^-1)]."""
    return SuspensionBasePoint(p.t, p.g * p.h.conjugate())


def phi(b: SuspensionBasePoint) -> tuple[complex, float]:
    """[(t, g)] -> (2 g sqrt(t - t^2), 2t - 1) in S^2."""
    return 2 * b.g * math.sqrt(max(0.0, b.t - b.t * b.t)), 2 * b.t - 1


def phi_inverse(z: complex, s: float) -> SuspensionBasePoint:
    t = min(1.0, max(0.0, (s + 1) / 2))
    if z == 0:
        return SuspensionBasePoint(t, 1 + 0j)
    return SuspensionBasePoint(t, _unit(z))


def section_0(b: SuspensionBasePoint) -> SuspensionPoint:
    """[(t, 1, g^-1)], defined away from t = 1."""
    return SuspensionPoint(b.t, 1 + 0j, b.g.conjugate())


def section_1(b: SuspensionBasePoint) -> SuspensionPoint:
    """[(t, g, 1)], defined away from t = 0."""
    return SuspensionPoint(b.t, b.g, 1 + 0j)


def suspension_transition(b: SuspensionBasePoint) -> complex:
    """The group element k with section_1(b) = section_0(b) . k; equals g."""
    s0, s1 = section_0(b), section_1(b)
    k = s1.h * s0.h.conjugate()
    if not s0.act(k).close_to(s1, 1e-12):
        raise ArithmeticError("sections do not differ by a group element")
    return k


def transition_function(q: S3Point) -> complex:
    """(a/|a|)(|c|/c) on the overlap a != 0, c != 0."""
    if q.a == 0 or q.c == 0:
        raise PoleError("transition function needs a != 0 and c != 0")
    return _unit(q.a) * abs(q.c) / q.c


def heegaard_map(q: S3Point) -> tuple[complex, complex]:
    """g(a, c) = sqrt(2)(a, c) / sqrt(1 + ||a|^2 - |c|^2|)."""
    s = math.sqrt(2.0 / (1.0 + abs(abs(q.a) ** 2 - abs(q.c) ** 2)))
    return q.a * s, q.c * s


def heegaard_inverse(z1: complex, z2: complex, tol: float = HEEGAARD_TOL) -> S3Point:
    m1, m2 = abs(z1) ** 2, abs(z2) ** 2
    if m1 > 1 + tol or m2 > 1 + tol or abs((1 - m1) * (1 - m2)) > tol:
        raise MembershipError("point is not in {|z_i| <= 1, (1-|z1|^2)(1-|z2|^2) = 0}")
    s = 1.0 / math.sqrt(1.0 + m1 * m2)
    return S3Point(z1 * s, z2 * s)


def heegaard_component(q: S3Point) -> str:
    """'T1' (|a|^2 < 1/2), 'T2' (|a|^2 > 1/2) or 'T1nT2' on the common boundary."""
    d = abs(q.a) ** 2 - 0.5
    if abs(d) <= 1e-12:
        return "T1nT2"
    return "T1" if d < 0 else "T2"


def random_s3(rng, n: int) -> list[S3Point]:
    v = rng.normal(size=(n, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return [S3Point(complex(r[0], r[1]), complex(r[2], r[3])) for r in v]


def random_unit(rng) -> complex:
    return cmath.exp(1j * rng.uniform(0, 2 * math.pi))

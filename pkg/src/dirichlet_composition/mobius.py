"""Linear-fractional self-maps of the unit disk.

A map z -> (az + b)/(cz + d) is stored by a canonical coefficient
representative with ad - bc = 1.  The square root of the determinant used
for the rescaling is the one with argument in (-pi/2, pi/2], so two
proportional coefficient vectors give canonical representatives that agree
up to a global sign.  `maps_equal` checks both signs.

All functions are pure and accept numpy arrays wherever a point ``z`` is
expected.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import InitVar, dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateMapError,
    IdentityMapError,
    LineImageError,
    NotAutomorphismError,
    PoleError,
    PoleInsideDiskError,
)

EPS_DET = 1e-10
EPS_EQ = 1e-10
EPS_CLASS = 1e-9
EPS_FIX = 1e-10
EPS_AUTO = 1e-10
EPS_SUP = 1e-10
EPS_LINE = 1e-10
EPS_POLE = 1e-10
# location tag for fixed points: roots of a nearly-double quadratic lose
# about half the digits, so the on-circle test is looser than EPS_FIX
EPS_ON_CIRCLE = 1e-9


def _canonical_root(det):
    """sqrt(det) with argument in (-pi/2, pi/2]."""
    arg = math.atan2(det.imag, det.real)
    if arg <= -math.pi:
        arg = math.pi
    return cmath.rect(math.sqrt(abs(det)), arg / 2)


@dataclass(frozen=True)
class MobiusMap:
    """z -> (az + b)/(cz + d), stored with determinant 1.

    Pass ``normalize=False`` only for coefficients already known to have
    determinant 1 (the Krein adjoint of a canonical map, for instance).
    """

    a: complex
    b: complex
    c: complex
    d: complex
    normalize: InitVar[bool] = True

    def __post_init__(self, normalize):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0 or abs(det) <= EPS_DET * scale * scale:
            raise DegenerateMapError(
                f"ad - bc = {det} vanishes for coefficients {(a, b, c, d)}"
            )
        if normalize:
            r = _canonical_root(det)
            a, b, c, d = a / r, b / r, c / r, d / r
        for name, value in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, value)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def rotation(cls, theta: float) -> "MobiusMap":
        """z -> e^{i theta} z."""
        return cls(cmath.exp(1j * theta), 0, 0, 1)

    @classmethod
    def hyperbolic(cls, t: float) -> "MobiusMap":
        """z -> (z + t)/(1 + tz), the automorphism fixing +1 and -1."""
        return cls(1, t, t, 1)

    @classmethod
    def from_automorphism(cls, a: complex, theta: float) -> "MobiusMap":
        """z -> e^{i theta}(a - z)/(1 - conj(a) z)."""
        a = complex(a)
        if abs(a) >= 1:
            raise NotAutomorphismError(f"|a| = {abs(a)} must be < 1")
        u = cmath.exp(1j * theta)
        return cls(-u, u * a, -a.conjugate(), 1)

    # -- basic data -------------------------------------------------------------

    @property
    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def pole(self) -> complex | None:
        """Finite pole -d/c, or None when the map is affine."""
        if self.c == 0:
            return None
        return -self.d / self.c

    @cached_property
    def is_automorphism(self) -> bool:
        try:
            center, radius = image_circle(self)
        except LineImageError:
            return False
        return (
            abs(self.d) > abs(self.c)
            and abs(center) < EPS_AUTO
            and abs(radius - 1.0) < EPS_AUTO
        )

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return compose(self, other)

    def __repr__(self):
        return "MobiusMap(a={!r}, b={!r}, c={!r}, d={!r})".format(*self.coefficients)


IDENTITY = MobiusMap.identity()


class MapClassification(str, Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


@dataclass(frozen=True)
class AutomorphismForm:
    """phi(z) = e^{i theta}(a - z)/(1 - conj(a) z) with theta in (-pi, pi]."""

    a: complex
    theta: float
    is_identity: bool = False

    def to_map(self) -> MobiusMap:
        return MobiusMap.from_automorphism(self.a, self.theta)


@dataclass(frozen=True)
class FixedPoint:
    z: complex
    location: str  # "inside" | "on" | "outside"


@dataclass(frozen=True)
class FixedPointSet:
    """Finite fixed points plus a flag for the point at infinity.

    ``double`` marks the parabolic case, where the quadratic has a double
    root and a single point is listed.
    """

    points: tuple[FixedPoint, ...]
    at_infinity: bool = False
    double: bool = False

    @property
    def values(self) -> list[complex]:
        return [p.z for p in self.points]

    def __len__(self):
        return len(self.points)


def _locate(z: complex) -> str:
    r = abs(z)
    if abs(r - 1.0) < EPS_ON_CIRCLE:
        return "on"
    return "inside" if r < 1.0 else "outside"


# -- algebra ----------------------------------------------------------------------


def apply(m: MobiusMap, z):
    """Evaluate m at z (scalar or array)."""
    den = m.c * z + m.d
    if np.ndim(den) == 0:
        if abs(den) < EPS_POLE:
            raise PoleError(f"{m!r} has a pole at z = {z}")
        return (m.a * z + m.b) / den
    if np.any(np.abs(den) < EPS_POLE):
        raise PoleError(f"{m!r} evaluated at its pole")
    return (m.a * z + m.b) / den


def compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    """The map z -> m1(m2(z))."""
    a1, b1, c1, d1 = m1.coefficients
    a2, b2, c2, d2 = m2.coefficients
    return MobiusMap(
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
    )


def inverse(m: MobiusMap) -> MobiusMap:
    return MobiusMap(m.d, -m.b, -m.c, m.a)


def krein_adjoint(m: MobiusMap) -> MobiusMap:
    """phi*(z) = (conj(a) z - conj(c))/(-conj(b) z + conj(d)).

    This is 1/conj(phi^{-1}(1/conj(z))) in closed form.  The determinant of
    the result is conj(ad - bc) = 1, so the output is already canonical and
    applying the adjoint twice returns the original coefficients exactly.
    """
    a, b, c, d = m.coefficients
    return MobiusMap(
        a.conjugate(), -c.conjugate(), -b.conjugate(), d.conjugate(), normalize=False
    )


def maps_equal(m1: MobiusMap, m2: MobiusMap, tol: float = EPS_EQ) -> bool:
    """Equality as maps: canonical coefficients agree up to a global sign."""
    p = np.array(m1.coefficients)
    q = np.array(m2.coefficients)
    return bool(min(np.max(np.abs(p - q)), np.max(np.abs(p + q))) < tol)


def is_identity(m: MobiusMap, tol: float = EPS_EQ) -> bool:
    return maps_equal(m, IDENTITY, tol)


# -- geometry -----------------------------------------------------------------


def image_circle(m: MobiusMap) -> tuple[complex, float]:
    """Center and radius of m(unit circle)."""
    a, b, c, d = m.coefficients
    span = abs(d) ** 2 - abs(c) ** 2
    if abs(abs(c) - abs(d)) < EPS_LINE:
        raise LineImageError(f"{m!r} sends the unit circle to a line")
    center = (b * d.conjugate() - a * c.conjugate()) / span
    radius = abs(m.det) / abs(span)
    return center, radius


def sup_norm(m: MobiusMap) -> float:
    """sup of |m| over the closed disk."""
    if abs(m.d) - abs(m.c) <= EPS_POLE:
        raise PoleInsideDiskError(f"{m!r} has its pole in the closed disk")
    center, radius = image_circle(m)
    return abs(center) + radius


def is_self_map(m: MobiusMap) -> bool:
    try:
        return sup_norm(m) <= 1.0 + EPS_SUP
    except PoleInsideDiskError:
        return False


def disk_gap(m: MobiusMap, z, one_minus_abs2=None):
    """1 - |m(z)|^2, evaluated without the cancellation of the naive form.

    The numerator |cz + d|^2 - |az + b|^2 is regrouped around
    ``one_minus_abs2`` = 1 - |z|^2, which the caller may pass when it is
    known more accurately than it can be recovered from ``z``.  For an
    automorphism the numerator is exactly (1 - |z|^2) times a constant, and
    the rounding residue of the other terms is dropped.
    """
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    if one_minus_abs2 is None:
        r = np.abs(z)
        one_minus_abs2 = (1.0 - r) * (1.0 + r)
    p, r_, q = _gap_parts(m)
    num = p * one_minus_abs2
    if not m.is_automorphism:
        num = num + r_ * (2.0 - one_minus_abs2) - 2.0 * np.real(q * z)
    return num / np.abs(m.c * z + m.d) ** 2


def disk_gap_polar(m: MobiusMap, delta, zeta):
    """1 - |m(w)|^2 at w = (1 - delta) zeta, |zeta| = 1.

    Carries delta explicitly so the result keeps its relative accuracy for
    delta far below machine epsilon times the coefficient size.
    """
    delta = np.asarray(delta, dtype=float)
    zeta = np.asarray(zeta, dtype=complex)
    mu = delta * (2.0 - delta)
    w = (1.0 - delta) * zeta
    p, r_, q = _gap_parts(m)
    num = p * mu
    if not m.is_automorphism:
        rq = np.real(q * zeta)
        num = num - r_ * mu + 2.0 * (r_ - rq) + 2.0 * delta * rq
    out = num / np.abs(m.c * w + m.d) ** 2
    return out if out.ndim else float(out)


def _gap_parts(m: MobiusMap):
    a, b, c, d = m.coefficients
    x = abs(d) ** 2 - abs(b) ** 2
    y = abs(a) ** 2 - abs(c) ** 2
    return (x + y) / 2.0, (x - y) / 2.0, a * b.conjugate() - c * d.conjugate()


# -- automorphisms --------------------------------------------------------------


def to_automorphism_form(m: MobiusMap) -> AutomorphismForm:
    if not m.is_automorphism:
        raise NotAutomorphismError(f"{m!r} is not a disk automorphism")
    if is_identity(m):
        return AutomorphismForm(0j, math.pi, is_identity=True)
    a, b, c, d = m.coefficients
    zero = -b / a
    theta = cmath.phase(-a / d)
    if theta <= -math.pi:
        theta = math.pi
    form = AutomorphismForm(zero, theta)
    if not maps_equal(form.to_map(), m, EPS_AUTO):
        raise NotAutomorphismError(f"round trip through (a, theta) failed for {m!r}")
    return form


def classify(m: MobiusMap, tol: float = EPS_CLASS) -> MapClassification:
    """Identity, or the elliptic/parabolic/hyperbolic trichotomy by |a| vs cos(theta/2)."""
    form = to_automorphism_form(m)
    if form.is_identity:
        return MapClassification.IDENTITY
    gap = abs(form.a) - math.cos(form.theta / 2)
    if gap < -tol:
        return MapClassification.ELLIPTIC
    if gap > tol:
        return MapClassification.HYPERBOLIC
    return MapClassification.PARABOLIC


def fixed_points(m: MobiusMap) -> FixedPointSet:
    """Roots of cz^2 + (d - a)z - b = 0, each refined by one Newton step."""
    if is_identity(m):
        raise IdentityMapError("the identity fixes every point")
    a, b, c, d = m.coefficients
    lin = d - a

    if abs(c) < EPS_FIX:
        if abs(lin) < EPS_FIX:
            # translation: only the point at infinity (double)
            return FixedPointSet((), at_infinity=True, double=True)
        z = b / lin
        return FixedPointSet((FixedPoint(z, _locate(z)),), at_infinity=True)

    disc = lin * lin + 4.0 * b * c
    if m.is_automorphism:
        double = classify(m) is MapClassification.PARABOLIC
    else:
        double = abs(disc) <= 1e-12 * (abs(lin) ** 2 + 4.0 * abs(b * c))
    if double:
        z = -lin / (2.0 * c)
        return FixedPointSet((FixedPoint(z, _locate(z)),), double=True)

    root = cmath.sqrt(disc)
    # pick the sign that avoids cancellation, then use Vieta for the other root
    if (lin.conjugate() * root).real < 0:
        root = -root
    q = -0.5 * (lin + root)
    roots = [q / c, -b / q]
    polished = []
    for z in roots:
        g = c * z * z + lin * z - b
        dg = 2.0 * c * z + lin
        if dg != 0:
            z = z - g / dg
        polished.append(z)
    return FixedPointSet(tuple(FixedPoint(z, _locate(z)) for z in polished))


def same_fixed_points(f1: FixedPointSet, f2: FixedPointSet, tol: float = EPS_FIX) -> bool:
    """Set equality of finite fixed points (relative tolerance) and of the infinity flag."""
    if f1.at_infinity != f2.at_infinity:
        return False
    p1, p2 = f1.values, f2.values
    if len(p1) != len(p2):
        return False
    unused = list(p2)
    for z in p1:
        for i, u in enumerate(unused):
            if abs(z - u) <= tol * max(1.0, abs(z)):
                del unused[i]
                break
        else:
            return False
    return True


def format_complex(z: complex) -> str:
    """Round-trippable "x+yi" literal."""
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def format_map(m: MobiusMap) -> str:
    """Coefficient MapSpec "a,b,c,d" that re-parses to the same map."""
    return ",".join(format_complex(x) for x in m.coefficients)

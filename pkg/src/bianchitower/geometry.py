"""Hyperbolic geometry in the upper half-space model.

All of this is double precision; exact data is converted once through the
complex embedding of the field.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

DEFAULT_TRACE_TOL = 1e-12


class IsometryType(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    LOXODROMIC = "loxodromic"


class NotLoxodromic(ValueError):
    pass


@dataclass(frozen=True)
class ComplexLength:
    length: float
    rotation: float

    def as_complex(self) -> complex:
        return complex(self.length, self.rotation)


@dataclass(frozen=True)
class UpperHalfPoint:
    z: complex
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("height t must be positive")

    @classmethod
    def on_axis(cls, t: float) -> "UpperHalfPoint":
        return cls(0j, t)


def classify(trace: complex, is_identity: bool = False, tol: float = DEFAULT_TRACE_TOL) -> IsometryType:
    """Isometry type from a +-trace.  Only the matrix knows whether a trace of
    +-2 belongs to the identity, so the caller passes that flag."""
    if is_identity:
        return IsometryType.IDENTITY
    tr = complex(trace)
    if abs(tr.imag) > tol:
        return IsometryType.LOXODROMIC
    x = abs(tr.real)
    if abs(x - 2.0) <= tol:
        return IsometryType.PARABOLIC
    if x < 2.0:
        return IsometryType.ELLIPTIC
    return IsometryType.LOXODROMIC


def translation_length(trace: complex, tol: float = DEFAULT_TRACE_TOL) -> ComplexLength:
    """lambda = l + i*theta with 2 cosh(lambda/2) = +-trace and l > 0."""
    tr = complex(trace)
    if classify(tr, tol=tol) is not IsometryType.LOXODROMIC:
        raise NotLoxodromic(f"trace {tr} is not loxodromic")
    lam = 2 * cmath.acosh(tr / 2)
    if lam.real < 0:
        lam = -lam
    theta = math.remainder(lam.imag, 2 * math.pi)
    if theta <= -math.pi:
        theta += 2 * math.pi
    return ComplexLength(lam.real, theta)


def trace_from_length(cl: ComplexLength) -> complex:
    return 2 * cmath.cosh(cl.as_complex() / 2)


def orbit_cosh_distance(gamma, t: float) -> float:
    """cosh d(gamma(zeta), zeta) for zeta = t*j on the vertical axis.

    gamma is (a, b, c, d) as complex numbers with ad - bc = 1.
    """
    a, b, c, d = (complex(x) for x in gamma)
    t2 = t * t
    den = abs(c) ** 2 * t2 + abs(d) ** 2  # |c zeta + d|^2
    num = b * d.conjugate() + a * c.conjugate() * t2
    return abs(num) ** 2 / (2 * t2 * den) + (1 - den) ** 2 / (2 * den) + 1


def mobius_action(gamma, point: UpperHalfPoint) -> UpperHalfPoint:
    """gamma(z + t j) for a general point of upper half-space."""
    a, b, c, d = (complex(x) for x in gamma)
    z, t = point.z, point.t
    czd = c * z + d
    den = abs(czd) ** 2 + abs(c) ** 2 * t * t
    znew = ((a * z + b) * czd.conjugate() + a * c.conjugate() * t * t) / den
    return UpperHalfPoint(znew, t / den)


def cosh_distance(p: UpperHalfPoint, q: UpperHalfPoint) -> float:
    return 1 + (abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2) / (2 * p.t * q.t)


def orbit_cosh_distance_general(gamma, point: UpperHalfPoint) -> float:
    """Same quantity for any base point, by acting and measuring."""
    return cosh_distance(mobius_action(gamma, point), point)


def ball_volume(r: float) -> float:
    if r < 0:
        raise ValueError("radius must be non-negative")
    return math.pi * (math.sinh(2 * r) - 2 * r)


def ball_volume_derivative(r: float) -> float:
    return 2 * math.pi * (math.cosh(2 * r) - 1)


def genus_lower_bound(r: float) -> float:
    """Heegaard genus >= cosh(r)/2 for upper injectivity radius >= r."""
    return 0.5 * math.cosh(r)


def cosh_half_arccosh(x: float) -> float:
    """cosh(arccosh(x)/2) = sqrt((x + 1)/2) for x >= 1."""
    if x < 1:
        raise ValueError("x must be >= 1")
    return math.sqrt((x + 1) / 2)


def arccosh_half(x: float) -> float:
    """arccosh(x/2) = ln((x + sqrt(x^2 - 4))/2) for x >= 2."""
    if x < 2:
        raise ValueError("arccosh_half needs x >= 2")
    return math.log((x + math.sqrt(x * x - 4)) / 2)


def log_radius_bound(norm: float) -> float:
    """(1/2) ln(sqrt(N) - 1), a lower bound for (1/2) arccosh(sqrt(N)/2), N >= 4."""
    if norm < 4:
        raise ValueError("needs N >= 4")
    return 0.5 * math.log(math.sqrt(norm) - 1)

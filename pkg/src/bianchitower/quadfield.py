"""Exact arithmetic in imaginary quadratic fields Q(sqrt(-d)).

Elements of the ring of integers are stored on the integral basis {1, w} where
w = sqrt(-d) when -d is not 1 mod 4 and w = (1 + sqrt(-d))/2 otherwise.  In both
cases w is a root of x^2 - t*x + n with small integers t, n, which is all the
multiplication table needs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Union

from sympy import isprime
from sympy.ntheory import sqrt_mod


class DenominatorNotInvertible(ArithmeticError):
    """Raised when reducing an element whose denominator vanishes mod P."""

    def __init__(self, p: int, msg: str | None = None):
        self.p = p
        super().__init__(msg or f"denominator not invertible modulo a prime above {p}")


class SplittingError(ValueError):
    pass


def _is_squarefree(d: int) -> bool:
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field K = Q(sqrt(-d)) together with its integral basis convention."""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1 or not _is_squarefree(self.d):
            raise ValueError(f"d must be a positive square-free integer, got {self.d!r}")

    @property
    def omega_is_half(self) -> bool:
        # -d = 1 mod 4  <=>  d = 3 mod 4
        return self.d % 4 == 3

    @property
    def trace_omega(self) -> int:
        return 1 if self.omega_is_half else 0

    @property
    def norm_omega(self) -> int:
        return (1 + self.d) // 4 if self.omega_is_half else self.d

    @property
    def discriminant(self) -> int:
        return -self.d if self.omega_is_half else -4 * self.d

    @property
    def galois_degree(self) -> int:
        """Degree n of the Galois closure over Q."""
        return 2

    @property
    def degree(self) -> int:
        """Degree m = [K:Q]."""
        return 2

    @cached_property
    def omega_complex(self) -> complex:
        root = complex(0.0, math.sqrt(self.d))
        return (1 + root) / 2 if self.omega_is_half else root

    def __call__(self, a: int, b: int = 0) -> "QuadInt":
        return QuadInt(a, b, self)

    @property
    def omega(self) -> "QuadInt":
        return QuadInt(0, 1, self)

    def minpoly_roots_mod(self, p: int) -> list[int]:
        """Sorted roots of x^2 - t x + n modulo the prime p."""
        t, n = self.trace_omega, self.norm_omega
        if p == 2:
            return [x for x in range(2) if (x * x - t * x + n) % 2 == 0]
        disc = (t * t - 4 * n) % p
        inv2 = pow(2, -1, p)
        roots = sqrt_mod(disc, p, all_roots=True) or []
        return sorted({(t + s) * inv2 % p for s in roots})

    def __str__(self):
        return f"Q(sqrt(-{self.d}))"


def _mul_coords(a1: int, b1: int, a2: int, b2: int, t: int, n: int) -> tuple[int, int]:
    bb = b1 * b2
    return a1 * a2 - n * bb, a1 * b2 + b1 * a2 + t * bb


@dataclass(frozen=True)
class QuadInt:
    """a + b*w in the ring of integers O_d."""

    a: int
    b: int
    field: FieldSpec = field(repr=False)

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.field != self.field:
                raise ValueError("operands live in different fields")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        f = self.field
        return QuadInt(*_mul_coords(self.a, self.b, o.a, o.b, f.trace_omega, f.norm_omega), f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return QuadRat(self, 1) / other

    def __pow__(self, k: int):
        if k < 0:
            return QuadRat(self, 1) ** k
        result = QuadInt(1, 0, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "QuadInt":
        # conj(w) = t - w
        return QuadInt(self.a + self.field.trace_omega * self.b, -self.b, self.field)

    def norm(self) -> int:
        f = self.field
        return self.a * self.a + f.trace_omega * self.a * self.b + f.norm_omega * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __complex__(self):
        return self.a + self.b * self.field.omega_complex

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadInt):
            return self.a == other.a and self.b == other.b and self.field == other.field
        if isinstance(other, QuadRat):
            return other == self
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.field.d))

    def __str__(self):
        return _format_coords(self.a, self.b, 1)


def _format_coords(p: int, q: int, r: int) -> str:
    if q == 0:
        s = str(p)
    elif p == 0:
        s = "w" if q == 1 else ("-w" if q == -1 else f"{q}w")
    else:
        qs = "w" if abs(q) == 1 else f"{abs(q)}w"
        s = f"{p}{'+' if q > 0 else '-'}{qs}"
    if r != 1:
        s = f"({s})/{r}"
    return s


def canonical_coords(p: int, q: int, r: int) -> tuple[int, int, int]:
    """Reduce (p + q w)/r so that r > 0 and gcd(p, q, r) = 1."""
    if r == 0:
        raise ZeroDivisionError("zero denominator")
    if r < 0:
        p, q, r = -p, -q, -r
    g = gcd(gcd(p, q), r)
    return p // g, q // g, r // g


Scalar = Union[int, QuadInt, "QuadRat"]


class QuadRat:
    """A formal quotient num/den of integers in O_d.

    Only the rational-integer content shared by numerator and denominator is
    cancelled; equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[int, QuadInt], den: Union[int, QuadInt] = 1, field: FieldSpec | None = None):
        if isinstance(num, int) or isinstance(den, int):
            fld = field or (num.field if isinstance(num, QuadInt) else den.field if isinstance(den, QuadInt) else None)
            if fld is None:
                raise TypeError("field required when both parts are plain integers")
            if isinstance(num, int):
                num = QuadInt(num, 0, fld)
            if isinstance(den, int):
                den = QuadInt(den, 0, fld)
        if num.field != den.field:
            raise ValueError("numerator and denominator live in different fields")
        if den.is_zero():
            raise ZeroDivisionError("QuadRat with zero denominator")
        g = gcd(gcd(num.a, num.b), gcd(den.a, den.b))
        # keep the denominator's leading coordinate positive
        if den.a < 0 or (den.a == 0 and den.b < 0):
            g = -g
        if g not in (0, 1):
            num = QuadInt(num.a // g, num.b // g, num.field)
            den = QuadInt(den.a // g, den.b // g, den.field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, key, value):
        raise AttributeError("QuadRat is immutable")

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @classmethod
    def from_coords(cls, p: int, q: int, r: int, field: FieldSpec) -> "QuadRat":
        return cls(QuadInt(p, q, field), QuadInt(r, 0, field))

    def coords(self) -> tuple[int, int, int]:
        """Canonical (p, q, r) with self = (p + q w)/r, r > 0, gcd 1."""
        x = self.num * self.den.conj()
        return canonical_coords(x.a, x.b, self.den.norm())

    def _coerce(self, other):
        if isinstance(other, QuadRat):
            return other
        if isinstance(other, (int, QuadInt)):
            return QuadRat(other, 1, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadRat(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadRat(-self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero QuadRat")
        return QuadRat(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            if self.num.is_zero():
                raise ZeroDivisionError("division by zero QuadRat")
            return QuadRat(self.den ** (-k), self.num ** (-k))
        return QuadRat(self.num ** k, self.den ** k)

    def conj(self) -> "QuadRat":
        return QuadRat(self.num.conj(), self.den.conj())

    def norm(self):
        from fractions import Fraction

        return Fraction(self.num.norm(), self.den.norm())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.coords()[2] == 1

    def to_quadint(self) -> QuadInt:
        p, q, r = self.coords()
        if r != 1:
            raise ValueError(f"{self} is not an algebraic integer")
        return QuadInt(p, q, self.field)

    def __complex__(self):
        return complex(self.num) / complex(self.den)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.field == o.field and self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.coords(), self.field.d))

    def __repr__(self):
        return f"QuadRat({self.num.a}+{self.num.b}w, {self.den.a}+{self.den.b}w; d={self.field.d})"

    def __str__(self):
        return _format_coords(*self.coords())


# --------------------------------------------------------------------------
# primes and residue fields


class Splitting(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def splitting_type(field: FieldSpec, p: int) -> Splitting:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if field.discriminant % p == 0:
        return Splitting.RAMIFIED
    return Splitting.SPLIT if field.minpoly_roots_mod(p) else Splitting.INERT


@dataclass(frozen=True)
class PrimeIdealData:
    """A prime P of O_d above p, with residue degree f and the image r of w
    in O/P = F_p when f = 1."""

    field: FieldSpec = field(repr=False)
    p: int
    f: int
    split_root: int | None
    kind: Splitting

    def __post_init__(self):
        if self.f not in (1, 2):
            raise ValueError("residue degree must be 1 or 2")
        if self.f == 1:
            r = self.split_root
            t, n = self.field.trace_omega, self.field.norm_omega
            if r is None or (r * r - t * r + n) % self.p:
                raise ValueError(f"{r} is not a root of the minimal polynomial of w mod {self.p}")
        elif self.split_root is not None:
            raise ValueError("inert primes carry no split root")

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def sqrt_image(self) -> int | None:
        """Image of sqrt(-d) in F_p when f = 1."""
        if self.split_root is None:
            return None
        return (2 * self.split_root - self.field.trace_omega) % self.p

    @property
    def key(self) -> tuple[int, int | None]:
        return (self.p, self.split_root)

    def conjugate(self) -> "PrimeIdealData":
        if self.kind is not Splitting.SPLIT:
            return self
        other = (self.field.trace_omega - self.split_root) % self.p
        return PrimeIdealData(self.field, self.p, 1, other, self.kind)

    def contains(self, x: QuadInt) -> bool:
        if self.f == 1:
            return (x.a + x.b * self.split_root) % self.p == 0
        return x.a % self.p == 0 and x.b % self.p == 0

    def __str__(self):
        if self.f == 2:
            return f"({self.p})"
        return f"({self.p}, w-{self.split_root})"


def find_split_prime_ideal(field: FieldSpec, p: int, root: int | None = None) -> PrimeIdealData:
    """The prime above a split p whose residue map sends w to the smallest root."""
    if splitting_type(field, p) is not Splitting.SPLIT:
        raise SplittingError(f"{p} does not split in {field}")
    roots = field.minpoly_roots_mod(p)
    if root is None:
        root = roots[0]
    elif root % p not in roots:
        raise SplittingError(f"{root} is not a root of the minimal polynomial mod {p}")
    return PrimeIdealData(field, p, 1, root % p, Splitting.SPLIT)


def prime_ideal_of(pi: QuadInt) -> PrimeIdealData:
    """The prime ideal (pi) for an element pi of prime norm."""
    p = pi.norm()
    if not isprime(p):
        raise SplittingError(f"N({pi}) = {p} is not a rational prime")
    if pi.b % p == 0:
        raise SplittingError(f"{pi} generates no degree-one prime")
    # a + b*r = 0 mod p
    root = -pi.a * pow(pi.b, -1, p) % p
    kind = splitting_type(pi.field, p)
    return PrimeIdealData(pi.field, p, 1, root, kind)


def prime_ideals_above(field: FieldSpec, p: int) -> list[PrimeIdealData]:
    kind = splitting_type(field, p)
    if kind is Splitting.INERT:
        return [PrimeIdealData(field, p, 2, None, kind)]
    roots = field.minpoly_roots_mod(p)
    return [PrimeIdealData(field, p, 1, r, kind) for r in roots]


@dataclass(frozen=True)
class SquareFreeIdeal:
    factors: tuple[PrimeIdealData, ...]

    def __init__(self, factors: Iterable[PrimeIdealData]):
        fs = tuple(sorted(factors, key=lambda P: (P.p, P.split_root if P.split_root is not None else -1)))
        if not fs:
            raise ValueError("an ideal needs at least one prime factor")
        if len({P.key for P in fs}) != len(fs):
            raise ValueError("repeated prime factor: ideal is not square-free")
        if len({P.field for P in fs}) != 1:
            raise ValueError("prime factors from different fields")
        object.__setattr__(self, "factors", fs)

    @property
    def field(self) -> FieldSpec:
        return self.factors[0].field

    def norm(self) -> int:
        return math.prod(P.norm for P in self.factors)

    def __mul__(self, other: "SquareFreeIdeal | PrimeIdealData") -> "SquareFreeIdeal":
        extra = (other,) if isinstance(other, PrimeIdealData) else other.factors
        return SquareFreeIdeal(self.factors + extra)

    def __str__(self):
        return "*".join(str(P) for P in self.factors)


def ideal_norm(ideal: SquareFreeIdeal) -> int:
    return ideal.norm()


class ResidueField:
    """O_d / P as F_p (f = 1) or F_p[theta] = F_{p^2} (f = 2).

    Elements are coded as single ints u + v*p so they hash cheaply; the
    ResidueElem wrapper gives the same operations as Python operators.
    """

    def __init__(self, prime: PrimeIdealData):
        self.prime = prime
        self.p = prime.p
        self.f = prime.f
        self.q = prime.norm
        self._t = prime.field.trace_omega % self.p
        self._n = prime.field.norm_omega % self.p

    # raw int-coded operations -------------------------------------------
    def code(self, u: int, v: int = 0) -> int:
        p = self.p
        return u % p + (v % p) * p if self.f == 2 else u % p

    def split(self, x: int) -> tuple[int, int]:
        return (x % self.p, x // self.p) if self.f == 2 else (x, 0)

    def add(self, x: int, y: int) -> int:
        if self.f == 1:
            return (x + y) % self.p
        p = self.p
        return (x % p + y % p) % p + ((x // p + y // p) % p) * p

    def neg(self, x: int) -> int:
        if self.f == 1:
            return -x % self.p
        p = self.p
        return (-(x % p)) % p + ((-(x // p)) % p) * p

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        p = self.p
        if self.f == 1:
            return x * y % p
        a1, b1, a2, b2 = x % p, x // p, y % p, y // p
        bb = b1 * b2
        return (a1 * a2 - self._n * bb) % p + ((a1 * b2 + b1 * a2 + self._t * bb) % p) * p

    def inv(self, x: int) -> int:
        p = self.p
        if self.f == 1:
            if x % p == 0:
                raise ZeroDivisionError("zero has no inverse")
            return pow(x, -1, p)
        a, b = x % p, x // p
        nrm = (a * a + self._t * a * b + self._n * b * b) % p
        if nrm == 0:
            raise ZeroDivisionError("zero has no inverse")
        ni = pow(nrm, -1, p)
        return ((a + self._t * b) * ni) % p + ((-b * ni) % p) * p

    def pow(self, x: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def reduce_coords(self, a: int, b: int, r: int = 1) -> int:
        """Image of (a + b w)/r, r a rational integer."""
        p = self.p
        if r % p == 0:
            raise DenominatorNotInvertible(p)
        if self.f == 1:
            return (a + b * self.prime.split_root) * pow(r, -1, p) % p
        ri = pow(r, -1, p)
        return (a * ri) % p + ((b * ri) % p) * p

    def elements(self) -> range:
        return range(self.q)

    def element(self, x: int) -> "ResidueElem":
        return ResidueElem(self, x)

    def __eq__(self, other):
        return isinstance(other, ResidueField) and self.prime == other.prime

    def __hash__(self):
        return hash(self.prime)

    def __repr__(self):
        return f"ResidueField(F_{self.q} from {self.prime})"


@dataclass(frozen=True)
class ResidueElem:
    field: ResidueField
    code: int

    @property
    def value(self) -> int | tuple[int, int]:
        return self.code if self.field.f == 1 else self.field.split(self.code)

    def _other(self, o) -> int:
        if isinstance(o, ResidueElem):
            if o.field != self.field:
                raise ValueError("residue elements from different fields")
            return o.code
        if isinstance(o, int):
            return self.field.code(o)
        return NotImplemented

    def __add__(self, o):
        c = self._other(o)
        return c if c is NotImplemented else ResidueElem(self.field, self.field.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, o):
        c = self._other(o)
        return c if c is NotImplemented else ResidueElem(self.field, self.field.sub(self.code, c))

    def __neg__(self):
        return ResidueElem(self.field, self.field.neg(self.code))

    def __mul__(self, o):
        c = self._other(o)
        return c if c is NotImplemented else ResidueElem(self.field, self.field.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, o):
        c = self._other(o)
        return c if c is NotImplemented else ResidueElem(self.field, self.field.mul(self.code, self.field.inv(c)))

    def inverse(self) -> "ResidueElem":
        return ResidueElem(self.field, self.field.inv(self.code))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return ResidueElem(self.field, self.field.pow(self.code, k))

    def __eq__(self, o):
        if isinstance(o, int):
            return self.code == self.field.code(o)
        if isinstance(o, ResidueElem):
            return self.field == o.field and self.code == o.code
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __repr__(self):
        return f"ResidueElem({self.value} mod {self.field.prime})"


def reduce_scalar(x: Scalar, prime: PrimeIdealData) -> ResidueElem:
    """Reduction O_S -> O/P, a ring homomorphism on P-integral elements."""
    F = ResidueField(prime)
    if isinstance(x, int):
        return ResidueElem(F, F.reduce_coords(x, 0))
    if isinstance(x, QuadInt):
        return ResidueElem(F, F.reduce_coords(x.a, x.b))
    if isinstance(x, QuadRat):
        num = F.reduce_coords(x.num.a, x.num.b)
        den = F.reduce_coords(x.den.a, x.den.b)
        if den == 0:
            raise DenominatorNotInvertible(prime.p, f"{x} has denominator in {prime}")
        return ResidueElem(F, F.mul(num, F.inv(den)))
    raise TypeError(f"cannot reduce {type(x).__name__}")


def enumerate_split_primes(field: FieldSpec, limit: int) -> list[int]:
    """Rational primes <= limit that split completely in the field."""
    from .primes import primes_upto

    return [int(p) for p in primes_upto(limit) if _splits(field, int(p))]


def _splits(field: FieldSpec, p: int) -> bool:
    if field.discriminant % p == 0:
        return False
    if p == 2:
        return bool(field.minpoly_roots_mod(2))
    # Euler's criterion on the discriminant of the minimal polynomial
    return pow(field.discriminant % p, (p - 1) // 2, p) == 1


def is_split(field: FieldSpec, p: int) -> bool:
    return _splits(field, p)


def complex_embeddings(x: Scalar) -> tuple[complex, complex]:
    """The two complex embeddings (identity and complex conjugation)."""
    z = complex(x)
    return z, z.conjugate()


def abs_embedding(x: Scalar) -> float:
    return abs(complex(x))


__all__ = [
    "DenominatorNotInvertible",
    "FieldSpec",
    "PrimeIdealData",
    "QuadInt",
    "QuadRat",
    "ResidueElem",
    "ResidueField",
    "SplittingError",
    "Splitting",
    "SquareFreeIdeal",
    "canonical_coords",
    "complex_embeddings",
    "enumerate_split_primes",
    "find_split_prime_ideal",
    "ideal_norm",
    "is_split",
    "prime_ideal_of",
    "prime_ideals_above",
    "reduce_scalar",
    "splitting_type",
]


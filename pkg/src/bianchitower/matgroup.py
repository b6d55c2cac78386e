"""Determinant-one 2x2 matrices over Q(sqrt(-d)) modulo +-I.

Internally an element is a flat tuple of nine integers

    (a0, a1, b0, b1, c0, c1, d0, d1, r)

meaning [[a0 + a1 w, b0 + b1 w], [c0 + c1 w, d0 + d1 w]] / r with r > 0, the
nine integers coprime, and the first nonzero of the eight numerator
coordinates positive.  That tuple is a canonical key for the element of PSL_2,
so breadth-first enumeration can dedup with a plain dict.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

from .quadfield import FieldSpec, QuadInt, QuadRat, canonical_coords

log = logging.getLogger(__name__)

Raw = tuple  # nine ints, see module docstring

DEFAULT_ELEMENT_CAP = 10**6


class CapExceeded(RuntimeError):
    pass


class EntryBoundViolation(AssertionError):
    pass


def canon(v: Sequence[int]) -> Raw:
    """Canonical form of an (unreduced) nine-int matrix."""
    r = v[8]
    g = 0
    for x in v:
        g = gcd(g, x)
    if r < 0:
        g = -g
    if g != 1:
        v = [x // g for x in v]
    for x in v[:8]:
        if x:
            if x < 0:
                v = [-y for y in v[:8]] + [v[8]]
            break
    return tuple(v)


def raw_mul(x: Raw, y: Raw, t: int, n: int) -> Raw:
    a0, a1, b0, b1, c0, c1, d0, d1, r1 = x
    e0, e1, f0, f1, g0, g1, h0, h1, r2 = y
    # (u0 + u1 w)(v0 + v1 w) = u0 v0 - n u1 v1 + (u0 v1 + u1 v0 + t u1 v1) w
    aa = a1 * e1
    bb = b1 * g1
    p00 = a0 * e0 - n * aa + b0 * g0 - n * bb
    p01 = a0 * e1 + a1 * e0 + t * aa + b0 * g1 + b1 * g0 + t * bb
    aa = a1 * f1
    bb = b1 * h1
    p10 = a0 * f0 - n * aa + b0 * h0 - n * bb
    p11 = a0 * f1 + a1 * f0 + t * aa + b0 * h1 + b1 * h0 + t * bb
    aa = c1 * e1
    bb = d1 * g1
    p20 = c0 * e0 - n * aa + d0 * g0 - n * bb
    p21 = c0 * e1 + c1 * e0 + t * aa + d0 * g1 + d1 * g0 + t * bb
    aa = c1 * f1
    bb = d1 * h1
    p30 = c0 * f0 - n * aa + d0 * h0 - n * bb
    p31 = c0 * f1 + c1 * f0 + t * aa + d0 * h1 + d1 * h0 + t * bb
    r = r1 * r2
    if r == 1:
        # integral fast path: only the sign needs fixing
        v = (p00, p01, p10, p11, p20, p21, p30, p31)
        for z in v:
            if z:
                if z < 0:
                    return (-p00, -p01, -p10, -p11, -p20, -p21, -p30, -p31, 1)
                return v + (1,)
        return v + (1,)
    return canon([p00, p01, p10, p11, p20, p21, p30, p31, r])


def raw_inv(x: Raw) -> Raw:
    a0, a1, b0, b1, c0, c1, d0, d1, r = x
    return canon([d0, d1, -b0, -b1, -c0, -c1, a0, a1, r])


def raw_neg(x: Raw) -> Raw:
    return tuple(-v for v in x[:8]) + (x[8],)


def raw_identity() -> Raw:
    return (1, 0, 0, 0, 0, 0, 1, 0, 1)


def raw_entry(x: Raw, j: int) -> tuple[int, int, int]:
    """Entry j (0..3 for a, b, c, d) as canonical coords (p, q, r)."""
    return canonical_coords(x[2 * j], x[2 * j + 1], x[8])


def raw_trace(x: Raw) -> tuple[int, int, int]:
    return canonical_coords(x[0] + x[6], x[1] + x[7], x[8])


def sign_canonical_coords(p: int, q: int, r: int) -> tuple[int, int, int]:
    """Choose the sign of (p + q w)/r with first nonzero of (p, q) positive."""
    if p < 0 or (p == 0 and q < 0):
        return -p, -q, r
    return p, q, r


def coords_norm(field: FieldSpec, p: int, q: int, r: int) -> Fraction:
    t, n = field.trace_omega, field.norm_omega
    return Fraction(p * p + t * p * q + n * q * q, r * r)


def coords_complex(field: FieldSpec, p: int, q: int, r: int) -> complex:
    return (p + q * field.omega_complex) / r


# --------------------------------------------------------------------------


class Mat2:
    """An element of SL_2(K) with QuadRat entries, checked at construction."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, field: FieldSpec | None = None, check: bool = True):
        fld = field
        for x in (a, b, c, d):
            if isinstance(x, (QuadInt, QuadRat)):
                fld = fld or x.field
        if fld is None:
            raise TypeError("field required for integer-only matrices")
        ents = [x if isinstance(x, QuadRat) else QuadRat(x, 1, fld) for x in (a, b, c, d)]
        for name, x in zip("abcd", ents):
            object.__setattr__(self, name, x)
        if check and self.det() != 1:
            raise ValueError(f"determinant is {self.det()}, expected 1")

    def __setattr__(self, key, value):
        raise AttributeError("Mat2 is immutable")

    @property
    def field(self) -> FieldSpec:
        return self.a.field

    @classmethod
    def from_lists(cls, rows, field: FieldSpec) -> "Mat2":
        """Build from [[a, b], [c, d]] where each entry is an int, a (x, y) pair
        meaning x + y w, or a QuadInt/QuadRat."""

        def conv(e):
            if isinstance(e, (QuadInt, QuadRat)):
                return e
            if isinstance(e, int):
                return QuadInt(e, 0, field)
            if isinstance(e, (list, tuple)) and len(e) == 2:
                return QuadInt(int(e[0]), int(e[1]), field)
            if isinstance(e, (list, tuple)) and len(e) == 3:
                return QuadRat.from_coords(int(e[0]), int(e[1]), int(e[2]), field)
            raise ValueError(f"cannot read matrix entry {e!r}")

        (a, b), (c, d) = rows
        return cls(conv(a), conv(b), conv(c), conv(d), field)

    def det(self) -> QuadRat:
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple[QuadRat, QuadRat, QuadRat, QuadRat]:
        return self.a, self.b, self.c, self.d

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            check=False,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d, check=False)

    def inverse(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a, check=False)

    def trace(self) -> QuadRat:
        return self.a + self.d

    def __eq__(self, o):
        return isinstance(o, Mat2) and self.entries() == o.entries()

    def __hash__(self):
        return hash(self.entries())

    def to_raw(self) -> Raw:
        cs = [x.coords() for x in self.entries()]
        r = reduce(lambda u, v: u * v // gcd(u, v), (c[2] for c in cs), 1)
        v = []
        for p, q, rr in cs:
            v += [p * (r // rr), q * (r // rr)]
        return canon(v + [r])

    def to_complex(self) -> tuple[complex, complex, complex, complex]:
        return tuple(complex(x) for x in self.entries())

    def __repr__(self):
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


@dataclass(frozen=True)
class PslElem:
    """An element of PSL_2(K), stored in canonical +-I form."""

    raw: Raw
    field: FieldSpec = field(compare=False, repr=False)

    @classmethod
    def from_mat(cls, m: Mat2) -> "PslElem":
        return cls(m.to_raw(), m.field)

    @classmethod
    def identity(cls, field: FieldSpec) -> "PslElem":
        return cls(raw_identity(), field)

    def __mul__(self, o: "PslElem") -> "PslElem":
        f = self.field
        return PslElem(raw_mul(self.raw, o.raw, f.trace_omega, f.norm_omega), f)

    def inverse(self) -> "PslElem":
        return PslElem(raw_inv(self.raw), self.field)

    def __pow__(self, k: int) -> "PslElem":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = PslElem.identity(self.field)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return self.raw == raw_identity()

    def entry(self, j: int) -> QuadRat:
        return QuadRat.from_coords(*raw_entry(self.raw, j), self.field)

    def matrix(self) -> Mat2:
        return Mat2(*(self.entry(j) for j in range(4)), check=False)

    def to_complex(self) -> tuple[complex, complex, complex, complex]:
        f = self.field
        return tuple(coords_complex(f, *raw_entry(self.raw, j)) for j in range(4))

    def trace_coords(self) -> tuple[int, int, int]:
        """Canonical-sign trace +-tr as coords (p, q, r)."""
        return sign_canonical_coords(*raw_trace(self.raw))

    def trace_pair(self) -> QuadRat:
        return QuadRat.from_coords(*self.trace_coords(), self.field)

    def trace_complex(self) -> complex:
        return coords_complex(self.field, *self.trace_coords())

    def fixes_infinity(self) -> bool:
        return self.raw[4] == 0 and self.raw[5] == 0

    def __str__(self):
        a, b, c, d = (str(self.entry(j)) for j in range(4))
        return f"+-[[{a}, {b}], [{c}, {d}]]"


def group_ops(x: PslElem, y: PslElem) -> tuple[PslElem, PslElem, QuadRat]:
    """(x*y, x^-1, trace-pair of x*y)."""
    xy = x * y
    return xy, x.inverse(), xy.trace_pair()


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupContext:
    """A finitely generated subgroup of PSL_2(K) together with the constants
    the bounds need but which cannot be computed from the generators.

    `c_prime` is the word-length-vs-length constant and `systole` the length of
    a shortest closed geodesic; both are inputs.  `geodesic_count_exponent` is
    2 for the generic closed count c' e^{2l} and 1 for the arithmetic count
    c'' e^{l}.
    """

    field: FieldSpec
    generators: tuple[Mat2, ...]
    common_denominator: QuadInt | None = None
    c_prime: float = 1.0
    systole: float = 1.0
    geodesic_count_exponent: float = 2.0
    name: str = "custom"

    def __post_init__(self):
        if not self.generators:
            raise ValueError("at least one generator is required")
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if g.field != self.field:
                raise ValueError("generator over a different field")
            if g.det() != 1:
                raise ValueError(f"generator {g} does not have determinant 1")
        if self.c_prime <= 0 or self.systole <= 0:
            raise ValueError("c_prime and systole must be positive")
        if self.geodesic_count_exponent not in (1, 2, 1.0, 2.0):
            raise ValueError("geodesic_count_exponent must be 1 or 2")
        beta = self.common_denominator
        if beta is None:
            r = 1
            for g in gens:
                for x in g.entries():
                    rr = x.coords()[2]
                    r = r * rr // gcd(r, rr)
            beta = QuadInt(r, 0, self.field)
        for g in gens:
            for x in g.entries():
                if not (x * beta).is_integral():
                    raise ValueError(f"{beta} is not a common denominator of generator entries")
        object.__setattr__(self, "common_denominator", beta)

    @property
    def is_integral(self) -> bool:
        return all(x.is_integral() for g in self.generators for x in g.entries())

    def letters(self) -> list[tuple[int, Raw]]:
        """(signed letter, raw matrix): +i for generator i-1, -i for its inverse."""
        out = []
        for i, g in enumerate(self.generators, start=1):
            raw = g.to_raw()
            out.append((i, raw))
            out.append((-i, raw_inv(raw)))
        return out

    def word_elem(self, word: Sequence[int]) -> PslElem:
        lets = dict(self.letters())
        x = raw_identity()
        t, n = self.field.trace_omega, self.field.norm_omega
        for a in word:
            x = raw_mul(x, lets[a], t, n)
        return PslElem(x, self.field)


@dataclass(frozen=True)
class WordElem:
    word: tuple[int, ...]
    elem: PslElem
    word_length: int


def _bfs(ctx: GroupContext, depth: int, cap: int) -> Iterator[tuple[tuple[int, ...], Raw, int]]:
    t, n = ctx.field.trace_omega, ctx.field.norm_omega
    letters = ctx.letters()
    ident = raw_identity()
    seen = {ident}
    frontier = [((), ident)]
    yield (), ident, 0
    for length in range(1, depth + 1):
        nxt = []
        for word, x in frontier:
            for a, g in letters:
                y = raw_mul(x, g, t, n)
                if y in seen:
                    continue
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded(f"more than {cap} distinct elements at word length {length}")
                w = word + (a,)
                nxt.append((w, y))
                yield w, y, length
        frontier = nxt
        if not frontier:
            break


def enumerate_words(ctx: GroupContext, depth: int, cap: int = DEFAULT_ELEMENT_CAP) -> Iterator[WordElem]:
    """Every element of word length <= depth exactly once, breadth first.

    The identity comes first with length 0; each later element is tagged with
    the length at which it first appeared, which is its minimal word length.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    f = ctx.field
    for word, raw, length in _bfs(ctx, depth, cap):
        yield WordElem(word, PslElem(raw, f), length)


def enumerate_raw(ctx: GroupContext, depth: int, cap: int = DEFAULT_ELEMENT_CAP):
    """As enumerate_words but yields (word, raw tuple, length) without wrapping."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return _bfs(ctx, depth, cap)


def format_word(word: Sequence[int], names: str = "ABCDEFGH") -> str:
    if not word:
        return "1"
    return "".join(names[abs(a) - 1] if a > 0 else names[abs(a) - 1].lower() for a in word)


def parse_word(text: str, names: str = "ABCDEFGH") -> tuple[int, ...]:
    if text == "1":
        return ()
    out = []
    for ch in text:
        i = names.index(ch.upper()) + 1
        out.append(i if ch.isupper() else -i)
    return tuple(out)


# --------------------------------------------------------------------------
# constants for the trace-norm bounds


def _sqrt_up(x: Fraction) -> float:
    """A float >= sqrt(x)."""
    s = math.sqrt(x.numerator) / math.sqrt(x.denominator)
    while Fraction(s) ** 2 < x:
        s = math.nextafter(s, math.inf)
    return s


@dataclass(frozen=True)
class BoundConstants:
    """C1 bounds every embedded generator entry, C2 the common denominator.

    The squares are kept exactly; the float values are rounded up so that any
    float bound derived from them is conservative.
    """

    C1: float
    C2: float
    C1_sq: Fraction
    C2_sq: Fraction
    C3: float | None = None

    def with_c3(self, c3: float) -> "BoundConstants":
        return BoundConstants(self.C1, self.C2, self.C1_sq, self.C2_sq, c3)


def compute_entry_constants(ctx: GroupContext) -> BoundConstants:
    # For imaginary quadratic K both embeddings have the same modulus,
    # |sigma(x)|^2 = N(x).
    c1_sq = Fraction(1)
    for g in ctx.generators:
        for x in g.entries():
            c1_sq = max(c1_sq, x.norm())
    c2_sq = max(Fraction(1), Fraction(ctx.common_denominator.norm()))
    return BoundConstants(_sqrt_up(c1_sq), _sqrt_up(c2_sq), c1_sq, c2_sq)


@dataclass
class EntryBoundReport:
    depth: int
    checked: int
    passed: bool
    worst_ratio: float
    worst_word: tuple[int, ...]
    per_length_worst: dict[int, float]


def check_entry_bound(ctx: GroupContext, depth: int, constants: BoundConstants | None = None,
                      cap: int = DEFAULT_ELEMENT_CAP) -> EntryBoundReport:
    """Every entry x of an element of minimal word length w satisfies
    |sigma(x)| <= 2^(w-1) C1^w for both embeddings.

    The comparison is done on squares with exact rationals:
    N(x) <= 4^(w-1) * C1_sq^w.
    """
    consts = constants or compute_entry_constants(ctx)
    f = ctx.field
    t, n = f.trace_omega, f.norm_omega
    bounds: dict[int, Fraction] = {}
    worst, worst_word = 0.0, ()
    per_len: dict[int, float] = {}
    checked = 0
    for word, raw, w in enumerate_raw(ctx, depth, cap):
        if w == 0:
            continue
        bound = bounds.get(w)
        if bound is None:
            bound = bounds[w] = Fraction(4) ** (w - 1) * consts.C1_sq ** w
        r2 = raw[8] * raw[8]
        for j in range(4):
            p, q = raw[2 * j], raw[2 * j + 1]
            nrm = Fraction(p * p + t * p * q + n * q * q, r2)
            if nrm > bound:
                raise EntryBoundViolation(
                    f"word {format_word(word)} (length {w}): |entry|^2 = {nrm} exceeds {bound}")
            ratio = math.sqrt(nrm / bound)
            if ratio > per_len.get(w, 0.0):
                per_len[w] = ratio
            if ratio > worst:
                worst, worst_word = ratio, word
        checked += 1
    return EntryBoundReport(depth, checked, True, worst, worst_word, per_len)

"""Trace inventories, geodesic counts, prime counting and prime selection.

An inventory lists the loxodromic elements of word length <= k whose
translation length is <= l, one per +-trace.  It is complete only relative to
the depth k: a geodesic of length <= l whose shortest word is longer than k is
missed unless k >= c' * l.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from sympy import nextprime

from .geometry import ComplexLength, IsometryType, translation_length
from .matgroup import (
    DEFAULT_ELEMENT_CAP,
    BoundConstants,
    GroupContext,
    PslElem,
    coords_complex,
    enumerate_raw,
    format_word,
    raw_trace,
    sign_canonical_coords,
)
from .primes import primes_upto
from .quadfield import FieldSpec, PrimeIdealData, QuadInt, find_split_prime_ideal, is_split

log = logging.getLogger(__name__)


class NoObstruction(ValueError):
    """The inventory's norm product is 0 or 1, so it constrains no prime."""


class BoundViolation(AssertionError):
    pass


def classify_exact(field: FieldSpec, p: int, q: int, r: int, is_identity: bool = False) -> IsometryType:
    """Isometry type from an exact trace (p + q w)/r.

    The trace is real exactly when q = 0 (for either integral basis).
    """
    if is_identity:
        return IsometryType.IDENTITY
    if q != 0:
        return IsometryType.LOXODROMIC
    if abs(p) == 2 * r:
        return IsometryType.PARABOLIC
    return IsometryType.ELLIPTIC if abs(p) < 2 * r else IsometryType.LOXODROMIC


@dataclass(frozen=True)
class GeodesicRecord:
    word: tuple[int, ...]
    word_length: int
    trace_num: QuadInt
    trace_den: QuadInt
    complex_length: ComplexLength
    norm_minus: int
    norm_plus: int
    elem: PslElem = field(compare=False, repr=False)

    @property
    def length(self) -> float:
        return self.complex_length.length

    @property
    def zero_factor(self) -> bool:
        return self.norm_minus == 0 or self.norm_plus == 0


@dataclass
class TraceInventory:
    field: FieldSpec
    records: list[GeodesicRecord]
    cutoff: float
    depth: int
    product_of_norms: int
    zero_factor_words: list[tuple[int, ...]]

    @property
    def count(self) -> int:
        return len(self.records)

    def lengths(self) -> list[float]:
        return sorted(r.length for r in self.records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["word", "word_length", "trace_num", "trace_den", "length", "theta",
                    "norm_minus", "norm_plus"])
        for r in self.records:
            w.writerow([format_word(r.word), r.word_length, str(r.trace_num), str(r.trace_den),
                        repr(r.complex_length.length), repr(r.complex_length.rotation),
                        r.norm_minus, r.norm_plus])
        return buf.getvalue()


def enumerate_geodesics(ctx: GroupContext, depth: int, cutoff: float,
                        cap: int = DEFAULT_ELEMENT_CAP) -> TraceInventory:
    if depth < 1 or not cutoff > 0:
        raise ValueError("need depth >= 1 and cutoff > 0")
    f = ctx.field
    by_trace: dict[tuple[int, int, int], GeodesicRecord] = {}
    product = 1
    zero_words = []
    for word, raw, length in enumerate_raw(ctx, depth, cap):
        if length == 0:
            continue
        p, q, r = sign_canonical_coords(*raw_trace(raw))
        if (p, q, r) in by_trace:
            continue
        if classify_exact(f, p, q, r) is not IsometryType.LOXODROMIC:
            continue
        cl = translation_length(coords_complex(f, p, q, r))
        if cl.length > cutoff:
            continue
        alpha = QuadInt(p, q, f)
        beta = QuadInt(r, 0, f)
        nm = abs((alpha - 2 * beta).norm())
        np_ = abs((alpha + 2 * beta).norm())
        rec = GeodesicRecord(word, length, alpha, beta, cl, nm, np_, PslElem(raw, f))
        by_trace[(p, q, r)] = rec
        if nm == 0 or np_ == 0:
            log.warning("trace +-2 on loxodromic word %s; skipping its norm factor", format_word(word))
            zero_words.append(word)
            continue
        product *= nm * np_
    records = list(by_trace.values())
    return TraceInventory(f, records, cutoff, depth, product, zero_words)


# --------------------------------------------------------------------------
# checks of the trace-norm bound


@dataclass
class TraceNormReport:
    passed: bool
    checked: int
    c_prime: float
    worst_slack_direct: float  # min over records of log(bound) - log(norm)
    worst_slack_c3: float
    worst_word: tuple[int, ...]


def check_trace_norm_bound(inv: TraceInventory, constants: BoundConstants, ctx: GroupContext,
                           c_prime: float | None = None) -> TraceNormReport:
    """|N(alpha +- 2 beta)| <= 2 (2 C1 C2)^(c' l m) and <= C3^l for every record."""
    if constants.C3 is None:
        raise ValueError("constants must carry C3")
    cp = ctx.c_prime if c_prime is None else c_prime
    m = ctx.field.degree
    base = math.log(2 * constants.C1 * constants.C2)
    logc3 = math.log(constants.C3)
    worst_d = worst_c = math.inf
    worst_word: tuple[int, ...] = ()
    for rec in inv.records:
        ell = rec.length
        log_direct = math.log(2) + cp * ell * m * base
        log_c3 = ell * logc3
        for nrm in (rec.norm_minus, rec.norm_plus):
            if nrm == 0:
                continue
            ln = math.log(nrm)
            sd, sc = log_direct - ln, log_c3 - ln
            if sd < 0:
                raise BoundViolation(
                    f"word {format_word(rec.word)}: norm {nrm} > 2(2C1C2)^(c'lm) with c'={cp}, l={ell}")
            if sc < 0 and ell >= ctx.systole:
                raise BoundViolation(f"word {format_word(rec.word)}: norm {nrm} > C3^l, l={ell}")
            if sd < worst_d:
                worst_d, worst_word = sd, rec.word
            worst_c = min(worst_c, sc)
    return TraceNormReport(True, len(inv.records), cp, worst_d, worst_c, worst_word)


@dataclass
class GeodesicCountReport:
    sample_lengths: list[float]
    counts: list[int]
    fitted_constant: float
    exponent: float


def geodesic_count_check(inv: TraceInventory, exponent: float = 2.0, samples: int = 20) -> GeodesicCountReport:
    """Observed #(l) on a grid and the least c with #(l) <= c e^(exponent l).

    Counts are of distinct +-traces found to the inventory depth, so they are
    lower bounds for the true counts.
    """
    lengths = np.array(inv.lengths())
    if lengths.size == 0:
        return GeodesicCountReport([], [], 0.0, exponent)
    grid = np.linspace(lengths[0], inv.cutoff, samples)
    counts = np.searchsorted(lengths, grid, side="right")
    ratios = counts / np.exp(exponent * grid)
    return GeodesicCountReport(grid.tolist(), counts.tolist(), float(ratios.max()), exponent)


# --------------------------------------------------------------------------
# prime counting


@dataclass(frozen=True)
class PrimeCounting:
    x: int
    pi_x: int
    theta_x: float
    pi_split_x: int
    theta_split_x: float


def _split_mask(field: FieldSpec, ps: np.ndarray) -> np.ndarray:
    return np.fromiter((is_split(field, p) for p in ps.tolist()), dtype=bool, count=ps.size)


def prime_counts(field: FieldSpec, x: int) -> PrimeCounting:
    """pi(x), theta(x) and their restrictions to primes splitting in the field,
    over primes p <= x."""
    if x < 2:
        raise ValueError("x must be >= 2")
    ps = primes_upto(x)
    split = ps[_split_mask(field, ps)]
    theta = math.fsum(np.log(ps.astype(float)).tolist())
    theta_s = math.fsum(np.log(split.astype(float)).tolist())
    return PrimeCounting(x, int(ps.size), theta, int(split.size), theta_s)


def split_primes_iter(field: FieldSpec, start: int = 2):
    """Split primes >= start, ascending, without an upper limit."""
    p = start - 1
    while True:
        p = nextprime(p)
        if is_split(field, p):
            yield p


# --------------------------------------------------------------------------
# admissible primes


class SelectionStrategy(enum.Enum):
    SMALLEST_SPLIT = "smallest-split"
    DIRECT = "direct"


@dataclass
class PrimeCertificate:
    p: int
    prime: PrimeIdealData
    strategy: SelectionStrategy
    product_of_norms: int
    log_bound: float | None  # 2 n log(product) for the smallest-split strategy
    within_log_bound: bool | None
    skipped: list[int]
    direct_interval: tuple[int, int] | None = None
    anchor_prime: int | None = None

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "prime_ideal": {"p": self.prime.p, "f": self.prime.f, "split_root": self.prime.split_root},
            "strategy": self.strategy.value,
            "product_of_norms_digits": len(str(self.product_of_norms)),
            "log_bound": self.log_bound,
            "within_log_bound": self.within_log_bound,
            "skipped_primes": self.skipped,
            "direct_interval": list(self.direct_interval) if self.direct_interval else None,
            "anchor_prime": self.anchor_prime,
        }


def select_admissible_prime(field: FieldSpec, inv: TraceInventory | int,
                            exclude: set[int] | None = None,
                            strategy: SelectionStrategy = SelectionStrategy.SMALLEST_SPLIT,
                            c3: float | None = None, length: float | None = None,
                            minimum: int = 2) -> PrimeCertificate:
    """The smallest split prime p >= minimum not dividing the inventory's norm
    product (nor any prime in `exclude`).

    Then tr +- 2 = (alpha +- 2 beta)/beta is nonzero mod every prime above p,
    so no inventoried element lies in Gamma_1(P).

    The DIRECT strategy instead takes a prime p1 in (C3^l, 2 C3^l) and then the
    first split prime in (p1, 3 p1) not dividing the product.
    """
    product = inv if isinstance(inv, int) else inv.product_of_norms
    if product < 2:
        raise NoObstruction(f"norm product {product} gives no obstruction; enumerate deeper")
    excl = set(exclude or ())
    n = field.galois_degree
    skipped = []
    if strategy is SelectionStrategy.SMALLEST_SPLIT:
        for p in split_primes_iter(field, max(2, minimum)):
            if product % p == 0 or p in excl:
                skipped.append(p)
                continue
            bound = 2 * n * math.log(product)
            P = find_split_prime_ideal(field, p)
            return PrimeCertificate(p, P, strategy, product, bound, p < bound, skipped)
    if c3 is None or length is None:
        raise ValueError("the direct strategy needs C3 and the cutoff length")
    lo = math.floor(c3 ** length)
    hi = math.ceil(2 * c3 ** length)
    p1 = nextprime(lo)
    if p1 >= hi:
        raise ValueError(f"no prime in ({lo}, {hi})")
    for p in split_primes_iter(field, max(p1 + 1, minimum)):
        if p >= 3 * p1:
            raise ValueError(f"no admissible split prime in ({p1}, {3 * p1})")
        if product % p == 0 or p in excl:
            skipped.append(p)
            continue
        P = find_split_prime_ideal(field, p)
        return PrimeCertificate(p, P, strategy, product, None, None, skipped, (lo, hi), p1)
    raise AssertionError("unreachable")


def denominator_primes(ctx: GroupContext) -> set[int]:
    """Rational primes dividing the norm of the common denominator."""
    from sympy import primefactors

    return set(primefactors(ctx.common_denominator.norm())) if ctx.common_denominator.norm() > 1 else set()


@dataclass(frozen=True)
class SplitGapRow:
    k: int
    log_product: float
    next_prime: int
    bound: float

    @property
    def holds(self) -> bool:
        return self.next_prime < self.bound


def split_prime_gaps(field: FieldSpec, ks: range, limit: int = 10**5) -> list[SplitGapRow]:
    """For d_k = product of the first k split primes, compare p_(k+1) with
    2 n log d_k (n = 2)."""
    ps = primes_upto(limit)
    split = [int(p) for p in ps[_split_mask(field, ps)]]
    if len(split) <= max(ks):
        raise ValueError("sieve limit too small for the requested k")
    n = field.galois_degree
    rows = []
    for k in ks:
        lp = math.fsum(math.log(p) for p in split[:k])
        rows.append(SplitGapRow(k, lp, split[k], 2 * n * lp))
    return rows

"""Certificates chaining injectivity radius -> Heegaard genus -> ball volume,
and the two tower constructions (cusped Bianchi subgroups, closed groups).

Every inequality that only holds "for N large enough" is evaluated at the
actual numbers and reported with a PASS/FAIL flag and, where useful, the
threshold beyond which it holds.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

from scipy.optimize import brentq

from . import geometry
from .congruence import (
    DEFAULT_CLOSURE_CAP,
    CongruenceKind,
    ResidueField,
    index_formula,
    member,
    member_raw,
    psl2_order,
    surjectivity_check,
)
from .matgroup import (
    DEFAULT_ELEMENT_CAP,
    BoundConstants,
    GroupContext,
    PslElem,
    coords_complex,
    coords_norm,
    enumerate_raw,
    format_word,
    raw_entry,
)
from .quadfield import PrimeIdealData, SquareFreeIdeal, find_split_prime_ideal
from .spectrum import (
    PrimeCertificate,
    SelectionStrategy,
    TraceInventory,
    denominator_primes,
    enumerate_geodesics,
    select_admissible_prime,
    split_primes_iter,
)

log = logging.getLogger(__name__)

C3_MARGIN = 1e-9
LEMMA51_TOL = 1e-9


class Lemma51Violation(AssertionError):
    pass


class ChainingFailure(RuntimeError):
    pass


# --------------------------------------------------------------------------
# C3


@dataclass(frozen=True)
class ExplicitC3:
    value: float
    C1: float
    C2: float
    c_prime: float
    m: int
    s: float

    def log_margin(self, length: float) -> float:
        """log C3^l - log(2 (2 C1 C2)^(c' l m)); positive means the inequality holds."""
        return length * math.log(self.value) - math.log(2) - self.c_prime * length * self.m * math.log(
            2 * self.C1 * self.C2)


def compute_c3(constants: BoundConstants, ctx: GroupContext) -> ExplicitC3:
    """C3 = 2^(1/s) (2 C1 C2)^(c' m) (1 + 1e-9).

    Then C3^l = 2^(l/s) (2 C1 C2)^(c' l m) (1+δ)^l > 2 (2 C1 C2)^(c' l m) for l >= s.
    """
    s, cp, m = ctx.systole, ctx.c_prime, ctx.field.degree
    if not s > 0:
        raise ValueError("systole must be positive")
    value = 2 ** (1 / s) * (2 * constants.C1 * constants.C2) ** (cp * m) * (1 + C3_MARGIN)
    return ExplicitC3(value, constants.C1, constants.C2, cp, m, s)


# --------------------------------------------------------------------------
# orbit-displacement bounds for congruence subgroups


@dataclass(frozen=True)
class OrbitBound:
    kind: CongruenceKind
    norm: int
    C1: float
    C2: float
    cosh_bound: float
    t: float
    degenerate: bool

    @property
    def C1_sq(self) -> int:
        return self.norm

    @property
    def C2_sq(self) -> int:
        return 1 if self.kind is not CongruenceKind.PRINCIPAL else self.norm


def lemma51_bound(kind: CongruenceKind, ideal: SquareFreeIdeal | int) -> OrbitBound:
    """Lower bound on cosh d(gamma(zeta), zeta) over nontrivial members.

    Gamma_0(I), Gamma_1(I): |c| >= N(I)^(1/2) and |b| >= 1, bound N^(1/2)/2.
    Gamma(I): b and c both lie in I, so |c|, |b| >= N^(1/2), bound N/2 at t = 1.
    The base point is zeta = t j with t = (C2/C1)^(1/2).
    """
    norm = ideal if isinstance(ideal, int) else ideal.norm()
    root = math.sqrt(norm)
    if kind is CongruenceKind.PRINCIPAL:
        c1, c2 = root, root
    else:
        c1, c2 = root, 1.0
    cosh_bound = c1 * c2 / 2
    t = math.sqrt(c2 / c1)
    degenerate = norm < 4
    if degenerate:
        log.warning("N(I) = %d < 4: cosh bound %.4g is degenerate", norm, cosh_bound)
    return OrbitBound(kind, norm, c1, c2, cosh_bound, t, degenerate or cosh_bound <= 1)


@dataclass
class Lemma51Report:
    kind: CongruenceKind
    norm: int
    depth: int
    t: float
    cosh_bound: float
    members: int
    scored: int
    min_cosh: float
    min_word: str
    hypothesis_exceptions: int
    exception_min_cosh: float | None
    exception_words: list[str]
    passed: bool


def verify_lemma51(ctx: GroupContext, kind: CongruenceKind, ideal: SquareFreeIdeal, depth: int,
                   t: float | None = None, cap: int = DEFAULT_ELEMENT_CAP,
                   tol: float = LEMMA51_TOL) -> Lemma51Report:
    """Brute-force the orbit bound over the members of Gamma_*(I) up to word
    length `depth`.

    Elements that fix infinity without being parabolic (torsion such as
    diag(i, -i) in the Picard group) fall outside the lemma's hypothesis; they
    are reported separately and not scored.  Hypotheses (a) |c| >= C1 and
    (b) |b| >= C2 are checked exactly on the norms.
    """
    if not ctx.is_integral:
        raise ValueError("the orbit bound applies to subgroups of a Bianchi group (integral entries)")
    bound = lemma51_bound(kind, ideal)
    t = bound.t if t is None else t
    f = ctx.field
    fields = [ResidueField(P) for P in ideal.factors]
    members = scored = 0
    best, best_word = math.inf, ""
    exc_words: list[str] = []
    exc_min = None
    for word, raw, length in enumerate_raw(ctx, depth, cap):
        if length == 0 or not member_raw(raw, kind, fields):
            continue
        members += 1
        a, b, c, d = (raw_entry(raw, j) for j in range(4))
        elem = tuple(coords_complex(f, *x) for x in (a, b, c, d))
        value = geometry.orbit_cosh_distance(elem, t)
        if c[0] == 0 and c[1] == 0:
            unipotent = a == d and a[1] == 0 and abs(a[0]) == 1
            if not unipotent:
                exc_words.append(format_word(word))
                exc_min = value if exc_min is None else min(exc_min, value)
                continue
            if coords_norm(f, *b) < bound.C2_sq:
                raise Lemma51Violation(f"hypothesis (b) fails for {format_word(word)}")
        elif coords_norm(f, *c) < bound.C1_sq:
            raise Lemma51Violation(f"hypothesis (a) fails for {format_word(word)}")
        scored += 1
        if value < best:
            best, best_word = value, format_word(word)
        if value < bound.cosh_bound - tol:
            raise Lemma51Violation(
                f"{format_word(word)} = {PslElem(raw, f)}: cosh distance {value} < {bound.cosh_bound}")
    if exc_words:
        log.info("%d members fix infinity without being parabolic (outside the lemma's hypothesis)",
                 len(exc_words))
    return Lemma51Report(kind, bound.norm, depth, t, bound.cosh_bound, members, scored, best, best_word,
                         len(exc_words), exc_min, exc_words[:20], True)


# --------------------------------------------------------------------------
# certificates


@dataclass
class ExponentClaim:
    theorem: str
    lhs: float
    rhs: float
    exponent: float
    base: str
    passed: bool
    constant: float | None = None


@dataclass
class BoundCertificate:
    kind: CongruenceKind
    ideal: SquareFreeIdeal
    norm: int
    index_upper_bound: int
    index_assumption: str
    degree_bound: float
    cosh_bound: float | None
    inj_radius_lb: float
    genus_lb: float
    genus_from_radius: float
    ball_volume_lb: float
    covolume: float | None
    exponent_claim: ExponentClaim
    depth_semantics: tuple[int, float] | None = None
    flags: list[str] = field(default_factory=list)
    ceiling_exponent: float | None = None

    @property
    def passed(self) -> bool:
        return self.exponent_claim.passed

    def consistent(self, tol: float = 1e-12) -> bool:
        r = self.inj_radius_lb
        return (math.isclose(self.genus_from_radius, geometry.genus_lower_bound(r), rel_tol=tol)
                and math.isclose(self.ball_volume_lb, geometry.ball_volume(r), rel_tol=tol, abs_tol=tol)
                and self.genus_lb <= self.genus_from_radius * (1 + tol))

    def as_dict(self) -> dict:
        d = {
            "kind": self.kind.value,
            "ideal": ideal_to_dict(self.ideal),
            "norm": self.norm,
            "index_upper_bound": str(self.index_upper_bound),
            "index_assumption": self.index_assumption,
            "degree_bound": self.degree_bound,
            "cosh_bound": self.cosh_bound,
            "inj_radius_lb": self.inj_radius_lb,
            "genus_lb": self.genus_lb,
            "genus_from_radius": self.genus_from_radius,
            "ball_volume_lb": self.ball_volume_lb,
            "covolume": self.covolume,
            "exponent_claim": asdict(self.exponent_claim),
            "depth_semantics": list(self.depth_semantics) if self.depth_semantics else None,
            "flags": list(self.flags),
            "ceiling_exponent": self.ceiling_exponent,
            "status": "PASS" if self.passed else "FAIL",
        }
        return d


def ideal_to_dict(ideal: SquareFreeIdeal) -> list[dict]:
    return [{"p": P.p, "f": P.f, "split_root": P.split_root} for P in ideal.factors]


def _degree_bound(kind: CongruenceKind, norm: int) -> float:
    """The power-of-N bound on the index used in the exponent claims.

    For Gamma_0 this is (N + 1) for a prime; for composite I the exact index
    prod (N(P) + 1) is larger, so certificates use the exact index there.
    """
    if kind is CongruenceKind.HECKE0:
        return float(norm + 1)
    return 0.5 * norm ** (3 if kind is CongruenceKind.PRINCIPAL else 2)


def _ceiling_exponent(genus_lb: float, covolume: float | None, label: str) -> float | None:
    """Effective exponent e with genus_lb = covolume^e.

    Heegaard genus grows at most like covolume^(1/2), so a certificate with
    e > 1/2 would signal an error in the chain; it is logged, not raised.
    """
    if covolume is None or covolume <= 1 or genus_lb <= 0:
        return None
    e = math.log(genus_lb) / math.log(covolume)
    if e > 0.5:
        log.warning("%s: genus bound exceeds the exponent-1/2 ceiling (effective %.4f)", label, e)
    else:
        log.debug("%s: effective covolume exponent %.4f <= 1/2", label, e)
    return e


DEFAULT_THEOREM = {
    CongruenceKind.HECKE0: "genus-index",
    CongruenceKind.HECKE1: "ball-hecke1",
    CongruenceKind.PRINCIPAL: "ball-principal",
}


def genus_ball_certificate(kind: CongruenceKind, ideal: SquareFreeIdeal, eps: float = 0.05,
                           d_index: int = 1, v0: float | None = None, theorem: str | None = None,
                           index_assumption: str = "formula-assumed") -> BoundCertificate:
    """Radius, genus and ball-volume bounds for the cover of Gamma'_*(I).

    r = arccosh(x)/2 with x the orbit cosh bound.  The genus bound is stored in
    the weakened closed form (1/2) sqrt(x/2), i.e. N^(1/4)/4 for the Hecke
    kinds; `genus_from_radius` keeps cosh(r)/2 = (1/2) sqrt((x+1)/2).
    """
    theorem = theorem or DEFAULT_THEOREM[kind]
    ob = lemma51_bound(kind, ideal)
    x = ob.cosh_bound
    flags = []
    if ob.degenerate:
        flags.append("degenerate-norm")
    r = 0.5 * math.acosh(x) if x >= 1 else 0.0
    genus_lb = 0.5 * math.sqrt(x / 2)
    genus_r = geometry.genus_lower_bound(r)
    ball = geometry.ball_volume(r)
    index = d_index * index_formula(kind, ideal)
    covol = v0 * index if v0 is not None else None
    deg = float(index) if kind is CongruenceKind.HECKE0 else _degree_bound(kind, ob.norm) * d_index
    if theorem == "genus-index":
        if kind is not CongruenceKind.HECKE0:
            raise ValueError("the genus-index claim is for Gamma_0")
        e = 0.25 - eps
        rhs = float(index) ** e
        claim = ExponentClaim("genus-index", genus_lb, rhs, e, "index", genus_lb >= rhs)
    elif theorem == "ball-covolume":
        if v0 is None:
            raise ValueError("the ball-covolume claim needs the base covolume v0")
        e = 0.5 - eps
        rhs = covol ** e
        claim = ExponentClaim("ball-covolume", ball, rhs, e, "covolume", ball > rhs)
    elif theorem in ("ball-hecke1", "ball-principal"):
        e = 0.25 if theorem == "ball-hecke1" else 1 / 3
        rhs = deg ** e
        const = ball / rhs
        claim = ExponentClaim(theorem, ball, rhs, e, "degree_bound", const > 0 and r > 0, const)
    else:
        raise ValueError(f"unknown theorem {theorem!r}")
    cert = BoundCertificate(kind, ideal, ob.norm, index, index_assumption, deg, x, r, genus_lb, genus_r,
                            ball, covol, claim, None, flags)
    cert.ceiling_exponent = _ceiling_exponent(genus_lb, covol, f"{kind.value} N={ob.norm}")
    return cert


@dataclass(frozen=True)
class NormChain:
    """The radius -> genus -> ball chain evaluated from N(I) alone."""

    kind: CongruenceKind
    norm: int
    cosh_bound: float
    inj_radius_lb: float
    genus_lb: float
    ball_volume_lb: float
    degree_bound: float
    constant: float  # ball / degree_bound^(1/3) (principal), ^(1/4) (Hecke1)


def norm_chain(kind: CongruenceKind, norm: int, d_index: int = 1) -> NormChain:
    """Same numbers as genus_ball_certificate, for norms that need not be
    the norm of a square-free ideal (e.g. 625 in Z[i])."""
    ob = lemma51_bound(kind, norm)
    x = ob.cosh_bound
    r = 0.5 * math.acosh(x) if x >= 1 else 0.0
    deg = _degree_bound(kind, norm) * d_index
    e = 1 / 3 if kind is CongruenceKind.PRINCIPAL else 0.25
    ball = geometry.ball_volume(r)
    return NormChain(kind, norm, x, r, 0.5 * math.sqrt(x / 2), ball, deg, ball / deg ** e)


# --------------------------------------------------------------------------
# the cusped tower


@dataclass
class TowerLevel:
    level_index: int
    cumulative_ideal: SquareFreeIdeal
    certificate: BoundCertificate
    prime_certificate: PrimeCertificate | None = None
    chaining: dict | None = None

    def as_dict(self) -> dict:
        return {
            "level": self.level_index,
            "ideal": ideal_to_dict(self.cumulative_ideal),
            "certificate": self.certificate.as_dict(),
            "prime_certificate": self.prime_certificate.as_dict() if self.prime_certificate else None,
            "chaining": self.chaining,
        }


def hecke0_threshold(eps: float, d_index: int = 1) -> float:
    """Least real N with N^(1/4)/4 >= (d (N + 1))^(1/4 - eps)."""
    if not 0 < eps < 0.25:
        raise ValueError("eps must lie in (0, 1/4)")
    b = 0.25 - eps

    def g(lnN):
        return 0.25 * lnN - math.log(4) - b * (math.log(d_index) + math.log1p(math.exp(lnN)))

    hi = 1.0
    while g(hi) < 0:
        hi *= 2
    if g(0.0) >= 0:
        return 1.0
    return math.exp(brentq(g, 0.0, hi, xtol=1e-14, rtol=1e-15))


def _index_assumption(ctx: GroupContext, P: PrimeIdealData, cap: int) -> str:
    if psl2_order(P.norm) > cap:
        return "formula-assumed"
    res = surjectivity_check(ctx, P, cap)
    if not res.surjective:
        return f"not-surjective:{res.status.value}"
    return "verified"


def build_tower_noncompact(ctx: GroupContext, eps: float, levels: int, d_index: int = 1,
                           v0: float | None = None, closure_cap: int = DEFAULT_CLOSURE_CAP,
                           start: int | None = None) -> list[TowerLevel]:
    """Gamma'_0(P_1 ... P_i) for ascending split primes with
    N(P_1..P_i)^(1/4)/4 >= (d prod (N(P_j) + 1))^(1/4 - eps) at every level."""
    if not 0 < eps < 0.25:
        raise ValueError("eps must lie in (0, 1/4)")
    if levels < 0:
        raise ValueError("levels must be >= 0")
    if levels == 0:
        return []
    thr = hecke0_threshold(eps, d_index)
    b = 0.25 - eps
    excluded = denominator_primes(ctx)
    first = max(2, math.ceil(thr)) if start is None else start
    out: list[TowerLevel] = []
    factors: list[PrimeIdealData] = []
    it = split_primes_iter(ctx.field, first)
    while len(out) < levels:
        p = next(it)
        if p in excluded:
            continue
        P = find_split_prime_ideal(ctx.field, p)
        # per-level condition for P alone
        if p ** 0.25 / 4 < (d_index * (p + 1)) ** b:
            continue
        ideal = SquareFreeIdeal(factors + [P])
        assumption = _index_assumption(ctx, P, closure_cap)
        if assumption.startswith("not-surjective"):
            log.info("skipping %s: reduction not surjective", P)
            continue
        if len(out) > 0:
            prev = out[-1].certificate.index_assumption
            if prev != "verified":
                assumption = "formula-assumed"
        cert = genus_ball_certificate(CongruenceKind.HECKE0, ideal, eps, d_index, v0, "genus-index", assumption)
        if not cert.passed:
            continue
        cert.flags.append(f"threshold={thr:.6g}")
        factors.append(P)
        out.append(TowerLevel(len(out) + 1, ideal, cert))
    return out


# --------------------------------------------------------------------------
# the closed tower


def closed_exponents(ctx: GroupContext, eps: float) -> tuple[float, float]:
    """(level exponent, tower exponent): (1/8 - eps/2, 1/8 - eps), or
    (1/4 - eps/2, 1/4 - eps) for the arithmetic geodesic count."""
    if not 0 < eps < 0.25:
        raise ValueError("eps must lie in (0, 1/4)")
    base = 0.125 if ctx.geodesic_count_exponent == 2 else 0.25
    return base - eps / 2, base - eps


def chaining_threshold(prev_norm: int, a: float, b: float) -> float:
    """Least x with (x^2/2)^a > (prev^2 x^2/2)^b, as a real number."""
    if a <= b:
        return math.inf
    return math.exp(b * math.log(prev_norm) / (a - b) + 0.5 * math.log(2))


def chaining_holds(new_norm: int, total_norm: int, a: float, b: float) -> bool:
    return a * (2 * math.log(new_norm) - math.log(2)) > b * (2 * math.log(total_norm) - math.log(2))


def build_tower_closed(ctx: GroupContext, eps: float, depth: int, cutoff: float, levels: int = 2,
                       cutoff_step: float | None = None,
                       strategy: SelectionStrategy = SelectionStrategy.SMALLEST_SPLIT,
                       c3: ExplicitC3 | None = None, cap: int = DEFAULT_ELEMENT_CAP,
                       closure_cap: int = DEFAULT_CLOSURE_CAP) -> list[TowerLevel]:
    """Gamma_1(P_1 ... P_i) where P_i avoids every trace in the depth-k
    inventory up to cutoff l_i = cutoff + (i - 1) * cutoff_step.

    Systole and genus claims are relative to the enumeration depth: they say
    no element of word length <= k and length <= l_i survives in the cover.
    """
    a, b = closed_exponents(ctx, eps)
    step = cutoff if cutoff_step is None else cutoff_step
    excluded = denominator_primes(ctx)
    out: list[TowerLevel] = []
    factors: list[PrimeIdealData] = []
    for i in range(1, levels + 1):
        ell = cutoff + (i - 1) * step
        inv = enumerate_geodesics(ctx, depth, ell, cap)
        prev_norm = math.prod(P.norm for P in factors) if factors else 1
        need = chaining_threshold(prev_norm, a, b)
        if not math.isfinite(need):
            raise ChainingFailure("tower exponent must be below the level exponent")
        pc = select_admissible_prime(ctx.field, inv, exclude=excluded | {P.p for P in factors},
                                     strategy=strategy, minimum=math.floor(need) + 1,
                                     c3=c3.value if c3 else None, length=ell)
        P = pc.prime
        if any(member(rec.elem, CongruenceKind.HECKE1, P) for rec in inv.records):
            raise AssertionError(f"selected {P} fails to exclude an inventoried element")
        factors.append(P)
        ideal = SquareFreeIdeal(factors)
        total = ideal.norm()
        chain_ok = chaining_holds(P.norm, total, a, b)
        if not chain_ok:
            raise ChainingFailure(f"need N(P_{i}) > {need:.6g}")
        r = ell / 2
        genus = math.exp(ell / 2) / 4
        deg = 0.5 * total ** 2
        rhs = deg ** b
        level_rhs = (0.5 * P.norm ** 2) ** a
        claim = ExponentClaim("closed-genus", genus, rhs, b, "degree_bound", genus >= rhs)
        assumption = _index_assumption(ctx, P, closure_cap)
        if i > 1 and out[-1].certificate.index_assumption != "verified":
            assumption = "formula-assumed"
        cert = BoundCertificate(
            CongruenceKind.HECKE1, ideal, total, index_formula(CongruenceKind.HECKE1, ideal), assumption,
            deg, None, r, genus, geometry.genus_lower_bound(r), geometry.ball_volume(r), None, claim,
            (depth, ell), ["systole-relative-to-depth"])
        chaining = {
            "level_exponent": a,
            "tower_exponent": b,
            "required_norm": need,
            "new_norm": P.norm,
            "holds": chain_ok,
            "level_lemma_lhs": genus,
            "level_lemma_rhs": level_rhs,
            "level_lemma_holds": genus >= level_rhs,
            "inventory_records": inv.count,
            "nonmembership_verified": True,
        }
        out.append(TowerLevel(i, ideal, cert, pc, chaining))
    return out


# --------------------------------------------------------------------------
# length thresholds for the closed tower


@dataclass
class InequalityReport:
    name: str
    length: float
    lhs_log: float
    rhs_log: float
    holds: bool
    threshold: float | None
    marginal: bool


@dataclass
class Theorem14Report:
    length: float
    eps: float
    arithmetic: bool
    c1: float
    ineq_36: InequalityReport
    ineq_37: InequalityReport
    radius_claim: ExponentClaim
    ball_claim: ExponentClaim
    c1_check_passed: bool
    c1_check_min_ratio: float
    notes: list[str]


def _convex_threshold(f, slope: float, curvature_coef: float, lo_floor: float) -> tuple[float | None, bool]:
    """For f(l) = slope*l - curvature_coef*ln(l) + const (convex), the point
    beyond which f >= 0 for good.  Returns (threshold, marginal)."""
    if slope <= 0:
        return None, True
    lm = max(curvature_coef / slope, 1e-12)
    if f(lm) >= 0:
        return lo_floor, False
    hi = 2 * lm
    while f(hi) < 0:
        hi *= 2
    return max(lo_floor, brentq(f, lm, hi, xtol=1e-12)), False


def theorem14_bounds(ctx: GroupContext, level: TowerLevel, eps: float, c3: ExplicitC3, v0: float,
                     c1: float = 0.999 * math.pi / 2) -> Theorem14Report:
    """Both sides of

        e^(l/2)   >= (8 n^2 (c' l e^(g l))^2 log^2 C3)^(a)            (radius)
        c1 e^l    >= (vol 8 n^2 (c' l e^(g l))^2 log^2 C3)^(b)         (ball)

    with (a, b) = (1/8 - eps/2, 1/4 - eps) and g = 2, or (1/4 - eps/2,
    1/2 - eps) and g = 1 in the arithmetic setting.
    """
    if not 0 < c1 < math.pi / 2:
        raise ValueError("c1 must lie in (0, pi/2)")
    arith = ctx.geodesic_count_exponent == 1
    g = 1.0 if arith else 2.0
    a = (0.25 if arith else 0.125) - eps / 2
    b = (0.5 if arith else 0.25) - eps
    n = ctx.field.galois_degree
    cp = ctx.c_prime
    logc3 = math.log(c3.value)
    if logc3 <= 0:
        raise ValueError("C3 must exceed 1")
    const = math.log(8 * n * n) + 2 * math.log(cp) + 2 * math.log(logc3)
    ell = level.certificate.depth_semantics[1] if level.certificate.depth_semantics else 2 * level.certificate.inj_radius_lb

    def f36(l):
        return l / 2 - a * (const + 2 * math.log(l) + 2 * g * l)

    def f37(l):
        return math.log(c1) + l - b * (math.log(v0) + const + 2 * math.log(l) + 2 * g * l)

    floor = ctx.systole
    t36, m36 = _convex_threshold(f36, 0.5 - 2 * a * g, 2 * a, floor)
    t37, m37 = _convex_threshold(f37, 1 - 2 * b * g, 2 * b, floor)
    rhs36 = a * (const + 2 * math.log(ell) + 2 * g * ell)
    rhs37 = b * (math.log(v0) + const + 2 * math.log(ell) + 2 * g * ell)
    i36 = InequalityReport("radius-length", ell, ell / 2, rhs36, f36(ell) >= 0, t36, m36)
    i37 = InequalityReport("ball-length", ell, math.log(c1) + ell, rhs37, f37(ell) >= 0, t37, m37)

    r = ell / 2
    index = level.certificate.degree_bound
    e_r = 0.125 - eps if not arith else 0.25 - eps
    e_b = 0.25 - eps if not arith else 0.5 - eps
    rc = ExponentClaim("radius-index", math.exp(r), index ** e_r, e_r, "degree_bound", math.exp(r) > index ** e_r)
    vol = v0 * index
    ball = geometry.ball_volume(r)
    bc = ExponentClaim("ball-volume", ball, vol ** e_b, e_b, "covolume", ball > vol ** e_b)

    rs = [6 + 0.25 * k for k in range(97)]
    ratios = [geometry.ball_volume(x) / (c1 * math.exp(2 * x)) for x in rs]
    notes = ["radius bound is the lower injectivity radius relative to the enumeration depth"]
    if m36 or m37:
        notes.append("eps = 0: both sides grow at the same exponential rate; no finite threshold")
    return Theorem14Report(ell, eps, arith, c1, i36, i37, rc, bc, min(ratios) >= 1, min(ratios), notes)

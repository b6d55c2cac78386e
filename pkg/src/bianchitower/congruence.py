"""Reduction mod prime ideals, congruence-subgroup membership and indices.

Membership in Gamma(I), Gamma_0(I), Gamma_1(I) for square-free I is decided
factor by factor on a fixed SL_2 representative.  The +-I ambiguity is global:
g is in Gamma(I) when one sign s makes s*g = I modulo every factor at once,
and likewise for the unipotent pattern of Gamma_1(I).
"""

from __future__ import annotations

import enum
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .matgroup import GroupContext, Mat2, PslElem, Raw
from .quadfield import (
    DenominatorNotInvertible,
    PrimeIdealData,
    ResidueField,
    SquareFreeIdeal,
)

log = logging.getLogger(__name__)

DEFAULT_CLOSURE_CAP = 10**6


class CongruenceKind(enum.Enum):
    PRINCIPAL = "principal"
    HECKE0 = "hecke0"
    HECKE1 = "hecke1"

    @classmethod
    def parse(cls, text: str) -> "CongruenceKind":
        aliases = {"gamma": cls.PRINCIPAL, "gamma0": cls.HECKE0, "gamma1": cls.HECKE1,
                   "0": cls.HECKE0, "1": cls.HECKE1}
        t = text.strip().lower()
        if t in aliases:
            return aliases[t]
        return cls(t)


class UnsupportedIdeal(ValueError):
    pass


class ClosureCapExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# residue matrices


def _reduce_sl(raw: Raw, F: ResidueField) -> tuple[int, int, int, int]:
    r = raw[8]
    try:
        return tuple(F.reduce_coords(raw[2 * j], raw[2 * j + 1], r) for j in range(4))
    except DenominatorNotInvertible as exc:
        raise DenominatorNotInvertible(F.p, f"matrix entries have denominator {r}, not invertible mod {F.prime}") from exc


def _neg4(F: ResidueField, m):
    return tuple(F.neg(x) for x in m)


def _canon4(F: ResidueField, m):
    # pick the sign making (c, d, a, b) smallest, so a lower-triangular
    # pattern reads with c (or d) as the small residue
    n = _neg4(F, m)
    return m if (m[2], m[3], m[0], m[1]) <= (n[2], n[3], n[0], n[1]) else n


def _mul4(F: ResidueField, x, y):
    a, b, c, d = x
    e, f, g, h = y
    if F.f == 1:
        p = F.p
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)
    add, mul = F.add, F.mul
    return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
            add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))


def _inv4(F: ResidueField, x):
    a, b, c, d = x
    return (d, F.neg(b), F.neg(c), a)


@dataclass(frozen=True)
class ResidueMat:
    """An element of PSL_2(O/P), stored as the smaller of the two sign
    representatives (entries are int codes of the residue field)."""

    field: ResidueField
    entries: tuple[int, int, int, int]

    @classmethod
    def make(cls, F: ResidueField, m) -> "ResidueMat":
        return cls(F, _canon4(F, tuple(m)))

    def __mul__(self, o: "ResidueMat") -> "ResidueMat":
        return ResidueMat.make(self.field, _mul4(self.field, self.entries, o.entries))

    def inverse(self) -> "ResidueMat":
        return ResidueMat.make(self.field, _inv4(self.field, self.entries))

    def det(self) -> int:
        F = self.field
        a, b, c, d = self.entries
        return F.sub(F.mul(a, d), F.mul(b, c))

    def values(self):
        F = self.field
        return [F.split(x) if F.f == 2 else x for x in self.entries]


def reduce_mat(g: PslElem | Mat2, prime: PrimeIdealData) -> ResidueMat:
    raw = g.raw if isinstance(g, PslElem) else g.to_raw()
    F = ResidueField(prime)
    return ResidueMat.make(F, _reduce_sl(raw, F))


# --------------------------------------------------------------------------
# membership


def _matches(F: ResidueField, m, kind: CongruenceKind, sign: int) -> bool:
    a, b, c, d = m
    if c != 0:
        return False
    if kind is CongruenceKind.HECKE0:
        return True
    one = F.code(sign)
    if a != one or d != one:
        return False
    return kind is CongruenceKind.HECKE1 or b == 0


def member(g: PslElem | Mat2, kind: CongruenceKind, ideal: SquareFreeIdeal | PrimeIdealData) -> bool:
    if isinstance(ideal, PrimeIdealData):
        ideal = SquareFreeIdeal([ideal])
    raw = g.raw if isinstance(g, PslElem) else g.to_raw()
    reds = []
    for P in ideal.factors:
        F = ResidueField(P)
        reds.append((F, _reduce_sl(raw, F)))
    return any(all(_matches(F, m, kind, s) for F, m in reds) for s in (1, -1))


def member_raw(raw: Raw, kind: CongruenceKind, fields: Sequence[ResidueField]) -> bool:
    """member() on a raw tuple with residue fields built once by the caller."""
    reds = [(F, _reduce_sl(raw, F)) for F in fields]
    if kind is CongruenceKind.HECKE0:
        return all(m[2] == 0 for _, m in reds)
    return any(all(_matches(F, m, kind, s) for F, m in reds) for s in (1, -1))


# --------------------------------------------------------------------------
# indices


def psl2_order(q: int) -> int:
    """|PSL_2(F_q)| = q(q^2 - 1)/gcd(2, q - 1)."""
    return q * (q * q - 1) // math.gcd(2, q - 1)


def index_formula(kind: CongruenceKind, ideal: SquareFreeIdeal | PrimeIdealData) -> int:
    """[Gamma : Gamma_*(I)] when Gamma surjects onto PSL_2(O/P) for every factor.

    Only odd residue characteristics are supported: in characteristic 2 the
    halving for +-I does not occur.
    """
    if isinstance(ideal, PrimeIdealData):
        ideal = SquareFreeIdeal([ideal])
    norms = [P.norm for P in ideal.factors]
    if any(q % 2 == 0 for q in norms):
        raise UnsupportedIdeal("index formulas need odd residue characteristic")
    if kind is CongruenceKind.PRINCIPAL:
        full = math.prod(q * (q * q - 1) for q in norms)
        value = full // 2
        if len(norms) == 1:
            assert value == psl2_order(norms[0])
        return value
    if kind is CongruenceKind.HECKE0:
        return math.prod(q + 1 for q in norms)
    return math.prod(q * q - 1 for q in norms) // 2


# --------------------------------------------------------------------------
# closure and surjectivity


@dataclass(frozen=True)
class FiniteClosure:
    field: ResidueField
    elements: frozenset
    generators: tuple

    @property
    def order(self) -> int:
        return len(self.elements)


def closure(gens: Iterable[ResidueMat], cap: int = DEFAULT_CLOSURE_CAP) -> FiniteClosure:
    """The subgroup generated by gens, by breadth-first multiplication."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    F = gens[0].field
    steps = []
    for g in gens:
        steps.append(g.entries)
        steps.append(_inv4(F, g.entries))
    one = _canon4(F, (1, 0, 0, 1))
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for s in steps:
                y = _canon4(F, _mul4(F, x, s))
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise ClosureCapExceeded(f"closure exceeds {cap} elements")
                    nxt.append(y)
        frontier = nxt
    return FiniteClosure(F, frozenset(seen), tuple(g.entries for g in gens))


class SurjectivityStatus(enum.Enum):
    SURJECTIVE = "surjective"
    PROPER = "proper_subgroup"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class SurjectivityResult:
    status: SurjectivityStatus
    prime: PrimeIdealData
    order: int | None
    expected: int

    @property
    def surjective(self) -> bool:
        return self.status is SurjectivityStatus.SURJECTIVE


def _reduced_generators(ctx: GroupContext, prime: PrimeIdealData) -> list[ResidueMat]:
    return [reduce_mat(g, prime) for g in ctx.generators]


def surjectivity_check(ctx: GroupContext, prime: PrimeIdealData, cap: int = DEFAULT_CLOSURE_CAP) -> SurjectivityResult:
    expected = psl2_order(prime.norm)
    if expected > cap:
        raise ClosureCapExceeded(f"|PSL_2(F_{prime.norm})| = {expected} exceeds the closure cap {cap}")
    try:
        gens = _reduced_generators(ctx, prime)
    except DenominatorNotInvertible:
        return SurjectivityResult(SurjectivityStatus.EXCLUDED, prime, None, expected)
    order = closure(gens, cap).order
    status = SurjectivityStatus.SURJECTIVE if order == expected else SurjectivityStatus.PROPER
    return SurjectivityResult(status, prime, order, expected)


def _act(F: ResidueField, m, pt):
    """Action on a point of P^1(F_q) given as normalized (x, y)."""
    a, b, c, d = m
    x, y = pt
    u = F.add(F.mul(a, x), F.mul(b, y))
    v = F.add(F.mul(c, x), F.mul(d, y))
    if v == 0:
        return (1, 0)
    return (F.mul(u, F.inv(v)), 1)


def coset_count_orbit(ctx: GroupContext, prime: PrimeIdealData) -> int:
    """Size of the orbit of [1:0] in P^1(O/P) under the reduced generators.

    For a surjective reduction this is N(P) + 1 = [Gamma : Gamma_0(P)].
    """
    F = ResidueField(prime)
    gens = [g.entries for g in _reduced_generators(ctx, prime)]
    steps = gens + [_inv4(F, g) for g in gens]
    start = (1, 0)
    seen = {start}
    stack = [start]
    while stack:
        pt = stack.pop()
        for s in steps:
            q = _act(F, s, pt)
            if q not in seen:
                seen.add(q)
                stack.append(q)
    if len(seen) < prime.norm + 1:
        log.warning("orbit of [1:0] mod %s has size %d < N(P)+1 = %d: action not transitive",
                    prime, len(seen), prime.norm + 1)
    return len(seen)

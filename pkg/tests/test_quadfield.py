from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from bianchitower.quadfield import (
    DenominatorNotInvertible,
    FieldSpec,
    PrimeIdealData,
    QuadInt,
    QuadRat,
    ResidueField,
    SplittingError,
    Splitting,
    SquareFreeIdeal,
    complex_embeddings,
    enumerate_split_primes,
    find_split_prime_ideal,
    ideal_norm,
    prime_ideal_of,
    prime_ideals_above,
    reduce_scalar,
    splitting_type,
)

FIELDS = [1, 2, 3, 5, 7, 11, 19, 43]
small = st.integers(-10**6, 10**6)


@st.composite
def field_pair(draw):
    K = FieldSpec(draw(st.sampled_from(FIELDS)))
    x = QuadInt(draw(small), draw(small), K)
    y = QuadInt(draw(small), draw(small), K)
    return K, x, y


def test_field_invariants():
    assert FieldSpec(1).discriminant == -4
    assert FieldSpec(3).discriminant == -3
    assert FieldSpec(2).discriminant == -8
    assert FieldSpec(7).omega_is_half and not FieldSpec(5).omega_is_half
    for d in FIELDS:
        K = FieldSpec(d)
        assert K.degree == K.galois_degree == 2


@pytest.mark.parametrize("d", [0, -1, 4, 12, 18])
def test_field_rejects_non_squarefree(d):
    with pytest.raises(ValueError):
        FieldSpec(d)


def test_norm_examples(gauss, eisenstein):
    assert QuadInt(2, 1, gauss).norm() == 5
    assert eisenstein.omega.norm() == 1
    assert QuadInt(0, 0, gauss).norm() == 0


def test_omega_satisfies_minpoly():
    for d in FIELDS:
        K = FieldSpec(d)
        w = K.omega
        assert w * w - K.trace_omega * w + K.norm_omega == 0
        assert abs(complex(w) ** 2 - K.trace_omega * complex(w) + K.norm_omega) < 1e-9


@given(field_pair())
def test_norm_multiplicative(data):
    K, x, y = data
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.norm() >= 0
    assert x * x.conj() == x.norm()


@given(field_pair())
def test_ring_axioms(data):
    K, x, y = data
    z = QuadInt(3, -7, K)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - y + y == x
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), rel=1e-9, abs=1e-6)


@given(field_pair())
def test_complex_modulus_is_norm(data):
    K, x, _ = data
    s1, s2 = complex_embeddings(x)
    assert abs(s1) ** 2 == pytest.approx(x.norm(), rel=1e-9, abs=1e-9)
    assert abs(s2) == pytest.approx(abs(s1), rel=1e-12)


@given(field_pair())
def test_quadrat_division_roundtrip(data):
    K, x, y = data
    if y.is_zero():
        return
    q = x / y
    assert q * y == x
    assert q.norm() == Fraction(x.norm(), y.norm())


def test_quadrat_equality_is_cross_multiplicative(gauss):
    a = QuadRat(QuadInt(2, 4, gauss), QuadInt(6, 0, gauss))
    b = QuadRat(QuadInt(1, 2, gauss), QuadInt(3, 0, gauss))
    assert a == b and hash(a) == hash(b)
    with pytest.raises(ZeroDivisionError):
        a / QuadInt(0, 0, gauss)


def test_splitting_examples(gauss):
    assert splitting_type(gauss, 5) is Splitting.SPLIT
    assert splitting_type(gauss, 3) is Splitting.INERT
    assert splitting_type(gauss, 2) is Splitting.RAMIFIED
    with pytest.raises(ValueError):
        splitting_type(gauss, 9)


def _brute_split(K, p):
    return sorted(r for r in range(p) if (r * r - K.trace_omega * r + K.norm_omega) % p == 0)


@pytest.mark.parametrize("d", [1, 3, 7])
def test_splitting_trichotomy(d):
    K = FieldSpec(d)
    for p in sympy.primerange(2, 10**4):
        kind = splitting_type(K, p)
        roots = _brute_split(K, p) if p < 500 else None
        if kind is Splitting.RAMIFIED:
            assert K.discriminant % p == 0
        elif roots is not None:
            assert len(roots) == (2 if kind is Splitting.SPLIT else 0)


def test_split_prime_ideal_examples(gauss, eisenstein):
    P = find_split_prime_ideal(gauss, 5)
    assert P.split_root == 2 and P.norm == 5
    assert find_split_prime_ideal(gauss, 5, 3).split_root == 3
    P7 = find_split_prime_ideal(eisenstein, 7)
    # both primes over 7: images of sqrt(-3) are the square roots of -3 = 4
    assert {P7.sqrt_image, P7.conjugate().sqrt_image} == {2, 5}
    assert (2 * 2) % 7 == (-3) % 7
    with pytest.raises(SplittingError):
        find_split_prime_ideal(gauss, 3)


@pytest.mark.parametrize("d", FIELDS)
def test_split_roots_sum_and_product(d):
    K = FieldSpec(d)
    for p in enumerate_split_primes(K, 200):
        r1, r2 = K.minpoly_roots_mod(p)
        assert (r1 + r2) % p == K.trace_omega % p
        assert (r1 * r2) % p == K.norm_omega % p


def test_prime_ideal_of_generator(gauss):
    P = prime_ideal_of(QuadInt(2, 1, gauss))
    assert P.split_root == 3 and P.contains(QuadInt(2, 1, gauss))
    assert not P.contains(QuadInt(2, -1, gauss))
    assert P.conjugate().contains(QuadInt(2, -1, gauss))


def test_prime_ideal_rejects_bad_root(gauss):
    with pytest.raises(ValueError):
        PrimeIdealData(gauss, 5, 1, 1, Splitting.SPLIT)


def test_ideal_norm_examples(gauss, eisenstein):
    P5 = find_split_prime_ideal(gauss, 5)
    (P3,) = prime_ideals_above(gauss, 3)
    assert ideal_norm(SquareFreeIdeal([P5])) == 5
    assert ideal_norm(SquareFreeIdeal([P5, P3])) == 45
    assert SquareFreeIdeal([find_split_prime_ideal(eisenstein, 7)]).norm() == 7
    with pytest.raises(ValueError):
        SquareFreeIdeal([P5, P5])


def test_enumerate_split_primes_examples(gauss, eisenstein):
    assert enumerate_split_primes(gauss, 20) == [5, 13, 17]
    assert enumerate_split_primes(eisenstein, 20) == [7, 13, 19]
    assert enumerate_split_primes(gauss, 2) == []
    assert enumerate_split_primes(FieldSpec(7), 2) == [2]  # 2 splits in Q(sqrt(-7))


def test_reduce_scalar_examples(gauss, p_2_plus_i):
    assert reduce_scalar(gauss.omega, p_2_plus_i) == 3
    assert reduce_scalar(7, p_2_plus_i) == 2
    (P2,) = prime_ideals_above(gauss, 2)
    half = QuadRat(QuadInt(1, 0, gauss), QuadInt(2, 0, gauss))
    with pytest.raises(DenominatorNotInvertible):
        reduce_scalar(half, P2)


def _primes_up_to_norm(K, bound):
    out = []
    for p in sympy.primerange(2, bound + 1):
        for P in prime_ideals_above(K, p):
            if P.norm <= bound:
                out.append(P)
    return out


@given(st.sampled_from([1, 3, 7]), small, small, small, small, st.data())
def test_reduction_is_homomorphism(d, a, b, c, e, data):
    K = FieldSpec(d)
    P = data.draw(st.sampled_from(_primes_up_to_norm(K, 100)))
    x, y = QuadInt(a, b, K), QuadInt(c, e, K)
    rx, ry = reduce_scalar(x, P), reduce_scalar(y, P)
    assert reduce_scalar(x + y, P) == rx + ry
    assert reduce_scalar(x * y, P) == rx * ry
    assert P.contains(x) == (rx == 0)


@pytest.mark.parametrize("d", [1, 3, 2])
def test_inert_residue_field_is_a_field(d):
    K = FieldSpec(d)
    for p in sympy.primerange(3, 51):
        if splitting_type(K, p) is not Splitting.INERT:
            continue
        (P,) = prime_ideals_above(K, p)
        F = ResidueField(P)
        q = p * p
        for x in range(1, q):
            assert F.pow(x, q - 1) == 1
            assert F.mul(x, F.inv(x)) == 1

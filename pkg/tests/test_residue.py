"""Tests for residue rings, order quotients, CRT, splitting, finite fields."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from cycord.errors import (
    DivisionByZero,
    RamifiedPrime,
    RepeatedPrime,
    TooLargeToEnumerate,
)
from cycord.extension import IdealSpec
from cycord.residue import (
    CompositeIdeal,
    FiniteField,
    FpView,
    brute_force_ideals,
    crt_decompose,
    crt_recombine,
    factor_prime,
    ideal_elements,
    invert_unipotent,
    quotient_of,
    residue_ring,
    skew_poly_ideal_chain,
    trace_form_discriminant,
)

coords = st.integers(min_value=-6, max_value=6)


def order_elements(algebra):
    pair = st.tuples(coords, coords)
    ext = algebra.ext

    def build(rows):
        return algebra.element(ext.from_ints(*row) for row in rows)

    row = st.tuples(*[pair] * ext.n)
    return st.tuples(*[row] * algebra.n).map(build)


@pytest.fixture(scope="module")
def q_gold(golden):
    return quotient_of(golden, IdealSpec(golden.ext.base.element(1, 1)))


@pytest.fixture(scope="module")
def q_nilp(golden_1pi):
    return quotient_of(golden_1pi, IdealSpec(golden_1pi.ext.base.element(1, 1)))


# -- residue ring S = O_K/mO_K ------------------------------------------------


def test_residue_ring_size(golden):
    base = golden.ext.base
    assert residue_ring(golden.ext, base.element(1, 1)).size == 4
    assert residue_ring(golden.ext, base.element(3)).size == 81
    assert residue_ring(golden.ext, base.element(0, 2)).size == 16


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_residue_reduction_is_ring_hom(golden, data):
    ext = golden.ext
    S = residue_ring(ext, ext.base.element(1, 1))
    pair = st.tuples(coords, coords)
    elems = st.tuples(*[pair] * ext.n).map(lambda rows: ext.from_ints(*rows))
    x = data.draw(elems)
    y = data.draw(elems)
    assert S.from_ok(x + y) == S.from_ok(x) + S.from_ok(y)
    assert S.from_ok(x * y) == S.from_ok(x) * S.from_ok(y)
    assert S.from_ok(x.sigma()) == S.from_ok(x).sigma()
    assert S.from_ok(ext.one) == S.one


def test_residue_lift_is_section(golden):
    S = residue_ring(golden.ext, golden.ext.base.element(1, 1))
    for s in S.elements():
        assert S.from_ok(s.lift()) == s


def test_residue_encode_decode(golden):
    S = residue_ring(golden.ext, golden.ext.base.element(3))
    for code in (0, 1, 37, 80):
        assert S.decode(code).encode() == code


# -- quotient ring Lambda/I ----------------------------------------------------


def test_quotient_cardinality(q_gold, golden, golden_1pi):
    assert q_gold.cardinality == 16
    assert q_gold.char == 2
    base = golden.ext.base
    Q2 = quotient_of(golden, IdealSpec(base.element(1, 1), 2))
    assert Q2.cardinality == 256
    Q3 = quotient_of(golden, IdealSpec(base.element(3)))
    assert Q3.cardinality == 81 ** 2
    assert Q3.char == 3


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_quotient_reduction_is_ring_hom(golden, q_gold, data):
    x = data.draw(order_elements(golden))
    y = data.draw(order_elements(golden))
    r = q_gold.reduce
    assert r(x + y) == r(x) + r(y)
    assert r(x * y) == r(x) * r(y)
    assert r(golden.one) == q_gold.one
    assert r(golden.z) == q_gold.z


def test_quotient_canonical_section(q_gold):
    for q in q_gold.elements():
        lifted = q_gold.lift(q)
        assert q_gold.reduce(lifted) == q
        # canonical coordinates round-trip through the residue table
        for c, s in zip(lifted.zcoords, q.zcoords):
            assert s.lift() == c


def test_quotient_z_relations(q_gold, q_nilp):
    for Q in (q_gold, q_nilp):
        # z^n equals the image of u
        assert Q.z ** Q.n == Q.from_residue(Q.ubar)
        # z s = sigma(s) z for every residue symbol
        for s in Q.S.elements():
            left = Q.z * Q.from_residue(s)
            right = Q.from_residue(Q.S.sigma(s)) * Q.z
            assert left == right
    assert q_nilp.z ** q_nilp.n == q_nilp.zero  # u = 1+i reduces to 0


def test_quotient_encode_decode(q_gold):
    for code in (0, 1, 7, 15):
        assert q_gold.decode(code).encode() == code


def test_quotient_enumeration_limit(golden):
    Q3 = quotient_of(golden, IdealSpec(golden.ext.base.element(3)))
    with pytest.raises(TooLargeToEnumerate):
        list(Q3.elements(limit=100))


def test_random_element_reproducible(q_gold):
    r1, r2 = random.Random(5), random.Random(5)
    a = [q_gold.random_element(r1).encode() for _ in range(10)]
    b = [q_gold.random_element(r2).encode() for _ in range(10)]
    assert a == b
    assert len(set(a)) > 1


# -- unipotent inversion -------------------------------------------------------


def test_invert_unipotent(q_nilp):
    for s in q_nilp.S.elements():
        x = q_nilp.one + q_nilp.from_residue(s) * q_nilp.z
        inv = invert_unipotent(q_nilp, x)
        assert x * inv == q_nilp.one
        assert inv * x == q_nilp.one


def test_invert_unipotent_rejects_non_units(q_nilp):
    with pytest.raises(DivisionByZero):
        invert_unipotent(q_nilp, q_nilp.z)
    with pytest.raises(DivisionByZero):
        invert_unipotent(q_nilp, q_nilp.zero)


# -- CRT -----------------------------------------------------------------------


def composite_quotient(algebra):
    base = algebra.ext.base
    ideal = CompositeIdeal((IdealSpec(base.element(1, 1)), IdealSpec(base.element(3))))
    return quotient_of(algebra, ideal)


def test_crt_round_trip(golden):
    Q = composite_quotient(golden)
    rng = random.Random(11)
    for _ in range(200):
        x = Q.random_element(rng)
        parts = crt_decompose(x)
        assert len(parts) == 2
        assert crt_recombine(parts, Q) == x


def test_crt_components_are_homs(golden):
    Q = composite_quotient(golden)
    rng = random.Random(12)
    for _ in range(50):
        x = Q.random_element(rng)
        y = Q.random_element(rng)
        for px, py, pxy in zip(crt_decompose(x), crt_decompose(y), crt_decompose(x * y)):
            assert px * py == pxy


def test_composite_ideal_modulus(golden):
    base = golden.ext.base
    ideal = CompositeIdeal((IdealSpec(base.element(1, 1), 2), IdealSpec(base.element(3))))
    assert ideal.modulus == base.element(0, 2) * base.element(3)
    assert str(ideal) == "(1+i)^2 * (3)"


def test_composite_ideal_rejects_repeats(golden):
    base = golden.ext.base
    with pytest.raises(RepeatedPrime):
        CompositeIdeal((IdealSpec(base.element(1, 1)), IdealSpec(base.element(1, 1), 2)))
    # associates count as the same prime
    with pytest.raises(RepeatedPrime):
        CompositeIdeal((IdealSpec(base.element(1, 1)), IdealSpec(base.element(1, -1))))
    with pytest.raises(ValueError):
        CompositeIdeal(())


# -- prime splitting -----------------------------------------------------------


def test_trace_form_discriminant(golden, gauss):
    assert trace_form_discriminant(golden.ext) == golden.ext.base.element(5)
    assert trace_form_discriminant(gauss.ext) == gauss.ext.base.element(-4)


@pytest.mark.parametrize(
    "algebra_name,alpha,g,f",
    [
        ("golden_u_i", (1, 1), 1, 2),
        ("golden_u_i", (3, 0), 2, 1),
        ("gauss_over_Q", (5, 0), 2, 1),
        ("gauss_over_Q", (3, 0), 1, 2),
    ],
)
def test_factor_prime(algebra_name, alpha, g, f):
    from cycord.order import load_algebra

    ext = load_algebra(algebra_name).ext
    sp = factor_prime(ext, ext.base.element(*alpha))
    assert (sp.g, sp.f) == (g, f)
    assert sp.g * sp.f == ext.n
    S = residue_ring(ext, ext.base.element(*alpha))
    total = S.zero
    for v in sp.idempotents:
        assert S.mul(v, v) == v
        total = total + v
    assert total == S.one
    # sigma cycles the primitive idempotents
    assert sp.idempotents[0].sigma((1 if g == 1 else 1)) == sp.idempotents[1 % g]


def test_factor_prime_ramified(golden, gauss):
    with pytest.raises(RamifiedPrime):
        factor_prime(golden.ext, golden.ext.base.element(2, 1))
    with pytest.raises(RamifiedPrime):
        factor_prime(gauss.ext, gauss.ext.base.element(2))


# -- ideals of small quotients ---------------------------------------------------


def test_skew_poly_ideal_chain(q_nilp):
    chain = skew_poly_ideal_chain(q_nilp)
    assert [I.label for I in chain] == ["<z>", "<z^2>"]
    assert len(chain[0].elements) == 4
    assert len(chain[1].elements) == 1  # z^2 = u = 0 here
    # chain is decreasing
    assert chain[1].elements <= chain[0].elements


def test_ideal_elements_matches_chain(q_nilp):
    chain = skew_poly_ideal_chain(q_nilp)
    direct = ideal_elements(q_nilp, [q_nilp.z])
    assert direct == chain[0].elements


def test_brute_force_ideals(q_nilp):
    found = brute_force_ideals(q_nilp)
    sizes = sorted(len(s) for s in found)
    assert sizes == [1, 4, 16]
    chain = skew_poly_ideal_chain(q_nilp)
    assert chain[0].elements in found


def test_brute_force_ideals_simple_case(q_gold):
    # u = i stays a unit mod (1+i)... it does not: i is a unit, so the
    # quotient is simple and the only ideals are 0 and the whole ring
    found = brute_force_ideals(q_gold)
    assert sorted(len(s) for s in found) == [1, 16]


# -- FpView --------------------------------------------------------------------


def test_fp_view_round_trip_and_products(q_gold):
    view = FpView(q_gold)
    rng = random.Random(3)
    import numpy as np

    for _ in range(50):
        x = q_gold.random_element(rng)
        y = q_gold.random_element(rng)
        assert view.element(view.digits(x)) == x
        X = np.array([view.digits(x)], dtype=np.int64)
        Y = np.array([view.digits(y)], dtype=np.int64)
        assert tuple(view.mul_digits(X, Y)[0]) == view.digits(x * y)


# -- abstract finite fields -------------------------------------------------------


@pytest.mark.parametrize("p,m", [(2, 1), (2, 3), (3, 2), (5, 1)])
def test_finite_field_laws(p, m):
    ff = FiniteField(p, m)
    assert ff.size == p ** m
    elems = list(ff.elements())
    assert len(elems) == ff.size
    rng = random.Random(p * 10 + m)
    picks = [elems[rng.randrange(ff.size)] for _ in range(12)]
    for x in picks:
        for y in picks:
            assert x + y == y + x
            assert x * y == y * x
            for w in picks[:4]:
                assert (x * y) * w == x * (y * w)
                assert x * (y + w) == x * y + x * w
        if not x.is_zero:
            assert x * x.inverse() == ff.one
        assert x.frobenius() == x ** p


def test_finite_field_generator_order():
    ff = FiniteField(3, 2)
    gen = ff.generator()
    seen = set()
    acc = ff.one
    for _ in range(ff.size - 1):
        acc = acc * gen
        seen.add(acc.val)
    assert len(seen) == ff.size - 1
    assert acc == ff.one


def test_finite_field_modulus_is_reproducible():
    assert FiniteField(2, 3).modulus == FiniteField(2, 3).modulus
    with pytest.raises(ValueError):
        FiniteField(2, 0)
    with pytest.raises(ValueError):
        FiniteField(2, 2, modulus=(1, 1))  # not degree m monic
    with pytest.raises(ZeroDivisionError):
        FiniteField(2, 1).inv(0)

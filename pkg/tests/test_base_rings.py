import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycord.base_rings import (
    EISENSTEIN,
    GAUSSIAN,
    RATIONAL,
    euclidean_divmod,
    exact_div,
    divides,
    format_element,
    invert_mod,
    is_prime_element,
    parse_element,
    quotient_ring,
    ring_by_name,
    xgcd,
)
from cycord.errors import DivisionByZero

RINGS = [RATIONAL, GAUSSIAN, EISENSTEIN]

coords = st.integers(min_value=-30, max_value=30)


def elements(ring):
    if ring is RATIONAL:
        return st.builds(lambda a: ring.element(a), coords)
    return st.builds(lambda a, b: ring.element(a, b), coords, coords)


@pytest.mark.parametrize("ring", RINGS)
def test_ring_constants(ring):
    assert ring.zero + ring.one == ring.one
    assert ring.one * ring.one == ring.one
    assert all(u * u.conjugate() == ring.one or u.norm() == 1 for u in ring.units())


def test_unit_counts():
    assert len(RATIONAL.units()) == 2
    assert len(GAUSSIAN.units()) == 4
    assert len(EISENSTEIN.units()) == 6


def test_ring_by_name():
    assert ring_by_name("Z") is RATIONAL
    assert ring_by_name("Z[i]") is GAUSSIAN
    assert ring_by_name("Z[w]") is EISENSTEIN
    with pytest.raises(ValueError):
        ring_by_name("Z[sqrt2]")


@given(elements(GAUSSIAN), elements(GAUSSIAN), elements(GAUSSIAN))
def test_gaussian_ring_laws(x, y, z):
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(elements(EISENSTEIN), elements(EISENSTEIN))
def test_eisenstein_norm_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


@pytest.mark.parametrize("ring", RINGS)
@given(data=st.data())
def test_divmod_is_euclidean(ring, data):
    x = data.draw(elements(ring))
    m = data.draw(elements(ring).filter(lambda e: not e.is_zero))
    q, r = euclidean_divmod(x, m)
    assert q * m + r == x
    assert r.norm() < m.norm()


def test_divmod_zero_modulus():
    with pytest.raises(DivisionByZero):
        euclidean_divmod(GAUSSIAN.one, GAUSSIAN.zero)


def test_divmod_tie_break_is_canonical():
    # several remainders of 1 mod (1+i) share norm 1; the tie break keeps
    # the lexicographically least (a, b) remainder, which is -1
    m = GAUSSIAN.element(1, 1)
    q1, r1 = euclidean_divmod(GAUSSIAN.one, m)
    q2, r2 = euclidean_divmod(GAUSSIAN.one, m)
    assert (q1, r1) == (q2, r2)
    assert r1 == GAUSSIAN.element(-1)
    assert quotient_ring(GAUSSIAN, m).reduce(GAUSSIAN.one) == GAUSSIAN.element(-1)


@pytest.mark.parametrize("ring", RINGS)
@given(data=st.data())
def test_xgcd_bezout(ring, data):
    x = data.draw(elements(ring))
    y = data.draw(elements(ring))
    if x.is_zero and y.is_zero:
        return
    g, a, b = xgcd(x, y)
    assert a * x + b * y == g
    assert not g.is_zero
    assert divides(g, x) and divides(g, y)


def test_exact_div():
    x = GAUSSIAN.element(5, 5)
    d = GAUSSIAN.element(1, 1)
    assert exact_div(x, d) * d == x
    with pytest.raises(ValueError):
        exact_div(GAUSSIAN.one, GAUSSIAN.element(2))


def test_invert_mod():
    m = GAUSSIAN.element(2, 1)  # norm 5
    for a in (GAUSSIAN.one, GAUSSIAN.element(0, 1), GAUSSIAN.element(1, 1)):
        inv = invert_mod(a, m)
        q = quotient_ring(GAUSSIAN, m)
        assert q.reduce(a * inv) == q.reduce(GAUSSIAN.one)


@pytest.mark.parametrize("ring,prime,composite", [
    (RATIONAL, "2", "4"),
    (RATIONAL, "3", "6"),
    (RATIONAL, "5", "1"),
    (GAUSSIAN, "1+i", "2"),
    (GAUSSIAN, "2+i", "5"),
    (GAUSSIAN, "3", "3+i"),
    (EISENSTEIN, "2", "4"),
    (EISENSTEIN, "1-w", "3"),
])
def test_is_prime_element(ring, prime, composite):
    assert is_prime_element(ring.parse(prime))
    assert not is_prime_element(ring.parse(composite))


@pytest.mark.parametrize("ring", RINGS)
@given(data=st.data())
def test_parse_format_round_trip(ring, data):
    x = data.draw(elements(ring))
    assert parse_element(ring, format_element(x)) == x


def test_parse_examples():
    assert GAUSSIAN.parse("1+i") == GAUSSIAN.element(1, 1)
    assert GAUSSIAN.parse("-2i") == GAUSSIAN.element(0, -2)
    assert EISENSTEIN.parse("1-w") == EISENSTEIN.element(1, -1)
    assert RATIONAL.parse("-7") == RATIONAL.element(-7)


@pytest.mark.parametrize("modulus,size", [
    ("1+i", 2), ("2", 4), ("2+i", 5), ("3", 9),
])
def test_quotient_sizes(modulus, size):
    q = quotient_ring(GAUSSIAN, GAUSSIAN.parse(modulus))
    assert len(q.elements()) == size


def test_residue_table_matches_reduce():
    m = GAUSSIAN.element(1, 1)
    q = quotient_ring(GAUSSIAN, m)
    t = q.table()
    els = q.elements()
    for x in els:
        for y in els:
            assert t.add[t.encode(x)][t.encode(y)] == t.encode(q.reduce(x + y))
            assert t.mul[t.encode(x)][t.encode(y)] == t.encode(q.reduce(x * y))
    # zero and one are the canonical representatives, not the raw inputs
    assert t.decode(t.zero) == q.reduce(GAUSSIAN.zero)
    assert t.decode(t.one) == q.reduce(GAUSSIAN.one)

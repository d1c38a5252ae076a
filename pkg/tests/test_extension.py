"""Tests for cyclic ring extensions O_K over a base ring."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from cycord.base_rings import GAUSSIAN
from cycord.errors import IncompatibleRings
from cycord.extension import IdealSpec, extension_from_dict
from cycord.order import SHIPPED_ALGEBRAS, load_algebra

EMBED_TOL = 1e-9

coords = st.integers(min_value=-9, max_value=9)


def ok_elements(ext):
    pair = st.tuples(coords, coords)
    return st.tuples(*[pair] * ext.n).map(lambda rows: ext.from_ints(*rows))


@pytest.mark.parametrize("name", SHIPPED_ALGEBRAS)
def test_shipped_specs_validate(name):
    ext = load_algebra(name).ext
    ext.validate()  # raises on any structural defect
    assert ext.n >= 2
    assert len(ext.embeddings) == ext.n


def test_element_coordinate_checks(golden):
    ext = golden.ext
    with pytest.raises(ValueError):
        ext.element([ext.base.one])
    with pytest.raises(IncompatibleRings):
        ext.element([1, 2])


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_ring_laws(golden, data):
    ext = golden.ext
    x = data.draw(ok_elements(ext))
    y = data.draw(ok_elements(ext))
    w = data.draw(ok_elements(ext))
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + w == x + (y + w)
    assert (x * y) * w == x * (y * w)
    assert x * (y + w) == x * y + x * w
    assert x * ext.one == x
    assert x + ext.zero == x
    assert x - x == ext.zero


@pytest.mark.parametrize("name", SHIPPED_ALGEBRAS)
def test_sigma_is_ring_automorphism_of_order_n(name):
    ext = load_algebra(name).ext
    xs = [ext.basis_element(i) + ext.one for i in range(ext.n)]
    for x in xs:
        for y in xs:
            assert (x * y).sigma() == x.sigma() * y.sigma()
            assert (x + y).sigma() == x.sigma() + y.sigma()
    # order exactly n: fixes the base, moves the generator
    theta = ext.basis_element(1)
    assert theta.sigma(ext.n) == theta
    assert theta.sigma() != theta
    c = ext.from_base(ext.base.element(3))
    assert c.sigma() == c


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_embeddings_multiplicative(golden, data):
    ext = golden.ext
    x = data.draw(ok_elements(ext))
    y = data.draw(ok_elements(ext))
    for e in range(ext.n):
        lhs = (x * y).embed(e)
        rhs = x.embed(e) * y.embed(e)
        assert abs(lhs - rhs) <= EMBED_TOL * max(1.0, abs(rhs))


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_embeddings_follow_sigma_orbit(golden, data):
    ext = golden.ext
    x = data.draw(ok_elements(ext))
    for e in range(ext.n):
        assert abs(x.embed(e) - x.sigma(e).embed(0)) <= EMBED_TOL


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_field_norm_lands_in_base_and_is_multiplicative(golden, data):
    ext = golden.ext
    x = data.draw(ok_elements(ext))
    y = data.draw(ok_elements(ext))
    nx = ext.field_norm(x)
    assert nx.scalar_part() is not None
    assert ext.field_norm(x * y) == nx * ext.field_norm(y)
    assert ext.field_norm(x.sigma()) == nx


def test_field_norm_pinned_values(golden):
    ext = golden.ext
    # N(theta) = theta * sigma(theta) = theta * (1 - theta) = -(theta^2 - theta) = -1
    theta = ext.basis_element(1)
    assert ext.field_norm(theta).scalar_part() == ext.base.element(-1)
    two = ext.from_base(ext.base.element(2))
    assert ext.field_norm(two).scalar_part() == ext.base.element(4)


def test_min_poly_satisfied(golden):
    ext = golden.ext
    theta = ext.basis_element(1)
    # theta^2 = theta + 1 for the golden ratio
    assert theta * theta == theta + ext.one


def test_scalar_part(golden):
    ext = golden.ext
    assert ext.one.scalar_part() == ext.base.one
    assert ext.basis_element(1).scalar_part() is None


def test_ideal_spec_validation():
    with pytest.raises(ValueError):
        IdealSpec(GAUSSIAN.element(1, 1), 0)
    with pytest.raises(ValueError):
        IdealSpec(GAUSSIAN.element(2))  # 2 = -i (1+i)^2 is not prime
    q = IdealSpec(GAUSSIAN.element(1, 1), 2)
    assert q.modulus == GAUSSIAN.element(0, 2)
    assert q.contains(GAUSSIAN.element(1, 1))
    assert not q.contains(GAUSSIAN.one)
    assert str(q) == "(1+i)^2"
    assert str(IdealSpec(GAUSSIAN.element(1, 1))) == "(1+i)"


def _golden_dict():
    import importlib.resources as resources

    text = resources.files("cycord.data").joinpath("golden_u_i.json").read_text()
    return json.loads(text)


def test_extension_from_dict_round_trip(golden):
    ext = extension_from_dict(_golden_dict())
    assert ext == golden.ext
    assert ext.name == "golden_u_i"


def test_extension_from_dict_rejects_broken_sigma():
    data = _golden_dict()
    data["sigma_matrix"] = [["1", "0"], ["0", "1"]]  # identity has order 1
    with pytest.raises(ValueError):
        extension_from_dict(data)


def test_extension_from_dict_rejects_broken_table():
    data = _golden_dict()
    data["mult_table"][1][1] = ["1", "0"]  # theta^2 = 1 breaks min_poly
    with pytest.raises(ValueError):
        extension_from_dict(data)

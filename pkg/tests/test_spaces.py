import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GOLDEN_DXY, H, close, coord, height, lam
from geokit import spaces
from geokit.errors import DegenerateError, DomainError, RangeError, ShapeError

upper = st.tuples(coord, height)


def test_pnorm_values():
    assert spaces.pnorm((3.0, 4.0), 2) == 5.0
    assert math.isclose(spaces.pnorm((1.0, 1.0), 3), 2 ** (1 / 3), rel_tol=1e-15)
    assert spaces.pnorm((0.0, 0.0), 3) == 0.0
    # no overflow for huge entries
    assert math.isclose(spaces.pnorm((1e300, 1e300), 3), 1e300 * 2 ** (1 / 3), rel_tol=1e-14)
    with pytest.raises(RangeError):
        spaces.pnorm((1.0,), 1.0)


def test_duality_pair():
    # p = 2: plain dot product
    assert spaces.duality_pair((1.0, 2.0), (3.0, -1.0), 2) == 1.0
    # j(v) for v = (1,1), p = 3: |v|^(-1) (1, 1) with |v| = 2^(1/3)
    assert math.isclose(spaces.duality_pair((1.0, 0.0), (1.0, 1.0), 3), 2 ** (-1 / 3), rel_tol=1e-15)
    assert spaces.duality_pair((1.0, 2.0), (0.0, 0.0), 3) == 0.0
    with pytest.raises(ShapeError):
        spaces.duality_pair((1.0,), (1.0, 2.0), 3)


@given(st.tuples(coord, coord), st.floats(1.2, 6))
def test_duality_pair_norming(v, p):
    # <v, j(v)> = |v|^2
    n = spaces.pnorm(v, p)
    assert close(spaces.duality_pair(v, v, p), n * n)


def test_halfplane_distance_golden():
    assert abs(spaces.halfplane_dist((0, 1), (1, 1)) - GOLDEN_DXY) <= 1e-12
    assert abs(spaces.halfplane_dist((0, 1), (0, 2)) - math.log(2)) <= 1e-15


def test_halfplane_domain():
    with pytest.raises(DomainError):
        spaces.halfplane_dist((0, 0), (0, 1))
    with pytest.raises(ShapeError):
        spaces.halfplane_dist((0, 1, 2), (0, 1))


def test_arcosh_stable():
    assert spaces.arcosh_stable(1.0) == 0.0
    # arcosh(1 + u) ~ sqrt(2u) for small u
    assert math.isclose(spaces.arcosh_stable(1 + 1e-14), math.sqrt(2 * 1.0000000000000000e-14), rel_tol=1e-2)
    assert math.isclose(spaces.arcosh_stable(math.cosh(3.0)), 3.0, rel_tol=1e-14)
    with pytest.raises(DomainError):
        spaces.arcosh_stable(0.5)


def test_midpoint_closed_forms():
    m = spaces.halfplane_combine((0, 1), (0, 2), 0.5)
    assert m[0] == 0.0 and abs(m[1] - math.sqrt(2)) <= 1e-12
    m = spaces.halfplane_combine((1, 1), (0, 2), 0.5)
    assert abs(m[0] - 2 / 3) <= 1e-12 and abs(m[1] - 2 * math.sqrt(5) / 3) <= 1e-12
    m = spaces.halfplane_combine((1, 1), (-1, 1), 0.5)
    assert abs(m[0]) <= 1e-15 and abs(m[1] - math.sqrt(2)) <= 1e-15


@given(upper, upper)
def test_combine_matches_closed_form_midpoint(x, y):
    a = spaces.halfplane_combine(x, y, 0.5)
    b = spaces.halfplane_midpoint(x, y)
    assert spaces.halfplane_dist(a, b) <= 1e-9


@given(upper, upper, lam)
def test_combine_is_geodesic(x, y, t):
    z = spaces.halfplane_combine(x, y, t)
    d = spaces.halfplane_dist(x, y)
    assert z[1] > 0
    assert close(spaces.halfplane_dist(x, z), t * d, 1e-8)
    assert close(spaces.halfplane_dist(z, y), (1 - t) * d, 1e-8)


@given(upper, upper, lam)
def test_combine_stays_on_carrier(x, y, t):
    if x == y:
        return
    g = spaces.halfplane_geodesic(x, y)
    assert g.contains(x) and g.contains(y)
    assert g.contains(spaces.halfplane_combine(x, y, t), 1e-7)


def test_geodesic_classification():
    assert spaces.halfplane_geodesic((2, 1), (2, 5)) == spaces.Ray(2.0)
    g = spaces.halfplane_geodesic((1, 1), (0, 2))
    assert isinstance(g, spaces.Semicircle)
    assert abs(g.a + 1) <= 1e-15 and abs(g.r - math.sqrt(5)) <= 1e-15
    with pytest.raises(DegenerateError):
        spaces.halfplane_geodesic((0, 1), (0, 1))


def test_combine_endpoints_and_range():
    x, y = (0.3, 1.7), (-2.0, 0.4)
    assert spaces.halfplane_combine(x, y, 0) == x
    assert spaces.halfplane_combine(x, y, 1) == y
    with pytest.raises(RangeError):
        spaces.halfplane_combine(x, y, 1.5)


def test_ray_geodesic_point_exact():
    assert spaces.halfplane_combine((1, 1), (1, 16), 0.75) == (1.0, 8.0)


def test_product_primitives():
    fac = (H, H)
    x = ((0.0, 1.0), (0.0, 1.0))
    y = ((1.0, 1.0), (0.0, 2.0))
    assert close(spaces.product_dist(fac, x, y), math.hypot(GOLDEN_DXY, math.log(2)), 1e-15)
    with pytest.raises(ShapeError):
        spaces.product_dist(fac, x, (x[0],))

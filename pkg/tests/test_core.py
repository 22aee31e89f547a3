import math

import pytest
from hypothesis import given

from conftest import GOLDEN_DXY, H, H_R23, R22, R23, SPACES, close, lam, points
from geokit import Product, combine, dist, midpoint, pi_value, quasilinearize
from geokit.core import HalfPlane, PNorm
from geokit.errors import CapabilityError, DomainError, RangeError, ShapeError


def test_dist_examples():
    assert dist(R22, (3, 4), (0, 0)) == 5.0
    assert abs(dist(H, (0, 1), (1, 1)) - GOLDEN_DXY) <= 1e-12
    want = math.sqrt(GOLDEN_DXY**2 + 2 ** (2 / 3))
    assert abs(dist(H_R23, ((0, 1), (0, 0)), ((1, 1), (1, 1))) - want) <= 1e-12
    assert dist(Product((PNorm(1, 2), PNorm(1, 2))), ((0,), (0,)), ((3,), (4,))) == 5.0


def test_shape_and_domain_errors():
    with pytest.raises(ShapeError):
        dist(R22, (1, 2, 3), (0, 0))
    with pytest.raises(DomainError):
        dist(H, (0, -1), (0, 1))
    with pytest.raises(ShapeError):
        dist(H_R23, ((0, 1),), ((0, 1),))
    with pytest.raises(ShapeError):
        dist(R22, "ab", (0, 0))
    with pytest.raises(DomainError):
        dist(R22, (math.nan, 0), (0, 0))


def test_descriptor_validation_and_flags():
    with pytest.raises(RangeError):
        PNorm(2, 1.0)
    with pytest.raises(RangeError):
        PNorm(0, 2)
    with pytest.raises(RangeError):
        Product(())
    assert R22.claims_cat0 and not R23.claims_cat0
    assert H.claims_cat0 and H.has_pi
    assert not H_R23.claims_cat0 and H_R23.has_pi
    assert Product((H, H)).claims_cat0


def test_combine_examples():
    assert combine(H, (0.2, 3), (5, 1), 0) == (0.2, 3.0)
    m = midpoint(H, (0, 1), (0, 2))
    assert m[0] == 0 and abs(m[1] - math.sqrt(2)) <= 1e-12
    m = combine(H, (1, 1), (0, 2), 0.5)
    assert abs(m[0] - 2 / 3) <= 1e-12 and abs(m[1] - 2 * math.sqrt(5) / 3) <= 1e-12
    assert midpoint(R23, (0, 0), (2, 2)) == (1.0, 1.0)
    with pytest.raises(RangeError):
        combine(R22, (0, 0), (1, 1), -0.1)


def test_quasilinearize_examples():
    assert abs(quasilinearize(R22, (1, 0), (0, 0), (0, 1), (0, 0))) <= 1e-12
    d = lambda a, b: dist(H, a, b)
    x, y, u, v = (0, 1), (1, 1), (0, 1), (0, 2)
    want = 0.5 * (d(x, v) ** 2 + d(y, u) ** 2 - d(y, v) ** 2)
    assert abs(quasilinearize(H, x, y, u, v) - want) <= 1e-12


def test_pi_examples():
    assert pi_value(R22, (1, 0), (0, 0), (1, 0), (0, 0)) == 1.0
    P = Product((R22, R22))
    # factor pairings 1 and 2
    assert pi_value(P, ((1, 0), (2, 0)), ((0, 0), (0, 0)), ((1, 0), (1, 0)), ((0, 0), (0, 0))) == 3.0


def test_pi_capability():
    class NoPi(HalfPlane):
        has_pi = False

    with pytest.raises(CapabilityError):
        pi_value(NoPi(), (0, 1), (0, 1), (0, 1), (0, 1))


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_metric_properties(space):
    @given(points(space), points(space))
    def run(x, y):
        d = dist(space, x, y)
        assert d >= 0
        assert d == dist(space, y, x)
        assert dist(space, x, x) == 0

    run()


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_combine_geodesic_property(space):
    @given(points(space), points(space), lam)
    def run(x, y, t):
        z = combine(space, x, y, t)
        d = dist(space, x, y)
        assert close(dist(space, x, z), t * d, 1e-8)
        assert close(dist(space, z, y), (1 - t) * d, 1e-8)
        assert combine(space, x, y, 1) == space.validate(y)

    run()


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_pi_p1(space):
    @given(points(space), points(space))
    def run(x, y):
        assert close(pi_value(space, x, y, x, y), dist(space, x, y) ** 2, 1e-9)
        assert close(quasilinearize(space, x, y, x, y), dist(space, x, y) ** 2, 1e-9)

    run()


def test_product_pi_is_sum_of_factors():
    @given(points(H_R23), points(H_R23), points(H_R23), points(H_R23))
    def run(x, y, u, v):
        parts = [f.pi(*c) for f, *c in zip(H_R23.factors, x, y, u, v)]
        assert close(pi_value(H_R23, x, y, u, v), math.fsum(parts), 1e-12)

    run()

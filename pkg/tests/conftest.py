import math

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from geokit import HalfPlane, PNorm, Product

settings.register_profile("geokit", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("geokit")

H = HalfPlane()
R22 = PNorm(2, 2)
R23 = PNorm(2, 3)
H_R23 = Product((H, R23))
HH = Product((H, H))
SPACES = [R22, R23, H, H_R23]

coord = st.floats(-20, 20, allow_nan=False, allow_infinity=False)
height = st.floats(0.05, 20, allow_nan=False, allow_infinity=False)
lam = st.floats(0, 1, allow_nan=False)


def points(space):
    if isinstance(space, PNorm):
        return st.tuples(*([coord] * space.dim))
    if isinstance(space, HalfPlane):
        return st.tuples(coord, height)
    return st.tuples(*(points(f) for f in space.factors))


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


GOLDEN_DXY = math.log((3 + math.sqrt(5)) / 2)
GOLDEN_DMIDS = math.log(math.sqrt(10) / 2)

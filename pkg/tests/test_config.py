import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import H, H_R23
from geokit import HalfPlane, PNorm, Product
from geokit import resolvent as rs
from geokit.config import (
    parse_map_config,
    parse_point,
    parse_space_config,
    parse_t_list,
    space_to_config,
)
from geokit.errors import ConfigError


def test_space_examples():
    assert parse_space_config('{"kind":"halfplane"}') == HalfPlane()
    assert parse_space_config('{"kind":"pnorm","dim":2,"p":3}') == PNorm(2, 3)
    text = '{"kind":"product","factors":[{"kind":"halfplane"},{"kind":"pnorm","dim":2,"p":3}]}'
    assert parse_space_config(text) == H_R23


@pytest.mark.parametrize(
    "text,fragment",
    [
        ('{"kind":"halfplane",\n "extra":1}', "unknown key"),
        ('{"kind":"sphere"}', "unknown space kind"),
        ('{"kind":"pnorm","dim":2,"p":1}', "p must be"),
        ('{"kind":"pnorm","dim":2.5,"p":3}', "integer"),
        ('{"kind":"product","factors":[]}', "at least one factor"),
        ('{"kind":"product","factors":[{"kind":"pnorm","dim":2}]}', "$.factors[0]: missing key 'p'"),
        ('{"kind":\n"halfplane"', "line 2"),
        ("[1]", "expected an object"),
    ],
)
def test_space_errors(text, fragment):
    with pytest.raises(ConfigError) as info:
        parse_space_config(text)
    assert fragment in str(info.value)


leaf = st.one_of(
    st.just(HalfPlane()),
    st.builds(PNorm, st.integers(1, 4), st.sampled_from([1.5, 2.0, 3.0, 2.25])),
)
space_st = st.recursive(leaf, lambda kids: st.lists(kids, min_size=1, max_size=3).map(lambda fs: Product(tuple(fs))), max_leaves=6)


@given(space_st)
def test_space_round_trip(space):
    assert parse_space_config(space_to_config(space)) == space


def test_map_configs():
    assert parse_map_config('{"kind":"identity"}') == rs.Identity()
    assert parse_map_config('{"kind":"constant","c":[1,2]}') == rs.Constant((1.0, 2.0))
    assert parse_map_config('{"kind":"towards","a":[1,0],"mu":0.5}') == rs.Towards((1.0, 0.0), 0.5)
    assert parse_map_config('{"kind":"isometry","a":1,"b":1,"c":0,"d":1}') == rs.HalfPlaneIsometry(1, 1, 0, 1)
    T = parse_map_config('{"kind":"product","maps":[{"kind":"identity"},{"kind":"constant","c":[[0,1],[2,3]]}]}')
    assert T == rs.ProductMap((rs.Identity(), rs.Constant(((0.0, 1.0), (2.0, 3.0)))))
    assert isinstance(parse_map_config('{"kind":"compose","maps":[{"kind":"identity"}]}'), rs.Compose)
    for bad in ('{"kind":"isometry","a":1,"b":1,"c":1,"d":1}', '{"kind":"towards","a":[0],"mu":2}', '{"kind":"compose","maps":[]}', '{"kind":"identity","x":1}'):
        with pytest.raises(ConfigError):
            parse_map_config(bad)


def test_points():
    assert parse_point("0,1", H) == (0.0, 1.0)
    assert parse_point("0,1;0.5,0.5", H_R23) == ((0.0, 1.0), (0.5, 0.5))
    nested = Product((H, Product((PNorm(1, 2), H))))
    assert parse_point("0,1;3;0,2", nested) == ((0.0, 1.0), ((3.0,), (0.0, 2.0)))
    for bad, space in (("0,-1", H), ("0,1", H_R23), ("0,1;1,1;2,2", H_R23), ("a,b", H)):
        with pytest.raises(ConfigError):
            parse_point(bad, space)


def test_t_lists():
    assert parse_t_list("dyadic:3") == [0.5, 0.75, 0.875]
    assert parse_t_list("0.1,0.5") == [0.1, 0.5]
    for bad in ("0.5,0.2", "1.0", "dyadic:x", "dyadic:0"):
        with pytest.raises(ConfigError):
            parse_t_list(bad)

import math

import pytest
from hypothesis import given, strategies as st

from dirichlet_composition.errors import MapSpecError
from dirichlet_composition.mapspec import parse_complex, parse_map, parse_real
from dirichlet_composition.mobius import IDENTITY, MobiusMap, format_map, maps_equal

from conftest import automorphisms, self_maps


@pytest.mark.parametrize(
    "text,value",
    [
        ("2", 2),
        ("-0.5", -0.5),
        ("1e-3", 1e-3),
        ("i", 1j),
        ("-i", -1j),
        ("+i", 1j),
        ("-0.5i", -0.5j),
        ("3j", 3j),
        ("1+i", 1 + 1j),
        ("1e-3-2i", 1e-3 - 2j),
        (" 0.7+0.25i ", 0.7 + 0.25j),
        (".5-.5i", 0.5 - 0.5j),
    ],
)
def test_complex_literals(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "x", "1+", "1+2", "i2", "1 + 2i", "--1"])
def test_bad_complex_literals(text):
    with pytest.raises(MapSpecError):
        parse_complex(text)


def test_real_literals():
    assert parse_real(" 1.5 ") == 1.5
    with pytest.raises(MapSpecError):
        parse_real("1i")


def test_named_forms():
    assert maps_equal(parse_map("id"), IDENTITY)
    assert maps_equal(parse_map(" rot:1.5 "), MobiusMap.rotation(1.5))
    assert maps_equal(parse_map("hyp:t=0.5"), MobiusMap(1, 0.5, 0.5, 1))
    phi = parse_map("auto:a=0.70710678+0i,theta=1.57079633")
    assert maps_equal(phi, MobiusMap.from_automorphism(0.70710678, 1.57079633))


def test_coefficient_forms():
    assert maps_equal(parse_map("1,1,0,2"), MobiusMap(1, 1, 0, 2))
    assert maps_equal(parse_map("a=1,b=1,c=0,d=2"), MobiusMap(1, 1, 0, 2))
    assert maps_equal(parse_map("d=2, c=0, b=1, a=1"), MobiusMap(1, 1, 0, 2))
    assert maps_equal(parse_map("i,0,0,1"), MobiusMap.rotation(math.pi / 2))


@pytest.mark.parametrize(
    "text,position",
    [
        ("", 0),
        ("foo:1", 0),
        ("  foo:1", 2),
        ("rot:abc", 4),
        ("hyp:t=2", 6),
        ("hyp:s=0.5", 4),
        ("auto:a=1.5,theta=0", 7),
        ("auto:a=0.5,theta=x", 17),
        ("1,2,3", 0),
        ("1,2,zz,4", 4),
        ("a=1,b=2,b=3,d=4", 8),
        ("1,2,2,4", 0),  # degenerate: ad - bc = 0
    ],
)
def test_errors_carry_positions(text, position):
    with pytest.raises(MapSpecError) as info:
        parse_map(text)
    assert info.value.position == position
    assert info.value.text == text


def test_missing_key_points_past_the_end():
    with pytest.raises(MapSpecError) as info:
        parse_map("a=1,b=2,c=3")
    assert info.value.position == len("a=1,b=2,c=3")


@given(st.one_of(automorphisms, self_maps))
def test_printed_maps_reparse(m):
    assert maps_equal(parse_map(format_map(m)), m)

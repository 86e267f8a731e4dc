import pytest
from hypothesis import given, settings, strategies as st

from recurlab.ambient import F2, N0, Z, Z2
from recurlab.dsl import parse_chain, parse_set
from recurlab.errors import ParseError
from recurlab.setcalc import materialize


@pytest.mark.parametrize("text,ambient,level,expected", [
    ("ep:0,4,{0,1}", Z, 5, {-4, -3, 0, 1, 4, 5}),
    ("fin:{3,1}", N0, 5, {1, 3}),
    ("fs:1,2,4", N0, 10, set(range(1, 8))),
    ("dil:3,(ep:1,2,{0})", N0, 12, {3, 9}),
    ("!ep:0,2,{0} & 3>ep:0,3,{0}", Z, 10, {-9, -3, 3, 9}),
    ("fin:{1} | fin:{2} & fin:{3}", Z, 5, {1}),
    ("(fin:{1} | fin:{2}) & fin:{2}", Z, 5, {2}),
    ("2<fin:{5}", Z, 6, {3}),
    ("full", Z2, 1, set(Z2.ball(1))),
    ("(1,0)>fin:{(0,0)}", Z2, 2, {(1, 0)}),
    ("ab>fin:{e}", F2, 2, {"ab"}),
    ("evenlen & !fin:{e}", F2, 1, set()),
    ("blocks", N0, 10, {1, 2, 3, 4, 5, 6, 8, 9, 10}),
])
def test_parse_examples(text, ambient, level, expected):
    assert set(materialize(parse_set(text, ambient), level)) == expected


@pytest.mark.parametrize("text,position", [
    ("fin:{}", 4),
    ("ep:0,2", 6),
    ("ep:0,0,{0}", 5),
    ("(full", 5),
    ("full)", 4),
    ("1>", 2),
    ("zzz", 0),
    ("ep:0,2,{0} $", 11),
])
def test_parse_errors_carry_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_set(text, Z)
    assert info.value.position == position


def test_empty_finite_set_message():
    with pytest.raises(ParseError, match="empty"):
        parse_set("fin:{}", Z)


def test_chains():
    assert parse_chain("const:ep:0,2,{0}", N0).name == "const:ep:0,2,{0}"
    assert parse_chain("scaled:3", Z).at(1).contains(-6)
    c = parse_chain("blocks:3,1,odd", N0)
    assert c.name == "blocks:3,1,odd"
    assert parse_chain("evenlen", F2).at(1).contains("ab")
    with pytest.raises(ParseError):
        parse_chain("blocks:2", N0)
    with pytest.raises(ParseError):
        parse_chain("const:blocks", N0)
    with pytest.raises(ParseError):
        parse_chain("spiral:2", N0)


def test_chain_names_parse_back():
    for text in ["scaled:5", "blocks:2,1", "blocks:3,1,even", "const:ep:0,3,{0}"]:
        assert parse_chain(parse_chain(text, N0).name, N0).name == text


atoms = st.sampled_from(["ep:0,2,{0}", "ep:1,3,{0,2}", "fin:{0,5,-3}", "full", "fs:1,3"])


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(atoms)
    kind = draw(st.sampled_from(["not", "and", "or", "tr", "dil"]))
    if kind == "not":
        return "!" + draw(expressions(depth=depth - 1))
    if kind == "tr":
        return f"{draw(st.integers(-5, 5))}>" + draw(expressions(depth=depth - 1))
    if kind == "dil":
        return f"dil:{draw(st.integers(1, 3))},(" + draw(expressions(depth=depth - 1)) + ")"
    op = "&" if kind == "and" else "|"
    return "(" + draw(expressions(depth=depth - 1)) + op + draw(expressions(depth=depth - 1)) + ")"


@given(expressions())
@settings(max_examples=80, deadline=None)
def test_describe_round_trip(text):
    s = parse_set(text, Z)
    again = parse_set(s.describe(), Z)
    assert materialize(s, 40) == materialize(again, 40)

import pytest
from hypothesis import given, strategies as st

from gradpoisson.core import GradedContext
from gradpoisson.expr import ParseError, format_poly, parse
from strategies import contexts, polys

CTX = GradedContext([("x", 0), ("y", 0), ("theta_x", 1), ("b", -1)])


@given(st.data())
def test_format_parse_roundtrip(data):
    ctx = data.draw(contexts())
    p = data.draw(polys(ctx))
    assert parse(format_poly(p), ctx) == p


@pytest.mark.parametrize("text,expected", [
    ("x*y - y*x", "0"),
    ("(x + y)^2", "x^2 + 2*x*y + y^2"),
    ("theta_x*b + b*theta_x", "0"),
    ("-1/2*x + 3/6", "-1/2*x + 1/2"),
    ("2*(x - 1)*theta_x", "2*x*theta_x - 2*theta_x"),
    ("-(-x)", "x"),
])
def test_canonical_forms(text, expected):
    assert format_poly(parse(text, CTX)) == expected


@pytest.mark.parametrize("text,column", [
    ("x +", 4),
    ("x * (y", 7),
    ("z + 1", 1),
    ("theta_x^2", 8),
    ("1/0", 3),
    ("x ^ y", 5),
    ("x $ y", 3),
])
def test_errors_carry_position(text, column):
    with pytest.raises(ParseError) as err:
        parse(text, CTX)
    assert err.value.line == 1
    assert err.value.column == column


def test_multiline_position():
    with pytest.raises(ParseError) as err:
        parse("x +\n  q", CTX)
    assert (err.value.line, err.value.column) == (2, 3)

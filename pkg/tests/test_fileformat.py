import json
from fractions import Fraction

import pytest

from bigbracket.builders import i_n
from bigbracket.catalog import builtin_examples
from bigbracket.fileformat import (
    ParseError,
    emit_definition,
    emit_report,
    jsonable,
    parse_definition,
    parse_polynomial,
    render_rational,
)
from bigbracket.grading import AlgebraSignature
from bigbracket.runner import example_definition
from bigbracket.tensors import Endomorphism, TensorFunction

SIG = AlgebraSignature(2, 3)

BASIC = """\
# Heisenberg with a central operator
name heis
signature 0 3
theta 1 xi1 xi2 theta3
tensor N function
  term 1 xi1 theta3
end
roles I=N J=N
task T-01 k=2
task all
"""


def test_parse_basic():
    d = parse_definition(BASIC)
    assert d.name == "heis" and d.signature == AlgebraSignature(0, 3)
    s = d.signature
    assert d.theta == s.xi(1) * s.xi(2) * s.theta(3)
    assert d.roles == {"I": "N", "J": "N"}
    assert [t.identity_id for t in d.tasks] == ["T-01", "all"]
    assert d.tasks[0].params == {"k": 2}


def test_rational_and_unicode_minus():
    f = parse_polynomial(SIG, "−1/2*xi1*theta2")
    assert f == (SIG.xi(1) * SIG.theta(2)).scale(Fraction(-1, 2))
    assert render_rational(Fraction(-1, 2)) == "-1/2"
    assert parse_polynomial(SIG, "3*x1^2*p2") == (SIG.x(1) * SIG.x(1) * SIG.p(2)).scale(3)


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("name a\nsignature 0 2\ntheta 1 xi3 xi1 theta1\n", 3, 9),
        ("name a\nsignature 0 2\ntheta 1/0 xi1 xi2 theta1\n", 3, 7),
        ("name a\nsignature 0 2\ntask T-99\n", 3, 6),
        ("name a\nsignature 0 2\ntheta 1 xi1^2 xi2 theta1\n", 3, 9),
        ("name a\nsignature 0 2\nbogus 1\n", 3, 1),
        ("name a\nsignature 0 2\nroles I=Q\n", 3, 7),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_definition(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_duplicate_tensor_name():
    text = BASIC.replace("roles", "tensor N function\nend\nroles")
    with pytest.raises(ParseError) as err:
        parse_definition(text)
    assert err.value.line == 8


def test_theta_degree_checked():
    with pytest.raises(ParseError):
        parse_definition("name a\nsignature 0 2\ntheta 1 xi1 theta1\n")


def test_matrix_tensors():
    text = """\
name m
signature 1 2
theta 1 p1 theta1
tensor A matrix
  row 0 x1^2-1/2 0 0
  row 0 0 0 0
  row 0 0 0 0
  row 0 0 0 0
end
tensor S matrix
  row 1 0 0 0
  row 0 1 0 0
  row 0 0 -1 0
  row 0 0 0 -1
end
"""
    d = parse_definition(text)
    assert isinstance(d.tensors["A"], Endomorphism)
    assert isinstance(d.tensors["S"], TensorFunction)
    assert d.tensors["S"] == i_n(d.signature, [[1, 0], [0, 1]])
    again = parse_definition(emit_definition(d))
    assert again.tensors["A"] == d.tensors["A"] and again.tensors["S"] == d.tensors["S"]


@pytest.mark.parametrize("ex", builtin_examples(), ids=lambda e: e.name)
def test_emit_parse_round_trip(ex):
    defn = example_definition(ex)
    text = emit_definition(defn)
    back = parse_definition(text)
    assert back.theta == defn.theta and back.roles == defn.roles
    assert back.tensors == defn.tensors
    assert emit_definition(back) == text


def test_jsonable_and_report():
    assert jsonable({"a": Fraction(1, 3), "b": (Fraction(2), None)}) == {"a": "1/3", "b": ["2", None]}
    rep = {"summary": {"passed": 1, "failed": 0, "not-applicable": 0, "total": 1}, "tasks": [], "setup": {}, "not_applicable": []}
    text = emit_report(rep, "json")
    assert json.loads(text)["summary"]["passed"] == 1
    assert text == emit_report(rep, "json")
    assert "passed" in emit_report(rep, "text")

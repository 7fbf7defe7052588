from fractions import Fraction as F

import pytest

from freelat.expressions import (Gen, Join, Meet, Scale, Sum, eval_expr,
                                 format_sexpr, generators, parse_sexpr)

SAMPLE = ('(join (gen "(2,3)") (scale 1/2 (sum (gen "(1,1)") '
          '(meet (gen "(2,2)") (gen "(3,2)")))))')


def test_parse_sample():
    expr = parse_sexpr(SAMPLE)
    assert isinstance(expr, Join)
    assert expr.children[0] == Gen("(2,3)")
    scale = expr.children[1]
    assert isinstance(scale, Scale) and scale.coeff == F(1, 2)
    assert sorted(generators(expr)) == ["(1,1)", "(2,2)", "(2,3)", "(3,2)"]


def test_roundtrip():
    expr = parse_sexpr(SAMPLE)
    assert parse_sexpr(format_sexpr(expr)) == expr


def test_eval_structure():
    expr = parse_sexpr(SAMPLE)
    values = {"(2,3)": F(0), "(1,1)": F(-1), "(2,2)": F(0), "(3,2)": F(1, 10)}
    # join(0, 1/2 * (-1 + min(0, 1/10))) = join(0, -1/2) = 0
    assert eval_expr(expr, values.__getitem__) == 0


def test_eval_negative_scale():
    expr = parse_sexpr('(sum (gen "a") (scale -1 (gen "b")))')
    assert eval_expr(expr, {"a": F(1), "b": F(1, 4)}.__getitem__) == F(3, 4)


def test_parse_errors():
    for bad in ("", "(gen)", '(gen "a") junk', "(scale x (gen \"a\"))",
                "(frob 1)", "(sum)", '(join (gen "a")'):
        with pytest.raises(ValueError):
            parse_sexpr(bad)


def test_empty_composites_rejected():
    with pytest.raises(ValueError):
        Sum(())
    with pytest.raises(ValueError):
        Join(())
    with pytest.raises(ValueError):
        Meet(())

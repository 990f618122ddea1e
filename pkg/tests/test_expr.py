import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactgeo import _ast
from contactgeo.errors import ExprDomainError, ExprSyntaxError, UnknownFunctionError
from contactgeo.expr import free_variables, parse


def test_parse_polynomial_with_function():
    e = parse("x1^2 + sin(x2)")
    assert e.free_vars == ("x1", "x2")
    a = e.ast
    assert isinstance(a, _ast.Bin) and a.op == "+"
    assert isinstance(a.left, _ast.Bin) and a.left.op == "^"
    assert isinstance(a.right, _ast.Fn) and a.right.name == "sin"


def test_parse_warping_function():
    e = parse("exp(u)")
    assert e.eval_jet({"u": 0.0}, seed=["u"]).value == 1.0


def test_incomplete_expression_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse("2*")
    assert err.value.offset == 2
    assert "operand" in str(err.value)


def test_empty_input():
    with pytest.raises(ExprSyntaxError):
        parse("   ")


def test_unknown_function():
    with pytest.raises(UnknownFunctionError):
        parse("sinh(x)")


def test_unbalanced_paren_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse("(a + b")
    assert err.value.offset == 6


def test_trailing_garbage():
    with pytest.raises(ExprSyntaxError):
        parse("a + b )")


def test_free_variables_order_and_dedup():
    assert free_variables(parse("x2 + x1")) == ["x2", "x1"]
    assert free_variables(parse("3.5")) == []
    assert free_variables(parse("sin(a)*a")) == ["a"]


def test_precedence():
    assert parse("1 + 2*x") == parse("1 + (2*x)")
    assert parse("-x^2") == parse("-(x^2)")
    assert parse("a - b - c") == parse("(a - b) - c")
    assert parse("a^b^c") == parse("a^(b^c)")
    assert parse("x^-2") is not None


def test_eval_jet_polynomial_exact():
    j = parse("x^2").eval_jet({"x": 3.0}, seed=["x"])
    assert j.value == 9.0
    assert j.grad[0] == 6.0
    assert j.hess[0, 0] == 2.0


def test_eval_jet_quadratic_two_vars_exact():
    # f = 2xy + y^2: grad (2y, 2x + 2y), hess [[0,2],[2,2]]
    j = parse("2*x*y + y^2").eval_jet({"x": 1.5, "y": -0.5}, seed=["x", "y"])
    assert j.value == 2 * 1.5 * -0.5 + 0.25
    assert j.grad.tolist() == [-1.0, 2.0]
    assert j.hess.tolist() == [[0.0, 2.0], [2.0, 2.0]]


def test_eval_jet_seed_subset():
    j = parse("x*y").eval_jet({"x": 2.0, "y": 5.0}, seed=["y"])
    assert j.grad.shape == (1,)
    assert j.grad[0] == 2.0


def test_eval_jet_division_by_zero():
    with pytest.raises(ExprDomainError) as err:
        parse("1/x").eval_jet({"x": 0.0}, seed=["x"])
    assert "division by zero" in str(err.value)


def test_eval_jet_log_domain():
    with pytest.raises(ExprDomainError) as err:
        parse("log(x - 2)").eval_jet({"x": 1.0}, seed=["x"])
    assert "log" in str(err.value)
    assert "x - 2" in str(err.value)


def test_unassigned_coordinate():
    with pytest.raises(KeyError):
        parse("x + y").eval_jet({"x": 1.0}, seed=["x"])


def test_power_general_requires_positive_base():
    j = parse("x^0.5").eval_jet({"x": 4.0}, seed=["x"])
    assert j.value == pytest.approx(2.0, abs=1e-15)
    with pytest.raises(ExprDomainError):
        parse("x^0.5").eval_jet({"x": -1.0}, seed=["x"])


def test_hessian_symmetry_exact():
    j = parse("exp(x*y) * sin(x + 2*y)").eval_jet({"x": 0.3, "y": -0.7}, seed=["x", "y"])
    assert np.array_equal(j.hess, j.hess.T)


_names = st.sampled_from(["x", "y", "z1", "alpha"])


def _ast_strategy():
    leaves = st.one_of(
        st.floats(min_value=0.0, max_value=100.0, allow_nan=False).map(_ast.num),
        _names.map(_ast.Var),
    )

    def extend(children):
        return st.one_of(
            children.map(_ast.Neg),
            st.tuples(st.sampled_from(list(_ast.FUNCTIONS)), children).map(
                lambda t: _ast.Fn(*t)
            ),
            st.tuples(st.sampled_from("+-*/^"), children, children).map(
                lambda t: _ast.Bin(*t)
            ),
        )

    return st.recursive(leaves, extend, max_leaves=25)


@settings(max_examples=200, deadline=None)
@given(_ast_strategy())
def test_print_parse_round_trip(ast):
    printed = _ast.to_string(ast)
    assert parse(printed).ast == ast


@settings(max_examples=50, deadline=None)
@given(_ast_strategy())
def test_reprint_is_stable(ast):
    once = _ast.to_string(ast)
    again = _ast.to_string(parse(once).ast)
    assert once == again

import pytest

from threewave.parsing import ExprError, parse_expr, parse_model, render_model
from threewave.ratfunc import RationalFn
from threewave.symbols import table

T = table("x", "y", "z", "delta:parameter", "gamma:parameter")


@pytest.mark.parametrize(
    "text",
    [
        "x",
        "-2*y^2 + gamma*x + delta*y + z",
        "1/x",
        "(x + y)^3 / (z - 1)",
        "i*x - 1/2",
        "-(y - i*x)*x",
        "x^-2",
        "3/4",
    ],
)
def test_round_trip_through_canonical_text(text):
    value = parse_expr(text, T)
    again = parse_expr(value.text(), T)
    assert again == value


def test_parse_errors():
    with pytest.raises(ExprError):
        parse_expr("x +", T)
    with pytest.raises(ExprError):
        parse_expr("unknown_sym", T)
    with pytest.raises(ExprError):
        parse_expr("x ^ y", T)
    with pytest.raises(ExprError):
        parse_expr("(x", T)


def test_imaginary_unit_squares_to_minus_one():
    assert parse_expr("i*i", T) == RationalFn.const(T, -1)


def test_model_file_round_trip():
    src = """
# a tiny quadratic model
params mu
chart C0 : x y z
chart C1 : X Y Z @ X
system C0 : x^2 + mu*y ; -y ; z*x
map C0 C1 : 1/x ; y ; z | 1/X ; Y ; Z
"""
    model = parse_model(src)
    assert set(model.charts) == {"C0", "C1"}
    assert model.charts["C1"].boundary.name == "X"
    assert "C0" in model.fields
    assert len(model.maps) == 1
    rendered = render_model(
        list(model.charts.values()),
        model.maps,
        model.fields,
        [s for s in model.table.parameters()],
    )
    model2 = parse_model(rendered)
    assert model2.fields["C0"].components == tuple(
        c.retable(model2.table) for c in model.fields["C0"].components
    )
    assert len(model2.maps) == 1


def test_model_rejects_non_invertible_map():
    src = """
chart C0 : x y z
chart C1 : X Y Z
map C0 C1 : x^2 ; y ; z | X ; Y ; Z
"""
    with pytest.raises(ValueError):
        parse_model(src)


def test_builtin_models_parse_and_verify():
    from threewave import models

    m1 = models.model("three-wave")
    m2 = models.model("modified")
    assert set(m1.fields) == {"U0"} and set(m2.fields) == {"U0"}
    assert len(m1.maps) == 6 and len(m2.maps) == 6

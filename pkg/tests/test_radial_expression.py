import math

import numpy as np
import pytest

from exit_spectra.exceptions import DomainError, ExpressionSyntaxError
from exit_spectra.parsing import parse_expression, parse_radial_expression, tokenize


def test_sinh_and_its_derivatives():
    f = parse_radial_expression("sinh(r)")
    assert float(f.eval(1.0)) == pytest.approx(1.17520, abs=1e-5)
    assert float(f.deriv1(1.0)) == pytest.approx(1.54308, abs=1e-5)
    assert float(f.deriv2(1.0)) == pytest.approx(math.sinh(1.0), rel=1e-14)
    assert f.label == "sinh(r)"


def test_identity():
    f = parse_radial_expression("r", label="flat")
    r = np.linspace(0.0, 2.0, 5)
    np.testing.assert_array_equal(f.eval(r), r)
    np.testing.assert_array_equal(f.deriv1(r), 1.0)
    np.testing.assert_array_equal(f.deriv2(r), 0.0)
    assert f.label == "flat"


def test_product_with_exponential():
    f = parse_radial_expression("r*exp(-0.1*r)")
    assert float(f.eval(0.0)) == 0.0
    assert float(f.deriv1(0.0)) == pytest.approx(1.0)
    assert float(f.deriv2(0.0)) == pytest.approx(-0.2)


@pytest.mark.parametrize(
    "text, value, d1, d2",
    [
        ("r^2", 4.0, 4.0, 2.0),
        ("r**3", 8.0, 12.0, 12.0),
        ("2^r", 4.0, 4.0 * math.log(2), 4.0 * math.log(2) ** 2),
        ("r^0.5", math.sqrt(2), 0.5 / math.sqrt(2), -0.25 * 2**-1.5),
        ("r^-1", 0.5, -0.25, 0.25),
        ("-r^2", -4.0, -4.0, -2.0),
        ("2^3^2 + 0*r", 512.0, 0.0, 0.0),
        ("sin(pi*r/4)", 1.0, math.pi / 4 * math.cos(math.pi / 2), -((math.pi / 4) ** 2)),
        ("log(e*r)", 1.0 + math.log(2), 0.5, -0.25),
        ("tanh(r) / cosh(r) - sqrt(r)", None, None, None),
    ],
)
def test_jet_values(text, value, d1, d2):
    jet = parse_expression(text).jet(np.array(2.0))
    if value is None:
        # Compare against central differences.
        f = parse_expression(text)
        h = 1e-4
        lo, mid, hi = (float(f.jet(np.array(x)).v) for x in (2.0 - h, 2.0, 2.0 + h))
        assert float(jet.d1) == pytest.approx((hi - lo) / (2 * h), rel=1e-7)
        assert float(jet.d2) == pytest.approx((hi - 2 * mid + lo) / h**2, rel=1e-4)
        return
    assert float(jet.v) == pytest.approx(value, rel=1e-14, abs=1e-14)
    assert float(jet.d1) == pytest.approx(d1, rel=1e-13, abs=1e-14)
    assert float(jet.d2) == pytest.approx(d2, rel=1e-13, abs=1e-14)


def test_tokenize():
    kinds = [t.kind for t in tokenize("2.5e-1*r ** 2")]
    assert kinds == ["NUMBER", "OP", "NAME", "POW", "NUMBER", "END"]


@pytest.mark.parametrize(
    "text, position",
    [
        ("sinh(r", 4),
        ("r + ", 4),
        ("r $ 2", 2),
        ("foo(r)", 0),
        ("", 0),
        ("r r", 2),
        ("sin r", 4),
        ("(r))", 3),
    ],
)
def test_syntax_errors_point_at_the_problem(text, position):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text)
    assert info.value.position == position
    assert info.value.text == text
    assert str(info.value).endswith(" " * position + "^")


def test_non_finite_values_name_the_radius():
    f = parse_radial_expression("sqrt(r)")
    assert float(f.eval(4.0)) == 2.0
    with pytest.raises(DomainError, match="r = 0"):
        f.deriv1(np.array([1.0, 0.0]))
    with pytest.raises(DomainError, match="first derivative"):
        parse_expression("sqrt(r)").jet(np.array([0.0]))
    with pytest.raises(DomainError, match="value"):
        parse_radial_expression("log(r - 1)").eval(0.5)

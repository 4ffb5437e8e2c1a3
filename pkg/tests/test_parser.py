import random
from fractions import Fraction

import numpy as np
import pytest

from moyal_lab.exprparse import (ExprError, lower_evaluator, lower_poly,
                                 parse_symbol, pretty)
from moyal_lab.polysym import PhasePoint, PolySymbol, Shape


def test_basic_polynomials():
    p = lower_poly(parse_symbol("x^2 + xi^2"))
    s = Shape(1)
    assert p == PolySymbol.var(s, "x") ** 2 + PolySymbol.var(s, "xi") ** 2
    q = lower_poly(parse_symbol("3/2 * x * xi"))
    assert q == (PolySymbol.var(s, "x") * PolySymbol.var(s, "xi")).scaled(Fraction(3, 2))


def test_precedence_and_unary_minus():
    p = lower_poly(parse_symbol("-x^2 + 2*x - 1"))
    s = Shape(1)
    x = PolySymbol.var(s, "x")
    assert p == -(x ** 2) + x.scaled(2) - PolySymbol.const(s, 1)
    q = lower_poly(parse_symbol("(x + xi)^2"))
    assert q == (PolySymbol.var(s, "x") + PolySymbol.var(s, "xi")) ** 2


def test_dimension_two_variables():
    p = lower_poly(parse_symbol("x1*xi2 - x2*xi1"), d=2)
    s = Shape(2)
    expected = PolySymbol.var(s, "x", 0) * PolySymbol.var(s, "xi", 1) \
        - PolySymbol.var(s, "x", 1) * PolySymbol.var(s, "xi", 0)
    assert p == expected
    with pytest.raises(ExprError):
        lower_poly(parse_symbol("x3"), d=2)
    with pytest.raises(ExprError):
        lower_poly(parse_symbol("x1"), d=1)


def test_syntax_errors_have_positions():
    for text, pos in [("x +", 3), ("x^", 2), ("(x", 2), ("x^y", 2), ("@", 0)]:
        with pytest.raises(ExprError) as err:
            parse_symbol(text)
        assert err.value.pos == pos


def test_gauss_rejected_in_exact_context():
    with pytest.raises(ExprError, match="numeric context"):
        lower_poly(parse_symbol("x * gauss(1)"))


def test_gauss_evaluator():
    ev = lower_evaluator(parse_symbol("x^3 * gauss(1/4)"))
    x, xi = np.array(1.3), np.array(-0.7)
    expected = 1.3 ** 3 * np.exp(-0.25 * (1.3 ** 2 + 0.7 ** 2))
    assert abs(complex(ev(x, xi)) - expected) < 1e-14


def test_two_gauss_factors_rejected():
    with pytest.raises(ExprError, match="one gauss"):
        lower_evaluator(parse_symbol("gauss(1) * gauss(2)"))
    with pytest.raises(ExprError, match="one gauss"):
        lower_evaluator(parse_symbol("gauss(1)^2"))
    # but a sum of gauss terms is fine
    ev = lower_evaluator(parse_symbol("gauss(1) + x*gauss(2)"))
    assert abs(complex(ev(np.array(0.0), np.array(0.0))) - 1.0) < 1e-14


def test_gauss_rate_must_be_positive():
    with pytest.raises(ExprError):
        parse_symbol("gauss(0)")
    with pytest.raises(ExprError):
        parse_symbol("gauss(-1/2)")


def _corpus():
    rng = random.Random(77)
    atoms = ["x", "xi", "2", "3/2", "x^2", "xi^3", "(x + xi)", "gauss(1/4)",
             "-x", "5/3", "x*xi", "(x - xi)^2", "hbar", "y", "eta"]
    corpus = []
    for _ in range(100):
        n = rng.randint(1, 4)
        parts = [rng.choice(atoms) for _ in range(n)]
        op = rng.choice([" + ", " - ", "*"])
        corpus.append(op.join(parts))
    return corpus


def test_pretty_print_round_trip_idempotent():
    for text in _corpus():
        once = pretty(parse_symbol(text))
        twice = pretty(parse_symbol(once))
        assert once == twice


def test_lowering_agrees_with_evaluation():
    # exact lowering and numeric lowering agree pointwise
    rng = random.Random(5)
    for text in ["x^2 - 3/2*xi", "(x + xi)^3", "-x*xi + 2", "x^2*xi^2 - x"]:
        p = lower_poly(parse_symbol(text))
        ev = lower_evaluator(parse_symbol(text))
        for _ in range(5):
            xv = Fraction(rng.randint(-8, 8), 4)
            xiv = Fraction(rng.randint(-8, 8), 4)
            exact = complex(p.evaluate(PhasePoint((xv, xiv))))
            approx = complex(ev(np.array(float(xv)), np.array(float(xiv))))
            assert abs(exact - approx) < 1e-12

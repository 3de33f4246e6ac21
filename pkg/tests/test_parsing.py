import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilherm.catalog import CATALOG_SALAMON, catalog_algebra
from nilherm.complex_structures import ComplexStructure, NilpotentCoeffs, build_nilpotent
from nilherm.forms import random_form
from nilherm.hermitian import random_metric
from nilherm.lie import LieAlgebra, classify_by_fingerprint
from nilherm.parsing import (ParseError, emit_equations, emit_metric_fields, emit_salamon,
                             emit_scalar, parse_equations, parse_metric_fields, parse_salamon,
                             parse_scalar)
from nilherm.scalar import I, Q, Scalar

from conftest import scalars


def test_salamon_h19_minus():
    d = parse_salamon("(0,0,0,12,23,14-35)")
    assert d == [{}, {}, {}, {0b11: 1}, {0b110: 1}, {0b1001: 1, 0b10100: -1}]
    assert LieAlgebra(6, d) == catalog_algebra("h19minus")


@pytest.mark.parametrize("text", list(CATALOG_SALAMON.values()))
def test_salamon_round_trip(text):
    assert parse_salamon(emit_salamon(parse_salamon(text))) == parse_salamon(text)


@pytest.mark.parametrize("text, line, col", [
    ("(0,0,1)", 1, 6), ("(0,0,12", 1, 1), ("(0,0,12+)", 1, 8),
])
def test_salamon_errors(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_salamon(text)
    assert (err.value.line, err.value.col) == (line, col)


def test_h4_witness_equations():
    eqs = parse_equations("dw3 = w12 + w1c2 + 2*w2c1")
    J = ComplexStructure(eqs)
    assert eqs == build_nilpotent(NilpotentCoeffs(0, 1, 0, 1, 2, 0)).eqs
    assert classify_by_fingerprint(J.algebra).tag == "h4"


def test_scalar_literals():
    assert parse_scalar("1/2+1/3*i") == Scalar(Q(1, 2), Q(1, 3))
    assert parse_scalar("-i") == -I
    assert parse_scalar("0.25", exact=True) == Scalar(Q(1, 4))
    assert not parse_scalar("0.25").is_exact


@given(scalars())
def test_scalar_round_trip(c):
    assert parse_scalar(emit_scalar(c), exact=True) == c


def test_equation_errors_report_position():
    with pytest.raises(ParseError) as err:
        parse_equations("dw1 = 0\ndw2 = w1c1 +\n")
    assert (err.value.line, err.value.col) == (2, 13)
    with pytest.raises(ParseError) as err:
        parse_equations("dw1 = 0; dw2 = w1x1")
    assert (err.value.line, err.value.col) == (1, 16)
    with pytest.raises(ParseError):
        parse_equations("dw1 = 0; dw1 = w11")


@given(st.randoms(use_true_random=False))
def test_equation_round_trip(r):
    n = 3
    mu = tuple(random_form(n, 2, 4, r) for _ in range(n))
    from nilherm.forms import StructureEquations
    eqs = StructureEquations(n, mu)
    assert parse_equations(emit_equations(eqs), exact=True) == eqs


def test_metric_round_trip_100():
    rng = random.Random(2024)
    for _ in range(100):
        g = random_metric(rng)
        fields = g.fields()
        assert parse_metric_fields(emit_metric_fields(fields), exact=True) == fields


def test_metric_errors():
    with pytest.raises(ParseError, match="missing"):
        parse_metric_fields("r=1, s=1")
    with pytest.raises(ParseError, match="duplicate"):
        parse_metric_fields("r=1, r=2")

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcurves.classes import (
    DELTA_IRR,
    KAPPA1,
    LAMBDA,
    DivisorExpr,
    ModuliSignature,
    all_deltas,
    eliminate_lambda,
    psi,
)
from modcurves.parsing import ParseError, format_expr, parse_expr
from modcurves.presentation import generators, presentation

S = ModuliSignature.standard
P1 = ModuliSignature(1, ("p",))


def test_examples():
    two = S(2, 0)
    e = parse_expr("5*k1 - dirr - 7*delta(1;{})", two)
    assert not any(presentation(two).reduce(e))
    assert format_expr(e) == "5*k1 - dirr - 7*delta(1;{})"
    e = parse_expr("psi(p) - Delta_0", P1)
    assert presentation(P1).reduce(e) == presentation(P1).reduce(DivisorExpr.of(P1, KAPPA1))
    assert parse_expr("lambda", P1) == eliminate_lambda(DivisorExpr.of(P1, LAMBDA))


def test_shorthands_and_rationals():
    sig = S(2, 2)
    e = parse_expr("  -1/2*Psi+Delta - 3/4 * Delta_1 ", sig)
    assert e.coefficient(psi("1")) == Fraction(-1, 2)
    assert e.coefficient(DELTA_IRR) == 1
    assert parse_expr("0", sig).is_zero()
    # non-canonical delta index is accepted and normalized
    assert parse_expr("delta(1;{2})", sig) == parse_expr("delta(1;{1})", sig)
    assert format_expr(DivisorExpr.zero(sig)) == "0"


@pytest.mark.parametrize("text,offset", [
    ("k1 +", 4),
    ("psi(q)", 4),
    ("3 k1", 2),
    ("k1 ) ", 3),
    ("delta(0;{1,1})", 0),
    ("1/0*k1", 2),
    ("foo", 0),
    ("psi(1", 5),
])
def test_errors_carry_byte_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_expr(text, S(1, 2))
    assert info.value.offset == offset


def test_offset_counts_bytes():
    with pytest.raises(ParseError) as info:
        parse_expr("k1 + λ", S(1, 2))
    assert info.value.offset == 5
    with pytest.raises(ParseError) as info:
        parse_expr("λλ k", S(1, 2))
    assert info.value.offset == 0


def test_invalid_delta_and_shorthand():
    with pytest.raises(ParseError):
        parse_expr("delta(2;{})", P1)
    with pytest.raises(ParseError):
        parse_expr("Delta_3", S(2, 0))


SIGS = [S(0, 5), S(1, 3), S(2, 2), ModuliSignature(3, ("a", "b1"))]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SIGS), st.data())
def test_format_parse_roundtrip(sig, data):
    gens = generators(sig)
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    e = DivisorExpr(sig, data.draw(st.lists(st.tuples(st.sampled_from(gens), coeff), max_size=6)))
    text = format_expr(e)
    assert parse_expr(text, sig) == e
    assert format_expr(parse_expr(text, sig)) == text

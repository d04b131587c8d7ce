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
    SignatureError,
    delta,
    eliminate_lambda,
    expand_shorthand,
    psi,
)
from modcurves.keel import keel_basis
from modcurves.presentation import dim_h2_bar, generators, presentation, relation_exprs
from oracles import genus0_h2bar, sympy_rank

S = ModuliSignature.standard
P1 = ModuliSignature(1, ("p",))


def test_generator_examples():
    assert generators(S(3, 0)) == [KAPPA1, DELTA_IRR, delta(1, ())]
    assert generators(P1) == [KAPPA1, psi("p"), DELTA_IRR]
    g04 = generators(S(0, 4))
    assert g04[:6] == [KAPPA1] + [psi(str(i)) for i in range(1, 5)] + [DELTA_IRR]
    assert len(g04) == 9


def test_relation_examples():
    rels = relation_exprs(P1)
    k, p, d = (DivisorExpr.of(P1, s) for s in (KAPPA1, psi("p"), DELTA_IRR))
    assert rels == [k - p, 12 * p - d]
    two = S(2, 0)
    assert relation_exprs(two) == [5 * DivisorExpr.of(two, KAPPA1) - DivisorExpr.of(two, DELTA_IRR)
                                   - 7 * DivisorExpr.of(two, delta(1, ()))]
    assert relation_exprs(S(3, 0)) == []


def test_reduce_examples():
    pres = presentation(P1)
    assert pres.basis == (DELTA_IRR,)
    assert pres.reduce(DivisorExpr.of(P1, KAPPA1)) == [Fraction(1, 12)]
    sig = S(0, 4)
    pres = presentation(sig)
    assert list(pres.basis) == keel_basis(sig, "1", "2", "3")
    for s in (delta(0, {"1", "2"}), delta(0, {"1", "3"}), delta(0, {"1", "4"})):
        assert pres.reduce(DivisorExpr.of(sig, s)) == [1]


@pytest.mark.parametrize("g,n,d", [(0, 4, 1), (0, 5, 5), (0, 6, 16), (0, 7, 42), (0, 8, 99),
                                   (1, 1, 1), (1, 2, 2), (2, 0, 2), (3, 0, 3), (2, 2, 6)])
def test_dim_values(g, n, d):
    assert dim_h2_bar(S(g, n)) == d
    assert presentation(S(g, n)).dim == d


@pytest.mark.parametrize("n", range(4, 8))
def test_genus0_dim_two_ways(n):
    sig = S(0, n)
    pres = presentation(sig)
    rows = pres.relations.tolist()
    assert len(pres.generators) - sympy_rank(rows) == genus0_h2bar(n) == len(keel_basis(sig, "1", "2", "3"))


SIGS = [(g, n) for g in range(4) for n in range(6) if 2 * g - 2 + n > 0 and g + n <= 6]


@pytest.mark.parametrize("g,n", SIGS)
def test_relations_reduce_to_zero_and_basis_is_identity(g, n):
    sig = S(g, n)
    pres = presentation(sig)
    for r in relation_exprs(sig):
        assert not any(pres.reduce(r))
    for t, b in enumerate(pres.basis):
        assert pres.reduce_symbol(b) == [Fraction(int(t == u)) for u in range(pres.dim)]


@pytest.mark.parametrize("n", range(1, 5))
def test_genus1_lambda(n):
    # 12 lambda = delta_irr in genus 1
    sig = S(1, n)
    e = eliminate_lambda(12 * DivisorExpr.of(sig, LAMBDA) - DivisorExpr.of(sig, DELTA_IRR))
    assert not any(presentation(sig).reduce(e))


@pytest.mark.parametrize("n", range(0, 4))
def test_genus2_lambda(n):
    # 10 lambda = delta_irr + 2 delta_1 in genus 2
    sig = S(2, n)
    e = eliminate_lambda(10 * DivisorExpr.of(sig, LAMBDA) - DivisorExpr.of(sig, DELTA_IRR)
                         - 2 * expand_shorthand("delta_b", sig, 1))
    assert not any(presentation(sig).reduce(e))


@pytest.mark.parametrize("n", range(3, 8))
def test_genus0_lambda_vanishes(n):
    sig = S(0, n)
    assert not any(presentation(sig).reduce(eliminate_lambda(DivisorExpr.of(sig, LAMBDA))))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SIGS), st.data())
def test_lift_reduce_roundtrip(gn, data):
    pres = presentation(S(*gn))
    coords = [Fraction(data.draw(st.integers(-9, 9)), data.draw(st.integers(1, 5))) for _ in range(pres.dim)]
    assert pres.reduce(pres.lift(coords)) == coords


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SIGS), st.data())
def test_reduce_is_linear(gn, data):
    sig = S(*gn)
    pres = presentation(sig)
    gens = list(pres.generators)
    pick = st.lists(st.tuples(st.sampled_from(gens), st.integers(-6, 6)), max_size=5)
    a = DivisorExpr(sig, data.draw(pick))
    b = DivisorExpr(sig, data.draw(pick))
    ra, rb, rs = pres.reduce(a), pres.reduce(b), pres.reduce(a - 3 * b)
    assert rs == [x - 3 * y for x, y in zip(ra, rb)]


def test_reduce_rejects_lambda_and_foreign_signature():
    pres = presentation(S(2, 0))
    with pytest.raises(SignatureError):
        pres.reduce(DivisorExpr.of(S(2, 0), LAMBDA))
    with pytest.raises(SignatureError):
        pres.reduce(DivisorExpr.of(S(3, 0), KAPPA1))

from fractions import Fraction
from itertools import combinations

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
    all_deltas,
    canonical_delta,
    delta,
    eliminate_lambda,
    expand_shorthand,
    is_valid_delta,
    psi,
    valid_boundary_indices,
)
from oracles import boundary_pairs

S = ModuliSignature.standard


def test_canonical_examples():
    assert canonical_delta(3, {"1"}, S(4, 1)) == (1, frozenset())
    assert canonical_delta(1, set(), S(2, 0)) == (1, frozenset())
    assert canonical_delta(0, {"4", "5"}, S(0, 5)) == (0, frozenset({"1", "2", "3"}))


def test_boundary_index_examples():
    assert valid_boundary_indices(ModuliSignature(1, ("p",))) == [DELTA_IRR]
    assert valid_boundary_indices(S(2, 0)) == [DELTA_IRR, delta(1, ())]
    assert len(valid_boundary_indices(S(0, 5))) == 10


@pytest.mark.parametrize("g,n", [(g, n) for g in range(5) for n in range(6) if 2 * g - 2 + n > 0])
def test_all_deltas_match_scan(g, n):
    sig = S(g, n)
    got = all_deltas(sig)
    assert len(got) == len(set(got)) == len(boundary_pairs(g, sig.labels))
    for s in got:
        assert is_valid_delta(s.a, s.A, sig)
        assert canonical_delta(g - s.a, sig.complement(s.A), sig) == (s.a, s.A)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 4), st.integers(0, 6), st.data())
def test_canonical_is_idempotent_and_pair_invariant(g, n, data):
    if 2 * g - 2 + n <= 0:
        return
    sig = S(g, n)
    a = data.draw(st.integers(0, g))
    A = frozenset(data.draw(st.sets(st.sampled_from(sig.labels))) if n else ())
    if not is_valid_delta(a, A, sig):
        with pytest.raises(SignatureError):
            canonical_delta(a, A, sig)
        return
    c = canonical_delta(a, A, sig)
    assert canonical_delta(*c, sig) == c
    assert canonical_delta(g - a, sig.complement(A), sig) == c


def test_shorthand_examples():
    sig = ModuliSignature(2, ("p", "q"))
    assert expand_shorthand("psi", sig) == DivisorExpr(sig, [(psi("p"), 1), (psi("q"), 1)])
    d1 = expand_shorthand("delta_b", sig, 1)
    assert d1 == DivisorExpr(sig, [(delta(1, {"p", "q"}), 1), (delta(1, {"p"}), 1)])
    one = ModuliSignature(1, ("p",))
    assert expand_shorthand("delta", one) == DivisorExpr.of(one, DELTA_IRR)


def test_lambda_elimination():
    sig = S(2, 2)
    lam = eliminate_lambda(DivisorExpr.of(sig, LAMBDA))
    expected = (DivisorExpr.of(sig, KAPPA1) + expand_shorthand("delta", sig)
                - expand_shorthand("psi", sig)) * Fraction(1, 12)
    assert lam == expected
    k = DivisorExpr.of(sig, KAPPA1)
    assert eliminate_lambda(k) == k
    mumford = (12 * DivisorExpr.of(sig, LAMBDA) - expand_shorthand("delta", sig)
               + expand_shorthand("psi", sig))
    assert eliminate_lambda(mumford) == k


def test_expr_algebra():
    sig = S(1, 2)
    a = DivisorExpr(sig, [(psi("1"), 2), (DELTA_IRR, -1)])
    assert (a - a).is_zero()
    assert a + a == 2 * a
    assert -a == a * -1
    # non-canonical delta input is normalized
    two = S(2, 2)
    assert DivisorExpr.of(two, delta(1, {"2"})) == DivisorExpr.of(two, delta(1, {"1"}))
    with pytest.raises(SignatureError):
        DivisorExpr.of(sig, delta(1, {"1", "2"}))
    with pytest.raises(SignatureError):
        DivisorExpr.of(sig, psi("7"))
    with pytest.raises(SignatureError):
        a + DivisorExpr.zero(S(1, 3))


def test_signature_validation():
    with pytest.raises(SignatureError):
        S(0, 2)
    with pytest.raises(SignatureError):
        ModuliSignature(1, ("a", "a"))

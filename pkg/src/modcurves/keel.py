"""Genus-zero boundary divisors: Keel's linear relations and explicit bases."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .classes import (
    ClassSymbol,
    DivisorExpr,
    ModuliSignature,
    SignatureError,
    all_deltas,
    canonical_delta,
    delta,
)
from .linalg import RatMatrix, rank, rref_rank

__all__ = [
    "keel_signature",
    "keel_relation_exprs",
    "keel_relation_matrix",
    "keel_basis",
    "verify_basis_independence",
    "keel_coordinates",
]


def keel_signature(labels) -> ModuliSignature:
    if isinstance(labels, ModuliSignature):
        if labels.genus != 0:
            raise SignatureError("Keel relations live in genus 0")
        sig = labels
    else:
        sig = ModuliSignature(0, tuple(labels))
    if sig.n < 4:
        raise SignatureError(f"Keel relations need at least 4 labels, got {sig.n}")
    return sig


def _side_sum(sig: ModuliSignature, inside: tuple[str, str], outside: tuple[str, str]) -> DivisorExpr:
    """Sum of delta_S over S containing ``inside`` and missing ``outside``."""
    rest = [p for p in sig.labels if p not in inside and p not in outside]
    terms = []
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            terms.append((delta(0, inside + extra), 1))
    return DivisorExpr(sig, terms)


def keel_relation_exprs(labels) -> list[DivisorExpr]:
    """Two relations per 4-element subset {i<j<k<l}: (ij|kl) - (ik|jl) and (ij|kl) - (il|jk)."""
    sig = keel_signature(labels)
    out = []
    for i, j, k, l in combinations(sig.labels, 4):
        ij = _side_sum(sig, (i, j), (k, l))
        out.append(ij - _side_sum(sig, (i, k), (j, l)))
        out.append(ij - _side_sum(sig, (i, l), (j, k)))
    return out


def _delta_matrix(sig: ModuliSignature, exprs: Sequence[DivisorExpr]) -> RatMatrix:
    cols = all_deltas(sig)
    index = {s: c for c, s in enumerate(cols)}
    rows = []
    for e in exprs:
        row = [Fraction(0)] * len(cols)
        for s, c in e.items():
            row[index[s]] = c
        rows.append(row)
    return RatMatrix(rows, cols=len(cols))


def keel_relation_matrix(labels) -> RatMatrix:
    """Relation matrix with columns ordered as ``all_deltas`` of the genus-0 signature."""
    sig = keel_signature(labels)
    return _delta_matrix(sig, keel_relation_exprs(sig))


def keel_basis(labels, i: str, j: str, k: str) -> list[ClassSymbol]:
    """delta_S with i in S and 2 <= |S| <= n-3, together with delta_{j,k}."""
    sig = keel_signature(labels)
    i, j, k = str(i), str(j), str(k)
    if len({i, j, k}) != 3:
        raise SignatureError(f"need three distinct labels, got {(i, j, k)}")
    for p in (i, j, k):
        sig.position(p)
    n = sig.n
    others = [p for p in sig.labels if p != i]
    found = set()
    for size in range(1, n - 3):
        for extra in combinations(others, size):
            found.add(canonical_delta(0, (i,) + extra, sig))
    found.add(canonical_delta(0, (j, k), sig))
    syms = [delta(a, A) for a, A in found]
    syms.sort(key=lambda s: sig.subset_key(s.A))
    return syms


def verify_basis_independence(labels, candidate: Sequence[ClassSymbol]) -> bool:
    """True iff ``candidate`` is a basis of the span of the delta_S modulo Keel's relations."""
    sig = keel_signature(labels)
    cols = all_deltas(sig)
    index = {s: c for c, s in enumerate(cols)}
    rel = keel_relation_matrix(sig)
    rel_rank = rank(rel)
    cand_rows = []
    for s in candidate:
        a, A = canonical_delta(s.a, s.A, sig)
        if a != 0:
            raise SignatureError(f"{s} is not a genus-0 boundary class")
        row = [0] * len(cols)
        row[index[delta(a, A)]] = 1
        cand_rows.append(row)
    if len(cand_rows) != len(cols) - rel_rank:
        return False
    if not cand_rows:
        return True
    stacked = rel.vstack(RatMatrix(cand_rows, cols=len(cols)))
    return rank(stacked) == len(cols)


def keel_coordinates(labels, i: str, j: str, k: str) -> dict[ClassSymbol, list[Fraction]]:
    """Coordinates of every delta_S in the basis ``keel_basis(labels, i, j, k)``."""
    sig = keel_signature(labels)
    basis = keel_basis(sig, i, j, k)
    cols = all_deltas(sig)
    bset = set(basis)
    nonbasis = [s for s in cols if s not in bset]
    order = nonbasis + basis
    rel = keel_relation_matrix(sig)
    pos = {s: c for c, s in enumerate(cols)}
    reordered = RatMatrix([[rel[r, pos[s]] for s in order] for r in range(rel.rows)], cols=len(order))
    red, rk, pivots = rref_rank(reordered)
    if rk != len(nonbasis) or tuple(pivots) != tuple(range(len(nonbasis))):
        raise ArithmeticError("Keel basis does not complement the relation span")
    nb = len(nonbasis)
    coords = {}
    for r, s in enumerate(nonbasis):
        coords[s] = [-red[r, nb + t] for t in range(len(basis))]
    for t, s in enumerate(basis):
        coords[s] = [Fraction(int(t == u)) for u in range(len(basis))]
    return coords

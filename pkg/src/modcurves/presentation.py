"""Generators, relations and a coordinate reducer for H^2 of the compactified moduli space."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .classes import (
    DELTA_IRR,
    KAPPA1,
    LAMBDA,
    ClassSymbol,
    DivisorExpr,
    ModuliSignature,
    SignatureError,
    all_deltas,
    delta,
    expand_shorthand,
    psi,
)
from .keel import keel_basis, keel_relation_exprs
from .linalg import RatMatrix, rref_rank

__all__ = [
    "Presentation",
    "generators",
    "relation_exprs",
    "relation_matrix",
    "presentation",
    "dim_h2_bar",
    "genus0_kappa",
    "genus0_psi",
]


def generators(sig: ModuliSignature) -> list[ClassSymbol]:
    """kappa_1, the psi classes in label order, delta_irr, then the canonical deltas."""
    return [KAPPA1] + [psi(p) for p in sig.labels] + [DELTA_IRR] + all_deltas(sig)


def genus0_kappa(sig: ModuliSignature, x: str, y: str) -> DivisorExpr:
    """kappa_1 = sum over A missing x, y of (|A| - 1) delta_{0,A}."""
    return DivisorExpr(sig, [(s, len(_side_without(s, sig, x, y)) - 1)
                             for s in all_deltas(sig) if _side_without(s, sig, x, y) is not None])


def genus0_psi(sig: ModuliSignature, z: str, x: str, y: str) -> DivisorExpr:
    """psi_z = sum over A containing z and missing x, y of delta_{0,A}."""
    if len({z, x, y}) != 3:
        raise SignatureError("z, x, y must be distinct")
    terms = []
    for s in all_deltas(sig):
        side = _side_without(s, sig, x, y)
        if side is not None and z in side:
            terms.append((s, 1))
    return DivisorExpr(sig, terms)


def _side_without(s: ClassSymbol, sig: ModuliSignature, x: str, y: str):
    """The side of a genus-0 delta avoiding both x and y, if there is one."""
    for side in (s.A, sig.complement(s.A)):
        if x not in side and y not in side:
            return side
    return None


def relation_exprs(sig: ModuliSignature) -> list[DivisorExpr]:
    g = sig.genus
    if g >= 3:
        return []
    k1 = DivisorExpr.of(sig, KAPPA1)
    dirr = DivisorExpr.of(sig, DELTA_IRR)
    psi_sum = expand_shorthand("psi", sig)
    if g == 2:
        d0 = expand_shorthand("delta_b", sig, 0)
        d1 = expand_shorthand("delta_b", sig, 1)
        # 5 kappa_1 = 5 psi + delta_irr - 5 delta_0 + 7 delta_1
        return [5 * k1 - 5 * psi_sum - dirr + 5 * d0 - 7 * d1]
    if g == 1:
        d0 = expand_shorthand("delta_b", sig, 0)
        rows = [k1 - psi_sum + d0]
        for p in sig.labels:
            tail = DivisorExpr(sig, [(s, 1) for s in all_deltas(sig) if s.a == 0 and p in s.A])
            rows.append(12 * DivisorExpr.of(sig, psi(p)) - dirr - 12 * tail)
        return rows
    rows = keel_relation_exprs(sig) if sig.n >= 4 else []
    x, y = sig.labels[0], sig.labels[1]
    rows.append(k1 - genus0_kappa(sig, x, y))
    for z in sig.labels:
        zx, zy = [p for p in sig.labels if p != z][:2]
        rows.append(DivisorExpr.of(sig, psi(z)) - genus0_psi(sig, z, zx, zy))
    rows.append(dirr)
    return rows


def _basis(sig: ModuliSignature, gens: Sequence[ClassSymbol]) -> list[ClassSymbol]:
    g = sig.genus
    if g >= 3:
        return list(gens)
    if g == 2:
        return [s for s in gens if s != KAPPA1]
    if g == 1:
        return [s for s in gens if s.kind in ("dirr", "delta")]
    if sig.n < 4:
        return []
    i, j, k = sig.labels[:3]
    return keel_basis(sig, i, j, k)


class Presentation:
    """H^2 of the compactified space as generators modulo explicit relations.

    ``reduce`` maps a lambda-free expression to exact coordinates over
    ``basis``; ``lift`` is the section sending coordinates back to the
    corresponding combination of basis symbols.
    """

    def __init__(self, sig: ModuliSignature):
        self.signature = sig
        self.generators = tuple(generators(sig))
        self._index = {s: i for i, s in enumerate(self.generators)}
        rels = relation_exprs(sig)
        self.relations = RatMatrix([self.vector(e) for e in rels], cols=len(self.generators))
        self.basis = tuple(_basis(sig, self.generators))
        self._coords = self._build_reducer()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, e: DivisorExpr) -> list[Fraction]:
        """Coordinates of ``e`` over the generator list (no reduction)."""
        if e.signature != self.signature:
            raise SignatureError(f"expression on {e.signature}, presentation on {self.signature}")
        v = [Fraction(0)] * len(self.generators)
        for s, c in e.items():
            if s == LAMBDA:
                raise SignatureError("eliminate lambda before reducing")
            v[self._index[s]] += c
        return v

    def _build_reducer(self) -> dict[ClassSymbol, list[Fraction]]:
        bset = set(self.basis)
        nonbasis = [s for s in self.generators if s not in bset]
        order = nonbasis + list(self.basis)
        pos = [self._index[s] for s in order]
        rel = self.relations
        reordered = RatMatrix([[rel[r, c] for c in pos] for r in range(rel.rows)], cols=len(order))
        red, rk, pivots = rref_rank(reordered)
        nb = len(nonbasis)
        if rk != nb or tuple(pivots) != tuple(range(nb)):
            raise ArithmeticError(f"basis choice does not complement the relations on {self.signature}")
        coords = {}
        for r, s in enumerate(nonbasis):
            coords[s] = [-red[r, nb + t] for t in range(self.dim)]
        for t, s in enumerate(self.basis):
            coords[s] = [Fraction(int(t == u)) for u in range(self.dim)]
        return coords

    def reduce(self, e: DivisorExpr) -> list[Fraction]:
        if e.signature != self.signature:
            raise SignatureError(f"expression on {e.signature}, presentation on {self.signature}")
        out = [Fraction(0)] * self.dim
        for s, c in e.items():
            if s not in self._coords:
                raise SignatureError(f"{s} is not a generator on {self.signature}")
            for t, x in enumerate(self._coords[s]):
                if x:
                    out[t] += c * x
        return out

    def reduce_symbol(self, s: ClassSymbol) -> list[Fraction]:
        return list(self._coords[s])

    def lift(self, coords: Sequence) -> DivisorExpr:
        if len(coords) != self.dim:
            raise ValueError("coordinate vector has the wrong length")
        return DivisorExpr(self.signature, list(zip(self.basis, coords)))

    def __repr__(self) -> str:
        return f"Presentation({self.signature}, dim={self.dim})"


@lru_cache(maxsize=None)
def presentation(sig: ModuliSignature) -> Presentation:
    return Presentation(sig)


def relation_matrix(sig: ModuliSignature) -> RatMatrix:
    return presentation(sig).relations


def dim_h2_bar(sig: ModuliSignature) -> int:
    """Number of generators minus the rank of the relation matrix."""
    p = presentation(sig)
    return len(p.generators) - rref_rank(p.relations)[1]

"""Low-degree terms of the Gysin spectral sequence of (compactified space, boundary).

Only the pieces feeding total degree <= 2 are built:

* ``d1_codim1``: H^0 of the normalized boundary divisors -> H^2 of the
  compactified space, sending each stratum to its boundary class;
* ``d1_codim2``: H^0(codim-2 strata; orientation) -> the Aut-invariant H^2
  of the normalized boundary divisors.

H^1 of every compactified moduli space vanishes, so H^1 of the strata (a
quotient of a product of such spaces) is zero and never built.  Then

    h1(open) = dim ker d1_codim1
    h2(open) = dim ker d1_codim2 + dim coker d1_codim1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .classes import (
    DELTA_IRR,
    ClassSymbol,
    DivisorExpr,
    ModuliSignature,
    SignatureError,
    delta,
    psi,
)
from .graphs import (
    GraphMap,
    StableGraph,
    _contract,
    are_isomorphic,
    automorphisms,
    canonical_form,
    edge_orientation_trivial,
    enumerate_graphs,
)
from .linalg import RatMatrix, invariant_with_free_columns, rank
from .presentation import Presentation, presentation

__all__ = [
    "vanishing_bounds",
    "StratumH2",
    "stratum_h2",
    "boundary_class",
    "d1_codim1",
    "d1_codim2",
    "E1Page",
    "e1_page",
    "open_h1",
    "open_h2",
    "open_cohomology",
]


def vanishing_bounds(g: int, n: int) -> tuple[int, int]:
    """``(c, d)``: homology of the open space vanishes above degree c, and
    compactly supported cohomology vanishes up to degree d."""
    if g < 0 or n < 0 or 2 * g - 2 + n <= 0:
        raise SignatureError(f"unstable signature (g={g}, n={n})")
    if g == 0:
        return n - 3, n - 4
    if n == 0:
        return 4 * g - 5, 2 * g - 2
    return 4 * g - 4 + n, 2 * g - 3 + n


def boundary_class(G: StableGraph) -> ClassSymbol:
    """The divisor class of a one-edge stratum."""
    if G.num_edges != 1:
        raise ValueError("boundary_class expects a one-edge graph")
    if G.is_loop(0):
        return DELTA_IRR
    return delta(G.genera[0], G.legs[0])


def _half_edge_label(h: tuple[int, int]) -> str:
    return f"~{h[0]}.{h[1]}"


def vertex_signature(G: StableGraph, v: int) -> ModuliSignature:
    """Signature of the moduli factor at ``v``: its legs, then its half-edges by port."""
    sig = G.signature
    halves = sorted(h for h in G.half_edges() if h[0] == v)
    labels = sig.sorted_labels(G.legs[v]) + tuple(_half_edge_label(h) for h in halves)
    return ModuliSignature(G.genera[v], labels)


def _relabel(sym: ClassSymbol, mapping: dict[str, str]) -> ClassSymbol:
    if sym.kind == "psi":
        return psi(mapping.get(sym.label, sym.label))
    if sym.kind == "delta":
        return delta(sym.a, {mapping.get(p, p) for p in sym.A})
    return sym


def _label_map(m: GraphMap) -> dict[str, str]:
    return {_half_edge_label(h): _half_edge_label(k) for h, k in m.half_edge_items}


class StratumH2:
    """H^2 of the product of vertex factors of a graph, with its Aut action.

    Ambient coordinates concatenate the presentation bases of the vertex
    factors; ``invariant_basis`` spans the Aut-fixed part, which is H^2 of
    the normalized stratum.
    """

    def __init__(self, G: StableGraph):
        for p in G.signature.labels:
            if p.startswith("~"):
                raise SignatureError(f"label {p!r} clashes with internal half-edge names")
        self.graph = G
        self.vertex_signatures = [vertex_signature(G, v) for v in range(G.num_vertices)]
        self.presentations: list[Presentation] = [presentation(s) for s in self.vertex_signatures]
        self.offsets = []
        off = 0
        for p in self.presentations:
            self.offsets.append(off)
            off += p.dim
        self.dim = off
        self.automorphisms = automorphisms(G)
        self.action = [self._action_matrix(m) for m in self.automorphisms]
        basis, free = invariant_with_free_columns(self.action, self.dim)
        self.invariant_basis = basis
        self._free = free
        self._support = [[(i, x) for i, x in enumerate(b) if x] for b in basis]

    def vector(self, v: int, e: DivisorExpr) -> list[Fraction]:
        """Ambient coordinates of a class living on the factor at vertex ``v``."""
        out = [Fraction(0)] * self.dim
        coords = self.presentations[v].reduce(e)
        off = self.offsets[v]
        for t, x in enumerate(coords):
            out[off + t] = x
        return out

    def _action_matrix(self, m: GraphMap) -> RatMatrix:
        lmap = _label_map(m)
        cols = []
        for v, pres in enumerate(self.presentations):
            w = m.vertex_map[v]
            target = self.vertex_signatures[w]
            for b in pres.basis:
                image = DivisorExpr.of(target, _relabel(b, lmap))
                cols.append(self.vector(w, image))
        return RatMatrix.from_columns(cols, self.dim)

    def orbit_sum(self, vec: list[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for M in self.action:
            for i, x in enumerate(M.apply(vec)):
                out[i] += x
        return out

    def invariant_coordinates(self, vec: list[Fraction]) -> list[Fraction]:
        """Coordinates of an Aut-invariant ambient vector over ``invariant_basis``."""
        coords = [vec[f] for f in self._free]
        recon = [Fraction(0)] * self.dim
        for c, support in zip(coords, self._support):
            if c:
                for i, x in support:
                    recon[i] += c * x
        if recon != list(vec):
            raise ArithmeticError("vector is not invariant under the automorphism group")
        return coords

    @property
    def invariant_dim(self) -> int:
        return len(self.invariant_basis)


_STRATUM_CACHE: dict[tuple[ModuliSignature, bytes], StratumH2] = {}


def stratum_h2(G: StableGraph) -> StratumH2:
    if G.num_edges < 1:
        raise ValueError("strata have at least one edge")
    key = (G.signature, canonical_form(G))
    cached = _STRATUM_CACHE.get(key)
    if cached is None or cached.graph != G:
        cached = StratumH2(G)
        _STRATUM_CACHE[key] = cached
    return cached


def d1_codim1(sig: ModuliSignature) -> RatMatrix:
    """Columns: boundary classes of the one-edge strata, over the H^2 basis."""
    pres = presentation(sig)
    cols = [pres.reduce(DivisorExpr.of(sig, boundary_class(G))) for G in enumerate_graphs(sig, 1)]
    return RatMatrix.from_columns(cols, pres.dim)


def _gysin_column(G: StableGraph, reps: dict[bytes, int], strata: list[StratumH2],
                  offsets: list[int], nrows: int) -> list[Fraction]:
    """Image of the generator of H^0 of the stratum of a two-edge graph.

    For the ordered edges (e0, e1), dropping e0 keeps orientation e1 and
    dropping e1 keeps -e0.  Dropping edge f means smoothing the node f: the
    stratum of G sits in the stratum of G/f as the boundary divisor of type f
    at the vertex f collapses to.  Pulled back to the product of vertex
    factors of G/f this is the sum of the translates of that divisor over
    Aut(G/f) modulo the image of Aut(G), which equals
    |K_f| / |Aut(G)| times the full orbit sum, K_f being the automorphisms
    of G acting trivially on G/f (the flip of f when f is a loop).
    """
    col = [Fraction(0)] * nrows
    aut_order = len(automorphisms(G))
    for f in range(G.num_edges):
        sign = 1 if f == 0 else -1
        H, vmap, hmap = _contract(G, {f})
        a, b = G.edges[f]
        u, v = a[0], b[0]
        w = vmap[u]
        if u == v:
            cls = DELTA_IRR
            kernel = 2
        else:
            side = set(G.legs[u])
            for h in G.half_edges():
                if h[0] == u and h != a:
                    side.add(_half_edge_label(hmap[h]))
            cls = delta(G.genera[u], side)
            kernel = 1
        idx = reps[canonical_form(H)]
        stratum = strata[idx]
        iso = are_isomorphic(H, stratum.graph)
        lmap = _label_map(iso)
        w_rep = iso.vertex_map[w]
        expr = DivisorExpr.of(stratum.vertex_signatures[w_rep], _relabel(cls, lmap))
        vec = stratum.orbit_sum(stratum.vector(w_rep, expr))
        coords = stratum.invariant_coordinates(vec)
        scale = Fraction(sign * kernel, aut_order)
        for i, x in enumerate(coords):
            col[offsets[idx] + i] += scale * x
    return col


@dataclass(frozen=True)
class E1Page:
    signature: ModuliSignature
    codim1: tuple[tuple[StableGraph, int, int], ...]
    codim2: tuple[tuple[StableGraph, bool], ...]
    d1_12: RatMatrix
    d1_24: RatMatrix

    @property
    def h2_bar(self) -> int:
        return self.d1_12.rows


@lru_cache(maxsize=None)
def e1_page(sig: ModuliSignature) -> E1Page:
    """Strata data and both d1 matrices for total degree <= 2."""
    graphs1 = enumerate_graphs(sig, 1)
    strata = [stratum_h2(G) for G in graphs1]
    reps = {canonical_form(G): i for i, G in enumerate(graphs1)}
    offsets = []
    off = 0
    for s in strata:
        offsets.append(off)
        off += s.invariant_dim
    graphs2 = [(G, edge_orientation_trivial(G)) for G in enumerate_graphs(sig, 2)]
    cols = [_gysin_column(G, reps, strata, offsets, off) for G, ok in graphs2 if ok]
    return E1Page(
        signature=sig,
        codim1=tuple((G, 1, s.invariant_dim) for G, s in zip(graphs1, strata)),
        codim2=tuple(graphs2),
        d1_12=d1_codim1(sig),
        d1_24=RatMatrix.from_columns(cols, off),
    )


def d1_codim2(sig: ModuliSignature) -> RatMatrix:
    return e1_page(sig).d1_24


def open_h1(sig: ModuliSignature) -> int:
    M = d1_codim1(sig)
    return M.cols - rank(M)


def kernel_dim(M: RatMatrix) -> int:
    return M.cols - rank(M)


def open_h2(sig: ModuliSignature) -> int:
    page = e1_page(sig)
    for G, _, _ in page.codim1:
        # H^1 of every factor vanishes; the factors must be stable for that to apply.
        for v in range(G.num_vertices):
            vertex_signature(G, v)
    coker = page.h2_bar - rank(page.d1_12)
    return kernel_dim(page.d1_24) + coker


def open_cohomology(sig: ModuliSignature) -> dict[str, int]:
    c, d = vanishing_bounds(sig.genus, sig.n)
    return {"h1": open_h1(sig), "h2": open_h2(sig), "c": c, "d": d}

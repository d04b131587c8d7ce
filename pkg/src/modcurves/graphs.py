"""Stable P-pointed dual graphs: validation, isomorphism, automorphisms,
enumeration and edge contraction.

A half-edge is a pair ``(vertex, port)``; the ports of a vertex are numbered
``0 .. k-1`` where ``k`` is the number of non-leg half-edges at that vertex.
Isomorphism testing and canonical labelling are brute force over vertex
bijections that respect (genus, legs, degree, loop count); this is plenty for
graphs with a handful of edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from .classes import ModuliSignature

__all__ = [
    "GraphError",
    "DisconnectedGraphError",
    "GenusMismatchError",
    "UnstableVertexError",
    "LegPartitionError",
    "HalfEdgeError",
    "StableGraph",
    "GraphMap",
    "validate_graph",
    "canonical_form",
    "are_isomorphic",
    "automorphisms",
    "enumerate_graphs",
    "contract_edges",
    "contraction_edge_set",
    "edge_orientation_trivial",
    "graph_to_json",
    "graph_from_json",
]

HalfEdge = tuple[int, int]


class GraphError(ValueError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class GenusMismatchError(GraphError):
    pass


class UnstableVertexError(GraphError):
    pass


class LegPartitionError(GraphError):
    pass


class HalfEdgeError(GraphError):
    pass


@dataclass(frozen=True)
class StableGraph:
    signature: ModuliSignature
    genera: tuple[int, ...]
    legs: tuple[frozenset[str], ...]
    edges: tuple[tuple[HalfEdge, HalfEdge], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def h1(self) -> int:
        return self.num_edges - self.num_vertices + 1

    def degree(self, v: int) -> int:
        return sum((a[0] == v) + (b[0] == v) for a, b in self.edges)

    def loops(self, v: int) -> int:
        return sum(a[0] == v and b[0] == v for a, b in self.edges)

    def half_edges(self) -> list[HalfEdge]:
        return [h for e in self.edges for h in e]

    def endpoints(self, i: int) -> tuple[int, int]:
        a, b = self.edges[i]
        return a[0], b[0]

    def is_loop(self, i: int) -> bool:
        a, b = self.edges[i]
        return a[0] == b[0]

    def edge_of(self, h: HalfEdge) -> int:
        for i, (a, b) in enumerate(self.edges):
            if h == a or h == b:
                return i
        raise KeyError(h)

    def __str__(self) -> str:
        sig = self.signature
        verts = ", ".join(f"v{i}(g={g};{{{','.join(sig.sorted_labels(L))}}})"
                          for i, (g, L) in enumerate(zip(self.genera, self.legs)))
        edges = ", ".join(f"v{a[0]}-v{b[0]}" for a, b in self.edges)
        return f"[{verts} | {edges}]"


@dataclass(frozen=True)
class GraphMap:
    """Vertex and half-edge bijections between two graphs."""

    vertex_map: tuple[int, ...]
    half_edge_items: tuple[tuple[HalfEdge, HalfEdge], ...]

    @property
    def half_edge_map(self) -> dict[HalfEdge, HalfEdge]:
        return dict(self.half_edge_items)

    def edge_permutation(self, source: StableGraph, target: StableGraph) -> tuple[int, ...]:
        hmap = self.half_edge_map
        return tuple(target.edge_of(hmap[a]) for a, _ in source.edges)

    def compose(self, other: "GraphMap") -> "GraphMap":
        """``self`` after ``other``."""
        hs = self.half_edge_map
        return GraphMap(tuple(self.vertex_map[v] for v in other.vertex_map),
                        tuple(sorted((h, hs[k]) for h, k in other.half_edge_items)))

    def inverse(self) -> "GraphMap":
        inv = [0] * len(self.vertex_map)
        for v, w in enumerate(self.vertex_map):
            inv[w] = v
        return GraphMap(tuple(inv), tuple(sorted((k, h) for h, k in self.half_edge_items)))


def _is_connected(nv: int, pairs: Iterable[tuple[int, int]]) -> bool:
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(nv)}) <= 1


def validate_graph(sig: ModuliSignature, vertices: Sequence, edges: Sequence) -> StableGraph:
    """Check raw graph data and return a :class:`StableGraph`.

    ``vertices`` is a sequence of ``(genus, legs)``; ``edges`` a sequence of
    pairs of half-edges ``(vertex, port)``.
    """
    genera = []
    legs = []
    for entry in vertices:
        g_v, L = entry
        if not isinstance(g_v, int) or g_v < 0:
            raise GraphError(f"vertex genus must be a non-negative integer, got {g_v!r}")
        genera.append(g_v)
        legs.append(frozenset(str(x) for x in L))
    nv = len(genera)
    if nv == 0:
        raise GraphError("graph has no vertices")
    seen: set[str] = set()
    for L in legs:
        if L & seen:
            raise LegPartitionError(f"labels {sorted(L & seen)} appear on more than one vertex")
        seen |= L
    if seen != set(sig.labels):
        raise LegPartitionError(f"legs {sorted(seen)} do not partition the labels {list(sig.labels)}")

    norm_edges = []
    ports: dict[int, list[int]] = {v: [] for v in range(nv)}
    for e in edges:
        if len(e) != 2:
            raise HalfEdgeError(f"edge {e!r} is not a pair of half-edges")
        pair = []
        for h in e:
            v, p = int(h[0]), int(h[1])
            if not 0 <= v < nv:
                raise HalfEdgeError(f"half-edge {h!r} refers to a missing vertex")
            ports[v].append(p)
            pair.append((v, p))
        norm_edges.append((pair[0], pair[1]))
    for v, ps in ports.items():
        if sorted(ps) != list(range(len(ps))):
            raise HalfEdgeError(f"ports at vertex {v} must be 0..{len(ps) - 1} used once each, got {sorted(ps)}")

    if not _is_connected(nv, [(a[0], b[0]) for a, b in norm_edges]):
        raise DisconnectedGraphError("graph is disconnected")
    h1 = len(norm_edges) - nv + 1
    total = h1 + sum(genera)
    if total != sig.genus:
        raise GenusMismatchError(f"h1 + sum of vertex genera is {total}, signature genus is {sig.genus}")
    for v in range(nv):
        if 2 * genera[v] - 2 + len(legs[v]) + len(ports[v]) <= 0:
            raise UnstableVertexError(f"vertex {v} (genus {genera[v]}, {len(legs[v])} legs, "
                                      f"{len(ports[v])} half-edges) is unstable")
    return StableGraph(sig, tuple(genera), tuple(legs), tuple(norm_edges))


def _from_abstract(sig: ModuliSignature, verts: Sequence[tuple[int, frozenset]],
                   pairs: Sequence[tuple[int, int]]) -> StableGraph:
    """Build a graph from vertex data and edge endpoints, numbering ports in edge order."""
    nxt = [0] * len(verts)
    edges = []
    for u, v in pairs:
        a = (u, nxt[u])
        nxt[u] += 1
        b = (v, nxt[v])
        nxt[v] += 1
        edges.append((a, b))
    return validate_graph(sig, verts, edges)


def _invariant(G: StableGraph, v: int) -> tuple:
    return (G.genera[v], G.signature.subset_key(G.legs[v]), G.degree(v), G.loops(v))


def _orderings(G: StableGraph) -> Iterator[tuple[int, ...]]:
    """Vertex orderings listing vertices by sorted invariant, permuting within ties."""
    groups: dict[tuple, list[int]] = {}
    for v in range(G.num_vertices):
        groups.setdefault(_invariant(G, v), []).append(v)
    keys = sorted(groups)
    for choice in product(*(permutations(groups[k]) for k in keys)):
        yield tuple(v for block in choice for v in block)


def _key_for(G: StableGraph, order: Sequence[int]) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    verts = tuple(_invariant(G, v)[:2] for v in order)
    pairs = tuple(sorted(tuple(sorted((pos[a[0]], pos[b[0]]))) for a, b in G.edges))
    return verts, pairs


def _canonical(G: StableGraph) -> tuple[tuple, tuple[int, ...]]:
    best = None
    for order in _orderings(G):
        k = _key_for(G, order)
        if best is None or k < best[0]:
            best = (k, order)
    return best


def canonical_form(G: StableGraph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic."""
    (verts, pairs), _ = _canonical(G)
    return json.dumps([G.signature.genus, len(G.signature.labels), verts, pairs],
                      separators=(",", ":")).encode()


def canonical_graph(G: StableGraph) -> StableGraph:
    (verts, pairs), order = _canonical(G)
    data = [(G.genera[v], G.legs[v]) for v in order]
    return _from_abstract(G.signature, data, pairs)


def _edges_between(G: StableGraph) -> dict[tuple[int, int], list[int]]:
    out: dict[tuple[int, int], list[int]] = {}
    for i, (a, b) in enumerate(G.edges):
        out.setdefault(tuple(sorted((a[0], b[0]))), []).append(i)
    return out


def _oriented(G: StableGraph, i: int, u: int) -> tuple[HalfEdge, HalfEdge]:
    """Edge ``i`` with its half-edge at vertex ``u`` first."""
    a, b = G.edges[i]
    return (a, b) if a[0] == u else (b, a)


def _maps_over(G1: StableGraph, G2: StableGraph, sigma: Sequence[int], all_maps: bool) -> Iterator[GraphMap]:
    """GraphMaps G1 -> G2 lying over the vertex bijection ``sigma``."""
    e1 = _edges_between(G1)
    e2 = _edges_between(G2)
    blocks = []
    for (u, v), idx in sorted(e1.items()):
        target = e2.get(tuple(sorted((sigma[u], sigma[v]))), [])
        if len(target) != len(idx):
            return
        blocks.append((u, v, idx, target))
    if len(e2) != len(e1):
        return

    def block_choices(u, v, idx, target):
        perms = permutations(target) if all_maps else [tuple(target)]
        for perm in perms:
            if u != v:
                yield [(_oriented(G1, i, u), _oriented(G2, j, sigma[u])) for i, j in zip(idx, perm)]
            else:
                flips = product((False, True), repeat=len(idx)) if all_maps else [(False,) * len(idx)]
                for fl in flips:
                    out = []
                    for i, j, f in zip(idx, perm, fl):
                        src = G1.edges[i]
                        dst = G2.edges[j]
                        out.append((src, dst[::-1] if f else dst))
                    yield out

    for combo in product(*(block_choices(*blk) for blk in blocks)):
        items = []
        for block in combo:
            for (s1, s2), (t1, t2) in block:
                items.append((s1, t1))
                items.append((s2, t2))
        yield GraphMap(tuple(sigma), tuple(sorted(items)))


def _vertex_bijections(G1: StableGraph, G2: StableGraph) -> Iterator[tuple[int, ...]]:
    if G1.num_vertices != G2.num_vertices or G1.signature != G2.signature:
        return
    inv2 = [_invariant(G2, v) for v in range(G2.num_vertices)]
    inv1 = [_invariant(G1, v) for v in range(G1.num_vertices)]
    if sorted(inv1) != sorted(inv2):
        return
    candidates = [[w for w in range(G2.num_vertices) if inv2[w] == inv1[v]] for v in range(G1.num_vertices)]

    def extend(v, used, acc):
        if v == G1.num_vertices:
            yield tuple(acc)
            return
        for w in candidates[v]:
            if w not in used:
                used.add(w)
                acc.append(w)
                yield from extend(v + 1, used, acc)
                acc.pop()
                used.discard(w)

    yield from extend(0, set(), [])


def are_isomorphic(G1: StableGraph, G2: StableGraph) -> GraphMap | None:
    """An isomorphism G1 -> G2, or ``None``."""
    for sigma in _vertex_bijections(G1, G2):
        for m in _maps_over(G1, G2, sigma, all_maps=False):
            return m
    return None


def automorphisms(G: StableGraph) -> list[GraphMap]:
    """Every automorphism of ``G`` as an explicit map, identity first."""
    maps = [m for sigma in _vertex_bijections(G, G) for m in _maps_over(G, G, sigma, all_maps=True)]
    ident = GraphMap(tuple(range(G.num_vertices)), tuple(sorted((h, h) for h in G.half_edges())))
    maps.sort(key=lambda m: (m != ident, m.vertex_map, m.half_edge_items))
    return maps


def _perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def edge_orientation_trivial(G: StableGraph) -> bool:
    """True iff every automorphism permutes the edges evenly."""
    return all(_perm_sign(m.edge_permutation(G, G)) == 1 for m in automorphisms(G))


def _contract(G: StableGraph, S: Iterable[int]):
    """Contract edge set ``S``; returns (graph, vertex map, half-edge map of surviving half-edges)."""
    S = set(S)
    if not S <= set(range(G.num_edges)):
        raise GraphError(f"edges {sorted(S - set(range(G.num_edges)))} are not edges of the graph")
    nv = G.num_vertices
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in sorted(S):
        u, v = G.endpoints(i)
        parent[find(u)] = find(v)
    roots = []
    for v in range(nv):
        r = find(v)
        if r not in roots:
            roots.append(r)
    vmap = [roots.index(find(v)) for v in range(nv)]
    genera = [0] * len(roots)
    legs: list[frozenset] = [frozenset()] * len(roots)
    count_v = [0] * len(roots)
    count_e = [0] * len(roots)
    for v in range(nv):
        w = vmap[v]
        genera[w] += G.genera[v]
        legs[w] = legs[w] | G.legs[v]
        count_v[w] += 1
    for i in S:
        count_e[vmap[G.endpoints(i)[0]]] += 1
    for w in range(len(roots)):
        genera[w] += count_e[w] - count_v[w] + 1
    nxt = [0] * len(roots)
    hmap: dict[HalfEdge, HalfEdge] = {}
    edges = []
    for i, (a, b) in enumerate(G.edges):
        if i in S:
            continue
        pair = []
        for h in (a, b):
            w = vmap[h[0]]
            new = (w, nxt[w])
            nxt[w] += 1
            hmap[h] = new
            pair.append(new)
        edges.append(tuple(pair))
    H = validate_graph(G.signature, list(zip(genera, legs)), edges)
    return H, vmap, hmap


def contract_edges(G: StableGraph, S: Iterable[int]) -> StableGraph:
    return _contract(G, S)[0]


def contraction_edge_set(G: StableGraph, Gp: StableGraph) -> frozenset[int]:
    """Edges of ``G`` whose contraction alone yields a graph isomorphic to ``Gp``."""
    target = canonical_form(Gp)
    return frozenset(i for i in range(G.num_edges) if canonical_form(contract_edges(G, {i})) == target)


def _splits(sig: ModuliSignature, verts: list, pairs: list) -> Iterator[tuple[list, list]]:
    """All one-edge degenerations of an abstract graph, as (verts, pairs)."""
    for v, (g_v, L) in enumerate(verts):
        if g_v >= 1:
            nverts = list(verts)
            nverts[v] = (g_v - 1, L)
            yield nverts, pairs + [(v, v)]
        ends = [(i, side) for i, pr in enumerate(pairs) for side in (0, 1) if pr[side] == v]
        labels = sorted(L, key=sig.position)
        new = len(verts)
        for g1 in range(g_v + 1):
            g2 = g_v - g1
            for lmask in range(1 << len(labels)):
                L2 = frozenset(p for k, p in enumerate(labels) if lmask >> k & 1)
                L1 = L - L2
                for emask in range(1 << len(ends)):
                    k2 = bin(emask).count("1")
                    k1 = len(ends) - k2
                    if 2 * g1 - 2 + len(L1) + k1 + 1 <= 0 or 2 * g2 - 2 + len(L2) + k2 + 1 <= 0:
                        continue
                    npairs = [list(pr) for pr in pairs]
                    for k, (i, side) in enumerate(ends):
                        if emask >> k & 1:
                            npairs[i][side] = new
                    nverts = list(verts)
                    nverts[v] = (g1, L1)
                    nverts.append((g2, L2))
                    yield nverts, [tuple(pr) for pr in npairs] + [(v, new)]


def enumerate_graphs(sig: ModuliSignature, p: int) -> list[StableGraph]:
    """One canonical representative per isomorphism class of stable graphs with ``p`` edges,
    sorted by canonical form."""
    if p < 0:
        raise ValueError("edge count must be non-negative")
    return list(_enumerate(sig, p))


_ENUM_CACHE: dict[tuple[ModuliSignature, int], tuple[StableGraph, ...]] = {}


def _enumerate(sig: ModuliSignature, p: int) -> tuple[StableGraph, ...]:
    key = (sig, p)
    if key in _ENUM_CACHE:
        return _ENUM_CACHE[key]
    if p == 0:
        out = (validate_graph(sig, [(sig.genus, sig.labels)], []),)
    else:
        found: dict[bytes, StableGraph] = {}
        for G in _enumerate(sig, p - 1):
            verts = list(zip(G.genera, G.legs))
            pairs = [(a[0], b[0]) for a, b in G.edges]
            for nverts, npairs in _splits(sig, verts, pairs):
                H = _from_abstract(sig, nverts, npairs)
                cf = canonical_form(H)
                if cf not in found:
                    found[cf] = canonical_graph(H)
        out = tuple(found[k] for k in sorted(found))
    _ENUM_CACHE[key] = out
    return out


def graph_to_json(G: StableGraph) -> dict:
    sig = G.signature
    return {
        "genus": sig.genus,
        "labels": list(sig.labels),
        "vertices": [{"genus": g, "legs": list(sig.sorted_labels(L))} for g, L in zip(G.genera, G.legs)],
        "edges": [[list(a), list(b)] for a, b in G.edges],
    }


def graph_from_json(data: dict, sig: ModuliSignature | None = None) -> StableGraph:
    if sig is None:
        sig = ModuliSignature(int(data["genus"]), tuple(str(x) for x in data["labels"]))
    verts = [(int(v["genus"]), [str(x) for x in v["legs"]]) for v in data["vertices"]]
    edges = [(tuple(a), tuple(b)) for a, b in data["edges"]]
    return validate_graph(sig, verts, edges)

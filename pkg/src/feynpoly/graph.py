"""Directed multigraphs, minors, and exhaustive subgraph enumeration.

Edge ids are positive integers and double as Schwinger-variable labels:
edge ``e`` is polynomial variable ``e - 1``.  Every enumeration returns its
results in a deterministic order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

FERMION = "fermion"
PHOTON = "photon"
KINDS = (FERMION, PHOTON)


class GraphError(ValueError):
    """Invalid graph structure or an impossible graph operation."""


@dataclass(frozen=True, order=True)
class Edge:
    id: int
    src: int
    dst: int
    kind: str = PHOTON

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True)
class Graph:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    external: tuple[int, ...] = ()
    name: str = ""
    nvars: int = 0

    def __post_init__(self) -> None:
        verts = tuple(sorted(set(self.vertices)))
        if len(verts) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        edges = tuple(sorted(self.edges, key=lambda e: e.id))
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge ids")
        vs = set(verts)
        for e in edges:
            if e.id < 1:
                raise GraphError(f"edge id {e.id} must be positive")
            if e.src not in vs or e.dst not in vs:
                raise GraphError(f"edge {e.id} references an unknown vertex")
            if e.kind not in KINDS:
                raise GraphError(f"edge {e.id} has unknown kind {e.kind!r}")
        for v in self.external:
            if v not in vs:
                raise GraphError(f"external vertex {v} is not a vertex")
        nvars = max(self.nvars, max(ids, default=0))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "external", tuple(self.external))
        object.__setattr__(self, "nvars", nvars)

    @classmethod
    def build(
        cls,
        edges: Iterable[tuple[int, int, int] | tuple[int, int, int, str]],
        vertices: Iterable[int] | None = None,
        external: Sequence[int] = (),
        name: str = "",
        nvars: int = 0,
    ) -> "Graph":
        es = [Edge(*e) for e in edges]
        if vertices is None:
            vertices = sorted({v for e in es for v in (e.src, e.dst)} | set(external))
        return cls(tuple(vertices), tuple(es), tuple(external), name, nvars)

    # lookups ----------------------------------------------------------------

    def edge(self, eid: int) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(f"no edge with id {eid}")

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.edges)

    def var(self, eid: int) -> int:
        return eid - 1

    def with_name(self, name: str) -> "Graph":
        return Graph(self.vertices, self.edges, self.external, name, self.nvars)


# connectivity helpers ---------------------------------------------------------


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, items: Iterable[int]):
        self.parent = {v: v for v in items}

    def find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def components(G: Graph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by minimum."""
    d = _DSU(G.vertices)
    for e in G.edges:
        d.union(e.src, e.dst)
    groups: dict[int, list[int]] = {}
    for v in G.vertices:
        groups.setdefault(d.find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])


def is_connected(G: Graph) -> bool:
    return len(components(G)) <= 1


def betti(G: Graph) -> int:
    return len(G.edges) - len(G.vertices) + len(components(G))


def is_bridge(G: Graph, eid: int) -> bool:
    e = G.edge(eid)
    if e.is_loop:
        return False
    return len(components(minor(G, delete=[eid]))) > len(components(G))


def induced_components(G: Graph) -> list[Graph]:
    """The connected components as separate graphs (same variable space)."""
    out = []
    for comp in components(G):
        cs = set(comp)
        es = tuple(e for e in G.edges if e.src in cs)
        ext = tuple(v for v in G.external if v in cs)
        out.append(Graph(tuple(comp), es, ext, G.name, G.nvars))
    return out


# minors -----------------------------------------------------------------------


def minor(G: Graph, delete: Iterable[int] = (), contract: Iterable[int] = ()) -> Graph:
    """Delete and contract edge sets; surviving edges keep their ids.

    Contracted vertices merge into the smallest vertex id of their class.
    """
    delete = set(delete)
    contract = list(contract)
    if delete & set(contract):
        raise GraphError("delete and contract sets overlap")
    known = set(G.edge_ids)
    for eid in delete | set(contract):
        if eid not in known:
            raise GraphError(f"unknown edge id {eid}")
    d = _DSU(G.vertices)
    for eid in sorted(contract):
        e = G.edge(eid)
        if not d.union(e.src, e.dst):
            raise GraphError(f"cannot contract self-loop {eid}")
    removed = delete | set(contract)
    verts = tuple(sorted({d.find(v) for v in G.vertices}))
    edges = tuple(
        Edge(e.id, d.find(e.src), d.find(e.dst), e.kind) for e in G.edges if e.id not in removed
    )
    ext = tuple(d.find(v) for v in G.external)
    return Graph(verts, edges, ext, G.name, G.nvars)


def identify_vertices(G: Graph, keep: int, drop: int) -> Graph:
    """Merge vertex ``drop`` into ``keep`` without touching any edge."""
    if keep not in G.vertices or drop not in G.vertices:
        raise GraphError("unknown vertex")
    if keep == drop:
        return G
    target = min(keep, drop)

    def m(v: int) -> int:
        return target if v in (keep, drop) else v

    verts = tuple(sorted({m(v) for v in G.vertices}))
    edges = tuple(Edge(e.id, m(e.src), m(e.dst), e.kind) for e in G.edges)
    return Graph(verts, edges, (), G.name, G.nvars)


def dot_graph(G: Graph) -> Graph:
    """The graph with its two external vertices identified."""
    if len(G.external) != 2:
        raise GraphError("expected exactly two external vertices")
    x, y = G.external
    return identify_vertices(G, x, y)


# enumeration ------------------------------------------------------------------


def _acyclic_subsets(G: Graph, size: int) -> Iterator[tuple[int, ...]]:
    """All forests with ``size`` edges, by include/exclude backtracking."""
    edges = [e for e in G.edges if not e.is_loop]
    n = len(edges)
    chosen: list[int] = []

    def rec(i: int, parent: dict[int, int]) -> Iterator[tuple[int, ...]]:
        need = size - len(chosen)
        if need == 0:
            yield tuple(chosen)
            return
        if n - i < need:
            return
        e = edges[i]

        def find(v: int) -> int:
            while parent[v] != v:
                v = parent[v]
            return v

        ra, rb = find(e.src), find(e.dst)
        if ra != rb:
            p2 = dict(parent)
            p2[max(ra, rb)] = min(ra, rb)
            chosen.append(e.id)
            yield from rec(i + 1, p2)
            chosen.pop()
        yield from rec(i + 1, parent)

    yield from rec(0, {v: v for v in G.vertices})


def maximal_forests(G: Graph) -> list[frozenset[int]]:
    """Spanning forests with one tree per connected component."""
    size = len(G.vertices) - len(components(G))
    return [frozenset(s) for s in _acyclic_subsets(G, size)]


def spanning_trees(G: Graph) -> list[frozenset[int]]:
    if not is_connected(G):
        raise GraphError("spanning trees need a connected graph")
    return maximal_forests(G)


def _tree_of(forest: Iterable[int], G: Graph) -> dict[int, int]:
    d = _DSU(G.vertices)
    for eid in forest:
        e = G.edge(eid)
        d.union(e.src, e.dst)
    return {v: d.find(v) for v in G.vertices}


def spanning_forests(G: Graph, parts: Sequence[Iterable[int]]) -> list[frozenset[int]]:
    """Spanning k-forests whose i-th tree contains the i-th part (k = len(parts))."""
    parts = [frozenset(p) for p in parts]
    vs = set(G.vertices)
    seen: set[int] = set()
    for p in parts:
        if not p:
            raise GraphError("empty part")
        if not p <= vs:
            raise GraphError("part references an unknown vertex")
        if seen & p:
            raise GraphError("parts overlap")
        seen |= p
    k = len(parts)
    size = len(G.vertices) - k
    if size < 0:
        return []
    out = []
    edge_map = {e.id: e for e in G.edges}
    for forest in _acyclic_subsets(G, size):
        d = _DSU(G.vertices)
        for eid in forest:
            e = edge_map[eid]
            d.union(e.src, e.dst)
        roots = []
        ok = True
        for p in parts:
            rs = {d.find(v) for v in p}
            if len(rs) != 1:
                ok = False
                break
            roots.append(rs.pop())
        if ok and len(set(roots)) == k:
            out.append(frozenset(forest))
    return out


@dataclass(frozen=True)
class OrientedSubgraph:
    """An edge set with a sign per member edge (+1 along, -1 against)."""

    signs: tuple[tuple[int, int], ...]
    _lookup: dict = field(default=None, compare=False, hash=False, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_lookup", dict(self.signs))

    @property
    def edges(self) -> frozenset[int]:
        return frozenset(self._lookup)

    def sign(self, eid: int) -> int:
        return self._lookup.get(eid, 0)

    def __contains__(self, eid: int) -> bool:
        return eid in self._lookup


def simple_cycles(G: Graph) -> list[OrientedSubgraph]:
    """All simple cycles, traversed starting along their lowest edge id."""
    out = []
    edges = list(G.edges)
    for e0 in edges:
        if e0.is_loop:
            out.append(OrientedSubgraph(((e0.id, 1),)))
            continue
        start, first = e0.src, e0.dst
        higher = [e for e in edges if e.id > e0.id and not e.is_loop]
        path: list[tuple[int, int]] = [(e0.id, 1)]
        visited = {start, first}

        def walk(v: int) -> None:
            for e in higher:
                if any(e.id == pid for pid, _ in path):
                    continue
                if e.src == v:
                    w, s = e.dst, 1
                elif e.dst == v:
                    w, s = e.src, -1
                else:
                    continue
                if w == start:
                    out.append(OrientedSubgraph(tuple(sorted(path + [(e.id, s)]))))
                elif w not in visited:
                    visited.add(w)
                    path.append((e.id, s))
                    walk(w)
                    path.pop()
                    visited.discard(w)

        walk(first)
    return out


def bonds(G: Graph) -> list[OrientedSubgraph]:
    """Minimal cuts, oriented away from the side holding the lowest vertex."""
    if not is_connected(G):
        raise GraphError("bonds need a connected graph")
    verts = list(G.vertices)
    if len(verts) < 2:
        return []
    v0, rest = verts[0], verts[1:]
    out = []
    for mask in range(1 << len(rest)):
        side = {v0} | {v for i, v in enumerate(rest) if mask >> i & 1}
        if len(side) == len(verts):
            continue
        other = set(verts) - side
        if not (_induced_connected(G, side) and _induced_connected(G, other)):
            continue
        signs = []
        for e in G.edges:
            a, b = e.src in side, e.dst in side
            if a and not b:
                signs.append((e.id, 1))
            elif b and not a:
                signs.append((e.id, -1))
        out.append(OrientedSubgraph(tuple(signs)))
    out.sort(key=lambda b: sorted(b.edges))
    return out


def _induced_connected(G: Graph, vs: set[int]) -> bool:
    d = _DSU(vs)
    for e in G.edges:
        if e.src in vs and e.dst in vs:
            d.union(e.src, e.dst)
    return len({d.find(v) for v in vs}) == 1


# random graphs ----------------------------------------------------------------


def random_connected_graph(
    rng: random.Random,
    n_vertices: int,
    n_edges: int,
    allow_multi: bool = True,
    external: bool = False,
) -> Graph:
    """A random spanning tree plus extra random edges, with random orientations."""
    if n_vertices < 1 or n_edges < n_vertices - 1:
        raise GraphError("too few edges to connect the vertices")
    verts = list(range(1, n_vertices + 1))
    pairs: list[tuple[int, int]] = []
    for i in range(1, n_vertices):
        pairs.append((verts[i], verts[rng.randrange(i)]))
    seen = {frozenset(p) for p in pairs}
    tries = 0
    while len(pairs) < n_edges:
        tries += 1
        if tries > 10000:
            raise GraphError("could not place the requested number of edges")
        a, b = rng.sample(verts, 2) if n_vertices > 1 else (1, 1)
        if not allow_multi and frozenset((a, b)) in seen:
            continue
        seen.add(frozenset((a, b)))
        pairs.append((a, b))
    rng.shuffle(pairs)
    edges = []
    for eid, (a, b) in enumerate(pairs, start=1):
        if rng.random() < 0.5:
            a, b = b, a
        edges.append((eid, a, b))
    ext: tuple[int, ...] = ()
    if external and n_vertices > 1:
        ext = tuple(rng.sample(verts, 2))
    return Graph.build(edges, vertices=verts, external=ext)

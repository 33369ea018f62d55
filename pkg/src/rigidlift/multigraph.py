"""Directed multigraphs with stable edge ids.

Parallel edges are allowed, loops are forbidden, and every graph carries a
base orientation (the tail/head data of each edge) together with a
distinguished base edge.  All operations are pure; graphs are immutable
after construction.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    BaseEdgeInArch,
    Disconnected,
    DuplicateEdgeId,
    LoopEdge,
    MissingBaseEdge,
    NoCommonCycle,
    NotTwoConnected,
    NotTwoEdgeConnected,
)


def id_key(x):
    """Canonical sort key for caller-supplied (string or integer) ids."""
    return (x.__class__.__name__, x)


class Multigraph:
    """A connected, loopless directed multigraph with a base edge."""

    __slots__ = ("_vertices", "_edges", "_base", "_incidence", "_edge_ids", "_key", "_hash")

    def __init__(self, vertices, edges, base_edge):
        self._vertices = frozenset(vertices)
        self._edges = dict(edges)
        self._base = base_edge
        self._edge_ids = tuple(sorted(self._edges, key=id_key))
        self._incidence = {v: [] for v in self._vertices}
        for e in self._edge_ids:
            o, t = self._edges[e]
            self._incidence[o].append(e)
            self._incidence[t].append(e)
        self._key = (
            tuple(sorted(self._vertices, key=id_key)),
            tuple((e, self._edges[e]) for e in self._edge_ids),
            base_edge,
        )
        self._hash = hash(self._key)

    # -- basic accessors -----------------------------------------------------

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        return dict(self._edges)

    @property
    def edge_ids(self):
        return self._edge_ids

    @property
    def vertex_ids(self):
        return self._key[0]

    @property
    def base_edge(self):
        return self._base

    def o(self, e):
        return self._edges[e][0]

    def t(self, e):
        return self._edges[e][1]

    def ends(self, e):
        return self._edges[e]

    def other_end(self, e, v):
        o, t = self._edges[e]
        return t if v == o else o

    @property
    def base_tail(self):
        return self.o(self._base)

    @property
    def base_head(self):
        return self.t(self._base)

    def incident(self, v):
        return list(self._incidence[v])

    def degree(self, v):
        return len(self._incidence[v])

    @property
    def genus(self):
        return len(self._edges) - len(self._vertices) + 1

    def has_edge(self, e):
        return e in self._edges

    def edges_between(self, u, v):
        pair = frozenset((u, v))
        return [e for e in self._incidence[u] if frozenset(self._edges[e]) == pair]

    def with_base(self, base_edge):
        if base_edge not in self._edges:
            raise MissingBaseEdge(f"edge {base_edge!r} not in graph")
        if base_edge == self._base:
            return self
        return Multigraph(self._vertices, self._edges, base_edge)

    def __eq__(self, other):
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return (
            f"Multigraph({len(self._vertices)} vertices, "
            f"{len(self._edges)} edges, base={self._base!r})"
        )


@dataclass(frozen=True)
class EdgePath:
    """A walk through the graph: edges in order with traversal signs.

    ``signs[i]`` is +1 when ``edges[i]`` is crossed tail-to-head and -1
    otherwise.  ``vertices`` lists the visited vertices, one more than the
    number of edges; a cycle closes up (first vertex equals last).
    """

    edges: tuple
    signs: tuple
    vertices: tuple

    @property
    def is_cycle(self):
        return len(self.vertices) > 1 and self.vertices[0] == self.vertices[-1]

    def coefficients(self):
        """Edge -> net traversal sign (each edge of a simple path appears once)."""
        out = {}
        for e, s in zip(self.edges, self.signs):
            out[e] = out.get(e, 0) + s
            if out[e] == 0:
                del out[e]
        return out

    def reversed(self):
        return EdgePath(
            tuple(reversed(self.edges)),
            tuple(-s for s in reversed(self.signs)),
            tuple(reversed(self.vertices)),
        )


@dataclass(frozen=True)
class Arch:
    """An edge subset meeting its complement in exactly two tip vertices."""

    edges: frozenset
    tips: tuple
    complement: frozenset


# -- construction ------------------------------------------------------------


def build_graph(edge_list, base_edge):
    """Validate and build a Multigraph from (edge-id, tail, head) triples."""
    edges = {}
    vertices = set()
    for eid, tail, head in edge_list:
        if eid in edges:
            raise DuplicateEdgeId(f"duplicate edge id {eid!r}")
        if tail == head:
            raise LoopEdge(f"edge {eid!r} is a loop at {tail!r}")
        edges[eid] = (tail, head)
        vertices.add(tail)
        vertices.add(head)
    if base_edge not in edges:
        raise MissingBaseEdge(f"base edge {base_edge!r} not among edges")
    g = Multigraph(vertices, edges, base_edge)
    if not _is_connected(g):
        raise Disconnected("underlying graph is not connected")
    return g


def _is_connected(g, removed_edges=frozenset(), removed_vertices=frozenset()):
    remaining = [v for v in g.vertex_ids if v not in removed_vertices]
    if not remaining:
        return True
    seen = {remaining[0]}
    stack = [remaining[0]]
    while stack:
        v = stack.pop()
        for e in g.incident(v):
            if e in removed_edges:
                continue
            w = g.other_end(e, v)
            if w in removed_vertices or w in seen:
                continue
            seen.add(w)
            stack.append(w)
    return len(seen) == len(remaining)


# -- invariants --------------------------------------------------------------


def genus(g):
    return g.genus


def connectivity_profile(g):
    """Return (is 2-connected, exact edge connectivity)."""
    if len(g.vertices) < 2:
        return (False, 0)
    two_connected = _is_connected(g) and all(
        _is_connected(g, removed_vertices={v}) for v in g.vertex_ids
    )
    s = g.vertex_ids[0]
    k = min(_max_flow(g, s, t) for t in g.vertex_ids if t != s)
    return (two_connected, k)


def _max_flow(g, s, t):
    cap = {}
    for e in g.edge_ids:
        u, v = g.ends(e)
        cap[(u, v)] = cap.get((u, v), 0) + 1
        cap[(v, u)] = cap.get((v, u), 0) + 1
    flow = 0
    while True:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for (a, b), c in cap.items():
                if a == u and c > 0 and b not in parent:
                    parent[b] = (a, b)
                    queue.append(b)
        if t not in parent:
            return flow
        arcs = []
        node = t
        while parent[node] is not None:
            arcs.append(parent[node])
            node = parent[node][0]
        push = min(cap[a] for a in arcs)
        for a, b in arcs:
            cap[(a, b)] -= push
            cap[(b, a)] = cap.get((b, a), 0) + push
        flow += push


def series_classes(g):
    """Partition edges into series classes (pairs whose removal disconnects)."""
    _, k = connectivity_profile(g)
    if k < 2:
        raise NotTwoEdgeConnected("series classes require a 2-edge-connected graph")
    parent = {e: e for e in g.edge_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in combinations(g.edge_ids, 2):
        if not _is_connected(g, removed_edges={a, b}):
            parent[find(a)] = find(b)
    blocks = {}
    for e in g.edge_ids:
        blocks.setdefault(find(e), []).append(e)
    return sorted(
        (tuple(sorted(b, key=id_key)) for b in blocks.values()),
        key=lambda b: id_key(b[0]),
    )


def series_class_of(g, e):
    for block in series_classes(g):
        if e in block:
            return block
    raise MissingBaseEdge(f"edge {e!r} not in graph")


# -- cycles ------------------------------------------------------------------


def cycle_through_edges(g, a, b, seed=None):
    """A simple cycle through both edges, deterministic unless seeded."""
    if a == b or not (g.has_edge(a) and g.has_edge(b)):
        raise NoCommonCycle(f"need two distinct edges, got {a!r}, {b!r}")
    rng = random.Random(seed) if seed is not None else None
    start, first_stop = g.o(a), g.t(a)
    target = start

    # Depth-first search over simple paths extending edge `a` forward.
    def extend(current, used_edges, visited, acc):
        candidates = g.incident(current)
        candidates = sorted(candidates, key=id_key)
        if rng is not None:
            rng.shuffle(candidates)
        for e in candidates:
            if e in used_edges:
                continue
            w = g.other_end(e, current)
            sign = 1 if g.o(e) == current else -1
            if w == target:
                if b in used_edges or e == b:
                    return acc + [(e, sign, w)]
                continue
            if w in visited:
                continue
            res = extend(w, used_edges | {e}, visited | {w}, acc + [(e, sign, w)])
            if res is not None:
                return res
        return None

    res = extend(first_stop, {a}, {start, first_stop}, [(a, 1, first_stop)])
    if res is None:
        raise NoCommonCycle(f"no simple cycle through {a!r} and {b!r}")
    edges = tuple(e for e, _, _ in res)
    signs = tuple(s for _, s, _ in res)
    verts = (start,) + tuple(w for _, _, w in res)
    return EdgePath(edges, signs, verts)


def spanning_tree_edges(g):
    """Deterministic spanning tree: greedily add lowest edge ids."""
    parent = {v: v for v in g.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for e in g.edge_ids:
        u, v = g.ends(e)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.append(e)
    return tree


def tree_path(g, tree, src, dst):
    """EdgePath from src to dst inside the given tree edge set."""
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for e in sorted(g.incident(v), key=id_key):
            if e not in tree:
                continue
            w = g.other_end(e, v)
            if w not in prev:
                prev[w] = (e, v)
                queue.append(w)
    steps = []
    node = dst
    while prev[node] is not None:
        e, v = prev[node]
        steps.append((e, 1 if g.t(e) == node else -1, node))
        node = v
    steps.reverse()
    edges = tuple(e for e, _, _ in steps)
    signs = tuple(s for _, s, _ in steps)
    verts = (src,) + tuple(w for _, _, w in steps)
    return EdgePath(edges, signs, verts)


def fundamental_cycles(g):
    """genus(g) independent simple cycles from the deterministic spanning tree."""
    tree = set(spanning_tree_edges(g))
    cycles = []
    for e in g.edge_ids:
        if e in tree:
            continue
        back = tree_path(g, tree, g.t(e), g.o(e))
        edges = (e,) + back.edges
        signs = (1,) + back.signs
        verts = (g.o(e),) + back.vertices
        cycles.append(EdgePath(edges, signs, verts))
    return cycles


def shortest_path(g, src, dst):
    """Deterministic BFS path (ties broken by vertex id then edge id)."""
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for e in sorted(g.incident(v), key=id_key):
            w = g.other_end(e, v)
            if w not in prev:
                prev[w] = (e, v)
                queue.append(w)
    steps = []
    node = dst
    while prev[node] is not None:
        e, v = prev[node]
        steps.append((e, 1 if g.t(e) == node else -1, node))
        node = v
    steps.reverse()
    edges = tuple(e for e, _, _ in steps)
    signs = tuple(s for _, s, _ in steps)
    verts = (src,) + tuple(w for _, _, w in steps)
    return EdgePath(edges, signs, verts)


# -- arches and Whitney moves ------------------------------------------------


def _side_vertices(g, edge_set):
    verts = set()
    for e in edge_set:
        verts.update(g.ends(e))
    return verts


def find_arches(g):
    """All arches, found by testing every 2-vertex separator."""
    two_conn, _ = connectivity_profile(g)
    if not two_conn:
        raise NotTwoConnected("arches require a 2-connected graph")
    arches = []
    seen = set()
    for v, w in combinations(g.vertex_ids, 2):
        removed = {v, w}
        rest = [u for u in g.vertex_ids if u not in removed]
        comp_of = {}
        for u in rest:
            if u in comp_of:
                continue
            comp_id = len({c for c in comp_of.values()})
            stack = [u]
            comp_of[u] = comp_id
            while stack:
                x = stack.pop()
                for e in g.incident(x):
                    y = g.other_end(e, x)
                    if y in removed or y in comp_of:
                        continue
                    comp_of[y] = comp_id
                    stack.append(y)
        bridges = {}
        for e in g.edge_ids:
            a, b = g.ends(e)
            inner = [u for u in (a, b) if u not in removed]
            if inner:
                bridges.setdefault(("comp", comp_of[inner[0]]), set()).add(e)
            else:
                bridges.setdefault(("direct", e), set()).add(e)
        parts = list(bridges.values())
        if len(parts) < 2:
            continue
        n = len(parts)
        for mask in range(1, (1 << n) - 1):
            x = set()
            for i in range(n):
                if mask & (1 << i):
                    x |= parts[i]
            comp = set(g.edge_ids) - x
            if len(_side_vertices(g, x)) < 3 or len(_side_vertices(g, comp)) < 3:
                continue
            if _side_vertices(g, x) & _side_vertices(g, comp) != removed:
                continue
            key = (frozenset(x), (v, w))
            if key in seen:
                continue
            seen.add(key)
            arches.append(Arch(frozenset(x), (v, w), frozenset(comp)))
    return sorted(
        arches,
        key=lambda a: (
            tuple(id_key(t) for t in a.tips),
            tuple(sorted((id_key(e) for e in a.edges))),
        ),
    )


def whitney_move(g, arch):
    """Reglue the arch with its tips swapped; edges keep their orientation.

    Returns the new graph together with the identity-on-edge-ids morphism,
    whose sign function is -1 exactly on the arch edges.
    """
    if g.base_edge in arch.edges:
        raise BaseEdgeInArch("base edge may not lie in the moved arch")
    v, w = arch.tips

    def swap(x):
        if x == v:
            return w
        if x == w:
            return v
        return x

    triples = []
    for e in g.edge_ids:
        a, b = g.ends(e)
        if e in arch.edges:
            a, b = swap(a), swap(b)
        triples.append((e, a, b))
    moved = build_graph(triples, g.base_edge)
    from .orcyc import make_morphism

    morphism = make_morphism(g, moved, {e: e for e in g.edge_ids})
    return moved, morphism


# -- counting ----------------------------------------------------------------


def spanning_tree_count(g):
    """Number of spanning trees, via the reduced Laplacian determinant."""
    verts = [v for v in g.vertex_ids][1:]
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    if n == 0:
        return 1
    mat = [[Fraction(0)] * n for _ in range(n)]
    for e in g.edge_ids:
        a, b = g.ends(e)
        if a in index:
            mat[index[a]][index[a]] += 1
        if b in index:
            mat[index[b]][index[b]] += 1
        if a in index and b in index:
            mat[index[a]][index[b]] -= 1
            mat[index[b]][index[a]] -= 1
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = Fraction(1) / mat[col][col]
        for r in range(col + 1, n):
            factor = mat[r][col] * inv
            if factor:
                for c in range(col, n):
                    mat[r][c] -= factor * mat[col][c]
    assert det.denominator == 1
    return int(abs(det))

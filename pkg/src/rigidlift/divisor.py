"""Divisor arithmetic: Laplacian, q-reduction, effectiveness, Abel-Jacobi,
Picard enumeration and the discrete theta divisor."""

from __future__ import annotations

import enum
from collections import deque
from functools import lru_cache

from .errors import (
    EnumerationBoundExceeded,
    GenusTooSmall,
    ValidationError,
    WrongDegree,
)
from .multigraph import id_key

DEFAULT_MAX_CLASSES = 10**6


class Divisor:
    """An integer-valued function on the vertices of a fixed graph."""

    __slots__ = ("graph", "_coeffs", "_hash")

    def __init__(self, graph, coeffs=None):
        self.graph = graph
        clean = {}
        for v, c in (coeffs or {}).items():
            if v not in graph.vertices:
                raise ValidationError(f"vertex {v!r} not in graph")
            if c:
                clean[v] = int(c)
        self._coeffs = clean
        self._hash = hash((graph, tuple(sorted(clean.items(), key=lambda kv: id_key(kv[0])))))

    def __getitem__(self, v):
        return self._coeffs.get(v, 0)

    def items(self):
        return sorted(self._coeffs.items(), key=lambda kv: id_key(kv[0]))

    @property
    def degree(self):
        return sum(self._coeffs.values())

    @property
    def is_effective(self):
        return all(c >= 0 for c in self._coeffs.values())

    def __add__(self, other):
        self._check(other)
        out = dict(self._coeffs)
        for v, c in other._coeffs.items():
            out[v] = out.get(v, 0) + c
        return Divisor(self.graph, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Divisor(self.graph, {v: -c for v, c in self._coeffs.items()})

    def __rmul__(self, k):
        return Divisor(self.graph, {v: int(k) * c for v, c in self._coeffs.items()})

    def _check(self, other):
        if not isinstance(other, Divisor) or other.graph != self.graph:
            raise ValidationError("divisors live on different graphs")

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.graph == other.graph and self._coeffs == other._coeffs

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self._coeffs:
            return "Divisor(0)"
        terms = " ".join(f"{v}:{c}" for v, c in self.items())
        return f"Divisor({terms})"


def divisor(g, coeffs=None):
    return Divisor(g, coeffs)


def vertex_divisor(g, v, mult=1):
    return Divisor(g, {v: mult})


def all_vertices_divisor(g):
    return Divisor(g, {v: 1 for v in g.vertices})


def laplacian_fire(g, script):
    """Image of a firing script under the Laplacian (adjacency minus degree)."""
    out = {v: 0 for v in g.vertices}
    for v, times in script.items():
        if v not in g.vertices:
            raise ValidationError(f"vertex {v!r} not in graph")
        if not times:
            continue
        for e in g.incident(v):
            w = g.other_end(e, v)
            out[w] += times
            out[v] -= times
    return Divisor(g, out)


def _fire_set(g, d, vertex_set, times=1):
    delta = {v: 0 for v in g.vertices}
    for e in g.edge_ids:
        a, b = g.ends(e)
        if (a in vertex_set) != (b in vertex_set):
            src, dst = (a, b) if a in vertex_set else (b, a)
            delta[src] -= times
            delta[dst] += times
    return d + Divisor(g, delta)


def _bfs_distances(g, q):
    dist = {q: 0}
    queue = deque([q])
    while queue:
        v = queue.popleft()
        for e in sorted(g.incident(v), key=id_key):
            w = g.other_end(e, v)
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def q_reduce(g, d, q):
    """The unique q-reduced divisor linearly equivalent to d."""
    if q not in g.vertices:
        raise ValidationError(f"vertex {q!r} not in graph")
    dist = _bfs_distances(g, q)
    coeffs = {v: d[v] for v in g.vertices}
    d = Divisor(g, coeffs)
    max_dist = max(dist.values())

    # Phase 1: clear debt working outward-in; firing the ball of radius k-1
    # only adds chips at distance >= k.
    for k in range(max_dist, 0, -1):
        ring = [v for v in g.vertex_ids if dist[v] == k]
        ball = {v for v in g.vertices if dist[v] < k}
        while any(d[v] < 0 for v in ring):
            gain = {}
            for v in ring:
                if d[v] >= 0:
                    continue
                into = sum(
                    1
                    for e in g.incident(v)
                    if g.other_end(e, v) in ball
                )
                gain[v] = into
            times = max((-d[v] + gain[v] - 1) // gain[v] for v in gain)
            d = _fire_set(g, d, ball, max(times, 1))

    # Phase 2: Dhar's burning algorithm.
    while True:
        burnt = {q}
        changed = True
        while changed:
            changed = False
            for v in g.vertex_ids:
                if v in burnt:
                    continue
                incoming = sum(1 for e in g.incident(v) if g.other_end(e, v) in burnt)
                if incoming > d[v]:
                    burnt.add(v)
                    changed = True
        if len(burnt) == len(g.vertices):
            return d
        unburnt = set(g.vertices) - burnt
        d = _fire_set(g, d, unburnt)


def dhar_burn_order(g, d, q):
    """Burning order from q for a q-reduced divisor d (q first; all burn)."""
    order = [q]
    burnt = {q}
    while len(burnt) < len(g.vertices):
        progressed = False
        for v in g.vertex_ids:
            if v in burnt:
                continue
            incoming = sum(1 for e in g.incident(v) if g.other_end(e, v) in burnt)
            if incoming > d[v]:
                order.append(v)
                burnt.add(v)
                progressed = True
                break
        if not progressed:
            raise ValidationError("divisor is not q-reduced: burning stalls")
    return order


def linearly_equivalent(g, d1, d2):
    if d1.degree != d2.degree:
        return False
    q = g.base_head
    return q_reduce(g, d1, q) == q_reduce(g, d2, q)


def is_effective_class(g, d):
    """True iff d is linearly equivalent to an effective divisor."""
    q = g.base_head
    return q_reduce(g, d, q)[q] >= 0


def canonical_divisor(g):
    return Divisor(g, {v: g.degree(v) - 2 for v in g.vertices})


class DivisorClass:
    """A divisor class, canonicalized by q-reduction at t(base edge)."""

    __slots__ = ("graph", "representative", "_hash")

    def __init__(self, graph, d):
        self.graph = graph
        self.representative = q_reduce(graph, d, graph.base_head)
        self._hash = hash((graph, self.representative))

    @property
    def degree(self):
        return self.representative.degree

    @property
    def is_zero(self):
        return self.degree == 0 and not self.representative.items()

    @property
    def is_effective(self):
        return self.representative[self.graph.base_head] >= 0

    def __add__(self, other):
        if isinstance(other, DivisorClass):
            other = other.representative
        return DivisorClass(self.graph, self.representative + other)

    def __sub__(self, other):
        if isinstance(other, DivisorClass):
            other = other.representative
        return DivisorClass(self.graph, self.representative - other)

    def __neg__(self):
        return DivisorClass(self.graph, -self.representative)

    def __eq__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.graph == other.graph and self.representative == other.representative

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"DivisorClass({self.representative!r}, deg={self.degree})"


def abel_jacobi(g, points, base_edge=None):
    """Class of sum(points) - n * t(base edge)."""
    t0 = g.t(base_edge) if base_edge is not None else g.base_head
    coeffs = {}
    n = 0
    for p in points:
        if p not in g.vertices:
            raise ValidationError(f"vertex {p!r} not in graph")
        coeffs[p] = coeffs.get(p, 0) + 1
        n += 1
    coeffs[t0] = coeffs.get(t0, 0) - n
    return DivisorClass(g, Divisor(g, coeffs))


def enumerate_picard(g, degree, max_classes=DEFAULT_MAX_CLASSES):
    """All divisor classes of the given degree (finite; desk scale)."""
    q0 = g.base_head
    start = DivisorClass(g, Divisor(g, {q0: degree}))
    seen = {start}
    frontier = deque([start])
    verts = g.vertex_ids
    while frontier:
        cls = frontier.popleft()
        rep = cls.representative
        for p in verts:
            for q in verts:
                if p == q:
                    continue
                nxt = DivisorClass(g, rep + Divisor(g, {p: 1, q: -1}))
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > max_classes:
                        raise EnumerationBoundExceeded(
                            f"more than {max_classes} classes"
                        )
                    frontier.append(nxt)
    return frozenset(seen)


@lru_cache(maxsize=None)
def _theta_cached(g, base_edge, max_classes):
    gr = g.with_base(base_edge) if base_edge != g.base_edge else g
    gen = g.genus
    t0 = gr.base_head
    theta = set()
    for cls in enumerate_picard(g, 0, max_classes):
        shifted = cls.representative + Divisor(g, {t0: gen - 1})
        if is_effective_class(g, shifted):
            theta.add(cls)
    return frozenset(theta)


def theta_divisor(g, base_edge=None, max_classes=DEFAULT_MAX_CLASSES):
    """Degree-0 classes c with c + (g-1)t(base) effective (the theta divisor)."""
    if g.genus < 1:
        raise GenusTooSmall("theta divisor needs genus >= 1")
    return _theta_cached(g, base_edge if base_edge is not None else g.base_edge, max_classes)


class Classification(enum.Enum):
    SPECIAL = "Special"
    NONSPECIAL = "Nonspecial"


def classify_gminus1(g, d):
    if d.degree != g.genus - 1:
        raise WrongDegree(
            f"expected degree {g.genus - 1}, got {d.degree}"
        )
    return Classification.SPECIAL if is_effective_class(g, d) else Classification.NONSPECIAL

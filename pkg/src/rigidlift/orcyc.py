"""Morphisms of based oriented graphs given by cyclic (matroid) bijections:
sign computation, pushforwards, rigidity and lowering divisors, theta
preservation, non-rigidity witnesses and lifting to graph isomorphisms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BaseNotPreserved,
    CompositionMismatch,
    GenusTooSmall,
    InternalError,
    InvalidCyclicBijection,
    MorphismIsRigid,
    MorphismNotRigid,
    NotBijection,
    NotTwoConnected,
    NotTwoEdgeConnected,
)
from .divisor import (
    DEFAULT_MAX_CLASSES,
    Divisor,
    DivisorClass,
    is_effective_class,
    theta_divisor,
    vertex_divisor,
)
from .homology import Cochain, h_edge, iota, iota_inverse, lattice_for, p_vertex
from .multigraph import (
    connectivity_profile,
    cycle_through_edges,
    id_key,
    series_class_of,
    series_classes,
)
from .orientation import (
    EdgeState,
    PartialOrientation,
    base_orientation,
    chern_class,
    extend_to_nonspecial,
    lift_divisor_to_orientation,
)


def require_orcyc_object(g):
    two_conn, edge_conn = connectivity_profile(g)
    if not two_conn:
        raise NotTwoConnected(f"{g!r} is not 2-connected")
    if edge_conn < 2:
        raise NotTwoEdgeConnected(f"{g!r} is not 2-edge-connected")


@lru_cache(maxsize=None)
def _gf2_cycle_basis(g):
    """Fundamental cycles as GF(2) edge-index bitmasks."""
    index = {e: i for i, e in enumerate(g.edge_ids)}
    from .multigraph import fundamental_cycles

    basis = []
    for cyc in fundamental_cycles(g):
        mask = 0
        for e in cyc.edges:
            mask ^= 1 << index[e]
        basis.append(mask)
    # Row-reduce for membership tests.
    reduced = []
    for m in basis:
        for r in reduced:
            m = min(m, m ^ r)
        if m:
            reduced.append(m)
            reduced.sort(reverse=True)
    return tuple(reduced)


def _in_gf2_span(reduced, m):
    for r in reduced:
        m = min(m, m ^ r)
    return m == 0


def validate_cyclic_bijection(g, h, edge_map, require_base=True):
    """True iff edge_map carries the cycle space of g onto that of h."""
    if set(edge_map) != set(g.edge_ids) or set(edge_map.values()) != set(h.edge_ids):
        raise NotBijection("edge_map is not a bijection between the edge sets")
    if len(set(edge_map.values())) != len(edge_map):
        raise NotBijection("edge_map is not injective")
    if require_base and edge_map[g.base_edge] != h.base_edge:
        raise BaseNotPreserved(
            f"base {g.base_edge!r} maps to {edge_map[g.base_edge]!r}, "
            f"not {h.base_edge!r}"
        )
    if g.genus != h.genus:
        return False
    index_h = {e: i for i, e in enumerate(h.edge_ids)}
    target_basis = _gf2_cycle_basis(h)
    from .multigraph import fundamental_cycles

    for cyc in fundamental_cycles(g):
        mask = 0
        for e in cyc.edges:
            mask ^= 1 << index_h[edge_map[e]]
        if not _in_gf2_span(target_basis, mask):
            return False
    return True


@dataclass(frozen=True)
class OrCycMorphism:
    """A base-preserving cyclic bijection with its computed sign function."""

    source: object
    target: object
    edge_map: tuple  # sorted ((source edge, target edge), ...)
    signs: tuple  # sorted ((source edge, +1 | -1), ...)

    def map_edge(self, e):
        return dict(self.edge_map)[e]

    @property
    def edge_dict(self):
        return dict(self.edge_map)

    @property
    def sign_dict(self):
        return dict(self.signs)

    def sgn(self, e):
        return dict(self.signs)[e]

    def __repr__(self):
        return f"OrCycMorphism({self.source!r} -> {self.target!r})"


def _freeze_map(d):
    return tuple(sorted(d.items(), key=lambda kv: id_key(kv[0])))


def _traverse_edge_subset_cycle(h, edge_set):
    """Traverse the simple cycle formed by edge_set in h.

    Returns {edge: +1/-1} traversal signs, with the direction chosen so the
    base-most edge (lowest id) is crossed tail-to-head."""
    incid = {}
    for e in edge_set:
        for v in h.ends(e):
            incid.setdefault(v, []).append(e)
    if any(len(es) != 2 for es in incid.values()):
        raise InvalidCyclicBijection(
            "image of a simple cycle is not a simple cycle"
        )
    start_edge = min(edge_set, key=id_key)
    signs = {start_edge: 1}
    current = h.t(start_edge)
    prev_edge = start_edge
    while current != h.o(start_edge):
        nxt = next(e for e in incid[current] if e != prev_edge)
        signs[nxt] = 1 if h.o(nxt) == current else -1
        current = h.other_end(nxt, current)
        prev_edge = nxt
    if len(signs) != len(edge_set):
        raise InvalidCyclicBijection("image cycle does not close up")
    return signs


def compute_signs(g, h, edge_map, seed=None):
    """The unique sign function with sgn(base) = +1.

    For each edge u, a simple cycle through the base edge and u is chosen,
    its image traversed compatibly with the target base edge, and the sign
    read off as the ratio of traversal signs."""
    base = g.base_edge
    signs = {base: 1}
    for u in g.edge_ids:
        if u == base:
            continue
        cyc = cycle_through_edges(g, base, u, seed=seed)
        src_signs = dict(zip(cyc.edges, cyc.signs))
        image_edges = {edge_map[e] for e in cyc.edges}
        img_signs = _traverse_edge_subset_cycle(h, image_edges)
        # Flip the traversal so the image of the base edge matches h's base
        # orientation positively.
        flip = img_signs[edge_map[base]]
        q = img_signs[edge_map[u]] * flip
        s = src_signs[u] * src_signs[base]
        signs[u] = q * s
    return signs


def make_morphism(g, h, edge_map, seed=None, precomputed_signs=None):
    require_orcyc_object(g)
    require_orcyc_object(h)
    if not validate_cyclic_bijection(g, h, edge_map):
        raise InvalidCyclicBijection("edge_map does not preserve simple cycles")
    if precomputed_signs is None:
        signs = compute_signs(g, h, edge_map, seed=seed)
    else:
        signs = dict(precomputed_signs)
    return OrCycMorphism(g, h, _freeze_map(edge_map), _freeze_map(signs))


def identity_morphism(g):
    ident = {e: e for e in g.edge_ids}
    return make_morphism(g, g, ident, precomputed_signs={e: 1 for e in g.edge_ids})


def compose(m2, m1):
    """m2 after m1; signs obey the product rule."""
    if m1.target != m2.source:
        raise CompositionMismatch("target of the first morphism is not the source of the second")
    emap1, emap2 = m1.edge_dict, m2.edge_dict
    sgn1, sgn2 = m1.sign_dict, m2.sign_dict
    emap = {e: emap2[emap1[e]] for e in emap1}
    signs = {e: sgn2[emap1[e]] * sgn1[e] for e in emap1}
    return OrCycMorphism(m1.source, m2.target, _freeze_map(emap), _freeze_map(signs))


def inverse_morphism(m):
    forward = m.edge_dict
    emap = {t: s for s, t in forward.items()}
    signs = {forward[s]: sg for s, sg in m.signs}
    return OrCycMorphism(m.target, m.source, _freeze_map(emap), _freeze_map(signs))


# -- pushforwards ------------------------------------------------------------


def pushforward_cochain(m, x):
    emap, sgn = m.edge_dict, m.sign_dict
    return Cochain(m.target, {emap[e]: sgn[e] * c for e, c in x.items()})


def pushforward_orientation(m, u):
    emap, sgn = m.edge_dict, m.sign_dict
    states = {}
    for e in m.source.edge_ids:
        s = u.state(e)
        if s in (EdgeState.UNORIENTED, EdgeState.BIORIENTED):
            states[emap[e]] = s
        else:
            val = (1 if s is EdgeState.FORWARD else -1) * sgn[e]
            states[emap[e]] = EdgeState.FORWARD if val == 1 else EdgeState.BACKWARD
    return PartialOrientation(m.target, states)


def pushforward_class(m, cls):
    """Image of a degree-0 class under iota -> pushforward -> iota-inverse."""
    x, k = iota(m.source, cls.representative)
    y = pushforward_cochain(m, x)
    return DivisorClass(m.target, iota_inverse(m.target, y, k))


# -- rigidity ----------------------------------------------------------------


def rigidity_divisor(m):
    """E_phi as a degree-0 divisor class on the target."""
    g, h = m.source, m.target
    xg, kg = iota(g, chern_class(base_orientation(g)))
    xh, kh = iota(h, chern_class(base_orientation(h)))
    assert kg == kh
    defect = pushforward_cochain(m, xg) - xh
    lat_h = lattice_for(h)
    for e, sgn in m.signs:
        if sgn == -1:
            defect = defect + h_edge(lat_h, m.map_edge(e))
    return DivisorClass(h, iota_inverse(h, defect, 0))


def lowering_divisor(m, edge_set):
    """L_X = sum over X of (P_{t(phi(e))} - phi_*(P_{t(e)})) as a class."""
    g, h = m.source, m.target
    total = Cochain(h)
    for e in sorted(edge_set, key=id_key):
        total = total + p_vertex(h, h.t(m.map_edge(e))) - pushforward_cochain(
            m, p_vertex(g, g.t(e))
        )
    return DivisorClass(h, iota_inverse(h, lattice_for(h).project(total), 0))


def diagram_defect(m, u):
    """phi_* iota c(U) - iota c(phi_O(U)) as a degree-0 class on the target."""
    g, h = m.source, m.target
    xg, kg = iota(g, chern_class(u))
    xh, kh = iota(h, chern_class(pushforward_orientation(m, u)))
    assert kg == kh
    defect = pushforward_cochain(m, xg) - xh
    return DivisorClass(h, iota_inverse(h, defect, 0))


def _require_genus(m):
    if m.source.genus < 2 or m.target.genus < 2:
        raise GenusTooSmall("rigidity analysis requires genus >= 2")


def is_rigid(m):
    _require_genus(m)
    return rigidity_divisor(m).is_zero


def theta_preserved(m, max_classes=DEFAULT_MAX_CLASSES):
    """Independent check: push every theta class and compare to the target."""
    _require_genus(m)
    g, h = m.source, m.target
    theta_g = theta_divisor(g, max_classes=max_classes)
    theta_h = theta_divisor(h, max_classes=max_classes)
    image = {pushforward_class(m, c) for c in theta_g}
    return image == theta_h


def s1_image_preserved(m):
    """Whether the image of the degree-1 Abel-Jacobi map is carried over."""
    _require_genus(m)
    g, h = m.source, m.target
    src = {
        DivisorClass(g, vertex_divisor(g, v) - vertex_divisor(g, g.base_head))
        for v in g.vertices
    }
    dst = {
        DivisorClass(h, vertex_divisor(h, w) - vertex_divisor(h, h.base_head))
        for w in h.vertices
    }
    return {pushforward_class(m, c) for c in src} == dst


def nonrigidity_witness(m, max_classes=DEFAULT_MAX_CLASSES):
    """A theta element of the source whose image misses the target theta."""
    _require_genus(m)
    if is_rigid(m):
        raise MorphismIsRigid("morphism is rigid; no witness exists")
    g, h = m.source, m.target
    gen = g.genus
    theta_g = theta_divisor(g, max_classes=max_classes)
    theta_h = theta_divisor(h, max_classes=max_classes)
    e_rep = rigidity_divisor(m).representative
    inv = inverse_morphism(m)
    for v in sorted(h.vertex_ids, key=id_key):
        q = e_rep + vertex_divisor(h, v)
        if is_effective_class(h, q):
            continue
        t = extend_to_nonspecial(h, q)
        b = vertex_divisor(h, v) + t  # effective, degree genus - 1
        w_orient = lift_divisor_to_orientation(h, b)
        if not isinstance(w_orient, PartialOrientation):
            continue
        u = pushforward_orientation(inv, w_orient)
        s_div = chern_class(u) - Divisor(g, {g.base_head: gen - 1})
        s = DivisorClass(g, s_div)
        image = pushforward_class(m, s)
        if s in theta_g and image not in theta_h:
            return s, image
    # Fallback: direct search over the source theta divisor.
    for s in sorted(theta_g, key=lambda c: tuple(c.representative.items())):
        image = pushforward_class(m, s)
        if image not in theta_h:
            return s, image
    raise InternalError("non-rigid morphism but theta image matches")


# -- lifting -----------------------------------------------------------------


def lift_to_graph_isomorphism(m):
    """For a rigid morphism, a series-fixing correction psi and a vertex map
    such that psi composed with the edge map is a graph isomorphism."""
    _require_genus(m)
    if not is_rigid(m):
        raise MorphismNotRigid("only rigid morphisms lift")
    g, h = m.source, m.target
    emap = m.edge_dict

    # Degree-1 Abel-Jacobi classes of the target, for locating image vertices.
    class_of_vertex = {}
    for r in h.vertex_ids:
        cls = DivisorClass(
            h, vertex_divisor(h, r) - vertex_divisor(h, h.base_head)
        )
        class_of_vertex[r] = cls

    def locate(p):
        """The target vertex r with phi_*(P_p) equivalent to P_r."""
        x = p_vertex(g, p)
        pushed = pushforward_cochain(m, x)
        cls = DivisorClass(h, iota_inverse(h, lattice_for(h).project(pushed), 0))
        matches = [r for r, c in class_of_vertex.items() if c == cls]
        if len(matches) != 1:
            raise InternalError(f"vertex image for {p!r} is not unique: {matches}")
        return matches[0]

    vertex_map = {g.base_head: h.base_head, g.base_tail: h.base_tail}
    assigned = {g.base_edge: h.base_edge}
    used = {h.base_edge}
    pending = [e for e in g.edge_ids if e != g.base_edge]
    while pending:
        progressed = False
        for e in list(pending):
            ends = g.ends(e)
            mapped = [v for v in ends if v in vertex_map]
            if not mapped:
                continue
            for p in ends:
                if p not in vertex_map:
                    vertex_map[p] = locate(p)
            a, b = (vertex_map[ends[0]], vertex_map[ends[1]])
            candidates = [
                r
                for r in series_class_of(h, emap[e])
                if r not in used and frozenset(h.ends(r)) == frozenset((a, b))
            ]
            if not candidates:
                raise InternalError(
                    f"no unused series-class edge between {a!r} and {b!r} "
                    f"for {e!r}"
                )
            choice = min(candidates, key=id_key)
            assigned[e] = choice
            used.add(choice)
            pending.remove(e)
            progressed = True
        if not progressed:
            raise InternalError("lift construction stalled; graph disconnected?")

    # psi corrects phi edge-by-edge: psi(phi(e)) = assigned(e).
    psi = {emap[e]: assigned[e] for e in g.edge_ids}
    _verify_isomorphism(g, h, assigned, vertex_map)
    classes_h = series_classes(h)
    for r, r2 in psi.items():
        block = next(b for b in classes_h if r in b)
        if r2 not in block:
            raise InternalError("correction permutation is not series fixing")
    return psi, vertex_map


def _verify_isomorphism(g, h, edge_map, vertex_map):
    if sorted(vertex_map, key=id_key) != list(g.vertex_ids):
        raise InternalError("vertex map does not cover the source")
    if sorted(vertex_map.values(), key=id_key) != list(h.vertex_ids):
        raise InternalError("vertex map is not a bijection")
    if sorted(edge_map.values(), key=id_key) != list(h.edge_ids):
        raise InternalError("edge map is not a bijection")
    for e in g.edge_ids:
        a, b = g.ends(e)
        img = frozenset(h.ends(edge_map[e]))
        if img != frozenset((vertex_map[a], vertex_map[b])):
            raise InternalError(f"adjacency not preserved at edge {e!r}")


@dataclass(frozen=True)
class MatroidLift:
    edge_map: tuple
    vertex_map: tuple
    base_edge: object
    rigid_candidate: object
    tried: tuple


@dataclass(frozen=True)
class NotLiftable:
    base_edge: object
    tried: tuple


def lift_matroid_isomorphism(g, h, edge_map):
    """Lift a base-free matroid isomorphism to a graph isomorphism if one
    exists up to series-fixing automorphisms of the target."""
    require_orcyc_object(g)
    require_orcyc_object(h)
    if g.genus < 2 or h.genus < 2:
        raise GenusTooSmall("matroid lifting requires genus >= 2")
    base = min(g.edge_ids, key=id_key)
    g2 = g.with_base(base)
    if not validate_cyclic_bijection(g2, h, edge_map, require_base=False):
        raise InvalidCyclicBijection("edge_map does not preserve simple cycles")
    w = edge_map[base]
    tried = []
    for wi in series_class_of(h, w):
        tau = {r: r for r in h.edge_ids}
        tau[w], tau[wi] = wi, w
        composed = {e: tau[edge_map[e]] for e in g2.edge_ids}
        h2 = h.with_base(wi)
        morphism = make_morphism(g2, h2, composed)
        tried.append(wi)
        if is_rigid(morphism):
            psi, vmap = lift_to_graph_isomorphism(morphism)
            final = {e: psi[composed[e]] for e in g2.edge_ids}
            _verify_isomorphism(g2, h2, final, vmap)
            return MatroidLift(
                _freeze_map(final),
                _freeze_map(vmap),
                base,
                wi,
                tuple(tried),
            )
    return NotLiftable(base, tuple(tried))

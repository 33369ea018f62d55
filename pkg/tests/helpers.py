"""Shared oracles and generators for the test suite."""

import itertools
import random
from functools import lru_cache

from rigidlift.multigraph import (
    build_graph,
    connectivity_profile,
    find_arches,
    series_classes,
    whitney_move,
)
from rigidlift.orcyc import compose, identity_morphism, make_morphism


def _connected(n, edge_pairs):
    adj = {i: set() for i in range(n)}
    for a, b in edge_pairs:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


@lru_cache(maxsize=None)
def _perm_pair_tables(n):
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    tables = []
    for perm in itertools.permutations(range(n)):
        tables.append(
            tuple(index[tuple(sorted((perm[a], perm[b])))] for a, b in pairs)
        )
    return pairs, tables


def enumerate_small_graphs(max_vertices=5, max_edges=8, min_genus=2):
    """All 2-connected, 2-edge-connected multigraphs up to isomorphism with
    the given size bounds and genus >= min_genus, as based Multigraphs
    (deterministic vertex labels, edge ids e1.., base e1)."""
    graphs = []
    for n in range(2, max_vertices + 1):
        verts = [f"u{i}" for i in range(n)]
        pairs, tables = _perm_pair_tables(n)
        seen = set()
        lo = n + min_genus - 1
        for m in range(lo, max_edges + 1):
            for combo in itertools.combinations_with_replacement(
                range(len(pairs)), m
            ):
                deg = [0] * n
                for pi in combo:
                    a, b = pairs[pi]
                    deg[a] += 1
                    deg[b] += 1
                if any(d < 2 for d in deg):
                    continue
                edge_pairs = [pairs[pi] for pi in combo]
                if not _connected(n, edge_pairs):
                    continue
                canon = min(tuple(sorted(t[pi] for pi in combo)) for t in tables)
                if canon in seen:
                    continue
                seen.add(canon)
                g = build_graph(
                    [
                        (f"e{i + 1}", verts[a], verts[b])
                        for i, (a, b) in enumerate(edge_pairs)
                    ],
                    "e1",
                )
                two, k = connectivity_profile(g)
                if not two or k < 2:
                    continue
                graphs.append(g)
    return graphs


def series_transposition_morphisms(g, limit=None):
    """Valid self-morphisms swapping two edges of one series class."""
    out = []
    for block in series_classes(g):
        if len(block) < 2:
            continue
        a, b = block[0], block[1]
        emap = {e: e for e in g.edge_ids}
        emap[a], emap[b] = b, a
        if g.base_edge in (a, b):
            continue
        out.append(make_morphism(g, g, emap))
        if limit and len(out) >= limit:
            break
    return out


def whitney_morphisms(g, limit=2):
    """Morphisms arising from Whitney moves on arches avoiding the base."""
    out = []
    try:
        arches = find_arches(g)
    except Exception:
        return out
    for arch in arches:
        if g.base_edge in arch.edges:
            continue
        _, morphism = whitney_move(g, arch)
        out.append(morphism)
        if len(out) >= limit:
            break
    return out


def sample_morphisms(graphs, target_count, rng=None, bases_per_graph=2):
    """A deterministic stream of valid morphisms across graphs and bases."""
    rng = rng or random.Random(0)
    out = []
    round_no = 0
    while len(out) < target_count:
        progressed = False
        for g in graphs:
            if len(out) >= target_count:
                break
            bases = list(g.edge_ids[:bases_per_graph])
            for base in bases:
                gb = g.with_base(base)
                candidates = []
                if round_no == 0:
                    candidates.append(identity_morphism(gb))
                    candidates.extend(series_transposition_morphisms(gb, limit=1))
                    candidates.extend(whitney_morphisms(gb, limit=1))
                elif round_no == 1:
                    candidates.extend(series_transposition_morphisms(gb, limit=3)[1:])
                    candidates.extend(whitney_morphisms(gb, limit=3)[1:])
                else:
                    # Compositions for extra variety.
                    ws = whitney_morphisms(gb, limit=1)
                    ss = series_transposition_morphisms(gb, limit=1)
                    if ws and ss:
                        candidates.append(compose(ws[0], ss[0]))
                    if len(ws) == 1:
                        # Whitney move applied on the moved graph again.
                        more = whitney_morphisms(ws[0].target, limit=1)
                        if more:
                            candidates.append(compose(more[0], ws[0]))
                for m in candidates:
                    out.append(m)
                    progressed = True
                    if len(out) >= target_count:
                        break
                if len(out) >= target_count:
                    break
        round_no += 1
        if not progressed and round_no > 3:
            break
    return out


def brute_force_spanning_trees(g):
    """Independent spanning-tree count: try all edge subsets of tree size."""
    n = len(g.vertices) - 1
    count = 0
    for subset in itertools.combinations(g.edge_ids, n):
        parent = {v: v for v in g.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in subset:
            a, b = g.ends(e)
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if ok:
            count += 1
    return count


def random_multigraph(rng, max_vertices=7, max_extra_edges=6):
    """A random connected loopless multigraph with a base edge."""
    n = rng.randint(2, max_vertices)
    verts = [f"x{i}" for i in range(n)]
    edges = []
    # Random spanning tree first, then extra edges.
    for i in range(1, n):
        j = rng.randrange(i)
        edges.append((f"e{len(edges) + 1}", verts[j], verts[i]))
    for _ in range(rng.randint(1, max_extra_edges)):
        a, b = rng.sample(range(n), 2) if n > 1 else (0, 0)
        edges.append((f"e{len(edges) + 1}", verts[a], verts[b]))
    return build_graph(edges, "e1")

"""Text formats: graph files, divisor strings, orientation strings and
morphism JSON files."""

from __future__ import annotations

import json
import os

from .errors import ParseError, RigidliftError, ValidationError
from .divisor import Divisor
from .multigraph import build_graph, id_key
from .orientation import EdgeState, PartialOrientation


def parse_graph(text, name="<string>"):
    """Parse the graph text format: `edge <id> <tail> <head>` lines plus one
    `base <edge-id>` line; `#` starts a comment."""
    edges = []
    base = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "edge":
            if len(tokens) != 4:
                raise ParseError(
                    f"{name}, line {lineno}: expected `edge <id> <tail> <head>`"
                )
            edges.append((tokens[1], tokens[2], tokens[3]))
        elif tokens[0] == "base":
            if len(tokens) != 2:
                raise ParseError(f"{name}, line {lineno}: expected `base <edge-id>`")
            if base is not None:
                raise ParseError(f"{name}, line {lineno}: duplicate base line")
            base = tokens[1]
        else:
            raise ParseError(
                f"{name}, line {lineno}: unknown record {tokens[0]!r}"
            )
    if base is None:
        raise ParseError(f"{name}: missing base line")
    try:
        return build_graph(edges, base)
    except RigidliftError as exc:
        raise ValidationError(f"{name}: {exc}") from exc


def load_graph(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read(), name=os.path.basename(path))


def parse_divisor(g, text):
    """Parse `div <vertex>:<int> ...` (the leading `div` may be omitted)."""
    tokens = text.split()
    if tokens and tokens[0] == "div":
        tokens = tokens[1:]
    coeffs = {}
    for tok in tokens:
        if ":" not in tok:
            raise ParseError(f"bad divisor token {tok!r}; expected <vertex>:<int>")
        v, _, c = tok.partition(":")
        if v not in g.vertices:
            raise ValidationError(f"vertex {v!r} not in graph")
        try:
            coeffs[v] = coeffs.get(v, 0) + int(c)
        except ValueError as exc:
            raise ParseError(f"bad coefficient in token {tok!r}") from exc
    return Divisor(g, coeffs)


def format_divisor(d):
    if not d.items():
        return "div"
    return "div " + " ".join(f"{v}:{c}" for v, c in d.items())


def parse_orientation(g, text):
    """Parse `orient <edge>:<F|B|U|X> ...` (leading `orient` optional)."""
    tokens = text.split()
    if tokens and tokens[0] == "orient":
        tokens = tokens[1:]
    states = {}
    for tok in tokens:
        if ":" not in tok:
            raise ParseError(f"bad orientation token {tok!r}; expected <edge>:<F|B|U|X>")
        e, _, s = tok.partition(":")
        if not g.has_edge(e):
            raise ValidationError(f"edge {e!r} not in graph")
        try:
            states[e] = EdgeState(s)
        except ValueError as exc:
            raise ParseError(f"bad state in token {tok!r}") from exc
    return PartialOrientation(g, states)


def format_orientation(u):
    body = " ".join(f"{e}:{u.state(e).value}" for e in u.graph.edge_ids)
    return f"orient {body}"


def load_morphism(path):
    """Load a morphism JSON file; graph paths resolve relative to the file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{os.path.basename(path)}: invalid JSON: {exc}") from exc
    for key in ("source", "target", "edge_map"):
        if key not in data:
            raise ParseError(f"{os.path.basename(path)}: missing key {key!r}")
    base_dir = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base_dir, p)

    g = load_graph(resolve(data["source"]))
    h = load_graph(resolve(data["target"]))
    edge_map = dict(data["edge_map"])
    for s, t in edge_map.items():
        if not g.has_edge(s):
            raise ValidationError(f"edge {s!r} not in source graph")
        if not h.has_edge(t):
            raise ValidationError(f"edge {t!r} not in target graph")
    return g, h, edge_map


def fixture_path(name):
    """Path to a fixture graph shipped with the package."""
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures", name)


def load_fixture(name):
    return load_graph(fixture_path(name))

"""Text formats for plumbing forests.

Line-oriented grammar, ``#`` starts a comment:

    convention minus_one        # optional, also plus_one; default minus_one
    vertex <id> <framing:int>
    edge <id> <id>

Parsing performs the structural validation inline so every rejection carries
the offending line number; the result round-trips through the serializer up
to whitespace.  A JSON document of the same shape the CLI emits
(``{"vertices": [{"id", "framing"}], "edges": [[a, b]], "convention"}``)
is accepted interchangeably: :func:`parse_plumbing` sniffs the first
character.
"""

from __future__ import annotations

import json

from .errors import (
    CycleDetected,
    DanglingEdge,
    DslSyntaxError,
    DuplicateEdge,
    DuplicateVertexId,
    SelfLoop,
)
from .plumbing import EdgeSign, PlumbingForest, validate_forest

_CONVENTIONS = {
    "minus_one": EdgeSign.MINUS_ONE,
    "plus_one": EdgeSign.PLUS_ONE,
}


def parse_dsl(text: str) -> PlumbingForest:
    vertices: list[tuple[str, int]] = []
    seen: dict[str, int] = {}
    edges: list[tuple[str, str]] = []
    edge_keys: set[tuple[str, str]] = set()
    convention = EdgeSign.MINUS_ONE
    parent: dict[str, str] = {}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "vertex":
            if len(tokens) != 3:
                raise DslSyntaxError(lineno, "expected: vertex <id> <framing>")
            vid = tokens[1]
            try:
                framing = int(tokens[2])
            except ValueError:
                raise DslSyntaxError(lineno, f"framing {tokens[2]!r} is not an integer")
            if vid in seen:
                raise DuplicateVertexId(
                    f"line {lineno}: vertex id {vid!r} already defined on line {seen[vid]}"
                )
            seen[vid] = lineno
            parent[vid] = vid
            vertices.append((vid, framing))
        elif keyword == "edge":
            if len(tokens) != 3:
                raise DslSyntaxError(lineno, "expected: edge <id> <id>")
            a, b = tokens[1], tokens[2]
            if a == b:
                raise SelfLoop(f"line {lineno}: edge ({a!r}, {b!r}) is a self-loop")
            if a not in seen or b not in seen:
                raise DanglingEdge(
                    f"line {lineno}: edge references an undefined vertex"
                )
            key = (min(a, b), max(a, b))
            if key in edge_keys:
                raise DuplicateEdge(f"line {lineno}: edge ({a!r}, {b!r}) appears twice")
            edge_keys.add(key)
            ra, rb = find(a), find(b)
            if ra == rb:
                raise CycleDetected(f"line {lineno}: edge ({a!r}, {b!r}) closes a cycle")
            parent[ra] = rb
            edges.append((a, b))
        elif keyword == "convention":
            if len(tokens) != 2 or tokens[1] not in _CONVENTIONS:
                raise DslSyntaxError(lineno, "expected: convention minus_one|plus_one")
            convention = _CONVENTIONS[tokens[1]]
        else:
            raise DslSyntaxError(lineno, f"unknown directive {keyword!r}")
    return validate_forest(vertices, edges, convention)


def parse_json_plumbing(text: str) -> PlumbingForest:
    """Parse the JSON document form (the shape the CLI itself emits)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DslSyntaxError(exc.lineno, f"bad JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DslSyntaxError(1, "JSON plumbing must be an object")
    try:
        vertices = [(v["id"], int(v["framing"])) for v in doc["vertices"]]
        edges = [(a, b) for a, b in doc.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise DslSyntaxError(1, f"malformed JSON plumbing: {exc}") from None
    name = doc.get("convention", "minus_one")
    if name not in _CONVENTIONS:
        raise DslSyntaxError(1, f"unknown convention {name!r}")
    return validate_forest(vertices, edges, _CONVENTIONS[name])


def parse_plumbing(text: str) -> PlumbingForest:
    """Parse either input form, sniffing JSON by its leading brace."""
    if text.lstrip().startswith("{"):
        return parse_json_plumbing(text)
    return parse_dsl(text)


def serialize_dsl(forest: PlumbingForest) -> str:
    name = "minus_one" if forest.edge_sign is EdgeSign.MINUS_ONE else "plus_one"
    lines = [f"convention {name}"]
    for vid, framing in zip(forest.ids, forest.framings):
        lines.append(f"vertex {vid} {framing}")
    for a, b in forest.edges:
        lines.append(f"edge {forest.ids[a]} {forest.ids[b]}")
    return "\n".join(lines) + "\n"

"""Reading input documents and writing reports.

Group and automaton files are JSON objects; graphs are edge-list text.
Reports are JSON with a fixed key order, so identical runs produce
byte-identical output.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .graphs import Graph
from .perm import Permutation, PermGroup, parse_permutation
from .transform import Automaton, Transformation

REPORT_SCHEMA = "synchro-report/1"


class InputError(ValueError):
    """Malformed input document; the message names the offending field or line."""


def _read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def group_from_document(doc: Any, source: str = "<document>") -> PermGroup:
    """``{"degree": 5, "generators": ["(0 1 2 3 4)", "[1,0,2,3,4]"], "name": ...}``"""
    if not isinstance(doc, dict):
        raise InputError(f"{source}: expected an object with fields degree and generators")
    degree = doc.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree <= 0:
        raise InputError(f"{source}: field 'degree' must be a positive integer")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise InputError(f"{source}: field 'generators' must be a nonempty list")
    perms: list[Permutation] = []
    for i, g in enumerate(gens):
        if isinstance(g, list):
            g = "[" + ",".join(str(x) for x in g) + "]"
        if not isinstance(g, str):
            raise InputError(f"{source}: generators[{i}] must be a string or a list of images")
        try:
            perms.append(parse_permutation(g, degree))
        except ValueError as e:
            raise InputError(f"{source}: generators[{i}]: {e}") from None
    name = doc.get("name")
    return PermGroup(perms, name=name if isinstance(name, str) else None)


def load_group(path: str | Path) -> PermGroup:
    return group_from_document(_read_json(path), str(path))


def group_to_document(G: PermGroup) -> dict[str, Any]:
    doc: dict[str, Any] = {"degree": G.degree, "generators": [str(g) for g in G.generators]}
    if G.name:
        doc["name"] = G.name
    return doc


def automaton_from_document(doc: Any, source: str = "<document>") -> Automaton:
    """``{"states": 4, "letters": {"R": [1, 2, 3, 0], "B": [1, 1, 2, 3]}}``"""
    if not isinstance(doc, dict):
        raise InputError(f"{source}: expected an object with fields states and letters")
    n = doc.get("states")
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise InputError(f"{source}: field 'states' must be a positive integer")
    letters = doc.get("letters")
    if not isinstance(letters, dict) or not letters:
        raise InputError(f"{source}: field 'letters' must be a nonempty object of name -> image list")
    pairs = []
    for name, images in letters.items():
        if not isinstance(images, list) or len(images) != n:
            raise InputError(f"{source}: letters.{name}: expected a list of {n} images")
        if not all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x < n for x in images):
            raise InputError(f"{source}: letters.{name}: images must be integers in 0..{n - 1}")
        pairs.append((name, Transformation(tuple(images))))
    return Automaton(n, tuple(pairs))


def load_automaton(path: str | Path) -> Automaton:
    return automaton_from_document(_read_json(path), str(path))


def automaton_to_document(a: Automaton) -> dict[str, Any]:
    return {"states": a.states, "letters": {name: list(t.images) for name, t in a.letters}}


def parse_edge_list(text: str, source: str = "<text>") -> Graph:
    """First non-comment line: vertex count. Then one ``u v`` pair per line."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            values = [int(x) for x in fields]
        except ValueError:
            raise InputError(f"{source}: line {lineno}: expected integers, got {line!r}") from None
        if n is None:
            if len(values) != 1 or values[0] < 0:
                raise InputError(f"{source}: line {lineno}: expected the vertex count")
            n = values[0]
            continue
        if len(values) != 2:
            raise InputError(f"{source}: line {lineno}: expected 'u v'")
        u, v = values
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InputError(f"{source}: line {lineno}: bad edge {u} {v}")
        edges.append((u, v))
    if n is None:
        raise InputError(f"{source}: missing vertex count")
    return Graph.from_edges(n, edges)


def load_graph(path: str | Path) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    return parse_edge_list(text, str(path))


def format_edge_list(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.edges]) + "\n"


def render_report(command: str, body: dict[str, Any]) -> str:
    doc = {"schema": REPORT_SCHEMA, "command": command}
    doc.update(body)
    return json.dumps(doc, indent=2, default=_jsonable) + "\n"


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    return str(obj)

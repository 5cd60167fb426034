"""Reading and writing space documents.

A document is a JSON object with ``name`` (optional string), ``points``
(integer) and ``opens`` (array of arrays of point indices)::

    {"name": "sierpinski", "points": 2, "opens": [[], [0], [0, 1]]}

Output is canonical: opens sorted by (cardinality, indices), indices
ascending, one line, fixed key order.
"""

from __future__ import annotations

import json
from typing import Optional

from .topology import ContinuousMap, FiniteSpace, TopologyError, validate_topology


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line, self.field = line, field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _field_line(text: str, name: str) -> Optional[int]:
    pos = text.find(f'"{name}"')
    return None if pos < 0 else text.count("\n", 0, pos) + 1


def parse_document(text: str) -> tuple[str, FiniteSpace]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise ParseError("document must be an object", line=1)

    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ParseError("must be a string", _field_line(text, "name"), "name")
    points = doc.get("points")
    if not isinstance(points, int) or isinstance(points, bool) or points < 0:
        raise ParseError("must be a non-negative integer", _field_line(text, "points"), "points")
    opens = doc.get("opens")
    line = _field_line(text, "opens")
    if not isinstance(opens, list):
        raise ParseError("must be an array of arrays", line, "opens")
    family = []
    for k, member in enumerate(opens):
        if not isinstance(member, list) or not all(
            isinstance(p, int) and not isinstance(p, bool) for p in member
        ):
            raise ParseError(f"entry {k} must be an array of integers", line, "opens")
        if any(not 0 <= p < points for p in member):
            raise ParseError(f"entry {k} references a point outside 0..{points - 1}", line, "opens")
        family.append(member)
    try:
        return name, validate_topology(points, family)
    except TopologyError as exc:
        raise ParseError(str(exc), line, "opens") from exc


def space_document(space: FiniteSpace, name: str = "") -> dict:
    return {"name": name, "points": space.n, "opens": space.open_lists()}


def dump_document(space: FiniteSpace, name: str = "", unit: Optional[ContinuousMap] = None) -> str:
    doc = space_document(space, name)
    if unit is not None:
        doc["unit"] = unit.table()
    return json.dumps(doc) + "\n"

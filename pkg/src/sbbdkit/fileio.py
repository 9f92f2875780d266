"""Readers and writers for matrices, designs, difference matrices and recipes.

Matrix text format: one row per line, entries 0/1 separated by whitespace;
``#`` starts a comment.  The compact form starts with a ``#hex <columns>``
header and stores each row as a hex string of its bits, most significant
bit first.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import FiniteGroup, parse_group
from .errors import StructureError
from .incidence import DifferenceMatrix, GroupedDesign, as_incidence, from_blocks, to_blocks


def read_matrix(path) -> np.ndarray:
    lines = Path(path).read_text().splitlines()
    if lines and lines[0].startswith("#hex"):
        try:
            cols = int(lines[0].split()[1])
        except (IndexError, ValueError):
            raise StructureError(f"{path}: malformed #hex header") from None
        rows = []
        for line in lines[1:]:
            line = line.strip()
            if line:
                bits = bin(int(line, 16))[2:].zfill(cols)
                rows.append([int(c) for c in bits[-cols:]])
        return as_incidence(rows)
    rows = []
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([int(t) for t in line.split()])
        except ValueError:
            raise StructureError(f"{path}:{n}: non-integer entry") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise StructureError(f"{path}: rows are missing or ragged")
    return as_incidence(rows)


def write_matrix(path, m, compact=False):
    m = np.asarray(m)
    if compact:
        cols = m.shape[1]
        width = (cols + 3) // 4
        lines = [f"#hex {cols}"]
        for row in m:
            lines.append(format(int("".join(str(int(x)) for x in row), 2), f"0{width}x"))
    else:
        lines = [" ".join(str(int(x)) for x in row) for row in m]
    Path(path).write_text("\n".join(lines) + "\n")


def design_from_json(data: dict):
    """Return an incidence matrix, or a GroupedDesign when ``groups`` is present."""
    try:
        h = from_blocks(data["blocks"], int(data["points"]))
    except (KeyError, TypeError) as exc:
        raise StructureError(f"design descriptor needs 'points' and 'blocks': {exc}") from None
    if data.get("groups"):
        return GroupedDesign(h, data["groups"])
    return h


def design_to_json(design) -> dict:
    if isinstance(design, GroupedDesign):
        return {"points": design.v, "blocks": to_blocks(design.incidence),
                "groups": [list(c) for c in design.groups]}
    h = as_incidence(design)
    return {"points": h.shape[1], "blocks": to_blocks(h)}


def _element_to_json(x):
    return x[0] if len(x) == 1 else list(x)


def dm_to_json(dm: DifferenceMatrix) -> dict:
    return {"group": str(dm.group),
            "entries": [[_element_to_json(x) for x in row] for row in dm.element_rows()]}


def dm_entries_from_json(data: dict) -> tuple[FiniteGroup, np.ndarray]:
    """Parse without verifying; element indices into ``group.elements``."""
    try:
        group = parse_group(data["group"])
        rows = data["entries"]
    except KeyError as exc:
        raise StructureError(f"difference matrix needs 'group' and 'entries': missing {exc}") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise StructureError("difference matrix rows are missing or ragged")
    entries = np.array([[group.index(x) for x in row] for row in rows], dtype=np.int64)
    return group, entries


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}: invalid JSON: {exc}") from None


def dump_json(path, data):
    Path(path).write_text(json.dumps(data, indent=1) + "\n")

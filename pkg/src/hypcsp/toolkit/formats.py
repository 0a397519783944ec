"""Canonical JSON instance files.

Keys are sorted and floats are rounded to 12 significant digits before
serialization, so write -> read -> write is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..csp import ColorSet, HLCSPInstance
from ..minesweeper import KNOWN_CLEAR, KNOWN_MINE, Board
from ..tessellation import HypGraph

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


@dataclass
class InstanceFile:
    graph: HypGraph
    hlcsp: Optional[HLCSPInstance] = None
    board: Optional[Board] = None


def _f(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise FormatError(f"non-finite number {x}")
    return float(f"{x:.12g}")


def graph_to_dict(g: HypGraph) -> dict:
    verts = []
    for i in range(g.n):
        if g.positions is None:
            raise FormatError("graph has no embedding")
        x, y, z = g.positions[i]
        verts.append({"id": i, "x": _f(x), "y": _f(y), "z": _f(z)})
    return {
        "params": {"r": _f(g.r), "d": _f(g.d)},
        "vertices": verts,
        "edges": [[u, v] for u, v in g.edges],
    }


def to_dict(f: InstanceFile) -> dict:
    doc = {"format_version": FORMAT_VERSION, "graph": graph_to_dict(f.graph)}
    if f.hlcsp is not None:
        inst = f.hlcsp
        doc["hlcsp"] = {
            "colors": list(inst.colors.names),
            "constraints": [
                {"v": v, "neighborhood": list(inst.neighborhoods[v]), "allowed": [list(t) for t in inst.allowed[v]]}
                for v in range(inst.graph.n)
            ],
        }
    if f.board is not None:
        b = f.board
        doc["board"] = {
            "clues": [{"cell": v, "n": b.clues[v]} for v in sorted(b.clues)],
            "flags": [{"cell": v, "state": b.flags[v]} for v in sorted(b.flags)],
        }
    return doc


def dumps(f: InstanceFile) -> str:
    return json.dumps(to_dict(f), sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def _req(d, key, kind, where):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"missing key {key!r} in {where}")
    val = d[key]
    if kind is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
            raise FormatError(f"{where}.{key} must be a finite number")
        return float(val)
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise FormatError(f"{where}.{key} must be an integer")
        return val
    if not isinstance(val, kind):
        raise FormatError(f"{where}.{key} has the wrong type")
    return val


def graph_from_dict(d: dict) -> HypGraph:
    params = _req(d, "params", dict, "graph")
    r = _req(params, "r", float, "graph.params")
    dd = _req(params, "d", float, "graph.params")
    verts = _req(d, "vertices", list, "graph")
    n = len(verts)
    pos = np.zeros((n, 3))
    seen = set()
    for item in verts:
        i = _req(item, "id", int, "vertex")
        if not 0 <= i < n or i in seen:
            raise FormatError(f"vertex ids must be unique and dense 0..{n - 1} (got {i})")
        seen.add(i)
        pos[i] = [_req(item, c, float, f"vertex {i}") for c in "xyz"]
    edges = _req(d, "edges", list, "graph")
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(t, int) and not isinstance(t, bool) for t in e)):
            raise FormatError(f"bad edge {e!r}")
    try:
        return HypGraph(n, edges, pos, r, dd)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def from_dict(doc: dict) -> InstanceFile:
    version = _req(doc, "format_version", int, "document")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {version}")
    g = graph_from_dict(_req(doc, "graph", dict, "document"))
    out = InstanceFile(g)
    if "hlcsp" in doc:
        h = _req(doc, "hlcsp", dict, "document")
        colors = _req(h, "colors", list, "hlcsp")
        cons = _req(h, "constraints", list, "hlcsp")
        allowed = [None] * g.n
        try:
            cs = ColorSet(colors)
            for c in cons:
                v = _req(c, "v", int, "constraint")
                if not 0 <= v < g.n or allowed[v] is not None:
                    raise FormatError(f"bad or repeated constraint vertex {v}")
                nb = _req(c, "neighborhood", list, f"constraint {v}")
                if tuple(nb) != (v,) + g.adjacency[v]:
                    raise FormatError(f"neighbourhood of {v} does not match the graph")
                allowed[v] = [tuple(t) for t in _req(c, "allowed", list, f"constraint {v}")]
            if any(a is None for a in allowed):
                raise FormatError("every vertex needs a constraint")
            out.hlcsp = HLCSPInstance(g, cs, allowed)
        except (TypeError, ValueError) as exc:
            raise FormatError(str(exc)) from exc
    if "board" in doc:
        b = _req(doc, "board", dict, "document")
        clues, flags = {}, {}
        for c in b.get("clues", []):
            clues[_req(c, "cell", int, "clue")] = _req(c, "n", int, "clue")
        for fl in b.get("flags", []):
            state = _req(fl, "state", str, "flag")
            if state not in (KNOWN_MINE, KNOWN_CLEAR):
                raise FormatError(f"bad flag state {state!r}")
            flags[_req(fl, "cell", int, "flag")] = state
        try:
            out.board = Board(g, clues, flags)
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    return out


def loads(text: str) -> InstanceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not JSON: {exc}") from exc
    return from_dict(doc)


def read(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(f: InstanceFile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(f))


def coloring_json(colors, names=None) -> str:
    """Solution colouring as canonical JSON: indices, plus names when known."""
    doc = {"coloring": [int(c) for c in colors]}
    if names is not None:
        doc["names"] = [names[c] for c in colors]
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

"""
Lattice layouts of gluing diagrams and SVG output.

Cells of the triangular lattice are (i, j, s): s = 0 is the up triangle with
vertices (i, j), (i+1, j), (i, j+1) in the basis (1, 0), (1/2, sqrt3/2), and
s = 1 the down triangle (i+1, j), (i, j+1), (i+1, j+1).  Lattice vertex
(i, j) carries the corner type CORNER_TYPES[(i + 2j) % 3], so every lattice
edge has a color and the neighbor of a cell across its x-edge is forced.
A layout is then the choice of which gluings to leave unrealized (cut).
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from math import sqrt
from typing import Optional

from .perm import GENERATORS
from .surface import CORNER_TYPES, GluingDiagram

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 10 ** 6

Cell = tuple[int, int, int]


def cell_vertices(cell: Cell) -> tuple[tuple[int, int], ...]:
    i, j, s = cell
    if s == 0:
        return (i, j), (i + 1, j), (i, j + 1)
    return (i + 1, j), (i, j + 1), (i + 1, j + 1)


def _corner(v: tuple[int, int]) -> str:
    return CORNER_TYPES[(v[0] + 2 * v[1]) % 3]


def edge_endpoints(cell: Cell, x: str) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two lattice vertices of the x-edge of a cell (corners containing x)."""
    vs = [v for v in cell_vertices(cell) if x in _corner(v)]
    return vs[0], vs[1]


def neighbor(cell: Cell, x: str) -> Cell:
    """
    >>> neighbor(neighbor((0, 0, 0), "a"), "a")
    (0, 0, 0)
    """
    p, q = edge_endpoints(cell, x)
    i, j, s = cell
    shared = {p, q}
    for cand in ((i, j, 1 - s), (i - 1, j, 1), (i, j - 1, 1), (i + 1, j, 0), (i, j + 1, 0)):
        if cand[2] != s and set(cell_vertices(cand)) >= shared:
            return cand
    raise AssertionError("lattice neighbor not found")


@dataclass(frozen=True)
class Layout:
    placement: tuple[Cell, ...]
    cut_edges: tuple[tuple[int, int, str], ...]  # (i, j, color), i < j
    complete: bool = True  # False for a best-effort layout that breaks a constraint
    nodes_used: int = 0

    def realized(self, d: GluingDiagram) -> list[tuple[int, int, str]]:
        cut = set(self.cut_edges)
        return [e for e in d.glued_edges() if e not in cut]

    def cuts_per_color(self) -> dict[str, int]:
        return {x: sum(1 for e in self.cut_edges if e[2] == x) for x in GENERATORS}


class _Budget(Exception):
    pass


def layout_diagram(d: GluingDiagram, node_budget: int = DEFAULT_NODE_BUDGET,
                   max_cuts_per_color: int = 1) -> Layout:
    """
    Backtracking over gluings in a fixed order: each gluing from a placed
    triangle is either realized (its partner goes into the forced cell) or
    cut.  Realizing is tried first, so tree diagrams without collisions come
    out with no cuts.
    """
    n = d.n
    edges = sorted(d.glued_edges())
    adj = [[] for _ in range(n)]
    for e in edges:
        adj[e[0]].append(e)
        adj[e[1]].append(e)
    place: list[Optional[Cell]] = [None] * n
    occupied: dict[Cell, int] = {}
    cuts: list[tuple[int, int, str]] = []
    ncut = {x: 0 for x in GENERATORS}
    decided: set = set()
    counter = [0]
    best: list = []

    def pending():
        for u in range(n):
            if place[u] is None:
                continue
            for e in adj[u]:
                if e not in decided:
                    return u, e
        return None

    def rec():
        counter[0] += 1
        if counter[0] > node_budget:
            raise _Budget
        nxt = pending()
        if nxt is None:
            if all(p is not None for p in place):
                best.append((tuple(place), tuple(sorted(cuts))))
                return True
            return False
        u, e = nxt
        v = e[1] if e[0] == u else e[0]
        x = e[2]
        target = neighbor(place[u], x)
        decided.add(e)
        if place[v] is not None:
            if place[v] == target:
                if rec():
                    return True
            elif ncut[x] < max_cuts_per_color:
                ncut[x] += 1
                cuts.append(e)
                if rec():
                    return True
                cuts.pop()
                ncut[x] -= 1
        else:
            if target not in occupied:
                place[v] = target
                occupied[target] = v
                if rec():
                    return True
                del occupied[target]
                place[v] = None
            if ncut[x] < max_cuts_per_color:
                ncut[x] += 1
                cuts.append(e)
                if rec():
                    return True
                cuts.pop()
                ncut[x] -= 1
        decided.discard(e)
        return False

    place[0] = (0, 0, 0)
    occupied[(0, 0, 0)] = 0
    try:
        ok = rec()
    except _Budget:
        ok = False
    if ok:
        placement, cut = best[0]
        return Layout(placement, cut, True, counter[0])
    log.warning("no layout with at most %d cut per color; using a best-effort layout",
                max_cuts_per_color)
    return _greedy_layout(d, counter[0])


def _greedy_layout(d: GluingDiagram, nodes_used: int = 0) -> Layout:
    """Breadth-first placement; cut on collision; stray triangles go to free cells."""
    from collections import deque

    place: list[Optional[Cell]] = [None] * d.n
    occupied: dict = {}
    adj = [[] for _ in range(d.n)]
    for e in sorted(d.glued_edges()):
        adj[e[0]].append(e)
        adj[e[1]].append(e)
    for s in range(d.n):
        if place[s] is not None:
            continue
        cell = (0, 0, 0)
        k = 0
        while cell in occupied:
            k += 3
            cell = (k, 0, 0)
        place[s] = cell
        occupied[cell] = s
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                v = e[1] if e[0] == u else e[0]
                t = neighbor(place[u], e[2])
                if place[v] is None and t not in occupied:
                    place[v] = t
                    occupied[t] = v
                    queue.append(v)
    cuts = tuple(sorted(e for e in d.glued_edges()
                        if neighbor(place[e[0]], e[2]) != place[e[1]]))
    return Layout(tuple(place), cuts, False, nodes_used)


# -- SVG -----------------------------------------------------------------------------------

_DASH = {"dotted": "2,4", "dashed": "8,5", "solid": None}


@dataclass(frozen=True)
class StyleConfig:
    stroke: dict = field(default_factory=lambda: {"a": "dotted", "b": "dashed", "c": "solid"})
    fixed_color: str = "red"
    fixed_width_factor: float = 3.0
    scale: float = 40.0
    line_width: float = 1.2
    labels: bool = True

    def __post_init__(self):
        if sorted(self.stroke.values()) != sorted(_DASH):
            raise ValueError("the three colors need the three distinct stroke styles")
        if self.fixed_width_factor <= 1:
            raise ValueError("fixed lines must be thicker than glued ones")

    @classmethod
    def from_json(cls, text: str) -> StyleConfig:
        return cls(**json.loads(text))


def _point(v, scale):
    i, j = v
    return (i + j / 2) * scale, -(j * sqrt(3) / 2) * scale


def _fmt(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def emit_svg(layout: Layout, d: GluingDiagram, style: StyleConfig = StyleConfig()) -> str:
    sc = style.scale
    pts = [[_point(v, sc) for v in cell_vertices(c)] for c in layout.placement]
    xs = [p[0] for tri in pts for p in tri]
    ys = [p[1] for tri in pts for p in tri]
    pad = sc * 0.3
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}" '
           f'width="{_fmt(w)}" height="{_fmt(h)}">']
    out.append('<g class="faces" fill="#f4f4f0" stroke="none">')
    for tri in pts:
        out.append('<polygon points="' + " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in tri) + '"/>')
    out.append("</g>")

    def seg(cls, i, x, color, width, dash):
        p, q = (_point(v, sc) for v in edge_endpoints(layout.placement[i], x))
        attrs = f'stroke="{color}" stroke-width="{_fmt(width)}"'
        if dash:
            attrs += f' stroke-dasharray="{dash}"'
        return (f'<line class="{cls}" data-color="{x}" x1="{_fmt(p[0])}" y1="{_fmt(p[1])}" '
                f'x2="{_fmt(q[0])}" y2="{_fmt(q[1])}" {attrs}/>')

    lw = style.line_width
    out.append('<g class="edges" stroke-linecap="round">')
    for i, j, x in layout.realized(d):
        out.append(seg("glued", i, x, "black", lw, _DASH[style.stroke[x]]))
    for i, j, x in layout.cut_edges:
        for k in (i, j):
            out.append(seg("cut", k, x, "black", lw, _DASH[style.stroke[x]]))
    for i, x in d.mirror_edges():
        out.append(seg("mirror", i, x, style.fixed_color, lw * style.fixed_width_factor, None))
    out.append("</g>")
    if style.labels:
        out.append(f'<g class="labels" font-family="sans-serif" font-size="{_fmt(sc * 0.3)}" '
                   'text-anchor="middle" dominant-baseline="central">')
        for i, tri in enumerate(pts):
            cx = sum(p[0] for p in tri) / 3
            cy = sum(p[1] for p in tri) / 3
            out.append(f'<text x="{_fmt(cx)}" y="{_fmt(cy)}">{i + 1}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def segment_census(svg: str) -> dict[str, int]:
    return {cls: svg.count(f'<line class="{cls}"') for cls in ("glued", "cut", "mirror")}

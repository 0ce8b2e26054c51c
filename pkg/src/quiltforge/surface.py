"""
Gluing diagrams, the glued cell complex, orbifold angles and Conway symbols.

Triangle i has one edge of each color a, b, c; its corners are named by the
two colors meeting there ("ab", "bc", "ca").  A 2-cycle (i j) of generator x
glues the x-edges of triangles i and j by a reflection, so corners of the
same type are identified.  A fixed point of x makes the x-edge of that
triangle a mirror edge.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from .perm import GENERATORS, InvolutionTriple, Permutation, is_transitive

CORNER_TYPES = ("ab", "bc", "ca")


def _corner_of(x: str, y: str) -> str:
    return next(t for t in CORNER_TYPES if set(t) == {x, y})


@dataclass(frozen=True)
class GluingDiagram:
    n: int
    pairings: dict  # color -> tuple of (i, j) with i < j
    fixed: dict  # color -> tuple of triangles with a mirror edge of that color

    @property
    def triple(self) -> InvolutionTriple:
        gens = []
        for x in GENERATORS:
            img = list(range(self.n))
            for i, j in self.pairings[x]:
                img[i], img[j] = j, i
            gens.append(Permutation(tuple(img)))
        return InvolutionTriple(*gens)

    def partner(self, i: int, x: str) -> int:
        return self.triple.gen(x).image[i]

    def glued_edges(self) -> list[tuple[int, int, str]]:
        return [(i, j, x) for x in GENERATORS for i, j in self.pairings[x]]

    def mirror_edges(self) -> list[tuple[int, str]]:
        return sorted((i, x) for x in GENERATORS for i in self.fixed[x])


def build_diagram(t: InvolutionTriple, require_transitive: bool = True) -> GluingDiagram:
    if require_transitive and not is_transitive(t):
        raise ValueError("gluing diagram of a non-transitive triple is disconnected")
    pairings, fixed = {}, {}
    for x in GENERATORS:
        g = t.gen(x)
        pairings[x] = tuple((c[0], c[1]) for c in g.cycles())
        fixed[x] = tuple(g.fixed_points())
    return GluingDiagram(t.n, pairings, fixed)


def _components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cycles = 0
    for i, j, _ in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            cycles += 1
        else:
            parent[ri] = rj
    return len({find(i) for i in range(n)}), cycles


def is_treelike(d: GluingDiagram) -> bool:
    """The gluing multigraph (one edge per glued pair) is a tree."""
    edges = d.glued_edges()
    ncomp, _ = _components(d.n, edges)
    return ncomp == 1 and len(edges) == d.n - 1


def cycle_rank(d: GluingDiagram) -> int:
    """Number of independent cycles of the gluing multigraph."""
    edges = d.glued_edges()
    ncomp, _ = _components(d.n, edges)
    return len(edges) - d.n + ncomp


def orientation_signs(d: GluingDiagram) -> Optional[list[int]]:
    """
    +-1 per triangle with opposite signs across every glued edge (each gluing
    is a reflection), or None when no such assignment exists.
    """
    sign = [0] * d.n
    adj = [[] for _ in range(d.n)]
    for i, j, _ in d.glued_edges():
        adj[i].append(j)
        adj[j].append(i)
    for s in range(d.n):
        if sign[s]:
            continue
        sign[s] = 1
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not sign[v]:
                    sign[v] = -sign[u]
                    queue.append(v)
                elif sign[v] == sign[u]:
                    return None
    return sign


def all_cycles_even(d: GluingDiagram) -> bool:
    """Parity of every fundamental cycle of a BFS spanning forest."""
    depth = [-1] * d.n
    adj = [[] for _ in range(d.n)]
    edges = d.glued_edges()
    for k, (i, j, _) in enumerate(edges):
        adj[i].append((j, k))
        adj[j].append((i, k))
    tree = set()
    for s in range(d.n):
        if depth[s] >= 0:
            continue
        depth[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, k in adj[u]:
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    tree.add(k)
                    queue.append(v)
    return all((depth[i] + depth[j] + 1) % 2 == 0
               for k, (i, j, _) in enumerate(edges) if k not in tree)


@dataclass(frozen=True)
class Vertex:
    corner: str
    triangles: tuple[int, ...]  # dihedral chain order
    interior: bool

    @property
    def degree(self) -> int:
        return len(self.triangles)


@dataclass(frozen=True)
class GluedSurface:
    diagram: GluingDiagram
    vertices: tuple[Vertex, ...]
    glued_edge_count: int
    mirror_edge_count: int
    euler_characteristic: int
    orientable: bool
    boundaries: tuple[tuple[tuple[str, int], ...], ...]  # cyclic (corner type, vertex id)

    @property
    def n(self) -> int:
        return self.diagram.n

    def vertex_count(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return self.glued_edge_count + self.mirror_edge_count

    def degree_multiset(self, corner: str) -> list[tuple[int, bool]]:
        return sorted((v.degree, v.interior) for v in self.vertices if v.corner == corner)


def _dihedral_chain(t: InvolutionTriple, start: int, x: str, y: str):
    """Triangles around the xy-vertex of ``start`` in chain order, and whether it closes up."""
    gx, gy = t.gen(x).image, t.gen(y).image
    # walk towards one end first (or all the way round)
    chain = [start]
    cur, use_x = start, True
    closed = False
    while True:
        nxt = (gx if use_x else gy)[cur]
        if nxt == cur:
            break
        if nxt == start and use_x is False:
            closed = True
            break
        if nxt == start:
            closed = True
            break
        chain.append(nxt)
        cur, use_x = nxt, not use_x
    if closed:
        return chain, True
    # walk the other way from start, prepend
    cur, use_x = start, False
    back = []
    while True:
        nxt = (gx if use_x else gy)[cur]
        if nxt == cur:
            break
        back.append(nxt)
        cur, use_x = nxt, not use_x
    return back[::-1] + chain, False


def glue_surface(d: GluingDiagram) -> GluedSurface:
    t = d.triple
    vertices = []
    vertex_at = {}  # (triangle, corner) -> vertex index
    for corner in CORNER_TYPES:
        x, y = corner
        for i in range(d.n):
            if (i, corner) in vertex_at:
                continue
            chain, closed = _dihedral_chain(t, i, x, y)
            idx = len(vertices)
            vertices.append(Vertex(corner, tuple(chain), closed))
            for j in chain:
                vertex_at[j, corner] = idx
    glued = sum(len(p) for p in d.pairings.values())
    mirrors = sum(len(f) for f in d.fixed.values())
    chi = len(vertices) - glued - mirrors + d.n
    orientable = orientation_signs(d) is not None
    boundaries = _boundary_cycles(d, t, vertex_at)
    return GluedSurface(d, tuple(vertices), glued, mirrors, chi, orientable, boundaries)


def _next_color(x: str) -> str:
    return GENERATORS[(GENERATORS.index(x) + 1) % 3]


def _boundary_cycles(d, t, vertex_at):
    """
    Walk each boundary component from its least mirror dart (triangle, color).
    Triangles with positive orientation sign have edges a, b, c in
    counterclockwise order; after the first step the walk is forced.
    """
    darts = d.mirror_edges()
    signs = orientation_signs(d)
    used = set()
    out = []
    for start in darts:
        if start in used:
            continue
        i, x = start
        # surface on the left: counterclockwise around a positive triangle
        y = _next_color(x) if signs is None or signs[i] > 0 else _next_color(_next_color(x))
        cycle = []
        dart = start
        while True:
            used.add(dart)
            i, x = dart
            corner = _corner_of(x, y)
            cycle.append((corner, vertex_at[i, corner]))
            # cross alternately y, x, y, ... until a mirror is met
            cur, col = i, y
            while True:
                nxt = t.gen(col).image[cur]
                if nxt == cur:
                    break
                cur = nxt
                col = x if col == y else y
            dart = (cur, col)
            other = col
            third = next(c for c in GENERATORS if c not in (x, y))
            y = third
            x = other
            if dart == start:
                break
        out.append(tuple(cycle))
    return tuple(out)


def euler_characteristic_by_flags(d: GluingDiagram) -> int:
    """
    Independent count: identify (triangle, corner) flags and (triangle, edge)
    flags with union-find directly from the gluing pairs.
    """
    t = d.triple
    parent = {}

    def find(u):
        parent.setdefault(u, u)
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv

    for i in range(d.n):
        for x in GENERATORS:
            j = t.gen(x).image[i]
            union(("e", i, x), ("e", j, x))
            for corner in CORNER_TYPES:
                if x in corner:
                    union(("v", i, corner), ("v", j, corner))
    verts = {find(("v", i, c)) for i in range(d.n) for c in CORNER_TYPES}
    edges = {find(("e", i, x)) for i in range(d.n) for x in GENERATORS}
    return len(verts) - len(edges) + d.n


# -- orbifold data -----------------------------------------------------------

@dataclass(frozen=True)
class CornerAngles:
    """Angle of each corner type as a fraction of a full turn (tau)."""
    ab: Fraction
    bc: Fraction
    ca: Fraction

    def __getitem__(self, corner: str) -> Fraction:
        return getattr(self, corner)

    def denominators(self) -> dict[str, int]:
        return {c: self[c].denominator for c in CORNER_TYPES}

    @property
    def total(self) -> Fraction:
        return self.ab + self.bc + self.ca

    @property
    def hyperbolic(self) -> bool:
        return self.total < Fraction(1, 2)

    def smooth_corners(self) -> list[str]:
        return [c for c in CORNER_TYPES if self[c] == Fraction(1, 2)]


def assign_angles(s: GluedSurface) -> CornerAngles:
    """
    Largest angle per corner type such that interior vertices have cone angle
    dividing tau and boundary vertices have angle dividing tau/2.
    """
    out = {}
    for corner in CORNER_TYPES:
        m = 1
        for v in s.vertices:
            if v.corner == corner:
                m = lcm(m, v.degree if v.interior else 2 * v.degree)
        out[corner] = Fraction(1, m)
    return CornerAngles(**out)


@dataclass(frozen=True)
class OrbifoldSignature:
    angles: CornerAngles
    cone_points: tuple[int, ...]
    boundaries: tuple[tuple[int, ...], ...]
    handles: int
    cross_caps: int

    @property
    def symbol(self) -> str:
        out = "".join(_order_str(k) for k in self.cone_points)
        for b in self.boundaries:
            out += "*" + "".join(_order_str(k) for k in b)
        out += "×" * self.cross_caps + "∘" * self.handles
        return out

    @property
    def hyperbolic(self) -> bool:
        return self.angles.hyperbolic

    def corner_count(self) -> int:
        return sum(len(b) for b in self.boundaries)

    @property
    def orbifold_euler_characteristic(self) -> Fraction:
        chi = 2 - 2 * self.handles - self.cross_caps - len(self.boundaries)
        chi = Fraction(chi)
        chi -= sum(Fraction(k - 1, k) for k in self.cone_points)
        chi -= sum(Fraction(k - 1, 2 * k) for b in self.boundaries for k in b)
        return chi

    def to_json(self) -> dict:
        return {"symbol": self.symbol, "cone": list(self.cone_points),
                "boundaries": [list(b) for b in self.boundaries], "handles": self.handles,
                "crossCaps": self.cross_caps, "hyperbolic": self.hyperbolic,
                "angles": {c: str(self.angles[c]) for c in CORNER_TYPES}}


def _order_str(k: int) -> str:
    return str(k) if k < 10 else f"({k})"


def conway_signature(s: GluedSurface, angles: Optional[CornerAngles] = None) -> OrbifoldSignature:
    if angles is None:
        angles = assign_angles(s)
    m = angles.denominators()
    cones = []
    for v in s.vertices:
        if v.interior:
            k = m[v.corner] // v.degree
            if k >= 2:
                cones.append(k)
    boundaries = []
    for cycle in s.boundaries:
        orders = []
        for corner, vid in cycle:
            k = m[corner] // (2 * s.vertices[vid].degree)
            if k >= 2:
                orders.append(k)
        boundaries.append(tuple(orders))
    nb = len(boundaries)
    deficit = 2 - s.euler_characteristic - nb
    if s.orientable:
        handles, caps = deficit // 2, 0
    else:
        handles, caps = 0, deficit
    return OrbifoldSignature(angles, tuple(sorted(cones, reverse=True)), tuple(boundaries),
                             handles, caps)


def isometric_by_generator_permutation(pair) -> bool:
    """Some permutation of the roles of a, b, c makes the members permutation isomorphic."""
    import itertools

    from .transplant import find_permutation_isomorphism

    left, right = pair
    if left.n != right.n:
        raise ValueError("size mismatch")
    for roles in itertools.permutations(range(3)):
        if find_permutation_isomorphism(left.permute_roles(roles), right) is not None:
            return True
    return False

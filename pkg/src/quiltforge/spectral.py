"""
Discrete Laplacians on glued triangle meshes and spectral comparison.

Every base triangle is a unit equilateral triangle cut into k^2 pieces.
Local nodes of a triangle are barycentric triples (w_ab, w_bc, w_ca) with
sum k, one weight per corner type.  The x-edge is where the weight of the
corner opposite x vanishes; gluing along x identifies (i, u) with (x(i), u)
for every u on that edge.

Combinatorial mode uses the operator W^-1 L, with L the sum of the K3
Laplacians of all sub-triangles and W the number of (triangle, local node)
representatives of each mesh node; it is handled in the symmetric form
W^-1/2 L W^-1/2.  FEM mode uses P1 stiffness and mass matrices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .linalg import RationalMatrix
from .perm import GENERATORS, InvolutionTriple, Permutation
from .surface import CORNER_TYPES, GluingDiagram, build_diagram, orientation_signs

BOUNDARY_CONDITIONS = ("neumann", "dirichlet", "twisted")
MODES = ("graph", "fem")
# weight index of the corner opposite each edge color
_OPPOSITE = {"a": CORNER_TYPES.index("bc"), "b": CORNER_TYPES.index("ca"),
             "c": CORNER_TYPES.index("ab")}


class BoundaryConditionError(ValueError):
    pass


def local_nodes(k: int) -> list[tuple[int, int, int]]:
    return [(p, q, k - p - q) for p in range(k, -1, -1) for q in range(k - p, -1, -1)]


def local_triangles(k: int) -> list[tuple[tuple[int, int, int], ...]]:
    out = []
    for p, q in itertools.product(range(k), repeat=2):
        r = k - 1 - p - q
        if r >= 0:
            out.append(((p + 1, q, r), (p, q + 1, r), (p, q, r + 1)))
        r = k - 2 - p - q
        if r >= 0:
            out.append(((p, q + 1, r + 1), (p + 1, q, r + 1), (p + 1, q + 1, r)))
    return out


def on_edge(u: tuple[int, int, int], x: str) -> bool:
    return u[_OPPOSITE[x]] == 0


@dataclass(frozen=True)
class Mesh:
    diagram: GluingDiagram
    k: int
    node_of: dict  # (triangle, local node) -> mesh node
    representatives: tuple[tuple[tuple[int, tuple], ...], ...]  # per node, sorted
    triangles: tuple[tuple[int, int, int, int], ...]  # (base triangle, n1, n2, n3)
    boundary: frozenset

    @property
    def size(self) -> int:
        return len(self.representatives)

    def multiplicity(self) -> np.ndarray:
        return np.array([len(r) for r in self.representatives], dtype=float)


def refine_mesh(d: GluingDiagram, k: int) -> Mesh:
    if k < 1:
        raise ValueError("refinement depth must be at least 1")
    t = d.triple
    nodes = local_nodes(k)
    parent = {}

    def find(v):
        parent.setdefault(v, v)
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    mirror = set()
    for i in range(d.n):
        for u in nodes:
            find((i, u))
    for x in GENERATORS:
        img = t.gen(x).image
        for i in range(d.n):
            for u in nodes:
                if not on_edge(u, x):
                    continue
                if img[i] == i:
                    mirror.add((i, u))
                else:
                    ri, rj = find((i, u)), find((img[i], u))
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
    groups: dict = {}
    for i in range(d.n):
        for u in nodes:
            groups.setdefault(find((i, u)), []).append((i, u))
    reps = sorted(tuple(sorted(g)) for g in groups.values())
    node_of = {m: idx for idx, g in enumerate(reps) for m in g}
    boundary = frozenset(node_of[m] for m in mirror)
    tris = tuple((i,) + tuple(node_of[i, u] for u in tri)
                 for i in range(d.n) for tri in local_triangles(k))
    return Mesh(d, k, node_of, tuple(reps), tris, boundary)


# -- assembly -----------------------------------------------------------------------

_K3 = np.array([[2.0, -1, -1], [-1, 2, -1], [-1, -1, 2]])
# P1 on an equilateral triangle of side h: stiffness K3 / (2 sqrt 3), mass area/12 (1 + I)
_FEM_STIFF = _K3 / (2 * np.sqrt(3.0))
_FEM_MASS = (np.ones((3, 3)) + np.eye(3)) / 12.0


def _assemble(mesh: Mesh, local: np.ndarray, scale: float = 1.0) -> np.ndarray:
    m = np.zeros((mesh.size, mesh.size))
    for tri in mesh.triangles:
        idx = tri[1:]
        for r in range(3):
            for c in range(3):
                m[idx[r], idx[c]] += scale * local[r, c]
    return m


@dataclass(frozen=True)
class Operator:
    """A symmetric matrix, optional mass matrix, and the mesh nodes it lives on."""
    matrix: np.ndarray
    mass: Optional[np.ndarray]
    nodes: tuple[int, ...]
    bc: str
    mode: str

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def orientation_double_cover(t: InvolutionTriple) -> InvolutionTriple:
    """
    Points (i, e) for e = 0, 1 stored as 2i + e; a gluing flips the sheet and
    a mirror keeps it.
    """
    gens = []
    for g in t.gens:
        img = [0] * (2 * t.n)
        for i, j in enumerate(g.image):
            for e in range(2):
                img[2 * i + e] = 2 * j + (1 - e) if j != i else 2 * i + e
        gens.append(Permutation(tuple(img)))
    return InvolutionTriple(*gens)


def _sheet_swap(mesh: Mesh) -> list[int]:
    """Node map induced by (i, e) -> (i, 1 - e) on a double cover mesh."""
    return [mesh.node_of[(rep[0][0] ^ 1, rep[0][1])] for rep in mesh.representatives]


def assemble_laplacian(d: GluingDiagram, k: int, bc: str = "neumann", mode: str = "graph"
                       ) -> Operator:
    if bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"unknown boundary condition {bc!r}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if bc == "dirichlet" and orientation_signs(d) is None:
        raise BoundaryConditionError(
            "Dirichlet conditions need an orientable diagram; use the twisted variant")
    if bc == "twisted":
        cover = build_diagram(orientation_double_cover(d.triple), require_transitive=False)
        mesh = refine_mesh(cover, k)
    else:
        mesh = refine_mesh(d, k)
    if mode == "graph":
        lap = _assemble(mesh, _K3)
        w = 1.0 / np.sqrt(mesh.multiplicity())
        a, mass = lap * w[:, None] * w[None, :], None
    else:
        h = 1.0 / k
        a = _assemble(mesh, _FEM_STIFF)
        mass = _assemble(mesh, _FEM_MASS, np.sqrt(3.0) / 4 * h * h)
    keep = list(range(mesh.size))
    if bc in ("dirichlet", "twisted"):
        keep = [v for v in keep if v not in mesh.boundary]
    if bc == "twisted":
        swap = _sheet_swap(mesh)
        keep_set = set(keep)
        reps = [v for v in keep if v < swap[v] and swap[v] in keep_set]
        partner = [swap[v] for v in reps]
        # odd functions f(swap v) = -f(v); restricting to one node per orbit
        a = a[np.ix_(reps, reps)] - a[np.ix_(reps, partner)]
        if mass is not None:
            mass = mass[np.ix_(reps, reps)] - mass[np.ix_(reps, partner)]
        return Operator(_sym(a), None if mass is None else _sym(mass), tuple(reps), bc, mode)
    a = a[np.ix_(keep, keep)]
    if mass is not None:
        mass = mass[np.ix_(keep, keep)]
    return Operator(a, mass, tuple(keep), bc, mode)


def _sym(m):
    return (m + m.T) / 2


# -- eigenvalues -------------------------------------------------------------------------

def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi; stops when the off-diagonal norm falls below tol * the total norm."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    total = np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * total or n < 2:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-30 * total:
                    continue  # negligible; rotating would only underflow
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1))
                else:
                    t = 1.0
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * rp - s * rq, s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * cp - s * cq, s * cp + c * cq
    return np.sort(np.diag(a))


def _reduce_generalized(a, mass):
    """C^-1 A C^-T for mass = C C^T."""
    c = np.linalg.cholesky(mass)
    x = scipy.linalg.solve_triangular(c, a, lower=True)
    x = scipy.linalg.solve_triangular(c, x.T, lower=True)
    return _sym(x)


def spectrum(a: np.ndarray, count: Optional[int] = None, mass: Optional[np.ndarray] = None,
             solver: str = "eigh") -> list[float]:
    """
    Smallest ``count`` eigenvalues, ascending.

    >>> spectrum(np.array([[1.0, 0.0], [0.0, 2.0]]))
    [1.0, 2.0]
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if count is None:
        count = n
    if count > n:
        raise ValueError(f"asked for {count} eigenvalues of a {n}x{n} matrix")
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max(initial=0))):
        raise ValueError("matrix is not symmetric")
    if solver == "jacobi":
        vals = jacobi_eigenvalues(a if mass is None else _reduce_generalized(a, mass))
    elif solver == "eigh":
        vals = scipy.linalg.eigh(a, mass, eigvals_only=True)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return [float(v) for v in np.sort(vals)[:count]]


def max_relative_deviation(left: Sequence[float], right: Sequence[float]) -> float:
    return max((abs(x - y) / max(abs(x), 1.0) for x, y in zip(left, right)), default=0.0)


@dataclass(frozen=True)
class SpectralReport:
    bc: str
    mode: str
    k: int
    count: int
    left: tuple[float, ...]
    right: tuple[float, ...]
    max_rel_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel_deviation <= self.tol

    def to_json(self) -> dict:
        return {"bc": self.bc, "mode": self.mode, "k": self.k, "count": self.count,
                "left": list(self.left), "right": list(self.right),
                "maxRelDeviation": self.max_rel_deviation, "tol": self.tol,
                "passed": self.passed}


def _members(pair):
    if hasattr(pair, "left"):
        return pair.left, pair.right
    return pair


def verify_isospectrality(pair, bc: str = "neumann", k: int = 2, count: Optional[int] = None,
                          tol: float = 1e-8, mode: str = "graph", solver: str = "eigh"
                          ) -> SpectralReport:
    left, right = _members(pair)
    ops = [assemble_laplacian(build_diagram(t), k, bc, mode) for t in (left, right)]
    dim = min(op.dim for op in ops)
    if count is None:
        count = min(20, dim)
    count = min(count, dim)
    specs = [spectrum(op.matrix, count, op.mass, solver) for op in ops]
    dev = max_relative_deviation(*specs)
    return SpectralReport(bc, mode, k, count, tuple(specs[0]), tuple(specs[1]), dev, tol)


# -- exact transplantation on the mesh ------------------------------------------------------

def _exact_operator(mesh: Mesh) -> list[dict]:
    """Rows of W^-1 L as sparse dicts of Fractions."""
    rows = [dict() for _ in range(mesh.size)]
    for tri in mesh.triangles:
        idx = tri[1:]
        for r in range(3):
            for c in range(3):
                v = 2 if r == c else -1
                rows[idx[r]][idx[c]] = rows[idx[r]].get(idx[c], 0) + v
    for v, reps in enumerate(mesh.representatives):
        w = len(reps)
        rows[v] = {c: Fraction(x, w) for c, x in rows[v].items() if x}
    return rows


def lift_intertwiner(T: RationalMatrix, ml: Mesh, mr: Mesh, dirichlet: bool = False,
                     mismatch: Optional[list] = None) -> list[dict]:
    """
    Node-level map: G(j, u) = sum_i T[j, i] F(i, u).  Every representative
    of a right node has to give the same row; if not, this raises, unless a
    ``mismatch`` list is passed, which then collects the largest entry
    difference and the first representative's row is kept.  With
    ``dirichlet`` the boundary nodes of both meshes are left out.
    """
    e = T.entries
    out = []
    for v, reps in enumerate(mr.representatives):
        row = None
        if dirichlet and v in mr.boundary:
            out.append({})
            continue
        for j, u in reps:
            cand = {}
            for i, tij in enumerate(e[j]):
                if tij:
                    node = ml.node_of[i, u]
                    if dirichlet and node in ml.boundary:
                        continue
                    cand[node] = cand.get(node, 0) + tij
            cand = {c: x for c, x in cand.items() if x}
            if row is None:
                row = cand
            elif row != cand:
                if mismatch is None:
                    raise AssertionError("lifted intertwiner is not well defined on mesh nodes")
                mismatch.append(max(abs(Fraction(row.get(c, 0)) - Fraction(cand.get(c, 0)))
                                    for c in set(row) | set(cand)))
        out.append(row)
    return out


def _restrict(rows, boundary):
    return [{} if v in boundary else {c: x for c, x in r.items() if c not in boundary}
            for v, r in enumerate(rows)]


def _sparse_mul(a: list[dict], b: list[dict]) -> list[dict]:
    out = []
    for ra in a:
        acc = {}
        for k, x in ra.items():
            for c, y in b[k].items():
                acc[c] = acc.get(c, 0) + x * y
        out.append(acc)
    return out


def discrete_transplant_check(pair, k: int = 1, intertwiner: Optional[RationalMatrix] = None,
                              bc: str = "neumann") -> Fraction:
    """
    Max-entry residual of T^ D_l - D_r T^ with D = W^-1 L, in exact
    arithmetic.  A lift that differs between representatives of one node
    counts towards the residual as well.  For Dirichlet the intertwiner is first conjugated by the
    orientation signs of both diagrams and the boundary rows and columns are
    dropped.
    """
    left, right = _members(pair)
    if intertwiner is None:
        intertwiner = pair.intertwiner
    T = intertwiner
    dl, dr = build_diagram(left), build_diagram(right)
    if bc == "dirichlet":
        sl, sr = orientation_signs(dl), orientation_signs(dr)
        if sl is None or sr is None:
            raise BoundaryConditionError("Dirichlet conditions need an orientable diagram")
        T = RationalMatrix(tuple(tuple(x * sr[j] * sl[i] for i, x in enumerate(row))
                                 for j, row in enumerate(T.entries)))
    elif bc != "neumann":
        raise ValueError("exact check supports neumann and dirichlet")
    ml, mr = refine_mesh(dl, k), refine_mesh(dr, k)
    mismatch = []
    lift = lift_intertwiner(T, ml, mr, bc == "dirichlet", mismatch)
    opl, opr = _exact_operator(ml), _exact_operator(mr)
    if bc == "dirichlet":
        # Dirichlet data: zero on the boundary; compare on interior nodes only
        opl = _restrict(opl, ml.boundary)
        opr = _restrict(opr, mr.boundary)
    a = _sparse_mul(lift, opl)
    b = _sparse_mul(opr, lift)
    res = max(mismatch, default=Fraction(0))
    for ra, rb in zip(a, b):
        for c in set(ra) | set(rb):
            res = max(res, abs(Fraction(ra.get(c, 0)) - Fraction(rb.get(c, 0))))
    return res

"""
Seed pairs for quilts.

Projective groups act on points and on hyperplanes of PG(d, q); the two
actions are linearly equivalent (the incidence matrix intertwines them) but
in general not permutation isomorphic.  Restricting to a triple of
involutory collineations gives a candidate transplantable pair.  Degree 11
seeds come from the two classes of A5 subgroups of PSL(2, 11).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .linalg import RationalMatrix
from .perm import InvolutionTriple, Permutation, canonical_images, is_transitive
from .quilt import Pair, PairClass, Quilt, enumerate_quilt
from .transplant import DEFAULT_RNG_SEED, check_transplantable, fingerprint

log = logging.getLogger(__name__)

SUPPORTED_SPACES = ((2, 2), (2, 3), (3, 2), (2, 4))
CATALOG_SIZES = (7, 11, 13, 15, 21)
# quilts per size as named in the catalog; size 11 names are only a convention
QUILT_NAMES = {7: ("7",), 13: ("13a", "13b"), 15: ("15",), 21: ("21",),
               11: ("11f", "11g", "11h", "11i")}


class SeedSearchError(RuntimeError):
    pass


# -- finite fields ------------------------------------------------------------

class GF:
    """
    The field with q elements for q prime or q = 4.

    Elements are the integers 0..q-1; for q = 4 the integer ``c0 + 2*c1``
    stands for ``c0 + c1*x`` in F2[x]/(x^2 + x + 1).
    """

    def __init__(self, q: int):
        self.q = q
        if q == 4:
            self.p = 2
            mul = [[0] * 4 for _ in range(4)]
            for u in range(4):
                for v in range(4):
                    # (u0 + u1 x)(v0 + v1 x), x^2 = x + 1
                    u0, u1, v0, v1 = u & 1, u >> 1, v & 1, v >> 1
                    c0 = (u0 & v0) ^ (u1 & v1)
                    c1 = (u0 & v1) ^ (u1 & v0) ^ (u1 & v1)
                    mul[u][v] = c0 | (c1 << 1)
            self._mul = mul
            self._add = [[u ^ v for v in range(4)] for u in range(4)]
        elif q >= 2 and all(q % k for k in range(2, int(q ** 0.5) + 1)):
            self.p = q
            self._mul = [[(u * v) % q for v in range(q)] for u in range(q)]
            self._add = [[(u + v) % q for v in range(q)] for u in range(q)]
        else:
            raise ValueError(f"unsupported field size {q}")
        self._neg = [next(v for v in range(q) if self._add[u][v] == 0) for u in range(q)]
        self._inv = [None] + [next(v for v in range(q) if self._mul[u][v] == 1) for u in range(1, q)]
        self.elements = list(range(q))

    def add(self, u, v):
        return self._add[u][v]

    def mul(self, u, v):
        return self._mul[u][v]

    def neg(self, u):
        return self._neg[u]

    def inv(self, u):
        if u == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._inv[u]

    def dot(self, x, y):
        s = 0
        for u, v in zip(x, y):
            s = self._add[s][self._mul[u][v]]
        return s

    def normalize(self, vec) -> tuple[int, ...]:
        lead = next(x for x in vec if x)
        k = self._inv[lead]
        return tuple(self._mul[k][x] for x in vec)

    def matvec(self, m, vec) -> tuple[int, ...]:
        return tuple(self.dot(row, vec) for row in m)

    def matmul(self, m1, m2):
        cols = list(zip(*m2))
        return tuple(tuple(self.dot(r, c) for c in cols) for r in m1)

    def matinv(self, m):
        n = len(m)
        aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m)]
        for k in range(n):
            piv = next((i for i in range(k, n) if aug[i][k]), None)
            if piv is None:
                raise ValueError("singular matrix")
            aug[k], aug[piv] = aug[piv], aug[k]
            s = self._inv[aug[k][k]]
            aug[k] = [self._mul[s][x] for x in aug[k]]
            for i in range(n):
                if i != k and aug[i][k]:
                    f = self._neg[aug[i][k]]
                    aug[i] = [self._add[x][self._mul[f][y]] for x, y in zip(aug[i], aug[k])]
        return tuple(tuple(r[n:]) for r in aug)


# -- projective spaces ---------------------------------------------------------

@dataclass(frozen=True)
class ProjectiveSpace:
    dim: int
    q: int
    points: tuple[tuple[int, ...], ...]
    hyperplanes: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[int, ...], ...]  # incidence[i][j] == 1: point i on hyperplane j

    @cached_property
    def field(self) -> GF:
        return GF(self.q)

    @cached_property
    def point_index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def hyperplane_index(self) -> dict:
        return {h: i for i, h in enumerate(self.hyperplanes)}

    @property
    def size(self) -> int:
        return len(self.points)

    def incidence_matrix(self) -> RationalMatrix:
        return RationalMatrix(self.incidence)

    def intertwiner(self) -> RationalMatrix:
        """Maps functions on points to functions on hyperplanes."""
        return RationalMatrix(self.incidence).transpose()


def build_projective_space(d: int, q: int) -> ProjectiveSpace:
    F = GF(q)
    vecs = [v for v in itertools.product(range(q), repeat=d + 1) if any(v)]
    pts = sorted({F.normalize(v) for v in vecs})
    inc = tuple(tuple(int(F.dot(p, h) == 0) for h in pts) for p in pts)
    return ProjectiveSpace(d, q, tuple(pts), tuple(pts), inc)


@dataclass(frozen=True)
class GroupElementAction:
    matrix: tuple[tuple[int, ...], ...]
    point_perm: Permutation
    hyperplane_perm: Permutation


def collineation_actions(s: ProjectiveSpace, m: Sequence[Sequence[int]]) -> GroupElementAction:
    F = s.field
    m = tuple(tuple(r) for r in m)
    minv = F.matinv(m)  # raises on singular input
    dual = tuple(zip(*minv))
    pp = Permutation(tuple(s.point_index[F.normalize(F.matvec(m, p))] for p in s.points))
    hp = Permutation(tuple(s.hyperplane_index[F.normalize(F.matvec(dual, h))]
                           for h in s.hyperplanes))
    for i in range(s.size):
        for j in range(s.size):
            if s.incidence[i][j] != s.incidence[pp.image[i]][hp.image[j]]:
                raise AssertionError("collineation does not preserve incidence")
    return GroupElementAction(m, pp, hp)


def frobenius_action(s: ProjectiveSpace) -> GroupElementAction:
    """The field automorphism x -> x^p applied coordinatewise (q = 4 only)."""
    F = s.field
    if s.q != 4:
        raise ValueError("only defined here for q = 4")
    frob = [F.mul(x, x) for x in range(4)]

    def act(v):
        return F.normalize(tuple(frob[x] for x in v))

    pp = Permutation(tuple(s.point_index[act(p)] for p in s.points))
    hp = Permutation(tuple(s.hyperplane_index[act(h)] for h in s.hyperplanes))
    ident = tuple(tuple(int(i == j) for j in range(s.dim + 1)) for i in range(s.dim + 1))
    return GroupElementAction(ident, pp, hp)


def _generating_matrices(d: int, q: int) -> list[tuple[tuple[int, ...], ...]]:
    """Elementary transvections and a diagonal matrix; together they generate GL(d+1, q)."""
    n = d + 1
    F = GF(q)
    prim = next(g for g in range(2, q) if len({_pow(F, g, k) for k in range(1, q)}) == q - 1) \
        if q > 2 else 1
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(tuple(tuple(int(r == c) or int(r == i and c == j) for c in range(n))
                                  for r in range(n)))
    gens.append(tuple(tuple(prim if (r == c == 0) else int(r == c) for c in range(n))
                      for r in range(n)))
    return gens


def _pow(F, g, k):
    out = 1
    for _ in range(k):
        out = F.mul(out, g)
    return out


def collineation_group(s: ProjectiveSpace, include_field_automorphism: bool = False
                       ) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """
    All (point image, hyperplane image) pairs of PGL(d+1, q), optionally
    extended by the Frobenius automorphism; closure under generators.
    """
    gens = [collineation_actions(s, m) for m in _generating_matrices(s.dim, s.q)]
    if include_field_automorphism:
        gens.append(frobenius_action(s))
    gens = [(g.point_perm.image, g.hyperplane_perm.image) for g in gens]
    ident = (tuple(range(s.size)), tuple(range(s.size)))
    seen = {ident}
    order = [ident]
    for x in order:
        for g in gens:
            y = (tuple(g[0][i] for i in x[0]), tuple(g[1][i] for i in x[1]))
            if y not in seen:
                seen.add(y)
                order.append(y)
    return order


# -- triple search over a group given by two actions ----------------------------

# A group element is stored as (left image, right image): its permutation in
# the two actions being compared.
ActionPair = tuple[tuple[int, ...], tuple[int, ...]]


def _is_involution(img) -> bool:
    return any(i != j for i, j in enumerate(img)) and all(img[j] == i for i, j in enumerate(img))


def _relabel(g, h):
    """g with every point of its cycles replaced by its image under h."""
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[h[i]] = h[j]
    return tuple(out)


def _conj(e: ActionPair, h: ActionPair) -> ActionPair:
    return _relabel(e[0], h[0]), _relabel(e[1], h[1])


def _gluings(img) -> int:
    return sum(1 for i, j in enumerate(img) if i < j)


def _orbit_reps(elements: Sequence, group: Sequence) -> list:
    """Representatives of the conjugation orbits of ``group`` on ``elements``."""
    remaining = set(elements)
    reps = []
    for e in elements:
        if e not in remaining:
            continue
        reps.append(e)
        for g in group:
            remaining.discard(_conj(e, g))
    return reps


def involution_triples(group: Sequence[ActionPair], gluings: Optional[int] = None
                       ) -> Iterable[tuple[ActionPair, ActionPair, ActionPair]]:
    """
    Involution triples up to simultaneous conjugation in ``group``.  With
    ``gluings`` set, only triples whose left action has exactly that many
    2-cycles in total.
    """
    invs = sorted(g for g in group if _is_involution(g[0]))
    if not invs:
        return
    lo = min(_gluings(g[0]) for g in invs)
    for a in _orbit_reps(invs, group):
        ea = _gluings(a[0])
        if gluings is not None and ea + 2 * lo > gluings:
            continue
        cent = [g for g in group if _conj(a, g) == a]
        for b in _orbit_reps(invs, cent):
            eb = _gluings(b[0])
            if gluings is not None and ea + eb + lo > gluings:
                continue
            stab = [g for g in cent if _conj(b, g) == b]
            cands = invs if gluings is None else \
                [c for c in invs if ea + eb + _gluings(c[0]) == gluings]
            for c in _orbit_reps(cands, stab):
                yield a, b, c


def gluing_levels(group: Sequence[ActionPair]) -> list[int]:
    """Possible totals of 2-cycles over involution triples, ascending."""
    counts = sorted({_gluings(g[0]) for g in group if _is_involution(g[0])})
    return sorted({x + y + z for x in counts for y in counts for z in counts})


def transplantable_classes(triples: Iterable, rng_seed: int = DEFAULT_RNG_SEED
                           ) -> list[PairClass]:
    """Distinct transplantable pair classes among transitive triples, sorted by key."""
    seen: dict[str, Optional[PairClass]] = {}
    for triple in triples:
        left = InvolutionTriple.from_images([g[0] for g in triple])
        if not is_transitive(left):
            continue
        right = InvolutionTriple.from_images([g[1] for g in triple])
        cls = PairClass.of((left, right))
        if cls.key in seen:
            continue
        verdict = check_transplantable(cls.left, cls.right, seed=rng_seed)
        seen[cls.key] = cls if verdict.transplantable else None
    return sorted((c for c in seen.values() if c is not None), key=lambda c: c.key)


def _search_group(group, gluings, rng_seed) -> list[PairClass]:
    if gluings == "min":
        for level in gluing_levels(group):
            found = transplantable_classes(involution_triples(group, level), rng_seed)
            if found:
                log.info("lowest gluing count with transplantable pairs: %d", level)
                return found
        return []
    return transplantable_classes(involution_triples(group, gluings), rng_seed)


def projective_seed_search(s: ProjectiveSpace, include_field_automorphism: bool = False,
                           gluings=None, rng_seed: int = DEFAULT_RNG_SEED) -> list[Pair]:
    """
    Transplantable (point action, hyperplane action) pairs from involution
    triples of the collineation group, one per pair class, sorted by key.

    ``gluings`` restricts the search: an integer keeps triples with exactly
    that many glued edge pairs, ``"min"`` keeps the lowest such count that
    produces any transplantable pair, and None searches everything.
    """
    group = collineation_group(s, include_field_automorphism)
    return [c.pair for c in _search_group(group, gluings, rng_seed)]


# -- PSL(2, p) and its two classes of A5 subgroups --------------------------------

@dataclass(frozen=True)
class CosetActions:
    group: tuple  # normalized matrices (a, b, c, d) modulo +-I
    subgroups: tuple  # two non-conjugate subgroups of order 60
    actions: tuple  # per subgroup: {element: image tuple on right cosets}

    def pairs(self) -> list[ActionPair]:
        return [(self.actions[0][g], self.actions[1][g]) for g in self.group]


def psl2_coset_actions(p: int = 11) -> CosetActions:
    """
    PSL(2, p) acting on the right cosets of two non-conjugate A5 subgroups.
    The subgroups are closures of an involution x and an element y of order 3
    with xy of order 5.
    """
    def norm(m):
        neg = tuple((-x) % p for x in m)
        return min(m, neg)

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return norm(((a * e + b * g) % p, (a * f + b * h) % p,
                     (c * e + d * g) % p, (c * f + d * h) % p))

    def inv(x):
        a, b, c, d = x
        return norm((d, (-b) % p, (-c) % p, a))

    group = sorted({norm(m) for m in itertools.product(range(p), repeat=4)
                    if (m[0] * m[3] - m[1] * m[2]) % p == 1})
    one = norm((1, 0, 0, 1))

    def order(x):
        k, y = 1, x
        while y != one:
            y, k = mul(y, x), k + 1
        return k

    def closure(gens):
        seen, todo = {one}, [one]
        for x in todo:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)

    orders = {g: order(g) for g in group}
    subs: list[frozenset] = []
    for x in (g for g in group if orders[g] == 2):
        for y in (g for g in group if orders[g] == 3):
            if orders[mul(x, y)] != 5:
                continue
            h = closure([x, y])
            if len(h) != 60 or h in subs:
                continue
            if any(frozenset(mul(mul(inv(g), k), g) for k in h) == h2
                   for h2 in subs for g in group):
                continue
            subs.append(h)
            if len(subs) == 2:
                break
        if len(subs) == 2:
            break
    if len(subs) != 2:
        raise SeedSearchError("could not find two non-conjugate subgroups of order 60")

    actions = []
    for h in subs:
        reps, covered = [], set()
        for g in group:
            if g not in covered:
                reps.append(g)
                covered.update(mul(k, g) for k in h)
        idx = {mul(k, r): i for i, r in enumerate(reps) for k in h}
        actions.append({g: tuple(idx[mul(r, g)] for r in reps) for g in group})
    return CosetActions(tuple(group), tuple(subs), tuple(actions))


def psl2_seed_search(gluings=None, rng_seed: int = DEFAULT_RNG_SEED) -> list[Pair]:
    ca = psl2_coset_actions(11)
    return [c.pair for c in _search_group(ca.pairs(), gluings, rng_seed)]


# -- brute force oracle ------------------------------------------------------------

BRUTE_FORCE_LIMIT = 8


def _involutions(n: int) -> list[tuple[int, ...]]:
    out = []

    def rec(img, i):
        while i < n and img[i] is not None:
            i += 1
        if i == n:
            out.append(tuple(img))
            return
        img[i] = i
        rec(img, i + 1)
        for j in range(i + 1, n):
            if img[j] is None:
                img[i], img[j] = j, i
                rec(img, i + 1)
                img[j] = None
        img[i] = None

    rec([None] * n, 0)
    return out


def brute_force_pairs(n: int, override: bool = False, rng_seed: int = DEFAULT_RNG_SEED
                      ) -> list[PairClass]:
    """
    Every transplantable pair class on n points, by exhausting transitive
    triples.  Roles are ordered so that fix(a) >= fix(b) >= fix(c), and a is
    a fixed representative of its cycle type.  Triples are bucketed by
    fingerprint and only buckets holding two or more point classes are
    examined.
    """
    if n > BRUTE_FORCE_LIMIT and not override:
        raise ValueError(f"brute force beyond n = {BRUTE_FORCE_LIMIT} needs override=True")
    invs = _involutions(n)
    nfix = {g: sum(1 for i, j in enumerate(g) if i == j) for g in invs}
    buckets: dict = {}
    for k in range(n // 2 + 1):
        a = tuple(i ^ 1 if i < 2 * k else i for i in range(n))
        fa = n - 2 * k
        for b in invs:
            if nfix[b] > fa:
                continue
            for c in invs:
                if nfix[c] > nfix[b]:
                    continue
                t = InvolutionTriple.from_images((a, b, c))
                if not is_transitive(t):
                    continue
                buckets.setdefault(fingerprint(t, 6).counts, set()).add(t)
    found: dict[str, PairClass] = {}
    for triples in buckets.values():
        if len(triples) < 2:
            continue
        classes = {}
        for t in triples:
            classes.setdefault(canonical_images(t), t)
        reps = [classes[k] for k in sorted(classes)]
        for left, right in itertools.combinations(reps, 2):
            cls = PairClass.of((left, right))
            if cls.key in found:
                continue
            if check_transplantable(left, right, seed=rng_seed).transplantable:
                found[cls.key] = cls
    return [found[k] for k in sorted(found)]


# -- the catalog ---------------------------------------------------------------------

# (d, q, with field automorphism) per size; size 11 uses PSL(2, 11)
CATALOG_SPACES = {7: (2, 2, False), 13: (2, 3, False), 15: (3, 2, False), 21: (2, 4, True)}
# class counts in name order, used only to attach the conventional names
EXPECTED_COUNTS = {7: (3,), 13: (5, 4), 15: (4,), 21: (8,), 11: (4, 6, 4, 5)}


def catalog_pairs(size: int, rng_seed: int = DEFAULT_RNG_SEED) -> list[Pair]:
    """
    Seed candidates for one catalog size: the transplantable classes with the
    fewest glued edge pairs in the relevant group.
    """
    if size == 11:
        return psl2_seed_search("min", rng_seed)
    if size not in CATALOG_SPACES:
        raise ValueError(f"no catalog construction for size {size}")
    d, q, frob = CATALOG_SPACES[size]
    return projective_seed_search(build_projective_space(d, q), frob, "min", rng_seed)


def group_into_quilts(pairs: Sequence[Pair], rng_seed: int = DEFAULT_RNG_SEED,
                      max_classes: int = 64) -> list[Quilt]:
    """
    Partition pair classes into quilts.  Each quilt is enumerated from its
    class with the least key, so numbering does not depend on search order.
    """
    classes = sorted((PairClass.of(p) for p in pairs), key=lambda c: c.key)
    covered: set[str] = set()
    out = []
    for cls in classes:
        if cls.key in covered:
            continue
        q = enumerate_quilt(cls.pair, max_classes=max_classes, rng_seed=rng_seed)
        covered.update(q.keys())
        out.append(q)
    return out


def name_quilts(size: int, quilts: Sequence[Quilt]) -> list[Quilt]:
    """
    Attach names.  Names are matched to the known class counts; quilts
    with equal counts keep seed-key order.  Anything left over is named
    ``"<size>?<k>"`` and logged.
    """
    names = QUILT_NAMES[size]
    counts = EXPECTED_COUNTS[size]
    pool = sorted(quilts, key=lambda q: q.seed.key)
    named = []
    for name, count in zip(names, counts):
        hit = next((q for q in pool if len(q) == count), None)
        if hit is None:
            log.warning("no quilt of %d classes for name %s", count, name)
            continue
        pool.remove(hit)
        named.append(_renamed(hit, name))
    for k, q in enumerate(pool, 1):
        log.warning("surplus quilt of size %d with %d classes", size, len(q))
        named.append(_renamed(q, f"{size}?{k}"))
    return named


def _renamed(q: Quilt, name: str) -> Quilt:
    return Quilt(name, q.classes, q.seed, q.certificates)


def catalog_quilts(sizes: Iterable[int] = CATALOG_SIZES, rng_seed: int = DEFAULT_RNG_SEED
                   ) -> list[Quilt]:
    out = []
    for size in sorted(set(sizes)):
        pairs = catalog_pairs(size, rng_seed)
        if not pairs:
            raise SeedSearchError(f"no transplantable pairs of size {size}")
        out.extend(name_quilts(size, group_into_quilts(pairs, rng_seed)))
    return out


def seeds_json(quilts: Sequence[Quilt]) -> list[dict]:
    return [{"quiltName": q.name, "left": q.seed.left.to_json(), "right": q.seed.right.to_json()}
            for q in quilts]


def seeds_from_json(data: Sequence[dict]) -> dict[str, Pair]:
    return {d["quiltName"]: (InvolutionTriple.from_json(d["left"]),
                             InvolutionTriple.from_json(d["right"])) for d in data}

"""
Permutations, involution triples and words in the generators a, b, c.

Permutations are stored 0-based as image tuples ``image[i] = p(i)``; every
string form (cycle notation, JSON) is 1-based.

Composition is left to right: ``compose(p, q)`` applies ``p`` first, then
``q``, so ``compose(p, q).image[i] == q.image[p.image[i]]``.  A word such as
``"abc"`` evaluates to ``a`` then ``b`` then ``c``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

GENERATORS = "abc"


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"not a bijection on {len(image)} points: {image}")
        object.__setattr__(self, "image", image)

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> Permutation:
        return cls(tuple(x - 1 for x in images))

    def one_based(self) -> list[int]:
        return [x + 1 for x in self.image]

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def is_involution(self) -> bool:
        return all(self.image[j] == i for i, j in enumerate(self.image))

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.image) if i == j]

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point, sorted."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.image[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.image[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(1, *(len(c) for c in self.cycles()))

    def conjugate_by(self, sigma: Permutation) -> Permutation:
        """Relabel points by ``sigma``: the result maps sigma(i) to sigma(p(i))."""
        out = [0] * self.n
        for i, j in enumerate(self.image):
            out[sigma.image[i]] = sigma.image[j]
        return Permutation(tuple(out))

    def __str__(self) -> str:
        return format_cycles(self)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p`` first, then ``q``."""
    if p.n != q.n:
        raise ValueError("size mismatch")
    return Permutation(tuple(q.image[x] for x in p.image))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """
    Parse 1-based disjoint cycle notation.

    >>> parse_cycles("(1 2)", 3).one_based()
    [2, 1, 3]
    >>> parse_cycles("", 2).is_identity()
    True
    """
    stripped = text.strip()
    if stripped.replace(" ", "") in ("", "()"):
        return Permutation.identity(n)
    rest = _CYCLE_RE.sub("", stripped)
    if rest.strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    image = list(range(n))
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        tokens = body.replace(",", " ").split()
        if not tokens:
            continue
        try:
            pts = [int(tok) for tok in tokens]
        except ValueError:
            raise ValueError(f"malformed cycle notation: {text!r}") from None
        for p in pts:
            if not 1 <= p <= n:
                raise ValueError(f"point {p} out of range 1..{n}")
            if p in seen:
                raise ValueError(f"repeated point {p}")
            seen.add(p)
        for x, y in zip(pts, pts[1:] + pts[:1]):
            image[x - 1] = y - 1
    return Permutation(tuple(image))


def format_cycles(p: Permutation) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cyc)


@dataclass(frozen=True)
class InvolutionTriple:
    a: Permutation
    b: Permutation
    c: Permutation

    def __post_init__(self):
        n = self.a.n
        for name, g in zip(GENERATORS, self.gens):
            if g.n != n:
                raise ValueError("generators act on different point counts")
            if not g.is_involution():
                raise ValueError(f"generator {name} is not an involution")

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def gens(self) -> tuple[Permutation, Permutation, Permutation]:
        return (self.a, self.b, self.c)

    def gen(self, letter: str) -> Permutation:
        return self.gens[GENERATORS.index(letter)]

    @classmethod
    def from_cycles(cls, n: int, a: str = "", b: str = "", c: str = "") -> InvolutionTriple:
        return cls(parse_cycles(a, n), parse_cycles(b, n), parse_cycles(c, n))

    @classmethod
    def from_images(cls, images: Sequence[Sequence[int]]) -> InvolutionTriple:
        """From three 0-based image sequences."""
        a, b, c = (Permutation(tuple(x)) for x in images)
        return cls(a, b, c)

    def images(self) -> tuple[tuple[int, ...], ...]:
        return tuple(g.image for g in self.gens)

    def conjugate_by(self, sigma: Permutation) -> InvolutionTriple:
        return InvolutionTriple(*(g.conjugate_by(sigma) for g in self.gens))

    def permute_roles(self, roles: Sequence[int]) -> InvolutionTriple:
        """New triple whose k-th generator is the ``roles[k]``-th old one."""
        g = self.gens
        return InvolutionTriple(g[roles[0]], g[roles[1]], g[roles[2]])

    def to_json(self) -> dict:
        return {"n": self.n, "a": format_cycles(self.a), "b": format_cycles(self.b),
                "c": format_cycles(self.c)}

    @classmethod
    def from_json(cls, data: dict) -> InvolutionTriple:
        n = int(data["n"])
        return cls.from_cycles(n, data["a"], data["b"], data["c"])

    def __str__(self) -> str:
        return f"n={self.n} a={self.a} b={self.b} c={self.c}"


def evaluate_word(t: InvolutionTriple, word: str | Iterable[str]) -> Permutation:
    image = list(range(t.n))
    for letter in word:
        g = t.gen(letter).image
        image = [g[x] for x in image]
    return Permutation(tuple(image))


def orbit_partition(t: InvolutionTriple) -> list[list[int]]:
    """Orbits of <a, b, c> as sorted 0-based blocks, ordered by least point."""
    parent = list(range(t.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in t.gens:
        for i, j in enumerate(g.image):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    blocks: dict[int, list[int]] = {}
    for i in range(t.n):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values())


def is_transitive(t: InvolutionTriple) -> bool:
    return len(orbit_partition(t)) == 1


# -- canonical relabeling ---------------------------------------------------
#
# The canonical form is the relabeling minimizing the concatenated image
# sequences of a, then b, then c.  The minimal a-sequence is forced by the
# cycle type of a (fixed points first, then 2-cycles on consecutive labels),
# so the search fills label slots in that pattern.  b is minimized first
# (with interchangeable untouched <a,b>-orbits collapsed), then c among the
# labelings that achieve the optimal b-sequence.


def _bfs(images, root):
    order = [root]
    seen = {root}
    for x in order:
        for g in images:
            y = g[x]
            if y not in seen:
                seen.add(y)
                order.append(y)
    return order


def _rooted_code(images, root):
    order = _bfs(images, root)
    pos = {p: i for i, p in enumerate(order)}
    return tuple(pos[g[p]] for p in order for g in images)


def _rooted_shape(a, b, p):
    """Walk lengths from p starting with a and starting with b."""
    out = []
    for first, second in ((a, b), (b, a)):
        steps, cur, gens = 0, p, (first, second)
        while True:
            nxt = gens[steps % 2][cur]
            if nxt == cur:
                break
            steps += 1
            cur = nxt
            if cur == p and steps % 2 == 0:
                break
        out.append(steps)
    return tuple(out)


class _Canonizer:
    def __init__(self, images):
        self.a, self.b, self.c = images
        self.n = len(self.a)
        a = self.a
        self.n_fixed = sum(1 for i in range(self.n) if a[i] == i)
        # <a,b>-orbit ids for the untouched-orbit symmetry reduction
        orb = [-1] * self.n
        k = 0
        for s in range(self.n):
            if orb[s] >= 0:
                continue
            stack = [s]
            orb[s] = k
            while stack:
                x = stack.pop()
                for g in (self.a, self.b):
                    y = g[x]
                    if orb[y] < 0:
                        orb[y] = k
                        stack.append(y)
            k += 1
        self.orbit = orb
        self.shape = [_rooted_shape(self.a, self.b, p) for p in range(self.n)]
        self.component = [0] * self.n
        self.rooted_code = [None] * self.n
        comp = [-1] * self.n
        k = 0
        for s in range(self.n):
            if comp[s] < 0:
                for p in _bfs(images, s):
                    comp[p] = k
                k += 1
        self.component = comp

    def run(self) -> list[int]:
        best_b = self._search(phase=0, target=None)[0]
        return self._search(phase=1, target=best_b)[1]

    def _code(self, p):
        if self.rooted_code[p] is None:
            self.rooted_code[p] = _rooted_code((self.a, self.b, self.c), p)
        return self.rooted_code[p]

    def _slot_candidates(self, depth, label):
        a, n, f = self.a, self.n, self.n_fixed
        if depth < f:
            return [p for p in range(n) if label[p] < 0 and a[p] == p]
        return [p for p in range(n) if label[p] < 0 and a[p] != p]

    def _search(self, phase, target):
        n, a = self.n, self.a
        gen = self.b if phase == 0 else self.c
        label = [-1] * n
        order: list[int] = []
        best: list = [None, None]  # sequence, order
        orbit_touched = [0] * n
        comp_touched = [0] * n

        def compare(seq_gen, ref, depth):
            # -1: strictly better prefix possible, 0: tie so far, 1: prune
            for pos in range(n):
                if pos >= depth:
                    return 0
                q = seq_gen[order[pos]]
                v = label[q]
                if v < 0:
                    return -1 if depth < ref[pos] else (1 if depth > ref[pos] else 0)
                if v != ref[pos]:
                    return -1 if v < ref[pos] else 1
            return 0

        def place(p):
            label[p] = len(order)
            order.append(p)
            orbit_touched[self.orbit[p]] += 1
            comp_touched[self.component[p]] += 1

        def unplace():
            p = order.pop()
            label[p] = -1
            orbit_touched[self.orbit[p]] -= 1
            comp_touched[self.component[p]] -= 1

        def rec():
            depth = len(order)
            if target is not None and compare(self.b, target, depth) == 1:
                return
            if best[0] is not None and compare(gen, best[0], depth) == 1:
                return
            if depth == n:
                seq = [label[gen[p]] for p in order]
                if best[0] is None or seq < best[0]:
                    best[0] = seq
                    best[1] = list(order)
                return
            f = self.n_fixed
            if depth >= f and (depth - f) % 2 == 1:
                p = a[order[-1]]
                place(p)
                rec()
                unplace()
                return
            cands = self._slot_candidates(depth, label)
            if phase == 0:
                seen = set()
                reduced = []
                for p in cands:
                    if orbit_touched[self.orbit[p]]:
                        reduced.append(p)
                    else:
                        key = self.shape[p]
                        if key not in seen:
                            seen.add(key)
                            reduced.append(p)
                cands = reduced
            else:
                seen = set()
                reduced = []
                for p in cands:
                    if comp_touched[self.component[p]]:
                        reduced.append(p)
                    else:
                        key = self._code(p)
                        if key not in seen:
                            seen.add(key)
                            reduced.append(p)
                cands = reduced

            def prio(p):
                q = gen[p]
                if q == p:
                    return (0, depth)
                if label[q] >= 0:
                    return (0, label[q])
                return (1, 0)

            cands.sort(key=lambda p: (prio(p), p))
            for p in cands:
                place(p)
                rec()
                unplace()

        rec()
        return best


def canonical_order(t: InvolutionTriple) -> list[int]:
    """Old points listed in canonical label order."""
    return _Canonizer(t.images()).run()


def canonicalize(t: InvolutionTriple) -> tuple[InvolutionTriple, Permutation]:
    """
    Lexicographically least relabeling of ``t`` and the relabeling ``sigma``
    (old point -> new label) with ``t.conjugate_by(sigma)`` canonical.
    """
    order = canonical_order(t)
    sigma = [0] * t.n
    for new, old in enumerate(order):
        sigma[old] = new
    s = Permutation(tuple(sigma))
    return t.conjugate_by(s), s


def canonical_images(t: InvolutionTriple) -> tuple[int, ...]:
    """Concatenated 0-based images of the canonical form (a, then b, then c)."""
    can, _ = canonicalize(t)
    return can.a.image + can.b.image + can.c.image


def brute_force_canonical_images(t: InvolutionTriple) -> tuple[int, ...]:
    """Exhaustive minimum over all n! relabelings; only for tiny n."""
    best = None
    for perm in itertools.permutations(range(t.n)):
        s = Permutation(perm)
        u = t.conjugate_by(s)
        key = u.a.image + u.b.image + u.c.image
        if best is None or key < best:
            best = key
    return best

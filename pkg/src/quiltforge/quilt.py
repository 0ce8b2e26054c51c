"""
Braiding of involution triples and the enumeration of quilts.

The braid moves act on triples by

    L    : (a, b, c) -> (aba, a, c)        Linv : (a, b, c) -> (b, bab, c)
    R    : (a, b, c) -> (a, c, cbc)        Rinv : (a, b, c) -> (a, bcb, b)

where ``aba`` is ``b`` with every point of its cycles relabeled by ``a``.
A pair of triples is braided by applying the same move to both members.
Pairs are identified up to independent relabeling of points in each member,
reversal of the pair, and a simultaneous permutation of the roles of a, b, c.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .perm import InvolutionTriple, canonicalize
from .transplant import DEFAULT_RNG_SEED, TransplantablePair, Verdict, check_transplantable

MOVES = ("L", "R", "Linv", "Rinv")
INVERSE_MOVE = {"L": "Linv", "Linv": "L", "R": "Rinv", "Rinv": "R"}
ROLE_PERMUTATIONS = tuple(itertools.permutations(range(3)))
DEFAULT_MAX_CLASSES = 64

Pair = tuple[InvolutionTriple, InvolutionTriple]


class QuiltError(RuntimeError):
    pass


def braid(t: InvolutionTriple, move: str) -> InvolutionTriple:
    a, b, c = t.gens
    if move == "L":
        return InvolutionTriple(b.conjugate_by(a), a, c)
    if move == "Linv":
        return InvolutionTriple(b, a.conjugate_by(b), c)
    if move == "R":
        return InvolutionTriple(a, c, b.conjugate_by(c))
    if move == "Rinv":
        return InvolutionTriple(a, c.conjugate_by(b), b)
    raise ValueError(f"unknown braid move {move!r}")


def braid_word(t: InvolutionTriple, moves: Iterable[str]) -> InvolutionTriple:
    for m in moves:
        t = braid(t, m)
    return t


def braid_pair(p: Pair, move: str) -> Pair:
    left, right = p
    if left.n != right.n:
        raise ValueError("pair members act on different point counts")
    return braid(left, move), braid(right, move)


def _encode(t: InvolutionTriple) -> tuple[int, ...]:
    can, _ = canonicalize(t)
    return (t.n,) + can.a.image + can.b.image + can.c.image


def _decode(code: Sequence[int]) -> InvolutionTriple:
    n = code[0]
    return InvolutionTriple.from_images((code[1:n + 1], code[n + 1:2 * n + 1], code[2 * n + 1:]))


def _key_string(code: tuple[int, ...]) -> str:
    n = code[0]
    parts = []
    for k in range(2):
        base = 1 + k * (3 * n + 1)
        block = code[base:base + 3 * n]
        gens = ["".join(chr(ord("0") + 1 + x) if x < 9 else chr(ord("A") + x - 9) for x in
                        block[g * n:(g + 1) * n]) for g in range(3)]
        parts.append(".".join(gens))
    return f"{n}:" + "|".join(parts)


def _class_code(p: Pair) -> tuple[int, ...]:
    left, right = p
    if left.n != right.n:
        raise ValueError("pair members act on different point counts")
    best = None
    for roles in ROLE_PERMUTATIONS:
        el = _encode(left.permute_roles(roles))
        er = _encode(right.permute_roles(roles))
        for cand in (el + er, er + el):
            if best is None or cand < best:
                best = cand
    return best


@dataclass(frozen=True)
class PairClass:
    left: InvolutionTriple
    right: InvolutionTriple
    key: str

    @property
    def pair(self) -> Pair:
        return (self.left, self.right)

    @classmethod
    def of(cls, p: Pair) -> PairClass:
        code = _class_code(p)
        n = code[0]
        left = _decode(code[:3 * n + 1])
        right = _decode(code[3 * n + 1:])
        return cls(left, right, _key_string(code))


def pair_class_key(p: Pair) -> str:
    """Canonical key; equal keys exactly when the pairs are identified."""
    return _key_string(_class_code(p))


@dataclass(frozen=True)
class Quilt:
    name: str
    classes: tuple[PairClass, ...]
    seed: PairClass
    certificates: tuple[TransplantablePair, ...] = ()

    def __len__(self) -> int:
        return len(self.classes)

    def keys(self) -> list[str]:
        return [c.key for c in self.classes]

    def label(self, i: int) -> str:
        return label(self, i)

    def to_json(self) -> dict:
        out = []
        for i, cls in enumerate(self.classes):
            entry = {"label": label(self, i + 1), "left": cls.left.to_json(),
                     "right": cls.right.to_json()}
            if self.certificates:
                entry["intertwiner"] = self.certificates[i].intertwiner.to_json()
            out.append(entry)
        return {"name": self.name, "classes": out}


def label(q: Quilt, i: int) -> str:
    """
    >>> label(Quilt("7", (None,) * 3, None), 1)
    '7(1)'
    """
    if not 1 <= i <= len(q.classes):
        raise IndexError(f"quilt {q.name} has {len(q.classes)} classes")
    return f"{q.name}({i})"


def enumerate_quilt(seed: Pair, max_classes: int = DEFAULT_MAX_CLASSES, name: str = "",
                    certify: bool = True, rng_seed: int = DEFAULT_RNG_SEED) -> Quilt:
    """
    Depth-first search from the seed, trying L, R, Linv, Rinv in
    that order on every representative of a class (all simultaneous role
    permutations of the canonical pair), numbering classes at first discovery.
    """
    first = PairClass.of(seed)
    if certify:
        v = check_transplantable(*seed, seed=rng_seed)
        if not v.transplantable:
            raise QuiltError(f"seed is not transplantable ({v.kind})")
    found = {first.key: first}
    ordered = [first]

    def visit(cls: PairClass):
        for move in MOVES:
            for roles in ROLE_PERMUTATIONS:
                rep = (cls.left.permute_roles(roles), cls.right.permute_roles(roles))
                nxt = PairClass.of(braid_pair(rep, move))
                if nxt.key in found:
                    continue
                if len(ordered) >= max_classes:
                    raise QuiltError(f"quilt exceeds {max_classes} classes")
                found[nxt.key] = nxt
                ordered.append(nxt)
                visit(nxt)

    visit(first)
    certs: list[TransplantablePair] = []
    if certify:
        for cls in ordered:
            v = check_transplantable(cls.left, cls.right, seed=rng_seed)
            if not v.transplantable:
                raise QuiltError(f"class {cls.key} is not transplantable ({v.kind})")
            certs.append(v.pair)
    return Quilt(name, tuple(ordered), first, tuple(certs))


def braid_orbit_keys(seed: Pair, max_pairs: int = 100000) -> set[str]:
    """
    Class keys met by the braid-group orbit of the concrete pair ``seed``
    (no role permutations applied while moving).
    """
    def local(p):
        l, r = _encode(p[0]), _encode(p[1])
        return min(l + r, r + l)

    start = local(seed)
    seen = {start}
    stack = [seed]
    keys = {pair_class_key(seed)}
    while stack:
        p = stack.pop()
        for move in MOVES:
            q = braid_pair(p, move)
            k = local(q)
            if k not in seen:
                if len(seen) >= max_pairs:
                    raise QuiltError("braid orbit too large")
                seen.add(k)
                stack.append(q)
                keys.add(pair_class_key(q))
    return keys


def check_verdict(cls: PairClass, rng_seed: int = DEFAULT_RNG_SEED) -> Verdict:
    return check_transplantable(cls.left, cls.right, seed=rng_seed)

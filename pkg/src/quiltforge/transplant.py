"""
Linear equivalence versus permutation isomorphism of two involution triples.

An intertwiner is an ``n x n`` matrix ``T`` with ``T P(x_l) = P(x_r) T`` for
each generator, where ``P(p)`` sends basis vector ``e_j`` to ``e_{p(j)}``.
Entrywise this reads ``T[i, x_l(j)] == T[x_r(i), j]``.  A pair is
transplantable when an invertible intertwiner exists but no relabeling of
points carries one triple onto the other.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import RationalMatrix, determinant, linear_combination, nullspace
from .perm import GENERATORS, InvolutionTriple, Permutation, evaluate_word, is_transitive

DEFAULT_RNG_SEED = 0x5EED
SCAN_RANGE = (1, -1, 2, -2, 3, -3)
SCAN_LIMIT = 4096
SCAN_PREFIX = 64
RANDOM_TRIALS = 64
FALLBACK_LINES = 8


def permutation_matrix(p: Permutation) -> RationalMatrix:
    n = p.n
    rows = [[0] * n for _ in range(n)]
    for j, i in enumerate(p.image):
        rows[i][j] = 1
    return RationalMatrix(tuple(map(tuple, rows)))


def intertwines(T: RationalMatrix, left: InvolutionTriple, right: InvolutionTriple) -> bool:
    """Exact check of ``T P(x_l) == P(x_r) T`` for x in a, b, c."""
    e = T.entries
    n = left.n
    if T.rows != right.n or T.cols != n:
        return False
    for xl, xr in zip(left.gens, right.gens):
        li, ri = xl.image, xr.image
        for i in range(right.n):
            row, rrow = e[i], e[ri[i]]
            for j in range(n):
                if row[li[j]] != rrow[j]:
                    return False
    return True


def intertwiner_basis(left: InvolutionTriple, right: InvolutionTriple) -> list[RationalMatrix]:
    """
    Basis of the intertwiner space, by exact elimination over the 3n^2
    homogeneous equations.  Ordered by flattened entries, descending.
    """
    if left.n != right.n:
        raise ValueError("triples act on different point counts")
    n = left.n

    def var(i, j):
        return i * n + j

    equations = []
    for xl, xr in zip(left.gens, right.gens):
        for i in range(n):
            for j in range(n):
                u, v = var(i, xl.image[j]), var(xr.image[i], j)
                if u != v:
                    equations.append({u: Fraction(1), v: Fraction(-1)})
    mats = []
    for vec in nullspace(equations, n * n):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for k, c in vec.items():
            rows[k // n][k % n] = c
        mats.append(RationalMatrix(tuple(map(tuple, rows))))
    mats.sort(key=lambda m: m.flat(), reverse=True)
    return mats


def orbital_basis(left: InvolutionTriple, right: InvolutionTriple) -> list[RationalMatrix]:
    """
    Independent construction of the same space: indicator matrices of the
    orbits of <a, b, c> on (right point, left point) pairs.
    """
    n = left.n
    label = {}
    k = 0
    for start in itertools.product(range(n), repeat=2):
        if start in label:
            continue
        label[start] = k
        stack = [start]
        while stack:
            i, j = stack.pop()
            for xl, xr in zip(left.gens, right.gens):
                nxt = (xr.image[i], xl.image[j])
                if nxt not in label:
                    label[nxt] = k
                    stack.append(nxt)
        k += 1
    mats = []
    for o in range(k):
        mats.append(RationalMatrix(tuple(tuple(int(label[i, j] == o) for j in range(n))
                                         for i in range(n))))
    return mats


def _scan_coefficients(m: int):
    # by number of nonzero terms, then support, then values in the order 1, -1, 2, -2, 3, -3
    for support_size in range(1, m + 1):
        for support in itertools.combinations(range(m), support_size):
            for vals in itertools.product(SCAN_RANGE, repeat=support_size):
                coeffs = [0] * m
                for s, v in zip(support, vals):
                    coeffs[s] = v
                yield coeffs


def find_invertible_intertwiner(basis: Sequence[RationalMatrix], seed: int = DEFAULT_RNG_SEED,
                                scan_limit: int = SCAN_LIMIT) -> Optional[RationalMatrix]:
    """
    An invertible element of span(basis), or None.

    Small integer combinations are tried first, then seeded random ones.
    The decision that none exists comes from restricting the determinant to
    random lines ``A + sB`` and evaluating at n + 1 points: a polynomial of
    degree <= n vanishing there vanishes on the whole line.  That test runs
    after a short scan prefix so hopeless cases stop early.
    """
    if not basis:
        return None
    m = len(basis)
    n = basis[0].rows
    if basis[0].rows != basis[0].cols:
        return None
    rng = random.Random(seed)
    bound = max(8, 4 * n)
    scan = _scan_coefficients(m)
    for k, coeffs in enumerate(scan):
        T = linear_combination(coeffs, basis)
        if T.det() != 0:
            return T
        if k + 1 >= min(SCAN_PREFIX, scan_limit):
            break
    line_hit = None
    for _ in range(FALLBACK_LINES):
        A = [rng.randint(-bound, bound) for _ in range(m)]
        B = [rng.randint(-bound, bound) for _ in range(m)]
        for s in range(n + 1):
            T = linear_combination([x + s * y for x, y in zip(A, B)], basis)
            if T.det() != 0:
                line_hit = T
                break
        if line_hit is not None:
            break
    if line_hit is None:
        return None
    for k, coeffs in enumerate(scan, start=SCAN_PREFIX):
        if k >= scan_limit:
            break
        T = linear_combination(coeffs, basis)
        if T.det() != 0:
            return T
    for _ in range(RANDOM_TRIALS):
        coeffs = [rng.randint(-bound, bound) for _ in range(m)]
        T = linear_combination(coeffs, basis)
        if T.det() != 0:
            return T
    return line_hit


def find_zero_one_intertwiner(basis: Sequence[RationalMatrix], limit: int = 1 << 16
                              ) -> Optional[RationalMatrix]:
    """
    Bounded search for an invertible intertwiner with entries in {0, 1}.

    Only sums of subsets of 0/1 basis matrices with disjoint supports are
    considered (the orbital basis has this form).
    """
    if not basis:
        return None
    if not all(set(m.flat()) <= {0, 1} for m in basis):
        return None
    m = len(basis)
    for k, mask in enumerate(itertools.product((0, 1), repeat=m)):
        if k >= limit:
            break
        if not any(mask):
            continue
        T = linear_combination(mask, basis)
        if set(T.flat()) <= {0, 1} and T.det() != 0:
            return T
    return None


def find_permutation_isomorphism(left: InvolutionTriple, right: InvolutionTriple
                                 ) -> Optional[Permutation]:
    """
    sigma with ``left.conjugate_by(sigma) == right``, i.e.
    ``sigma(x_l(p)) == x_r(sigma(p))`` for every generator, or None.

    Complete backtracking: each choice is propagated through all generators,
    and candidate images must agree on which generators fix them.
    """
    if left.n != right.n:
        raise ValueError("triples act on different point counts")
    n = left.n
    lg = [g.image for g in left.gens]
    rg = [g.image for g in right.gens]
    lprof = [tuple(g[p] == p for g in lg) for p in range(n)]
    rprof = [tuple(g[p] == p for g in rg) for p in range(n)]
    sigma = [-1] * n
    used = [False] * n

    def assign(p, q, trail):
        stack = [(p, q)]
        while stack:
            x, y = stack.pop()
            if sigma[x] >= 0:
                if sigma[x] != y:
                    return False
                continue
            if used[y] or lprof[x] != rprof[y]:
                return False
            sigma[x] = y
            used[y] = True
            trail.append(x)
            for gl, gr in zip(lg, rg):
                stack.append((gl[x], gr[y]))
        return True

    def undo(trail):
        for x in trail:
            used[sigma[x]] = False
            sigma[x] = -1

    def rec():
        try:
            p = sigma.index(-1)
        except ValueError:
            return True
        for q in range(n):
            if used[q] or lprof[p] != rprof[q]:
                continue
            trail: list[int] = []
            if assign(p, q, trail) and rec():
                return True
            undo(trail)
        return False

    if rec():
        s = Permutation(tuple(sigma))
        assert left.conjugate_by(s) == right
        return s
    return None


def reduced_words(max_len: int) -> list[str]:
    """Words over a, b, c with no letter repeated consecutively, by length then lexicographically."""
    words = []
    layer = [""]
    for _ in range(max_len):
        layer = [w + x for w in layer for x in GENERATORS if not w or w[-1] != x]
        words.extend(layer)
    return words


@dataclass(frozen=True)
class Fingerprint:
    max_len: int
    counts: tuple[int, ...]

    def words(self) -> list[str]:
        return reduced_words(self.max_len)


def fingerprint(t: InvolutionTriple, max_len: int) -> Fingerprint:
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    counts = []
    # extend words incrementally so each permutation costs one composition
    layer = [("", tuple(range(t.n)))]
    for _ in range(max_len):
        nxt = []
        for w, img in layer:
            for x in GENERATORS:
                if w and w[-1] == x:
                    continue
                g = t.gen(x).image
                new = tuple(g[i] for i in img)
                nxt.append((w + x, new))
                counts.append(sum(1 for i, j in enumerate(new) if i == j))
        layer = nxt
    return Fingerprint(max_len, tuple(counts))


@dataclass(frozen=True)
class TransplantablePair:
    left: InvolutionTriple
    right: InvolutionTriple
    intertwiner: RationalMatrix
    nonisomorphic: bool = True

    def __post_init__(self):
        if self.left.n != self.right.n:
            raise ValueError("size mismatch")

    def reversed(self) -> TransplantablePair:
        return TransplantablePair(self.right, self.left, inverse(self.intertwiner),
                                  self.nonisomorphic)

    def verify(self) -> bool:
        """Re-check every certificate from scratch (exact)."""
        return (intertwines(self.intertwiner, self.left, self.right)
                and self.intertwiner.det() != 0
                and find_permutation_isomorphism(self.left, self.right) is None)

    def to_json(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json(),
                "intertwiner": self.intertwiner.to_json(), "nonisomorphic": self.nonisomorphic}

    @classmethod
    def from_json(cls, data: dict) -> TransplantablePair:
        return cls(InvolutionTriple.from_json(data["left"]),
                   InvolutionTriple.from_json(data["right"]),
                   RationalMatrix.from_json(data["intertwiner"]),
                   bool(data.get("nonisomorphic", True)))


def inverse(T: RationalMatrix) -> RationalMatrix:
    n = T.rows
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(T.entries)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [x / p for x in m[k]]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return RationalMatrix(tuple(tuple(r[n:]) for r in m))


@dataclass(frozen=True)
class Verdict:
    kind: str  # "transplantable" | "isomorphic" | "inequivalent"
    pair: Optional[TransplantablePair] = None
    isomorphism: Optional[Permutation] = None
    witness: Optional[str] = None
    notes: tuple[str, ...] = field(default=())

    @property
    def transplantable(self) -> bool:
        return self.kind == "transplantable"


def check_transplantable(left: InvolutionTriple, right: InvolutionTriple,
                         seed: int = DEFAULT_RNG_SEED) -> Verdict:
    if left.n != right.n:
        raise ValueError("triples act on different point counts")
    if not (is_transitive(left) and is_transitive(right)):
        raise ValueError("non-transitive triple: the glued object would be disconnected")
    fl, fr = fingerprint(left, 6), fingerprint(right, 6)
    if fl != fr:
        k = next(i for i, (x, y) in enumerate(zip(fl.counts, fr.counts)) if x != y)
        return Verdict("inequivalent", witness=fl.words()[k])
    T = find_invertible_intertwiner(intertwiner_basis(left, right), seed=seed)
    if T is None:
        notes = ()
        if fingerprint(left, 8) == fingerprint(right, 8):
            notes = ("no invertible intertwiner found although fingerprints agree to length 8",)
        return Verdict("inequivalent", notes=notes)
    sigma = find_permutation_isomorphism(left, right)
    if sigma is not None:
        return Verdict("isomorphic", isomorphism=sigma)
    return Verdict("transplantable", pair=TransplantablePair(left, right, T))


def character_witness(left: InvolutionTriple, right: InvolutionTriple, max_len: int = 6
                      ) -> Optional[str]:
    """First word whose fixed-point counts differ, or None."""
    for w in reduced_words(max_len):
        if (len(evaluate_word(left, w).fixed_points())
                != len(evaluate_word(right, w).fixed_points())):
            return w
    return None


__all__ = [
    "Fingerprint", "TransplantablePair", "Verdict", "check_transplantable",
    "character_witness", "find_invertible_intertwiner", "find_permutation_isomorphism",
    "find_zero_one_intertwiner", "fingerprint", "intertwiner_basis", "intertwines",
    "inverse", "orbital_basis", "permutation_matrix", "reduced_words", "determinant",
]

import random
import time

import pytest

from quiltforge.perm import InvolutionTriple, Permutation
from quiltforge.seeds import catalog_quilts


def random_involution(n, rng, fixed=None):
    pts = list(range(n))
    rng.shuffle(pts)
    if fixed is None:
        fixed = rng.randint(0, n)
    img = list(range(n))
    movers = pts[fixed:] if (n - fixed) % 2 == 0 else pts[fixed + 1:]
    for i in range(0, len(movers) - 1, 2):
        x, y = movers[i], movers[i + 1]
        img[x], img[y] = y, x
    return Permutation(tuple(img))


def random_triple(n, rng):
    return InvolutionTriple(*(random_involution(n, rng) for _ in range(3)))


def random_permutation(n, rng):
    img = list(range(n))
    rng.shuffle(img)
    return Permutation(tuple(img))


CATALOG_TIMING = {}


@pytest.fixture(scope="session")
def quilts():
    """The whole catalog, built once; the build time is kept in CATALOG_TIMING."""
    t0 = time.perf_counter()
    out = catalog_quilts()
    CATALOG_TIMING["seconds"] = time.perf_counter() - t0
    return out


@pytest.fixture(scope="session")
def quilts_by_name(quilts):
    return {q.name: q for q in quilts}


@pytest.fixture
def rng():
    return random.Random(20240607)

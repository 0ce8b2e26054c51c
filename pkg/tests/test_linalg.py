import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiltforge.linalg import RationalMatrix, determinant, linear_combination, nullspace

small = st.integers(-5, 5)


@settings(max_examples=80)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_determinant_agrees_with_numpy(rows):
    exact = determinant(rows)
    assert abs(float(exact) - np.linalg.det(np.array(rows, dtype=float))) < 1e-6 * max(1, abs(exact))


def test_determinant_with_fractions():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]
    assert determinant(m) == Fraction(1, 10) - Fraction(1, 12)


def test_matrix_json_round_trip():
    m = RationalMatrix(((Fraction(1, 2), -3), (0, Fraction(7, 5))))
    data = m.to_json()
    assert data == [["1/2", "-3/1"], ["0/1", "7/5"]]
    assert RationalMatrix.from_json(data) == m


def test_nullspace_solves_homogeneous_system():
    rng = random.Random(5)
    for _ in range(30):
        nv = rng.randint(1, 8)
        eqs = [{rng.randrange(nv): Fraction(rng.randint(-3, 3)) for _ in range(3)}
               for _ in range(rng.randint(0, nv))]
        basis = nullspace(eqs, nv)
        a = np.array([[float(e.get(j, 0)) for j in range(nv)] for e in eqs]).reshape(len(eqs), nv)
        rank = np.linalg.matrix_rank(a) if eqs else 0
        assert len(basis) == nv - rank
        for v in basis:
            for e in eqs:
                assert sum(c * v.get(j, 0) for j, c in e.items()) == 0


def test_linear_combination_and_algebra():
    i2 = RationalMatrix.identity(2)
    s = RationalMatrix(((0, 1), (1, 0)))
    m = linear_combination([2, 3], [i2, s])
    assert m == RationalMatrix(((2, 3), (3, 2)))
    assert (m @ i2) == m
    assert m.det() == -5
    assert (m - m).is_zero()
    with pytest.raises(ValueError):
        RationalMatrix(((1, 2), (3,)))

from fractions import Fraction

import pytest

from cblocks.subdivision import affine_dependencies, affine_dimension, lower_cells, nullspace, primitive, rank, rref

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_rref_and_rank():
    rows = [[Fraction(x) for x in r] for r in ([1, 2, 3], [2, 4, 6], [1, 0, 1])]
    m, pivots = rref(rows)
    assert pivots == [0, 1]
    assert rank(rows) == 2
    assert rank([]) == 0


def test_nullspace_is_kernel():
    rows = [[Fraction(x) for x in r] for r in ([1, 2, 3], [0, 1, 1])]
    (v,) = nullspace(rows)
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_primitive():
    assert primitive([Fraction(1, 2), Fraction(-1, 3)]) == [3, -2]
    assert primitive([Fraction(-2), Fraction(4)]) == [1, -2]
    assert primitive([0, 0]) == [0, 0]


def test_square_dependency():
    assert affine_dimension(SQUARE) == 2
    assert affine_dependencies(SQUARE) == [[1, -1, -1, 1]]


@pytest.mark.parametrize(
    "heights,cells",
    [
        ([0, 0, 0, 1], [(0, 1, 2), (1, 2, 3)]),  # lift one corner: cut along the anti-diagonal
        ([1, 0, 0, 0], [(0, 1, 2), (1, 2, 3)]),
        ([0, 1, 1, 0], [(0, 1, 3), (0, 2, 3)]),
        ([0, 0, 0, 0], [(0, 1, 2, 3)]),  # flat lift: the square stays whole
    ],
)
def test_square_subdivisions(heights, cells):
    assert lower_cells(SQUARE, heights) == cells


def test_interior_point_pulled_down():
    pts = [(0, 0), (2, 0), (0, 2), (1, 1)]
    # (1,1) sits on the hypotenuse; lowering it splits the triangle in two
    assert lower_cells(pts, [0, 0, 0, -1]) == [(0, 1, 3), (0, 2, 3)]
    assert lower_cells(pts, [0, 0, 0, 1]) == [(0, 1, 2)]


def test_rejects_flat_configuration():
    with pytest.raises(ValueError):
        lower_cells([(0, 0), (1, 1), (2, 2)], [0, 0, 0])

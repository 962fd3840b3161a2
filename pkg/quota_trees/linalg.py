"""Exact determinants and inverses over integers and rationals."""
from fractions import Fraction
from typing import List, Optional, Sequence, Union

Number = Union[int, Fraction]


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """
    Fraction-free determinant of an integer matrix.

    Every intermediate division is exact, so entries stay integers of
    moderate size.

    :param matrix: square integer matrix.
    :return: determinant, 1 for the empty matrix.
    """
    size = len(matrix)
    if size == 0:
        return 1
    rows = [list(row) for row in matrix]
    sign = 1
    previous = 1
    for step in range(size - 1):
        if rows[step][step] == 0:
            swap = next(
                (index for index in range(step + 1, size) if rows[index][step] != 0),
                None,
            )
            if swap is None:
                return 0
            rows[step], rows[swap] = rows[swap], rows[step]
            sign = -sign
        pivot = rows[step][step]
        for row in range(step + 1, size):
            for column in range(step + 1, size):
                rows[row][column] = (
                    rows[row][column] * pivot - rows[row][step] * rows[step][column]
                ) // previous
        previous = pivot
    return sign * rows[size - 1][size - 1]


def fraction_determinant(matrix: Sequence[Sequence[Number]]) -> Fraction:
    """
    Determinant by Gaussian elimination over the rationals.

    :param matrix: square matrix of ints or Fractions.
    :return: exact determinant.
    """
    rows = [[Fraction(entry) for entry in row] for row in matrix]
    size = len(rows)
    result = Fraction(1)
    for step in range(size):
        pivot_row = next(
            (index for index in range(step, size) if rows[index][step] != 0),
            None,
        )
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != step:
            rows[step], rows[pivot_row] = rows[pivot_row], rows[step]
            result = -result
        pivot = rows[step][step]
        result *= pivot
        for row in range(step + 1, size):
            factor = rows[row][step] / pivot
            if factor:
                for column in range(step, size):
                    rows[row][column] -= factor * rows[step][column]
    return result


def determinant(matrix: Sequence[Sequence[Number]]) -> Fraction:
    """
    Exact determinant, fraction free when every entry is an integer.

    :param matrix: square matrix.
    :return: determinant as a Fraction.
    """
    if all(isinstance(entry, int) for row in matrix for entry in row):
        return Fraction(bareiss_determinant(matrix))  # type: ignore
    return fraction_determinant(matrix)


def inverse(matrix: Sequence[Sequence[Number]]) -> Optional[List[List[Fraction]]]:
    """
    Gauss-Jordan inverse over the rationals.

    :param matrix: square matrix.
    :return: the inverse, or None for a singular matrix.
    """
    size = len(matrix)
    rows = [
        [Fraction(entry) for entry in row] + [Fraction(int(index == column)) for column in range(size)]  # noqa: E501
        for index, row in enumerate(matrix)
    ]
    for step in range(size):
        pivot_row = next(
            (index for index in range(step, size) if rows[index][step] != 0),
            None,
        )
        if pivot_row is None:
            return None
        rows[step], rows[pivot_row] = rows[pivot_row], rows[step]
        pivot = rows[step][step]
        rows[step] = [entry / pivot for entry in rows[step]]
        for row in range(size):
            factor = rows[row][step]
            if row != step and factor:
                rows[row] = [
                    entry - factor * lead for entry, lead in zip(rows[row], rows[step])
                ]
    return [row[size:] for row in rows]

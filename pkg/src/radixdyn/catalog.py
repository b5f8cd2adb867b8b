"""Named example systems used throughout the tests and the CLI."""

from __future__ import annotations

from .system import DigitSystem, make_system, one_dim

CROSS_MATRIX = ((1, 2), (-2, 1))


def shark() -> DigitSystem:
    """Jordan block (2 1; 0 2): a parallelogram tile with a toothed edge."""
    return make_system([[2, 1], [0, 2]], [[0, 0], [1, 0], [1, 1], [0, 1]])


def twin_dragon() -> DigitSystem:
    return make_system([[1, -1], [1, 1]], [[0, 0], [1, 0]])


def unit_square() -> DigitSystem:
    return make_system([[0, 1], [4, 0]], [[0, k] for k in range(4)])


def red_cross() -> DigitSystem:
    return make_system(CROSS_MATRIX, [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]])


def cloud_digits(p: int, q: int) -> list[list[int]]:
    """{0, +-(1-p, 2p), +-(3q, 1-q)}, the image of the cross digits under (1-p 3q; 2p 1-q)."""
    a = [1 - p, 2 * p]
    b = [3 * q, 1 - q]
    return [[0, 0], a, [-a[0], -a[1]], b, [-b[0], -b[1]]]


def cloud(p: int, q: int) -> DigitSystem:
    return make_system(CROSS_MATRIX, cloud_digits(p, q))


def cloud_three() -> DigitSystem:
    return cloud(1, 0)


def cloud_five() -> DigitSystem:
    return cloud(0, 1)


def cloud_nine() -> DigitSystem:
    return cloud(1, 1)


def saddle() -> DigitSystem:
    """(3 1; 1 1) has eigenvalues 2 +- sqrt 2, one of them inside the unit disk."""
    return make_system([[3, 1], [1, 1]], [[0, 0], [0, 1]])


def binary(p: int) -> DigitSystem:
    return one_dim(2, [0, p])


NAMED = {
    "shark": shark,
    "twin-dragon": twin_dragon,
    "unit-square": unit_square,
    "red-cross": red_cross,
    "cloud-three": cloud_three,
    "cloud-five": cloud_five,
    "cloud-nine": cloud_nine,
    "saddle": saddle,
}

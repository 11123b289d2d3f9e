"""The four worked systems and the solutions published for them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import LinearSystem, as_vector


@dataclass(frozen=True)
class Fixture:
    id: int
    title: str
    system: LinearSystem
    expected: np.ndarray
    # iteration count the source reports for each solver; informational only
    reported_iterations: dict


def _fixture(id, title, A, b, expected, reported):
    return Fixture(id, title, LinearSystem(np.array(A, float), np.array(b, float)), as_vector(expected), reported)


FIXTURES = {
    1: _fixture(
        1,
        "exactly determined 4x4",
        [[10, -2, -1, -1], [-2, 10, -1, -1], [-1, -1, 10, -2], [-1, -1, -2, 10]],
        [3, 15, 27, -9],
        [1, 2, 3, 0],
        {"fcg": 3, "gs": 7, "jacobi": 12},
    ),
    2: _fixture(
        2,
        "exactly determined 3x3",
        [[20, 1, -2], [3, 20, -1], [2, -3, 20]],
        [17, -18, 25],
        [1, -1, 1],
        {"fcg": 4, "jacobi": 6},
    ),
    3: _fixture(
        3,
        "underdetermined 5x9",
        [
            [6, 2, 4, -9, -12, 2, -12, 0, 1],
            [8, -10, 1, 8, -22, 0, -11, -11, 7],
            [9, -7, -6, 6, 10, -10, 15, -13, -12],
            [-10, 11, -6, -8, -5, -9, 1, -3, -5],
            [2, -1, 4, -3, 3, -4, -12, 10, -3],
        ],
        [-12, -13, 9, 0, -6],
        # as published (4 decimals)
        [-0.1886, 0.4444, -0.1066, 0.1450, 0.3418, -0.0678, 0.4396, -0.0186, 0.0060],
        {"fcg": 4},
    ),
    4: _fixture(
        4,
        "overdetermined 5x3",
        [[1, 2, 3], [3, 2, 1], [1, 1, 1], [2, 3, -1], [1, 1, 0]],
        [14, 10, 6, 5, 3],
        [1, 2, 3],
        {"fcg": 2},
    ),
}


def get_fixture(id):
    try:
        return FIXTURES[int(id)]
    except (KeyError, ValueError):
        raise KeyError(f"unknown fixture {id!r}; choose from {sorted(FIXTURES)}") from None

"""
Small matrices over the field with three elements.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Tuple

import numpy as np
from sympy import Matrix, Poly, symbols

_X = symbols("x")


@dataclass(frozen=True)
class Matrix2F3:
    """2x2 matrix over F3, row-major entries reduced mod 3."""
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, getattr(self, name) % 3)

    @classmethod
    def from_rows(cls, rows) -> "Matrix2F3":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % 3

    @property
    def is_invertible(self) -> bool:
        return self.det != 0

    def __add__(self, other: "Matrix2F3") -> "Matrix2F3":
        return Matrix2F3(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Matrix2F3") -> "Matrix2F3":
        return Matrix2F3(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "Matrix2F3":
        return Matrix2F3(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: "Matrix2F3") -> "Matrix2F3":
        return Matrix2F3(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, vector: Tuple[int, int]) -> Tuple[int, int]:
        """Matrix times column vector."""
        x, y = vector
        return ((self.a * x + self.b * y) % 3, (self.c * x + self.d * y) % 3)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.int64)

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Matrix2F3(1, 0, 0, 1)
M1 = Matrix2F3(0, 1, 1, 1)
M2 = Matrix2F3(0, 2, 1, 2)


def shear(lam: int) -> Matrix2F3:
    """C(lambda) = [[1, lambda], [0, 1]]."""
    return Matrix2F3(1, lam, 0, 1)


def pair_choice(lam: int) -> Matrix2F3:
    """
    M1 for lambda in {0, 2}, M2 for lambda = 1.

    The choice makes M + I, M - C(lambda) and M + I - C(lambda) invertible.
    """
    lam %= 3
    chosen = M2 if lam == 1 else M1
    cl = shear(lam)
    for candidate in (chosen + IDENTITY, chosen - cl, chosen + IDENTITY - cl):
        if not candidate.is_invertible:
            raise ArithmeticError(f"pair choice for lambda={lam} gives a singular matrix {candidate}")
    return chosen


@lru_cache(maxsize=None)
def root_free_polynomial(degree: int) -> Tuple[int, ...]:
    """
    Coefficients (a0, ..., a_{d-1}) of the first monic irreducible polynomial of the given degree over F3.

    Irreducible polynomials of degree >= 2 have no roots in F3.
    """
    if degree < 2:
        raise ValueError("degree must be at least 2")
    for coeffs in product(range(3), repeat=degree):
        dense = [1] + list(reversed(coeffs))
        if Poly(dense, _X, modulus=3).is_irreducible:
            return tuple(coeffs)
    raise ArithmeticError(f"no irreducible polynomial of degree {degree} over F3")


def companion_matrix(degree: int) -> np.ndarray:
    """Companion matrix of root_free_polynomial(degree); none of 0, 1, -1 is an eigenvalue."""
    coeffs = root_free_polynomial(degree)
    matrix = np.zeros((degree, degree), dtype=np.int64)
    matrix[1:, :-1] = np.eye(degree - 1, dtype=np.int64)
    matrix[:, -1] = [(-a) % 3 for a in coeffs]
    for shift in (0, 1, -1):
        if Matrix(matrix + shift * np.eye(degree, dtype=np.int64)).det() % 3 == 0:
            raise ArithmeticError(f"companion matrix of degree {degree} has eigenvalue {-shift % 3}")
    return matrix

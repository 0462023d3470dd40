"""Affine maps x -> d + D x of Q^n (elements of Aff(R^n) with rational data)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionError, SingularMatrixError
from .linalg import Matrix, Vector, vadd, vec, vneg


@dataclass(frozen=True)
class AffineMap:
    translation: Vector
    linear: Matrix

    def __post_init__(self):
        object.__setattr__(self, "translation", vec(self.translation))
        if not isinstance(self.linear, Matrix):
            object.__setattr__(self, "linear", Matrix(self.linear))
        n = len(self.translation)
        if self.linear.shape != (n, n):
            raise DimensionError(f"translation of length {n} with {self.linear.shape} linear part")

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(vec([0] * n), Matrix.identity(n))

    @classmethod
    def translation_by(cls, t: Sequence) -> "AffineMap":
        t = vec(t)
        return cls(t, Matrix.identity(len(t)))

    @classmethod
    def linear_map(cls, M: Matrix) -> "AffineMap":
        return cls(vec([0] * M.rows), M)

    @property
    def dim(self) -> int:
        return len(self.translation)

    def is_invertible(self) -> bool:
        return self.linear.det() != 0

    def is_translation(self) -> bool:
        return self.linear == Matrix.identity(self.dim)

    def is_linear(self) -> bool:
        return all(x == 0 for x in self.translation)

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        return compose(self, other)

    def __call__(self, x: Sequence) -> Vector:
        return apply(self, x)

    def inverse(self) -> "AffineMap":
        return inverse(self)

    def conjugate(self, g: "AffineMap") -> "AffineMap":
        """self . g . self^-1"""
        return compose(compose(self, g), inverse(self))


def compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """(d1, D1) o (d2, D2) = (d1 + D1 d2, D1 D2)."""
    if f.dim != g.dim:
        raise DimensionError(f"cannot compose maps of dimension {f.dim} and {g.dim}")
    return AffineMap(vadd(f.translation, f.linear @ g.translation), f.linear @ g.linear)


def inverse(f: AffineMap) -> AffineMap:
    try:
        inv = f.linear.inverse()
    except SingularMatrixError:
        raise SingularMatrixError("affine map has a singular linear part") from None
    return AffineMap(vneg(inv @ f.translation), inv)


def apply(f: AffineMap, x: Sequence) -> Vector:
    x = vec(x)
    if len(x) != f.dim:
        raise DimensionError(f"point of length {len(x)} for a map of dimension {f.dim}")
    return vadd(f.translation, f.linear @ x)


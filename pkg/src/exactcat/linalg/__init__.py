"""Exact linear algebra over GF(p) and Q."""

from .field import GF, QQ, Field, FieldScalar
from .matrix import KERNEL, IncrementalSpan, Matrix, column_echelon, kernel_image, solve_affine, solve_many

__all__ = [
    "GF", "QQ", "Field", "FieldScalar", "KERNEL", "IncrementalSpan", "Matrix",
    "column_echelon", "kernel_image", "solve_affine", "solve_many",
]

"""Nodal rational curves and descent data for bundles on them.

A nodal curve here is one copy of P^1 with ``n`` pairs of points glued
to nodes.  A bundle on it is recorded by its pullback to P^1 (a splitting
type) plus, for each node ``p'_i ~ p''_i``, an invertible matrix ``rho_i``
taking the fiber at ``p'_i`` to the fiber at ``p''_i``.

Fibers of O(a) at a point are trivialized by evaluating forms at the
point's normalized coordinates (first nonzero coordinate equal to 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ExactCatError
from .linalg import Field, Matrix


class NonInvertibleGluing(ExactCatError, ValueError):
    pass


class RankMismatch(ExactCatError, ValueError):
    pass


def normalize_point(F: Field, pt) -> tuple:
    s, t = F(pt[0]), F(pt[1])
    if s:
        return (F.one, F.div(t, s))
    if t:
        return (F.zero, F.one)
    raise ValueError("[0:0] is not a point of P^1")


@dataclass(frozen=True)
class NodalCurve:
    """P^1 with the points of each pair in ``nodes`` identified."""

    field: Field
    nodes: tuple = ()

    def __post_init__(self):
        F = self.field
        nodes = tuple((normalize_point(F, a), normalize_point(F, b)) for a, b in self.nodes)
        pts = [p for pair in nodes for p in pair]
        if len(set(pts)) != len(pts):
            raise ValueError("node points must be pairwise distinct")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @classmethod
    def nodal_cubic(cls, field: Field) -> "NodalCurve":
        """One node, gluing [1:0] to [0:1]."""
        return cls(field, (((1, 0), (0, 1)),))

    @classmethod
    def two_nodes(cls, field: Field) -> "NodalCurve":
        """Two nodes: [1:0] ~ [0:1] and [1:1] ~ [1:2]."""
        if field.is_finite and field.p < 3:
            raise ValueError(f"two nodes need four distinct points of P^1; "
                             f"GF({field.p}) has only {field.p + 1}")
        return cls(field, (((1, 0), (0, 1)), ((1, 1), (1, 2))))

    def to_json(self):
        F = self.field
        return [[[F.to_json(c) for c in p] for p in pair] for pair in self.nodes]


def eval_form(F: Field, coeffs: Sequence, pt) -> object:
    """Value of the binary form with the given coefficients at ``pt``."""
    d = len(coeffs) - 1
    s, t = pt
    acc = F.zero
    for k, c in enumerate(coeffs):
        if c:
            acc = F.add(acc, F.mul(c, F.mul(_pw(F, s, d - k), _pw(F, t, k))))
    return acc


def _pw(F, v, e):
    if e == 0:
        return F.one
    return pow(v, e, F.p) if F.p else Fraction(v) ** e


def fiber_matrix(F: Field, data, rows: int, cols: int, pt) -> Matrix:
    """Evaluate a P^1 morphism (array of forms) at a point."""
    return Matrix.raw(F, [[eval_form(F, e, pt) if e else F.zero for e in row] for row in data], rows, cols)


@dataclass(frozen=True)
class NodalBundle:
    """Descent data: splitting type upstairs plus one gluing matrix per node."""

    curve: NodalCurve
    upstairs: tuple
    gluings: tuple

    def __post_init__(self):
        up = tuple(int(a) for a in self.upstairs)
        if list(up) != sorted(up, reverse=True):
            raise ValueError("upstairs splitting type must be sorted descending")
        object.__setattr__(self, "upstairs", up)
        r = len(up)
        if len(self.gluings) != self.curve.n_nodes:
            raise RankMismatch(f"need {self.curve.n_nodes} gluing matrices, got {len(self.gluings)}")
        for i, g in enumerate(self.gluings):
            if g.shape != (r, r):
                raise RankMismatch(f"gluing {i} has shape {g.shape}, bundle rank is {r}")
            if not g.is_invertible():
                raise NonInvertibleGluing(f"gluing matrix {i} is not invertible")

    @property
    def rank(self) -> int:
        return len(self.upstairs)

    @property
    def degree(self) -> int:
        return sum(self.upstairs)

    def __repr__(self):
        up = "+".join(f"O({a})" for a in self.upstairs) or "0"
        return f"{up}|{[g.tolist() for g in self.gluings]}"


@dataclass(frozen=True)
class LineBundleClass:
    degree: int
    scalars: tuple

    def __post_init__(self):
        if any(not s for s in self.scalars):
            raise NonInvertibleGluing("gluing scalars must be nonzero")


def descend(curve: NodalCurve, upstairs: Sequence[int], gluings: Sequence) -> NodalBundle:
    """Freeze descent data into a bundle on ``curve``.

    ``upstairs`` may be unsorted only if no gluing depends on the order;
    gluing matrices are taken in the order of ``upstairs`` as given, and
    reordered together with it.
    """
    F = curve.field
    up = [int(a) for a in upstairs]
    order = sorted(range(len(up)), key=lambda i: -up[i])
    mats = []
    for g in gluings:
        m = g if isinstance(g, Matrix) else Matrix(F, g, len(g), len(g[0]) if g else 0)
        if m.shape != (len(up), len(up)):
            raise RankMismatch(f"gluing of shape {m.shape} for rank {len(up)}")
        mats.append(m.submatrix(order, order))
    return NodalBundle(curve, tuple(up[i] for i in order), tuple(mats))


def pullback(v: NodalBundle):
    """``(upstairs, gluings)`` of a bundle."""
    return v.upstairs, v.gluings


def line_bundle(curve: NodalCurve, degree: int, scalars: Sequence) -> NodalBundle:
    F = curve.field
    if len(scalars) != curve.n_nodes:
        raise RankMismatch(f"need {curve.n_nodes} gluing scalars")
    return NodalBundle(curve, (int(degree),), tuple(Matrix(F, [[s]], 1, 1) for s in scalars))


def trivial_bundle(curve: NodalCurve, upstairs: Sequence[int]) -> NodalBundle:
    up = tuple(sorted((int(a) for a in upstairs), reverse=True))
    eye = Matrix.identity(curve.field, len(up))
    return NodalBundle(curve, up, (eye,) * curve.n_nodes)

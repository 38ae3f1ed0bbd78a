"""Numerical invariants and line-bundle classification on curves."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .bundles import LineBundleClass, NodalBundle, NodalCurve, eval_form, line_bundle
from .categories import VectNodal
from .categories.base import Obj
from .linalg import Matrix


def rank_degree_slope(v):
    """``(rank, degree, slope)`` of a bundle on P^1 or on a nodal curve.

    Accepts a backend object, a :class:`NodalBundle` or a splitting type.
    """
    if isinstance(v, Obj):
        v = v.key
    up = v.upstairs if isinstance(v, NodalBundle) else tuple(v)
    if not up:
        raise ValueError("the zero bundle has no slope")
    r, d = len(up), sum(up)
    return r, d, Fraction(d, r)


@dataclass
class Sections:
    dim: int
    basis: list  # each section: tuple of coefficient tuples, one form per summand
    upstairs: tuple


def global_sections(v: NodalBundle) -> Sections:
    """H^0 as the kernel of ``s -> s(p'') - rho s(p')`` on sections upstairs."""
    F = v.curve.field
    up = v.upstairs
    sizes = [a + 1 if a >= 0 else 0 for a in up]
    n = sum(sizes)
    r = len(up)
    cols = []
    for k in range(n):
        forms = []
        pos = 0
        for sz in sizes:
            forms.append(tuple(F.one if pos + t == k else F.zero for t in range(sz)))
            pos += sz
        col = []
        for (p1, p2), rho in zip(v.curve.nodes, v.gluings):
            at1 = [eval_form(F, f, p1) if f else F.zero for f in forms]
            at2 = [eval_form(F, f, p2) if f else F.zero for f in forms]
            moved = rho.apply(at1)
            col += [F.sub(a, b) for a, b in zip(at2, moved)]
        cols.append(col)
    rows = r * v.curve.n_nodes
    if n == 0:
        return Sections(0, [], up)
    if rows == 0:
        K = Matrix.identity(F, n)
    else:
        K = Matrix.from_columns(F, cols, rows).kernel()
    basis = []
    for c in K.columns():
        forms, pos = [], 0
        for sz in sizes:
            forms.append(tuple(c[pos:pos + sz]))
            pos += sz
        basis.append(tuple(forms))
    return Sections(len(basis), basis, up)


def _as_bundle(curve, c):
    return c if isinstance(c, NodalBundle) else line_bundle(curve, c.degree, c.scalars)


def line_bundle_iso(curve: NodalCurve, a, b) -> bool:
    """Decide ``a ~= b`` by searching the hom space for an isomorphism."""
    A, B = _as_bundle(curve, a), _as_bundle(curve, b)
    if A.rank != 1 or B.rank != 1:
        raise ValueError("line_bundle_iso compares line bundles")
    if A.degree != B.degree:
        return False
    N = VectNodal(curve.field, curve)
    X, Y = N.obj(A), N.obj(B)
    basis = N.hom_basis(X, Y)
    if not basis:
        return False
    # equal degrees: any nonzero map of line bundles is an isomorphism
    return N.classify(basis[0]).is_iso


def enumerate_line_bundles(curve: NodalCurve, degree: int) -> list:
    F = curve.field
    return [LineBundleClass(degree, tuple(s))
            for s in itertools.product(list(F.units()), repeat=curve.n_nodes)]


def pic_classes(curve: NodalCurve, degree: int) -> list:
    """Representatives of the isomorphism classes of degree-``degree`` line bundles."""
    if not curve.field.is_finite:
        raise ValueError("pic_classes needs a finite field")
    reps: list = []
    for c in enumerate_line_bundles(curve, degree):
        if not any(line_bundle_iso(curve, c, r) for r in reps):
            reps.append(c)
    return reps


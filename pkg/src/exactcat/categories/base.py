"""Objects, morphisms and the backend protocol shared by every exact category.

A backend realizes an additive category whose hom sets are finite
dimensional over the base field, together with its exact structure
(which monos/epis are admissible).  Backends work on *keys* (hashable
object descriptors) and *data* (native morphism payloads); :class:`Obj`
and :class:`Morphism` are the tagged user-facing values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Optional, Sequence

from ..errors import BackendMismatch, ExactCatError, NotAdmissible, NotEpi  # noqa: F401
from ..linalg import Field, Matrix, solve_many
from ..linalg.matrix import kernel_image


@dataclass(frozen=True)
class Obj:
    backend: "Backend"
    key: Any

    def __repr__(self):
        return self.backend.describe(self.key)

    @property
    def is_zero(self) -> bool:
        return self.backend.is_zero_key(self.key)

    @property
    def size(self) -> int:
        return self.backend.size(self.key)

    def identity(self) -> "Morphism":
        return self.backend.identity(self)


class Morphism:
    """A morphism ``source -> target`` with native payload ``data``."""

    __slots__ = ("source", "target", "data")

    def __init__(self, source: Obj, target: Obj, data):
        if source.backend != target.backend:
            raise BackendMismatch("source and target live in different backends")
        self.source = source
        self.target = target
        self.data = data

    @property
    def backend(self) -> "Backend":
        return self.source.backend

    def _check_hom(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError(f"morphisms in different hom sets: {self} vs {other}")

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """``self @ other`` is ``self`` after ``other``."""
        return self.backend.compose(self, other)

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check_hom(other)
        b = self.backend
        return Morphism(self.source, self.target, b._add(self.data, other.data, self.source.key, self.target.key))

    def __neg__(self) -> "Morphism":
        return self.scale(-1)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, c) -> "Morphism":
        b = self.backend
        return Morphism(self.source, self.target, b._scale(b.field(c), self.data, self.source.key, self.target.key))

    def __rmul__(self, c) -> "Morphism":
        return self.scale(c)

    def flat(self) -> list:
        return self.backend._flatten(self.data, self.source.key, self.target.key)

    def coords(self) -> list:
        return self.backend.coords(self)

    def is_zero(self) -> bool:
        return not any(self.flat())

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.flat() == other.flat())

    def __hash__(self):
        return hash((self.source, self.target, tuple(self.flat())))

    def __repr__(self):
        return f"<{self.source} -> {self.target}: {self.backend.describe_data(self)}>"


@dataclass
class Classification:
    """Outcome of :meth:`Backend.classify` with its witness."""

    kind: str  # "iso" | "admissible-mono" | "admissible-epi" | "neither"
    morphism: Morphism
    inverse: Optional[Morphism] = None
    cokernel: Optional[Morphism] = None  # admissible epi target -> cokernel
    kernel: Optional[Morphism] = None  # admissible mono kernel -> source
    obstruction: Optional[str] = None

    @property
    def is_admissible_mono(self) -> bool:
        return self.kind in ("iso", "admissible-mono")

    @property
    def is_admissible_epi(self) -> bool:
        return self.kind in ("iso", "admissible-epi")

    @property
    def is_iso(self) -> bool:
        return self.kind == "iso"


@dataclass
class AdmissibleFactorization:
    epi: Morphism
    mono: Morphism

    @property
    def mid(self) -> Obj:
        return self.epi.target


@dataclass
class Equation:
    """``sum(left @ h[k] @ right for k, left, right in terms) == rhs`` in hom(src, tgt)."""

    src: Obj
    tgt: Obj
    terms: list
    rhs: Optional[Morphism] = None


@dataclass(frozen=True)
class Backend:
    """Protocol every exact-category backend implements.

    Subclasses provide the key-level primitives (``_hom_basis_data``,
    ``_compose``, ``_flatten``, ...) and the exact structure (``classify``,
    ``kernel``, ``cokernel``).  Everything else is generic linear algebra
    over hom spaces.
    """

    field: Field
    name = "abstract"

    # -- primitives (override) ---------------------------------------------
    def describe(self, key) -> str:
        return f"{self.name}({key})"

    def describe_data(self, f: Morphism) -> str:
        return repr(f.data)

    def zero_key(self):
        raise NotImplementedError

    def is_zero_key(self, key) -> bool:
        return key == self.zero_key()

    def size(self, key) -> int:
        raise NotImplementedError

    def _hom_basis_data(self, xk, yk) -> list:
        raise NotImplementedError

    def _compose(self, gd, fd, xk, yk, zk):
        raise NotImplementedError

    def _add(self, d1, d2, xk, yk):
        raise NotImplementedError

    def _scale(self, c, d, xk, yk):
        raise NotImplementedError

    def _zero(self, xk, yk):
        raise NotImplementedError

    def _identity(self, xk):
        raise NotImplementedError

    def _flatten(self, d, xk, yk) -> list:
        raise NotImplementedError

    def _direct_sum(self, keys: Sequence):
        """``(sum_key, injections_data, projections_data)``."""
        raise NotImplementedError

    def classify(self, f: Morphism) -> Classification:
        raise NotImplementedError

    def kernel(self, f: Morphism) -> Morphism:
        """Inclusion of the kernel; raises :class:`NotAdmissible` if it is not in the category."""
        raise NotImplementedError

    def cokernel(self, f: Morphism) -> Morphism:
        """Projection onto the cokernel of an admissible monomorphism."""
        raise NotImplementedError

    # -- objects and morphisms ---------------------------------------------
    def obj(self, key) -> Obj:
        return Obj(self, key)

    def zero_object(self) -> Obj:
        return Obj(self, self.zero_key())

    def morphism(self, x: Obj, y: Obj, data) -> Morphism:
        return Morphism(x, y, data)

    def identity(self, x: Obj) -> Morphism:
        return Morphism(x, x, self._identity(x.key))

    def zero(self, x: Obj, y: Obj) -> Morphism:
        return Morphism(x, y, self._zero(x.key, y.key))

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise ValueError(f"cannot compose {g} after {f}")
        return Morphism(f.source, g.target, self._compose(g.data, f.data, f.source.key, f.target.key, g.target.key))

    def direct_sum(self, objs: Sequence[Obj]):
        """``(S, injections, projections)`` for the biproduct of ``objs``."""
        key, inj, proj = self._direct_sum([o.key for o in objs])
        S = Obj(self, key)
        return (S, [Morphism(o, S, d) for o, d in zip(objs, inj)],
                [Morphism(S, o, d) for o, d in zip(objs, proj)])

    def flat_len(self, x: Obj, y: Obj) -> int:
        return len(self._flatten(self._zero(x.key, y.key), x.key, y.key))

    # -- hom spaces ----------------------------------------------------------
    def hom_basis(self, x: Obj, y: Obj) -> list:
        if x.backend != self or y.backend != self:
            raise BackendMismatch(f"hom_basis({x}, {y}) asked of {self.name}")
        return [Morphism(x, y, d) for d in _cached_basis(self, x.key, y.key)]

    def hom_dim(self, x: Obj, y: Obj) -> int:
        return len(_cached_basis(self, x.key, y.key))

    def coords(self, f: Morphism) -> list:
        basis = self.hom_basis(f.source, f.target)
        n = self.flat_len(f.source, f.target)
        A = Matrix.from_columns(self.field, [b.flat() for b in basis], n)
        x = solve_many(A, f.flat())
        if x is None:
            raise ValueError(f"{f} is not in the hom space")
        return x

    def from_coords(self, x: Obj, y: Obj, coords: Sequence) -> Morphism:
        return self.combine(self.hom_basis(x, y), coords, x, y)

    def combine(self, basis: Sequence[Morphism], coeffs: Sequence, x: Obj, y: Obj) -> Morphism:
        d = self._zero(x.key, y.key)
        for b, c in zip(basis, coeffs):
            if c:
                d = self._add(d, self._scale(c, b.data, x.key, y.key), x.key, y.key)
        return Morphism(x, y, d)

    # -- generic linear solving ---------------------------------------------
    def solve(self, unknowns: Sequence, equations: Sequence[Equation], nullspace: bool = False):
        """Solve a linear system whose unknowns are morphisms.

        ``unknowns`` is a list of ``(source, target)`` pairs.  Returns the
        list of solution morphisms (or ``None``); with ``nullspace=True``
        returns ``(solution, [homogeneous solutions...])``.
        """
        F = self.field
        bases = [self.hom_basis(x, y) for x, y in unknowns]
        offsets = []
        total = 0
        for eq in equations:
            offsets.append(total)
            total += self.flat_len(eq.src, eq.tgt)
        columns = []
        for k, basis in enumerate(bases):
            for b in basis:
                col = [F.zero] * total
                for eq, off in zip(equations, offsets):
                    acc = None
                    for idx, left, right in eq.terms:
                        if idx != k:
                            continue
                        m = b
                        if right is not None:
                            m = m @ right
                        if left is not None:
                            m = left @ m
                        acc = m if acc is None else acc + m
                    if acc is not None:
                        col[off:off + len(acc.flat())] = acc.flat()
                columns.append(col)
        rhs = [F.zero] * total
        for eq, off in zip(equations, offsets):
            if eq.rhs is not None:
                v = eq.rhs.flat()
                rhs[off:off + len(v)] = v
        A = Matrix.from_columns(F, columns, total)
        x = solve_many(A, rhs)
        if x is None:
            return (None, []) if nullspace else None
        sol = self._unflatten_solution(unknowns, bases, x)
        if not nullspace:
            return sol
        N = kernel_image(A)[0]
        homogeneous = [self._unflatten_solution(unknowns, bases, col) for col in N.columns()]
        return sol, homogeneous

    def _unflatten_solution(self, unknowns, bases, x):
        out = []
        pos = 0
        for (a, b), basis in zip(unknowns, bases):
            out.append(self.combine(basis, x[pos:pos + len(basis)], a, b))
            pos += len(basis)
        return out

    def factor_through_epi(self, f: Morphism, epi: Morphism) -> Optional[Morphism]:
        """``m`` with ``m @ epi == f``, or None."""
        sol = self.solve([(epi.target, f.target)], [Equation(epi.source, f.target, [(0, None, epi)], f)])
        return sol[0] if sol else None

    def factor_through_mono(self, f: Morphism, mono: Morphism) -> Optional[Morphism]:
        """``m`` with ``mono @ m == f``, or None."""
        sol = self.solve([(f.source, mono.source)], [Equation(f.source, mono.target, [(0, mono, None)], f)])
        return sol[0] if sol else None

    def _left_inverse(self, f: Morphism) -> Optional[Morphism]:
        sol = self.solve([(f.target, f.source)],
                         [Equation(f.source, f.source, [(0, None, f)], self.identity(f.source))])
        return sol[0] if sol else None

    def left_inverse(self, f: Morphism) -> Optional[Morphism]:
        """``r`` with ``r @ f == id`` (a retraction), or None."""
        return self._left_inverse(f)

    def right_inverse(self, g: Morphism) -> Optional[Morphism]:
        """``s`` with ``g @ s == id`` (a section), or None."""
        sol = self.solve([(g.target, g.source)],
                         [Equation(g.target, g.target, [(0, g, None)], self.identity(g.target))])
        return sol[0] if sol else None

    def inverse(self, f: Morphism) -> Optional[Morphism]:
        g = self._left_inverse(f)
        if g is None or f @ g != self.identity(f.target):
            return None
        return g

    # -- exact structure: generic constructions -----------------------------
    def admissible_factorization(self, f: Morphism) -> AdmissibleFactorization:
        """Epi-mono factorization through the canonical image object."""
        iota = self.kernel(f)
        if iota.source.is_zero:
            beta = self.identity(f.source)
        else:
            beta = self.cokernel(iota)
        m = self.factor_through_epi(f, beta)
        if m is None:  # pragma: no cover - kernel/cokernel invariant
            raise NotAdmissible("morphism does not factor through its coimage")
        c = self.classify(m)
        if not c.is_admissible_mono:
            raise NotAdmissible(f"image map is not an admissible monomorphism: {c.obstruction}",
                                c.obstruction)
        return AdmissibleFactorization(beta, m)

    def pullback_along_epi(self, f: Morphism, g: Morphism):
        """Pullback of ``f: x -> z`` along the admissible epi ``g: y -> z``.

        Returns ``(P, to_x, to_y)`` with ``f @ to_x == g @ to_y``.
        """
        if f.target != g.target:
            raise ValueError("pullback needs a common target")
        if not self.classify(g).is_admissible_epi:
            raise NotEpi(f"{g} is not an admissible epimorphism")
        S, (ix, iy), (px, py) = self.direct_sum([f.source, g.source])
        diff = f @ px - g @ py
        iota = self.kernel(diff)
        return iota.source, px @ iota, py @ iota


@lru_cache(maxsize=None)
def _cached_basis(backend: Backend, xk, yk) -> tuple:
    return tuple(backend._hom_basis_data(xk, yk))

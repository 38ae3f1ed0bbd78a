"""Vector bundles on a nodal rational curve, through their descent data.

A morphism is a morphism of the pullbacks to P^1 that is compatible with
the gluings: ``phi(p''_i) rho_i = rho'_i phi(p'_i)`` at every node.  The
exact structure is inherited from P^1: a sequence of bundles on the
curve is exact exactly when its pullback is.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..bundles import NodalBundle, NodalCurve, fiber_matrix
from ..linalg import Matrix, solve_many
from .base import Backend, Classification, Morphism, NotAdmissible
from .vectp1 import VectP1


@dataclass(frozen=True)
class VectNodal(Backend):
    curve: NodalCurve = dc_field(default=None)
    name = "vect-nodal"

    def __post_init__(self):
        if self.curve is None:
            object.__setattr__(self, "curve", NodalCurve.nodal_cubic(self.field))
        if self.curve.field != self.field:
            raise ValueError("curve and backend fields differ")

    @property
    def up(self) -> VectP1:
        return VectP1(self.field)

    def describe(self, key):
        return repr(key)

    def zero_key(self):
        return NodalBundle(self.curve, (), tuple(Matrix.zeros(self.field, 0, 0) for _ in self.curve.nodes))

    def is_zero_key(self, key):
        return not key.upstairs

    def size(self, key):
        return key.rank

    def bundle(self, v: NodalBundle):
        if v.curve != self.curve:
            raise ValueError("bundle lives on a different curve")
        return self.obj(v)

    def upstairs(self, x):
        return self.up.obj(x.key.upstairs)

    def lift(self, f: Morphism) -> Morphism:
        """The pulled-back morphism on P^1."""
        return Morphism(self.upstairs(f.source), self.upstairs(f.target), f.data)

    def descend_morphism(self, x, y, g: Morphism) -> Morphism:
        f = Morphism(x, y, g.data)
        if not self.is_compatible(f):
            raise ValueError("morphism does not respect the gluing data")
        return f

    def matrix(self, x, y, entries) -> Morphism:
        g = self.up.matrix(self.upstairs(x), self.upstairs(y), entries)
        return self.descend_morphism(x, y, g)

    def describe_data(self, f):
        return self.up.describe_data(self.lift(f))

    def fiber(self, data, xk, yk, pt) -> Matrix:
        return fiber_matrix(self.field, data, yk.rank, xk.rank, pt)

    def gluing_defect(self, data, xk, yk) -> list:
        """Per node, ``phi(p'') rho - rho' phi(p')``."""
        out = []
        for (p1, p2), r, r2 in zip(self.curve.nodes, xk.gluings, yk.gluings):
            out.append(self.fiber(data, xk, yk, p2) @ r - r2 @ self.fiber(data, xk, yk, p1))
        return out

    def is_compatible(self, f: Morphism) -> bool:
        return all(m.is_zero() for m in self.gluing_defect(f.data, f.source.key, f.target.key))

    # -- primitives (delegated upstairs) --------------------------------------
    def _hom_basis_data(self, xk, yk):
        up = self.up
        ux, uy = xk.upstairs, yk.upstairs
        basis = up._hom_basis_data(ux, uy)
        if not basis or not self.curve.nodes:
            return basis
        cols = [[c for m in self.gluing_defect(b, xk, yk) for c in m.entries] for b in basis]
        L = Matrix.from_columns(self.field, cols, len(cols[0]))
        return [up._unflatten(list(v), ux, uy) for v in L.kernel().columns()]

    def _compose(self, gd, fd, xk, yk, zk):
        return self.up._compose(gd, fd, xk.upstairs, yk.upstairs, zk.upstairs)

    def _add(self, d1, d2, xk, yk):
        return self.up._add(d1, d2, xk.upstairs, yk.upstairs)

    def _scale(self, c, d, xk, yk):
        return self.up._scale(c, d, xk.upstairs, yk.upstairs)

    def _zero(self, xk, yk):
        return self.up._zero(xk.upstairs, yk.upstairs)

    def _identity(self, xk):
        return self.up._identity(xk.upstairs)

    def _flatten(self, d, xk, yk):
        return self.up._flatten(d, xk.upstairs, yk.upstairs)

    def _direct_sum(self, keys):
        up = self.up
        F = self.field
        total, inj, proj = up._direct_sum([k.upstairs for k in keys])
        n = len(total)
        glue = []
        for node in range(self.curve.n_nodes):
            g = Matrix.zeros(F, n, n)
            for k, i, p in zip(keys, inj, proj):
                # injections and projections are constant permutations
                I = fiber_matrix(F, i, n, k.rank, (F.one, F.zero))
                P = fiber_matrix(F, p, k.rank, n, (F.one, F.zero))
                g = g + I @ k.gluings[node] @ P
            glue.append(g)
        return NodalBundle(self.curve, total, tuple(glue)), inj, proj

    # -- exact structure -----------------------------------------------------
    def kernel(self, f: Morphism) -> Morphism:
        iota = self.up.kernel(self.lift(f))
        K = iota.source.key
        x = f.source.key
        glue = []
        for (p1, p2), rho in zip(self.curve.nodes, x.gluings):
            a = fiber_matrix(self.field, iota.data, x.rank, len(K), p1)
            b = fiber_matrix(self.field, iota.data, x.rank, len(K), p2)
            target = rho @ a
            cols = []
            for col in target.columns():
                sol = solve_many(b, list(col))
                if sol is None:
                    raise NotAdmissible("kernel upstairs is not preserved by the gluing; "
                                        "the kernel on the curve is not a subbundle")
                cols.append(sol)
            glue.append(Matrix.from_columns(self.field, cols, len(K)))
        try:
            Kb = NodalBundle(self.curve, K, tuple(glue))
        except ValueError as exc:
            raise NotAdmissible(f"kernel gluing degenerates: {exc}") from exc
        return Morphism(self.obj(Kb), f.source, iota.data)

    def cokernel(self, f: Morphism) -> Morphism:
        pi = self.up.cokernel(self.lift(f))
        C = pi.target.key
        y = f.target.key
        glue = []
        for (p1, p2), rho in zip(self.curve.nodes, y.gluings):
            a = fiber_matrix(self.field, pi.data, len(C), y.rank, p1)
            b = fiber_matrix(self.field, pi.data, len(C), y.rank, p2)
            target = (b @ rho).T
            cols = []
            for col in target.columns():
                sol = solve_many(a.T, list(col))
                if sol is None:  # pragma: no cover - admissible monos have compatible images
                    raise NotAdmissible("image is not preserved by the gluing")
                cols.append(sol)
            glue.append(Matrix.from_columns(self.field, cols, len(C)).T)
        return Morphism(f.target, self.obj(NodalBundle(self.curve, C, tuple(glue))), pi.data)

    def classify(self, f: Morphism) -> Classification:
        c = self.up.classify(self.lift(f))
        if c.kind == "iso":
            inv = c.inverse
            return Classification("iso", f, inverse=Morphism(f.target, f.source, inv.data))
        if c.kind == "admissible-mono":
            return Classification("admissible-mono", f, cokernel=self.cokernel(f))
        if c.kind == "admissible-epi":
            return Classification("admissible-epi", f, kernel=self.kernel(f))
        return Classification("neither", f, obstruction=c.obstruction)

    # -- invariants ----------------------------------------------------------
    def degree(self, key) -> int:
        return key.degree

    def ext1_dim(self, x, y) -> int:
        """From the descent sequence: the cokernel of the gluing-defect map
        on upstairs homs, plus h^1 of the upstairs hom bundle."""
        up = self.up
        ux, uy = self.upstairs(x), self.upstairs(y)
        total = self.curve.n_nodes * x.key.rank * y.key.rank
        h0_up = up.hom_dim(ux, uy)
        h0 = self.hom_dim(x, y)
        return total - (h0_up - h0) + up.ext1_dim(ux, uy)

"""The split exact structure on any backend.

Same objects and morphisms as the base; the admissible sequences are the
split ones, so a mono is admissible exactly when it has a retraction and
an epi exactly when it has a section.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import Backend, Classification, Morphism, NotAdmissible, Obj


@dataclass(frozen=True)
class SplitExact(Backend):
    base: Backend = None
    name = "split"

    def __post_init__(self):
        if self.base is None or self.base.field != self.field:
            raise ValueError("SplitExact needs a base backend over the same field")

    def describe(self, key):
        return self.base.describe(key)

    def describe_data(self, f):
        return self.base.describe_data(self.unwrap(f))

    def zero_key(self):
        return self.base.zero_key()

    def is_zero_key(self, key):
        return self.base.is_zero_key(key)

    def size(self, key):
        return self.base.size(key)

    # -- tagging ---------------------------------------------------------------
    def wrap(self, v):
        if isinstance(v, Obj):
            if v.backend == self:
                return v
            return Obj(self, v.key)
        if isinstance(v, Morphism):
            if v.backend == self:
                return v
            return Morphism(self.wrap(v.source), self.wrap(v.target), v.data)
        from ..complexes import Complex
        if isinstance(v, Complex):
            return Complex(self, v.lo, [self.wrap(x) for x in v.objs], [self.wrap(d) for d in v.diffs],
                           check=False)
        raise TypeError(f"cannot wrap {v!r}")

    def unwrap(self, v):
        if isinstance(v, Obj):
            return Obj(self.base, v.key)
        if isinstance(v, Morphism):
            return Morphism(self.unwrap(v.source), self.unwrap(v.target), v.data)
        from ..complexes import Complex
        return Complex(self.base, v.lo, [self.unwrap(x) for x in v.objs],
                       [self.unwrap(d) for d in v.diffs], check=False)

    # -- primitives ------------------------------------------------------------
    def _hom_basis_data(self, xk, yk):
        return self.base._hom_basis_data(xk, yk)

    def _compose(self, gd, fd, xk, yk, zk):
        return self.base._compose(gd, fd, xk, yk, zk)

    def _add(self, d1, d2, xk, yk):
        return self.base._add(d1, d2, xk, yk)

    def _scale(self, c, d, xk, yk):
        return self.base._scale(c, d, xk, yk)

    def _zero(self, xk, yk):
        return self.base._zero(xk, yk)

    def _identity(self, xk):
        return self.base._identity(xk)

    def _flatten(self, d, xk, yk):
        return self.base._flatten(d, xk, yk)

    def _direct_sum(self, keys):
        return self.base._direct_sum(keys)

    # -- exact structure -------------------------------------------------------
    def classify(self, f: Morphism) -> Classification:
        r = self.left_inverse(f)
        s = self.right_inverse(f)
        if r is not None and s is not None:
            return Classification("iso", f, inverse=r)
        if r is not None:
            return Classification("admissible-mono", f, cokernel=self.cokernel(f))
        if s is not None:
            return Classification("admissible-epi", f, kernel=self.kernel(f))
        return Classification("neither", f, obstruction="no retraction and no section exists")

    def kernel(self, f: Morphism) -> Morphism:
        iota = self.wrap(self.base.kernel(self.unwrap(f)))
        if not iota.source.is_zero and self.left_inverse(iota) is None:
            raise NotAdmissible("kernel inclusion does not split")
        return iota

    def cokernel(self, f: Morphism) -> Morphism:
        if self.left_inverse(f) is None:
            raise NotAdmissible("not a split monomorphism")
        return self.wrap(self.base.cokernel(self.unwrap(f)))

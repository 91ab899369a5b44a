"""Unstable modules and algebras over the mod-2 Steenrod algebra.

An :class:`UnstableModule` is a finite graded F2 vector space with a
named basis in each degree and explicit matrices for every nonzero
Sq^j action; Sq^0 is implicitly the identity and absent matrices are
zero.  A :class:`GradedAlgebra` adds a commutative unital product.

Validity is axiom checking, not construction-time magic: ``validate``
returns a report listing every violated axiom with a witness, and the
constructors only enforce shape coherence.  Everything is immutable
after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .f2core import F2Matrix
from .steenrod import adem_reduce

Basis = Mapping[int, tuple[str, ...]]
SqAction = Mapping[tuple[int, int], F2Matrix]


class InvariantViolation(ValueError):
    """Raised when a construction produces an invalid module.

    ``violations`` holds the validator report that triggered the error.
    """

    def __init__(self, message: str, violations: list[dict]):
        super().__init__(message)
        self.violations = violations


@dataclass(frozen=True)
class UnstableModule:
    lo: int
    hi: int
    basis: dict[int, tuple[str, ...]]
    sq: dict[tuple[int, int], F2Matrix]

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty degree range [{self.lo}, {self.hi}]")
        for d, names in self.basis.items():
            if not self.lo <= d <= self.hi:
                raise ValueError(f"basis in degree {d} outside [{self.lo}, {self.hi}]")
            if not names:
                raise ValueError(f"empty basis list in degree {d}; omit the degree")
        for (j, m), mat in self.sq.items():
            if j < 1:
                raise ValueError(f"stored Sq^{j}; only j >= 1 actions are stored")
            if (mat.rows, mat.cols) != (self.dim(m + j), self.dim(m)):
                raise ValueError(
                    f"Sq^{j} at degree {m} is {mat.rows}x{mat.cols}, expected "
                    f"{self.dim(m + j)}x{self.dim(m)}"
                )

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def span(self) -> int:
        return self.hi - self.lo

    def sq_matrix(self, j: int, m: int) -> F2Matrix:
        """The matrix of Sq^j from degree m (zero when absent)."""
        if j == 0:
            return F2Matrix.identity(self.dim(m))
        got = self.sq.get((j, m))
        if got is not None:
            return got
        return F2Matrix.zeros(self.dim(m + j), self.dim(m))

    def word_matrix(self, word: Sequence[int], m: int) -> F2Matrix:
        """Matrix of the composition Sq^{i1}..Sq^{it} starting at degree m."""
        out = F2Matrix.identity(self.dim(m))
        d = m
        for j in reversed(tuple(word)):
            out = self.sq_matrix(j, d).compose(out)
            d += j
        return out


def _normalized_sq(sq: SqAction) -> dict[tuple[int, int], F2Matrix]:
    return {k: m for k, m in sq.items() if not m.is_zero()}


def module(lo: int, hi: int, basis: Basis, sq: SqAction) -> UnstableModule:
    """Shape-checked constructor; zero matrices are dropped."""
    return UnstableModule(lo, hi, {d: tuple(n) for d, n in basis.items() if n}, _normalized_sq(sq))


def zero_module() -> UnstableModule:
    return UnstableModule(0, 0, {}, {})


def sphere_module(r: int) -> UnstableModule:
    """Reduced cohomology of S^r: one class in degree r."""
    return UnstableModule(r, r, {r: ("s",)}, {})


def validate(m: UnstableModule) -> list[dict]:
    """Check the unstable-module axioms; empty report means valid.

    Instability: Sq^j must vanish on degree d whenever j > d.  Adem
    coherence: for every pair (a, b) with a + b within the degree span,
    the composite Sq^a Sq^b must agree with the matrices induced by its
    admissible normal form.
    """
    report: list[dict] = []
    for (j, d), mat in sorted(m.sq.items()):
        if j > d and not mat.is_zero():
            report.append(
                {"kind": "instability", "degree": d, "j": j,
                 "detail": f"Sq^{j} is nonzero on degree {d} < {j}"}
            )
    span = m.span()
    for b in range(1, span + 1):
        for a in range(1, min(2 * b - 1, span - b) + 1):
            rhs_words = adem_reduce((a, b)).terms
            for d in m.degrees():
                lhs = m.sq_matrix(a, d + b).compose(m.sq_matrix(b, d))
                rhs = F2Matrix.zeros(m.dim(d + a + b), m.dim(d))
                for w in rhs_words:
                    rhs = rhs.add(m.word_matrix(w, d))
                if lhs.data != rhs.data:
                    report.append(
                        {"kind": "adem", "relation": [a, b], "degree": d,
                         "detail": f"Sq^{a} Sq^{b} disagrees with its admissible "
                                   f"form on degree {d}"}
                    )
    return report


def suspend(m: UnstableModule, d: int) -> UnstableModule:
    """Shift every degree by d, keeping the Sq matrices.

    A non-negative shift of a valid module stays valid; a negative
    shift can break instability, which is reported, not silently kept.
    """
    out = UnstableModule(
        m.lo + d,
        m.hi + d,
        {deg + d: names for deg, names in m.basis.items()},
        {(j, deg + d): mat for (j, deg), mat in m.sq.items()},
    )
    if d < 0:
        bad = [v for v in validate(out) if v["kind"] == "instability"]
        if bad:
            raise InvariantViolation(f"suspension by {d} breaks instability", bad)
    return out


def wedge(parts: Sequence[UnstableModule]) -> UnstableModule:
    """Degreewise direct sum with block-diagonal Sq action.

    Basis names get a ``p<i>:`` part prefix, except that a one-part
    wedge is returned unchanged.
    """
    if not parts:
        return zero_module()
    if len(parts) == 1:
        return parts[0]
    lo = min(p.lo for p in parts)
    hi = max(p.hi for p in parts)
    basis: dict[int, tuple[str, ...]] = {}
    offsets: list[dict[int, int]] = []
    for i, p in enumerate(parts):
        offs = {}
        for deg, names in p.basis.items():
            cur = basis.get(deg, ())
            offs[deg] = len(cur)
            basis[deg] = cur + tuple(f"p{i}:{n}" for n in names)
        offsets.append(offs)
    dims = {deg: len(names) for deg, names in basis.items()}
    sq: dict[tuple[int, int], F2Matrix] = {}
    keys = sorted({k for p in parts for k in p.sq})
    for j, deg in keys:
        entries = []
        for i, p in enumerate(parts):
            mat = p.sq.get((j, deg))
            if mat is None:
                continue
            roff = offsets[i].get(deg + j, 0)
            coff = offsets[i].get(deg, 0)
            for r in range(mat.rows):
                bits = mat.data[r]
                while bits:
                    low = bits & -bits
                    entries.append((r + roff, low.bit_length() - 1 + coff))
                    bits ^= low
        sq[(j, deg)] = F2Matrix.from_entries(dims.get(deg + j, 0), dims.get(deg, 0), entries)
    return UnstableModule(lo, hi, basis, _normalized_sq(sq))


# --- algebras ----------------------------------------------------------------


@dataclass(frozen=True)
class GradedAlgebra:
    """An unstable module with a commutative unital product.

    ``products`` maps (deg_a, idx_a, deg_b, idx_b) to the product of the
    two basis elements as a bit vector in degree deg_a + deg_b; missing
    keys are zero, and both orders of every pair are stored.
    """

    module: UnstableModule
    unit: int  # index into the degree-0 basis
    products: dict[tuple[int, int, int, int], int]

    def __post_init__(self) -> None:
        if not 0 <= self.unit < self.module.dim(0):
            raise ValueError("unit must name a degree-0 basis element")
        for (da, ia, db, ib), vec in self.products.items():
            if ia >= self.module.dim(da) or ib >= self.module.dim(db):
                raise ValueError(f"product key ({da},{ia},{db},{ib}) out of range")
            if vec >> self.module.dim(da + db):
                raise ValueError(
                    f"product of ({da},{ia}) and ({db},{ib}) has bits outside "
                    f"degree {da + db}"
                )

    def product(self, da: int, ia: int, db: int, ib: int) -> int:
        return self.products.get((da, ia, db, ib), 0)

    def multiply(self, da: int, va: int, db: int, vb: int) -> int:
        """Product of two homogeneous vectors, in degree da + db."""
        out = 0
        a = va
        while a:
            la = a & -a
            ia = la.bit_length() - 1
            b = vb
            while b:
                lb = b & -b
                out ^= self.product(da, ia, db, lb.bit_length() - 1)
                b ^= lb
            a ^= la
        return out

    def unit_vector(self) -> int:
        return 1 << self.unit


def algebra(m: UnstableModule, unit: int,
            products: Mapping[tuple[int, int, int, int], int]) -> GradedAlgebra:
    """Constructor that fills in the symmetric orders and unit products."""
    full: dict[tuple[int, int, int, int], int] = {}
    for (da, ia, db, ib), vec in products.items():
        if vec:
            full[(da, ia, db, ib)] = vec
            full[(db, ib, da, ia)] = vec
    for d, names in m.basis.items():
        for i in range(len(names)):
            full[(0, unit, d, i)] = 1 << i
            full[(d, i, 0, unit)] = 1 << i
    return GradedAlgebra(m, unit, full)


def validate_algebra(a: GradedAlgebra) -> list[dict]:
    """Module axioms plus: unit, commutativity, associativity on basis
    triples, the squaring axiom Sq^d x = x.x, and the Cartan formula on
    basis pairs."""
    report = validate(a.module)
    m = a.module
    degs = m.degrees()
    pairs = [(d, i) for d in degs for i in range(m.dim(d))]
    for d, i in pairs:
        if a.product(0, a.unit, d, i) != 1 << i:
            report.append({"kind": "unit", "basis": [d, i],
                           "detail": "unit does not act as identity"})
    for (da, ia) in pairs:
        for (db, ib) in pairs:
            if a.product(da, ia, db, ib) != a.product(db, ib, da, ia):
                report.append({"kind": "commutativity", "basis": [[da, ia], [db, ib]]})
    for (da, ia) in pairs:
        for (db, ib) in pairs:
            for (dc, ic) in pairs:
                left = a.multiply(da + db, a.product(da, ia, db, ib), dc, 1 << ic)
                right = a.multiply(da, 1 << ia, db + dc, a.product(db, ib, dc, ic))
                if left != right:
                    report.append(
                        {"kind": "associativity",
                         "basis": [[da, ia], [db, ib], [dc, ic]]}
                    )
    for d, i in pairs:
        if d >= 1:
            got = m.sq_matrix(d, d).column(i)
            want = a.product(d, i, d, i)
            if got != want:
                report.append(
                    {"kind": "squaring", "basis": [d, i],
                     "detail": f"Sq^{d} on degree {d} disagrees with squaring"}
                )
    span = m.span()
    for (da, ia) in pairs:
        for (db, ib) in pairs:
            prod = a.product(da, ia, db, ib)
            for j in range(1, span + 1):
                if da + db + j > m.hi:
                    break
                lhs = 0
                v = prod
                while v:
                    low = v & -v
                    lhs ^= m.sq_matrix(j, da + db).column(low.bit_length() - 1)
                    v ^= low
                rhs = 0
                for p in range(j + 1):
                    sa = m.sq_matrix(p, da).column(ia)
                    sb = m.sq_matrix(j - p, db).column(ib)
                    rhs ^= a.multiply(da + p, sa, db + j - p, sb)
                if lhs != rhs:
                    report.append(
                        {"kind": "cartan", "basis": [[da, ia], [db, ib]], "j": j}
                    )
    return report


@dataclass(frozen=True)
class TotalSWClass:
    """A total Stiefel-Whitney class 1 + w_1 + w_2 + ... in an algebra.

    ``components[d]`` is the degree-d part as a bit vector; the degree-0
    part must be the unit.  ``rank`` is the nominal bundle rank.
    """

    components: dict[int, int]
    rank: int

    def component(self, d: int) -> int:
        return self.components.get(d, 0)


def total_class(a: GradedAlgebra, components: Mapping[int, int], rank: int) -> TotalSWClass:
    comps = {d: v for d, v in components.items() if v and d <= a.module.hi}
    if comps.get(0) != a.unit_vector():
        raise ValueError("degree-0 component of a total class must be the unit")
    return TotalSWClass(comps, rank)


def multiply_total(a: GradedAlgebra, u: TotalSWClass, v: TotalSWClass,
                   rank: int | None = None) -> TotalSWClass:
    comps: dict[int, int] = {}
    for du, cu in u.components.items():
        for dv, cv in v.components.items():
            if du + dv > a.module.hi:
                continue
            comps[du + dv] = comps.get(du + dv, 0) ^ a.multiply(du, cu, dv, cv)
    return total_class(a, comps, u.rank + v.rank if rank is None else rank)


def invert_total_class(a: GradedAlgebra, w: TotalSWClass) -> TotalSWClass:
    """The unique v with w.v = 1, solved degree by degree.

    Over F2 the degree-d component is v_d = sum_{k>=1} w_k v_{d-k}.
    """
    if w.component(0) != a.unit_vector():
        raise ValueError("cannot invert: degree-0 component is not the unit")
    comps = {0: a.unit_vector()}
    for d in range(1, a.module.hi + 1):
        acc = 0
        for k in range(1, d + 1):
            wk = w.component(k)
            if wk and (d - k) in comps:
                acc ^= a.multiply(k, wk, d - k, comps[d - k])
        if acc:
            comps[d] = acc
    return total_class(a, comps, w.rank)


def thom(base: GradedAlgebra, w: TotalSWClass, r: int) -> UnstableModule:
    """Reduced cohomology of the Thom space of a rank-r bundle over
    ``base`` with total Stiefel-Whitney class ``w``.

    Basis u*b in degree r + |b| for each basis element b of the base;
    Sq^j(u*b) = u * sum_{p+q=j} w_p . Sq^q(b).  The result must pass
    ``validate``; an instability violation means ``w`` cannot be the
    class of a rank-r bundle and raises.
    """
    if r < 1:
        raise ValueError("bundle rank must be positive")
    bm = base.module
    basis = {r + d: tuple(f"u*{n}" for n in names) for d, names in bm.basis.items()}
    sq: dict[tuple[int, int], F2Matrix] = {}
    for d in bm.degrees():
        for j in range(1, bm.hi - d + 1):
            cols = []
            for i in range(bm.dim(d)):
                acc = 0
                for p in range(j + 1):
                    wp = w.component(p)
                    if not wp:
                        continue
                    sqq = bm.sq_matrix(j - p, d).column(i)
                    if sqq:
                        acc ^= base.multiply(p, wp, d + j - p, sqq)
                cols.append(acc)
            mat = F2Matrix.from_cols(cols, bm.dim(d + j))
            if not mat.is_zero():
                sq[(j, r + d)] = mat
    out = UnstableModule(r + bm.lo, r + bm.hi, basis, sq)
    bad = validate(out)
    if bad:
        raise InvariantViolation(
            f"Thom construction with rank {r} is inconsistent with the given "
            f"total class", bad
        )
    return out


def check_sq_commutes(f, src: UnstableModule, dst: UnstableModule) -> list[dict]:
    """Violations of f . Sq^j = Sq^j . f for a graded map between modules.

    Steenrod actions are never derived from incidence data; when a user
    supplies them on the terms of an exact sequence, this is the
    compatibility check for its maps.  ``f`` is an f2core.GradedMap
    whose block at degree d maps src degree d to dst degree d + shift.
    """
    for d in set(f.source_dims) | set(src.basis):
        if f.source_dims.get(d, 0) != src.dim(d):
            raise ValueError(
                f"map source has dim {f.source_dims.get(d, 0)} in degree {d}, "
                f"module has {src.dim(d)}"
            )
    for d in set(f.target_dims) | set(dst.basis):
        if f.target_dims.get(d, 0) != dst.dim(d):
            raise ValueError(
                f"map target has dim {f.target_dims.get(d, 0)} in degree {d}, "
                f"module has {dst.dim(d)}"
            )
    report = []
    span = max(src.span(), dst.span())
    for d in src.degrees():
        for j in range(1, span + 1):
            left = f.block(d + j).compose(src.sq_matrix(j, d))
            right = dst.sq_matrix(j, d + f.shift).compose(f.block(d))
            if left.data != right.data:
                report.append({"kind": "sq-compat", "degree": d, "j": j})
    return report


# --- built-in examples -------------------------------------------------------


def projective_plane_algebra() -> GradedAlgebra:
    """H*(CP^2; Z/2) = Z/2[k]/(k^3) with |k| = 2.

    Sq^2 k = k^2 by the squaring axiom and Sq^1 vanishes since the odd
    degrees are empty.
    """
    m = module(
        0, 4,
        {0: ("1",), 2: ("k",), 4: ("k2",)},
        {(2, 2): F2Matrix(1, 1, (1,))},
    )
    return algebra(m, 0, {(2, 0, 2, 0): 1})


def point_algebra() -> GradedAlgebra:
    """H* of a point: the unit alone."""
    return algebra(module(0, 0, {0: ("1",)}, {}), 0, {})


def cp2_plus_block() -> UnstableModule:
    """The three-class module of CP^2 with added basepoint: degrees
    0, 2, 4 and Sq^2 from the middle class to the top one."""
    return projective_plane_algebra().module


def application_module(k: int) -> UnstableModule:
    """Wedge of k copies of the CP^2 block, the j-th suspended by 8(j-1)."""
    if k < 1:
        raise ValueError("k must be positive")
    return wedge([suspend(cp2_plus_block(), 8 * j) for j in range(k)])


def cp2_thom_r7() -> UnstableModule:
    """Thom module of the rank-3 normal bundle of CP^2 in R^7.

    The tangent class is (1+k)^3 and the normal class is its inverse;
    the Thom classes live in degrees 3, 5, 7.
    """
    a = projective_plane_algebra()
    one = a.unit_vector()
    one_plus_k = total_class(a, {0: one, 2: 1}, 4)
    tangent = multiply_total(a, multiply_total(a, one_plus_k, one_plus_k), one_plus_k, rank=4)
    normal = TotalSWClass(invert_total_class(a, tangent).components, 3)
    return thom(a, normal, 3)

"""Filtered chain complexes over F2 from Morse/Floer generator data.

Generators carry an integer grading (Morse or Maslov index) and a real
action; the differential counts incidences mod 2, drops the grading by
one, and strictly decreases action.  The internal convention is
homological; the cohomological sequence is the same data with arrows
reversed (dimensions agree over F2).

Filtration convention: a level keeps the generators of action >= kappa.
Because the differential strictly decreases action, that set is *not*
closed under the differential inside the full complex; it is the
quotient-complex datum (generators above the threshold, incidences
among them), which is exactly what the action filtration uses.  Within
a level, the generators *below* a higher threshold do form a
subcomplex, which is what the long exact sequence of a pair of levels
is built from.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .f2core import F2Matrix, F2Span, GradedMap, check_exact, kernel_basis


class ComplexError(ValueError):
    """Invalid Morse data; ``violations`` lists each failure with a witness."""

    def __init__(self, violations: list[dict]):
        super().__init__(f"{len(violations)} invariant violation(s)")
        self.violations = violations


@dataclass(frozen=True)
class Generator:
    name: str
    grading: int
    action: float


@dataclass(frozen=True)
class MorseComplex:
    generators: tuple[Generator, ...]
    incidence: frozenset[tuple[str, str]]  # (x, y) with dx containing y

    def by_name(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    def gradings(self) -> list[int]:
        return sorted({g.grading for g in self.generators})

    def generators_in(self, grading: int) -> list[Generator]:
        return [g for g in self.generators if g.grading == grading]

    def dim(self, grading: int) -> int:
        return len(self.generators_in(grading))

    def boundary_matrix(self, grading: int) -> F2Matrix:
        """Differential from chains in ``grading`` to ``grading - 1``."""
        source = self.generators_in(grading)
        target = self.generators_in(grading - 1)
        tindex = {g.name: i for i, g in enumerate(target)}
        entries = []
        for c, g in enumerate(source):
            for r, h in enumerate(target):
                if (g.name, h.name) in self.incidence:
                    entries.append((r, c))
        return F2Matrix.from_entries(len(target), len(source), entries)

    def actions(self) -> list[float]:
        """Distinct action values (the clusters), ascending."""
        return sorted({g.action for g in self.generators})


def validate_data(
    generators: Sequence[tuple[str, int, float]],
    incidence: Iterable[tuple[str, str]],
) -> list[dict]:
    """Check the chain-complex invariants; empty report means valid.

    Named violations: ``duplicate-name``, ``unknown-generator``,
    ``grading-mismatch`` (incidence must drop the grading by exactly
    one), ``action-non-decrease`` (flows strictly decrease action) and
    ``d-squared`` (with the offending generator pair as witness).
    """
    report: list[dict] = []
    seen: dict[str, tuple[str, int, float]] = {}
    for name, grading, action in generators:
        if name in seen:
            report.append({"kind": "duplicate-name", "witness": name})
        seen[name] = (name, grading, action)
    incidence = list(incidence)
    for x, y in incidence:
        if x not in seen or y not in seen:
            report.append({"kind": "unknown-generator", "witness": [x, y]})
    if report:
        return report
    for x, y in incidence:
        _, gx, ax = seen[x]
        _, gy, ay = seen[y]
        if gx != gy + 1:
            report.append(
                {"kind": "grading-mismatch", "witness": [x, y],
                 "detail": f"grading {gx} -> {gy}, expected a drop by one"}
            )
        if not ax > ay:
            report.append(
                {"kind": "action-non-decrease", "witness": [x, y],
                 "detail": f"action {ax} -> {ay} does not strictly decrease"}
            )
    if report:
        return report
    complex_ = MorseComplex(
        tuple(Generator(*g) for g in generators), frozenset(incidence)
    )
    for grading in complex_.gradings():
        dd = complex_.boundary_matrix(grading - 1).compose(
            complex_.boundary_matrix(grading)
        )
        if not dd.is_zero():
            sources = complex_.generators_in(grading)
            targets = complex_.generators_in(grading - 2)
            for c in range(dd.cols):
                for r in range(dd.rows):
                    if dd.entry(r, c):
                        report.append(
                            {"kind": "d-squared", "grading": grading,
                             "witness": [sources[c].name, targets[r].name]}
                        )
    return report


def build_complex(
    generators: Sequence[tuple[str, int, float]],
    incidence: Iterable[tuple[str, str]],
) -> MorseComplex:
    """Validated construction; raises ComplexError listing violations."""
    violations = validate_data(generators, list(incidence))
    if violations:
        raise ComplexError(violations)
    return MorseComplex(tuple(Generator(*g) for g in generators), frozenset(incidence))


@dataclass(frozen=True)
class HomologyBasis:
    """Per-grading homology with chosen representative cycles.

    ``reps[m]`` are cycle bit vectors over the grading-m generators,
    linearly independent modulo boundaries; their classes form a basis.
    """

    complex: MorseComplex
    dims: dict[int, int]
    reps: dict[int, list[int]]

    def representative_names(self, grading: int) -> list[list[str]]:
        gens = self.complex.generators_in(grading)
        out = []
        for vec in self.reps.get(grading, []):
            names = [gens[i].name for i in range(len(gens)) if (vec >> i) & 1]
            out.append(names)
        return out

    def coordinates(self, grading: int, cycle: int) -> int:
        """Homology coordinates of a cycle, as bits over the reps."""
        span = F2Span()
        nreps = len(self.reps.get(grading, []))
        for r in self.reps.get(grading, []):
            span.add(r)
        bmat = self.complex.boundary_matrix(grading + 1)
        for c in range(bmat.cols):
            span.add(bmat.column(c))
        combo = span.coordinates(cycle)
        if combo is None:
            raise ValueError("vector is not a cycle in this homology basis")
        return combo & ((1 << nreps) - 1)


def homology(c: MorseComplex) -> HomologyBasis:
    """Graded homology dimensions with representative cycles."""
    dims: dict[int, int] = {}
    reps: dict[int, list[int]] = {}
    for m in c.gradings():
        cycles = kernel_basis(c.boundary_matrix(m))
        bmat = c.boundary_matrix(m + 1)
        span = F2Span()
        for col in range(bmat.cols):
            span.add(bmat.column(col))
        chosen = []
        for z in cycles:
            if span.add(z):
                chosen.append(z)
        if chosen:
            dims[m] = len(chosen)
            reps[m] = chosen
    return HomologyBasis(c, dims, reps)


def filter_complex(c: MorseComplex, kappa: float) -> MorseComplex:
    """Generators of action >= kappa with the inherited incidences."""
    keep = {g.name for g in c.generators if g.action >= kappa}
    return MorseComplex(
        tuple(g for g in c.generators if g.name in keep),
        frozenset((x, y) for x, y in c.incidence if x in keep and y in keep),
    )


def _check_thresholds(c: MorseComplex, thresholds: Sequence[float]) -> None:
    if list(thresholds) != sorted(thresholds, reverse=True) or len(set(thresholds)) != len(thresholds):
        raise ValueError("thresholds must be strictly decreasing")
    clusters = c.actions()
    for t in thresholds:
        if t in clusters:
            raise ValueError(
                f"threshold {t} hits an action cluster; thresholds must fall "
                f"strictly between clusters"
            )


def les(c: MorseComplex, thresholds: Sequence[float]) -> list[dict]:
    """Long exact sequences of consecutive filtration levels.

    For each threshold kappa_j (kappa_0 = +infinity) let A be the level
    above kappa_{j-1}, B the level above kappa_j and Q the generators
    in between; Q is a subcomplex of B with quotient A, so

        ... -> H_m(Q) -> H_m(B) -> H_m(A) -> H_{m-1}(Q) -> ...

    is exact.  The report carries the three homologies, the three maps
    and the per-position exactness checks.
    """
    _check_thresholds(c, thresholds)
    out = []
    prev = float("inf")
    for kappa in thresholds:
        upper = filter_complex(c, prev)
        level = filter_complex(c, kappa)
        mid_names = {g.name for g in level.generators} - {g.name for g in upper.generators}
        quotient = MorseComplex(
            tuple(g for g in level.generators if g.name in mid_names),
            frozenset((x, y) for x, y in level.incidence
                      if x in mid_names and y in mid_names),
        )
        ha, hb, hq = homology(upper), homology(level), homology(quotient)
        include = _induced_map(hq, hb)
        project = _induced_map(hb, ha)
        connect = _connecting_map(ha, hb, hq)
        positions = {
            "at_quotient": check_exact(connect, include),
            "at_level": check_exact(include, project),
            "at_upper": check_exact(project, connect),
        }
        out.append(
            {
                "threshold": kappa,
                "previous_threshold": prev,
                "dims": {
                    "above_previous": dict(ha.dims),
                    "level": dict(hb.dims),
                    "quotient": dict(hq.dims),
                },
                "maps": {
                    "include": include,
                    "project": project,
                    "connect": connect,
                },
                "exact": {k: v[0] for k, v in positions.items()},
                "reports": {k: v[1] for k, v in positions.items()},
                "convention": "homological; reverse all arrows for the "
                              "cohomological sequence",
            }
        )
        prev = kappa
    return out


def _chain_in(complex_: MorseComplex, grading: int, names: set[str]) -> int:
    gens = complex_.generators_in(grading)
    bits = 0
    for i, g in enumerate(gens):
        if g.name in names:
            bits |= 1 << i
    return bits


def _vec_names(complex_: MorseComplex, grading: int, vec: int) -> set[str]:
    gens = complex_.generators_in(grading)
    return {gens[i].name for i in range(len(gens)) if (vec >> i) & 1}


def _induced_map(src: HomologyBasis, dst: HomologyBasis) -> GradedMap:
    """Map on homology induced by sending generators to like-named
    generators (dropping the ones absent from the destination)."""
    blocks = {}
    src_dims = {m: d for m, d in src.dims.items()}
    dst_dims = {m: d for m, d in dst.dims.items()}
    for m, reps in src.reps.items():
        cols = []
        for vec in reps:
            names = _vec_names(src.complex, m, vec)
            image = _chain_in(dst.complex, m, names)
            cols.append(dst.coordinates(m, image))
        mat = F2Matrix.from_cols(cols, dst.dims.get(m, 0))
        if not mat.is_zero():
            blocks[m] = mat
    return GradedMap(0, src_dims, dst_dims, blocks)


def _connecting_map(ha: HomologyBasis, hb: HomologyBasis, hq: HomologyBasis) -> GradedMap:
    """H_m(A) -> H_{m-1}(Q): lift a quotient cycle to B, take its
    boundary, read it in Q."""
    blocks = {}
    for m, reps in ha.reps.items():
        cols = []
        for vec in reps:
            names = _vec_names(ha.complex, m, vec)
            lift = _chain_in(hb.complex, m, names)
            boundary = hb.complex.boundary_matrix(m).apply(lift)
            bnames = _vec_names(hb.complex, m - 1, boundary)
            in_q = _chain_in(hq.complex, m - 1, bnames)
            cols.append(hq.coordinates(m - 1, in_q))
        mat = F2Matrix.from_cols(cols, hq.dims.get(m - 1, 0))
        if not mat.is_zero():
            blocks[m] = mat
    return GradedMap(-1, dict(ha.dims), dict(hq.dims), blocks)

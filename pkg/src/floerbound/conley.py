"""A sound forcing engine for vanishing of Steenrod squares on Conley
indices of isolated critical points on an oriented n-manifold.

The engine decides when Sq^j *must* vanish on H^m of the index by a
least fixpoint of three rules:

  R1 (support)      m <= 0, m >= n, or m + j >= n forces vanishing,
                    because the reduced cohomology of the index of a
                    non-extremal point is supported in degrees 1..n-1.
  R2 (co-H)         j >= m forces vanishing: the index is a co-H-space,
                    so Sq^m dies on H^m, and j > m dies by instability.
  R3 (duality)      Sq^j on H^m corresponds to the conjugate square
                    c(Sq^j) on H^{n-m-j} of the reverse-flow index.
                    Expand c(Sq^j) in the admissible basis; the fact is
                    forced when every admissible word, applied from
                    degree n-m-j (rightmost factor first), hits some
                    step whose vanishing is already forced.  The
                    reverse-flow index obeys the same rules with the
                    same n, so both sides share one fact table.

``not-forced`` means "not derivable from these rules", never that a
nonvanishing realization exists.  Every forced fact carries a replayable
trace whose entries cite only earlier entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .steenrod import Word, conjugate


class Extremal(Enum):
    NONE = "none"
    MINIMUM = "minimum"
    MAXIMUM = "maximum"


@dataclass(frozen=True)
class ConleyProfile:
    n: int
    extremal: Extremal = Extremal.NONE

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("ambient dimension must be >= 1")


def support_bounds(p: ConleyProfile) -> tuple[int, int]:
    """Inclusive degree interval that can support reduced cohomology."""
    if p.extremal is Extremal.MINIMUM:
        return (0, 0)
    if p.extremal is Extremal.MAXIMUM:
        return (p.n, p.n)
    return (1, p.n - 1)


@dataclass(frozen=True)
class ForcingFact:
    n: int
    m: int
    j: int
    forced: bool
    trace: tuple[dict, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "j": self.j,
            "forced": self.forced,
            "trace": [dict(t) for t in self.trace],
        }


def _r1_reason(n: int, m: int, j: int) -> str | None:
    if m <= 0:
        return "m <= 0"
    if m >= n:
        return "m >= n"
    if m + j >= n:
        return "m + j >= n"
    return None


def _word_steps(word: Word, start: int) -> list[tuple[int, int]]:
    """(degree, exponent) pairs in application order, rightmost first."""
    steps = []
    d = start
    for a in reversed(word):
        steps.append((d, a))
        d += a
    return steps


class ForcingEngine:
    """Fact table for one ambient dimension and one exponent cap.

    Built single-threaded by fixpoint rounds; immutable once built, so
    completed engines can be shared freely.
    """

    def __init__(self, n: int, jmax: int):
        if n < 1 or jmax < 1:
            raise ValueError("need n >= 1 and jmax >= 1")
        self.n = n
        self.jmax = jmax
        # (m, j) -> trace entry that established the fact
        self._entries: dict[tuple[int, int], dict] = {}
        self._run()

    def _establish(self, m: int, j: int, entry: dict) -> None:
        self._entries[(m, j)] = entry

    def _run(self) -> None:
        n = self.n
        cells = [(m, j) for m in range(n + 1) for j in range(1, self.jmax + 1)]
        for m, j in cells:
            reason = _r1_reason(n, m, j)
            if reason is not None:
                self._establish(m, j, {"fact": [m, j], "rule": "R1", "reason": reason})
            elif j >= m:
                self._establish(m, j, {"fact": [m, j], "rule": "R2", "reason": "j >= m"})
        changed = True
        while changed:
            changed = False
            for m, j in cells:
                if (m, j) in self._entries:
                    continue
                entry = self._try_r3(m, j)
                if entry is not None:
                    self._establish(m, j, entry)
                    changed = True

    def _try_r3(self, m: int, j: int) -> dict | None:
        start = self.n - m - j
        words = sorted(conjugate(j).terms, reverse=True)
        if not words:
            # c(Sq^j) = 0 never happens for j >= 1, but a zero operator
            # vanishes vacuously
            return {"fact": [m, j], "rule": "R3", "start_degree": start,
                    "conjugate": [], "kills": []}
        kills = []
        for w in words:
            hit = None
            for pos, (d, a) in enumerate(_word_steps(w, start)):
                if a <= self.jmax and (d, a) in self._entries:
                    hit = {"word": list(w), "position": pos,
                           "step_degree": d, "step_exponent": a}
                    break
            if hit is None:
                return None
            kills.append(hit)
        return {"fact": [m, j], "rule": "R3", "start_degree": start,
                "conjugate": [list(w) for w in words], "kills": kills}

    def forced(self, m: int, j: int) -> bool:
        if not 1 <= j <= self.jmax:
            raise ValueError(f"exponent {j} outside table range 1..{self.jmax}")
        if m < 0 or m > self.n:
            return _r1_reason(self.n, m, j) is not None
        return (m, j) in self._entries

    def fact(self, m: int, j: int) -> ForcingFact:
        if m < 0 or m > self.n:
            reason = _r1_reason(self.n, m, j)
            if reason is None:
                return ForcingFact(self.n, m, j, False)
            return ForcingFact(self.n, m, j, True,
                               ({"fact": [m, j], "rule": "R1", "reason": reason},))
        if not self.forced(m, j):
            return ForcingFact(self.n, m, j, False)
        # collect the dependency closure, dependencies first
        order: list[dict] = []
        seen: set[tuple[int, int]] = set()

        def visit(cell: tuple[int, int]) -> None:
            if cell in seen:
                return
            seen.add(cell)
            entry = self._entries[cell]
            if entry["rule"] == "R3":
                for kill in entry["kills"]:
                    visit((kill["step_degree"], kill["step_exponent"]))
            order.append(entry)

        visit((m, j))
        return ForcingFact(self.n, m, j, True, tuple(order))


def must_vanish(n: int, m: int, j: int) -> ForcingFact:
    """Is Sq^j forced to vanish on H^m of an isolated-critical-point
    Conley index in ambient dimension n?"""
    if n < 1:
        raise ValueError("ambient dimension must be >= 1")
    if j < 1:
        raise ValueError("j must be >= 1")
    reason = _r1_reason(n, m, j)
    if reason is not None:
        return ForcingFact(n, m, j, True,
                           ({"fact": [m, j], "rule": "R1", "reason": reason},))
    return ForcingEngine(n, j).fact(m, j)


def must_vanish_profile(p: ConleyProfile, m: int, j: int) -> ForcingFact:
    """Profile-aware variant: an extremum has single-degree support, so
    every positive square vanishes outright."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if p.extremal is not Extremal.NONE:
        return ForcingFact(
            p.n, m, j, True,
            ({"fact": [m, j], "rule": "R1", "extremal": p.extremal.value,
              "reason": "support concentrated in a single degree"},),
        )
    return must_vanish(p.n, m, j)


def admissible_squares(n: int, jmax: int) -> set[int]:
    """Exponents j <= jmax with Sq^j forced to vanish on H^m for every m.

    These are the squares usable in the intersection bound search for
    Lagrangians of dimension n.
    """
    if jmax < 1:
        raise ValueError("jmax must be >= 1")
    engine = ForcingEngine(n, jmax)
    out = set()
    for j in range(1, jmax + 1):
        if all(engine.forced(m, j) for m in range(n + 1)):
            out.add(j)
    return out


def replay_trace(fact: ForcingFact) -> bool:
    """Independent replay of a forced fact's trace.

    Walks the entries in order, maintaining the set of established
    facts, and re-checks every rule application: R1 and R2 by their
    inequalities, R3 by re-expanding the conjugate square and checking
    that every admissible word cites an already-established step.  The
    last entry must establish the queried fact.
    """
    if not fact.forced:
        # nothing to replay; confirm by re-deriving
        return not must_vanish(fact.n, fact.m, fact.j).forced
    established: set[tuple[int, int]] = set()
    n = fact.n
    for entry in fact.trace:
        m, j = entry["fact"]
        rule = entry["rule"]
        if rule == "R1":
            extremal_ok = entry.get("extremal") in ("minimum", "maximum") and j >= 1
            if _r1_reason(n, m, j) is None and not extremal_ok:
                return False
        elif rule == "R2":
            if not j >= m:
                return False
        elif rule == "R3":
            if entry["start_degree"] != n - m - j:
                return False
            words = sorted(conjugate(j).terms, reverse=True)
            if [list(w) for w in words] != entry["conjugate"]:
                return False
            kills = {tuple(k["word"]): k for k in entry["kills"]}
            for w in words:
                k = kills.get(w)
                if k is None:
                    return False
                steps = _word_steps(w, entry["start_degree"])
                pos = k["position"]
                if not 0 <= pos < len(steps):
                    return False
                d, a = steps[pos]
                if (d, a) != (k["step_degree"], k["step_exponent"]):
                    return False
                if (d, a) not in established:
                    return False
        else:
            return False
        established.add((m, j))
    return (fact.m, fact.j) in established


def check_module_against_profile(module, n: int) -> list[dict]:
    """Validator hook: conflicts between a module's nonzero squares and
    the facts forced for a single-critical-point Conley index in
    dimension n.

    A module that triggers conflicts cannot be the index of an isolated
    critical point on an oriented n-manifold (it may still arise as a
    pair-relative index, like a Thom space of an embedding).
    """
    conflicts = []
    span = module.span()
    if span < 1:
        return conflicts
    engine = ForcingEngine(n, span)
    for (j, m), mat in sorted(module.sq.items()):
        if mat.is_zero():
            continue
        if j <= span and engine.fact(m, j).forced:
            conflicts.append(
                {"kind": "forced-vanishing", "degree": m, "j": j,
                 "detail": f"Sq^{j} must vanish on H^{m} for an isolated "
                           f"critical point in dimension {n}, but the module "
                           f"has a nonzero action"}
            )
    return conflicts

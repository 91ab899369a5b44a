"""Certified lower bounds on intersection counts.

Four bounds, each with a replayable witness:

* ``cup_length``     least k such that every k-fold product of
                     positive-degree classes vanishes;
* ``cap_length``     longest nonzero iterated module action, plus one;
* ``rank_bound``     total F2 dimension (the transverse bound);
* ``steenrod_bound`` the square-chain bound: a schedule of classes
                     with iterated nonzero squares, consecutive chains
                     separated by a degree gap of at least n - 1, worth
                     one point per class plus one per square applied.

The square-chain search enumerates every valid chain (depth first over
the allowed exponents, pruning zero images; finite because every step
raises the degree) and then runs weighted interval scheduling over
(start, endpoint) pairs, so the optimum is exact and the tie-breaking
makes the output deterministic.  Chain enumeration is independent per
start class; results are merged into one sorted pool before the DP, so
any parallel schedule would give identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .conley import admissible_squares
from .f2core import F2Matrix
from .stmod import GradedAlgebra, UnstableModule


@dataclass(frozen=True)
class SqChain:
    """A start class with an iterated-squares schedule.

    ``start`` is a bit vector over the basis in degree ``start_degree``;
    ``exponents`` are applied leftmost first, each raising the degree.
    A valid chain has nonzero composite image (for k = 0, a nonzero
    start class).
    """

    start_degree: int
    start: int
    exponents: tuple[int, ...]

    @property
    def end_degree(self) -> int:
        return self.start_degree + sum(self.exponents)

    @property
    def weight(self) -> int:
        return 1 + len(self.exponents)

    def sort_key(self) -> tuple:
        return (self.start_degree, self.exponents, self.start)

    def to_json(self) -> dict:
        return {
            "start_degree": self.start_degree,
            "start": _vec_to_indices(self.start),
            "exponents": list(self.exponents),
            "end_degree": self.end_degree,
        }


@dataclass(frozen=True)
class BoundCertificate:
    """Ordered square chains witnessing ``bound`` intersection points.

    Chain s must start at least n - 1 degrees above the endpoint of
    every earlier chain s'; the bound is the number of chains plus the
    number of squares applied.
    """

    n: int
    bound: int
    chains: tuple[SqChain, ...]

    def to_json(self) -> dict:
        return {
            "kind": "certificate",
            "n": self.n,
            "bound": self.bound,
            "chains": [c.to_json() for c in self.chains],
        }


def _vec_to_indices(vec: int) -> list[int]:
    out = []
    i = 0
    while vec:
        if vec & 1:
            out.append(i)
        vec >>= 1
        i += 1
    return out


def indices_to_vec(indices: Iterable[int]) -> int:
    vec = 0
    for i in indices:
        vec |= 1 << i
    return vec


def chain_image(m: UnstableModule, chain: SqChain) -> int:
    """Composite image of the chain's start class, recomputed from the
    module's matrices."""
    d = chain.start_degree
    vec = chain.start
    for r in chain.exponents:
        vec = m.sq_matrix(r, d).apply(vec)
        d += r
    return vec


def rank_bound(m: UnstableModule) -> int:
    """Total dimension: the transverse intersection-point bound."""
    return m.total_dim()


def _start_vectors(m: UnstableModule, exhaustive: bool) -> list[tuple[int, int]]:
    """(degree, vector) candidates for chain starts, deterministic order.

    Basis vectors by default; with ``exhaustive`` every nonzero vector
    in each degree of dimension at most 12.
    """
    out = []
    for d in m.degrees():
        dim = m.dim(d)
        if exhaustive and dim <= 12:
            out.extend((d, v) for v in range(1, 1 << dim))
        else:
            out.extend((d, 1 << i) for i in range(dim))
    return out


def enumerate_chains(
    m: UnstableModule, allowed: set[int], exhaustive: bool = False
) -> list[SqChain]:
    """All valid chains from the candidate start classes."""
    for r in allowed:
        if r < 1:
            raise ValueError(f"allowed exponent {r} is not positive")
    steps = sorted(allowed)
    chains: list[SqChain] = []

    def extend(start_d: int, start_v: int, d: int, vec: int, exps: tuple[int, ...]) -> None:
        chains.append(SqChain(start_d, start_v, exps))
        for r in steps:
            if d + r > m.hi:
                continue
            nxt = m.sq_matrix(r, d).apply(vec)
            if nxt:
                extend(start_d, start_v, d + r, nxt, exps + (r,))

    for d, vec in _start_vectors(m, exhaustive):
        extend(d, vec, d, vec, ())
    chains.sort(key=SqChain.sort_key)
    return chains


def steenrod_bound(
    m: UnstableModule,
    n: int,
    allowed: set[int] | str = "auto",
    exhaustive: bool = False,
) -> BoundCertificate:
    """Best certificate over all chain schedules with gap n - 1.

    ``allowed="auto"`` asks the Conley engine which squares are forced
    to vanish on every critical-point index in dimension n (the
    soundness condition for using a square in the bound).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if allowed == "auto":
        span = m.span()
        allowed_set = admissible_squares(n, span) if span >= 1 else set()
    elif isinstance(allowed, str):
        raise ValueError(f"allowed must be a set of integers or 'auto', got {allowed!r}")
    else:
        allowed_set = set(allowed)
    if m.total_dim() == 0:
        return BoundCertificate(n, 0, ())
    gap = n - 1
    pool = enumerate_chains(m, allowed_set, exhaustive)
    # weighted interval scheduling over (start, end); process by start
    # degree so every compatible predecessor is already scored
    order = sorted(range(len(pool)), key=lambda i: (pool[i].start_degree,) + pool[i].sort_key())
    best: dict[int, tuple[int, tuple, int | None]] = {}
    for i in order:
        c = pool[i]
        prev_score, prev_idx = 0, None
        for j in order:
            if j == i:
                break
            p = pool[j]
            if p.end_degree + gap <= c.start_degree:
                cand = best[j][0]
                if cand > prev_score or (
                    cand == prev_score and prev_idx is not None
                    and p.sort_key() < pool[prev_idx].sort_key()
                ):
                    prev_score, prev_idx = cand, j
        best[i] = (prev_score + c.weight, c.sort_key(), prev_idx)
    # deterministic winner: highest score, then smallest final-chain key
    top_score = max(v[0] for v in best.values())
    winners = [i for i, v in best.items() if v[0] == top_score]
    top = min(winners, key=lambda i: pool[i].sort_key())
    schedule = []
    cur: int | None = top
    while cur is not None:
        schedule.append(pool[cur])
        cur = best[cur][2]
    schedule.reverse()
    return BoundCertificate(n, top_score, tuple(schedule))


def verify_certificate(
    m: UnstableModule, n: int, cert: BoundCertificate
) -> tuple[bool, list[dict]]:
    """Independent replay of a certificate against the module.

    Re-applies every square matrix product from scratch and re-checks
    every degree-gap inequality and the claimed count.
    """
    failures: list[dict] = []
    if cert.n != n:
        failures.append({"kind": "wrong-n", "detail": f"certificate n={cert.n}, asked n={n}"})
    for s, chain in enumerate(cert.chains):
        if chain.start == 0 or chain.start >> m.dim(chain.start_degree):
            failures.append({"kind": "bad-start", "chain": s})
            continue
        if any(r < 1 for r in chain.exponents):
            failures.append({"kind": "bad-exponent", "chain": s})
            continue
        if chain_image(m, chain) == 0:
            failures.append(
                {"kind": "zero-image", "chain": s,
                 "detail": "composite square image vanishes"}
            )
    for s, chain in enumerate(cert.chains):
        for sp in range(s):
            gap = chain.start_degree - cert.chains[sp].end_degree
            if gap < n - 1:
                failures.append(
                    {"kind": "gap", "chains": [sp, s],
                     "detail": f"gap {gap} < {n - 1}"}
                )
    claimed = len(cert.chains) + sum(len(c.exponents) for c in cert.chains)
    if cert.chains and cert.bound != claimed:
        failures.append(
            {"kind": "count", "detail": f"bound {cert.bound} != {claimed}"}
        )
    if not cert.chains and cert.bound != 0:
        failures.append({"kind": "count", "detail": "empty certificate must claim 0"})
    return (not failures, failures)


# --- cup and cap lengths ------------------------------------------------------


def cup_length(a: GradedAlgebra) -> int:
    """Least k >= 1 such that every k-fold product of positive-degree
    classes vanishes; equals 1 + the longest nonzero product.

    Products of arbitrary classes expand into products of basis
    classes, so the search over basis factors is exhaustive.  With zero
    reduced cohomology the condition is vacuous at k = 1.
    """
    m = a.module
    frontier = {(d, 1 << i) for d in m.degrees() if d >= 1 for i in range(m.dim(d))}
    positive = sorted(frontier)
    t = 0
    while frontier:
        t += 1
        nxt = set()
        for d, vec in frontier:
            for db, vb in positive:
                if d + db > m.hi:
                    continue
                w = a.multiply(d, vec, db, vb)
                if w:
                    nxt.add((d + db, w))
        frontier = nxt
    return t + 1


@dataclass(frozen=True)
class CapAction:
    """A graded space with a module action of a graded algebra.

    ``action[(da, ia, d)]`` is the matrix of acting by the algebra
    basis element (da, ia) from space degree d to degree d + da; the
    unit must act as the identity and the action must be associative.
    """

    algebra: GradedAlgebra
    space: UnstableModule
    action: dict[tuple[int, int, int], F2Matrix]

    def act(self, da: int, ia: int, d: int, vec: int) -> int:
        got = self.action.get((da, ia, d))
        if got is None:
            return 0
        return got.apply(vec)

    def act_element(self, da: int, avec: int, d: int, vec: int) -> int:
        out = 0
        while avec:
            low = avec & -avec
            out ^= self.act(da, low.bit_length() - 1, d, vec)
            avec ^= low
        return out


def validate_cap(c: CapAction) -> list[dict]:
    """Unit-identity and associativity on all basis triples."""
    report: list[dict] = []
    a, v = c.algebra, c.space
    for (da, ia, d), mat in c.action.items():
        if (mat.rows, mat.cols) != (v.dim(d + da), v.dim(d)):
            report.append({"kind": "shape", "key": [da, ia, d]})
    if report:
        return report
    for d in v.degrees():
        for i in range(v.dim(d)):
            if c.act(0, a.unit, d, 1 << i) != 1 << i:
                report.append({"kind": "unit", "basis": [d, i]})
    apairs = [(d, i) for d in a.module.degrees() for i in range(a.module.dim(d))]
    for d in v.degrees():
        for i in range(v.dim(d)):
            for da, ia in apairs:
                for db, ib in apairs:
                    left = c.act(db, ib, d + da, c.act(da, ia, d, 1 << i))
                    prod = a.product(da, ia, db, ib)
                    right = c.act_element(da + db, prod, d, 1 << i)
                    if left != right:
                        report.append(
                            {"kind": "associativity",
                             "basis": [d, i], "algebra": [[da, ia], [db, ib]]}
                        )
    return report


def cap_action_from_algebra(a: GradedAlgebra) -> CapAction:
    """The algebra acting on itself by multiplication."""
    m = a.module
    action: dict[tuple[int, int, int], F2Matrix] = {}
    for da in m.degrees():
        for ia in range(m.dim(da)):
            for d in m.degrees():
                if d + da > m.hi:
                    continue
                cols = [a.product(d, i, da, ia) for i in range(m.dim(d))]
                mat = F2Matrix.from_cols(cols, m.dim(d + da))
                if not mat.is_zero():
                    action[(da, ia, d)] = mat
    return CapAction(a, m, action)


def trivial_cap_action(a: GradedAlgebra, v: UnstableModule) -> CapAction:
    """Only the unit acts (as the identity)."""
    action = {
        (0, a.unit, d): F2Matrix.identity(v.dim(d)) for d in v.degrees()
    }
    return CapAction(a, v, action)


def cap_length(c: CapAction) -> tuple[int | None, int, list]:
    """(k, bound, witness): the longest chain beta * a1 * ... * ak != 0
    with every a of positive degree, and bound k + 1.

    beta and the a's range over basis elements.  A zero space has no
    chains at all: k is undefined and the bound is 0.
    """
    v = c.space
    if v.total_dim() == 0:
        return (None, 0, [])
    apairs = [(d, i) for d in c.algebra.module.degrees() if d >= 1
              for i in range(c.algebra.module.dim(d))]
    first = min((d, i) for d in v.degrees() for i in range(v.dim(d)))
    best_k, best_witness = 0, {"beta": list(first), "alphas": []}
    for d in v.degrees():
        for i in range(v.dim(d)):
            stack = [(d, 1 << i, [])]
            while stack:
                cd, cvec, chain = stack.pop()
                if len(chain) > best_k:
                    best_k = len(chain)
                    best_witness = {"beta": [d, i], "alphas": list(chain)}
                for da, ia in apairs:
                    if cd + da > v.hi:
                        continue
                    w = c.act(da, ia, cd, cvec)
                    if w:
                        stack.append((cd + da, w, chain + [[da, ia]]))
    return (best_k, best_k + 1, best_witness)

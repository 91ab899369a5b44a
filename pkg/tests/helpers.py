"""Shared builders for the test suite."""

from __future__ import annotations

import random

from floerbound import morse
from floerbound.f2core import F2Matrix, kernel_basis
from floerbound.stmod import GradedAlgebra, algebra, module


def torus_algebra() -> GradedAlgebra:
    """Exterior algebra on two degree-1 generators: H*(T^2; Z/2).

    All squares vanish: Sq^1 x = x^2 = 0 and the top class xy has
    Sq^2(xy) = x^2 y^2 = 0.
    """
    m = module(
        0, 2,
        {0: ("1",), 1: ("x", "y"), 2: ("xy",)},
        {(1, 1): F2Matrix.zeros(1, 2)},
    )
    return algebra(m, 0, {(1, 0, 1, 1): 1})


def projective_space_algebra(n: int) -> GradedAlgebra:
    """H*(RP^n; Z/2) = F2[x]/(x^{n+1}) with Sq^j x^e = binom(e, j) x^{e+j}."""
    basis = {d: (f"x{d}" if d else "1",) for d in range(n + 1)}
    sq = {}
    for e in range(1, n + 1):
        for j in range(1, n - e + 1):
            if j <= e and (e - j) & j == 0:
                sq[(j, e)] = F2Matrix(1, 1, (1,))
    products = {}
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            if a + b <= n:
                products[(a, 0, b, 0)] = 1
    return algebra(module(0, n, basis, sq), 0, products)


def zero_cohomology_algebra() -> GradedAlgebra:
    """Only the unit: reduced cohomology is zero."""
    return algebra(module(0, 0, {0: ("1",)}, {}), 0, {})


def random_complex(rng: random.Random, n_generators: int) -> morse.MorseComplex:
    """A random valid Morse complex.

    Generators are attached in increasing action order; each boundary
    is a random cycle among the earlier generators one grading down,
    which makes d^2 = 0 and the action rule hold by construction and
    reaches every valid complex.
    """
    gens: list[tuple[str, int, float]] = []
    incidence: list[tuple[str, str]] = []
    for i in range(n_generators):
        grading = rng.randint(0, 3)
        name = f"g{i}"
        action = float(i) + rng.random() * 0.5
        current = morse.MorseComplex(
            tuple(morse.Generator(*t) for t in gens), frozenset(incidence)
        )
        lower = current.generators_in(grading - 1)
        vec = 0
        for v in kernel_basis(current.boundary_matrix(grading - 1)):
            if rng.random() < 0.5:
                vec ^= v
        for idx in range(len(lower)):
            if (vec >> idx) & 1:
                incidence.append((name, lower[idx].name))
        gens.append((name, grading, action))
    return morse.build_complex(gens, incidence)


def brute_force_homology_dims(cx: morse.MorseComplex) -> dict[int, int]:
    """Homology dimensions by exhaustive enumeration of kernel and image
    sizes (independent of Gaussian elimination)."""
    dims = {}
    for m in cx.gradings():
        dm = cx.boundary_matrix(m)
        n_cycles = sum(1 for v in range(1 << dm.cols) if dm.apply(v) == 0)
        dm1 = cx.boundary_matrix(m + 1)
        n_bounds = len({dm1.apply(v) for v in range(1 << dm1.cols)})
        dim = n_cycles.bit_length() - n_bounds.bit_length()
        if dim:
            dims[m] = dim
    return dims


def all_thresholds(cx: morse.MorseComplex) -> list[float]:
    """One threshold strictly below each action cluster, descending."""
    return sorted((a - 0.25 for a in cx.actions()), reverse=True)

"""Independent oracles shared by the test suite.

The Steenrod oracle evaluates words as operators on the truncated
polynomial algebra F2[x1,...,x6] (degrees <= 12), using only the Cartan
formula and Sq^1 x = x^2 -- no Adem relations.  The truncation is a
legitimate module because Steenrod operations raise degree, so the
operators of a word and of its admissible reduction must agree there.

Monomials are 6-tuples of exponents; a polynomial of fixed degree d is
a bitmask over the sorted monomial basis of degree d.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

N_VARS = 6
MAX_DEG = 12

Mono = tuple[int, ...]


@lru_cache(maxsize=None)
def basis(deg: int) -> tuple[Mono, ...]:
    """Sorted monomial basis of F2[x1..x6] in degree ``deg``."""
    out: list[Mono] = []

    def rec(prefix: tuple[int, ...], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), deg, N_VARS)
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def basis_index(deg: int) -> dict[Mono, int]:
    return {m: i for i, m in enumerate(basis(deg))}


def _binom_odd(n: int, k: int) -> bool:
    return 0 <= k <= n and (n - k) & k == 0


def sq_monomial(j: int, mono: Mono) -> list[Mono]:
    """Sq^j of a monomial via the total square, as a list of monomials.

    Sq(x^e) = sum_k binom(e, k) x^{e+k}, multiplicatively over the
    variables; Sq^j picks out the terms raising total degree by j.
    """
    results: list[Mono] = []

    def rec(i: int, left: int, acc: tuple[int, ...]) -> None:
        if i == N_VARS:
            if left == 0:
                results.append(acc)
            return
        e = mono[i]
        for k in range(min(e, left) + 1):
            if _binom_odd(e, k):
                rec(i + 1, left - k, acc + (e + k,))

    rec(0, j, ())
    return results


@lru_cache(maxsize=None)
def sq_matrix(j: int, deg: int) -> tuple[int, ...]:
    """Rows (one int bitmask per source monomial) of Sq^j: deg -> deg+j."""
    idx = basis_index(deg + j)
    rows = []
    for mono in basis(deg):
        bits = 0
        for image in sq_monomial(j, mono):
            bits ^= 1 << idx[image]
        rows.append(bits)
    return tuple(rows)


_matop_memo: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {}


def word_operator(word: tuple[int, ...], deg: int) -> tuple[int, ...]:
    """Operator of Sq^{i1}..Sq^{it} from degree ``deg`` (truncated at 12).

    The rightmost factor acts first.  Requires deg + sum(word) <= 12.
    Memoized over prefixes so sweeping all words shares work.
    """
    if not word:
        return tuple(1 << i for i in range(len(basis(deg))))
    key = (word, deg)
    got = _matop_memo.get(key)
    if got is not None:
        return got
    last = word[-1]
    first_step = sq_matrix(last, deg)
    rest = word_operator(word[:-1], deg + last)
    rows = []
    for bits in first_step:
        acc = 0
        while bits:
            low = bits & -bits
            acc ^= rest[low.bit_length() - 1]
            bits ^= low
        rows.append(acc)
    out = tuple(rows)
    _matop_memo[key] = out
    return out


def element_operator(words, deg: int) -> tuple[int, ...]:
    """Operator of an F2 sum of same-degree words from degree ``deg``."""
    words = list(words)
    if not words:
        return tuple(0 for _ in basis(deg))
    rows = [0] * len(basis(deg))
    for w in words:
        for i, bits in enumerate(word_operator(w, deg)):
            rows[i] ^= bits
    return tuple(rows)


def all_words(max_degree: int):
    """Every word (composition of positive integers) of total degree <= max."""
    for total in range(1, max_degree + 1):
        # compositions of ``total``: cut points in a row of ``total`` ones
        for cuts in range(total):
            for positions in combinations(range(1, total), cuts):
                parts = []
                prev = 0
                for p in list(positions) + [total]:
                    parts.append(p - prev)
                    prev = p
                yield tuple(parts)


def operators_agree(word: tuple[int, ...], reduced_words) -> bool:
    """Compare word vs reduced element on every source degree that fits."""
    wdeg = sum(word)
    for d in range(0, MAX_DEG - wdeg + 1):
        if word_operator(word, d) != element_operator(reduced_words, d):
            return False
    return True

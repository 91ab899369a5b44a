"""Exact arithmetic in the mod-2 Steenrod algebra.

A word ``(i1, ..., it)`` of positive integers denotes the composition
``Sq^{i1} . Sq^{i2} ... Sq^{it}`` (rightmost factor applied first); the
empty word is ``Sq^0``, the identity.  A word is admissible when each
exponent is at least twice its successor, and admissible words form a
basis of the algebra.  Inadmissible adjacent pairs ``Sq^a Sq^b`` with
``a < 2b`` rewrite by the Adem relation

    Sq^a Sq^b = sum_c binom(b - c - 1, a - 2c) Sq^{a+b-c} Sq^c   (mod 2),

and repeated rewriting of the leftmost inadmissible pair reaches a
unique admissible normal form.

Everything here is pure and deterministic; elements are immutable and
the memo tables only ever insert identical values for identical keys,
so concurrent readers are safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

Word = tuple[int, ...]


class InvalidWordError(ValueError):
    """A Steenrod word contained a non-positive exponent."""


class MixedDegreeError(ValueError):
    """A sum of words mixed total degrees."""


def _check_word(word: Sequence[int]) -> Word:
    w = tuple(word)
    for e in w:
        if e <= 0:
            raise InvalidWordError(f"exponent {e} in word {w} is not positive")
    return w


def is_admissible(word: Sequence[int]) -> bool:
    """True iff every exponent is at least twice its successor."""
    w = _check_word(word)
    return all(w[i] >= 2 * w[i + 1] for i in range(len(w) - 1))


def word_degree(word: Sequence[int]) -> int:
    return sum(word)


def _binom_odd(n: int, k: int) -> bool:
    """binom(n, k) mod 2 via Lucas."""
    if k < 0 or k > n:
        return False
    return (n - k) & k == 0


@lru_cache(maxsize=None)
def _adem_pair(a: int, b: int) -> tuple[Word, ...]:
    """Replacement words for the inadmissible pair Sq^a Sq^b (0 < a < 2b)."""
    out = []
    for c in range(a // 2 + 1):
        if _binom_odd(b - c - 1, a - 2 * c):
            out.append((a + b,) if c == 0 else (a + b - c, c))
    return tuple(out)


@lru_cache(maxsize=None)
def _reduce_word(word: Word) -> frozenset[Word]:
    """Admissible-basis expansion of a word, as a set of words (F2 terms)."""
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a < 2 * b:
            acc: set[Word] = set()
            for repl in _adem_pair(a, b):
                for term in _reduce_word(word[:i] + repl + word[i + 2 :]):
                    acc.symmetric_difference_update((term,))
            return frozenset(acc)
    return frozenset((word,))


@dataclass(frozen=True, eq=False)
class SteenrodElement:
    """An F2 sum of admissible words, all of one total degree.

    ``terms`` is a frozenset of admissible words (presence = coefficient
    one); ``degree`` is the common total degree, which for the zero
    element is whatever was declared at construction.  Zero elements
    compare equal whatever their declared degree.
    """

    terms: frozenset[Word]
    degree: int = field(default=0)

    def __post_init__(self) -> None:
        degs = {word_degree(w) for w in self.terms}
        if len(degs) > 1:
            raise MixedDegreeError(f"mixed degrees {sorted(degs)} in one element")
        if degs:
            object.__setattr__(self, "degree", degs.pop())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SteenrodElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[Word]:
        """Terms sorted lexicographically descending (rendering order)."""
        return sorted(self.terms, reverse=True)

    def __add__(self, other: "SteenrodElement") -> "SteenrodElement":
        if self.terms and other.terms and self.degree != other.degree:
            raise MixedDegreeError(
                f"cannot add degrees {self.degree} and {other.degree}"
            )
        deg = self.degree if self.terms else other.degree
        return SteenrodElement(self.terms ^ other.terms, deg)

    def __mul__(self, other: "SteenrodElement") -> "SteenrodElement":
        return multiply(self, other)

    def __str__(self) -> str:
        return render(self)


def zero(degree: int = 0) -> SteenrodElement:
    return SteenrodElement(frozenset(), degree)


def unit() -> SteenrodElement:
    """Sq^0."""
    return SteenrodElement(frozenset(((),)), 0)


def sq(j: int) -> SteenrodElement:
    """The generator Sq^j (Sq^0 is the unit)."""
    if j < 0:
        raise InvalidWordError(f"Sq^{j} undefined for negative j")
    if j == 0:
        return unit()
    return SteenrodElement(frozenset(((j,),)), j)


def adem_reduce(word: Sequence[int]) -> SteenrodElement:
    """Admissible-basis representative of the composition ``word``.

    Idempotent on admissible words and degree preserving.  Exponents
    equal to zero are identity factors and are dropped before reduction.
    """
    w = tuple(word)
    if any(e < 0 for e in w):
        raise InvalidWordError(f"negative exponent in {w}")
    w = tuple(e for e in w if e != 0)
    _check_word(w)
    return SteenrodElement(_reduce_word(w), word_degree(w))


def multiply(a: SteenrodElement, b: SteenrodElement) -> SteenrodElement:
    """Composition a.b, normalized to the admissible basis."""
    acc: set[Word] = set()
    for wa in a.terms:
        for wb in b.terms:
            acc.symmetric_difference_update(_reduce_word(wa + wb))
    return SteenrodElement(frozenset(acc), a.degree + b.degree)


def degree(e: SteenrodElement) -> int:
    return e.degree


_conjugate_memo: dict[int, SteenrodElement] = {}


def conjugate(j: int) -> SteenrodElement:
    """Antipode c(Sq^j), by the recursion c(Sq^j) = sum_{l<j} c(Sq^l) Sq^{j-l}.

    Satisfies sum_{l=0}^{j} c(Sq^l) Sq^{j-l} = 0 exactly, with
    c(Sq^0) = Sq^0.
    """
    if j < 0:
        raise InvalidWordError(f"conjugate undefined for negative {j}")
    if j == 0:
        return unit()
    got = _conjugate_memo.get(j)
    if got is None:
        acc = zero(j)
        for el in range(j):
            acc = acc + multiply(conjugate(el), sq(j - el))
        got = acc
        _conjugate_memo[j] = got
    return got


# --- text form -------------------------------------------------------------
#
# Elements render as "Sq^a Sq^b + Sq^c ..." with terms sorted
# lexicographically descending; the unit renders as "Sq^0" and the zero
# element as "0".  The parser accepts the same grammar (whitespace
# between factors optional, Sq^0 factors allowed and dropped).

_TOKEN = re.compile(r"Sq\^(\d+)\s*")


def render(e: SteenrodElement) -> str:
    if e.is_zero():
        return "0"
    parts = []
    for w in e.sorted_terms():
        parts.append("Sq^0" if not w else " ".join(f"Sq^{i}" for i in w))
    return " + ".join(parts)


def parse_words(text: str) -> list[Word]:
    """Parse a sum of words; Sq^0 factors are dropped, words kept raw."""
    words: list[Word] = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if chunk == "0":
            continue
        pos = 0
        exps: list[int] = []
        while pos < len(chunk):
            m = _TOKEN.match(chunk, pos)
            if not m:
                raise ValueError(f"cannot parse {chunk[pos:]!r} as Steenrod word")
            exps.append(int(m.group(1)))
            pos = m.end()
        if not exps:
            raise ValueError(f"empty term in {text!r}")
        words.append(tuple(e for e in exps if e != 0))
    return words


def parse(text: str) -> SteenrodElement:
    """Parse and normalize an element (sum of arbitrary words)."""
    acc = zero()
    first = True
    for w in parse_words(text):
        term = adem_reduce(w)
        acc = term if first else acc + term
        first = False
    return acc

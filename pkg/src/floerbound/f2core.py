"""Dense linear algebra over F2 using int bitsets.

A matrix of shape (rows, cols) represents a map F2^cols -> F2^rows.
Each row is stored as a Python int whose bit c is the entry in column
c; CPython ints are packed machine words, so elimination works a word
at a time.  Vectors are ints over the relevant basis.  All values are
immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class F2Matrix:
    rows: int
    cols: int
    data: tuple[int, ...]  # one int per row, bit c = entry (row, c)

    def __post_init__(self) -> None:
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        mask = (1 << self.cols) - 1
        for r, bits in enumerate(self.data):
            if bits & ~mask:
                raise ValueError(f"row {r} has bits beyond column {self.cols}")

    @staticmethod
    def zeros(rows: int, cols: int) -> "F2Matrix":
        return F2Matrix(rows, cols, (0,) * rows)

    @staticmethod
    def identity(n: int) -> "F2Matrix":
        return F2Matrix(n, n, tuple(1 << i for i in range(n)))

    @staticmethod
    def from_entries(rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> "F2Matrix":
        """Build from (row, col) positions of ones (duplicates cancel)."""
        data = [0] * rows
        for r, c in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside {rows}x{cols}")
            data[r] ^= 1 << c
        return F2Matrix(rows, cols, tuple(data))

    @staticmethod
    def from_cols(cols_bits: Sequence[int], rows: int) -> "F2Matrix":
        """Build from column bit vectors (bits over the rows)."""
        data = [0] * rows
        for c, bits in enumerate(cols_bits):
            while bits:
                low = bits & -bits
                data[low.bit_length() - 1] |= 1 << c
                bits ^= low
        return F2Matrix(rows, len(cols_bits), tuple(data))

    @staticmethod
    def from_rows(rows_01: Sequence[Sequence[int]], cols: int | None = None) -> "F2Matrix":
        if cols is None:
            cols = len(rows_01[0]) if rows_01 else 0
        data = []
        for row in rows_01:
            bits = 0
            for c, v in enumerate(row):
                if v & 1:
                    bits |= 1 << c
            data.append(bits)
        return F2Matrix(len(rows_01), cols, tuple(data))

    def entry(self, r: int, c: int) -> int:
        return (self.data[r] >> c) & 1

    def column(self, c: int) -> int:
        """Column c as a bit vector over the rows."""
        bits = 0
        for r, row in enumerate(self.data):
            bits |= ((row >> c) & 1) << r
        return bits

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.cols, self.rows, tuple(self.column(c) for c in range(self.cols)))

    def apply(self, vec: int) -> int:
        """Image of a column vector (bits over cols) as bits over rows."""
        out = 0
        for r, row in enumerate(self.data):
            if (row & vec).bit_count() & 1:
                out |= 1 << r
        return out

    def compose(self, other: "F2Matrix") -> "F2Matrix":
        """self . other (apply ``other`` first)."""
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.cols} != {other.rows}")
        # row r of the product is the XOR of other's rows selected by
        # the bits of row r of self
        out = []
        for bits in self.data:
            acc = 0
            while bits:
                low = bits & -bits
                acc ^= other.data[low.bit_length() - 1]
                bits ^= low
            out.append(acc)
        return F2Matrix(self.rows, other.cols, tuple(out))

    def add(self, other: "F2Matrix") -> "F2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in add")
        return F2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def is_zero(self) -> bool:
        return not any(self.data)


def rank_of_rows(rows: Iterable[int]) -> int:
    """Rank of a list of bit-vector rows via Gaussian elimination."""
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
    return len(pivots)


def rank(m: F2Matrix) -> int:
    return rank_of_rows(m.data)


def kernel_basis(m: F2Matrix) -> list[int]:
    """Basis of {x : m x = 0}, as bit vectors over the columns.

    Size is always cols - rank.  Computed by eliminating the row space
    and back-solving the free columns.
    """
    # Track (reduced row, pivot column); standard column-pivot elimination.
    reduced: list[tuple[int, int]] = []
    for row in m.data:
        for rrow, pc in reduced:
            if (row >> pc) & 1:
                row ^= rrow
        if row:
            pc = row.bit_length() - 1
            reduced = [
                (rr ^ row if (rr >> pc) & 1 else rr, rpc) for rr, rpc in reduced
            ]
            reduced.append((row, pc))
    pivot_cols = {pc for _, pc in reduced}
    basis = []
    for free in range(m.cols):
        if free in pivot_cols:
            continue
        vec = 1 << free
        for rrow, pc in reduced:
            if (rrow >> free) & 1:
                vec |= 1 << pc
        basis.append(vec)
    return basis


def image_basis(m: F2Matrix) -> list[int]:
    """Basis of the column space, as bit vectors over the rows."""
    pivots: list[int] = []
    for c in range(m.cols):
        row = m.column(c)
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
    return pivots


def same_span(a: Sequence[int], b: Sequence[int]) -> bool:
    ra = rank_of_rows(a)
    rb = rank_of_rows(b)
    return ra == rb == rank_of_rows(list(a) + list(b))


class F2Span:
    """Growable row space with membership tests and coordinates.

    Keeps, for each reduced pivot row, the combination of the original
    inserted vectors producing it, so ``coordinates`` can answer in
    terms of the inserted generators.
    """

    def __init__(self) -> None:
        self._rows: list[tuple[int, int]] = []  # (reduced vector, combo bits)
        self._count = 0

    def __len__(self) -> int:
        return len(self._rows)

    def add(self, vec: int) -> bool:
        """Insert a generator; True if it enlarged the span."""
        combo = 1 << self._count
        self._count += 1
        for rvec, rcombo in self._rows:
            low = rvec & -rvec
            if vec & low:
                vec ^= rvec
                combo ^= rcombo
        if vec:
            self._rows.append((vec, combo))
            return True
        return False

    def contains(self, vec: int) -> bool:
        for rvec, _ in self._rows:
            low = rvec & -rvec
            if vec & low:
                vec ^= rvec
        return vec == 0

    def coordinates(self, vec: int) -> int | None:
        """Combo bits over inserted generators expressing vec, or None."""
        combo = 0
        for rvec, rcombo in self._rows:
            low = rvec & -rvec
            if vec & low:
                vec ^= rvec
                combo ^= rcombo
        return combo if vec == 0 else None


@dataclass(frozen=True)
class GradedMap:
    """A degree-homogeneous map between graded F2 spaces.

    ``blocks[d]`` maps the degree-d piece of the source to the degree
    d+shift piece of the target.  Missing blocks are zero.
    """

    shift: int
    source_dims: Mapping[int, int]
    target_dims: Mapping[int, int]
    blocks: Mapping[int, F2Matrix]

    def __post_init__(self) -> None:
        for d, m in self.blocks.items():
            want_cols = self.source_dims.get(d, 0)
            want_rows = self.target_dims.get(d + self.shift, 0)
            if (m.rows, m.cols) != (want_rows, want_cols):
                raise ValueError(
                    f"block at degree {d} is {m.rows}x{m.cols}, "
                    f"expected {want_rows}x{want_cols}"
                )

    def block(self, d: int) -> F2Matrix:
        got = self.blocks.get(d)
        if got is not None:
            return got
        return F2Matrix.zeros(self.target_dims.get(d + self.shift, 0), self.source_dims.get(d, 0))


def compose_graded(g: GradedMap, f: GradedMap) -> GradedMap:
    """g . f (apply f first)."""
    if dict(f.target_dims) != dict(g.source_dims):
        raise ValueError("target of f does not match source of g")
    degrees = set(f.source_dims) | set(f.blocks)
    blocks = {}
    for d in degrees:
        m = g.block(d + f.shift).compose(f.block(d))
        if not m.is_zero():
            blocks[d] = m
    return GradedMap(f.shift + g.shift, f.source_dims, g.target_dims, blocks)


def check_exact(f: GradedMap, g: GradedMap) -> tuple[bool, list[dict]]:
    """Is image(f) = kernel(g) in every degree of the middle space?

    Returns (exact, report); the report lists one record per degree of
    the middle space, and the failing degrees carry the dimensions that
    disagree.  Raises on shape mismatch between f's target and g's
    source.
    """
    if dict(f.target_dims) != dict(g.source_dims):
        raise ValueError("target of f does not match source of g")
    report = []
    ok = True
    for e in sorted(set(f.target_dims) | set(g.source_dims)):
        dim_e = f.target_dims.get(e, 0)
        fb = f.block(e - f.shift)
        gb = g.block(e)
        composite_zero = gb.compose(fb).is_zero()
        rank_f = rank(fb)
        dim_ker = dim_e - rank(gb)
        exact_here = composite_zero and rank_f == dim_ker
        if not exact_here:
            ok = False
        report.append(
            {
                "degree": e,
                "exact": exact_here,
                "dim": dim_e,
                "dim_image": rank_f,
                "dim_kernel": dim_ker,
                "composite_zero": composite_zero,
            }
        )
    return ok, report

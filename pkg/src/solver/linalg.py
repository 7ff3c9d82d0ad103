"""
Exact sparse elimination over the rationals.

Rows are scaled to primitive integer vectors and reduced Gauss-Jordan style with
fraction-free updates (row_i <- p*row_i - f*row_pivot, then divide by the content).
Among candidate rows the pivot with the smallest bit length is taken to limit growth;
the kernel does not depend on this choice.
"""
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


def _primitive(row: dict[int, int]) -> dict[int, int]:
    content = 0
    for value in row.values():
        content = gcd(content, value)
        if content == 1:
            break
    if content > 1:
        row = {c: v // content for c, v in row.items()}
    # Sign convention: first nonzero entry positive
    if row and row[min(row)] < 0:
        row = {c: -v for c, v in row.items()}
    return row


def _integer_row(row: Sequence[Fraction] | dict[int, Fraction]) -> dict[int, int]:
    items = row.items() if isinstance(row, dict) else enumerate(row)
    entries = {c: Fraction(v) for c, v in items if v}
    if not entries:
        return {}
    scale = lcm(*(v.denominator for v in entries.values()))
    return _primitive({c: int(v * scale) for c, v in entries.items()})


@dataclass(frozen=True)
class EchelonForm:
    """Reduced rows (integer, primitive) keyed by their pivot column."""

    ncols: int
    pivots: dict[int, dict[int, int]]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]


def reduce_rows(rows: Sequence[Sequence[Fraction] | dict[int, Fraction]], ncols: int) -> EchelonForm:
    work = [r for r in (_integer_row(row) for row in rows) if r]
    pivots: dict[int, dict[int, int]] = {}
    for col in range(ncols):
        candidates = [i for i, r in enumerate(work) if col in r]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: (abs(work[i][col]).bit_length(), len(work[i])))
        pivot_row = work.pop(best)
        p = pivot_row[col]

        def eliminate(row: dict[int, int]) -> dict[int, int]:
            f = row.get(col)
            if not f:
                return row
            merged = {c: p * v for c, v in row.items()}
            for c, v in pivot_row.items():
                merged[c] = merged.get(c, 0) - f * v
            return _primitive({c: v for c, v in merged.items() if v})

        work = [r for r in (eliminate(r) for r in work) if r]
        pivots = {pc: eliminate(r) for pc, r in pivots.items()}
        pivots[col] = pivot_row
    return EchelonForm(ncols=ncols, pivots=pivots)


def rank(rows, ncols: int) -> int:
    return reduce_rows(rows, ncols).rank


def null_space_vectors(rows, ncols: int) -> list[list[Fraction]]:
    """
    Rational kernel basis, one vector per free column, each scaled so that its first
    nonzero entry is 1.
    """
    echelon = reduce_rows(rows, ncols)
    basis = []
    for free in echelon.free_columns:
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for pc, row in echelon.pivots.items():
            if free in row:
                vector[pc] = Fraction(-row[free], row[pc])
        lead = next(v for v in vector if v)
        basis.append([v / lead for v in vector])
    return basis


def in_row_space(vectors: Sequence[Sequence[Fraction]], candidate: Sequence[Fraction]) -> bool:
    """True iff candidate is a rational combination of vectors."""
    ncols = len(candidate)
    return rank(list(vectors) + [candidate], ncols) == rank(vectors, ncols)

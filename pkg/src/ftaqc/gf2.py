"""GF(2) linear algebra on int bitsets.

Rows are Python ints; bit ``j`` of a row is column ``j``. Used for
independence and membership tests on symplectic Pauli vectors.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence


def rank(rows: Iterable[int]) -> int:
    """Rank over GF(2)."""
    return len(_echelon(list(rows))[0])


def _echelon(rows: list[int]) -> tuple[list[int], list[int]]:
    # Returns (basis, combos): basis[i] == XOR of original rows flagged in combos[i].
    basis: list[int] = []
    combos: list[int] = []
    for idx, row in enumerate(rows):
        combo = 1 << idx
        for b, c in zip(basis, combos):
            if row ^ b < row:
                row ^= b
                combo ^= c
        if row:
            # keep basis sorted by leading bit, descending
            pos = 0
            while pos < len(basis) and basis[pos] > row:
                pos += 1
            basis.insert(pos, row)
            combos.insert(pos, combo)
    return basis, combos


def in_span(vec: int, rows: Sequence[int]) -> bool:
    return solve(vec, rows) is not None


def solve(vec: int, rows: Sequence[int]) -> Optional[int]:
    """Find a subset of ``rows`` whose XOR equals ``vec``.

    Returns the subset as a bitmask over row indices, or None when ``vec``
    is outside the row span.
    """
    basis, combos = _echelon(list(rows))
    combo = 0
    for b, c in zip(basis, combos):
        if vec ^ b < vec:
            vec ^= b
            combo ^= c
    return combo if vec == 0 else None


def span(rows: Sequence[int]) -> list[int]:
    """All 2^r elements of the row span (r = number of rows; rows assumed independent)."""
    out = [0]
    for r in rows:
        out += [v ^ r for v in out]
    return out

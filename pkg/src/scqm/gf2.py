"""Dense GF(2) linear algebra on Python integers used as bit rows.

Every row is an ``int`` whose bit ``j`` is column ``j``.  Pivots are always the
lowest set bit, so reduced forms are canonical and reproducible.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def lowbit(v: int) -> int:
    """Index of the lowest set bit of a nonzero integer."""
    return (v & -v).bit_length() - 1


class Echelon:
    """Incremental row echelon basis with optional combination tracking.

    ``tags[p]`` records which input rows were XORed together to form the basis
    row with pivot ``p``.  Tags are themselves bit masks over input positions.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[int, int] = {}
        self.tags: dict[int, int] = {}
        self.track = track
        self._count = 0

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        while v:
            p = lowbit(v)
            row = self.rows.get(p)
            if row is None:
                break
            v ^= row
            if self.track:
                tag ^= self.tags[p]
        return v, tag

    def add(self, v: int) -> bool:
        """Insert a row; return True when it was independent of the basis."""
        tag = (1 << self._count) if self.track else 0
        self._count += 1
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        p = lowbit(v)
        self.rows[p] = v
        if self.track:
            self.tags[p] = tag
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def express(self, v: int) -> int | None:
        """Mask of input rows whose XOR equals ``v``, or None if outside the span."""
        if not self.track:
            raise ValueError("combination tracking is disabled")
        r, tag = self.reduce(v, 0)
        return tag if r == 0 else None


def rank(rows: Iterable[int]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return len(ech)


def independent(rows: Sequence[int]) -> list[int]:
    """Indices of a maximal independent subset, greedy in input order."""
    ech = Echelon()
    return [i for i, r in enumerate(rows) if ech.add(r)]


def rref(rows: Iterable[int]) -> dict[int, int]:
    """Fully reduced row echelon form keyed by pivot column."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    piv = dict(ech.rows)
    for p in sorted(piv):
        row = piv[p]
        for q in piv:
            if q != p and (piv[q] >> p) & 1:
                piv[q] ^= row
    return piv


def nullspace(rows: Iterable[int], ncols: int) -> list[int]:
    """Basis of ``{v : popcount(r & v) even for every row r}``.

    The basis has one vector per free column, ordered by that column.
    """
    piv = rref(rows)
    out = []
    for f in range(ncols):
        if f in piv:
            continue
        v = 1 << f
        for p, row in piv.items():
            if (row >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


def bits(v: int) -> list[int]:
    """Indices of set bits in increasing order."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def from_bits(idx: Iterable[int]) -> int:
    v = 0
    for i in idx:
        v ^= 1 << i
    return v

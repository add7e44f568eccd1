"""Symmetric operators, local move sets and syndrome bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from . import gf2
from .complex import CellComplex, Facet
from .model import CodeModel
from .pauli import PauliOperator, centralizer, commutes


@dataclass(frozen=True)
class Syndrome:
    bits: int
    m: int
    gap: int = 2

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def energy(self) -> int:
        return self.gap * self.bits.bit_count()

    def flipped(self) -> list[int]:
        return gf2.bits(self.bits)


def is_symmetric(p: PauliOperator, model: CodeModel) -> bool:
    return all(commutes(p, g) for g in model.symmetry.generators)


def syndrome_of(p: PauliOperator, model: CodeModel) -> Syndrome:
    return Syndrome(model.syndrome(p), model.m, model.gap)


@dataclass
class MoveSet:
    """Local Paulis with their precomputed syndrome and logical-class deltas."""

    moves: list[PauliOperator]
    deltas: list[int]
    classes: list[int]
    radius: int
    m: int
    n_class_bits: int = 2
    _packed: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.moves)

    @property
    def words(self) -> int:
        return (self.m + self.n_class_bits + 63) // 64

    def state_delta(self, i: int) -> int:
        """Syndrome delta with class bits appended above the term bits."""
        return self.deltas[i] | (self.classes[i] << self.m)

    def packed(self):
        """CSR arrays ``(ptr, word, mask, weight)`` over 64-bit state words."""
        if "csr" not in self._packed:
            ptr, word, mask = [0], [], []
            for i in range(len(self.moves)):
                v = self.state_delta(i)
                w = 0
                while v:
                    chunk = v & 0xFFFFFFFFFFFFFFFF
                    if chunk:
                        word.append(w)
                        mask.append(chunk)
                    v >>= 64
                    w += 1
                ptr.append(len(word))
            weight = np.array([d.bit_count() for d in self.deltas], dtype=np.int64)
            self._packed["csr"] = (np.array(ptr, dtype=np.int64), np.array(word, dtype=np.int64),
                                   np.array(mask, dtype=np.uint64), weight)
        return self._packed["csr"]

    def subset(self, keep) -> "MoveSet":
        keep = list(keep)
        return MoveSet([self.moves[i] for i in keep], [self.deltas[i] for i in keep],
                       [self.classes[i] for i in keep], self.radius, self.m, self.n_class_bits)


def make_moveset(model: CodeModel, ops, radius: int) -> MoveSet:
    seen, moves = set(), []
    for p in ops:
        key = (p.x, p.z)
        if key in seen or p.is_identity():
            continue
        seen.add(key)
        moves.append(PauliOperator(p.n, p.x, p.z))
    deltas = [model.syndrome(p) for p in moves]
    classes = [model.logical_class(p) for p in moves]
    return MoveSet(moves, deltas, classes, radius, model.m, max(2, 2 * len(model.logicals)))


def single_qubit_moves(model: CodeModel) -> MoveSet:
    """Every single-qubit X, Y and Z, symmetric or not."""
    ops = [PauliOperator.single(model.n, q, c) for q in range(model.n) for c in "XZY"]
    return make_moveset(model, ops, 0)


def balls(model: CodeModel, radius: int) -> list[list[int]]:
    """Qubit sets of every lattice ball of the given radius.

    On cubic complexes a ball is the block of cells within Chebyshev distance
    ``radius`` (in half lattice steps) of some cell.  On colexes the radius-1
    balls are face supports and larger radii grow them by whole faces.
    """
    cx = model.complex
    if isinstance(cx, CellComplex):
        return _cubic_balls(cx, radius)
    return cx.balls(radius)


def _cubic_balls(cx: CellComplex, radius: int) -> list[list[int]]:
    out, seen = [], set()
    offsets = list(iproduct(range(-radius, radius + 1), repeat=3))
    for d in range(4):
        for c in cx.cells[d]:
            qs = []
            for o in offsets:
                hit = cx.index.get(cx.wrap((c[0] + o[0], c[1] + o[1], c[2] + o[2])))
                if hit is not None and hit in cx.qubit_index:
                    qs.append(cx.qubit_index[hit])
            key = tuple(sorted(set(qs)))
            if key and key not in seen:
                seen.add(key)
                out.append(list(key))
    return out


def _min_weight_basis(vectors: list[int], limit: int = 16) -> list[int]:
    """Minimum-weight basis of a GF(2) span.

    Small spans are enumerated exhaustively and reduced greedily by weight,
    which is optimal for this matroid.  Larger spans fall back to pairwise
    weight reduction of the given basis.
    """
    k = len(vectors)
    if k == 0:
        return []
    if k <= limit:
        elems = [0] * (1 << k)
        for i in range(1, 1 << k):
            low = (i & -i).bit_length() - 1
            elems[i] = elems[i & (i - 1)] ^ vectors[low]
        elems = sorted(set(elems[1:]), key=lambda v: (v.bit_count(), v))
        ech, out = gf2.Echelon(), []
        for v in elems:
            if ech.add(v):
                out.append(v)
                if len(out) == k:
                    break
        return out
    basis = list(vectors)
    improved = True
    while improved:
        improved = False
        for i in range(k):
            for j in range(k):
                if i != j:
                    t = basis[i] ^ basis[j]
                    if t.bit_count() < basis[i].bit_count():
                        basis[i] = t
                        improved = True
    return sorted(basis, key=lambda v: (v.bit_count(), v))


def _kernel_on(sites: list[int], rows: list[int]) -> list[int]:
    """Subsets of ``sites`` meeting every row (a qubit mask) evenly, as masks."""
    local = []
    for r in rows:
        v = 0
        for j, q in enumerate(sites):
            if (r >> q) & 1:
                v |= 1 << j
        if v:
            local.append(v)
    out = []
    for v in gf2.nullspace(local, len(sites)):
        out.append(gf2.from_bits(sites[j] for j in gf2.bits(v)))
    return out


def ball_generators(model: CodeModel, sites: list[int]) -> list[PauliOperator]:
    """Low-weight generators of the symmetric operators supported on ``sites``."""
    n = model.n
    gens = model.symmetry.generators
    if all(g.x == 0 or g.z == 0 for g in gens):
        xrows = [g.z for g in gens if g.z]
        zrows = [g.x for g in gens if g.x]
        out = []
        for rows, make in ((xrows, lambda v: PauliOperator(n, v, 0)),
                           (zrows, lambda v: PauliOperator(n, 0, v))):
            touched = 0
            for r in rows:
                touched |= r
            free = [q for q in sites if not (touched >> q) & 1]
            bound = [q for q in sites if (touched >> q) & 1]
            out.extend(make(1 << q) for q in free)
            out.extend(make(v) for v in _min_weight_basis(_kernel_on(bound, rows)))
        return out
    return list(centralizer(model.symmetry, sites).generators)


def derive_moveset(model: CodeModel, radius: int = 1) -> MoveSet:
    """Union over radii up to ``radius`` of per-ball symmetric generators.

    Generators commuting with every term are dropped: they either act as
    stabilizers (no-ops) or are bare logicals that fit inside one ball on a
    lattice too small to protect anything.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    ops = []
    for r in range(1, radius + 1):
        for sites in balls(model, r):
            ops.extend(ball_generators(model, sites))
    full = make_moveset(model, ops, radius)
    return full.subset(i for i, d in enumerate(full.deltas) if d)


def apply_word(model: CodeModel, moves: MoveSet, word) -> tuple[PauliOperator, int, int]:
    """Accumulated operator, syndrome and class after applying move indices."""
    op = PauliOperator(model.n)
    s = c = 0
    for i in word:
        p = moves.moves[i]
        op = PauliOperator(model.n, op.x ^ p.x, op.z ^ p.z)
        s ^= moves.deltas[i]
        c ^= moves.classes[i]
    return op, s, c


# -- structural validation of syndromes ---------------------------------------

@dataclass
class Verdict:
    valid: bool
    reasons: list[str] = field(default_factory=list)
    cells: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def validate_reachable(s: Syndrome | int, model: CodeModel) -> Verdict:
    """Check a syndrome against the conservation laws of the symmetric sector."""
    bits = s.bits if isinstance(s, Syndrome) else s
    fam = model.family
    if fam.startswith("rbh"):
        return _validate_rbh(bits, model)
    if fam == "gcc":
        from .gcc import flux_check
        return flux_check(model.meta["code"], bits)
    raise ValueError(f"no structural check for model family {fam!r}")


def conservation_masks(model: CodeModel) -> list[int]:
    """For each symmetry generator, the mask of terms whose product it is."""
    cached = model.meta.get("_conservation")
    if cached is None:
        stab = model.stabilizer()
        cached = []
        for g in model.symmetry.generators:
            idx = stab.express(g)
            if idx is None:
                raise ValueError("symmetry generator is not a product of terms")
            cached.append(gf2.from_bits(idx))
        model.meta["_conservation"] = cached
    return cached


def _validate_rbh(bits: int, model: CodeModel) -> Verdict:
    """A symmetric error commutes with every generator, and each generator is
    a product of terms, so every generator sees an even number of flipped
    terms.  A lone boundary anyon without its bulk string breaks this at the
    vertex generator that ties the anyon to the adjacent dual edge."""
    names = model.meta.get("symmetry_labels", [])
    reasons = []
    for i, mask in enumerate(conservation_masks(model)):
        if (bits & mask).bit_count() & 1:
            where = names[i] if i < len(names) else ("generator", i)
            reasons.append(f"odd flux through {where[0]} {where[1]}")
    return Verdict(not reasons, reasons)


def reachable_classes(moves: MoveSet) -> list[int]:
    """Basis of logical classes produced by move words that end at vacuum.

    With the syndrome in the low bits, echelon rows pivoting above them carry
    no syndrome, and only those rows can combine to a vacuum-to-vacuum word.
    """
    ech = gf2.Echelon()
    for i in range(len(moves)):
        ech.add(moves.state_delta(i))
    return [r >> moves.m for p, r in sorted(ech.rows.items()) if p >= moves.m]

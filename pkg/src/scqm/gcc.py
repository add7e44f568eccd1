"""Gauge color codes on tetrahedral 3-colexes.

Every face carries an X and a Z gauge generator and every 3-cell an X and a
Z stabilizer.  Fixing one color ``b``, the faces touching a ``b`` cell (or the
``b`` facet) form a commuting set whose Hamiltonian has the stabilizers as a
1-form symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .colex import COLORS, Colex, bfs, complement, simplicial_graph, validate_colex
from .model import CodeModel
from .pauli import PauliGroup, PauliOperator, product
from .symmetry import Verdict


class GaugeCodeError(ValueError):
    pass


@dataclass
class GaugeCode:
    colex: Colex
    b: str
    gauge_generators: PauliGroup
    stabilizer: PauliGroup
    commuting_faces: list[int]
    commuting_terms: list[PauliOperator]
    bare_logicals: tuple[PauliOperator, PauliOperator]
    model: CodeModel = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.colex.n_qubits

    def face_ends(self, f: int) -> list:
        """Simplicial endpoints of a face: its 3-cells and any virtual facet colors."""
        return list(self.colex.face_cells(f)) + list(self.colex.face_facets[f])

    def end_color(self, end) -> str:
        return end if isinstance(end, str) else self.colex.cell_color[end]

    def decompositions(self, c: int) -> list[list[int]]:
        """Face lists whose gauge products give the stabilizer on 3-cell ``c``.

        A cell of color ``k != b`` has one: its faces of the color pair
        missing both ``k`` and ``b``.  A ``b`` cell has three, one per color
        pair drawn from the other colors.
        """
        cx, k = self.colex, self.colex.cell_color[c]
        if k != self.b:
            pairs = [complement(k + self.b)]
        else:
            rest = complement(self.b)
            pairs = [complement(self.b + u) for u in rest]
        return [[f for f in cx.cell_faces[c] if cx.face_color[f] == p] for p in pairs]


def _face_op(cx: Colex, f: int, letter: str) -> PauliOperator:
    qs = cx.faces[f]
    n = cx.n_qubits
    return PauliOperator.from_support(n, xs=qs) if letter == "X" else PauliOperator.from_support(n, zs=qs)


def build_gcc(colex: Colex, b: str = "b", check: bool = True) -> GaugeCode:
    if b not in COLORS:
        raise GaugeCodeError(f"unknown color {b!r}")
    if check:
        errs = validate_colex(colex)
        if errs:
            raise GaugeCodeError("invalid colex: " + "; ".join(errs[:3]))
    n = colex.n_qubits
    gauge = [_face_op(colex, f, s) for f in range(len(colex.faces)) for s in "XZ"]
    stabs = []
    for c in range(len(colex.cells)):
        stabs.append(PauliOperator.from_support(n, xs=colex.cells[c]))
        stabs.append(PauliOperator.from_support(n, zs=colex.cells[c]))
    code = GaugeCode(colex, b, PauliGroup(n, gauge), PauliGroup(n, stabs), [], [],
                     (PauliOperator.from_support(n, xs=range(n)),
                      PauliOperator.from_support(n, zs=range(n))))
    faces = [f for f in range(len(colex.faces))
             if any(code.end_color(e) == b for e in code.face_ends(f))]
    code.commuting_faces = faces
    terms = [_face_op(colex, f, "X") for f in faces] + [_face_op(colex, f, "Z") for f in faces]
    labels = [("GX", f) for f in faces] + [("GZ", f) for f in faces]
    code.commuting_terms = terms
    names = [("cell", c) for c in range(len(colex.cells)) for _ in "XZ"]
    meta = {"family": "gcc", "size": colex.size, "b": b, "code": code,
            "symmetry_labels": names}
    code.model = CodeModel(colex, terms, code.stabilizer, [code.bare_logicals], labels, 2, meta)
    return code


def stabilizer_products(code: GaugeCode) -> dict[str, bool]:
    """Check that each gauge-face decomposition reproduces its stabilizer."""
    cx, n = code.colex, code.n
    ok_k = ok_b = True
    for c in range(len(cx.cells)):
        for fs in code.decompositions(c):
            for s in "XZ":
                prod = product([_face_op(cx, f, s) for f in fs], n)
                target = PauliOperator.from_support(n, **{("xs" if s == "X" else "zs"): cx.cells[c]})
                if (prod.x, prod.z) != (target.x, target.z):
                    if cx.cell_color[c] == code.b:
                        ok_b = False
                    else:
                        ok_k = False
    return {"non_b_cells": ok_k, "b_cells_three_ways": ok_b}


def _term_index(code: GaugeCode) -> dict[tuple[str, int], int]:
    cached = code.__dict__.get("_tindex")
    if cached is None:
        cached = {lab: i for i, lab in enumerate(code.model.labels)}
        code.__dict__["_tindex"] = cached
    return cached


def flux_check(code: GaugeCode, bits: int) -> Verdict:
    """Color-flux conservation at every 3-cell.

    An error commuting with the stabilizers flips an even number of terms in
    each decomposition of each stabilizer, separately for the X and Z terms.
    """
    idx = _term_index(code)
    reasons, bad = [], []
    for c in range(len(code.colex.cells)):
        odd = False
        for fs in code.decompositions(c):
            for s in "XZ":
                if sum((bits >> idx[("G" + s, f)]) & 1 for f in fs) & 1:
                    odd = True
        if odd:
            bad.append(c)
            reasons.append(f"flux not conserved at {code.colex.cell_color[c]} cell {c}")
    return Verdict(not bad, reasons, bad)


def violated_cells(code: GaugeCode, bits: int) -> list[int]:
    return flux_check(code, bits).cells


def flux_lengths(code: GaugeCode) -> list[tuple[int, int, int, int]]:
    """Per outer-colex vertex, the three shortest flux-string lengths.

    A string of color pair P ends on the outer facet and on the facet ``k``
    with ``{k, b}`` the complement of P.  Its dual path alternates ``k`` and
    ``b`` cells and its length counts crossed faces, both end faces included.
    """
    cx, b = code.colex, code.b
    adj = simplicial_graph(cx)
    dist = {}
    for k in complement(b):
        allowed = {c for c in range(len(cx.cells)) if cx.cell_color[c] in (k, b)} | {k}
        dist[k] = bfs(adj, [k], allowed)
    tets = cx.simplicial.get("tets")
    if tets is None:
        raise GaugeCodeError("flux lengths need the simplicial data of a generated colex")
    cell_of = {v: c for c, v in enumerate(cx.simplicial["vertices"])}
    out = []
    for q, t in enumerate(tets):
        if b not in t:
            continue
        row = []
        for k in complement(b):
            if k in t:
                row.append(0)
                continue
            u = next(cell_of[v] for v in t if not isinstance(v, str) and cx.cell_color[cell_of[v]] == k)
            if u not in dist[k]:
                raise GaugeCodeError("flux string cannot reach its facet")
            row.append(1 + dist[k][u])
        out.append((q, *row))
    return out


def d_perp(code: GaugeCode) -> int:
    return min(a + bb + c for _, a, bb, c in flux_lengths(code))


def gcc_energy_barrier_bound(code: GaugeCode) -> int:
    return code.model.gap * d_perp(code)


def cell_code_ranks(code: GaugeCode) -> dict[int, tuple[int, int]]:
    """For each bulk ``b`` cell, (rank of its face generators, qubit count)."""
    cx, out = code.colex, {}
    for c, col in enumerate(cx.cell_color):
        if col != code.b:
            continue
        ops = [_face_op(cx, f, s) for f in cx.cell_faces[c] for s in "XZ"]
        out[c] = (PauliGroup(code.n, ops).rank, len(cx.cells[c]))
    return out


def x_sector(code: GaugeCode) -> CodeModel:
    """Model whose terms are the X gauge generators on every face."""
    cx = code.colex
    terms = [_face_op(cx, f, "X") for f in range(len(cx.faces))]
    labels = [("GX", f) for f in range(len(cx.faces))]
    sym = PauliGroup(code.n, [PauliOperator.from_support(code.n, xs=c) for c in cx.cells])
    meta = {"family": "gcc-x", "size": cx.size,
            "term_colors": list(cx.face_color), "code": code}
    return CodeModel(cx, terms, sym, [], labels, 2, meta)

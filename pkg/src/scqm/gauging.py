"""Ancilla extension turning product constraints into symmetry operators.

Each CSS term ``h`` gets an ancilla ``a``.  CNOTs from ``a`` into the support
of an X term (or from the support into ``a`` for a Z term) map ``X_a`` to
``X_a h`` (``Z_a`` to ``Z_a h``) while leaving every term of a commuting CSS
Hamiltonian fixed.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .colex import Colex, TwoColex
from .model import CodeModel
from .pauli import PauliGroup, PauliOperator, commutes, conjugate, product


class GaugingError(ValueError):
    pass


def _kind(t: PauliOperator) -> str:
    if t.x and not t.z:
        return "X"
    if t.z and not t.x:
        return "Z"
    raise GaugingError("gauging needs a CSS model with pure X or pure Z terms")


def _pad(p: PauliOperator, n: int) -> PauliOperator:
    return PauliOperator(n, p.x, p.z, p.sign)


@dataclass
class ExtendedModel:
    base: CodeModel
    ancilla_index: dict[int, int]
    circuit: list[tuple[str, int, int]]
    gauge_symmetry: PauliGroup
    kinds: list[str] = field(repr=False)

    @property
    def n(self) -> int:
        return self.base.n + len(self.ancilla_index)

    def embed(self, p: PauliOperator) -> PauliOperator:
        return _pad(p, self.n)

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        return conjugate(p, self.circuit)

    def ancilla_pauli(self, term: int) -> PauliOperator:
        a = self.ancilla_index[term]
        key = "xs" if self.kinds[term] == "X" else "zs"
        return PauliOperator.from_support(self.n, **{key: [a]})

    def gauge_operator(self, term: int) -> PauliOperator:
        return self.gauge_symmetry.generators[term]


def gauge_extend(model: CodeModel) -> ExtendedModel:
    kinds = [_kind(t) for t in model.terms]
    n = model.n
    anc = {i: n + i for i in range(model.m)}
    circuit = []
    for i, t in enumerate(model.terms):
        a = anc[i]
        for q in t.support():
            circuit.append(("CNOT", a, q) if kinds[i] == "X" else ("CNOT", q, a))
    ext = ExtendedModel(model, anc, circuit, PauliGroup(n + model.m), kinds)
    gens = [ext.conjugate(ext.ancilla_pauli(i)) for i in range(model.m)]
    ext.gauge_symmetry = PauliGroup(ext.n, gens)
    return ext


def round_trip(ext: ExtendedModel) -> bool:
    """Conjugating twice by the circuit fixes every single-qubit Pauli."""
    for q in range(ext.n):
        for key in ("xs", "zs"):
            p = PauliOperator.from_support(ext.n, **{key: [q]})
            if ext.conjugate(ext.conjugate(p)) != p:
                return False
    return True


def terms_fixed(ext: ExtendedModel) -> bool:
    for t in ext.base.terms:
        e = ext.embed(t)
        if ext.conjugate(e) != e:
            return False
    return True


def gauge_maps(ext: ExtendedModel) -> bool:
    """Each ancilla Pauli is sent to itself times its own term, signs included."""
    for i, t in enumerate(ext.base.terms):
        want = product([ext.ancilla_pauli(i), ext.embed(t)], ext.n)
        if ext.gauge_operator(i) != want:
            return False
    return True


def gauge_commutes(ext: ExtendedModel) -> bool:
    terms = [ext.embed(t) for t in ext.base.terms]
    return all(commutes(g, t) for g in ext.gauge_symmetry.generators for t in terms)


def ancilla_product_identity(ext: ExtendedModel, term_ids: Sequence[int]) -> bool:
    """For terms multiplying to the identity, the product of their gauge
    operators is exactly the product of their ancilla Paulis."""
    ids = list(term_ids)
    base = product([ext.base.terms[i] for i in ids], ext.base.n)
    if base.x or base.z or base.sign != 1:
        raise GaugingError("the chosen terms do not multiply to the identity")
    lhs = product([ext.gauge_operator(i) for i in ids], ext.n)
    rhs = product([ext.ancilla_pauli(i) for i in ids], ext.n)
    return lhs == rhs


# -- surfaces and emergent constraints -----------------------------------------

@dataclass
class Surface:
    """Faces as qubit sets with their edges, enough to talk about regions."""

    face_qubits: list[tuple[int, ...]]
    face_edges: list[tuple[int, ...]]
    edges: list[tuple[int, int]]
    n: int

    @classmethod
    def of(cls, cx) -> "Surface":
        if isinstance(cx, Colex):
            return cls([tuple(f) for f in cx.faces], [tuple(e) for e in cx.face_edges],
                       [tuple(e) for e in cx.edges], cx.n_qubits)
        if isinstance(cx, TwoColex):
            fe = []
            for vs in cx.faces:
                s = set(vs)
                fe.append(tuple(i for i, (a, b) in enumerate(cx.edges) if a in s and b in s))
            return cls([tuple(f) for f in cx.faces], fe, list(cx.edges), cx.n_vertices)
        raise GaugingError(f"no surface data for {type(cx).__name__}")

    def rim(self, region: Sequence[int]) -> list[int]:
        """Edges used by an odd number of the region's faces."""
        count = defaultdict(int)
        for f in region:
            for e in self.face_edges[f]:
                count[e] += 1
        return sorted(e for e, c in count.items() if c % 2)

    def near(self, qubits: set[int], radius: int = 1) -> set[int]:
        adj = defaultdict(set)
        for e in self.edges:
            for a in e:
                adj[a].update(e)
        out = set(qubits)
        for _ in range(radius):
            out |= {w for v in out for w in adj[v]}
        return out


def color_code_model(tc: TwoColex) -> CodeModel:
    """X and Z plaquette terms on a closed 2-colex; no enforced symmetry."""
    n = tc.n_vertices
    terms, labels, colors = [], [], []
    for s in "XZ":
        for f, vs in enumerate(tc.faces):
            key = "xs" if s == "X" else "zs"
            terms.append(PauliOperator.from_support(n, **{key: vs}))
            labels.append((s, f))
            colors.append(tc.colors[f])
    meta = {"family": "color2d", "term_colors": colors, "surface": tc}
    return CodeModel(tc, terms, PauliGroup(n, []), [], labels, 2, meta)


def _term_face(model: CodeModel, i: int) -> int:
    return model.labels[i][1]


def _surface(model: CodeModel) -> Surface:
    geo = model.meta.get("surface")
    if geo is None:
        code = model.meta.get("code")
        geo = code.colex if code is not None else model.complex
    return Surface.of(geo)


def designated_terms(model: CodeModel, region: Sequence[int], colors: Sequence[str],
                     kind: str = "X") -> list[int]:
    reg = set(region)
    cols = model.meta["term_colors"]
    return [i for i, t in enumerate(model.terms)
            if _term_face(model, i) in reg and cols[i] in colors and _kind(t) == kind]


@dataclass
class ConstraintReport:
    closed: bool
    identity: bool
    residual: list[int]
    rim_qubits: list[int]
    near_rim: bool

    @property
    def ok(self) -> bool:
        return self.identity if self.closed else self.near_rim


def verify_emergent_constraints(model: CodeModel, region: Sequence[int],
                                colors: Sequence[str], kind: str = "X",
                                radius: int = 1) -> ConstraintReport:
    """Product of the designated terms over a face region.

    A closed region must give the identity.  Otherwise the residual must sit
    within ``radius`` of the qubits on the region's rim.
    """
    surf = _surface(model)
    ids = designated_terms(model, region, colors, kind)
    prod = product([model.terms[i] for i in ids], model.n)
    rim = surf.rim(region)
    rim_q = sorted({q for e in rim for q in surf.edges[e]})
    residual = prod.support()
    ok_near = set(residual) <= surf.near(set(rim_q), radius)
    identity = not prod.x and not prod.z and prod.sign == 1
    return ConstraintReport(not rim, identity, residual, rim_q, ok_near)


def boundary_operator(model: CodeModel, region: Sequence[int], colors: Sequence[str],
                      kind: str = "X") -> PauliOperator:
    ids = designated_terms(model, region, colors, kind)
    return product([model.terms[i] for i in ids], model.n)


@dataclass
class ChargeReport:
    counts: dict[str, int]
    parity: int
    boundary_eigenvalue: int

    @property
    def consistent(self) -> bool:
        return self.boundary_eigenvalue == (-1) ** self.parity


def gauss_charge(model: CodeModel, region: Sequence[int], error: PauliOperator,
                 colors: Sequence[str], kind: str = "X") -> ChargeReport:
    """Flipped ``colors`` terms inside the region against the rim operator.

    The count comes from the syndrome of ``error``; the eigenvalue from how
    ``error`` commutes with the operator left on the rim.
    """
    s = model.syndrome(error)
    ids = designated_terms(model, region, colors, kind)
    cols = model.meta["term_colors"]
    counts = {c: sum(1 for i in ids if cols[i] == c and (s >> i) & 1) for c in colors}
    h = boundary_operator(model, region, colors, kind)
    eig = 1 if commutes(error, h) else -1
    return ChargeReport(counts, sum(counts.values()) % 2, eig)

"""Commuting Hamiltonians with a symmetry group and logical operators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import gf2
from .pauli import PauliGroup, PauliOperator, commutes, to_string

FAULTS = ("no_fault", "X_fault", "Z_fault", "Y_fault")


@dataclass
class CodeModel:
    """``H = -sum(terms)`` with every term stored with sign +1.

    ``labels[i]`` names term ``i`` as ``(kind, cell)``.  ``meta`` carries the
    family name, sizes and any geometric data the experiments need.
    """

    complex: Any
    terms: list[PauliOperator]
    symmetry: PauliGroup
    logicals: list[tuple[PauliOperator, PauliOperator]]
    labels: list[tuple[str, Any]] = field(default_factory=list)
    gap: int = 2
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._by_qubit: list[list[int]] | None = None

    @property
    def n(self) -> int:
        return self.symmetry.n

    @property
    def family(self) -> str:
        return self.meta.get("family", "generic")

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def k(self) -> int:
        return self.n - self.stabilizer().rank

    def stabilizer(self) -> PauliGroup:
        cached = self.__dict__.get("_stab")
        if cached is None:
            cached = PauliGroup(self.n, self.terms)
            self.__dict__["_stab"] = cached
        return cached

    def terms_on(self, q: int) -> list[int]:
        if self._by_qubit is None:
            by = [[] for _ in range(self.n)]
            for i, t in enumerate(self.terms):
                for s in t.support():
                    by[s].append(i)
            self._by_qubit = by
        return self._by_qubit[q]

    def syndrome(self, p: PauliOperator) -> int:
        """Bit mask of terms anticommuting with ``p``."""
        cand = set()
        for q in p.support():
            cand.update(self.terms_on(q))
        s = 0
        for i in cand:
            if not commutes(p, self.terms[i]):
                s |= 1 << i
        return s

    def energy(self, syndrome: int) -> int:
        return self.gap * syndrome.bit_count()

    def logical_class(self, p: PauliOperator) -> int:
        """Two bits per logical pair: bit ``2i`` for an X-bar component and
        bit ``2i+1`` for a Z-bar component."""
        c = 0
        for i, (xl, zl) in enumerate(self.logicals):
            if not commutes(p, zl):
                c |= 1 << (2 * i)
            if not commutes(p, xl):
                c |= 1 << (2 * i + 1)
        return c

    def is_symmetric(self, p: PauliOperator) -> bool:
        return all(commutes(p, g) for g in self.symmetry.generators)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "gap": self.gap,
            "terms": [to_string(t) for t in self.terms],
            "term_labels": [[k, _plain(c)] for k, c in self.labels],
            "symmetry": [to_string(g) for g in self.symmetry.generators],
            "logicals": [[to_string(a), to_string(b)] for a, b in self.logicals],
            "meta": {k: _plain(v) for k, v in self.meta.items()},
        }


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "value"):
        return v.value
    return v


def check_model(model: CodeModel) -> dict[str, bool]:
    """Exact structural checks on a model.

    Terms commute pairwise, terms commute with the symmetry, every symmetry
    generator is a signed product of terms, and the logical pairs are valid.
    """
    terms = model.terms
    by_q = [model.terms_on(q) for q in range(model.n)]
    pairs_ok = True
    for i, t in enumerate(terms):
        near = {j for q in t.support() for j in by_q[q] if j > i}
        if any(not commutes(t, terms[j]) for j in near):
            pairs_ok = False
            break
    sym_ok = all(commutes(t, g) for g in model.symmetry.generators for t in terms)
    stab = model.stabilizer()
    in_span = all(stab.contains(g, signed=True) for g in model.symmetry.generators)
    logic_ok = True
    for i, (xl, zl) in enumerate(model.logicals):
        if commutes(xl, zl):
            logic_ok = False
        for t in terms:
            if not (commutes(xl, t) and commutes(zl, t)):
                logic_ok = False
        for j, (x2, z2) in enumerate(model.logicals):
            if j != i and not all(commutes(a, b) for a in (xl, zl) for b in (x2, z2)):
                logic_ok = False
    return {"terms_commute": pairs_ok, "symmetry_commutes": sym_ok,
            "symmetry_in_terms": in_span, "logicals_valid": logic_ok}


def syndrome_bits(s: int) -> list[int]:
    return gf2.bits(s)

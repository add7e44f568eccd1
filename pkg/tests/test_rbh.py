import random

import pytest

from scqm.complex import Facet
from scqm.model import check_model
from scqm.pauli import PauliOperator, commutes, conjugate
from scqm.rbh import (ModelError, build_cubic_rbh, build_halfspace, build_t2i,
                      build_trivial_model, disentangling_circuit, excitation_operator)


def _bulk(cx, cell):
    d, i = cell
    near = [(1, e) for e in cx.boundary[2][i]] if d == 2 else [(2, f) for f in cx.coboundary[1][i]]
    return all(cx.label(c) == Facet.NONE for c in [cell, *near])


def bulk_terms(model):
    cx = model.complex
    return [(t, cell) for t, (kind, cell) in zip(model.terms, model.labels)
            if kind == "K" and _bulk(cx, cell)]


def test_bulk_cluster_terms_have_weight_five(rbh3):
    terms = bulk_terms(rbh3)
    assert terms
    assert all(t.weight == 5 for t, _ in terms)


def test_single_logical_qubit(rbh2, rbh3):
    assert rbh2.k == 1 and rbh3.k == 1
    assert len(rbh2.logicals) == 1


@pytest.mark.parametrize("builder", [build_cubic_rbh, build_trivial_model])
@pytest.mark.parametrize("L", [2, 3])
def test_structure(builder, L):
    assert all(check_model(builder(L)).values())


def test_trivial_bulk_terms_are_single_qubit(trivial2):
    assert all(t.weight == 1 for t, _ in bulk_terms(trivial2))
    assert trivial2.k == 1


def test_circuit_dresses_face_terms(rbh2):
    gates = disentangling_circuit(rbh2)
    cx = rbh2.complex
    checked = 0
    for t, (kind, (d, i)) in zip(rbh2.terms, rbh2.labels):
        if kind == "K" and d == 2 and cx.label((d, i)) == Facet.NONE:
            q = cx.qubit_index[(d, i)]
            assert conjugate(PauliOperator.single(rbh2.n, q, "X"), gates) == t
            checked += 1
    assert checked


def test_circuit_maps_undressed_terms_to_dressed(rbh3, trivial2):
    gates = disentangling_circuit(rbh3)
    bare = build_trivial_model(3)
    assert [conjugate(t, gates) for t in bare.terms] == rbh3.terms


def test_circuit_fixes_z_operators(rbh2):
    gates = disentangling_circuit(rbh2)
    rng = random.Random(0)
    for _ in range(20):
        p = PauliOperator(rbh2.n, 0, rng.getrandbits(rbh2.n))
        assert conjugate(p, gates) == p


def test_single_gates_break_the_symmetry(rbh2):
    gates = disentangling_circuit(rbh2)
    sym = rbh2.symmetry.generators
    assert any(conjugate(g, [gate]) != g for gate in gates for g in sym)


def test_excitation_operator_energy(rbh3):
    cx = rbh3.complex
    assert excitation_operator(cx).is_identity()
    e = cx.cell((3, 3, 2))[1]
    op = excitation_operator(cx, edges=[e])
    s = rbh3.syndrome(op)
    assert s.bit_count() == 1
    assert rbh3.energy(s) == rbh3.gap
    assert rbh3.labels[s.bit_length() - 1] == ("K", (1, e))


def _qubit_edges(cx, edges):
    return [e for e in edges if (1, e) in cx.qubit_index]


def _qubit_faces(cx, faces):
    return [f for f in faces if (2, f) in cx.qubit_index]


@pytest.mark.parametrize("L", [2, 3])
def test_symmetric_iff_cycle_and_cocycle(L):
    model = build_cubic_rbh(L)
    cx = model.complex
    rng = random.Random(L)
    n_e, n_f = len(cx.cells[1]), len(cx.cells[2])
    seen = set()
    for trial in range(300):
        if trial % 2:
            edges = set(rng.sample(range(n_e), rng.randint(0, 4)))
            faces = set(rng.sample(range(n_f), rng.randint(0, 4)))
        else:
            edges, faces = set(), set()
            for f in rng.sample(range(n_f), 2):
                edges ^= set(cx.boundary[2][f])
            for e in rng.sample(range(n_e), 2):
                faces ^= set(cx.coboundary[1][e])
        edges, faces = _qubit_edges(cx, edges), _qubit_faces(cx, faces)
        op = excitation_operator(cx, edges, faces)
        want = cx.is_cycle(edges) and cx.is_cocycle(faces)
        assert model.is_symmetric(op) == want
        seen.add(want)
    assert seen == {True, False}


def test_syndrome_marks_exactly_the_excited_cells(rbh3):
    cx = rbh3.complex
    rng = random.Random(9)
    index = {cell: t for t, (kind, cell) in enumerate(rbh3.labels) if kind == "K"}
    for _ in range(30):
        edges = [e for e in rng.sample(range(len(cx.cells[1])), 3) if (1, e) in index]
        faces = [f for f in rng.sample(range(len(cx.cells[2])), 3) if (2, f) in index]
        s = rbh3.syndrome(excitation_operator(cx, edges, faces))
        want = sum(1 << index[(1, e)] for e in edges) | sum(1 << index[(2, f)] for f in faces)
        assert s == want


def test_width_metadata(rbh2, rbh3):
    assert rbh2.meta["width"]["d"] == 2
    assert rbh3.meta["width"] == {"rough": 3, "smooth": 4, "toric_sink": 3, "d": 3}


@pytest.mark.parametrize("dressed", [True, False])
def test_t2i_has_four_logical_qubits(dressed):
    m = build_t2i(2, dressed)
    assert m.k == 4 and len(m.logicals) == 4
    assert all(check_model(m).values())


def test_halfspace_has_no_sink():
    m = build_halfspace(3)
    assert not m.complex.facet_cells(Facet.SINK)
    assert all(check_model(m).values())


def test_logical_pair_anticommutes(rbh2):
    xl, zl = rbh2.logicals[0]
    assert not commutes(xl, zl)
    assert rbh2.logical_class(xl) == 0b01 and rbh2.logical_class(zl) == 0b10


def test_too_small_lattice():
    with pytest.raises(ModelError):
        build_cubic_rbh(1)


def test_json_export(rbh2):
    d = rbh2.to_dict()
    assert d["family"] == "rbh" and d["n"] == rbh2.n and len(d["terms"]) == rbh2.m

import random

import pytest

from scqm import gf2
from scqm.complex import Facet
from scqm.pauli import PauliOperator
from scqm.rbh import build_t2i, excitation_operator
from scqm.symmetry import (Syndrome, apply_word, derive_moveset, is_symmetric,
                           reachable_classes, single_qubit_moves, syndrome_of,
                           validate_reachable)


def interior_edge(cx):
    for i, c in enumerate(cx.cells[1]):
        if cx.label((1, i)) == Facet.NONE and (1, i) in cx.qubit_index:
            return i
    raise AssertionError("no interior edge")


def interior_face(cx):
    for i in range(len(cx.cells[2])):
        edges = cx.boundary[2][i]
        if cx.label((2, i)) == Facet.NONE and all(cx.label((1, e)) == Facet.NONE for e in edges):
            return i
    raise AssertionError("no interior face")


def test_is_symmetric_examples(rbh3):
    cx = rbh3.complex
    assert is_symmetric(PauliOperator(rbh3.n), rbh3)
    assert not is_symmetric(excitation_operator(cx, edges=[interior_edge(cx)]), rbh3)
    f = interior_face(cx)
    assert is_symmetric(excitation_operator(cx, edges=cx.boundary[2][f]), rbh3)


def test_moves_are_symmetric_and_deltas_exact(rbh2, moves2):
    for p, d, c in zip(moves2.moves, moves2.deltas, moves2.classes):
        assert is_symmetric(p, rbh2)
        assert rbh2.syndrome(p) == d
        assert rbh2.logical_class(p) == c
        assert d


def test_moves_span_plaquette_loops_but_no_single_z(rbh3, moves3):
    cx = rbh3.complex
    ech = gf2.Echelon()
    for p in moves3.moves:
        ech.add(p.vec)
    f = interior_face(cx)
    loop = excitation_operator(cx, edges=cx.boundary[2][f])
    assert ech.contains(loop.vec)
    for p in moves3.moves:
        assert not (p.weight == 1 and p.z and not p.x)


def test_trivial_model_has_single_qubit_boundary_moves(trivial2):
    mv = derive_moveset(trivial2, 1)
    assert any(p.weight == 1 for p in mv.moves)


def test_single_qubit_moves(rbh2, free2):
    assert len(free2) == 3 * rbh2.n
    assert any(not is_symmetric(p, rbh2) for p in free2.moves)


def test_radius_must_be_positive(rbh2):
    with pytest.raises(ValueError):
        derive_moveset(rbh2, 0)


def test_syndrome_of_examples(rbh2):
    assert syndrome_of(PauliOperator(rbh2.n), rbh2).weight == 0
    rng = random.Random(0)
    for _ in range(20):
        x = z = 0
        for t in rbh2.terms:
            if rng.random() < 0.5:
                x ^= t.x
                z ^= t.z
        assert syndrome_of(PauliOperator(rbh2.n, x, z), rbh2).weight == 0


def test_syndrome_energy():
    s = Syndrome(0b1011, 4)
    assert s.energy == 6 and s.flipped() == [0, 1, 3]


def test_vacuum_is_valid(rbh2):
    assert validate_reachable(0, rbh2).valid


def test_lone_boundary_anyon_is_invalid(rbh3):
    a = next(i for i, (kind, _) in enumerate(rbh3.labels) if kind == "A")
    v = validate_reachable(1 << a, rbh3)
    assert not v.valid and v.reasons


def test_random_words_are_valid(rbh3, moves3):
    rng = random.Random(1)
    for _ in range(200):
        word = [rng.randrange(len(moves3)) for _ in range(rng.randint(1, 12))]
        op, s, c = apply_word(rbh3, moves3, word)
        assert s == rbh3.syndrome(op)
        assert c == rbh3.logical_class(op)
        assert validate_reachable(s, rbh3).valid


def test_valid_syndromes_are_exactly_the_reachable_span(rbh2, moves2):
    # completeness: the GF(2) span of move deltas has the same size as the
    # space cut out by the conservation laws, and one contains the other
    span = gf2.rank(moves2.deltas)
    laws = []
    for g in rbh2.symmetry.generators:
        idx = rbh2.stabilizer().express(g)
        laws.append(gf2.from_bits(idx))
    assert span == rbh2.m - gf2.rank(laws)
    in_span = gf2.Echelon()
    for d in moves2.deltas:
        in_span.add(d)
    rng = random.Random(2)
    for _ in range(200):
        s = rng.getrandbits(rbh2.m)
        assert in_span.contains(s) == validate_reachable(s, rbh2).valid


def test_unknown_family(rbh2):
    from scqm.model import CodeModel
    other = CodeModel(None, rbh2.terms, rbh2.symmetry, [], meta={"family": "mystery"})
    with pytest.raises(ValueError):
        validate_reachable(0, other)


def test_radius_two_contains_radius_one(rbh2, moves2):
    big = derive_moveset(rbh2, 2)
    keys = {(p.x, p.z) for p in big.moves}
    assert all((p.x, p.z) in keys for p in moves2.moves)


def test_reachable_logical_classes(rbh2, moves2):
    assert gf2.rank(reachable_classes(moves2)) == 2
    assert gf2.rank(reachable_classes(single_qubit_moves(rbh2))) == 2


def test_t2i_reachable_classes_at_l3():
    m = build_t2i(3)
    assert gf2.rank(reachable_classes(derive_moveset(m, 1))) == 4

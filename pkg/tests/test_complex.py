import itertools
import random
from collections import Counter

import pytest

from scqm.complex import (ComplexError, Facet, boundary_squared_zero, build_cubic, dim_of,
                          rbh_layout)


@pytest.fixture(scope="module")
def torus2():
    return build_cubic(2, periodic=(True, True, True))


@pytest.fixture(scope="module")
def rbh3():
    return build_cubic(3, rbh_layout())


def test_periodic_cell_counts(torus2):
    assert [len(c) for c in torus2.cells] == [8, 24, 24, 8]
    assert torus2.n_qubits == 48


def test_dimension_is_count_of_odd_coordinates():
    assert [dim_of(c) for c in [(0, 0, 0), (1, 0, 2), (1, 3, 0), (1, 1, 1)]] == [0, 1, 2, 3]


def test_boundary_of_boundary_vanishes(torus2, rbh3):
    assert boundary_squared_zero(torus2)
    assert boundary_squared_zero(rbh3)


def test_rbh_facet_partition_matches_hand_count(rbh3):
    # x in [0,6] smooth, y in [0,6] smooth, z in [1,5] rough; toric at x=0,
    # sink at x=6, primal walls at y=0,6 and dual walls at z=1,5.
    assert rbh3.bounds == ((0, 6), (0, 6), (1, 5))
    got = Counter((d, lab.value) for (d, _), lab in rbh3.facet_label.items())
    want = {
        (0, "TORIC"): 8, (1, "TORIC"): 18, (2, "TORIC"): 9,
        (0, "SINK"): 8, (1, "SINK"): 18, (2, "SINK"): 9,
        (1, "DUAL"): 16, (2, "DUAL"): 36, (3, "DUAL"): 18,
        (0, "PRIMAL"): 8, (1, "PRIMAL"): 16, (2, "PRIMAL"): 6,
    }
    assert dict(got) == want
    # all edges except sink ones, all faces except toric ones
    assert rbh3.n_qubits == (96 - 18) + (90 - 9)


def test_qubit_kinds(rbh3):
    kinds = Counter(rbh3.site_kind(q) for q in range(rbh3.n_qubits))
    assert kinds == {"DUAL": 78, "PRIMAL": 81}


def test_distance_basics(rbh3):
    v = rbh3.cell((2, 2, 2))
    w = rbh3.cell((4, 2, 2))
    assert rbh3.lattice_distance(v, v) == 0
    assert rbh3.lattice_distance(v, w) == 1


def test_periodic_distance_is_wrapped_manhattan():
    cx = build_cubic(3, periodic=(True, True, True))
    src = cx.cell((0, 0, 0))
    dist = cx.distances([src])
    for i, c in enumerate(cx.cells[0]):
        want = sum(min(a // 2, 3 - a // 2) for a in c)
        assert dist[i] == want


def test_distance_rejects_wrong_dimension(rbh3):
    with pytest.raises(ComplexError):
        rbh3.distances([rbh3.cell((1, 2, 2))])


def test_cycle_checks(torus2):
    cx = torus2
    assert cx.is_cycle([])
    assert not cx.is_cycle([0])
    f = cx.cell((1, 1, 0))[1]
    assert cx.is_cycle(cx.boundary[2][f])
    assert cx.is_cocycle([])
    assert not cx.is_cocycle([f])
    cube = cx.cell((1, 1, 1))[1]
    assert cx.is_cocycle(cx.boundary[3][cube])


def test_random_boundaries_are_cycles(torus2):
    rng = random.Random(0)
    for _ in range(20):
        faces = rng.sample(range(len(torus2.cells[2])), 5)
        edges = Counter(e for f in faces for e in torus2.boundary[2][f])
        assert torus2.is_cycle([e for e, c in edges.items() if c % 2])


@pytest.mark.parametrize("spec, periodic", [
    ({"x-": "TORIC"}, (False, True, True)),
    ({"w-": "TORIC"}, (True, True, True)),
    ({"x-": "TORIC", "x+": "SINK"}, (True, True, True)),
])
def test_bad_facet_specs(spec, periodic):
    with pytest.raises(ComplexError):
        build_cubic(2, spec, periodic)


def test_too_small():
    with pytest.raises(ComplexError):
        build_cubic(1, periodic=(True, True, True))


def test_coordinates_round_trip(rbh3):
    for d in range(4):
        for i, c in enumerate(rbh3.cells[d]):
            assert rbh3.cell(c) == (d, i)
            assert rbh3.coord((d, i)) == c


def test_label_defaults_to_none(rbh3):
    assert rbh3.label(rbh3.cell((3, 3, 3))) == Facet.NONE

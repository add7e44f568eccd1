import math
from collections import Counter

import networkx as nx
import pytest

from scqm.complex import build_cubic
from scqm.peierls import (BRANCHING, T_C_LOWER, alpha, check_bound, enumerate_loops,
                          lattice_graph, tail_bound)


def torus(L):
    return build_cubic(L, periodic=(True, True, True))


def networkx_census(cx, k_max, sublattice="DUAL"):
    g = lattice_graph(cx, sublattice)
    step = {}
    G = nx.Graph()
    for a, b, d in g.links:
        G.add_edge(a, b)
        step[(a, b)] = d
        step[(b, a)] = tuple(-x for x in d)
    counts = Counter()
    for cyc in nx.simple_cycles(G, length_bound=k_max):
        if len(cyc) < 3:
            continue
        tot = [0, 0, 0]
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            for ax in range(3):
                tot[ax] += step[(u, v)][ax]
        if tot == [0, 0, 0]:
            counts[len(cyc)] += 1
    return counts


def test_matches_networkx_cycles():
    cx = torus(3)
    got = enumerate_loops(cx, "DUAL", k_max=8)
    want = networkx_census(cx, 8)
    assert {k: v for k, v in got.counts.items() if v} == dict(want)


def test_primal_and_dual_agree_on_the_torus():
    cx = torus(3)
    assert enumerate_loops(cx, "PRIMAL", 8).counts == enumerate_loops(cx, "DUAL", 8).counts


@pytest.mark.parametrize("L", [3, 4])
def test_elementary_plaquettes(L):
    c = enumerate_loops(torus(L), k_max=6)
    assert c.counts[4] == 3 * L ** 3
    assert c.counts[1] == c.counts[2] == c.counts[3] == c.counts[5] == 0
    assert c.sites == L ** 3


def test_winding_cycles_are_excluded_unless_asked():
    cx = torus(3)
    open_ = enumerate_loops(cx, k_max=3, contractible=False)
    # straight lines around each periodic direction
    assert open_.counts[3] == 3 * 9
    assert enumerate_loops(cx, k_max=3).counts[3] == 0


def test_bound_and_fitted_base():
    rep = check_bound(enumerate_loops(torus(3), k_max=8))
    assert rep.holds and rep.violations == []
    assert rep.base < BRANCHING


def test_rows():
    rows = enumerate_loops(torus(3), k_max=4).rows()
    k, n, bound, ratio = rows[3]
    assert (k, n) == (4, 81)
    assert bound == 27 * 5 ** 4 and ratio == pytest.approx(81 / bound)


def test_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_loops(torus(3), k_max=0)
    with pytest.raises(ValueError):
        lattice_graph(torus(3), "DIAGONAL")


def test_critical_temperature_constant():
    assert T_C_LOWER == pytest.approx(2 / math.log(5), abs=1e-12)


def test_tail_bound_behaviour():
    assert alpha(1.5) == pytest.approx(3 - math.log(5))
    vals = [tail_bound(1.5, w, 4) for w in range(1, 10)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert tail_bound(2.0, 6, 4) < tail_bound(1.5, 6, 4)
    with pytest.raises(ValueError):
        tail_bound(math.log(5) / 2, 4, 4)
    with pytest.raises(ValueError):
        tail_bound(0.5, 4, 4)

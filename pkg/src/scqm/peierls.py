"""Loop counting on cubic lattices and the Boltzmann tail bound.

A loop is a simple cycle of the lattice graph, so no proper subset of its
links closes.  On a torus only contractible loops (zero net winding) are
counted; winding cycles are logical strings rather than local excitations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .complex import CellComplex

T_C_LOWER = 2 / math.log(5)
BRANCHING = 5


@nb.njit(cache=True)
def _census(ptr, nbr, disp, eid, kmax, contractible):
    n = ptr.shape[0] - 1
    per_root = np.zeros((n, kmax + 1), dtype=np.int64)
    for root in range(n):
        on = np.zeros(n, dtype=np.bool_)
        node = np.empty(kmax + 1, dtype=np.int64)
        it = np.empty(kmax + 1, dtype=np.int64)
        pos = np.zeros((kmax + 1, 3), dtype=np.int64)
        node[0] = root
        it[0] = ptr[root]
        on[root] = True
        first = -1
        depth = 0
        while depth >= 0:
            u = node[depth]
            if it[depth] == ptr[u + 1]:
                on[u] = False
                depth -= 1
                continue
            j = it[depth]
            it[depth] += 1
            v = nbr[j]
            steps = depth + 1
            x = pos[depth, 0] + disp[j, 0]
            y = pos[depth, 1] + disp[j, 1]
            z = pos[depth, 2] + disp[j, 2]
            if v == root:
                # each cycle is seen once per orientation; keep one
                if steps >= 2 and first < eid[j] and (not contractible or (x == 0 and y == 0 and z == 0)):
                    per_root[root, steps] += 1
                continue
            if v < root or on[v] or steps >= kmax:
                continue
            if contractible and abs(x) + abs(y) + abs(z) > kmax - steps:
                continue
            if depth == 0:
                first = eid[j]
            depth += 1
            node[depth] = v
            it[depth] = ptr[v]
            pos[depth, 0] = x
            pos[depth, 1] = y
            pos[depth, 2] = z
            on[v] = True
    return per_root.sum(axis=0)


@dataclass
class LatticeGraph:
    """Adjacency of a cubic sublattice with per-link unit displacements."""

    nodes: int
    links: list[tuple[int, int, tuple[int, int, int]]]
    coords: list[tuple[int, int, int]] = field(repr=False)

    def csr(self):
        adj = [[] for _ in range(self.nodes)]
        for k, (a, b, d) in enumerate(self.links):
            adj[a].append((b, d, k))
            adj[b].append((a, tuple(-x for x in d), k))
        ptr = np.zeros(self.nodes + 1, dtype=np.int64)
        for i, row in enumerate(adj):
            ptr[i + 1] = ptr[i] + len(row)
        flat = [x for row in adj for x in row]
        nbr = np.array([b for b, _, _ in flat], dtype=np.int64)
        disp = np.array([d for _, d, _ in flat], dtype=np.int64).reshape(-1, 3)
        eid = np.array([k for _, _, k in flat], dtype=np.int64)
        return ptr, nbr, disp, eid


def lattice_graph(cx: CellComplex, sublattice: str = "DUAL") -> LatticeGraph:
    """Vertices joined by edges (``PRIMAL``) or cubes joined across faces (``DUAL``)."""
    sub = sublattice.upper()
    if sub == "PRIMAL":
        node_dim, ends = 0, lambda i: cx.boundary[1][i]
        link_dim = 1
    elif sub == "DUAL":
        node_dim, ends = 3, lambda i: cx.coboundary[2][i]
        link_dim = 2
    else:
        raise ValueError(f"unknown sublattice {sublattice!r}")
    m = 2 * cx.L
    links = []
    for i, lc in enumerate(cx.cells[link_dim]):
        e = ends(i)
        if len(e) != 2:
            continue
        a, b = e
        ca = cx.cells[node_dim][a]
        step = []
        for ax in range(3):
            d = lc[ax] - ca[ax]
            if cx.periodic[ax]:
                d = (d + 1) % m - 1
            step.append(d)
        links.append((a, b, tuple(step)))
    return LatticeGraph(len(cx.cells[node_dim]), links, list(cx.cells[node_dim]))


@dataclass
class LoopCensus:
    L: int
    sublattice: str
    counts: dict[int, int]
    k_max: int
    sites: int

    def rows(self, c: float = 1.0) -> list[tuple[int, int, float, float]]:
        out = []
        for k in range(1, self.k_max + 1):
            bound = c * self.sites * BRANCHING ** k
            out.append((k, self.counts.get(k, 0), bound, self.counts.get(k, 0) / bound))
        return out


def enumerate_loops(cx: CellComplex, sublattice: str = "DUAL", k_max: int = 12,
                    contractible: bool = True) -> LoopCensus:
    """Count simple cycles of each length up to ``k_max``.

    Each cycle is rooted at its smallest node and kept in one orientation.
    The unwrapped displacement prunes walks that can no longer close.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    g = lattice_graph(cx, sublattice)
    counts = _census(*g.csr(), int(k_max), bool(contractible))
    return LoopCensus(cx.L, sublattice.upper(), {k: int(counts[k]) for k in range(1, k_max + 1)},
                      k_max, g.nodes)


@dataclass
class BoundReport:
    holds: bool
    base: float
    c: float
    violations: list[int]


def check_bound(census: LoopCensus, c: float = 1.0) -> BoundReport:
    """Compare N(k) against c * sites * 5^k and fit the smallest base that works."""
    scale = c * census.sites
    bad = [k for k, v in census.counts.items() if v > scale * BRANCHING ** k]
    base = max(((v / scale) ** (1 / k) for k, v in census.counts.items() if v), default=0.0)
    return BoundReport(not bad, base, c, bad)


def alpha(beta: float) -> float:
    return 2 * beta - math.log(BRANCHING)


def tail_bound(beta: float, w: int, L: int, c: float = 3.0) -> float:
    """Upper bound on the Gibbs probability of a loop of size at least ``w``."""
    a = alpha(beta)
    if a <= 0:
        raise ValueError(f"tail bound needs beta > log(5)/2, got {beta}")
    return c * L ** 3 * math.exp(-a * w) / (1 - math.exp(-a))

"""Cubic cell complexes in doubled coordinates.

A cell is an integer triple; its dimension is the number of odd coordinates.
Vertices sit at all-even points, edges have one odd coordinate, faces two and
cubes three.  Each axis spans ``[lo, hi]`` where a smooth end lies on an even
coordinate and a rough end on an odd one.  Periodic axes wrap modulo ``2L``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

Coord = tuple[int, int, int]
Cell = tuple[int, int]  # (dimension, id)

FACETS = ("x-", "x+", "y-", "y+", "z-", "z+")


class Facet(str, enum.Enum):
    TORIC = "TORIC"
    PRIMAL = "PRIMAL"
    DUAL = "DUAL"
    SINK = "SINK"
    NONE = "NONE"


# a cell sitting on several facets takes the label that comes first here
PRIORITY = (Facet.TORIC, Facet.SINK, Facet.DUAL, Facet.PRIMAL)


class ComplexError(ValueError):
    pass


def dim_of(c: Coord) -> int:
    return (c[0] & 1) + (c[1] & 1) + (c[2] & 1)


@dataclass
class CellComplex:
    L: int
    periodic: tuple[bool, bool, bool]
    bounds: tuple[tuple[int, int], ...]
    facet_spec: dict[str, Facet]
    cells: list[list[Coord]]
    index: dict[Coord, Cell]
    boundary: list[list[tuple[int, ...]]]
    coboundary: list[list[tuple[int, ...]]]
    facets_of: dict[Cell, tuple[str, ...]]
    facet_label: dict[Cell, Facet]
    qubit_sites: list[Cell]
    qubit_index: dict[Cell, int] = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_sites)

    def coord(self, cell: Cell) -> Coord:
        return self.cells[cell[0]][cell[1]]

    def cell(self, coord: Coord) -> Cell:
        return self.index[self.wrap(coord)]

    def wrap(self, c: Coord) -> Coord:
        m = 2 * self.L
        return tuple(v % m if p else v for v, p in zip(c, self.periodic))

    def label(self, cell: Cell) -> Facet:
        return self.facet_label.get(cell, Facet.NONE)

    def qubit(self, cell: Cell) -> int | None:
        return self.qubit_index.get(cell)

    def site_kind(self, q: int) -> str:
        return "PRIMAL" if self.qubit_sites[q][0] == 2 else "DUAL"

    def is_interior(self, cell: Cell) -> bool:
        d, i = cell
        return d == 3 or len(self.coboundary[d][i]) == 2 * (3 - d)

    def on_facet(self, cell: Cell, name: str) -> bool:
        return name in self.facets_of.get(cell, ())

    def facet_cells(self, kind: Facet) -> list[Cell]:
        return [c for c, lab in self.facet_label.items() if lab == kind]

    def symmetric_vertices(self) -> list[int]:
        """Vertices carrying a vertex symmetry generator (all but sink vertices)."""
        return [i for i in range(len(self.cells[0]))
                if self.label((0, i)) != Facet.SINK]

    def is_cycle(self, edges: Iterable[int]) -> bool:
        """Even degree at every vertex where dual strings may not terminate."""
        deg: dict[int, int] = {}
        for e in edges:
            for v in self.boundary[1][e]:
                deg[v] = deg.get(v, 0) ^ 1
        return not any(odd and self.label((0, v)) != Facet.SINK for v, odd in deg.items())

    def is_cocycle(self, faces: Iterable[int]) -> bool:
        """Even number of faces in every cube; open ends may only leave the region."""
        deg: dict[int, int] = {}
        for f in faces:
            for q in self.coboundary[2][f]:
                deg[q] = deg.get(q, 0) ^ 1
        return not any(deg.values())

    def lattice_distance(self, c1: Cell, c2: Cell, kind: str = "DUAL") -> int:
        """Graph distance between vertices along qubit edges, or between cubes
        across qubit faces."""
        return self.distances([c1], kind).get(c2[1], -1)

    def distances(self, sources: Iterable[Cell], kind: str = "DUAL") -> dict[int, int]:
        """Multi-source BFS distances keyed by cell id."""
        srcs = list(sources)
        d = 0 if kind == "DUAL" else 3
        for s in srcs:
            if s[0] != d:
                raise ComplexError(f"{kind} distance needs cells of dimension {d}")
        adj = self._adjacency(kind)
        dist = {s[1]: 0 for s in srcs}
        queue = deque(dist)
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def _adjacency(self, kind: str) -> list[list[int]]:
        key = "_adj_" + kind
        cached = self.__dict__.get(key)
        if cached is not None:
            return cached
        if kind == "DUAL":
            n, links, d = len(self.cells[0]), self.boundary[1], 1
        elif kind == "PRIMAL":
            n, links, d = len(self.cells[3]), self.coboundary[2], 2
        else:
            raise ComplexError(f"unknown distance kind {kind!r}")
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, ends in enumerate(links):
            if (d, i) in self.qubit_index and len(ends) == 2:
                a, b = ends
                adj[a].append(b)
                adj[b].append(a)
        self.__dict__[key] = adj
        return adj


def _axis_range(L: int, axis: str, periodic: bool, spec: Mapping[str, Facet]):
    if periodic:
        return 0, 2 * L - 1
    lo_kind, hi_kind = spec[axis + "-"], spec[axis + "+"]
    lo = 1 if lo_kind == Facet.DUAL else 0
    hi = 2 * L - 1 if hi_kind == Facet.DUAL else 2 * L
    return lo, hi


def build_cubic(L: int, facet_spec: Mapping[str, str | Facet] | None = None,
                periodic: tuple[bool, bool, bool] = (False, False, False)) -> CellComplex:
    """Build an ``L``-cube-wide cubic complex with labelled boundary facets.

    ``facet_spec`` maps facet names ``x-``, ``x+``, ... to a boundary kind and
    must cover exactly the facets of non-periodic axes.
    """
    if L < 2:
        raise ComplexError("L must be at least 2")
    spec = {k: Facet(v) for k, v in (facet_spec or {}).items()}
    for name in spec:
        if name not in FACETS:
            raise ComplexError(f"unknown facet {name!r}")
        if periodic["xyz".index(name[0])]:
            raise ComplexError(f"facet {name} given for periodic axis")
    for a, p in zip("xyz", periodic):
        for s in "-+":
            if not p and a + s not in spec:
                raise ComplexError(f"missing boundary kind for facet {a}{s}")
    periodic = tuple(bool(p) for p in periodic)
    bounds = tuple(_axis_range(L, a, p, spec) for a, p in zip("xyz", periodic))
    m = 2 * L

    coords = sorted(product(*(range(lo, hi + 1) for lo, hi in bounds)))
    cells: list[list[Coord]] = [[], [], [], []]
    for c in coords:
        cells[dim_of(c)].append(c)
    index = {c: (d, i) for d in range(4) for i, c in enumerate(cells[d])}

    def wrap(c):
        return tuple(v % m if p else v for v, p in zip(c, periodic))

    boundary: list[list[tuple[int, ...]]] = [[] for _ in range(4)]
    coboundary: list[list[list[int]]] = [[[] for _ in cells[d]] for d in range(4)]
    for d in range(1, 4):
        for i, c in enumerate(cells[d]):
            faces = []
            for ax in range(3):
                if c[ax] & 1:
                    for s in (-1, 1):
                        nb = list(c)
                        nb[ax] += s
                        hit = index.get(wrap(tuple(nb)))
                        if hit is not None:
                            faces.append(hit[1])
            boundary[d].append(tuple(faces))
            for f in faces:
                coboundary[d - 1][f].append(i)
    boundary[0] = [() for _ in cells[0]]
    coboundary_t = [[tuple(x) for x in cb] for cb in coboundary]

    facets_of: dict[Cell, tuple[str, ...]] = {}
    facet_label: dict[Cell, Facet] = {}
    planes = {}
    for ax, a in enumerate("xyz"):
        if not periodic[ax]:
            planes[a + "-"] = (ax, bounds[ax][0])
            planes[a + "+"] = (ax, bounds[ax][1])
    for d in range(4):
        for i, c in enumerate(cells[d]):
            on = tuple(name for name, (ax, v) in planes.items() if c[ax] == v)
            if on:
                facets_of[(d, i)] = on
                kinds = {spec[name] for name in on}
                facet_label[(d, i)] = next(k for k in PRIORITY if k in kinds)

    def in_plane(cell: Cell, kind: Facet) -> bool:
        return any(spec[name] == kind for name in facets_of.get(cell, ()))

    qubits = []
    for d in (1, 2):
        for i in range(len(cells[d])):
            lab = facet_label.get((d, i), Facet.NONE)
            if d == 2 and lab == Facet.TORIC and in_plane((d, i), Facet.TORIC):
                continue
            if d == 1 and lab == Facet.SINK and in_plane((d, i), Facet.SINK):
                continue
            qubits.append((d, i))
    cx = CellComplex(L, periodic, bounds, spec, cells, index, boundary, coboundary_t,
                     facets_of, facet_label, qubits)
    cx.qubit_index = {c: q for q, c in enumerate(qubits)}
    return cx


def rbh_layout() -> dict[str, Facet]:
    """Toric facet opposite the sink along x, smooth primal walls along y and
    rough dual walls along z."""
    return {"x-": Facet.TORIC, "x+": Facet.SINK,
            "y-": Facet.PRIMAL, "y+": Facet.PRIMAL,
            "z-": Facet.DUAL, "z+": Facet.DUAL}


def boundary_squared_zero(cx: CellComplex) -> bool:
    """Check that every boundary of a boundary cancels over GF(2)."""
    for d in (2, 3):
        for faces in cx.boundary[d]:
            count: dict[int, int] = {}
            for f in faces:
                for g in cx.boundary[d - 1][f]:
                    count[g] = count.get(g, 0) ^ 1
            if any(count.values()):
                return False
    return True

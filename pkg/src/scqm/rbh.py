"""Cluster-state models on cubic complexes with a toric-code boundary.

Qubits sit on edges (dual) and faces (primal).  Away from the toric facet every
qubit carries a cluster term ``X_p`` times ``Z`` on its incident qubits; edges
lying in the toric plane instead carry dressed vertex and plaquette terms.
Boundary truncations are not written out by hand: every term is its bulk
template restricted to qubits that exist on the built lattice.
"""

from __future__ import annotations

from typing import Iterable

from .complex import CellComplex, Facet, build_cubic, rbh_layout
from .model import CodeModel
from .pauli import PauliGroup, PauliOperator, conjugate, logical_operators


class ModelError(ValueError):
    pass


def _toric_edges(cx: CellComplex) -> set[int]:
    return {i for (d, i), lab in cx.facet_label.items()
            if d == 1 and lab == Facet.TORIC and (1, i) in cx.qubit_index}


def _neighbours(cx: CellComplex, q: int) -> list[int]:
    d, i = cx.qubit_sites[q]
    if d == 1:
        near = [(2, f) for f in cx.coboundary[1][i]]
    else:
        near = [(1, e) for e in cx.boundary[2][i]]
    return [cx.qubit_index[c] for c in near if c in cx.qubit_index]


def symmetry_group(cx: CellComplex, names: list | None = None) -> PauliGroup:
    """Cube generators for every cube and vertex generators off the sink."""
    n = cx.n_qubits
    gens = []
    names = [] if names is None else names
    for c in range(len(cx.cells[3])):
        qs = [cx.qubit_index[(2, f)] for f in cx.boundary[3][c] if (2, f) in cx.qubit_index]
        if qs:
            gens.append(PauliOperator.from_support(n, xs=qs))
            names.append(("cube", c))
    for v in cx.symmetric_vertices():
        qs = [cx.qubit_index[(1, e)] for e in cx.coboundary[0][v] if (1, e) in cx.qubit_index]
        if qs:
            gens.append(PauliOperator.from_support(n, xs=qs))
            names.append(("vertex", v))
    return PauliGroup(n, gens)


def _terms(cx: CellComplex, dressed: bool):
    n = cx.n_qubits
    toric = _toric_edges(cx)
    terms, labels = [], []
    for q, (d, i) in enumerate(cx.qubit_sites):
        if d == 1 and i in toric:
            continue
        zs = _neighbours(cx, q) if dressed else ()
        terms.append(PauliOperator.from_support(n, xs=[q], zs=zs))
        labels.append(("K", (d, i)))
    for (d, i), lab in sorted(cx.facet_label.items()):
        if lab != Facet.TORIC:
            continue
        if d == 0:
            xs, zs = [], []
            for e in cx.coboundary[0][i]:
                if e in toric:
                    q = cx.qubit_index[(1, e)]
                    xs.append(q)
                    if dressed:
                        zs.extend(_neighbours(cx, q))
            if xs:
                terms.append(PauliOperator.from_support(n, xs=xs, zs=zs))
                labels.append(("A", (d, i)))
        elif d == 2 and (2, i) not in cx.qubit_index:
            zs = [cx.qubit_index[(1, e)] for e in cx.boundary[2][i] if e in toric]
            if zs:
                terms.append(PauliOperator.from_support(n, zs=zs))
                labels.append(("B", (d, i)))
    return terms, labels


def build_model(cx: CellComplex, dressed: bool = True, name: str | None = None,
                logicals=None) -> CodeModel:
    terms, labels = _terms(cx, dressed)
    names: list = []
    sym = symmetry_group(cx, names)
    meta = {"family": name or ("rbh" if dressed else "rbh-trivial"), "L": cx.L,
            "facets": {k: v.value for k, v in cx.facet_spec.items()},
            "periodic": list(cx.periodic),
            "priority": [p.value for p in _priority()],
            "symmetry_labels": names}
    model = CodeModel(cx, terms, sym, [], labels, 2, meta)
    if logicals is None:
        logicals = logical_operators(model.stabilizer())
    model.logicals = list(logicals)
    return model


def _priority():
    from .complex import PRIORITY
    return PRIORITY


def _cubic_logicals(cx: CellComplex, dressed: bool):
    """String logicals on the toric facet.

    Z-bar runs along z between the rough ends at ``y = 0``.  X-bar crosses
    from one smooth end to the other along y at the lowest z edge layer and
    is dressed with Z on the adjacent faces.
    """
    n = cx.n_qubits
    (zlo, zhi) = cx.bounds[2]
    (ylo, yhi) = cx.bounds[1]
    zq = [cx.qubit_index[cx.cell((0, ylo, z))] for z in range(zlo, zhi + 1) if z & 1]
    z0 = zlo if zlo & 1 else zlo + 1
    xq, dress = [], []
    for y in range(ylo, yhi + 1, 2):
        q = cx.qubit_index[cx.cell((0, y, z0))]
        xq.append(q)
        if dressed:
            dress.extend(_neighbours(cx, q))
    xbar = PauliOperator.from_support(n, xs=xq, zs=dress)
    zbar = PauliOperator.from_support(n, zs=zq)
    return [(xbar, zbar)]


def build_cubic_rbh(L: int) -> CodeModel:
    if L < 2:
        raise ModelError("L must be at least 2")
    cx = build_cubic(L, rbh_layout())
    model = build_model(cx, True, logicals=_cubic_logicals(cx, True))
    model.meta["width"] = lattice_width(cx)
    return model


def build_trivial_model(L: int) -> CodeModel:
    if L < 2:
        raise ModelError("L must be at least 2")
    cx = build_cubic(L, rbh_layout())
    model = build_model(cx, False, logicals=_cubic_logicals(cx, False))
    model.meta["width"] = lattice_width(cx)
    return model


def build_t2i(L: int, dressed: bool = True) -> CodeModel:
    """Slab with toric facets on both ends of x, periodic in y and z."""
    cx = build_cubic(L, {"x-": Facet.TORIC, "x+": Facet.TORIC}, (False, True, True))
    return build_model(cx, dressed, name="rbh-t2i" if dressed else "rbh-t2i-trivial")


def build_halfspace(L: int, dressed: bool = True) -> CodeModel:
    """Toric facet backed by a primal wall, periodic along the facet.

    No facet here absorbs dual strings, so the toric facet behaves like the
    boundary of a half-space for excitations created on it.
    """
    cx = build_cubic(L, {"x-": Facet.TORIC, "x+": Facet.PRIMAL}, (False, True, True))
    return build_model(cx, dressed, name="rbh-halfspace", logicals=[])


def disentangling_circuit(model_or_cx) -> list[tuple[str, int, int]]:
    """CZ between every face qubit and each of its edge qubits."""
    cx = getattr(model_or_cx, "complex", model_or_cx)
    gates = []
    for q, (d, i) in enumerate(cx.qubit_sites):
        if d != 2:
            continue
        for e in cx.boundary[2][i]:
            if (1, e) in cx.qubit_index:
                gates.append(("CZ", cx.qubit_index[(1, e)], q))
    return gates


def excitation_operator(cx: CellComplex, edges: Iterable[int] = (),
                        faces: Iterable[int] = ()) -> PauliOperator:
    """``Z`` on the given edge and face qubits."""
    qs = [cx.qubit_index[(1, e)] for e in edges] + [cx.qubit_index[(2, f)] for f in faces]
    return PauliOperator.from_support(cx.n_qubits, zs=qs)


def lattice_width(cx: CellComplex) -> dict[str, int]:
    """Widths between rough ends, smooth ends, and toric facet to sink.

    Each is the length in qubit edges (or crossed edges on the dual side) of
    the shortest string joining the two boundaries.
    """
    toric_v = [(0, i) for (d, i), lab in cx.facet_label.items() if d == 0 and lab == Facet.TORIC]
    toric = _toric_edges(cx)
    out = {}
    # rough to rough: strings of toric edges, dangling at both rough ends
    dangle = {"lo": [], "hi": []}
    zlo, zhi = cx.bounds[2]
    for e in toric:
        c = cx.cells[1][e]
        if len(cx.boundary[1][e]) == 1:
            dangle["lo" if c[2] == zlo else "hi"].append((0, cx.boundary[1][e][0]))
    if dangle["lo"] and dangle["hi"]:
        adj = {v[1]: [] for v in toric_v}
        for e in toric:
            ends = cx.boundary[1][e]
            if len(ends) == 2:
                adj[ends[0]].append(ends[1])
                adj[ends[1]].append(ends[0])
        out["rough"] = _bfs(adj, [v[1] for v in dangle["lo"]], {v[1] for v in dangle["hi"]}) + 2
    # smooth to smooth: crossed edges on the toric plane
    ylo, yhi = cx.bounds[1]
    if not cx.periodic[1]:
        faces = [i for (d, i), lab in cx.facet_label.items() if d == 2 and lab == Facet.TORIC]
        adj = {f: [] for f in faces}
        by_edge = {}
        for f in faces:
            for e in cx.boundary[2][f]:
                by_edge.setdefault(e, []).append(f)
        for fs in by_edge.values():
            if len(fs) == 2:
                adj[fs[0]].append(fs[1])
                adj[fs[1]].append(fs[0])
        lo = [f for f in faces if cx.cells[2][f][1] == ylo + 1]
        hi = {f for f in faces if cx.cells[2][f][1] == yhi - 1}
        out["smooth"] = _bfs(adj, lo, hi) + 2
    sink_v = {i for (d, i), lab in cx.facet_label.items() if d == 0 and lab == Facet.SINK}
    if sink_v:
        dist = cx.distances(toric_v, "DUAL")
        out["toric_sink"] = min(dist[v] for v in sink_v if v in dist)
    out["d"] = min(out.values())
    return out


def _bfs(adj: dict, sources: list, targets: set) -> int:
    from collections import deque
    dist = {s: 0 for s in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        if u in targets:
            return dist[u]
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    raise ModelError("boundaries are disconnected")


def conjugate_terms(terms, gates):
    return [conjugate(t, gates) for t in terms]

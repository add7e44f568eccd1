"""Colored complexes: tetrahedral 3-colexes and small spherical 2-colexes.

The tetrahedral 3-colex is the dual of a bcc simplicial complex cut down to a
tetrahedron and closed off with four virtual vertices, one per color.  In the
dual picture

* colex vertices (qubits) are tetrahedra,
* colex edges are triangles,
* colex faces are simplicial edges with at least one real end,
* colex 3-cells are real simplicial vertices,

and the boundary facet of color ``k`` is everything touching virtual vertex
``k``.  Coordinates are doubled so every bcc point is an integer triple.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

COLORS = "rgyb"
_KEY = {0: "r", 1: "y", 2: "g", 3: "b"}
_HALF = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))


class ColexError(ValueError):
    pass


def pair(a: str, b: str) -> str:
    """Canonical two-letter color pair."""
    return "".join(sorted(a + b, key=COLORS.index))


def complement(cs) -> str:
    return "".join(c for c in COLORS if c not in cs)


@dataclass
class Colex:
    """A 3-colex given by its incidence data.

    ``cells``: 3-cell -> vertex list, ``faces``: face -> vertex list (cyclic
    order not tracked), ``edges``: edge -> one or two vertices.  A face lies on
    boundary facet ``k`` when ``k in face_facets[f]``.
    """

    n_vertices: int
    edges: list[tuple[int, ...]]
    faces: list[tuple[int, ...]]
    cells: list[tuple[int, ...]]
    cell_faces: list[tuple[int, ...]]
    face_edges: list[tuple[int, ...]]
    cell_color: list[str]
    face_color: list[str]
    face_facets: list[str]
    size: int | None = None
    outer: str = "b"
    simplicial: dict = field(default_factory=dict, repr=False)

    @property
    def n_qubits(self) -> int:
        return self.n_vertices

    def face_cells(self, f: int) -> list[int]:
        cached = self.__dict__.get("_face_cells")
        if cached is None:
            cached = [[] for _ in self.faces]
            for c, fs in enumerate(self.cell_faces):
                for g in fs:
                    cached[g].append(c)
            self.__dict__["_face_cells"] = cached
        return cached[f]

    def facet_faces(self, k: str) -> list[int]:
        return [f for f, fc in enumerate(self.face_facets) if k in fc]

    def outer_labels(self) -> dict[str, str]:
        """Relabel the outer colex face colors as A, B, C."""
        rest = complement(self.outer)
        pairs = sorted({self.face_color[f] for f in self.facet_faces(self.outer)},
                       key=lambda p: rest.index(complement(p + self.outer)))
        return {p: "ABC"[i] for i, p in enumerate(pairs)}

    def vertex_adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n_vertices)]
        for e in self.edges:
            if len(e) == 2:
                adj[e[0]].add(e[1])
                adj[e[1]].add(e[0])
        return adj

    def balls(self, radius: int) -> list[list[int]]:
        """Radius 1: each face support.  Each further step merges in every
        face sharing a vertex with the current ball."""
        faces_at = defaultdict(list)
        for f, vs in enumerate(self.faces):
            for v in vs:
                faces_at[v].append(f)
        out, seen = [], set()
        for f0 in range(len(self.faces)):
            ball = set(self.faces[f0])
            for _ in range(radius - 1):
                grow = set(ball)
                for v in ball:
                    for f in faces_at[v]:
                        grow.update(self.faces[f])
                ball = grow
            key = tuple(sorted(ball))
            if key not in seen:
                seen.add(key)
                out.append(list(key))
        return out


def _color(p) -> str:
    return _KEY[(p[0] + p[1] + p[2]) % 4]


def _accept(p, n: int) -> bool:
    for k, s in enumerate(_HALF):
        rhs = k + (4 * (n - 1) if k == 0 else 0)
        if s[0] * p[0] + s[1] * p[1] + s[2] * p[2] > rhs:
            return False
    return True


def _tetrahedra_at(x):
    """All bcc tetrahedra with a same-sublattice edge from ``x`` along +axis."""
    axes = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for s in (-1, 1):
        for a, b, c in permutations(axes):
            def shift(u, v, w):
                return tuple(x[i] + u[i] + v[i] + w[i] for i in range(3))
            neg_c = tuple(-t for t in c)
            sb = tuple(s * t for t in b)
            yield (x, tuple(x[i] + 2 * a[i] for i in range(3)),
                   shift(a, sb, c), shift(a, sb, neg_c))


def build_tetrahedral_colex(size: int, outer: str = "b") -> Colex:
    """Tetrahedral 3-colex with ``1 + 4s + 6s^2 + 4s^3`` qubits."""
    if size < 1:
        raise ColexError("size must be at least 1")
    R = 4 * size + 4
    pts = [p for p in product(range(-R, R + 1), repeat=3)
           if p[0] % 2 == p[1] % 2 == p[2] % 2 and _accept(p, size)]
    tets = set()
    ptset = set(pts)
    for x in pts:
        for t in _tetrahedra_at(x):
            if all(v in ptset for v in t):
                tets.add(tuple(sorted(t)))

    # simplicial bookkeeping on real simplices
    tri_parents = defaultdict(set)
    for t in tets:
        for tri in combinations(t, 3):
            tri_parents[tri].add(t)
    edge_parents = defaultdict(set)
    for tri in tri_parents:
        for e in combinations(tri, 2):
            edge_parents[e].add(tri)
    vert_parents = defaultdict(set)
    for e in edge_parents:
        for v in e:
            vert_parents[v].add(e)

    def comp(simplex):
        return tuple(complement({_color(v) for v in simplex}))

    full = set(tets)
    for tri, ps in tri_parents.items():
        if len(ps) != 1:
            continue
        full.add(tri + comp(tri))
        for e in combinations(tri, 2):
            if len(edge_parents[e]) == 2:
                full.add(e + comp(e))
                for v in e:
                    if len(vert_parents[v]) == 3:
                        full.add((v,) + comp((v,)))

    def ckey(v):
        return (1, COLORS.index(v), ()) if isinstance(v, str) else (0, 0, v)

    qubits = sorted((tuple(sorted(t, key=ckey)) for t in full), key=lambda t: [ckey(v) for v in t])
    expected = 1 + 4 * size + 6 * size ** 2 + 4 * size ** 3
    if len(qubits) != expected:
        raise ColexError(f"built {len(qubits)} qubits, expected {expected}")

    def is_real(s):
        return any(not isinstance(v, str) for v in s)

    tri_of = defaultdict(list)
    for q, t in enumerate(qubits):
        for tri in combinations(t, 3):
            tri_of[tri].append(q)
    for tri, qs in tri_of.items():
        if is_real(tri) and len(qs) != 2:
            raise ColexError(f"triangle {tri} has {len(qs)} tetrahedra")
    edges_s = sorted(tri_of, key=lambda s: [ckey(v) for v in s])
    edges = [tuple(tri_of[s]) for s in edges_s]
    edge_id = {s: i for i, s in enumerate(edges_s)}

    sedges = sorted({e for t in qubits for e in combinations(t, 2) if is_real(e)},
                    key=lambda s: [ckey(v) for v in s])
    faces, face_edges, face_color, face_facets = [], [], [], []
    for e in sedges:
        faces.append(tuple(q for q, t in enumerate(qubits) if e[0] in t and e[1] in t))
        face_edges.append(tuple(sorted(edge_id[tri] for tri in edge_id if e[0] in tri and e[1] in tri)))
        cs = {_color(v) if not isinstance(v, str) else v for v in e}
        face_color.append(pair(*complement(cs)))
        face_facets.append("".join(v for v in e if isinstance(v, str)))
    face_id = {e: i for i, e in enumerate(sedges)}

    reals = sorted({v for t in qubits for v in t if not isinstance(v, str)})
    cells, cell_faces, cell_color = [], [], []
    for v in reals:
        cells.append(tuple(q for q, t in enumerate(qubits) if v in t))
        cell_faces.append(tuple(sorted(i for e, i in face_id.items() if v in e)))
        cell_color.append(_color(v))
    cx = Colex(len(qubits), edges, faces, cells, cell_faces, face_edges,
               cell_color, face_color, face_facets, size, outer)
    cx.simplicial = {"tets": qubits, "edges": sedges, "vertices": reals}
    return cx


def validate_colex(cx: Colex) -> list[str]:
    """Return a list of violated colex conditions (empty when valid)."""
    errs = []
    valence = [0] * cx.n_vertices
    for e in cx.edges:
        for v in e:
            valence[v] += 1
    for v, k in enumerate(valence):
        if k != 4:
            errs.append(f"vertex {v} has valence {k}")
    for f, cs in enumerate(cx.face_color):
        owners = cx.face_cells(f)
        colors = {cx.cell_color[c] for c in owners}
        if len(owners) == 2 and len(colors) != 2:
            errs.append(f"face {f} joins two cells of one color")
        need = set(complement(colors | set(cx.face_facets[f])))
        if set(cs) != need:
            errs.append(f"face {f} colored {cs}, expected {''.join(sorted(need))}")
    for c, fs in enumerate(cx.cell_faces):
        vs = set(cx.cells[c])
        for f in fs:
            if not set(cx.faces[f]) <= vs:
                errs.append(f"face {f} not inside cell {c}")
    # boundary of boundary: every vertex of a face meets exactly two of its edges
    for f, es in enumerate(cx.face_edges):
        count = defaultdict(int)
        for e in es:
            for v in cx.edges[e]:
                count[v] += 1
        if any(k != 2 for k in count.values()) or set(count) != set(cx.faces[f]):
            errs.append(f"face {f} boundary is not closed")
    for e, vs in enumerate(cx.edges):
        if len(vs) == 2 and len(edge_color(cx, e)) != 1:
            errs.append(f"edge {e} has no single color")
    return errs


def edge_color(cx: Colex, e: int) -> str:
    """The one color common to every face around an edge."""
    colors = set(COLORS)
    for f, es in enumerate(cx.face_edges):
        if e in es:
            colors &= set(cx.face_color[f])
    return "".join(sorted(colors, key=COLORS.index))


def outer_two_colex(cx: Colex) -> "TwoColex":
    """The boundary 2-colex on the outer facet, with faces relabelled A/B/C."""
    fs = cx.facet_faces(cx.outer)
    verts = sorted({v for f in fs for v in cx.faces[f]})
    local = {v: i for i, v in enumerate(verts)}
    lab = cx.outer_labels()
    faces = [tuple(local[v] for v in cx.faces[f]) for f in fs]
    colors = [lab[cx.face_color[f]] for f in fs]
    edges = set()
    for f in fs:
        for e in cx.face_edges[f]:
            ends = tuple(local[v] for v in cx.edges[e] if v in local)
            if len(ends) == 2:
                edges.add(tuple(sorted(ends)))
    return TwoColex(len(verts), sorted(edges), faces, colors, verts)


@dataclass
class TwoColex:
    n_vertices: int
    edges: list[tuple[int, int]]
    faces: list[tuple[int, ...]]
    colors: list[str]
    origin: list[int] | None = None

    @property
    def n_qubits(self) -> int:
        return self.n_vertices

    def check(self, closed: bool = True) -> list[str]:
        """Trivalence (on closed surfaces) and proper face 3-coloring."""
        errs = []
        deg = [0] * self.n_vertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        if closed:
            errs += [f"vertex {v} has degree {d}" for v, d in enumerate(deg) if d != 3]
        else:
            errs += [f"vertex {v} has degree {d}" for v, d in enumerate(deg) if d > 3]
        if len(set(self.colors)) > 3:
            errs.append("more than three face colors")
        for i, j in combinations(range(len(self.faces)), 2):
            shared = set(self.faces[i]) & set(self.faces[j])
            if len(shared) >= 2 and self.colors[i] == self.colors[j]:
                errs.append(f"adjacent faces {i}, {j} share color {self.colors[i]}")
        at = defaultdict(list)
        for f, vs in enumerate(self.faces):
            for v in vs:
                at[v].append(self.colors[f])
        for v, cs in at.items():
            if len(cs) != len(set(cs)):
                errs.append(f"vertex {v} touches two faces of one color")
        return errs

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n_vertices)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def balls(self, radius: int) -> list[list[int]]:
        out, seen = [], set()
        adj = self.adjacency()
        for vs in self.faces:
            ball = set(vs)
            for _ in range(radius - 1):
                ball |= {w for v in ball for w in adj[v]}
            key = tuple(sorted(ball))
            if key not in seen:
                seen.add(key)
                out.append(list(key))
        return out


def _two_colex(verts, faces, colors) -> TwoColex:
    index = {v: i for i, v in enumerate(verts)}
    edges = set()
    for a, b in combinations(range(len(verts)), 2):
        d = sum((x - y) ** 2 for x, y in zip(verts[a], verts[b]))
        if d == _two_colex.edge_len:
            edges.add((a, b))
    return TwoColex(len(verts), sorted(edges), [tuple(index[v] for v in f) for f in faces], colors)


def cube_colex() -> TwoColex:
    """The cube as a sphere 2-colex: opposite faces share a color."""
    verts = list(product((-1, 1), repeat=3))
    faces, colors = [], []
    for ax in range(3):
        for s in (-1, 1):
            faces.append([v for v in verts if v[ax] == s])
            colors.append("ABC"[ax])
    _two_colex.edge_len = 4
    return _two_colex(verts, faces, colors)


def truncated_octahedron_colex() -> TwoColex:
    """Six squares colored A; hexagons alternate B and C by octant parity."""
    verts = sorted({tuple(s * c for s, c in zip(signs, perm))
                    for perm in permutations((0, 1, 2))
                    for signs in product((-1, 1), repeat=3)})
    faces, colors = [], []
    for ax in range(3):
        for s in (-2, 2):
            faces.append([v for v in verts if v[ax] == s])
            colors.append("A")
    for signs in product((-1, 1), repeat=3):
        faces.append([v for v in verts if all(x * s >= 0 for x, s in zip(v, signs))])
        colors.append("B" if signs.count(-1) % 2 == 0 else "C")
    _two_colex.edge_len = 2
    return _two_colex(verts, faces, colors)


# -- exchange format ----------------------------------------------------------

def write_colex(cx: Colex) -> str:
    lines = ["VERTICES", str(cx.n_vertices), "EDGES"]
    lines += [f"{i} " + " ".join(map(str, e)) for i, e in enumerate(cx.edges)]
    lines.append("FACES")
    lines += [f"{i} " + " ".join(map(str, es)) for i, es in enumerate(cx.face_edges)]
    lines.append("CELLS")
    lines += [f"{i} " + " ".join(map(str, fs)) for i, fs in enumerate(cx.cell_faces)]
    lines.append("COLORS")
    lines += [f"cell {i} {c}" for i, c in enumerate(cx.cell_color)]
    lines += [f"face {i} {c}" for i, c in enumerate(cx.face_color)]
    lines += [f"facet {i} {k}" for i, ks in enumerate(cx.face_facets) for k in ks]
    lines.append(f"outer {cx.outer}")
    return "\n".join(lines) + "\n"


def read_colex(text: str) -> Colex:
    """Strict parser for the sectioned colex text format."""
    sections = ("VERTICES", "EDGES", "FACES", "CELLS", "COLORS")
    data = {s: [] for s in sections}
    current = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in sections:
            if data[line]:
                raise ColexError(f"line {no}: duplicate section {line}")
            current = line
            data[line].append(None)
            continue
        if current is None:
            raise ColexError(f"line {no}: content before first section")
        data[current].append((no, line.split()))

    def rows(name):
        return [r for r in data[name] if r is not None]

    try:
        (no, tok), = rows("VERTICES")
        nv = int(tok[0])
    except ValueError as exc:
        raise ColexError("VERTICES section must hold one integer") from exc

    def table(name, limit):
        out = []
        for no, tok in rows(name):
            try:
                vals = [int(t) for t in tok]
            except ValueError as exc:
                raise ColexError(f"line {no}: non-integer entry") from exc
            if vals[0] != len(out):
                raise ColexError(f"line {no}: expected id {len(out)}, got {vals[0]}")
            if any(not 0 <= v < limit for v in vals[1:]) or len(vals) < 2:
                raise ColexError(f"line {no}: incidence out of range")
            out.append(tuple(vals[1:]))
        return out

    edges = table("EDGES", nv)
    face_edges = table("FACES", len(edges))
    cell_faces = table("CELLS", len(face_edges))
    cell_color = [None] * len(cell_faces)
    face_color = [None] * len(face_edges)
    facets = [""] * len(face_edges)
    outer = "b"
    for no, tok in rows("COLORS"):
        if tok[0] == "outer" and len(tok) == 2 and tok[1] in COLORS:
            outer = tok[1]
            continue
        if len(tok) != 3 or tok[0] not in ("cell", "face", "facet"):
            raise ColexError(f"line {no}: malformed color entry")
        try:
            i = int(tok[1])
        except ValueError as exc:
            raise ColexError(f"line {no}: bad id") from exc
        target = {"cell": cell_color, "face": face_color, "facet": facets}[tok[0]]
        if not 0 <= i < len(target):
            raise ColexError(f"line {no}: id out of range")
        if any(c not in COLORS for c in tok[2]):
            raise ColexError(f"line {no}: unknown color {tok[2]}")
        if tok[0] == "facet":
            facets[i] += tok[2]
        else:
            target[i] = tok[2]
    if None in cell_color or None in face_color:
        raise ColexError("missing colors")
    faces = []
    for es in face_edges:
        faces.append(tuple(sorted({v for e in es for v in edges[e]})))
    cells = [tuple(sorted({v for f in fs for v in faces[f]})) for fs in cell_faces]
    return Colex(nv, edges, faces, cells, cell_faces, face_edges, cell_color,
                 face_color, facets, None, outer)


def simplicial_graph(cx: Colex):
    """Adjacency between simplicial vertices (3-cells plus virtual colors)."""
    names = list(range(len(cx.cells))) + list(COLORS)
    adj = {v: [] for v in names}
    for f, owners in enumerate(cx.face_cells(f) for f in range(len(cx.faces))):
        ends = list(owners) + list(cx.face_facets[f])
        if len(ends) == 2:
            a, b = ends
            adj[a].append((b, f))
            adj[b].append((a, f))
    return adj


def bfs(adj, sources, allowed) -> dict:
    dist = {s: 0 for s in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for w, _ in adj[u]:
            if w not in dist and w in allowed:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist

"""Final-round decoding for cluster-state models and a brute-force oracle.

The decoder works in the disentangled frame, where the model is a product of
single-qubit ``X`` terms plus a toric code on the boundary facet.  Flipped
single-qubit terms are cleared by ``Z`` on that qubit; boundary anyons are
paired up (or sent to a boundary) by exact minimum-weight matching.  The
correction is then conjugated back by the CZ circuit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .model import FAULTS, CodeModel
from .pauli import PauliOperator, conjugate
from .symmetry import Syndrome, validate_reachable

EXACT_LIMIT = 10


class DecodeError(ValueError):
    pass


@dataclass
class Correction:
    operator: PauliOperator
    success_class: int | None = None
    greedy: bool = False
    meta: dict = field(default_factory=dict)


def _bits(s) -> int:
    return s.bits if isinstance(s, Syndrome) else int(s)


# -- decoding frame -----------------------------------------------------------

@dataclass
class _Frame:
    bulk: dict[int, int]           # single-qubit term -> its qubit
    kmask: int                     # bits of the single-qubit terms
    sx: list[int]                  # syndrome of X on each qubit
    dressed: dict[int, tuple]      # boundary qubit -> (x, z) of its dressed X
    graphs: dict[str, dict]        # "Z"/"X" -> adjacency over boundary terms
    paths: dict = field(default_factory=dict)


def _frame(model: CodeModel) -> _Frame:
    cached = model.meta.get("_frame")
    if cached is not None:
        return cached
    from .rbh import build_model, disentangling_circuit
    fam = model.family
    if not fam.startswith("rbh"):
        raise DecodeError(f"no decoder for model family {fam!r}")
    dressed_model = not fam.endswith("trivial")
    cx, n = model.complex, model.n
    trivial = build_model(cx, False, logicals=[]) if dressed_model else model
    gates = disentangling_circuit(cx) if dressed_model else []
    bulk = {t: cx.qubit_index[cell] for t, (kind, cell) in enumerate(model.labels) if kind == "K"}
    kmask = sum(1 << t for t in bulk)
    carried = set(bulk.values())
    toric = [q for q in range(n) if q not in carried]
    graphs, dressed = {}, {}
    for letter in "ZX":
        edges = []
        for q in toric:
            hit = trivial.syndrome(PauliOperator.single(n, q, letter))
            ends = [t for t in range(model.m) if (hit >> t) & 1]
            if ends:
                edges.append((q, ends))
        graphs[letter] = _adjacency(edges)
    for q in toric:
        op = conjugate(PauliOperator.single(n, q, "X"), gates) if gates else PauliOperator.single(n, q, "X")
        dressed[q] = (op.x, op.z)
    sx = [model.syndrome(PauliOperator.single(n, q, "X")) for q in range(n)]
    fr = _Frame(bulk, kmask, sx, dressed, graphs)
    model.meta["_frame"] = fr
    return fr


def _adjacency(edges):
    adj: dict = {}
    for q, ends in edges:
        a, b = (ends[0], ends[1]) if len(ends) == 2 else (ends[0], "bd")
        adj.setdefault(a, []).append((b, q))
        adj.setdefault(b, []).append((a, q))
    return adj


def _paths_from(adj, src):
    """BFS distances and parent edges from ``src``; the boundary is a sink."""
    dist, par = {src: 0}, {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == "bd":
            continue
        for w, q in adj.get(u, ()):
            if w not in dist:
                dist[w] = dist[u] + 1
                par[w] = (u, q)
                queue.append(w)
    return dist, par


def _walk(par, dst) -> list[int]:
    out = []
    while par[dst] is not None:
        dst, q = par[dst]
        out.append(q)
    return out


def match(nodes: list, adj, exact_limit: int = EXACT_LIMIT, cache: dict | None = None):
    """Minimum-weight pairing of ``nodes`` with each other or the boundary.

    Returns ``(qubits, greedy)`` where ``qubits`` lists the edges to flip
    (with multiplicity) and ``greedy`` flags the fallback above the limit.
    """
    k = len(nodes)
    if k == 0:
        return [], False
    cache = {} if cache is None else cache
    info = []
    for u in nodes:
        if u not in cache:
            cache[u] = _paths_from(adj, u)
        info.append(cache[u])
    inf = 1 << 30
    D = [[info[i][0].get(nodes[j], inf) for j in range(k)] for i in range(k)]
    B = [info[i][0].get("bd", inf) for i in range(k)]
    plan = []
    greedy = k > exact_limit
    if not greedy:
        full = (1 << k) - 1
        best = [inf] * (1 << k)
        choice = [None] * (1 << k)
        best[0] = 0
        for mask in range(1, full + 1):
            i = (mask & -mask).bit_length() - 1
            rest = mask ^ (1 << i)
            c = B[i] + best[rest]
            if c < best[mask]:
                best[mask], choice[mask] = c, (i, None)
            r = rest
            while r:
                j = (r & -r).bit_length() - 1
                r ^= 1 << j
                c = D[i][j] + best[rest ^ (1 << j)]
                if c < best[mask]:
                    best[mask], choice[mask] = c, (i, j)
        if best[full] >= inf:
            raise DecodeError("anyons cannot be matched")
        mask = full
        while mask:
            i, j = choice[mask]
            plan.append((i, j))
            mask ^= 1 << i
            if j is not None:
                mask ^= 1 << j
    else:
        left = set(range(k))
        while left:
            opts = [(B[i], i, None) for i in left]
            opts += [(D[i][j], i, j) for i in left for j in left if i < j]
            c, i, j = min(opts, key=lambda t: (t[0], t[1], -1 if t[2] is None else t[2]))
            if c >= inf:
                raise DecodeError("anyons cannot be matched")
            plan.append((i, j))
            left -= {i} if j is None else {i, j}
    qubits = []
    for i, j in plan:
        qubits += _walk(info[i][1], "bd" if j is None else nodes[j])
    return qubits, greedy


def _complete(bits: int, chosen: int, fr: _Frame, exact_limit: int):
    """Correction built from X on the qubits in mask ``chosen`` plus single-Z
    bulk fixes and matched boundary strings.  ``None`` if unmatchable."""
    x, z = chosen, 0
    rest = bits
    q = chosen
    while q:
        low = q & -q
        rest ^= fr.sx[low.bit_length() - 1]
        q ^= low
    greedy = False
    for t, qb in fr.bulk.items():
        if (rest >> t) & 1:
            z ^= 1 << qb
    rest &= ~fr.kmask
    for letter in "ZX":
        adj = fr.graphs[letter]
        nodes = [t for t in adj if t != "bd" and (rest >> t) & 1]
        try:
            qs, g = match(sorted(nodes), adj, exact_limit, fr.paths.setdefault(letter, {}))
        except DecodeError:
            return None
        greedy |= g
        for e in qs:
            if letter == "Z":
                z ^= 1 << e
            else:
                dx, dz = fr.dressed[e]
                x ^= dx
                z ^= dz
    return x, z, greedy


def decode_rbh(s, model: CodeModel, check: bool = True, exact_limit: int = EXACT_LIMIT,
               search_limit: int = 12, p: float = 0.01) -> Correction:
    """Correction returning syndrome ``s`` to the code space.

    Candidate corrections combine X on qubits next to flipped bulk terms
    (every subset when there are at most ``search_limit`` candidates) with
    single-qubit Z for the remaining bulk flips and a minimum-weight matching
    of the leftover boundary anyons.  Each logical class is scored by the
    summed weight ``r**|C|`` of its candidates, ``r = p / (3 (1 - p))``.

    With ``check`` the syndrome must satisfy the conservation laws of the
    symmetric sector; unrestricted runs should pass ``check=False``.
    """
    bits = _bits(s)
    if check and not validate_reachable(bits, model):
        raise DecodeError("syndrome is not reachable by symmetric errors")
    fr = _frame(model)
    n = model.n
    flipped = bits & fr.kmask
    cands = [q for q in range(n) if fr.sx[q] & flipped]
    r = p / (3 * (1 - p))
    mass: dict[int, float] = {}
    best: dict[int, tuple] = {}
    greedy = False

    def consider(chosen):
        nonlocal greedy
        out = _complete(bits, chosen, fr, exact_limit)
        if out is None:
            return None
        x, z, g = out
        greedy |= g
        w = (x | z).bit_count()
        cls = model.logical_class(PauliOperator(n, x, z))
        mass[cls] = mass.get(cls, 0.0) + r ** w
        if cls not in best or w < best[cls][0]:
            best[cls] = (w, x, z)
        return w

    if len(cands) <= search_limit:
        for sub in range(1 << len(cands)):
            chosen = 0
            for j in range(len(cands)):
                if (sub >> j) & 1:
                    chosen |= 1 << cands[j]
            consider(chosen)
    else:
        greedy = True
        chosen = 0
        cur = consider(chosen)
        improved = True
        while improved:
            improved = False
            for q in cands:
                w = consider(chosen ^ (1 << q))
                if w is not None and (cur is None or w < cur):
                    chosen ^= 1 << q
                    cur = w
                    improved = True
    if not best:
        raise DecodeError("no correction found")
    cls = max(mass, key=lambda c: (mass[c], -best[c][0], -c))
    _, x, z = best[cls]
    op = PauliOperator(n, x, z)
    left = model.syndrome(op) ^ bits
    if left:
        raise DecodeError(f"correction leaves {left.bit_count()} terms flipped")
    return Correction(op, None, greedy, {"candidates": len(cands)})


def fault_check(error: PauliOperator, correction: Correction, model: CodeModel) -> str:
    c = correction.operator
    if model.syndrome(error) != model.syndrome(c):
        raise DecodeError("error and correction syndromes differ")
    cls = model.logical_class(PauliOperator(model.n, error.x ^ c.x, error.z ^ c.z))
    correction.success_class = cls
    return fault_name(cls)


def fault_name(cls: int) -> str:
    return FAULTS[cls & 3]


# -- brute-force oracle --------------------------------------------------------

@nb.njit(cache=True)
def _popcount(v):
    c = 0
    while v:
        v &= v - np.uint64(1)
        c += 1
    return c


@nb.njit(cache=True)
def _enumerate(delta, n, W, m, keys, max_syn, counts, best, bestw):
    """Visit every Pauli of weight <= W; tally (syndrome, class, weight)."""
    synmask = (np.uint64(1) << np.uint64(m)) - np.uint64(1)
    qs = np.zeros(W + 1, np.int64)
    ps = np.zeros(W + 1, np.int64)
    acc = np.zeros(W + 1, np.uint64)
    code = np.zeros(W + 1, np.int64)
    nk = keys.shape[0]
    # the identity
    i = np.searchsorted(keys, np.uint64(0))
    if i < nk and keys[i] == 0:
        counts[i, 0, 0] += 1
        if bestw[i, 0] > 0:
            bestw[i, 0] = 0
            best[i, 0] = 0
    if W == 0:
        return
    d = 0
    qs[0] = 0
    ps[0] = 0
    while True:
        if qs[d] >= n:
            if d == 0:
                break
            d -= 1
            ps[d] += 1
            if ps[d] == 3:
                ps[d] = 0
                qs[d] += 1
            continue
        q, p = qs[d], ps[d]
        s = acc[d] ^ delta[q, p]
        acc[d + 1] = s
        code[d + 1] = (code[d] << 8) | (3 * q + p + 1)
        syn = s & synmask
        if _popcount(syn) <= max_syn:
            i = np.searchsorted(keys, syn)
            if i < nk and keys[i] == syn:
                cls = int(s >> np.uint64(m))
                counts[i, cls, d + 1] += 1
                if bestw[i, cls] > d + 1:
                    bestw[i, cls] = d + 1
                    best[i, cls] = code[d + 1]
        if d + 1 < W and q + 1 < n:
            d += 1
            qs[d] = q + 1
            ps[d] = 0
        else:
            ps[d] += 1
            if ps[d] == 3:
                ps[d] = 0
                qs[d] += 1


@dataclass
class OracleTable:
    """Weight enumerators of every coset met by Paulis of weight <= ``weight``."""

    model: CodeModel
    keys: np.ndarray
    counts: np.ndarray
    best: np.ndarray
    bestw: np.ndarray
    weight: int

    def lookup(self, bits: int) -> int:
        i = int(np.searchsorted(self.keys, np.uint64(bits)))
        if i >= len(self.keys) or int(self.keys[i]) != bits:
            raise DecodeError("syndrome not in the oracle table")
        return i


def build_oracle(model: CodeModel, syndromes, weight: int = 5, max_qubits: int = 64) -> OracleTable:
    ncls = 1 << (2 * len(model.logicals))
    if model.n > max_qubits or model.m + 2 * len(model.logicals) > 64:
        raise DecodeError("model too large for exhaustive enumeration")
    keys = np.array(sorted({int(_bits(s)) for s in syndromes}), dtype=np.uint64)
    delta = np.zeros((model.n, 3), dtype=np.uint64)
    for q in range(model.n):
        for p, letter in enumerate("XZY"):
            op = PauliOperator.single(model.n, q, letter)
            delta[q, p] = model.syndrome(op) | (model.logical_class(op) << model.m)
    counts = np.zeros((len(keys), ncls, weight + 1), dtype=np.int64)
    best = np.zeros((len(keys), ncls), dtype=np.int64)
    bestw = np.full((len(keys), ncls), 1 << 30, dtype=np.int64)
    max_syn = max((int(k).bit_count() for k in keys), default=0)
    _enumerate(delta, model.n, weight, model.m, keys, max_syn, counts, best, bestw)
    return OracleTable(model, keys, counts, best, bestw, weight)


def _decode_code(code: int, n: int) -> PauliOperator:
    x = z = 0
    while code:
        letter = (code & 0xFF) - 1
        code >>= 8
        q, p = divmod(letter, 3)
        if p in (0, 2):
            x |= 1 << q
        if p in (1, 2):
            z |= 1 << q
    return PauliOperator(n, x, z)


def ml_oracle(s, model: CodeModel, table: OracleTable | None = None,
              p: float = 0.01, weight: int = 5, rel_tol: float = 1e-9) -> Correction:
    """Most probable coset under i.i.d. depolarizing noise of strength ``p``.

    Coset probabilities are summed over every representative up to the
    table's weight cutoff, which dominates for small ``p``.  ``meta["optimal"]``
    lists every class within ``rel_tol`` of the best, so exact ties show up.
    """
    bits = _bits(s)
    if table is None:
        table = build_oracle(model, [bits], weight)
    i = table.lookup(bits)
    r = p / (3 * (1 - p))
    ws = r ** np.arange(table.weight + 1)
    probs = table.counts[i] @ ws
    if not probs.any():
        raise DecodeError(f"no representative of weight <= {table.weight}")
    cls = int(np.argmax(probs))
    op = _decode_code(int(table.best[i, cls]), model.n)
    ranked = sorted(probs, reverse=True)
    return Correction(op, None, False,
                      {"class": cls, "weight": int(table.bestw[i, cls]),
                       "optimal": [int(c) for c in np.flatnonzero(probs >= probs[cls] * (1 - rel_tol))],
                       "margin": float(ranked[0] - (ranked[1] if len(ranked) > 1 else 0.0))})

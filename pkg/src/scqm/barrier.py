"""Exact energy barriers by bottleneck search over (syndrome, logical class).

States are bit vectors holding the syndrome followed by the logical class
bits, packed into 64-bit words.  The search settles states in order of their
bottleneck value (the largest energy met on the best path so far) using one
bucket per energy level, so the first target popped is optimal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .model import CodeModel
from .pauli import PauliOperator, to_string
from .symmetry import MoveSet

_HASH_EMPTY = -1


@dataclass
class BarrierResult:
    barrier: int | None
    witness: list[int]
    explored: int
    capped: bool
    lower_bound: int
    target_class: int | None = None
    wall_time: float = 0.0
    moves: MoveSet | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        ops = [to_string(self.moves.moves[i]) for i in self.witness] if self.moves else []
        return {"barrier": self.barrier, "capped": self.capped,
                "lower_bound": self.lower_bound, "target_class": self.target_class,
                "witness": ops, "nodes_explored": self.explored,
                "wall_time": round(self.wall_time, 3)}


@nb.njit(cache=True, inline="always")
def _popcount(v):
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((v * np.uint64(0x0101010101010101)) >> np.uint64(56))


@nb.njit(cache=True)
def _hash(states, i, W):
    h = np.uint64(1469598103934665603)
    for w in range(W):
        h ^= states[i, w]
        h *= np.uint64(1099511628211)
        h ^= h >> np.uint64(29)
    return h


@nb.njit(cache=True)
def _hash_row(row, W):
    h = np.uint64(1469598103934665603)
    for w in range(W):
        h ^= row[w]
        h *= np.uint64(1099511628211)
        h ^= h >> np.uint64(29)
    return h


@nb.njit(cache=True)
def _lookup(table, states, row, W):
    mask = np.uint64(table.shape[0] - 1)
    slot = _hash_row(row, W) & mask
    while True:
        j = table[slot]
        if j == -1:
            return -1, slot
        same = True
        for w in range(W):
            if states[j, w] != row[w]:
                same = False
                break
        if same:
            return j, slot
        slot = (slot + np.uint64(1)) & mask


@nb.njit(cache=True)
def _rehash(states, count, size, W):
    table = np.full(size, -1, dtype=np.int64)
    mask = np.uint64(size - 1)
    for i in range(count):
        slot = _hash(states, i, W) & mask
        while table[slot] != -1:
            slot = (slot + np.uint64(1)) & mask
        table[slot] = i
    return table


@nb.njit(cache=True)
def _search(start, emask, ptr, word, mask, mweight, by_term_ptr, by_term,
            order, cap, tmask, tval, max_states):
    """Bucketed bottleneck search.

    Returns (found target index or -1, settled state or -1, number of states,
    parent array, parent move array, bottleneck array, min rejected energy).
    """
    W = start.shape[0]
    nmoves = ptr.shape[0] - 1
    capacity = 1 << 12
    states = np.zeros((capacity, W), dtype=np.uint64)
    parent = np.full(capacity, -1, dtype=np.int64)
    pmove = np.full(capacity, -1, dtype=np.int64)
    bott = np.zeros(capacity, dtype=np.int64)
    energy = np.zeros(capacity, dtype=np.int64)
    nxt = np.full(capacity, -1, dtype=np.int64)
    head = np.full(cap + 1, -1, dtype=np.int64)
    tail = np.full(cap + 1, -1, dtype=np.int64)
    table = np.full(capacity * 2, -1, dtype=np.int64)
    row = np.zeros(W, dtype=np.uint64)
    seen_move = np.full(nmoves, -1, dtype=np.int64)
    ntarget = tmask.shape[0]

    e0 = 0
    for w in range(W):
        states[0, w] = start[w]
        e0 += _popcount(start[w] & emask[w])
    energy[0] = e0
    bott[0] = e0
    count = 1
    _, slot = _lookup(table, states, states[0], W)
    table[slot] = 0
    head[e0] = 0
    tail[e0] = 0
    rejected = -1

    for level in range(cap + 1):
        cur = head[level]
        while cur != -1:
            # target test on settle
            for t in range(ntarget):
                hit = True
                for w in range(W):
                    if (states[cur, w] & tmask[t, w]) != tval[t, w]:
                        hit = False
                        break
                if hit:
                    return t, cur, count, parent[:count], pmove[:count], bott[:count], rejected
            e = energy[cur]
            budget = cap - e
            # candidate moves: those touching a flipped term, then cheap ones
            ncand = 0
            for w in range(W):
                v = states[cur, w] & emask[w]
                while v:
                    low = v & (~v + np.uint64(1))
                    bit = w * 64 + _popcount(low - np.uint64(1))
                    v ^= low
                    for k in range(by_term_ptr[bit], by_term_ptr[bit + 1]):
                        mv = by_term[k]
                        if seen_move[mv] != cur:
                            seen_move[mv] = cur
                            ncand += 1
                            _expand(cur, mv, states, row, W, emask, ptr, word, mask)
                            count, capacity, states, parent, pmove, bott, energy, nxt, table, rejected = _admit(
                                cur, mv, row, W, emask, cap, level, count, capacity, states, parent,
                                pmove, bott, energy, nxt, table, head, tail, rejected, max_states)
                            if count < 0:
                                return -2, -1, -count, parent, pmove, bott, rejected
            for k in range(order.shape[0]):
                mv = order[k]
                if mweight[mv] > budget:
                    if rejected == -1 or e + mweight[mv] < rejected:
                        rejected = e + mweight[mv]
                    break
                if seen_move[mv] == cur:
                    continue
                seen_move[mv] = cur
                _expand(cur, mv, states, row, W, emask, ptr, word, mask)
                count, capacity, states, parent, pmove, bott, energy, nxt, table, rejected = _admit(
                    cur, mv, row, W, emask, cap, level, count, capacity, states, parent,
                    pmove, bott, energy, nxt, table, head, tail, rejected, max_states)
                if count < 0:
                    return -2, -1, -count, parent, pmove, bott, rejected
            cur = nxt[cur]
    return -1, -1, count, parent[:count], pmove[:count], bott[:count], rejected


@nb.njit(cache=True, inline="always")
def _expand(cur, mv, states, row, W, emask, ptr, word, mask):
    for w in range(W):
        row[w] = states[cur, w]
    for k in range(ptr[mv], ptr[mv + 1]):
        row[word[k]] ^= mask[k]


@nb.njit(cache=True)
def _admit(cur, mv, row, W, emask, cap, level, count, capacity, states, parent, pmove,
           bott, energy, nxt, table, head, tail, rejected, max_states):
    e = 0
    for w in range(W):
        e += _popcount(row[w] & emask[w])
    if e > cap:
        if rejected == -1 or e < rejected:
            rejected = e
        return count, capacity, states, parent, pmove, bott, energy, nxt, table, rejected
    j, slot = _lookup(table, states, row, W)
    if j != -1:
        return count, capacity, states, parent, pmove, bott, energy, nxt, table, rejected
    if count >= max_states:
        return -count, capacity, states, parent, pmove, bott, energy, nxt, table, rejected
    if count == capacity:
        capacity *= 2
        s2 = np.zeros((capacity, W), dtype=np.uint64)
        s2[:count] = states
        states = s2
        p2 = np.full(capacity, -1, dtype=np.int64)
        p2[:count] = parent
        parent = p2
        m2 = np.full(capacity, -1, dtype=np.int64)
        m2[:count] = pmove
        pmove = m2
        b2 = np.zeros(capacity, dtype=np.int64)
        b2[:count] = bott
        bott = b2
        e2 = np.zeros(capacity, dtype=np.int64)
        e2[:count] = energy
        energy = e2
        n2 = np.full(capacity, -1, dtype=np.int64)
        n2[:count] = nxt
        nxt = n2
        table = _rehash(states, count, capacity * 2, W)
        j, slot = _lookup(table, states, row, W)
    i = count
    for w in range(W):
        states[i, w] = row[w]
    table[slot] = i
    parent[i] = cur
    pmove[i] = mv
    b = e if e > level else level
    bott[i] = b
    energy[i] = e
    if head[b] == -1:
        head[b] = i
    else:
        nxt[tail[b]] = i
    tail[b] = i
    return count + 1, capacity, states, parent, pmove, bott, energy, nxt, table, rejected


def _to_words(v: int, W: int) -> np.ndarray:
    return np.array([(v >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(W)], dtype=np.uint64)


def _term_index(moves: MoveSet, m: int):
    lists = [[] for _ in range(m)]
    for i, d in enumerate(moves.deltas):
        v = d
        while v:
            low = v & -v
            lists[low.bit_length() - 1].append(i)
            v ^= low
    ptr = np.zeros(m + 1, dtype=np.int64)
    for t in range(m):
        ptr[t + 1] = ptr[t] + len(lists[t])
    flat = np.array([i for lst in lists for i in lst], dtype=np.int64)
    return ptr, flat


def bottleneck(model: CodeModel, moves: MoveSet, targets: list[tuple[int, int]],
               cap: int, start: int = 0, max_states: int = 50_000_000) -> BarrierResult:
    """Minimise the largest energy on a path from ``start`` to any target.

    ``targets`` are ``(mask, value)`` pairs over the combined state vector
    (syndrome bits, then class bits from position ``model.m``).  ``cap`` is
    an energy; states above it are never entered.
    """
    t0 = time.time()
    m = model.m
    W = moves.words
    emask = _to_words((1 << m) - 1, W)
    ptr, word, mask, weight = moves.packed()
    bptr, bidx = _term_index(moves, m)
    order = np.argsort(weight, kind="stable").astype(np.int64)
    tmask = np.array([_to_words(a, W) for a, _ in targets], dtype=np.uint64).reshape(len(targets), W)
    tval = np.array([_to_words(b, W) for _, b in targets], dtype=np.uint64).reshape(len(targets), W)
    cap_count = cap // model.gap
    hit, node, count, parent, pmove, bott, rejected = _search(
        _to_words(start, W), emask, ptr, word, mask, weight, bptr, bidx, order,
        cap_count, tmask, tval, max_states)
    wall = time.time() - t0
    if hit == -1:
        # every state below the cap was settled without meeting a target
        lower = rejected * model.gap if rejected >= 0 else None
        return BarrierResult(None, [], int(count), True, lower, None, wall, moves)
    if hit == -2:
        raise MemoryError(f"bottleneck search exceeded {max_states} states")
    witness = []
    j = node
    while parent[j] != -1:
        witness.append(int(pmove[j]))
        j = parent[j]
    witness.reverse()
    value = int(bott[node]) * model.gap
    klass = targets[hit][1] >> m
    return BarrierResult(value, witness, int(count), False, value, klass, wall, moves)


def logical_targets(model: CodeModel, moves: MoveSet, classes=None) -> list[tuple[int, int]]:
    """Vacuum syndrome with a nonzero logical class."""
    m = model.m
    nbits = moves.n_class_bits
    full = (1 << (m + nbits)) - 1
    if classes is None:
        classes = range(1, 1 << (2 * len(model.logicals)))
    return [(full, c << m) for c in classes]


def energy_barrier(model: CodeModel, moves: MoveSet, target: int | None = None,
                   cap: int = 40, max_states: int = 50_000_000) -> BarrierResult:
    """Exact barrier to reach a nontrivial logical class.

    ``target`` restricts to one class; by default every nontrivial class is
    accepted.  If no target is reachable below ``cap`` the result is flagged
    as capped and carries the lowest energy that was refused.
    """
    classes = None if target is None else [target]
    return bottleneck(model, moves, logical_targets(model, moves, classes), cap,
                      max_states=max_states)


@dataclass
class TraceStep:
    operator: PauliOperator
    syndrome: int
    energy: int
    logical_class: int


def replay(witness, model: CodeModel, moves: MoveSet) -> list[TraceStep]:
    """Re-apply a witness move by move from the identity."""
    op = PauliOperator(model.n)
    trace = [TraceStep(op, 0, 0, 0)]
    for i in witness:
        if not 0 <= i < len(moves):
            raise ValueError(f"witness refers to unknown move {i}")
        p = moves.moves[i]
        op = PauliOperator(model.n, op.x ^ p.x, op.z ^ p.z)
        s = model.syndrome(op)
        trace.append(TraceStep(op, s, model.energy(s), model.logical_class(op)))
    return trace


def trace_max_energy(trace: list[TraceStep]) -> int:
    return max(t.energy for t in trace)

"""Metropolis dynamics over syndromes, Gibbs checks and memory-time runs.

The chain state is the syndrome with the logical class bits appended, packed
into 64-bit words exactly as in the barrier search.  One event proposes a move
chosen uniformly and accepts it with probability ``min(1, exp(-beta dE))``.
Time is reported in sweeps, one sweep being as many events as there are moves.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

import numba as nb
import numpy as np

from . import gf2
from .model import CodeModel
from .symmetry import MoveSet


# -- kernels -------------------------------------------------------------------

@nb.njit(cache=True)
def _seed(seed):
    np.random.seed(seed)


@nb.njit(cache=True, inline="always")
def _pop(v):
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((v * np.uint64(0x0101010101010101)) >> np.uint64(56))


@nb.njit(cache=True, inline="always")
def _delta_energy(state, emask, ptr, word, mask, i):
    d = 0
    for k in range(ptr[i], ptr[i + 1]):
        w = word[k]
        ms = mask[k] & emask[w]
        d += _pop(ms) - 2 * _pop(state[w] & ms)
    return d


@nb.njit(cache=True, inline="always")
def _apply(state, ptr, word, mask, i):
    for k in range(ptr[i], ptr[i + 1]):
        state[word[k]] ^= mask[k]


@nb.njit(cache=True)
def _run(state, emask, ptr, word, mask, bg, steps):
    """Advance the chain ``steps`` events in place; return accepted count."""
    M = ptr.shape[0] - 1
    acc = 0
    for _ in range(steps):
        i = np.random.randint(0, M)
        d = _delta_energy(state, emask, ptr, word, mask, i)
        if d <= 0 or np.random.random() < math.exp(-bg * d):
            _apply(state, ptr, word, mask, i)
            acc += 1
    return acc


@nb.njit(cache=True)
def _sample(state, emask, ptr, word, mask, bg, burn, thin, count, out):
    """Burn in, then store ``count`` states ``thin`` events apart."""
    _run(state, emask, ptr, word, mask, bg, burn)
    for j in range(count):
        _run(state, emask, ptr, word, mask, bg, thin)
        for w in range(state.shape[0]):
            out[j, w] = state[w]


@nb.njit(cache=True)
def _same(state, emask, target):
    for w in range(state.shape[0]):
        if (state[w] & emask[w]) != target[w]:
            return False
    return True


@nb.njit(cache=True)
def _flow(state, emask, ptr, word, mask, bg, steps, a, b):
    """Count events spent in syndromes ``a`` and ``b`` and the jumps between."""
    M = ptr.shape[0] - 1
    in_a = in_b = ab = ba = 0
    for _ in range(steps):
        at_a = _same(state, emask, a)
        at_b = False if at_a else _same(state, emask, b)
        in_a += at_a
        in_b += at_b
        i = np.random.randint(0, M)
        d = _delta_energy(state, emask, ptr, word, mask, i)
        if d <= 0 or np.random.random() < math.exp(-bg * d):
            _apply(state, ptr, word, mask, i)
            if at_a and _same(state, emask, b):
                ab += 1
            elif at_b and _same(state, emask, a):
                ba += 1
    return in_a, in_b, ab, ba


# -- python layer ----------------------------------------------------------------

@dataclass
class Chain:
    """Packed move data shared by every run on one (model, move set) pair."""

    model: CodeModel
    moves: MoveSet
    W: int
    emask: np.ndarray
    csr: tuple

    @classmethod
    def of(cls, model: CodeModel, moves: MoveSet) -> "Chain":
        W = moves.words
        emask = _words((1 << model.m) - 1, W)
        return cls(model, moves, W, emask, moves.packed()[:3])

    def fresh(self) -> np.ndarray:
        return np.zeros(self.W, dtype=np.uint64)

    def syndrome(self, state: np.ndarray) -> int:
        return _int(state) & ((1 << self.model.m) - 1)

    def klass(self, state: np.ndarray) -> int:
        return _int(state) >> self.model.m

    def bg(self, beta: float) -> float:
        return float(beta * self.model.gap)

    def run(self, state: np.ndarray, beta: float, steps: int) -> int:
        return _run(state, self.emask, *self.csr, self.bg(beta), int(steps))


def _words(v: int, W: int) -> np.ndarray:
    return np.array([(v >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(W)], dtype=np.uint64)


def _int(state: np.ndarray) -> int:
    v = 0
    for w in range(len(state) - 1, -1, -1):
        v = (v << 64) | int(state[w])
    return v


@dataclass
class Trajectory:
    seed: int
    beta: float
    steps: int
    samples: list[tuple[int, int, int]] = field(default_factory=list)
    final_operator_class: int = 0
    accepted: int = 0

    def to_dict(self) -> dict:
        return {"seed": self.seed, "beta": self.beta, "steps": self.steps,
                "accepted": self.accepted, "final_class": self.final_operator_class,
                "samples": [[t, format(s, "x"), e] for t, s, e in self.samples]}


def geometric_times(t_max: int, ratio: float = 2.0) -> list[int]:
    out, t = [], 1.0
    while t <= t_max:
        if not out or int(t) != out[-1]:
            out.append(int(t))
        t *= ratio
    if out[-1] != t_max:
        out.append(t_max)
    return out


def metropolis_run(model: CodeModel, moves: MoveSet, beta: float, t_max: int, seed: int,
                   times: list[int] | None = None) -> Trajectory:
    """Run from vacuum for ``t_max`` events, sampling at ``times`` (events)."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    chain = Chain.of(model, moves)
    state = chain.fresh()
    _seed(seed)
    times = geometric_times(t_max) if times is None else sorted(times)
    traj = Trajectory(seed, beta, t_max)
    now = 0
    for t in times:
        traj.accepted += chain.run(state, beta, t - now)
        now = t
        s = chain.syndrome(state)
        traj.samples.append((t, s, model.gap * s.bit_count()))
    if now < t_max:
        traj.accepted += chain.run(state, beta, t_max - now)
    traj.final_operator_class = chain.klass(state)
    return traj


def accumulated_operator(moves: MoveSet, word) -> tuple[int, int]:
    x = z = 0
    for i in word:
        x ^= moves.moves[i].x
        z ^= moves.moves[i].z
    return x, z


# -- detailed balance -------------------------------------------------------------

@dataclass
class FlowCount:
    beta: float
    energy_gap: int
    in_a: int
    in_b: int
    a_to_b: int
    b_to_a: int

    @property
    def ratio(self) -> float:
        return (self.a_to_b / self.in_a) / (self.b_to_a / self.in_b)

    @property
    def expected(self) -> float:
        return math.exp(-self.beta * self.energy_gap)

    @property
    def sigma_log(self) -> float:
        return math.sqrt(1 / self.a_to_b + 1 / self.b_to_a)

    def within(self, k: float = 3.0) -> bool:
        return abs(math.log(self.ratio) - math.log(self.expected)) <= k * self.sigma_log


def lowest_neighbour(model: CodeModel, moves: MoveSet) -> int:
    """Syndrome one move from vacuum with the smallest energy, most moves first."""
    tally = Counter(d for d in moves.deltas)
    return min(tally, key=lambda d: (d.bit_count(), -tally[d], d))


def flow_count(model: CodeModel, moves: MoveSet, beta: float, events: int, seed: int,
               a: int = 0, b: int | None = None) -> FlowCount:
    chain = Chain.of(model, moves)
    b = lowest_neighbour(model, moves) if b is None else b
    state = chain.fresh()
    _seed(seed)
    ia, ib, ab, ba = _flow(state, chain.emask, *chain.csr, chain.bg(beta), int(events),
                           _words(a, chain.W), _words(b, chain.W))
    gap = model.gap * (b.bit_count() - a.bit_count())
    return FlowCount(beta, gap, ia, ib, ab, ba)


# -- exact Gibbs weights ------------------------------------------------------------

@dataclass
class GibbsSector:
    """Syndromes reachable by the moves, as a GF(2) span, with its weight
    enumerator ``A[w]``."""

    m: int
    basis: list[int]
    A: list[int]
    gap: int

    def log_z(self, beta: float) -> float:
        terms = [math.log(a) - beta * self.gap * w for w, a in enumerate(self.A) if a]
        top = max(terms)
        return top + math.log(sum(math.exp(t - top) for t in terms))

    def prob(self, s: int, beta: float) -> float:
        return math.exp(-beta * self.gap * s.bit_count() - self.log_z(beta))

    def energy_distribution(self, beta: float) -> list[float]:
        lz = self.log_z(beta)
        return [a * math.exp(-beta * self.gap * w - lz) for w, a in enumerate(self.A)]

    def contains(self, s: int) -> bool:
        ech = gf2.Echelon()
        for v in self.basis:
            ech.add(v)
        return ech.contains(s)


def _span_weights(basis: list[int], m: int) -> list[int]:
    A = [0] * (m + 1)
    k = len(basis)
    v = 0
    A[0] = 1
    for i in range(1, 1 << k):
        low = (i & -i).bit_length() - 1
        v ^= basis[low]
        A[v.bit_count()] += 1
    return A


def _krawtchouk(w: int, j: int, m: int) -> int:
    return sum((-1) ** i * math.comb(j, i) * math.comb(m - j, w - i) for i in range(min(w, j) + 1))


def gibbs_sector(model: CodeModel, moves: MoveSet, limit: int = 24) -> GibbsSector:
    """Exact weight enumerator of the reachable syndrome space.

    Enumerates the span directly when small; otherwise enumerates the dual
    code and applies the MacWilliams transform.
    """
    m = model.m
    basis = list(gf2.rref(d for d in moves.deltas if d).values())
    k = len(basis)
    if k <= limit:
        A = _span_weights(basis, m)
    elif m - k <= limit:
        dual = gf2.nullspace(basis, m)
        B = _span_weights(dual, m)
        size = 1 << len(dual)
        A = []
        for w in range(m + 1):
            tot = sum(Bj * _krawtchouk(w, j, m) for j, Bj in enumerate(B) if Bj)
            if tot % size:
                raise ArithmeticError("MacWilliams transform is not integral")
            A.append(tot // size)
    else:
        raise ValueError("syndrome space too large to enumerate")
    return GibbsSector(m, basis, A, model.gap)


@dataclass
class GibbsCheck:
    beta: float
    samples: int
    tv_syndrome: float
    tv_energy: float
    distinct: int


def gibbs_check(model: CodeModel, moves: MoveSet, beta: float, samples: int, thin: int,
                burn: int, seed: int, sector: GibbsSector | None = None) -> GibbsCheck:
    """Total-variation distance of long-run samples from exact Gibbs weights."""
    chain = Chain.of(model, moves)
    sector = gibbs_sector(model, moves) if sector is None else sector
    state = chain.fresh()
    _seed(seed)
    out = np.zeros((samples, chain.W), dtype=np.uint64)
    _sample(state, chain.emask, *chain.csr, chain.bg(beta), int(burn), int(thin), int(samples), out)
    full = (1 << model.m) - 1
    counts = Counter(_int(row) & full for row in out)
    tv, seen = 0.0, 0.0
    for s, c in counts.items():
        p = sector.prob(s, beta)
        seen += p
        tv += abs(c / samples - p)
    tv = 0.5 * (tv + max(0.0, 1.0 - seen))
    ed = sector.energy_distribution(beta)
    ec = Counter(s.bit_count() for s in counts.elements())
    tv_e = 0.5 * sum(abs(ec.get(w, 0) / samples - p) for w, p in enumerate(ed))
    return GibbsCheck(beta, samples, tv, tv_e, len(counts))


# -- memory time ------------------------------------------------------------------

@dataclass
class MemoryPoint:
    L: int
    tau: float
    ci: tuple[float, float]
    trials: int
    censored: int
    times: list[float]

    @property
    def censored_median(self) -> bool:
        return self.censored * 2 >= self.trials


@dataclass
class MemoryEstimate:
    beta: float
    sizes: list[int]
    points: list[MemoryPoint]
    trials: int

    @property
    def tau(self) -> dict[int, tuple[float, float, float]]:
        return {p.L: (p.tau, *p.ci) for p in self.points}

    def separated(self, a: int, b: int) -> bool:
        """True when the interval at size ``b`` lies strictly above size ``a``."""
        pa, pb = self.tau[a], self.tau[b]
        return pb[1] > pa[2]

    def overlapping(self) -> bool:
        lo = max(p.ci[0] for p in self.points)
        hi = min(p.ci[1] for p in self.points)
        return lo <= hi


def bootstrap_median(values, reps: int = 2000, seed: int = 0, level: float = 0.95):
    rng = np.random.default_rng(seed)
    v = np.asarray(values, dtype=float)
    meds = np.median(rng.choice(v, size=(reps, len(v)), replace=True), axis=1)
    a = (1 - level) / 2
    return float(np.median(v)), (float(np.quantile(meds, a)), float(np.quantile(meds, 1 - a)))


def trial_seeds(seed: int, trials: int) -> list[int]:
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1)[0] & 0x7FFFFFFF) for c in ss.spawn(trials)]


def _fault_chunk(model: CodeModel, moves: MoveSet, beta: float, decode, seeds: list[int],
                 snaps: list[int], t_cap: float) -> list[tuple[float, bool]]:
    chain = Chain.of(model, moves)
    M = len(moves)
    cache: dict[int, int] = {}
    out = []
    for s in seeds:
        state = chain.fresh()
        _seed(s)
        now, hit = 0, None
        for t in snaps:
            chain.run(state, beta, (t - now) * M)
            now = t
            syn = chain.syndrome(state)
            c = cache.get(syn)
            if c is None:
                c = cache[syn] = decode(syn)
            if chain.klass(state) ^ c:
                hit = t
                break
        out.append((float(t_cap), True) if hit is None else (float(hit), False))
    return out


def _pool_chunk(args):
    model, moves, beta, seeds, snaps, t_cap = args
    return _fault_chunk(model, moves, beta, rbh_decoder(model), seeds, snaps, t_cap)


def fault_times(model: CodeModel, moves: MoveSet, beta: float, decode: Callable[[int], int] | None,
                trials: int, t_cap: float, seed: int, ratio: float = 2.0,
                workers: int = 1) -> tuple[list[float], int]:
    """First snapshot (in sweeps) at which decoding gives a logical fault.

    ``decode`` maps a syndrome to the logical class of its correction; None
    uses the cluster-model decoder, which is also what worker processes use.
    Trials that survive to ``t_cap`` are recorded as ``t_cap`` and counted as
    censored.  Every trial owns its seed, so the worker count never changes
    the result.
    """
    snaps = geometric_times(int(t_cap), ratio)
    seeds = trial_seeds(seed, trials)
    if workers > 1:
        if decode is not None:
            raise ValueError("custom decoders only run in-process")
        from concurrent.futures import ProcessPoolExecutor
        chunks = [seeds[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_pool_chunk, [(model, moves, beta, c, snaps, t_cap) for c in chunks]))
        by_seed = {}
        for c, part in zip(chunks, parts):
            by_seed.update(zip(c, part))
        rows = [by_seed[s] for s in seeds]
    else:
        rows = _fault_chunk(model, moves, beta, decode or rbh_decoder(model), seeds, snaps, t_cap)
    return [t for t, _ in rows], sum(c for _, c in rows)


def rbh_decoder(model: CodeModel, check: bool = False) -> Callable[[int], int]:
    from .decoder import decode_rbh

    def decode(s: int) -> int:
        return model.logical_class(decode_rbh(s, model, check=check).operator)
    return decode


def memory_time(models: dict[int, tuple[CodeModel, MoveSet]], beta: float, trials: int,
                t_cap: float, seed: int, decoder=None, ratio: float = 2.0,
                workers: int = 1) -> MemoryEstimate:
    """Median first-fault time per size with bootstrap intervals."""
    points = []
    for L, (model, moves) in sorted(models.items()):
        decode = decoder(model) if decoder else None
        times, cens = fault_times(model, moves, beta, decode, trials, t_cap, seed + L, ratio, workers)
        med, ci = bootstrap_median(times, seed=seed)
        points.append(MemoryPoint(L, med, ci, trials, cens, times))
    return MemoryEstimate(beta, sorted(models), points, trials)


# -- Gibbs loop census ------------------------------------------------------------

def bulk_adjacency(model: CodeModel) -> dict[int, list[int]]:
    """Adjacency among single-qubit terms: edge terms meeting at a vertex,
    face terms meeting at a cube."""
    cx = model.complex
    by_anchor: dict = {}
    kinds = {}
    for t, (kind, cell) in enumerate(model.labels):
        if kind != "K":
            continue
        d, i = cell
        kinds[t] = d
        anchors = [(0, v) for v in cx.boundary[1][i]] if d == 1 else [(3, c) for c in cx.coboundary[2][i]]
        for a in anchors:
            by_anchor.setdefault(a, []).append(t)
    adj = {t: set() for t in kinds}
    for ts in by_anchor.values():
        for t in ts:
            adj[t].update(u for u in ts if u != t)
    return {t: sorted(v) for t, v in adj.items()}


def largest_component(bits: int, adj: dict[int, list[int]]) -> int:
    todo = {t for t in adj if (bits >> t) & 1}
    best = 0
    while todo:
        stack = [todo.pop()]
        size = 0
        while stack:
            u = stack.pop()
            size += 1
            for w in adj[u]:
                if w in todo:
                    todo.remove(w)
                    stack.append(w)
        best = max(best, size)
    return best


def gibbs_loop_census(model: CodeModel, moves: MoveSet, beta: float, burn_in: int,
                      samples: int, seed: int, thin: int | None = None) -> Counter:
    """Histogram of the largest connected cluster of flipped bulk terms."""
    chain = Chain.of(model, moves)
    thin = len(moves) if thin is None else thin
    state = chain.fresh()
    _seed(seed)
    out = np.zeros((samples, chain.W), dtype=np.uint64)
    _sample(state, chain.emask, *chain.csr, chain.bg(beta), int(burn_in), int(thin), int(samples), out)
    adj = bulk_adjacency(model)
    full = (1 << model.m) - 1
    return Counter(largest_component(_int(row) & full, adj) for row in out)


def tail(hist: Counter, k: int) -> float:
    total = sum(hist.values())
    return sum(c for w, c in hist.items() if w >= k) / total

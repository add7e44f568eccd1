import itertools
import random

import numpy as np
import pytest

from scqm.decoder import (Correction, DecodeError, build_oracle, decode_rbh, fault_check,
                          fault_name, ml_oracle)
from scqm.pauli import PauliOperator
from scqm.symmetry import apply_word


def brute_counts(model, bits, weight):
    """Class-resolved weight enumerator of all Paulis with syndrome ``bits``."""
    ncls = 1 << (2 * len(model.logicals))
    counts = np.zeros((ncls, weight + 1), dtype=np.int64)
    singles = [(q, c) for q in range(model.n) for c in "XZY"]
    for w in range(weight + 1):
        for combo in itertools.combinations(range(model.n), w):
            for letters in itertools.product("XZY", repeat=w):
                xs = [q for q, c in zip(combo, letters) if c in "XY"]
                zs = [q for q, c in zip(combo, letters) if c in "ZY"]
                p = PauliOperator.from_support(model.n, xs, zs)
                if model.syndrome(p) == bits:
                    counts[model.logical_class(p), w] += 1
    return counts


def reflect_y(model):
    """Qubit and term permutations for the mirror y -> 2L - y."""
    cx = model.complex
    lo, hi = cx.bounds[1]

    def image(cell):
        x, y, z = cx.coord(cell)
        return cx.cell((x, lo + hi - y, z))

    qperm = [cx.qubit_index[image(c)] for c in cx.qubit_sites]
    tindex = {lab: t for t, lab in enumerate(model.labels)}
    tperm = [tindex[(kind, image(cell))] for kind, cell in model.labels]
    return qperm, tperm


def permute_bits(v, perm):
    return sum(1 << perm[i] for i in range(len(perm)) if (v >> i) & 1)


def test_vacuum_needs_no_correction(rbh2):
    assert decode_rbh(0, rbh2).operator.is_identity()


def test_invalid_syndrome_rejected(rbh2):
    a = next(i for i, (kind, _) in enumerate(rbh2.labels) if kind == "A")
    with pytest.raises(DecodeError):
        decode_rbh(1 << a, rbh2)


def test_corrections_restore_the_code_space(rbh3, moves3):
    rng = random.Random(0)
    for _ in range(100):
        word = [rng.randrange(len(moves3)) for _ in range(rng.randint(1, 4))]
        op, s, _ = apply_word(rbh3, moves3, word)
        c = decode_rbh(s, rbh3)
        assert rbh3.syndrome(c.operator) == s


def test_single_moves_are_always_corrected(rbh3, moves3):
    for p in moves3.moves:
        c = decode_rbh(rbh3.syndrome(p), rbh3)
        assert fault_check(p, c, rbh3) == "no_fault"


def test_fault_check_flags_logicals(rbh2):
    xl, zl = rbh2.logicals[0]
    ident = Correction(PauliOperator(rbh2.n))
    assert fault_check(zl, ident, rbh2) == "Z_fault"
    assert fault_check(xl, ident, rbh2) == "X_fault"
    assert fault_name(3) == "Y_fault"
    with pytest.raises(DecodeError):
        fault_check(PauliOperator.single(rbh2.n, 0, "Z"), ident, rbh2)


def test_oracle_table_matches_brute_force(rbh2):
    rng = random.Random(1)
    syns = {0}
    for _ in range(6):
        q = rng.randrange(rbh2.n)
        syns.add(rbh2.syndrome(PauliOperator.single(rbh2.n, q, rng.choice("XZY"))))
    table = build_oracle(rbh2, sorted(syns), weight=2)
    for s in syns:
        got = table.counts[table.lookup(s)]
        assert (got == brute_counts(rbh2, s, 2)).all()


def test_oracle_is_mirror_invariant(rbh2):
    qperm, tperm = reflect_y(rbh2)
    rng = random.Random(2)
    syns = []
    for _ in range(15):
        qs = rng.sample(range(rbh2.n), 2)
        p = PauliOperator.from_support(rbh2.n, zs=qs)
        syns.append(rbh2.syndrome(p))
    mirrored = [permute_bits(s, tperm) for s in syns]
    table = build_oracle(rbh2, syns + mirrored, weight=4)
    for s, t in zip(syns, mirrored):
        a, b = ml_oracle(s, rbh2, table), ml_oracle(t, rbh2, table)
        assert a.meta["optimal"] == b.meta["optimal"]
        assert a.meta["weight"] == b.meta["weight"]


def test_oracle_correction_has_the_syndrome(rbh2):
    p = PauliOperator.from_support(rbh2.n, xs=[3], zs=[7])
    s = rbh2.syndrome(p)
    c = ml_oracle(s, rbh2, weight=3)
    assert rbh2.syndrome(c.operator) == s
    assert c.meta["class"] in c.meta["optimal"]


def test_oracle_lookup_of_unknown_syndrome(rbh2):
    table = build_oracle(rbh2, [0], weight=1)
    with pytest.raises(DecodeError):
        table.lookup(1)

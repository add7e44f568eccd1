import itertools
import random
from functools import reduce

import numpy as np
import pytest

from scqm.pauli import (PauliError, PauliGroup, PauliOperator, centralizer, commutes,
                        conjugate, from_bytes, from_string, logical_operators, multiply,
                        product, to_bytes, to_string)

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])
Y = np.array([[0, -1j], [1j, 0]])


def dense(p: PauliOperator) -> np.ndarray:
    """Matrix oracle, qubit 0 as the most significant tensor factor."""
    mats = []
    for q in range(p.n):
        x, z = (p.x >> q) & 1, (p.z >> q) & 1
        mats.append([[I2, Z], [X, Y]][x][z])
    return p.sign * reduce(np.kron, mats)


def random_pauli(rng, n):
    return PauliOperator(n, rng.getrandbits(n), rng.getrandbits(n), rng.choice((1, -1)))


def gate_matrix(name, a, b, n):
    dim = 1 << n
    U = np.zeros((dim, dim))
    for i in range(dim):
        bit = lambda q: (i >> (n - 1 - q)) & 1
        if name == "CZ":
            U[i, i] = -1 if bit(a) and bit(b) else 1
        else:
            j = i ^ (1 << (n - 1 - b)) if bit(a) else i
            U[j, i] = 1
    return U


def test_anticommuting_single_qubit():
    assert not commutes(PauliOperator.single(1, 0, "X"), PauliOperator.single(1, 0, "Z"))


def test_identity_commutes_with_everything():
    rng = random.Random(1)
    for _ in range(20):
        p = random_pauli(rng, 5)
        assert commutes(PauliOperator.identity(5), p)


def test_commutation_matches_matrices():
    rng = random.Random(2)
    for _ in range(200):
        p, q = random_pauli(rng, 4), random_pauli(rng, 4)
        A, B = dense(p), dense(q)
        assert commutes(p, q) == np.allclose(A @ B, B @ A)


def test_product_matches_matrices():
    rng = random.Random(3)
    done = 0
    while done < 200:
        p, q = random_pauli(rng, 4), random_pauli(rng, 4)
        try:
            r = multiply(p, q)
        except PauliError:
            assert np.allclose(dense(p) @ dense(q), -dense(q) @ dense(p))
            continue
        assert np.allclose(dense(r), dense(p) @ dense(q))
        done += 1


def test_square_is_identity():
    rng = random.Random(4)
    for _ in range(50):
        p = random_pauli(rng, 6)
        sq = p * p
        assert sq.is_identity() and sq.sign == 1


def test_z_products_are_symmetric_differences():
    a = PauliOperator.from_support(6, zs=[0, 1, 2])
    b = PauliOperator.from_support(6, zs=[2, 3])
    assert (a * b) == PauliOperator.from_support(6, zs=[0, 1, 3])


def test_adjacent_cluster_terms_commute_with_sign_from_matrices():
    # K_f = X_f Z on four edges, K_e = X_e Z on the face: share qubits e and f
    n = 5
    kf = PauliOperator.from_support(n, xs=[0], zs=[1, 2, 3, 4])
    ke = PauliOperator.from_support(n, xs=[1], zs=[0])
    assert commutes(kf, ke)
    assert np.allclose(dense(kf * ke), dense(kf) @ dense(ke))


def test_size_mismatch_raises():
    with pytest.raises(PauliError):
        commutes(PauliOperator(2), PauliOperator(3))


def test_bits_beyond_size_rejected():
    with pytest.raises(PauliError):
        PauliOperator(2, 0b100, 0)


def test_string_round_trip():
    p = from_string("-XYZI")
    assert to_string(p) == "-XYZI"
    assert p.weight == 3 and p.support() == [0, 1, 2]
    with pytest.raises(PauliError):
        from_string("XQ")


def test_bytes_round_trip():
    rng = random.Random(5)
    for n in (1, 7, 8, 9, 70):
        p = random_pauli(rng, n)
        assert from_bytes(to_bytes(p)) == p
    with pytest.raises(PauliError):
        from_bytes(to_bytes(PauliOperator(9))[:-1])


def test_centralizer_of_empty_group_is_everything():
    assert centralizer(PauliGroup(4)).rank == 8


def test_centralizer_of_single_z():
    c = centralizer(PauliGroup(1, [PauliOperator.single(1, 0, "Z")]))
    assert c.rank == 1
    assert c.contains(PauliOperator.single(1, 0, "Z"))
    assert not c.contains(PauliOperator.single(1, 0, "X"))


def test_centralizer_brute_force():
    rng = random.Random(6)
    n = 3
    gens = [random_pauli(rng, n) for _ in range(2)]
    grp = PauliGroup(n, gens)
    c = centralizer(grp)
    everything = [PauliOperator(n, x, z) for x in range(8) for z in range(8)]
    brute = [p for p in everything if all(commutes(p, g) for g in gens)]
    assert len(brute) == 1 << c.rank
    assert all(c.contains(p) for p in brute)


def test_restricted_centralizer_stays_in_support():
    g = PauliGroup(4, [PauliOperator.from_support(4, xs=[0, 1, 2, 3])])
    c = centralizer(g, restrict_support=[1, 2])
    for p in c.generators:
        assert set(p.support()) <= {1, 2}
        assert commutes(p, g.generators[0])
    assert c.rank == 3


def test_signed_membership():
    zz = PauliOperator.from_support(2, zs=[0, 1])
    grp = PauliGroup(2, [zz])
    minus = PauliOperator(2, 0, zz.z, -1)
    assert grp.contains(minus)
    assert not grp.contains(minus, signed=True)


def test_logicals_of_fully_constrained_qubit():
    assert logical_operators(PauliGroup(1, [PauliOperator.single(1, 0, "Z")])) == []


def test_logicals_of_zz():
    pairs = logical_operators(PauliGroup(2, [from_string("ZZ")]))
    assert len(pairs) == 1
    xl, zl = pairs[0]
    zz = from_string("ZZ")
    assert not commutes(xl, zl)
    assert commutes(xl, zz) and commutes(zl, zz)


def test_logicals_need_abelian_group():
    with pytest.raises(PauliError):
        logical_operators(PauliGroup(1, [from_string("X"), from_string("Z")]))


@pytest.mark.parametrize("name", ["CZ", "CNOT"])
def test_conjugation_matches_matrices(name):
    rng = random.Random(7)
    n = 3
    for a, b in itertools.permutations(range(n), 2):
        U = gate_matrix(name, a, b, n)
        for _ in range(10):
            p = random_pauli(rng, n)
            q = conjugate(p, [(name, a, b)])
            assert np.allclose(dense(q), U @ dense(p) @ U.conj().T)


def test_unknown_gate():
    with pytest.raises(PauliError):
        conjugate(PauliOperator(2), [("SWAP", 0, 1)])


def test_product_of_nothing_is_identity():
    assert product([], 3) == PauliOperator(3)

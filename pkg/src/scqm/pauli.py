"""Hermitian Pauli operators in symplectic form and the groups they generate.

A Pauli on ``n`` qubits is stored as two ``n``-bit integers ``x`` and ``z`` plus
a sign.  The operator represented is ``sign * i^{|x & z|} X^x Z^z`` so that a
qubit with both bits set carries ``Y``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gf2

_LETTERS = "IXZY"


class PauliError(ValueError):
    pass


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise PauliError(f"sign must be +1 or -1, got {self.sign}")
        if (self.x | self.z) >> self.n:
            raise PauliError("bits beyond qubit count")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_support(cls, n: int, xs: Iterable[int] = (), zs: Iterable[int] = (),
                     sign: int = 1) -> "PauliOperator":
        """Build ``X`` on ``xs`` times ``Z`` on ``zs``; overlapping sites become Y."""
        return cls(n, gf2.from_bits(xs), gf2.from_bits(zs), sign)

    @classmethod
    def single(cls, n: int, q: int, letter: str) -> "PauliOperator":
        x = 1 << q if letter in "XY" else 0
        z = 1 << q if letter in "ZY" else 0
        return cls(n, x, z)

    @property
    def x_bits(self) -> np.ndarray:
        return _unpack(self.x, self.n)

    @property
    def z_bits(self) -> np.ndarray:
        return _unpack(self.z, self.n)

    @property
    def vec(self) -> int:
        """Symplectic vector ``x | z << n``."""
        return self.x | (self.z << self.n)

    def support(self) -> list[int]:
        return gf2.bits(self.x | self.z)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return not (self.x or self.z)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        return f"PauliOperator({to_string(self)!r})"


def _unpack(v: int, n: int) -> np.ndarray:
    raw = np.frombuffer(v.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def _check(p: PauliOperator, q: PauliOperator):
    if p.n != q.n:
        raise PauliError(f"size mismatch: {p.n} vs {q.n}")


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    _check(p, q)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2 == 0


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Product ``p q``; raises if the result carries an imaginary phase."""
    _check(p, q)
    x, z = p.x ^ q.x, p.z ^ q.z
    e = ((p.x & p.z).bit_count() + (q.x & q.z).bit_count()
         + 2 * (p.z & q.x).bit_count() - (x & z).bit_count()) % 4
    if e % 2:
        raise PauliError("product has an imaginary phase")
    sign = p.sign * q.sign * (-1 if e == 2 else 1)
    return PauliOperator(p.n, x, z, sign)


def product(ops: Iterable[PauliOperator], n: int) -> PauliOperator:
    acc = PauliOperator(n)
    for op in ops:
        acc = multiply(acc, op)
    return acc


def to_string(p: PauliOperator) -> str:
    chars = [_LETTERS[((p.x >> i) & 1) | (((p.z >> i) & 1) << 1)] for i in range(p.n)]
    return ("+" if p.sign == 1 else "-") + "".join(chars)


def from_string(s: str) -> PauliOperator:
    sign = 1
    if s and s[0] in "+-":
        sign = 1 if s[0] == "+" else -1
        s = s[1:]
    x = z = 0
    for i, c in enumerate(s):
        k = _LETTERS.find(c)
        if k < 0:
            raise PauliError(f"bad Pauli letter {c!r} at position {i}")
        x |= (k & 1) << i
        z |= (k >> 1) << i
    return PauliOperator(len(s), x, z, sign)


def to_bytes(p: PauliOperator) -> bytes:
    nb = (p.n + 7) // 8
    return (struct.pack("<Ib", p.n, p.sign)
            + p.x.to_bytes(nb, "little") + p.z.to_bytes(nb, "little"))


def from_bytes(data: bytes) -> PauliOperator:
    n, sign = struct.unpack_from("<Ib", data)
    nb = (n + 7) // 8
    if len(data) != 5 + 2 * nb:
        raise PauliError("truncated Pauli record")
    x = int.from_bytes(data[5:5 + nb], "little")
    z = int.from_bytes(data[5 + nb:], "little")
    return PauliOperator(n, x, z, sign)


def _swap(v: int, n: int) -> int:
    """Exchange X and Z halves so that plain parity gives the symplectic form."""
    mask = (1 << n) - 1
    return (v >> n) | ((v & mask) << n)


def _from_vec(v: int, n: int) -> PauliOperator:
    mask = (1 << n) - 1
    return PauliOperator(n, v & mask, v >> n)


@dataclass(frozen=True)
class PauliGroup:
    n: int
    generators: tuple[PauliOperator, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __init__(self, n: int, generators: Iterable[PauliOperator] = ()):
        gens = tuple(generators)
        for g in gens:
            if g.n != n:
                raise PauliError("generator size mismatch")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_cache", {})

    def _echelon(self) -> gf2.Echelon:
        ech = self._cache.get("ech")
        if ech is None:
            ech = gf2.Echelon(track=True)
            for g in self.generators:
                ech.add(g.vec)
            self._cache["ech"] = ech
        return ech

    @property
    def rank(self) -> int:
        return len(self._echelon())

    def contains(self, p: PauliOperator, signed: bool = False) -> bool:
        """Membership up to sign, or exactly when ``signed``."""
        combo = self.express(p)
        if combo is None:
            return False
        if not signed:
            return True
        return product((self.generators[i] for i in combo), self.n).sign == p.sign

    def express(self, p: PauliOperator) -> list[int] | None:
        """Generator indices whose product equals ``p`` up to sign."""
        mask = self._echelon().express(p.vec)
        return None if mask is None else gf2.bits(mask)

    def independent(self) -> "PauliGroup":
        idx = gf2.independent([g.vec for g in self.generators])
        return PauliGroup(self.n, [self.generators[i] for i in idx])

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(commutes(a, b) for i, a in enumerate(gens) for b in gens[i + 1:])


def centralizer(group: PauliGroup, restrict_support: Sequence[int] | None = None
                ) -> PauliGroup:
    """Generators of every Pauli commuting with ``group``.

    With ``restrict_support`` the result only uses qubits from that subset.
    """
    n = group.n
    if restrict_support is None:
        rows = [_swap(g.vec, n) for g in group.generators]
        return PauliGroup(n, [_from_vec(v, n) for v in gf2.nullspace(rows, 2 * n)])
    sites = list(restrict_support)
    m = len(sites)
    rows = []
    for g in group.generators:
        r = 0
        for j, q in enumerate(sites):
            r |= ((g.z >> q) & 1) << j
            r |= ((g.x >> q) & 1) << (j + m)
        rows.append(r)
    out = []
    for v in gf2.nullspace(rows, 2 * m):
        xs = [sites[j] for j in range(m) if (v >> j) & 1]
        zs = [sites[j] for j in range(m) if (v >> (j + m)) & 1]
        out.append(PauliOperator.from_support(n, xs, zs))
    return PauliGroup(n, out)


def logical_operators(stabilizer: PauliGroup) -> list[tuple[PauliOperator, PauliOperator]]:
    """Symplectic basis of the centralizer modulo the stabilizer."""
    if not stabilizer.is_abelian():
        raise PauliError("stabilizer group is not abelian")
    n = stabilizer.n
    ech = gf2.Echelon()
    for g in stabilizer.generators:
        ech.add(g.vec)
    free = []
    for c in centralizer(stabilizer).generators:
        if ech.add(c.vec):
            free.append(c)
    pairs = []
    while free:
        a = free.pop(0)
        partner = next((i for i, b in enumerate(free) if not commutes(a, b)), None)
        if partner is None:
            raise PauliError("degenerate logical space")
        b = free.pop(partner)
        fixed = []
        for c in free:
            if not commutes(c, b):
                c = _strip(c, a)
            if not commutes(c, a):
                c = _strip(c, b)
            fixed.append(c)
        free = fixed
        pairs.append((a, b))
    return pairs


def _strip(c: PauliOperator, g: PauliOperator) -> PauliOperator:
    return PauliOperator(c.n, c.x ^ g.x, c.z ^ g.z)


def conjugate(p: PauliOperator, gates: Iterable[tuple[str, int, int]]) -> PauliOperator:
    """Conjugate by a sequence of ``("CZ"|"CNOT", a, b)`` gates applied in order.

    For CNOT ``a`` is the control.  Signs follow the stabilizer tableau rules.
    """
    x, z, r = p.x, p.z, 0 if p.sign == 1 else 1
    for name, a, b in gates:
        xa, xb = (x >> a) & 1, (x >> b) & 1
        za, zb = (z >> a) & 1, (z >> b) & 1
        if name == "CZ":
            r ^= xa & xb & (za ^ zb)
            z ^= (xb << a) | (xa << b)
        elif name == "CNOT":
            r ^= xa & zb & (xb ^ za ^ 1)
            x ^= xa << b
            z ^= zb << a
        else:
            raise PauliError(f"unsupported gate {name}")
    return PauliOperator(p.n, x, z, -1 if r else 1)

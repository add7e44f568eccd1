"""Energy barriers with and without the symmetry constraint.

Run:  python3 demos/barriers.py

Single-qubit errors can move a boundary anyon freely, so the unrestricted
barrier stays flat as the lattice grows.  Once every move must commute with
the symmetry generators, a logical fault has to drag a bulk string along and
the barrier climbs with the lattice width.
"""

from scqm.barrier import energy_barrier, replay
from scqm.pauli import to_string
from scqm.rbh import build_cubic_rbh
from scqm.symmetry import derive_moveset, single_qubit_moves

for L in (2, 3):
    model = build_cubic_rbh(L)
    sym = derive_moveset(model, 1)
    free = single_qubit_moves(model)
    b_sym = energy_barrier(model, sym)
    b_free = energy_barrier(model, free)
    print(f"L={L}: {model.n} qubits, width {model.meta['width']['d']}")
    print(f"  unrestricted barrier {b_free.barrier}  ({len(free)} moves)")
    print(f"  symmetric barrier    {b_sym.barrier}  ({len(sym)} moves, "
          f"{b_sym.explored} states settled)")

# walk through the cheapest symmetric fault at L=2
model = build_cubic_rbh(2)
moves = derive_moveset(model, 1)
res = energy_barrier(model, moves)
print("\nwitness at L=2:")
for step in replay(res.witness, model, moves):
    print(f"  energy {step.energy:2d}  class {step.logical_class}  "
          f"weight {step.operator.weight:2d}")
print("final operator:", to_string(replay(res.witness, model, moves)[-1].operator))

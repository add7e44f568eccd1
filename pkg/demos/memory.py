"""Thermal memory time for the symmetric and unrestricted dynamics.

Run:  python3 demos/memory.py [trials]

Each trial starts in the ground space, runs Metropolis dynamics at inverse
temperature 1.5 and decodes snapshots on a doubling schedule.  The reported
time is the first snapshot (in sweeps) whose decoded state carries a logical
fault.  Expect the symmetric median to jump between L=2 and L=3 while the
unrestricted one stays put.
"""

import sys

from scqm.dynamics import memory_time
from scqm.rbh import build_cubic_rbh
from scqm.symmetry import derive_moveset, single_qubit_moves

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 20
models = {L: build_cubic_rbh(L) for L in (2, 3)}

for name, make in (("symmetric", lambda m: derive_moveset(m, 1)),
                   ("unrestricted", single_qubit_moves)):
    est = memory_time({L: (m, make(m)) for L, m in models.items()}, 1.5, trials,
                      1 << 17, seed=7)
    print(name)
    for p in est.points:
        print(f"  L={p.L}: median {p.tau:g} sweeps, 95% CI [{p.ci[0]:g}, {p.ci[1]:g}], "
              f"censored {p.censored}/{p.trials}")

"""Counting loops on the cubic torus and comparing with the Boltzmann tail.

Run:  python3 demos/loops.py

Contractible simple cycles of length k grow roughly like base**k with a base
well under five.  That is what makes large loops exponentially rare once the
temperature sits below 2/log(5).
"""

from scqm.complex import build_cubic
from scqm.dynamics import gibbs_loop_census, tail
from scqm.peierls import T_C_LOWER, check_bound, enumerate_loops, tail_bound
from scqm.rbh import build_cubic_rbh
from scqm.symmetry import derive_moveset

L = 4
census = enumerate_loops(build_cubic(L, periodic=(True, True, True)), k_max=10)
for k, n, bound, ratio in census.rows():
    if n:
        print(f"k={k:2d}  N={n:8d}  N/(L^3 5^k)={ratio:.2e}")
print(f"fitted base {check_bound(census).base:.3f}; T_c lower bound {T_C_LOWER:.6f}")

model = build_cubic_rbh(L)
moves = derive_moveset(model, 1)
hist = gibbs_loop_census(model, moves, 1.5, 100 * len(moves), 5000, seed=3)
print("\nlargest excitation cluster at beta=1.5:")
for w in (2, 4, 6, 8):
    print(f"  P(w >= {w}) = {tail(hist, w):.4f}   bound {tail_bound(1.5, w, L):.3g}")

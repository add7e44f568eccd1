"""Turning product constraints of a color code into explicit symmetries.

Run:  python3 demos/gauging.py

On a sphere the X plaquettes of any two colors multiply to the identity.
Adding one ancilla per term and a CNOT circuit maps each ancilla Pauli onto
itself times its term, so that same product becomes an operator on the
ancillas alone.  The closing check shows the parity of flipped terms inside a
region matching the eigenvalue of the operator left on its rim.
"""

import random

from scqm.colex import truncated_octahedron_colex
from scqm.gauging import (ancilla_product_identity, designated_terms, gauge_extend,
                          gauss_charge, round_trip, terms_fixed, color_code_model)
from scqm.pauli import PauliOperator

model = color_code_model(truncated_octahedron_colex())
ext = gauge_extend(model)
print(f"{model.n} qubits, {model.m} terms, {ext.n} qubits after extension")
print("circuit squares to identity:", round_trip(ext))
print("terms unchanged:", terms_fixed(ext))

everything = range(len(model.meta["surface"].faces))
for pair in ("AB", "BC", "AC"):
    ids = designated_terms(model, everything, pair, "X")
    print(f"colors {pair}: {len(ids)} terms, ancilla identity holds:",
          ancilla_product_identity(ext, ids))

rng = random.Random(0)
region = rng.sample(list(everything), 5)
err = PauliOperator(model.n, 0, rng.getrandbits(model.n))
rep = gauss_charge(model, region, err, "AB", "X")
print(f"\nregion {sorted(region)}: flipped {rep.counts}, parity {rep.parity}, "
      f"rim eigenvalue {rep.boundary_eigenvalue:+d}, consistent {rep.consistent}")

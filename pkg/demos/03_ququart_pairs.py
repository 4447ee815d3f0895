"""Two qubits per ququart.

A CZ inside one ion is a single phase gate. Between ions a single XX(pi) on
the slot-selected level pairs gives an inverted CZ; virtual Z phases turn it
into a CZ. Greedy pairing puts the busiest qubit pairs on the same ion.
"""

import numpy as np

from quditcc import CZ, QubitCircuit, Rot1q, compile_circuit_ququart, count_gates, verify_compilation
from quditcc.testing import random_qubit_circuit

src = QubitCircuit(4, (
    Rot1q(0, 0.0, 1.2),
    CZ(0, 3), CZ(0, 3), CZ(0, 3),
    CZ(1, 2),
    Rot1q(3, 1.57, 0.4),
    CZ(0, 1),
))

for strategy in ("sequential", "greedy"):
    out, emb, plan = compile_circuit_ququart(src, strategy)
    v = verify_compilation(src, out, emb)
    print(f"{strategy:>10}: ions {plan.ququarts}, two-ququart gates {count_gates(out).two_qudit}, {v.status.value}")

rng = np.random.default_rng(1)
c = random_qubit_circuit(6, 30, rng, kinds=("r", "ph", "x", "cz"))
out, emb, _ = compile_circuit_ququart(c, "greedy")
print(f"\nrandom 6-qubit circuit: {verify_compilation(c, out, emb).status.value} on {out.num_qudits} ququarts")

"""From abstract gates to addressable pulses.

On a qutrit where only the 0-1 and 1-2 transitions can be driven, a rotation
on 0-2 is routed through level 1, and every MS gate is moved onto the
physical (0,1) x (0,1) interaction. Readout becomes a chain of |0>-or-not
projections with population swaps in between.
"""

import math

import numpy as np

from quditcc import CnX, QubitCircuit, Rot, compile_circuit_qutrit, count_gates, verify_compilation
from quditcc.physlayer import TransitionGraph, apply_physical_pass, route_rotation, run_readout, schedule_readout

graph = TransitionGraph.ladder(3)
print("R^{02}(pi/3) routed on the ladder:")
for g in route_rotation(Rot(0, 0, 2, 0.0, math.pi / 3), graph):
    print("  ", g)

src = QubitCircuit(3, (CnX((0, 1), 2),))
out, emb = compile_circuit_qutrit(src)
phys = apply_physical_pass(out, graph)
v = verify_compilation(src, phys, emb)
print(f"\nToffoli: {count_gates(out).total} gates -> {count_gates(phys).total} physical gates, {v.status.value}")

plan = schedule_readout(4, TransitionGraph.ladder(4))
print(f"\nququart readout: {plan.rounds} projection rounds")
psi = np.array([0.1, 0.5, 0.7, 0.5], dtype=complex)
psi /= np.linalg.norm(psi)
for level, p in sorted(run_readout(plan, psi).items()):
    print(f"  level {level}: p={p:.3f} (|amp|^2 = {abs(psi[level]) ** 2:.3f})")

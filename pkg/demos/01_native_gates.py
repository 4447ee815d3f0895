"""Native qudit gates and the dense simulator.

Builds a few native gates, checks that the ZZ gate really is XX conjugated by
Ry pulses, and shows the phase relation between the qubit-subspace MS gate
and the pure two-body MS gate.
"""

import math

import numpy as np

from quditcc import MS2, Ph, PhysMS, QuditCircuit, Rot
from quditcc.densesim import circuit_unitary, ms_matrix, rot_matrix, zz_matrix

np.set_printoptions(precision=3, suppress=True)
d = 3

print("R_x^{01}(pi/2) on a qutrit:")
print(rot_matrix(d, 0, 1, 0.0, math.pi / 2))

# ZZ(chi) from XX(chi): Ry(pi/2) x Ry(pi/2) . XX . Ry(-pi/2) x Ry(-pi/2).
chi = 0.37
zz = QuditCircuit(2, d, (
    Rot(0, 0, 1, math.pi / 2, -math.pi / 2),
    Rot(1, 0, 1, math.pi / 2, -math.pi / 2),
    MS2(0, 1, 0, 1, 0, 1, 0.0, chi),
    Rot(0, 0, 1, math.pi / 2, math.pi / 2),
    Rot(1, 0, 1, math.pi / 2, math.pi / 2),
))
err = np.abs(circuit_unitary(zz) - zz_matrix(d, 0, 1, 0, 1, chi)).max()
print(f"\nZZ built from XX, deviation from the diagonal ZZ matrix: {err:.1e}")

# The physical MS gate differs from the two-body one by single-ion phases.
phi = 0.8
corrected = QuditCircuit(2, d, (PhysMS(0, 1, phi, chi),) + tuple(Ph(q, lv, chi / 2) for q in (0, 1) for lv in (0, 1)))
err = np.abs(circuit_unitary(corrected) - ms_matrix(d, 0, 1, 0, 1, phi, chi)).max()
print(f"PhysMS plus Ph(chi/2) corrections vs MS^(0101): {err:.1e}")

print("\nZZ(pi) on two ququarts, levels (0,1)x(0,1): diagonal is")
print(np.real(np.diag(zz_matrix(4, 0, 1, 0, 1, math.pi))).reshape(4, 4))

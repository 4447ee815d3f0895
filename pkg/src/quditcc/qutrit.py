"""Qubit circuits on trapped-ion qutrits.

Each qubit occupies levels {0, 1} of its own qutrit; level 2 is an ancilla
used only inside the multi-controlled-X ladder. The ladder is a descending
run of V1 blocks over the controls, one V2 block onto the target, and the
V1 blocks undone in reverse, for 2N - 3 two-qutrit gates in total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .ir import (
    CZ,
    MS2,
    CnX,
    EmbeddingMap,
    InvCZ,
    Measure,
    PauliX,
    Ph,
    Phase1q,
    ProjMeasure,
    QubitCircuit,
    QubitGate,
    QuditCircuit,
    Rot,
    Rot1q,
    Slot,
    dagger,
)

PI = math.pi
X_AXIS = 0.0
Y_AXIS = PI / 2

# Global phase of the ladder block on the qubit subspace, measured with the
# dense simulator for N = 2..8: U_ladder = e^{i pi/2} C^{N-1}X.
LADDER_PHASE = PI / 2

# CZ = e^{-i pi/4} (Ph_1(pi/2) x Ph_1(pi/2)) ZZ(-pi/4) on the qubit subspace;
# the inverted CZ picks up e^{3i pi/4} with Ph_1(-pi/2) on both sides.
CZ_CHI = -PI / 4
CZ_LOCAL_PHASE = PI / 2
CZ_GLOBAL_PHASE = -PI / 4
INVCZ_LOCAL_PHASE = -PI / 2
INVCZ_GLOBAL_PHASE = 3 * PI / 4


@dataclass(frozen=True)
class LadderPlan:
    blocks: tuple[tuple[str, tuple[int, int]], ...]

    @classmethod
    def for_operands(cls, qudits: Sequence[int]) -> "LadderPlan":
        qudits = list(qudits)
        n = len(qudits)
        if n < 2:
            raise ValueError("a ladder needs at least one control and a target")
        down = [("V1", (qudits[k], qudits[k + 1])) for k in range(n - 2)]
        up = [("V1dagger", pair) for _, pair in reversed(down)]
        return cls(tuple(down + [("V2", (qudits[-2], qudits[-1]))] + up))

    def __len__(self) -> int:
        return len(self.blocks)


def _register(top: int, bottom: int, num_qudits: int | None) -> int:
    if top == bottom:
        raise ValueError("top and bottom qutrits must differ")
    m = max(top, bottom) + 1 if num_qudits is None else num_qudits
    if max(top, bottom) >= m:
        raise ValueError("qutrit index outside the register")
    return m


def _v1_gates(top: int, bottom: int) -> list:
    return [
        Rot(top, 1, 2, X_AXIS, -PI),
        Rot(bottom, 0, 2, Y_AXIS, -PI),
        Rot(top, 0, 1, Y_AXIS, PI / 2),
        MS2(top, bottom, 0, 1, 0, 1, X_AXIS, PI / 2),
    ]


def _v2_gates(top: int, bottom: int) -> list:
    return [
        Rot(top, 1, 2, X_AXIS, -PI),
        Rot(top, 0, 1, Y_AXIS, PI / 2),
        MS2(top, bottom, 0, 1, 0, 1, X_AXIS, PI / 2),
        Rot(top, 0, 1, X_AXIS, -PI),
        Rot(bottom, 0, 1, X_AXIS, -PI),
        Rot(top, 0, 1, Y_AXIS, -PI / 2),
        Rot(top, 1, 2, X_AXIS, PI),
    ]


def build_v1(top: int, bottom: int, num_qudits: int | None = None, dim: int = 3) -> QuditCircuit:
    """AND block: leaves ``bottom`` on level 1 iff both inputs were |1>."""
    if dim != 3:
        raise ValueError("V1 is defined for qutrits")
    m = _register(top, bottom, num_qudits)
    return QuditCircuit(m, 3, _v1_gates(top, bottom))


def build_v2(top: int, bottom: int, num_qudits: int | None = None, dim: int = 3) -> QuditCircuit:
    """Flips ``bottom`` inside {0, 1} iff ``top`` is |1>."""
    if dim != 3:
        raise ValueError("V2 is defined for qutrits")
    m = _register(top, bottom, num_qudits)
    return QuditCircuit(m, 3, _v2_gates(top, bottom))


def ladder_gates(qudits: Sequence[int], num_qudits: int) -> list:
    gates = []
    for block, (top, bottom) in LadderPlan.for_operands(qudits).blocks:
        if block == "V1":
            gates += _v1_gates(top, bottom)
        elif block == "V2":
            gates += _v2_gates(top, bottom)
        else:
            gates += dagger(QuditCircuit(num_qudits, 3, _v1_gates(top, bottom))).gates
    return gates


def compile_cnx_qutrit(controls: Sequence[int], target: int, emb: EmbeddingMap) -> QuditCircuit:
    """Multi-controlled X on whole-embedded qutrits.

    The result equals C^{N-1}X on the qubit subspace up to the global phase
    ``LADDER_PHASE``; the ladder follows the operand order.
    """
    if emb.dim != 3:
        raise ValueError("qutrit backend needs a d=3 embedding")
    operands = list(controls) + [target]
    if len(operands) < 2:
        raise ValueError("need N >= 2")
    if len(set(operands)) != len(operands):
        raise ValueError("repeated qubit in CnX operands")
    for q in operands:
        if emb.slot_of(q) is not Slot.WHOLE:
            raise ValueError(f"qubit {q} is not whole-embedded")
    qudits = [emb.qudit_of(q) for q in operands]
    if len(set(qudits)) != len(qudits):
        raise ValueError("CnX operands must sit on distinct qutrits")
    m = emb.min_qudits
    return QuditCircuit(m, 3, ladder_gates(qudits, m))


def _zz_gates(a: int, b: int, chi: float) -> list:
    """ZZ^{0101}(chi) as Ry-conjugated XX."""
    return [
        Rot(a, 0, 1, Y_AXIS, -PI / 2),
        Rot(b, 0, 1, Y_AXIS, -PI / 2),
        MS2(a, b, 0, 1, 0, 1, X_AXIS, chi),
        Rot(a, 0, 1, Y_AXIS, PI / 2),
        Rot(b, 0, 1, Y_AXIS, PI / 2),
    ]


def _lower(g: QubitGate, emb: EmbeddingMap) -> tuple[list, float]:
    if isinstance(g, CnX):
        raise ValueError("CnX goes through compile_cnx_qutrit")
    for q in g.qubits:
        if emb.slot_of(q) is not Slot.WHOLE:
            raise ValueError(f"qubit {q} is not whole-embedded")
    if isinstance(g, Rot1q):
        return [Rot(emb.qudit_of(g.target), 0, 1, g.phi, g.theta)], 0.0
    if isinstance(g, Phase1q):
        return [Ph(emb.qudit_of(g.target), 1, g.theta)], 0.0
    if isinstance(g, PauliX):
        # R_x(pi) = -i X
        return [Rot(emb.qudit_of(g.target), 0, 1, X_AXIS, PI)], PI / 2
    if isinstance(g, (CZ, InvCZ)):
        a, b = emb.qudit_of(g.a), emb.qudit_of(g.b)
        if isinstance(g, CZ):
            local, gphase = CZ_LOCAL_PHASE, CZ_GLOBAL_PHASE
        else:
            local, gphase = INVCZ_LOCAL_PHASE, INVCZ_GLOBAL_PHASE
        return _zz_gates(a, b, CZ_CHI) + [Ph(a, 1, local), Ph(b, 1, local)], gphase
    if isinstance(g, Measure):
        return [ProjMeasure(emb.qudit_of(g.target))], 0.0
    raise TypeError(f"unsupported gate {g!r}")


def lower_qubit_gate_qutrit(g: QubitGate, emb: EmbeddingMap, num_qudits: int | None = None) -> QuditCircuit:
    m = emb.min_qudits if num_qudits is None else num_qudits
    gates, phase = _lower(g, emb)
    return QuditCircuit(m, 3, gates, phase)


def compile_circuit_qutrit(c: QubitCircuit) -> tuple[QuditCircuit, EmbeddingMap]:
    """One qutrit per qubit, gate-by-gate lowering."""
    emb = EmbeddingMap.whole(3, c.num_qubits)
    m = c.num_qubits
    gates: list = []
    phase = 0.0
    for g in c.gates:
        if isinstance(g, CnX):
            gates += compile_cnx_qutrit(g.controls, g.target, emb).gates
        else:
            more, dphi = _lower(g, emb)
            gates += more
            phase += dphi
    return QuditCircuit(m, 3, gates, phase), emb

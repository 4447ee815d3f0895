"""Compile qubit circuits onto trapped-ion qudit native gates.

Backends: qutrits with an ancilla-level multi-controlled-X ladder, and
ququarts holding two qubits each. A dense simulator checks every pass.
"""

from .densesim import (
    Equivalence,
    Status,
    apply_circuit,
    circuit_unitary,
    embedding_isometry,
    equivalent_on_subspace,
    leakage,
    ms_matrix,
    phase_matrix,
    physms_matrix,
    rot_matrix,
    zz_matrix,
)
from .ir import (
    CZ,
    MS2,
    CnX,
    CompilationReport,
    EmbeddingMap,
    InvCZ,
    Measure,
    PauliX,
    Ph,
    Phase1q,
    PhysMS,
    ProjMeasure,
    QubitCircuit,
    QuditCircuit,
    Rot,
    Rot1q,
    Slot,
    count_gates,
    dagger,
    parse_qubit_circuit,
    parse_qudit_circuit,
    serialize_qubit_circuit,
    serialize_qudit_circuit,
)
from .physlayer import TransitionGraph, apply_physical_pass, lift_ms, route_rotation, schedule_readout
from .ququart import assign_pairs, compile_circuit_ququart, decompose_cnx_to_qubit_gates
from .qutrit import build_v1, build_v2, compile_circuit_qutrit, compile_cnx_qutrit
from .verify import Verdict, report_toffoli_scaling, verify_compilation

__version__ = "0.1.0"

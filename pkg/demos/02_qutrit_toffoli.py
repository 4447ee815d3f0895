"""Generalized Toffoli gates on qutrits.

The ancillary level |2> of each control accumulates the AND of the controls
down a ladder of V1 blocks; V2 flips the target, and the V1 blocks are undone.
The two-qutrit gate count is 2N - 3, linear in N, with no ancilla ions.
"""

from quditcc import CnX, QubitCircuit, compile_circuit_qutrit, count_gates, verify_compilation
from quditcc.verify import format_scaling_table, report_toffoli_scaling

for n in range(2, 7):
    src = QubitCircuit(n, (CnX(tuple(range(n - 1)), n - 1),))
    out, emb = compile_circuit_qutrit(src)
    v = verify_compilation(src, out, emb)
    print(
        f"N={n}: {count_gates(out).two_qudit:2d} MS gates, {v.status.value}, "
        f"phase {v.global_phase:.4f}, deviation {v.max_deviation:.1e}, leakage {v.leakage_max:.1e}"
    )

print("\nScaling against the qubit baselines:")
print(format_scaling_table(report_toffoli_scaling(range(3, 11))))

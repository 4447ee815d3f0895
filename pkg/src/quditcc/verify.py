"""End-to-end checks of compiled circuits and gate-count reporting."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .densesim import (
    Status,
    apply_qubit_circuit,
    compare_up_to_phase,
    embedding_isometry,
    probe,
)
from .ir import CZ, CompilationReport, EmbeddingMap, Measure, QubitCircuit, QuditCircuit, count_gates
from .qutrit import compile_cnx_qutrit
from .ququart import decompose_cnx_to_qubit_gates


@dataclass
class Verdict:
    status: Status
    global_phase: float
    max_deviation: float
    leakage_max: float
    counts: CompilationReport = field(default_factory=CompilationReport)

    @property
    def ok(self) -> bool:
        return self.status is not Status.DIFFERENT

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "global_phase": self.global_phase,
            "max_deviation": self.max_deviation,
            "leakage_max": self.leakage_max,
            "counts": self.counts.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_compilation(
    src: QubitCircuit,
    out: QuditCircuit,
    emb: EmbeddingMap,
    tol: float = 1e-9,
    max_entries: int | None = None,
) -> Verdict:
    """Compare ``out`` against ``src`` on the embedded qubit subspace.

    Every one of the 2^N embedded basis inputs is evolved through ``out``; the
    restricted block is compared with the qubit-level reference and the
    population left outside the subspace is reported per input.
    """
    if any(isinstance(g, Measure) for g in src.gates) or out.has_measurement:
        raise ValueError("verification needs measurement-free circuits")
    if emb.num_qubits != src.num_qubits:
        raise ValueError("embedding does not cover the source register")
    if emb.dim != out.dim:
        raise ValueError("embedding dimension differs from the compiled register")
    iso = embedding_isometry(emb, out.num_qudits)
    evolved = probe(out, iso, max_entries)
    block = iso.restrict(evolved)
    ref = apply_qubit_circuit(src, np.eye(2**src.num_qubits, dtype=complex))
    eq = compare_up_to_phase(block, ref, tol)
    leak = np.clip(1.0 - np.sum(np.abs(block) ** 2, axis=0), 0.0, 1.0)
    return Verdict(eq.status, eq.global_phase, eq.max_deviation, float(leak.max(initial=0.0)), count_gates(out))


@dataclass(frozen=True)
class ScalingRow:
    n: int
    qutrit_two_qudit: int
    ladder_formula: int
    ancilla_baseline: int
    baseline_valid: bool
    ancilla_free_cz: int

    def to_dict(self) -> dict:
        return {
            "N": self.n,
            "qutrit_two_qudit": self.qutrit_two_qudit,
            "ladder_formula_2N_minus_3": self.ladder_formula,
            "ancilla_baseline_12N_minus_23": self.ancilla_baseline,
            "baseline_valid": self.baseline_valid,
            "ancilla_free_qubit_cz": self.ancilla_free_cz,
        }


def report_toffoli_scaling(n_range) -> list[ScalingRow]:
    """Measured ladder cost per N next to the qubit baselines.

    The 12N - 23 baseline uses N - 2 ancilla qubits and only applies from N = 3;
    the ancilla-free qubit cost is measured from the Gray-code construction used
    by the ququart backend (it grows faster than the quadratic textbook bound).
    """
    rows = []
    for n in n_range:
        if n < 2:
            raise ValueError("N must be at least 2")
        emb = EmbeddingMap.whole(3, n)
        ladder = compile_cnx_qutrit(list(range(n - 1)), n - 1, emb)
        qubit = decompose_cnx_to_qubit_gates(list(range(n - 1)), n - 1)
        rows.append(
            ScalingRow(
                n=n,
                qutrit_two_qudit=count_gates(ladder).two_qudit,
                ladder_formula=2 * n - 3,
                ancilla_baseline=12 * n - 23,
                baseline_valid=n >= 3,
                ancilla_free_cz=sum(isinstance(g, CZ) for g in qubit.gates),
            )
        )
    return rows


def format_scaling_table(rows: list[ScalingRow]) -> str:
    head = f"{'N':>3} {'qutrit MS':>9} {'2N-3':>5} {'12N-23':>7} {'qubit CZ (no anc.)':>18}"
    lines = [head]
    for r in rows:
        base = f"{r.ancilla_baseline:>7}" if r.baseline_valid else f"{'n/a':>7}"
        lines.append(f"{r.n:>3} {r.qutrit_two_qudit:>9} {r.ladder_formula:>5} {base} {r.ancilla_free_cz:>18}")
    return "\n".join(lines) + "\n"

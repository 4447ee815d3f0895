"""Qubit circuits on trapped-ion ququarts, two qubits per ion.

A pair (q, q') sits on one ququart at level 2 q + q'; q is the First slot
and q' the Second slot. Inside an ion a CZ is the single phase gate Ph_3(pi).
Between ions, XX(pi) on the slot-selected level pairs applies -1 exactly when
both addressed qubits are 0, i.e. an inverted CZ; Z on both qubits plus a
global phase of pi turns it into CZ.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
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
)

PI = math.pi

# Level pairs (i, j) per slot for one-qubit rotations, and the levels where a
# qubit reads |1> for phase gates.
ROT_PAIRS = {Slot.FIRST: ((0, 2), (1, 3)), Slot.SECOND: ((0, 1), (2, 3))}
ONE_LEVELS = {Slot.FIRST: (2, 3), Slot.SECOND: (1, 3)}
# Levels where the addressed qubit reads |0>; XX on this pair gives -1 there.
ZERO_PAIR = {Slot.FIRST: (0, 1), Slot.SECOND: (0, 2)}


@dataclass(frozen=True)
class PairingPlan:
    ququarts: tuple[tuple[int, ...], ...]
    score: int

    @property
    def num_ququarts(self) -> int:
        return len(self.ququarts)


# ---------------------------------------------------------------------------
# Placement


def _interaction_counts(c: QubitCircuit) -> Counter:
    counts: Counter = Counter()
    for g in expand_cnx(c).gates:
        if isinstance(g, (CZ, InvCZ)):
            counts[tuple(sorted(g.qubits))] += 1
    return counts


def _score(groups, counts) -> int:
    return sum(counts[tuple(sorted(grp))] for grp in groups if len(grp) == 2)


def _sequential_groups(n: int) -> list[tuple[int, ...]]:
    return [tuple(range(k, min(k + 2, n))) for k in range(0, n, 2)]


def _greedy_groups(n: int, counts: Counter) -> list[tuple[int, ...]]:
    free = set(range(n))
    pairs = []
    for (a, b), _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        if a in free and b in free:
            pairs.append((a, b))
            free -= {a, b}
    rest = sorted(free)
    pairs += [tuple(rest[k:k + 2]) for k in range(0, len(rest), 2)]
    full = sorted(p for p in pairs if len(p) == 2)
    single = [p for p in pairs if len(p) == 1]
    return full + single


def assign_pairs(c: QubitCircuit, strategy: str = "sequential") -> tuple[EmbeddingMap, PairingPlan]:
    """Place qubits two per ququart.

    ``greedy`` co-locates the most frequently interacting pairs first; if that
    scores below the sequential layout the sequential layout is kept, so greedy
    never produces more inter-ion gates.
    """
    n = c.num_qubits
    counts = _interaction_counts(c)
    groups = _sequential_groups(n)
    if strategy == "greedy":
        cand = _greedy_groups(n, counts)
        if _score(cand, counts) >= _score(groups, counts):
            groups = cand
    elif strategy != "sequential":
        raise ValueError(f"unknown pairing strategy {strategy!r}")
    entries: list = [None] * n
    for qq, grp in enumerate(groups):
        for slot, q in zip((Slot.FIRST, Slot.SECOND), grp):
            entries[q] = (qq, slot)
    return EmbeddingMap(4, tuple(entries)), PairingPlan(tuple(groups), _score(groups, counts))


# ---------------------------------------------------------------------------
# Gate lowering


def _check_slot(slot: Slot) -> None:
    if slot not in (Slot.FIRST, Slot.SECOND):
        raise ValueError("ququart qubits live in slot First or Second")


def lower_1q_ququart(g: QubitGate, slot: Slot, qudit: int = 0) -> tuple[list, float]:
    """Gates for a one-qubit gate acting on one slot of ``qudit``; returns (gates, global phase)."""
    _check_slot(slot)
    (i1, j1), (i2, j2) = ROT_PAIRS[slot]
    if isinstance(g, Rot1q):
        return [Rot(qudit, i1, j1, g.phi, g.theta), Rot(qudit, i2, j2, g.phi, g.theta)], 0.0
    if isinstance(g, PauliX):
        return [Rot(qudit, i1, j1, 0.0, PI), Rot(qudit, i2, j2, 0.0, PI)], PI / 2
    if isinstance(g, Phase1q):
        return [Ph(qudit, lv, g.theta) for lv in ONE_LEVELS[slot]], 0.0
    raise TypeError(f"not a one-qubit unitary: {g!r}")


def lower_cz_intra(slot_a: Slot, slot_b: Slot, qudit: int = 0) -> tuple[list, float]:
    _check_slot(slot_a)
    _check_slot(slot_b)
    if slot_a is slot_b:
        raise ValueError("two qubits cannot share a slot")
    return [Ph(qudit, 3, PI)], 0.0


def lower_inv_cz_intra(slot_a: Slot, slot_b: Slot, qudit: int = 0) -> tuple[list, float]:
    _check_slot(slot_a)
    _check_slot(slot_b)
    if slot_a is slot_b:
        raise ValueError("two qubits cannot share a slot")
    return [Ph(qudit, 0, PI)], 0.0


def lower_inv_cz_inter(qubit_a: tuple[int, Slot], qubit_b: tuple[int, Slot]) -> tuple[list, float]:
    """One XX(pi) (= ZZ(pi)) on the slot-selected level pairs."""
    (qa, sa), (qb, sb) = qubit_a, qubit_b
    _check_slot(sa)
    _check_slot(sb)
    if qa == qb:
        raise ValueError("same ququart: use the intra-ion lowering")
    i, j = ZERO_PAIR[sa]
    k, l = ZERO_PAIR[sb]
    return [MS2(qa, qb, i, j, k, l, 0.0, PI)], 0.0


def lower_cz_inter(qubit_a: tuple[int, Slot], qubit_b: tuple[int, Slot]) -> tuple[list, float]:
    """CZ = -(Z x Z) invCZ: one MS gate, virtual Z phases, global phase pi."""
    gates, _ = lower_inv_cz_inter(qubit_a, qubit_b)
    for qudit, slot in (qubit_a, qubit_b):
        gates += lower_1q_ququart(Phase1q(0, PI), slot, qudit)[0]
    return gates, PI


# ---------------------------------------------------------------------------
# Multi-controlled X


def _gray_codes(n: int) -> list[int]:
    return [k ^ (k >> 1) for k in range(2**n)]


def _cx(c: int, t: int) -> list:
    # Ry(pi/2) Z Ry(-pi/2) = X, exactly.
    return [Rot1q(t, PI / 2, -PI / 2), CZ(c, t), Rot1q(t, PI / 2, PI / 2)]


def _cphase(a: int, t: int, alpha: float) -> list:
    """diag(1, 1, 1, e^{i alpha}) from a t = (a + t - a xor t) / 2."""
    if math.isclose(abs(alpha), PI):
        return [CZ(a, t)]
    return [Phase1q(a, alpha / 2), Phase1q(t, alpha / 2)] + _cx(a, t) + [Phase1q(t, -alpha / 2)] + _cx(a, t)


def decompose_cnx_to_qubit_gates(
    controls: Sequence[int], target: int, num_qubits: int | None = None
) -> QubitCircuit:
    """Ancilla-free C^{N-1}X over {Rot1q, Phase1q, CZ}, exact including phase.

    C^{N-1}Z is a multiplexed phase: walking the controls in Gray-code order
    keeps the parity of the current subset on its highest control, and a
    controlled phase of +-pi/2^{n-1} between that control and the target adds
    each subset term. Ry(-+pi/2) on the target turns Z into X.
    """
    controls = list(controls)
    n = len(controls)
    if n < 1:
        raise ValueError("need N >= 2")
    operands = controls + [target]
    if len(set(operands)) != len(operands):
        raise ValueError("repeated qubit in CnX operands")
    nq = max(operands) + 1 if num_qubits is None else num_qubits
    lam = PI / 2 ** (n - 1)
    gates: list = [Rot1q(target, PI / 2, -PI / 2)]
    codes = _gray_codes(n)
    for prev, code in zip(codes, codes[1:]):
        flipped = (prev ^ code).bit_length() - 1
        lead = code.bit_length() - 1
        if flipped != lead:
            gates += _cx(controls[flipped], controls[lead])
        elif prev:
            # the leading bit just moved up; copy parity from the old leader
            gates += _cx(controls[prev.bit_length() - 1], controls[lead])
        sign = 1 if bin(code).count("1") % 2 else -1
        gates += _cphase(controls[lead], target, sign * lam)
    gates.append(Rot1q(target, PI / 2, PI / 2))
    return QubitCircuit(nq, tuple(gates))


def expand_cnx(c: QubitCircuit) -> QubitCircuit:
    out: list = []
    for g in c.gates:
        if isinstance(g, CnX):
            out += decompose_cnx_to_qubit_gates(g.controls, g.target, c.num_qubits).gates
        else:
            out.append(g)
    return QubitCircuit(c.num_qubits, tuple(out))


# ---------------------------------------------------------------------------
# Whole circuits


def _lower(g: QubitGate, emb: EmbeddingMap) -> tuple[list, float]:
    if isinstance(g, (Rot1q, Phase1q, PauliX)):
        return lower_1q_ququart(g, emb.slot_of(g.target), emb.qudit_of(g.target))
    if isinstance(g, (CZ, InvCZ)):
        a, b = emb.entries[g.a], emb.entries[g.b]
        if a[0] == b[0]:
            fn = lower_cz_intra if isinstance(g, CZ) else lower_inv_cz_intra
            return fn(a[1], b[1], a[0])
        fn = lower_cz_inter if isinstance(g, CZ) else lower_inv_cz_inter
        return fn(a, b)
    if isinstance(g, Measure):
        return [ProjMeasure(emb.qudit_of(g.target))], 0.0
    raise TypeError(f"unsupported gate {g!r}")


def compile_circuit_ququart(
    c: QubitCircuit, strategy: str = "sequential"
) -> tuple[QuditCircuit, EmbeddingMap, PairingPlan]:
    emb, plan = assign_pairs(c, strategy)
    gates: list = []
    phase = 0.0
    for g in expand_cnx(c).gates:
        more, dphi = _lower(g, emb)
        gates += more
        phase += dphi
    return QuditCircuit(plan.num_ququarts, 4, gates, phase), emb, plan

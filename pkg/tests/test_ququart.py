import itertools
import math

import numpy as np
import pytest

from quditcc.densesim import Status, circuit_unitary, qubit_circuit_unitary, rot_matrix, phase_matrix
from quditcc.ir import (
    CZ,
    MS2,
    CnX,
    EmbeddingMap,
    InvCZ,
    PauliX,
    Ph,
    Phase1q,
    QubitCircuit,
    QuditCircuit,
    Rot,
    Rot1q,
    Slot,
    count_gates,
)
from quditcc.ququart import (
    assign_pairs,
    compile_circuit_ququart,
    decompose_cnx_to_qubit_gates,
    lower_1q_ququart,
    lower_cz_inter,
    lower_cz_intra,
    lower_inv_cz_inter,
)
from quditcc.testing import random_qubit_circuit
from quditcc.verify import verify_compilation

PI = math.pi
F, S = Slot.FIRST, Slot.SECOND


def block(gates, m, phase=0.0):
    return circuit_unitary(QuditCircuit(m, 4, gates, phase))


def qubit_u(g):
    return qubit_circuit_unitary(QubitCircuit(1, (g,)))


@pytest.mark.parametrize("g", [Rot1q(0, 0.4, 1.3), Rot1q(0, -2.0, 0.2), Phase1q(0, 0.8), PauliX(0)])
def test_1q_slots_tensor_structure(g):
    u = qubit_u(g)
    gates, ph = lower_1q_ququart(g, F)
    assert np.abs(block(gates, 1, ph) - np.kron(u, np.eye(2))).max() < 1e-12
    gates, ph = lower_1q_ququart(g, S)
    assert np.abs(block(gates, 1, ph) - np.kron(np.eye(2), u)).max() < 1e-12


def test_first_slot_matrix_pattern():
    # u x 1 places u_ab at rows/cols {0,2} and {1,3}
    u = qubit_u(Rot1q(0, 0.3, 0.9))
    got = block(lower_1q_ququart(Rot1q(0, 0.3, 0.9), F)[0], 1)
    for r, c in itertools.product(range(4), repeat=2):
        want = u[r // 2, c // 2] if r % 2 == c % 2 else 0
        assert abs(got[r, c] - want) < 1e-12


def test_1q_levels():
    gates, _ = lower_1q_ququart(Rot1q(0, 0.1, 0.2), F)
    assert [(g.i, g.j) for g in gates] == [(0, 2), (1, 3)]
    gates, _ = lower_1q_ququart(Rot1q(0, 0.1, 0.2), S)
    assert [(g.i, g.j) for g in gates] == [(0, 1), (2, 3)]
    gates, _ = lower_1q_ququart(Phase1q(0, 0.2), F)
    assert [g.level for g in gates] == [2, 3]
    gates, _ = lower_1q_ququart(Phase1q(0, 0.2), S)
    assert [g.level for g in gates] == [1, 3]


def test_1q_theta_zero_and_whole_slot():
    gates, _ = lower_1q_ququart(Rot1q(0, 0.5, 0.0), F)
    assert len(gates) == 2
    assert np.allclose(block(gates, 1), np.eye(4))
    with pytest.raises(ValueError):
        lower_1q_ququart(Rot1q(0, 0.5, 0.1), Slot.WHOLE)


def test_cz_intra():
    gates, ph = lower_cz_intra(F, S)
    assert gates == [Ph(0, 3, PI)] and ph == 0
    u = block(gates, 1)
    assert np.abs(u - np.diag([1, 1, 1, -1])).max() < 1e-15
    assert np.abs(u @ u - np.eye(4)).max() < 1e-15
    for lv in (1, 2):
        p = phase_matrix(4, lv, 0.7)
        assert np.abs(u @ p - p @ u).max() < 1e-15
    with pytest.raises(ValueError):
        lower_cz_intra(F, F)


def _inv_cz_on_slots(sa, sb):
    """16x16 invCZ on (qubit in slot sa of Q0, qubit in slot sb of Q1) x identity."""
    diag = []
    for la, lb in itertools.product(range(4), repeat=2):
        xa = la // 2 if sa is F else la % 2
        xb = lb // 2 if sb is F else lb % 2
        diag.append(-1 if (xa, xb) == (0, 0) else 1)
    return np.diag(diag)


def _cz_on_slots(sa, sb):
    diag = []
    for la, lb in itertools.product(range(4), repeat=2):
        xa = la // 2 if sa is F else la % 2
        xb = lb // 2 if sb is F else lb % 2
        diag.append(-1 if (xa, xb) == (1, 1) else 1)
    return np.diag(diag)


@pytest.mark.parametrize("sa, sb", list(itertools.product((F, S), repeat=2)))
def test_inv_cz_inter_slots(sa, sb):
    gates, ph = lower_inv_cz_inter((0, sa), (1, sb))
    assert len(gates) == 1 and isinstance(gates[0], MS2) and ph == 0
    u = block(gates, 2)
    assert np.abs(u - _inv_cz_on_slots(sa, sb)).max() < 1e-12
    assert np.abs(u @ u - np.eye(16)).max() < 1e-12


def test_slot_level_table():
    table = {
        (F, F): (0, 1, 0, 1),
        (F, S): (0, 1, 0, 2),
        (S, F): (0, 2, 0, 1),
        (S, S): (0, 2, 0, 2),
    }
    for (sa, sb), levels in table.items():
        (g,) = lower_inv_cz_inter((0, sa), (1, sb))[0]
        assert g.levels == levels


def test_inv_cz_equals_x_conjugated_cz():
    # Fig. 2(d) left side: X on both, CZ, X on both
    src = QubitCircuit(4, (PauliX(0), PauliX(2), CZ(0, 2), PauliX(0), PauliX(2)))
    emb = EmbeddingMap(4, ((0, F), (0, S), (1, F), (1, S)))
    gates, ph = lower_inv_cz_inter((0, F), (1, F))
    v = verify_compilation(src, QuditCircuit(2, 4, gates, ph), emb)
    assert v.status is Status.EQUAL


@pytest.mark.parametrize("sa, sb", list(itertools.product((F, S), repeat=2)))
def test_cz_inter_exact(sa, sb):
    gates, ph = lower_cz_inter((0, sa), (1, sb))
    assert sum(isinstance(g, MS2) for g in gates) == 1
    u = block(gates, 2, ph)
    assert np.abs(u - _cz_on_slots(sa, sb)).max() < 1e-12


def test_cz_inter_second_first_pattern():
    gates, _ = lower_cz_inter((0, S), (1, F))
    u = block(gates[:1], 2)
    want = [-1 if (a in (0, 2) and b in (0, 1)) else 1 for a in range(4) for b in range(4)]
    assert np.abs(u - np.diag(want)).max() < 1e-12


def test_cz_inter_same_qudit_rejected():
    with pytest.raises(ValueError):
        lower_cz_inter((0, F), (0, S))
    with pytest.raises(ValueError):
        lower_inv_cz_inter((1, F), (1, S))


def test_zz_identity_on_neighbours(rng):
    # neighbour qubits keep arbitrary superpositions: the block factorizes as D x 1 x 1
    gates, ph = lower_cz_inter((0, F), (1, S))
    u = block(gates, 2, ph)
    assert np.count_nonzero(np.abs(u - np.diag(np.diag(u))) > 1e-12) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_decompose_cnx_exact(n):
    src = QubitCircuit(n, (CnX(tuple(range(n - 1)), n - 1),))
    dec = decompose_cnx_to_qubit_gates(range(n - 1), n - 1)
    assert {type(g) for g in dec.gates} <= {Rot1q, Phase1q, CZ}
    assert np.abs(qubit_circuit_unitary(dec) - qubit_circuit_unitary(src)).max() < 1e-12


def test_decompose_cnx_n2_is_cz_and_two_ry():
    dec = decompose_cnx_to_qubit_gates([0], 1)
    assert dec.gates == (Rot1q(1, PI / 2, -PI / 2), CZ(0, 1), Rot1q(1, PI / 2, PI / 2))


def test_decompose_cnx_n3_cz_count():
    dec = decompose_cnx_to_qubit_gates([0, 1], 2)
    # recorded from the Gray-code construction; the qutrit ladder uses 3 MS gates
    assert sum(isinstance(g, CZ) for g in dec.gates) == 8


def test_decompose_cnx_permuted_operands():
    src = QubitCircuit(4, (CnX((3, 0, 1), 2),))
    dec = decompose_cnx_to_qubit_gates([3, 0, 1], 2, 4)
    assert np.abs(qubit_circuit_unitary(dec) - qubit_circuit_unitary(src)).max() < 1e-12
    with pytest.raises(ValueError):
        decompose_cnx_to_qubit_gates([], 0)


def test_assign_sequential_odd():
    emb, plan = assign_pairs(QubitCircuit(5), "sequential")
    assert plan.ququarts == ((0, 1), (2, 3), (4,))
    assert plan.num_ququarts == 3
    assert emb.entries[4] == (2, F)


def test_assign_greedy_colocates():
    c = QubitCircuit(4, (CZ(0, 2),) * 3)
    emb, plan = assign_pairs(c, "greedy")
    assert emb.qudit_of(0) == emb.qudit_of(2)
    assert plan.score == 3
    assert assign_pairs(c, "sequential")[1].score == 0


def test_assign_unknown_strategy():
    with pytest.raises(ValueError):
        assign_pairs(QubitCircuit(2), "magic")


def test_greedy_not_worse_than_sequential(rng):
    for _ in range(120):
        c = random_qubit_circuit(8, 30, rng, kinds=("r", "cz", "icz"))
        g = assign_pairs(c, "greedy")[1]
        s = assign_pairs(c, "sequential")[1]
        assert g.score >= s.score
        assert sorted(q for grp in g.ququarts for q in grp) == list(range(8))
        assert g.num_ququarts == 4


def test_two_qubit_circuit_single_ququart():
    src = QubitCircuit(2, (Rot1q(0, 0.2, 0.3), CZ(0, 1), InvCZ(1, 0), PauliX(1), CnX((0,), 1)))
    out, emb, plan = compile_circuit_ququart(src)
    assert out.num_qudits == 1
    assert count_gates(out).two_qudit == 0
    assert verify_compilation(src, out, emb).status is Status.EQUAL


def test_inter_cz_single_ms():
    src = QubitCircuit(4, (CZ(0, 2),))
    out, emb, _ = compile_circuit_ququart(src, "sequential")
    assert count_gates(out).two_qudit == 1
    assert count_gates(out).by_variant["rot"] == 0
    assert verify_compilation(src, out, emb).status is Status.EQUAL


def test_random_6_qubit_both_strategies(rng):
    for _ in range(15):
        src = random_qubit_circuit(6, 30, rng, kinds=("r", "ph", "x", "cz", "icz", "cnx"))
        counts = {}
        for strategy in ("sequential", "greedy"):
            out, emb, plan = compile_circuit_ququart(src, strategy)
            assert out.num_qudits == 3
            v = verify_compilation(src, out, emb)
            assert v.status is Status.EQUAL, v
            counts[strategy] = v.counts.two_qudit
        assert counts["greedy"] <= counts["sequential"]


def test_levels_stay_in_range():
    out, _, _ = compile_circuit_ququart(QubitCircuit(3, (CnX((0, 1), 2),)))
    assert all(0 <= lv < 4 for g in out.gates for lv in g.levels)

"""Acceptance checks; run with ``pytest tests/test_acceptance.py -s`` to see the summary lines."""

import contextlib
import itertools
import math
import time

import numpy as np
import pytest
from scipy.linalg import expm

from quditcc.densesim import Status, circuit_unitary, physms_matrix, rot_matrix, sigma_phi, zz_matrix
from quditcc.ir import CnX, EmbeddingMap, QubitCircuit, QuditCircuit, Slot, count_gates
from quditcc.physlayer import TransitionGraph, apply_physical_pass, run_readout, schedule_readout
from quditcc.ququart import compile_circuit_ququart, lower_inv_cz_inter
from quditcc.qutrit import compile_circuit_qutrit, compile_cnx_qutrit
from quditcc.testing import random_qubit_circuit
from quditcc.verify import report_toffoli_scaling, verify_compilation

PI = math.pi


@contextlib.contextmanager
def criterion(num: int, title: str):
    t0 = time.perf_counter()
    notes: list[str] = []
    try:
        yield notes
    except BaseException as exc:
        print(f"\nFAIL  criterion {num}: {title} ({type(exc).__name__}: {exc})")
        raise
    extra = "; ".join(notes)
    print(f"\nPASS  criterion {num}: {title} [{time.perf_counter() - t0:.2f}s{'; ' + extra if extra else ''}]")


def toffoli(n: int) -> QubitCircuit:
    return QubitCircuit(n, (CnX(tuple(range(n - 1)), n - 1),))


def test_criterion_1_two_qudit_count():
    with criterion(1, "qutrit C^{N-1}X uses 2N-3 two-qudit gates, N=2..8") as notes:
        t0 = time.perf_counter()
        for n in range(2, 9):
            circ = compile_cnx_qutrit(list(range(n - 1)), n - 1, EmbeddingMap.whole(3, n))
            assert count_gates(circ).two_qudit == 2 * n - 3, n
        elapsed = time.perf_counter() - t0
        notes.append(f"compile time {elapsed:.3f}s")
        assert elapsed < 1.0


def test_criterion_2_and_3_toffoli_correct_and_leak_free():
    verdicts = {}
    t0 = time.perf_counter()
    for n in range(2, 8):
        src = toffoli(n)
        out, emb = compile_circuit_qutrit(src)
        verdicts[n] = verify_compilation(src, out, emb, tol=1e-9)
    elapsed = time.perf_counter() - t0
    with criterion(2, "ladder equals C^{N-1}X up to one global phase, N=2..7") as notes:
        worst = max(v.max_deviation for v in verdicts.values())
        notes.append(f"max deviation {worst:.1e}, {elapsed:.2f}s")
        for n, v in verdicts.items():
            assert v.status in (Status.EQUAL, Status.EQUAL_UP_TO_GLOBAL_PHASE), n
            assert v.max_deviation <= 1e-9, n
        assert elapsed < 30.0
    with criterion(3, "no leakage out of the qubit subspace, N=2..7") as notes:
        worst = max(v.leakage_max for v in verdicts.values())
        notes.append(f"max leakage {worst:.1e}")
        assert worst <= 1e-12


def test_criterion_4_zz_pi_diagonal():
    with criterion(4, "zz_matrix(4,0,1,0,1,pi) is -1 on {0,1}x{0,1}, +1 elsewhere"):
        want = np.diag([-1.0 if (a < 2 and b < 2) else 1.0 for a in range(4) for b in range(4)])
        assert np.abs(zz_matrix(4, 0, 1, 0, 1, PI) - want).max() <= 1e-12


def _inv_cz_oracle(sa: Slot, sb: Slot) -> np.ndarray:
    def bit(level, slot):
        return level >> 1 if slot is Slot.FIRST else level & 1

    return np.diag([-1.0 if bit(a, sa) == 0 and bit(b, sb) == 0 else 1.0 for a in range(4) for b in range(4)])


def test_criterion_5_slot_table():
    with criterion(5, "inter-ququart slot table gives inverted CZ x identity (16x16)") as notes:
        for sa, sb in itertools.product((Slot.FIRST, Slot.SECOND), repeat=2):
            gates, phase = lower_inv_cz_inter((0, sa), (1, sb))
            u = circuit_unitary(QuditCircuit(2, 4, tuple(gates), phase))
            assert np.abs(u - _inv_cz_oracle(sa, sb)).max() <= 1e-12, (sa, sb)
            notes.append(f"{sa.name[0]}{sb.name[0]}->{gates[0].i}{gates[0].j}{gates[0].k}{gates[0].l}")


def test_criterion_6_ququart_random_circuits():
    rng = np.random.default_rng(6)
    with criterion(6, "100 random 6-qubit circuits compile exactly on 3 ququarts") as notes:
        t0 = time.perf_counter()
        worst = 0.0
        for _ in range(100):
            src = random_qubit_circuit(6, 30, rng, kinds=("r", "ph", "x", "cz"))
            counts = {}
            for strategy in ("sequential", "greedy"):
                out, emb, plan = compile_circuit_ququart(src, strategy)
                assert out.num_qudits == 3
                v = verify_compilation(src, out, emb, tol=1e-9)
                assert v.status is Status.EQUAL, strategy
                worst = max(worst, v.max_deviation)
                counts[strategy] = v.counts.two_qudit
            assert counts["greedy"] <= counts["sequential"]
        elapsed = time.perf_counter() - t0
        notes.append(f"max deviation {worst:.1e}")
        assert elapsed < 60.0


def _sigma_oracle(d, i, j, phi):
    s = np.zeros((d, d), dtype=complex)
    s[i, j] = np.exp(-1j * phi)
    s[j, i] = np.exp(1j * phi)
    return s


def test_criterion_7_gate_identities():
    rng = np.random.default_rng(7)
    with criterion(7, "ZZ-from-XX and MS phase-correction identities, d in {3,4}") as notes:
        worst4 = worst6 = 0.0
        for _ in range(50):
            d = int(rng.choice([3, 4]))
            (i, j), (k, l) = (sorted(rng.choice(d, 2, replace=False)) for _ in range(2))
            chi = rng.uniform(-PI, PI)
            sx_a, sx_b = _sigma_oracle(d, i, j, 0.0), _sigma_oracle(d, k, l, 0.0)
            xx = expm(-1j * chi * np.kron(sx_a, sx_b))
            ry = lambda a, b, t: expm(-0.5j * t * _sigma_oracle(d, a, b, PI / 2))
            lhs = np.kron(ry(i, j, PI / 2), ry(k, l, PI / 2)) @ xx @ np.kron(ry(i, j, -PI / 2), ry(k, l, -PI / 2))
            worst4 = max(worst4, np.abs(lhs - zz_matrix(d, i, j, k, l, chi)).max())
        for _ in range(50):
            d = int(rng.choice([3, 4]))
            phi, chi = rng.uniform(-PI, PI, 2)
            s = _sigma_oracle(d, 0, 1, phi)
            ms = expm(-1j * chi * np.kron(s, s))
            one = np.eye(d)
            gen = np.kron(s, one) + np.kron(one, s)
            phys = expm(-0.5j * chi * gen @ gen)
            ph = np.diag([np.exp(0.5j * chi) if lv < 2 else 1.0 for lv in range(d)])
            worst6 = max(worst6, np.abs(np.kron(ph, ph) @ phys - ms).max())
            # the library's PhysMS matrix must agree with the same oracle
            worst6 = max(worst6, np.abs(physms_matrix(d, phi, chi) - phys).max())
        notes.append(f"ZZ {worst4:.1e}, MS {worst6:.1e}")
        assert worst4 <= 1e-12 and worst6 <= 1e-12


def test_criterion_8_physical_layer():
    with criterion(8, "physical pass on {01,12} and full readout for d=3,4") as notes:
        src = toffoli(3)
        out, emb = compile_circuit_qutrit(src)
        graph = TransitionGraph(3, frozenset({(0, 1), (1, 2)}))
        phys = apply_physical_pass(out, graph)
        v = verify_compilation(src, phys, emb, tol=1e-9)
        assert v.ok and v.max_deviation <= 1e-9
        notes.append(f"deviation {v.max_deviation:.1e}")
        for d in (3, 4):
            for g in (TransitionGraph.ladder(d), TransitionGraph.complete(d)):
                plan = schedule_readout(d, g)
                for level in range(d):
                    dist = run_readout(plan, np.eye(d)[level])
                    assert abs(dist.get(level, 0.0) - 1.0) <= 1e-12, (d, level)


def test_criterion_9_baseline_table():
    with criterion(9, "report rows 2N-3 vs 12N-23 for N=3..10"):
        rows = report_toffoli_scaling(range(3, 11))
        assert [r.n for r in rows] == list(range(3, 11))
        for r in rows:
            assert r.qutrit_two_qudit == r.ladder_formula == 2 * r.n - 3
            assert r.ancilla_baseline == 12 * r.n - 23 and r.baseline_valid

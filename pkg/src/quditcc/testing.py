"""Random circuit generators for property checks and benchmarks."""

from __future__ import annotations

import math

import numpy as np

from .ir import CZ, MS2, CnX, InvCZ, PauliX, Ph, Phase1q, PhysMS, QubitCircuit, QuditCircuit, Rot, Rot1q


def random_qubit_circuit(
    n: int,
    depth: int,
    rng: np.random.Generator,
    kinds: tuple[str, ...] = ("r", "ph", "cz"),
) -> QubitCircuit:
    gates = []
    for _ in range(depth):
        kind = kinds[rng.integers(len(kinds))]
        if kind in ("cz", "icz") and n < 2:
            kind = "r"
        if kind == "cnx" and n < 3:
            kind = "cz" if n >= 2 else "r"
        if kind == "r":
            gates.append(Rot1q(int(rng.integers(n)), *rng.uniform(-math.pi, math.pi, 2)))
        elif kind == "ph":
            gates.append(Phase1q(int(rng.integers(n)), rng.uniform(-math.pi, math.pi)))
        elif kind == "x":
            gates.append(PauliX(int(rng.integers(n))))
        elif kind in ("cz", "icz"):
            a, b = (int(v) for v in rng.choice(n, 2, replace=False))
            gates.append(CZ(a, b) if kind == "cz" else InvCZ(a, b))
        elif kind == "cnx":
            k = int(rng.integers(3, min(n, 4) + 1))
            ops = [int(v) for v in rng.choice(n, k, replace=False)]
            gates.append(CnX(tuple(ops[:-1]), ops[-1]))
        else:
            raise ValueError(f"unknown gate kind {kind!r}")
    return QubitCircuit(n, tuple(gates))


def _pair(d, rng):
    i, j = sorted(int(v) for v in rng.choice(d, 2, replace=False))
    return i, j


def random_qudit_circuit(
    m: int, d: int, num_gates: int, rng: np.random.Generator, physms: bool = True
) -> QuditCircuit:
    """Random unitary circuit over Rot, Ph, MS2 (and PhysMS) with a random global phase."""
    gates = []
    kinds = ["rot", "ph"] + (["ms", "physms"] if m >= 2 and physms else ["ms"] if m >= 2 else [])
    for _ in range(num_gates):
        kind = kinds[rng.integers(len(kinds))]
        if kind == "rot":
            gates.append(Rot(int(rng.integers(m)), *_pair(d, rng), *rng.uniform(-math.pi, math.pi, 2)))
        elif kind == "ph":
            gates.append(Ph(int(rng.integers(m)), int(rng.integers(d)), rng.uniform(-math.pi, math.pi)))
        else:
            a, b = (int(v) for v in rng.choice(m, 2, replace=False))
            phi, chi = rng.uniform(-math.pi, math.pi, 2)
            if kind == "ms":
                gates.append(MS2(a, b, *_pair(d, rng), *_pair(d, rng), phi, chi))
            else:
                gates.append(PhysMS(a, b, phi, chi))
    return QuditCircuit(m, d, tuple(gates), rng.uniform(0, 2 * math.pi))

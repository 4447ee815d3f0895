"""Definitional dense simulator for qudit registers.

Basis order is lexicographic with qudit 0 as the most significant digit.
Rotation and MS generators have spectra in {0, +-1}, so their exponentials are
written in closed form: exp(-i A t) = 1 + (cos t - 1) A^2 - i sin t A.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from functools import reduce

import numpy as np

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
    PhysMS,
    ProjMeasure,
    QubitCircuit,
    QuditCircuit,
    Rot,
    Rot1q,
    Slot,
)

DEFAULT_MAX_DIM = 4096
# Probing works on a (D, batch) array; cap its entry count instead of D alone.
DEFAULT_MAX_ENTRIES = 1 << 26


class DimensionBudgetError(RuntimeError):
    """Requested register is larger than the configured simulation budget."""


def max_unitary_dim() -> int:
    return int(os.environ.get("QUDITCC_MAX_DIM", DEFAULT_MAX_DIM))


def max_probe_entries() -> int:
    return int(os.environ.get("QUDITCC_MAX_ENTRIES", DEFAULT_MAX_ENTRIES))


# ---------------------------------------------------------------------------
# Gate matrices


def _check_levels(d: int, *levels: int) -> None:
    for lv in levels:
        if not 0 <= lv < d:
            raise ValueError(f"level {lv} out of range for d={d}")


def sigma_phi(d: int, i: int, j: int, phi: float) -> np.ndarray:
    """cos(phi) sigma_x^{ij} + sin(phi) sigma_y^{ij}, zero outside span{|i>, |j>}."""
    _check_levels(d, i, j)
    if i == j:
        raise ValueError("sigma needs two distinct levels")
    s = np.zeros((d, d), dtype=complex)
    s[i, j] = np.exp(-1j * phi)
    s[j, i] = np.exp(1j * phi)
    return s


def sigma_z(d: int, i: int, j: int) -> np.ndarray:
    _check_levels(d, i, j)
    if i == j:
        raise ValueError("sigma needs two distinct levels")
    s = np.zeros((d, d), dtype=complex)
    s[i, i] = 1.0
    s[j, j] = -1.0
    return s


def _expi(a: np.ndarray, t: float) -> np.ndarray:
    """exp(-i a t) for Hermitian ``a`` with a^3 = a."""
    a2 = a @ a
    return np.eye(a.shape[0], dtype=complex) + (math.cos(t) - 1.0) * a2 - 1j * math.sin(t) * a


def rot_matrix(d: int, i: int, j: int, phi: float, theta: float) -> np.ndarray:
    return _expi(sigma_phi(d, i, j, phi), theta / 2.0)


def phase_matrix(d: int, level: int, theta: float) -> np.ndarray:
    _check_levels(d, level)
    diag = np.ones(d, dtype=complex)
    diag[level] = np.exp(1j * theta)
    return np.diag(diag)


def _ordered_pairs(i, j, k, l):
    if not (i < j and k < l):
        raise ValueError("MS level pairs must satisfy i < j and k < l")


def ms_matrix(d: int, i: int, j: int, k: int, l: int, phi: float, chi: float) -> np.ndarray:
    _ordered_pairs(i, j, k, l)
    gen = np.kron(sigma_phi(d, i, j, phi), sigma_phi(d, k, l, phi))
    return _expi(gen, chi)


def zz_matrix(d: int, i: int, j: int, k: int, l: int, chi: float) -> np.ndarray:
    _ordered_pairs(i, j, k, l)
    gen = np.kron(sigma_z(d, i, j), sigma_z(d, k, l))
    return _expi(gen, chi)


def physms_matrix(d: int, phi: float, chi: float) -> np.ndarray:
    """exp[-i (sigma x 1 + 1 x sigma)^2 chi / 2] with sigma = sigma_phi^{01}."""
    if d < 2:
        raise ValueError("d must be at least 2")
    s = sigma_phi(d, 0, 1, phi)
    eye = np.eye(d)
    gen = np.kron(s, eye) + np.kron(eye, s)
    # gen^2 has spectrum {0, 1, 2, 4}; diagonalize it instead of calling expm.
    w, v = np.linalg.eigh(gen @ gen)
    w = np.round(w)
    return (v * np.exp(-0.5j * chi * w)) @ v.conj().T


def gate_matrix(g, d: int) -> np.ndarray:
    """Local matrix of a unitary qudit gate (d x d or d^2 x d^2)."""
    if isinstance(g, Rot):
        return rot_matrix(d, g.i, g.j, g.phi, g.theta)
    if isinstance(g, Ph):
        return phase_matrix(d, g.level, g.theta)
    if isinstance(g, MS2):
        return ms_matrix(d, g.i, g.j, g.k, g.l, g.phi, g.chi)
    if isinstance(g, PhysMS):
        return physms_matrix(d, g.phi, g.chi)
    if isinstance(g, ProjMeasure):
        raise ValueError("a measurement has no unitary matrix")
    raise TypeError(f"not a qudit gate: {g!r}")


# ---------------------------------------------------------------------------
# Evolution


def apply_local(state: np.ndarray, mat: np.ndarray, sites: tuple[int, ...], dims: tuple[int, ...]) -> np.ndarray:
    """Apply ``mat`` on ``sites`` of a register with local dimensions ``dims``.

    ``state`` has shape (D,) or (D, batch).
    """
    batch = state.shape[1:]
    n = len(dims)
    t = state.reshape(dims + batch)
    k = len(sites)
    local = mat.reshape(tuple(dims[s] for s in sites) * 2)
    t = np.tensordot(local, t, axes=(list(range(k, 2 * k)), list(sites)))
    # tensordot leaves the acted-on axes in front; move them back.
    t = np.moveaxis(t, list(range(k)), list(sites))
    return t.reshape(state.shape)


def _apply_diag_phase(state, qudit, level, theta, dims):
    batch = state.shape[1:]
    t = state.reshape(dims + batch).copy()
    idx = [slice(None)] * len(t.shape)
    idx[qudit] = level
    t[tuple(idx)] *= np.exp(1j * theta)
    return t.reshape(state.shape)


def _apply_gate(state, g, d, dims, cache):
    if isinstance(g, Ph):
        return _apply_diag_phase(state, g.qudit, g.level, g.theta, dims)
    if isinstance(g, ProjMeasure):
        raise ValueError("apply_circuit does not evolve through measurements")
    key = g
    mat = cache.get(key)
    if mat is None:
        mat = cache[key] = gate_matrix(g, d)
    return apply_local(state, mat, g.qudits, dims)


def apply_circuit(c: QuditCircuit, state: np.ndarray) -> np.ndarray:
    """Evolve a state (D,) or a stack of states (D, batch) gate by gate."""
    state = np.asarray(state, dtype=complex)
    dims = (c.dim,) * c.num_qudits
    if state.shape[0] != c.dim**c.num_qudits:
        raise ValueError(f"state dimension {state.shape[0]} does not match d^m = {c.dim ** c.num_qudits}")
    cache: dict = {}
    for g in c.gates:
        state = _apply_gate(state, g, c.dim, dims, cache)
    return np.exp(1j * c.global_phase) * state


def circuit_unitary(c: QuditCircuit, max_dim: int | None = None) -> np.ndarray:
    if c.has_measurement:
        raise ValueError("circuit contains a measurement")
    cap = max_unitary_dim() if max_dim is None else max_dim
    D = c.dim**c.num_qudits
    if D > cap:
        raise DimensionBudgetError(f"d^m = {D} exceeds the unitary budget {cap}")
    return apply_circuit(c, np.eye(D, dtype=complex))


def embed_gate(mat: np.ndarray, sites: tuple[int, ...], d: int, m: int) -> np.ndarray:
    """Full-register matrix of a local gate (reference construction by kron)."""
    if len(sites) == 1:
        ops = [np.eye(d)] * m
        ops[sites[0]] = mat
        return reduce(np.kron, ops)
    return apply_local(np.eye(d**m, dtype=complex), mat, sites, (d,) * m)


# ---------------------------------------------------------------------------
# Qubit-level reference simulator

_X = np.array([[0, 1], [1, 0]], dtype=complex)


def qubit_gate_matrix(g) -> tuple[np.ndarray, tuple[int, ...]]:
    if isinstance(g, Rot1q):
        return rot_matrix(2, 0, 1, g.phi, g.theta), g.qubits
    if isinstance(g, Phase1q):
        return phase_matrix(2, 1, g.theta), g.qubits
    if isinstance(g, PauliX):
        return _X.copy(), g.qubits
    if isinstance(g, CZ):
        return np.diag([1, 1, 1, -1]).astype(complex), g.qubits
    if isinstance(g, InvCZ):
        return np.diag([-1, 1, 1, 1]).astype(complex), g.qubits
    if isinstance(g, CnX):
        n = len(g.qubits)
        mat = np.eye(2**n, dtype=complex)
        mat[[-2, -1]] = mat[[-1, -2]]
        return mat, g.qubits
    if isinstance(g, Measure):
        raise ValueError("a measurement has no unitary matrix")
    raise TypeError(f"not a qubit gate: {g!r}")


def apply_qubit_circuit(c: QubitCircuit, state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    dims = (2,) * c.num_qubits
    for g in c.gates:
        mat, sites = qubit_gate_matrix(g)
        state = apply_local(state, mat, sites, dims)
    return state


def qubit_circuit_unitary(c: QubitCircuit) -> np.ndarray:
    return apply_qubit_circuit(c, np.eye(2**c.num_qubits, dtype=complex))


# ---------------------------------------------------------------------------
# Embedding and equivalence


@dataclass(frozen=True)
class SubspaceIsometry:
    """Isometry from N qubits into m qudits; column k is the basis state ``columns[k]``."""

    source_dim: int
    target_dim: int
    columns: np.ndarray

    def matrix(self) -> np.ndarray:
        v = np.zeros((self.target_dim, self.source_dim), dtype=complex)
        v[self.columns, np.arange(self.source_dim)] = 1.0
        return v

    def embed(self, qubit_states: np.ndarray) -> np.ndarray:
        qubit_states = np.asarray(qubit_states, dtype=complex)
        out = np.zeros((self.target_dim,) + qubit_states.shape[1:], dtype=complex)
        out[self.columns] = qubit_states
        return out

    def restrict(self, qudit_states: np.ndarray) -> np.ndarray:
        """V^dagger applied to qudit states."""
        return np.asarray(qudit_states)[self.columns]


def embedding_levels(emb: EmbeddingMap, m: int, bits: tuple[int, ...]) -> list[int]:
    levels = [0] * m
    for q, bit in enumerate(bits):
        qudit, slot = emb.entries[q]
        if slot is Slot.WHOLE:
            levels[qudit] += bit
        elif slot is Slot.FIRST:
            levels[qudit] += 2 * bit
        else:
            levels[qudit] += bit
    return levels


def embedding_isometry(emb: EmbeddingMap, m: int) -> SubspaceIsometry:
    if emb.min_qudits > m:
        raise ValueError(f"embedding uses {emb.min_qudits} qudits but the register has {m}")
    n = emb.num_qubits
    d = emb.dim
    powers = d ** np.arange(m - 1, -1, -1)
    cols = np.empty(2**n, dtype=np.int64)
    for k in range(2**n):
        bits = tuple((k >> (n - 1 - q)) & 1 for q in range(n))
        cols[k] = int(np.dot(embedding_levels(emb, m, bits), powers))
    return SubspaceIsometry(2**n, d**m, cols)


class Status(str, enum.Enum):
    EQUAL = "equal"
    EQUAL_UP_TO_GLOBAL_PHASE = "equal_up_to_global_phase"
    DIFFERENT = "different"


@dataclass(frozen=True)
class Equivalence:
    status: Status
    global_phase: float
    max_deviation: float

    @property
    def ok(self) -> bool:
        return self.status is not Status.DIFFERENT


def compare_up_to_phase(got: np.ndarray, ref: np.ndarray, tol: float = 1e-9) -> Equivalence:
    """Entrywise comparison with the phase aligned on the largest entry of ``ref``."""
    if got.shape != ref.shape:
        raise ValueError(f"shape mismatch {got.shape} vs {ref.shape}")
    if ref.size == 0:
        return Equivalence(Status.EQUAL, 0.0, 0.0)
    idx = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
    if abs(got[idx]) == 0.0:
        return Equivalence(Status.DIFFERENT, 0.0, float(np.max(np.abs(got - ref))))
    alpha = float(np.angle(got[idx] / ref[idx]))
    dev = float(np.max(np.abs(got - np.exp(1j * alpha) * ref)))
    raw = float(np.max(np.abs(got - ref)))
    if raw <= tol:
        return Equivalence(Status.EQUAL, alpha, raw)
    if dev <= tol:
        return Equivalence(Status.EQUAL_UP_TO_GLOBAL_PHASE, alpha, dev)
    return Equivalence(Status.DIFFERENT, alpha, dev)


def probe(c: QuditCircuit, iso: SubspaceIsometry, max_entries: int | None = None) -> np.ndarray:
    """U V as a (d^m, 2^N) array, built by evolving every embedded basis input."""
    max_entries = max_probe_entries() if max_entries is None else max_entries
    if iso.target_dim != c.dim**c.num_qudits:
        raise ValueError("isometry target does not match the circuit register")
    if iso.target_dim * iso.source_dim > max_entries:
        raise DimensionBudgetError(
            f"probing {iso.source_dim} inputs on a {iso.target_dim}-dim register exceeds the budget"
        )
    return apply_circuit(c, iso.matrix())


def equivalent_on_subspace(
    qudit_c: QuditCircuit, ref_u: np.ndarray, iso: SubspaceIsometry, tol: float = 1e-9
) -> Equivalence:
    if ref_u.shape != (iso.source_dim, iso.source_dim):
        raise ValueError("reference unitary does not match the isometry source dimension")
    restricted = iso.restrict(probe(qudit_c, iso))
    return compare_up_to_phase(restricted, ref_u, tol)


def leakage_all(qudit_c: QuditCircuit, iso: SubspaceIsometry) -> np.ndarray:
    """Leakage for every computational input at once."""
    out = probe(qudit_c, iso)
    kept = np.sum(np.abs(iso.restrict(out)) ** 2, axis=0)
    return np.clip(1.0 - kept, 0.0, 1.0)


def leakage(qudit_c: QuditCircuit, iso: SubspaceIsometry, input_index: int) -> float:
    if not 0 <= input_index < iso.source_dim:
        raise ValueError("input index out of range")
    e = np.zeros(iso.source_dim, dtype=complex)
    e[input_index] = 1.0
    out = apply_circuit(qudit_c, iso.embed(e))
    kept = float(np.sum(np.abs(out[iso.columns]) ** 2))
    return min(max(1.0 - kept, 0.0), 1.0)


def basis_state(levels, d: int) -> np.ndarray:
    m = len(levels)
    idx = 0
    for lv in levels:
        _check_levels(d, lv)
        idx = idx * d + lv
    s = np.zeros(d**m, dtype=complex)
    s[idx] = 1.0
    return s

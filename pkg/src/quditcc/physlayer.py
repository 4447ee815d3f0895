"""Rewrites onto physically addressable operations.

Rotations on transitions missing from the ion's transition graph are
conjugated by pi pulses along a shortest path; two-qudit MS gates on arbitrary
level pairs are permuted onto the physical (0,1) x (0,1) gate; full readouts
become a chain of binary |0>-vs-rest projections interleaved with swaps.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import networkx as nx
import numpy as np

from .ir import MS2, Ph, PhysMS, ProjMeasure, QuditCircuit, Rot

PI = math.pi


@dataclass(frozen=True)
class TransitionGraph:
    d: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset(tuple(sorted(e)) for e in self.edges)
        for i, j in edges:
            if i == j or not (0 <= i < self.d and 0 <= j < self.d):
                raise ValueError(f"bad transition ({i}, {j}) for d={self.d}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def complete(cls, d: int) -> "TransitionGraph":
        return cls(d, frozenset((i, j) for i in range(d) for j in range(i + 1, d)))

    @classmethod
    def ladder(cls, d: int) -> "TransitionGraph":
        return cls(d, frozenset((i, i + 1) for i in range(d - 1)))

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.d))
        g.add_edges_from(self.edges)
        return g

    @property
    def connected(self) -> bool:
        return nx.is_connected(self.graph())

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def path(self, i: int, j: int) -> list[int]:
        """Shortest path, ties broken by the lexicographically smallest level sequence."""
        self.require_connected()
        return min(nx.all_shortest_paths(self.graph(), i, j))


    def require_connected(self) -> None:
        if not self.connected:
            raise ValueError("transition graph is not connected")


def parse_transition_graph(text: str) -> TransitionGraph:
    d = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if d is None:
            if len(toks) != 1 or not toks[0].startswith("d="):
                raise ValueError(f"line {lineno}: expected header 'd=<d>'")
            d = int(toks[0][2:])
            continue
        if toks[0] != "edge" or len(toks) != 3:
            raise ValueError(f"line {lineno}: expected 'edge <i> <j>'")
        edges.append((int(toks[1]), int(toks[2])))
    if d is None:
        raise ValueError("missing 'd=<d>' header")
    return TransitionGraph(d, frozenset(edges))


def serialize_transition_graph(graph: TransitionGraph) -> str:
    return "\n".join([f"d={graph.d}"] + [f"edge {i} {j}" for i, j in sorted(graph.edges)]) + "\n"


# ---------------------------------------------------------------------------
# Rotations


def _route(qudit: int, src: int, dst: int, phi: float, theta: float, graph: TransitionGraph) -> list:
    """R_phi on (src, dst) where src is the level carried along the path.

    A pi pulse R_x(pi) maps |a> -> -i|b>, so after k - 1 pulses the moved level
    picks up (-i)^(k-1); the core rotation axis is advanced by (k - 1) pi / 2 to
    cancel it.
    """
    if graph.has_edge(src, dst):
        # sigma_phi^{dst,src} = sigma_{-phi}^{src,dst}; Rot normalizes the pair.
        return [Rot(qudit, src, dst, phi, theta)]
    path = graph.path(src, dst)
    hops = [Rot(qudit, a, b, 0.0, PI) for a, b in zip(path, path[1:-1])]
    core = Rot(qudit, path[-2], dst, phi + (len(path) - 2) * PI / 2, theta)
    undo = [Rot(r.qudit, r.i, r.j, r.phi, -r.theta) for r in reversed(hops)]
    return hops + [core] + undo


def route_rotation(g: Rot, graph: TransitionGraph) -> list:
    graph.require_connected()
    return _route(g.qudit, g.i, g.j, g.phi, g.theta, graph)


def _permutation(qudit: int, lo: int, hi: int, graph: TransitionGraph, d: int) -> list:
    """Gates P with P|lo> = |0> and P|hi> = |1> exactly (phases fixed by Ph)."""
    gates: list = []
    where_hi = hi
    if lo != 0:
        gates += _route(qudit, lo, 0, 0.0, PI, graph)
        if hi == 0:
            where_hi = lo
    if where_hi != 1:
        gates += _route(qudit, where_hi, 1, 0.0, PI, graph)
    if not gates:
        return gates
    from .densesim import gate_matrix

    mat = np.eye(d, dtype=complex)
    for g in gates:
        mat = gate_matrix(g, d) @ mat
    a, b = mat[0, lo], mat[1, hi]
    if not (math.isclose(abs(a), 1.0, abs_tol=1e-9) and math.isclose(abs(b), 1.0, abs_tol=1e-9)):
        raise AssertionError("permutation sandwich did not map levels as intended")
    for level, amp in ((0, a), (1, b)):
        ang = -cmath.phase(amp)
        if abs(math.remainder(ang, 2 * PI)) > 1e-12:
            gates.append(Ph(qudit, level, ang))
    return gates


def _inverse(gates: Iterable) -> list:
    out = []
    for g in reversed(list(gates)):
        if isinstance(g, Rot):
            out.append(Rot(g.qudit, g.i, g.j, g.phi, -g.theta))
        else:
            out.append(Ph(g.qudit, g.level, -g.theta))
    return out


def lift_ms(g: MS2, graph: TransitionGraph) -> list:
    """MS on (i,j) x (k,l) from the physical (0,1) gate plus single-qudit gates.

    MS~^{0101} = (Ph_0(chi/2) Ph_1(chi/2))^{x2} MS^{01}; the level permutations
    P_A, P_B conjugate it onto the requested transitions.
    """
    graph.require_connected()
    d = graph.d
    pa = _permutation(g.qudit_a, g.i, g.j, graph, d)
    pb = _permutation(g.qudit_b, g.k, g.l, graph, d)
    half = g.chi / 2
    core = [PhysMS(g.qudit_a, g.qudit_b, g.phi, g.chi)] + [
        Ph(q, lv, half) for q in (g.qudit_a, g.qudit_b) for lv in (0, 1)
    ]
    return pa + pb + core + _inverse(pa) + _inverse(pb)


# ---------------------------------------------------------------------------
# Readout


@dataclass(frozen=True)
class ReadoutPlan:
    """Binary projections with swaps in between.

    Round r (1-based) projects on |0>; between rounds r and r + 1 the swap
    0 <-> r brings level r down. The first round that reports |0> decodes to
    level r - 1; if none does, the level is d - 1. The trailing ``restore``
    gates undo the swaps so the readout is non-demolition on basis states.
    """

    d: int
    swaps: tuple[tuple, ...]
    restore: tuple

    @property
    def rounds(self) -> int:
        return self.d - 1

    def decode(self, outcomes: Iterable[bool]) -> int:
        for r, hit in enumerate(outcomes):
            if hit:
                return r
        return self.d - 1

    def gates(self, qudit: int) -> list:
        out: list = []
        for r in range(self.rounds):
            out.append(ProjMeasure(qudit, nondemolition=True))
            if r < len(self.swaps):
                out += [_on(g, qudit) for g in self.swaps[r]]
        out += [_on(g, qudit) for g in self.restore]
        return out


def _on(g, qudit):
    if isinstance(g, Rot):
        return Rot(qudit, g.i, g.j, g.phi, g.theta)
    return Ph(qudit, g.level, g.theta)


def schedule_readout(d: int, graph: TransitionGraph | None = None) -> ReadoutPlan:
    if d < 2:
        raise ValueError("d must be at least 2")
    graph = TransitionGraph.complete(d) if graph is None else graph
    if graph.d != d:
        raise ValueError("graph dimension mismatch")
    graph.require_connected()
    swaps = tuple(tuple(_route(0, 0, r, 0.0, PI, graph)) for r in range(1, d - 1))
    restore = tuple(g for block in reversed(swaps) for g in _inverse(block))
    return ReadoutPlan(d, swaps, restore)


def run_readout(plan: ReadoutPlan, state: np.ndarray) -> dict[int, float]:
    """Decoded-level distribution for a single-qudit state, branching on every projection."""
    from .densesim import gate_matrix

    state = np.asarray(state, dtype=complex)
    dist: dict[int, float] = {}
    branches = [(state, ())]
    for r in range(plan.rounds):
        nxt = []
        for psi, outs in branches:
            p0 = abs(psi[0]) ** 2
            if p0 > 1e-15:
                dist[plan.decode(outs + (True,))] = dist.get(plan.decode(outs + (True,)), 0.0) + p0
            rest = psi.copy()
            rest[0] = 0.0
            if np.vdot(rest, rest).real > 1e-15:
                if r < len(plan.swaps):
                    for g in plan.swaps[r]:
                        rest = gate_matrix(g, plan.d) @ rest
                nxt.append((rest, outs + (False,)))
        branches = nxt
    for psi, outs in branches:
        p = float(np.vdot(psi, psi).real)
        dist[plan.decode(outs)] = dist.get(plan.decode(outs), 0.0) + p
    return dist


# ---------------------------------------------------------------------------
# Whole-circuit pass


def apply_physical_pass(c: QuditCircuit, graph: TransitionGraph) -> QuditCircuit:
    if graph.d != c.dim:
        raise ValueError(f"graph is for d={graph.d}, circuit has d={c.dim}")
    graph.require_connected()
    plan = None
    out: list = []
    for g in c.gates:
        if isinstance(g, Rot):
            out += route_rotation(g, graph)
        elif isinstance(g, MS2):
            out += lift_ms(g, graph)
        elif isinstance(g, ProjMeasure) and not g.nondemolition:
            plan = plan or schedule_readout(c.dim, graph)
            out += plan.gates(g.qudit)
        else:
            out.append(g)
    return c.with_gates(out)

"""Command-line front end.

Exit codes: 0 ok, 1 verification failed, 2 usage or input error, 3 resource
budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .densesim import DimensionBudgetError, apply_circuit, apply_qubit_circuit, basis_state
from .ir import (
    CircuitParseError,
    EmbeddingMap,
    ProjMeasure,
    QubitCircuit,
    QuditCircuit,
    count_gates,
    parse_qubit_circuit,
    parse_qudit_circuit,
    serialize_qudit_circuit,
)
from .physlayer import apply_physical_pass, parse_transition_graph
from .ququart import assign_pairs, compile_circuit_ququart
from .qutrit import compile_circuit_qutrit
from .verify import format_scaling_table, report_toffoli_scaling, verify_compilation

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    backend: str = "qutrit"
    pairing: str = "sequential"
    inputs: tuple[str, ...] = ()
    out: str | None = None
    json_path: str | None = None
    physical_graph: str | None = None
    tol: float = 1e-9
    seed: int = 0
    verbose: bool = False

    def __post_init__(self):
        if self.tol <= 0:
            raise UsageError("--tol must be positive")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def compile_source(src: QubitCircuit, cfg: RunConfig) -> tuple[QuditCircuit, EmbeddingMap]:
    if cfg.backend == "qutrit":
        out, emb = compile_circuit_qutrit(src)
    else:
        out, emb, _ = compile_circuit_ququart(src, cfg.pairing)
    if cfg.physical_graph:
        graph = parse_transition_graph(_read(cfg.physical_graph))
        out = apply_physical_pass(out, graph)
    return out, emb


def embedding_for(src: QubitCircuit, cfg: RunConfig) -> EmbeddingMap:
    if cfg.backend == "qutrit":
        return EmbeddingMap.whole(3, src.num_qubits)
    return assign_pairs(src, cfg.pairing)[0]


def cmd_compile(cfg: RunConfig) -> int:
    src = parse_qubit_circuit(_read(cfg.inputs[0]))
    out, _ = compile_source(src, cfg)
    _write(cfg.out, serialize_qudit_circuit(out))
    report = count_gates(out).to_json() + "\n"
    if cfg.json_path:
        _write(cfg.json_path, report)
    else:
        (sys.stdout if cfg.out else sys.stderr).write(report)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    src = parse_qubit_circuit(_read(cfg.inputs[0]))
    out = parse_qudit_circuit(_read(cfg.inputs[1]))
    verdict = verify_compilation(src, out, embedding_for(src, cfg), cfg.tol)
    _write(cfg.json_path, verdict.to_json() + "\n")
    if cfg.verbose:
        sys.stderr.write(
            f"status={verdict.status.value} global_phase={verdict.global_phase:.12g} "
            f"max_deviation={verdict.max_deviation:.3e} leakage_max={verdict.leakage_max:.3e}\n"
        )
    return EXIT_OK if verdict.ok else EXIT_FAILED


def _label(index: int, d: int, m: int) -> str:
    digits = []
    for _ in range(m):
        index, r = divmod(index, d)
        digits.append(str(r))
    return "".join(reversed(digits))


def simulate_text(text: str, basis: str, threshold: float = 1e-9) -> dict:
    """Simulate a qubit or qudit circuit file from a basis string like ``"0102"``."""
    head = next((ln.split() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), [""])[0]
    if head == "qubits":
        c = parse_qubit_circuit(text)
        d, m, measured = 2, c.num_qubits, []
    else:
        c = parse_qudit_circuit(text)
        d, m = c.dim, c.num_qudits
        measured = [g.qudit for g in c.gates if isinstance(g, ProjMeasure)]
    if len(basis) != m or not all(ch.isdigit() and int(ch) < d for ch in basis):
        raise UsageError(f"basis string must have {m} digits below {d}")
    state = basis_state([int(ch) for ch in basis], d)
    if head == "qubits":
        if any(type(g).__name__ == "Measure" for g in c.gates):
            raise UsageError("qubit-level simulation does not support measurements")
        state = apply_qubit_circuit(c, state)
    else:
        seen: set[int] = set()
        for g in c.gates:
            if isinstance(g, ProjMeasure):
                seen.add(g.qudit)
            elif seen & set(g.qudits):
                raise UsageError("gates after a measurement on the same qudit are not supported")
        state = apply_circuit(c.with_gates(g for g in c.gates if not isinstance(g, ProjMeasure)), state)
    probs = np.abs(state) ** 2
    amps = [
        {"basis": _label(k, d, m), "re": float(state[k].real), "im": float(state[k].imag), "p": float(probs[k])}
        for k in np.flatnonzero(np.abs(state) > threshold)
    ]
    # d=4 registers encode qubits on every level; otherwise levels >= 2 are outside.
    if d == 4:
        leak = 0.0
    else:
        outside = [k for k in range(d**m) if any(int(ch) >= 2 for ch in _label(k, d, m))]
        leak = float(probs[outside].sum()) if outside else 0.0
        leak = 0.0 if leak <= threshold**2 else leak
    result = {"amplitudes": amps, "leakage": leak}
    if measured:
        qs = sorted(set(measured))
        dist: dict[str, float] = {}
        for k in np.flatnonzero(probs > threshold**2):
            lab = _label(k, d, m)
            key = "".join(lab[q] for q in qs)
            dist[key] = dist.get(key, 0.0) + float(probs[k])
        result["measured_qudits"] = qs
        result["outcomes"] = dict(sorted(dist.items()))
    return result


def cmd_simulate(cfg: RunConfig, basis: str) -> int:
    res = simulate_text(_read(cfg.inputs[0]), basis)
    if cfg.json_path:
        _write(cfg.json_path, json.dumps(res, sort_keys=True) + "\n")
        return EXIT_OK
    for a in res["amplitudes"]:
        print(f"{a['basis']}  {a['re']:+.12f}{a['im']:+.12f}j  p={a['p']:.12f}")
    print(f"leakage {res['leakage']:.1f}" if res["leakage"] == 0 else f"leakage {res['leakage']:.3e}")
    for key, p in res.get("outcomes", {}).items():
        print(f"outcome {key}  p={p:.12f}")
    return EXIT_OK


def cmd_report(cfg: RunConfig, n_values: list[int]) -> int:
    rows = report_toffoli_scaling(n_values)
    sys.stdout.write(format_scaling_table(rows))
    if cfg.json_path:
        _write(cfg.json_path, json.dumps([r.to_dict() for r in rows], sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=["qutrit", "ququart"], default="qutrit")
    common.add_argument("--pairing", choices=["sequential", "greedy"], default="sequential")
    common.add_argument("--physical-graph", metavar="FILE")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", metavar="FILE")
    common.add_argument("--json", metavar="FILE", dest="json_path", help="write JSON output here ('-' for stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="quditcc", description="Compile qubit circuits onto trapped-ion qudits.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compile", parents=[common], help="compile a qubit circuit file")
    c.add_argument("input")
    v = sub.add_parser("verify", parents=[common], help="check a compiled circuit against its source")
    v.add_argument("source")
    v.add_argument("compiled")
    s = sub.add_parser("simulate", parents=[common], help="evolve a basis state through a circuit")
    s.add_argument("input")
    s.add_argument("basis")
    r = sub.add_parser("report", parents=[common], help="Toffoli gate-count scaling table")
    r.add_argument("n", nargs="*", type=int, help="values of N (default 3..10)")
    r.add_argument("--n-min", type=int)
    r.add_argument("--n-max", type=int)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inputs = tuple(getattr(args, k) for k in ("input", "source", "compiled") if getattr(args, k, None))
        cfg = RunConfig(
            command=args.command,
            backend=args.backend,
            pairing=args.pairing,
            inputs=inputs,
            out=args.out,
            json_path=args.json_path,
            physical_graph=args.physical_graph,
            tol=args.tol,
            seed=args.seed,
            verbose=args.verbose,
        )
        if cfg.command == "compile":
            return cmd_compile(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "simulate":
            return cmd_simulate(cfg, args.basis)
        if args.n:
            ns = args.n
        elif args.n_min is not None or args.n_max is not None:
            ns = list(range(args.n_min if args.n_min is not None else 3, (args.n_max if args.n_max is not None else 10) + 1))
        else:
            ns = list(range(3, 11))
        return cmd_report(cfg, ns)
    except DimensionBudgetError as exc:
        print(f"quditcc: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, CircuitParseError, ValueError, IndexError) as exc:
        print(f"quditcc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Qubit-level source IR and qudit-level target IR.

Both IRs are immutable: gates are frozen dataclasses and circuits hold tuples
of gates. Gate lists are in application order (index 0 acts first).

Text formats (one instruction per line, ``#`` starts a comment)::

    qubits <n>
    r <q> <phi> <theta> | ph <q> <theta> | x <q> | cz <a> <b> | icz <a> <b>
    cnx <c1> ... <ck> <t> | measure <q>

    qudits <m> d=<d> gphase=<radians>
    rot <q> <i> <j> <phi> <theta> | phg <q> <level> <theta>
    ms <a> <b> <ij> <kl> <phi> <chi> | physms <a> <b> <phi> <chi>
    pmeas <q> [nd]
"""

from __future__ import annotations

import enum
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

TWO_PI = 2.0 * math.pi


class CircuitParseError(ValueError):
    """Raised on malformed circuit text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def normalize_angle(theta: float) -> float:
    """Map an angle into [0, 2pi)."""
    out = math.fmod(theta, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    if out >= TWO_PI:
        out = 0.0
    return out


# ---------------------------------------------------------------------------
# Qubit IR


@dataclass(frozen=True)
class Rot1q:
    target: int
    phi: float
    theta: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class Phase1q:
    target: int
    theta: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class PauliX:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class CZ:
    a: int
    b: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.a, self.b)


@dataclass(frozen=True)
class InvCZ:
    """Controlled-phase on |00>: applies -1 iff both qubits are 0."""

    a: int
    b: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.a, self.b)


@dataclass(frozen=True)
class CnX:
    """Multi-controlled X with positive controls (1 control = CX)."""

    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if len(self.controls) < 1:
            raise ValueError("CnX needs at least one control")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)


@dataclass(frozen=True)
class Measure:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


QubitGate = Union[Rot1q, Phase1q, PauliX, CZ, InvCZ, CnX, Measure]


@dataclass(frozen=True)
class QubitCircuit:
    num_qubits: int
    gates: tuple[QubitGate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise ValueError("a qubit circuit needs at least one qubit")
        for g in self.gates:
            qs = g.qubits
            if len(set(qs)) != len(qs):
                raise ValueError(f"repeated qubit index in {g}")
            for q in qs:
                if not 0 <= q < self.num_qubits:
                    raise IndexError(f"qubit index {q} out of range for {self.num_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


# ---------------------------------------------------------------------------
# Qudit IR


@dataclass(frozen=True)
class Rot:
    """Single-qudit rotation exp(-i sigma_phi^{ij} theta / 2).

    The level pair is stored with ``i < j``. Swapping the pair flips the sign
    of the sigma_y component, so ``Rot(q, 2, 1, phi, t)`` is stored as
    ``Rot(q, 1, 2, -phi, t)``.
    """

    qudit: int
    i: int
    j: int
    phi: float
    theta: float

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("rotation levels must differ")
        if self.i > self.j:
            i, j = self.j, self.i
            object.__setattr__(self, "i", i)
            object.__setattr__(self, "j", j)
            object.__setattr__(self, "phi", -self.phi)

    @property
    def qudits(self) -> tuple[int, ...]:
        return (self.qudit,)

    @property
    def levels(self) -> tuple[int, ...]:
        return (self.i, self.j)


@dataclass(frozen=True)
class Ph:
    """Phase e^{i theta} on one level of one qudit."""

    qudit: int
    level: int
    theta: float

    @property
    def qudits(self) -> tuple[int, ...]:
        return (self.qudit,)

    @property
    def levels(self) -> tuple[int, ...]:
        return (self.level,)


def _sigma_flip_is_exact(phi: float) -> bool:
    return abs(math.sin(phi)) < 1e-15


@dataclass(frozen=True)
class MS2:
    """Phase-corrected two-qudit MS gate exp(-i sigma_phi^{ij} x sigma_phi^{kl} chi)."""

    qudit_a: int
    qudit_b: int
    i: int
    j: int
    k: int
    l: int
    phi: float
    chi: float

    def __post_init__(self):
        if self.qudit_a == self.qudit_b:
            raise ValueError("MS gate needs two distinct qudits")
        if self.i == self.j or self.k == self.l:
            raise ValueError("MS level pairs must be distinct levels")
        flips = (self.i > self.j) + (self.k > self.l)
        if flips:
            # sigma_phi^{ji} = sigma_{-phi}^{ij}; a shared phi survives only
            # when the sigma_y part vanishes.
            if not _sigma_flip_is_exact(self.phi):
                raise ValueError(
                    "reversed MS level pair is only representable for phi = 0 mod pi"
                )
            if self.i > self.j:
                i, j = self.j, self.i
                object.__setattr__(self, "i", i)
                object.__setattr__(self, "j", j)
            if self.k > self.l:
                k, l = self.l, self.k
                object.__setattr__(self, "k", k)
                object.__setattr__(self, "l", l)

    @property
    def qudits(self) -> tuple[int, ...]:
        return (self.qudit_a, self.qudit_b)

    @property
    def levels(self) -> tuple[int, ...]:
        return (self.i, self.j, self.k, self.l)


@dataclass(frozen=True)
class PhysMS:
    """Physical MS gate on the (0,1) x (0,1) transitions."""

    qudit_a: int
    qudit_b: int
    phi: float
    chi: float

    def __post_init__(self):
        if self.qudit_a == self.qudit_b:
            raise ValueError("MS gate needs two distinct qudits")

    @property
    def qudits(self) -> tuple[int, ...]:
        return (self.qudit_a, self.qudit_b)

    @property
    def levels(self) -> tuple[int, ...]:
        return (0, 1)


@dataclass(frozen=True)
class ProjMeasure:
    """Projective measurement of one qudit.

    ``nondemolition=False`` is the full computational-basis readout;
    ``nondemolition=True`` is the binary |0> vs rest projection used by the
    physical readout schedule.
    """

    qudit: int
    nondemolition: bool = False

    @property
    def qudits(self) -> tuple[int, ...]:
        return (self.qudit,)

    @property
    def levels(self) -> tuple[int, ...]:
        return ()


QuditGate = Union[Rot, Ph, MS2, PhysMS, ProjMeasure]
TWO_QUDIT = (MS2, PhysMS)

MNEMONIC = {Rot: "rot", Ph: "phg", MS2: "ms", PhysMS: "physms", ProjMeasure: "pmeas"}


@dataclass(frozen=True)
class QuditCircuit:
    num_qudits: int
    dim: int
    gates: tuple[QuditGate, ...] = ()
    global_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "global_phase", normalize_angle(float(self.global_phase)))
        if self.dim < 2:
            raise ValueError("qudit dimension must be at least 2")
        if self.num_qudits < 1:
            raise ValueError("a qudit circuit needs at least one qudit")
        for g in self.gates:
            for q in g.qudits:
                if not 0 <= q < self.num_qudits:
                    raise IndexError(f"qudit index {q} out of range in {g}")
            for lv in g.levels:
                if not 0 <= lv < self.dim:
                    raise ValueError(f"level {lv} out of range for d={self.dim} in {g}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def then(self, other: "QuditCircuit") -> "QuditCircuit":
        """Apply ``self`` first, then ``other``."""
        if (other.num_qudits, other.dim) != (self.num_qudits, self.dim):
            raise ValueError("cannot compose circuits on different registers")
        return QuditCircuit(
            self.num_qudits,
            self.dim,
            self.gates + other.gates,
            self.global_phase + other.global_phase,
        )

    def with_gates(self, gates: Iterable[QuditGate], global_phase: float | None = None) -> "QuditCircuit":
        gp = self.global_phase if global_phase is None else global_phase
        return QuditCircuit(self.num_qudits, self.dim, tuple(gates), gp)

    @property
    def has_measurement(self) -> bool:
        return any(isinstance(g, ProjMeasure) for g in self.gates)


# ---------------------------------------------------------------------------
# Embedding


class Slot(enum.Enum):
    WHOLE = "whole"
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class EmbeddingMap:
    """Placement of logical qubits, indexed by qubit, onto (qudit, slot)."""

    dim: int
    entries: tuple[tuple[int, Slot], ...]

    def __post_init__(self):
        entries = tuple((int(q), Slot(s)) for q, s in self.entries)
        object.__setattr__(self, "entries", entries)
        seen: dict[int, list[Slot]] = {}
        for qudit, slot in entries:
            if qudit < 0:
                raise ValueError("negative qudit index")
            if slot is not Slot.WHOLE and self.dim < 4:
                raise ValueError("First/Second slots need d >= 4")
            seen.setdefault(qudit, []).append(slot)
        for qudit, slots in seen.items():
            if Slot.WHOLE in slots and len(slots) > 1:
                raise ValueError(f"qudit {qudit} holds a whole qubit and something else")
            if len(slots) != len(set(slots)):
                raise ValueError(f"qudit {qudit} has a repeated slot")

    @classmethod
    def whole(cls, dim: int, num_qubits: int) -> "EmbeddingMap":
        return cls(dim, tuple((q, Slot.WHOLE) for q in range(num_qubits)))

    @property
    def num_qubits(self) -> int:
        return len(self.entries)

    @property
    def min_qudits(self) -> int:
        return 1 + max((q for q, _ in self.entries), default=-1)

    def qudit_of(self, qubit: int) -> int:
        return self.entries[qubit][0]

    def slot_of(self, qubit: int) -> Slot:
        return self.entries[qubit][1]


# ---------------------------------------------------------------------------
# Gate algebra


class NonInvertibleError(ValueError):
    pass


def dagger(c: QuditCircuit) -> QuditCircuit:
    """Inverse circuit: reversed gate order, negated angles, negated global phase."""
    out: list[QuditGate] = []
    for g in reversed(c.gates):
        if isinstance(g, Rot):
            out.append(Rot(g.qudit, g.i, g.j, g.phi, -g.theta))
        elif isinstance(g, Ph):
            out.append(Ph(g.qudit, g.level, -g.theta))
        elif isinstance(g, MS2):
            out.append(MS2(g.qudit_a, g.qudit_b, g.i, g.j, g.k, g.l, g.phi, -g.chi))
        elif isinstance(g, PhysMS):
            out.append(PhysMS(g.qudit_a, g.qudit_b, g.phi, -g.chi))
        else:
            raise NonInvertibleError("cannot invert a circuit containing a measurement")
    return QuditCircuit(c.num_qudits, c.dim, tuple(out), -c.global_phase)


@dataclass
class CompilationReport:
    total: int = 0
    two_qudit: int = 0
    by_variant: dict[str, int] = field(default_factory=dict)
    depth: int = 0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "two_qudit": self.two_qudit,
            "by_variant": dict(self.by_variant),
            "depth": self.depth,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def count_gates(c: QuditCircuit) -> CompilationReport:
    by_variant = Counter({name: 0 for name in MNEMONIC.values()})
    layer = [0] * c.num_qudits
    for g in c.gates:
        by_variant[MNEMONIC[type(g)]] += 1
        top = 1 + max(layer[q] for q in g.qudits)
        for q in g.qudits:
            layer[q] = top
    return CompilationReport(
        total=len(c.gates),
        two_qudit=sum(isinstance(g, TWO_QUDIT) for g in c.gates),
        by_variant=dict(by_variant),
        depth=max(layer, default=0),
    )


# ---------------------------------------------------------------------------
# Text formats

_ANGLE_RE = re.compile(
    r"^(?P<sign>[+-])?(?:(?P<coef>\d+(?:\.\d*)?|\.\d+)\*?)?pi(?:/(?P<den>\d+(?:\.\d*)?))?$"
)


def parse_angle(token: str) -> float:
    """Parse a float, or a multiple of pi such as ``-pi/2`` or ``3*pi/4``."""
    try:
        return float(token)
    except ValueError:
        pass
    m = _ANGLE_RE.match(token.strip().lower())
    if m is None:
        raise ValueError(f"bad angle {token!r}")
    val = math.pi * float(m["coef"] or 1.0) / float(m["den"] or 1.0)
    return -val if m["sign"] == "-" else val


def _fmt(x: float) -> str:
    return repr(float(x))


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitParseError(f"expected an integer, got {tok!r}", lineno) from None


def _angle(tok: str, lineno: int) -> float:
    try:
        return parse_angle(tok)
    except ValueError as exc:
        raise CircuitParseError(str(exc), lineno) from None


_QUBIT_ARITY = {"r": 3, "ph": 2, "x": 1, "cz": 2, "icz": 2, "measure": 1}


def parse_qubit_circuit(text: str) -> QubitCircuit:
    num_qubits = None
    gates: list[QubitGate] = []
    for lineno, toks in _lines(text):
        op, args = toks[0].lower(), toks[1:]
        if num_qubits is None:
            if op != "qubits" or len(args) != 1:
                raise CircuitParseError("expected header 'qubits <n>'", lineno)
            num_qubits = _int(args[0], lineno)
            if num_qubits < 1:
                raise CircuitParseError("qubit count must be positive", lineno)
            continue
        if op == "cnx":
            if len(args) < 2:
                raise CircuitParseError("cnx needs at least one control and a target", lineno)
        elif op in _QUBIT_ARITY:
            if len(args) != _QUBIT_ARITY[op]:
                raise CircuitParseError(f"{op} takes {_QUBIT_ARITY[op]} arguments", lineno)
        else:
            raise CircuitParseError(f"unknown mnemonic {toks[0]!r}", lineno)

        if op == "r":
            g = Rot1q(_int(args[0], lineno), _angle(args[1], lineno), _angle(args[2], lineno))
        elif op == "ph":
            g = Phase1q(_int(args[0], lineno), _angle(args[1], lineno))
        elif op == "x":
            g = PauliX(_int(args[0], lineno))
        elif op == "cz":
            g = CZ(_int(args[0], lineno), _int(args[1], lineno))
        elif op == "icz":
            g = InvCZ(_int(args[0], lineno), _int(args[1], lineno))
        elif op == "cnx":
            idx = [_int(a, lineno) for a in args]
            g = CnX(tuple(idx[:-1]), idx[-1])
        else:
            g = Measure(_int(args[0], lineno))
        qs = g.qubits
        if len(set(qs)) != len(qs):
            raise CircuitParseError("repeated qubit index", lineno)
        for q in qs:
            if not 0 <= q < num_qubits:
                raise CircuitParseError(f"qubit index {q} out of range", lineno)
        gates.append(g)
    if num_qubits is None:
        raise CircuitParseError("missing 'qubits <n>' header")
    return QubitCircuit(num_qubits, tuple(gates))


def serialize_qubit_circuit(c: QubitCircuit) -> str:
    lines = [f"qubits {c.num_qubits}"]
    for g in c.gates:
        if isinstance(g, Rot1q):
            lines.append(f"r {g.target} {_fmt(g.phi)} {_fmt(g.theta)}")
        elif isinstance(g, Phase1q):
            lines.append(f"ph {g.target} {_fmt(g.theta)}")
        elif isinstance(g, PauliX):
            lines.append(f"x {g.target}")
        elif isinstance(g, CZ):
            lines.append(f"cz {g.a} {g.b}")
        elif isinstance(g, InvCZ):
            lines.append(f"icz {g.a} {g.b}")
        elif isinstance(g, CnX):
            lines.append("cnx " + " ".join(str(q) for q in g.qubits))
        else:
            lines.append(f"measure {g.target}")
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"^d=(\d+)$"), re.compile(r"^gphase=(\S+)$")


def _level_pair(tok: str, lineno: int) -> tuple[int, int]:
    if "," in tok:
        parts = tok.split(",")
    elif len(tok) == 2:
        parts = list(tok)
    else:
        raise CircuitParseError(f"bad level pair {tok!r}", lineno)
    if len(parts) != 2:
        raise CircuitParseError(f"bad level pair {tok!r}", lineno)
    return _int(parts[0], lineno), _int(parts[1], lineno)


_QUDIT_ARITY = {"rot": 5, "phg": 3, "ms": 6, "physms": 4}


def parse_qudit_circuit(text: str) -> QuditCircuit:
    header = None
    gates: list[QuditGate] = []
    for lineno, toks in _lines(text):
        op, args = toks[0].lower(), toks[1:]
        if header is None:
            if op != "qudits" or len(args) != 3:
                raise CircuitParseError("expected header 'qudits <m> d=<d> gphase=<radians>'", lineno)
            md = _HEADER_RE[0].match(args[1])
            mg = _HEADER_RE[1].match(args[2])
            if md is None or mg is None:
                raise CircuitParseError("malformed qudit header", lineno)
            header = (_int(args[0], lineno), int(md[1]), _angle(mg[1], lineno))
            continue
        if op == "pmeas":
            if len(args) not in (1, 2) or (len(args) == 2 and args[1] != "nd"):
                raise CircuitParseError("pmeas takes a qudit and an optional 'nd'", lineno)
        elif op in _QUDIT_ARITY:
            if len(args) != _QUDIT_ARITY[op]:
                raise CircuitParseError(f"{op} takes {_QUDIT_ARITY[op]} arguments", lineno)
        else:
            raise CircuitParseError(f"unknown mnemonic {toks[0]!r}", lineno)
        try:
            if op == "rot":
                g = Rot(_int(args[0], lineno), _int(args[1], lineno), _int(args[2], lineno),
                        _angle(args[3], lineno), _angle(args[4], lineno))
            elif op == "phg":
                g = Ph(_int(args[0], lineno), _int(args[1], lineno), _angle(args[2], lineno))
            elif op == "ms":
                i, j = _level_pair(args[2], lineno)
                k, l = _level_pair(args[3], lineno)
                g = MS2(_int(args[0], lineno), _int(args[1], lineno), i, j, k, l,
                        _angle(args[4], lineno), _angle(args[5], lineno))
            elif op == "physms":
                g = PhysMS(_int(args[0], lineno), _int(args[1], lineno),
                           _angle(args[2], lineno), _angle(args[3], lineno))
            else:
                g = ProjMeasure(_int(args[0], lineno), len(args) == 2)
        except CircuitParseError:
            raise
        except ValueError as exc:
            raise CircuitParseError(str(exc), lineno) from None
        m, d, _ = header
        for q in g.qudits:
            if not 0 <= q < m:
                raise CircuitParseError(f"qudit index {q} out of range", lineno)
        for lv in g.levels:
            if not 0 <= lv < d:
                raise CircuitParseError(f"level {lv} out of range for d={d}", lineno)
        gates.append(g)
    if header is None:
        raise CircuitParseError("missing 'qudits' header")
    m, d, gp = header
    return QuditCircuit(m, d, tuple(gates), gp)


def _pair(a: int, b: int, dim: int) -> str:
    return f"{a}{b}" if dim <= 10 else f"{a},{b}"


def serialize_qudit_circuit(c: QuditCircuit) -> str:
    lines = [f"qudits {c.num_qudits} d={c.dim} gphase={_fmt(c.global_phase)}"]
    for g in c.gates:
        if isinstance(g, Rot):
            lines.append(f"rot {g.qudit} {g.i} {g.j} {_fmt(g.phi)} {_fmt(g.theta)}")
        elif isinstance(g, Ph):
            lines.append(f"phg {g.qudit} {g.level} {_fmt(g.theta)}")
        elif isinstance(g, MS2):
            lines.append(
                f"ms {g.qudit_a} {g.qudit_b} {_pair(g.i, g.j, c.dim)} {_pair(g.k, g.l, c.dim)} "
                f"{_fmt(g.phi)} {_fmt(g.chi)}"
            )
        elif isinstance(g, PhysMS):
            lines.append(f"physms {g.qudit_a} {g.qudit_b} {_fmt(g.phi)} {_fmt(g.chi)}")
        else:
            lines.append(f"pmeas {g.qudit}" + (" nd" if g.nondemolition else ""))
    return "\n".join(lines) + "\n"


def two_qudit_pairs(gates: Sequence[QuditGate]) -> list[tuple[int, int]]:
    return [g.qudits for g in gates if isinstance(g, TWO_QUDIT)]

"""Circuits over {Z_α, H, CNOT}, their matrices, their ZX translation and aux-register branches.

Basis order is big-endian: qubit 0 is the most significant bit of a basis index.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from zxlab.core.diagram import IN, OUT, Boundary, Diagram, DyadicPhase, NodeKind, Port
from zxlab.core.errors import AuxBoundError, ExactModeError, SizeCapExceeded
from zxlab.core.evaluate import EXACT, FLOAT, MODES, ExactMatrix, FloatMatrix, resolve_size_cap
from zxlab.core.field import FieldElement
from zxlab.core.verify import is_proportional
from zxlab.globals import AUX_QUBIT_BOUND, FLOAT_TOLERANCE

logger = logging.getLogger(__name__)

Z_GATE = "Z"
H_GATE = "H"
CNOT_GATE = "CNOT"
GATE_KINDS = (Z_GATE, H_GATE, CNOT_GATE)


@dataclass(frozen=True)
class SymbolicAngle:
    """α = 2·asin(n1 / sqrt(n0² + n1²)) with n0 = 2**n - n1.

    Args:
        n1: Number of satisfying assignments.
        n: Number of variables.
    """

    n1: int
    n: int

    def __post_init__(self):
        assert self.n >= 1, f"n ({self.n}) must be positive."
        assert 0 <= self.n1 <= 2**self.n, f"n1 ({self.n1}) must lie in [0, {2 ** self.n}]."

    @property
    def n0(self) -> int:
        return 2**self.n - self.n1

    @property
    def radians(self) -> float:
        return 2 * math.atan2(self.n1, self.n0)

    def to_dict(self) -> dict:
        return {"n1": self.n1, "n": self.n}

    def __str__(self):
        return f"sym({self.n1}/{2 ** self.n})"


Angle = Union[DyadicPhase, SymbolicAngle]


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    control: Optional[int] = None
    angle: Optional[Angle] = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"Invalid gate ({self.kind}), must be one of {GATE_KINDS}.")
        if self.kind == CNOT_GATE and (self.control is None or self.control == self.target):
            raise ValueError(f"CNOT needs a control distinct from its target ({self.target}).")
        if self.kind == Z_GATE and self.angle is None:
            object.__setattr__(self, "angle", DyadicPhase(0, 0))

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.target,) if self.control is None else (self.control, self.target)

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.angle, SymbolicAngle)

    def to_dict(self) -> dict:
        if self.kind == CNOT_GATE:
            return {"g": CNOT_GATE, "c": self.control, "t": self.target}
        record = {"g": self.kind, "q": self.target}
        if self.kind == Z_GATE:
            key = "sym" if self.is_symbolic else "phase"
            record[key] = self.angle.to_dict()
        return record

    @classmethod
    def from_dict(cls, data: dict) -> "Gate":
        kind = data["g"]
        if kind == CNOT_GATE:
            return cls(CNOT_GATE, int(data["t"]), control=int(data["c"]))
        if kind == Z_GATE:
            if "sym" in data:
                angle = SymbolicAngle(int(data["sym"]["n1"]), int(data["sym"]["n"]))
            else:
                angle = DyadicPhase.from_dict(data.get("phase", {"num": 0, "k": 0}))
            return cls(Z_GATE, int(data["q"]), angle=angle)
        return cls(kind, int(data["q"]))


def z_gate(qubit: int, angle: Angle) -> Gate:
    return Gate(Z_GATE, qubit, angle=angle)


def h_gate(qubit: int) -> Gate:
    return Gate(H_GATE, qubit)


def cnot_gate(control: int, target: int) -> Gate:
    return Gate(CNOT_GATE, target, control=control)


@dataclass
class Circuit:
    n_qubits: int
    gates: List[Gate] = field(default_factory=list)

    def __post_init__(self):
        for gate in self.gates:
            if any(not 0 <= q < self.n_qubits for q in gate.qubits):
                raise ValueError(f"Gate {gate} acts outside {self.n_qubits} qubits.")

    def symbolic_angles(self) -> List[SymbolicAngle]:
        return [gate.angle for gate in self.gates if gate.is_symbolic]


class TranslatedCircuit(NamedTuple):
    """A circuit's diagram and the scalar with contract(diagram) = scalar·circuit_matrix."""

    diagram: Diagram
    scalar: FieldElement


def x_rotation(alpha: float) -> np.ndarray:
    """H·Z_α·H, the X rotation as the circuit [H, Z_α, H] implements it."""
    phase = np.exp(1j * alpha)
    return 0.5 * np.array([[1 + phase, 1 - phase], [1 - phase, 1 + phase]], dtype=complex)


def _gate_block(gate: Gate, mode: str) -> Union[np.ndarray, FloatMatrix]:
    """2x2 block of a single-qubit gate."""
    if gate.kind == H_GATE:
        if mode == EXACT:
            half = FieldElement.inv_sqrt2()
            return np.array([[half, half], [half, -half]], dtype=object)
        root = 1 / math.sqrt(2)
        return np.array([[root, root], [root, -root]], dtype=complex)

    if gate.is_symbolic:
        if mode == EXACT:
            raise ExactModeError(f"Gate {gate} has a symbolic angle.")
        return np.diag([1.0, np.exp(1j * gate.angle.radians)]).astype(complex)
    if mode == EXACT:
        zero, one = FieldElement.zero(), FieldElement.one()
        return np.array([[one, zero], [zero, gate.angle.to_field()]], dtype=object)
    value, _ = gate.angle.to_field().to_float()
    return np.diag([1.0, value]).astype(complex)


def _embed(block: np.ndarray, qubit: int, n_qubits: int, dtype) -> np.ndarray:
    before, after = 2**qubit, 2 ** (n_qubits - qubit - 1)
    if dtype is object:
        full = ExactMatrix.identity(before).kron(ExactMatrix(block))
        return full.kron(ExactMatrix.identity(after)).entries
    return np.kron(np.kron(np.eye(before), block), np.eye(after))


def _cnot_permutation(control: int, target: int, n_qubits: int) -> np.ndarray:
    """Basis index each column of the CNOT matrix maps to."""
    indices = np.arange(2**n_qubits)
    control_bit = (indices >> (n_qubits - 1 - control)) & 1
    return indices ^ (control_bit << (n_qubits - 1 - target))


def gate_matrix(gate: Gate, n_qubits: int, mode: str = EXACT) -> Union[ExactMatrix, FloatMatrix]:
    """The full 2^n x 2^n matrix of `gate`."""
    dim = 2**n_qubits
    if gate.kind == CNOT_GATE:
        image = _cnot_permutation(gate.control, gate.target, n_qubits)
        if mode == EXACT:
            entries = np.full((dim, dim), FieldElement.zero(), dtype=object)
            entries[image, np.arange(dim)] = FieldElement.one()
            return ExactMatrix(entries)
        entries = np.zeros((dim, dim), dtype=complex)
        entries[image, np.arange(dim)] = 1.0
        return FloatMatrix(entries)

    block = _gate_block(gate, mode)
    if mode == EXACT:
        return ExactMatrix(_embed(block, gate.target, n_qubits, object))
    # one rounding per block entry
    bound = 2 * np.finfo(float).eps * math.sqrt(dim)
    return FloatMatrix(_embed(block, gate.target, n_qubits, complex), bound)


def circuit_matrix(c: Circuit, mode: str = EXACT) -> Union[ExactMatrix, FloatMatrix]:
    """Product of the gate matrices, first gate applied first."""
    if mode not in MODES:
        raise ValueError(f"Invalid mode ({mode}), must be one of {MODES}.")
    if mode == EXACT and c.symbolic_angles():
        raise ExactModeError("Circuit has symbolic angles; use float mode.")
    dim = 2**c.n_qubits
    result = ExactMatrix.identity(dim) if mode == EXACT else FloatMatrix.identity(dim)
    for gate in c.gates:
        result = gate_matrix(gate, c.n_qubits, mode) @ result
    return result


def circuit_to_diagram(c: Circuit) -> TranslatedCircuit:
    """Translate gate by gate: Z_α spiders, Hadamard boxes, and Z-X pairs for CNOTs.

    Every CNOT contributes a factor 1/√2, which is reported as the scalar.
    """
    if c.symbolic_angles():
        raise ExactModeError("Symbolic angles have no diagram; decode them first.")

    d = Diagram(n_inputs=c.n_qubits, n_outputs=c.n_qubits)
    frontier = [Boundary(IN, q) for q in range(c.n_qubits)]
    scalar = FieldElement.one()

    def advance(qubit: int, node: int):
        d.add_wire(frontier[qubit], node)
        frontier[qubit] = Port(node)

    for gate in c.gates:
        if gate.kind == Z_GATE:
            advance(gate.target, d.add_node(NodeKind.Z, gate.angle))
        elif gate.kind == H_GATE:
            advance(gate.target, d.add_node(NodeKind.H))
        else:
            control = d.add_node(NodeKind.Z)
            target = d.add_node(NodeKind.X)
            advance(gate.control, control)
            advance(gate.target, target)
            d.add_wire(control, target)
            scalar = scalar * FieldElement.inv_sqrt2()

    for qubit, end in enumerate(frontier):
        d.add_wire(end, Boundary(OUT, qubit))
    return TranslatedCircuit(d, scalar)


# Aux circuits


@dataclass(frozen=True)
class Prepare:
    aux: int


@dataclass(frozen=True)
class Measure:
    aux: int
    bit: str


@dataclass(frozen=True)
class ClassicallyControlled:
    bit: str
    gate: Gate


Instruction = Union[Gate, Prepare, Measure, ClassicallyControlled]


@dataclass
class AuxCircuit:
    """A circuit with an auxiliary register, Z measurements and classical corrections.

    Gate qubit indices address the whole register: main qubits come first and aux qubit `i` is
    register index ``n_main + i``.
    """

    n_main: int
    n_aux: int
    instructions: List[Instruction] = field(default_factory=list)
    aux_bound: int = AUX_QUBIT_BOUND

    def __post_init__(self):
        if self.n_aux > self.aux_bound:
            raise AuxBoundError(f"{self.n_aux} aux qubits exceed the bound ({self.aux_bound}).")
        width = self.n_main + self.n_aux
        state = {aux: "fresh" for aux in range(self.n_aux)}
        assigned = set()

        def check_gate(gate: Gate):
            for qubit in gate.qubits:
                if not 0 <= qubit < width:
                    raise ValueError(f"Gate {gate} acts outside {width} qubits.")
                aux = qubit - self.n_main
                if aux >= 0 and state[aux] != "prepared":
                    raise ValueError(f"Aux qubit {aux} used while {state[aux]}.")

        for instruction in self.instructions:
            if isinstance(instruction, Gate):
                check_gate(instruction)
            elif isinstance(instruction, ClassicallyControlled):
                if instruction.bit not in assigned:
                    raise ValueError(f"Bit {instruction.bit} used before it is measured.")
                check_gate(instruction.gate)
            else:
                if not 0 <= instruction.aux < self.n_aux:
                    raise ValueError(f"No aux qubit {instruction.aux}.")
                if isinstance(instruction, Prepare):
                    if state[instruction.aux] == "prepared":
                        raise ValueError(f"Aux qubit {instruction.aux} prepared twice.")
                    state[instruction.aux] = "prepared"
                else:
                    if state[instruction.aux] != "prepared":
                        raise ValueError(f"Aux qubit {instruction.aux} measured before use.")
                    state[instruction.aux] = "measured"
                    assigned.add(instruction.bit)

        unmeasured = [aux for aux, s in state.items() if s == "prepared"]
        if unmeasured:
            raise ValueError(f"Aux qubits {unmeasured} are never measured after use.")


class Branch(NamedTuple):
    outcome: str
    operator: FloatMatrix
    weight: float


def _projector(aux_qubit: int, width: int, source: int, result: int) -> np.ndarray:
    """|result><source| on one register qubit."""
    block = np.zeros((2, 2), dtype=complex)
    block[result, source] = 1.0
    return _embed(block, aux_qubit, width, complex)


def aux_branch_operators(ac: AuxCircuit, size_cap: Optional[int] = None) -> List[Branch]:
    """Every measurement-outcome branch with its main-register operator and weight.

    A branch operator is the product of gates and projectors along the branch, with the aux
    register read off in the basis state its measurements left it in. The weight is
    ``tr(K†K) / 2^n``, the branch probability averaged over main-register inputs.
    """
    width = ac.n_main + ac.n_aux
    dim_main, dim_aux = 2**ac.n_main, 2**ac.n_aux
    cap = resolve_size_cap(size_cap)
    if dim_main * dim_main * dim_aux > cap:
        raise SizeCapExceeded(dim_main * dim_main * dim_aux, cap)

    # operators map main inputs (aux starting in |0>) to the full register
    start = np.zeros((dim_main * dim_aux, dim_main), dtype=complex)
    start[np.arange(dim_main) * dim_aux, np.arange(dim_main)] = 1.0
    branches: List[Tuple[str, Dict[str, int], Dict[int, int], np.ndarray]] = [("", {}, {}, start)]

    for instruction in ac.instructions:
        updated = []
        for outcome, bits, aux_values, operator in branches:
            if isinstance(instruction, Gate):
                operator = gate_matrix(instruction, width, FLOAT).entries @ operator
            elif isinstance(instruction, ClassicallyControlled):
                if bits[instruction.bit]:
                    operator = gate_matrix(instruction.gate, width, FLOAT).entries @ operator
            elif isinstance(instruction, Prepare):
                qubit = ac.n_main + instruction.aux
                value = aux_values.get(instruction.aux, 0)
                operator = _projector(qubit, width, value, 0) @ operator
                aux_values = {**aux_values, instruction.aux: 0}
            else:
                qubit = ac.n_main + instruction.aux
                for value in (0, 1):
                    updated.append(
                        (
                            outcome + str(value),
                            {**bits, instruction.bit: value},
                            {**aux_values, instruction.aux: value},
                            _projector(qubit, width, value, value) @ operator,
                        )
                    )
                continue
            updated.append((outcome, bits, aux_values, operator))
        branches = updated

    result = []
    for outcome, _, _, operator in branches:
        main = operator.reshape(dim_main, dim_aux, dim_main).sum(axis=1)
        weight = float(np.real(np.trace(main.conj().T @ main))) / dim_main
        result.append(Branch(outcome, FloatMatrix(main, FLOAT_TOLERANCE), weight))
    logger.info(f"Enumerated {len(result)} aux branches")
    return result


def aux_is_deterministic(
    ac: AuxCircuit, size_cap: Optional[int] = None
) -> Tuple[bool, Optional[FloatMatrix]]:
    """Whether every branch that can occur implements the same unitary up to scalar.

    Returns the common unitary, normalized so that U·U† = I, when it does.
    """
    branches = [b for b in aux_branch_operators(ac, size_cap) if b.weight > FLOAT_TOLERANCE]
    if not branches:
        return False, None
    reference = branches[0].operator
    for branch in branches[1:]:
        proportional, _ = is_proportional(reference, branch.operator, tolerance=FLOAT_TOLERANCE)
        if not proportional:
            logger.info(f"Branch {branch.outcome} differs from branch {branches[0].outcome}")
            return False, None

    dim = reference.rows
    gram = reference.entries.conj().T @ reference.entries
    norm = np.real(np.trace(gram)) / dim
    if not np.allclose(gram, norm * np.eye(dim), atol=FLOAT_TOLERANCE * max(norm, 1.0)):
        return False, None
    return True, FloatMatrix(reference.entries / math.sqrt(norm), FLOAT_TOLERANCE)


def instruction_to_dict(instruction: Instruction) -> dict:
    if isinstance(instruction, Gate):
        return instruction.to_dict()
    if isinstance(instruction, Prepare):
        return {"prep": instruction.aux}
    if isinstance(instruction, Measure):
        return {"meas": instruction.aux, "bit": instruction.bit}
    return {"cc": instruction.bit, "gate": instruction.gate.to_dict()}


def instruction_from_dict(data: dict) -> Instruction:
    if "prep" in data:
        return Prepare(int(data["prep"]))
    if "meas" in data:
        return Measure(int(data["meas"]), str(data["bit"]))
    if "cc" in data:
        return ClassicallyControlled(str(data["cc"]), Gate.from_dict(data["gate"]))
    return Gate.from_dict(data)


def circuit_from_records(records: Sequence[dict]) -> Union[Circuit, AuxCircuit]:
    """Build a circuit from JSON-lines records, with an optional ``{"qubits", "aux"}`` header."""
    records = list(records)
    header = records[0] if records and "qubits" in records[0] else None
    if header is not None:
        records = records[1:]
    instructions = [instruction_from_dict(record) for record in records]

    n_aux = int(header.get("aux", 0)) if header else 0
    if header is not None:
        n_qubits = int(header["qubits"])
    else:
        n_qubits = 1 + max(
            (q for i in instructions if isinstance(i, Gate) for q in i.qubits), default=-1
        )
    if n_aux or any(not isinstance(i, Gate) for i in instructions):
        return AuxCircuit(n_qubits, n_aux, instructions)
    return Circuit(n_qubits, instructions)


def circuit_to_records(c: Union[Circuit, AuxCircuit]) -> List[dict]:
    if isinstance(c, AuxCircuit):
        header = {"qubits": c.n_main, "aux": c.n_aux}
        return [header] + [instruction_to_dict(i) for i in c.instructions]
    return [{"qubits": c.n_qubits, "aux": 0}] + [gate.to_dict() for gate in c.gates]

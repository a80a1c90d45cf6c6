"""ZX-diagram intermediate representation.

A diagram is a set of nodes joined by wires. A wire end is either a `Port` on a node or a
`Boundary` slot. Spider and Hadamard legs are interchangeable, so their ports always use
``leg=0``; matrix boxes distinguish their input side (``leg=0``) from their output side
(``leg=1``).
"""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from zxlab.core.errors import ArityError, DiagramValidationError
from zxlab.core.field import FieldElement

logger = logging.getLogger(__name__)

IN = "in"
OUT = "out"


@dataclass(frozen=True)
class DyadicPhase:
    """The angle ``num·π / 2**k``, kept reduced mod 2π with `k` minimal."""

    num: int = 0
    k: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"Phase exponent must be non-negative (received {self.k}).")
        num, k = self.num % 2 ** (self.k + 1), self.k
        while k > 0 and num % 2 == 0:
            num, k = num // 2, k - 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "k", k)

    def __add__(self, other: "DyadicPhase") -> "DyadicPhase":
        k = max(self.k, other.k)
        return DyadicPhase(
            self.num * 2 ** (k - self.k) + other.num * 2 ** (k - other.k),
            k,
        )

    def __neg__(self) -> "DyadicPhase":
        return DyadicPhase(-self.num, self.k)

    def __sub__(self, other: "DyadicPhase") -> "DyadicPhase":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.num == 0

    @property
    def radians(self) -> float:
        return self.num * math.pi / 2**self.k

    def to_field(self) -> FieldElement:
        """exp(i·angle) as an exact field element."""
        return FieldElement.from_dyadic_phase(self.num, self.k)

    def to_dict(self) -> dict:
        return {"num": self.num, "k": self.k}

    @classmethod
    def from_dict(cls, data: dict) -> "DyadicPhase":
        return cls(int(data["num"]), int(data["k"]))

    def __str__(self):
        if self.num == 0:
            return "0"
        return f"{self.num}π/{2 ** self.k}" if self.k else "π"


ZERO = DyadicPhase(0, 0)
PI = DyadicPhase(1, 0)
HALF_PI = DyadicPhase(1, 1)
QUARTER_PI = DyadicPhase(1, 2)


class NodeKind(str, Enum):
    Z = "Z"
    X = "X"
    H = "H"
    MATRIX = "M"

    @property
    def is_spider(self) -> bool:
        return self in (NodeKind.Z, NodeKind.X)


@dataclass(frozen=True)
class Node:
    """A generator of the diagram.

    Args:
        id: Unique node identifier within its diagram.
        kind: Z or X spider, Hadamard box, or matrix box.
        phase: Spider phase (ignored for boxes).
        matrix: Row-major 2x2 complex matrix of a matrix box, mapping its leg-0 side to its leg-1
            side.
    """

    id: int
    kind: NodeKind
    phase: DyadicPhase = ZERO
    matrix: Optional[Tuple[complex, complex, complex, complex]] = None


@dataclass(frozen=True)
class Port:
    node: int
    leg: int = 0


@dataclass(frozen=True)
class Boundary:
    side: str
    index: int


Endpoint = Union[Port, Boundary]
Wire = Tuple[Endpoint, Endpoint]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass
class Diagram:
    """Nodes, wires and the number of input and output boundary slots.

    Diagrams are built with `add_node` / `add_wire` and treated as values afterwards: every
    operation in this package returns a new diagram.
    """

    nodes: Dict[int, Node] = field(default_factory=dict)
    wires: List[Wire] = field(default_factory=list)
    n_inputs: int = 0
    n_outputs: int = 0

    @property
    def inputs(self) -> List[Boundary]:
        return [Boundary(IN, i) for i in range(self.n_inputs)]

    @property
    def outputs(self) -> List[Boundary]:
        return [Boundary(OUT, i) for i in range(self.n_outputs)]

    def next_id(self) -> int:
        return max(self.nodes, default=-1) + 1

    def add_node(
        self,
        kind: NodeKind,
        phase: DyadicPhase = ZERO,
        matrix: Optional[Sequence[complex]] = None,
    ) -> int:
        node_id = self.next_id()
        if matrix is not None:
            matrix = tuple(complex(value) for value in matrix)
        self.nodes[node_id] = Node(node_id, NodeKind(kind), phase, matrix)
        return node_id

    def add_wire(self, a: Union[Endpoint, int], b: Union[Endpoint, int]):
        """Join two endpoints; bare integers are ports on spider or Hadamard nodes."""
        self.wires.append((_as_endpoint(a), _as_endpoint(b)))

    def copy(self) -> "Diagram":
        return Diagram(dict(self.nodes), list(self.wires), self.n_inputs, self.n_outputs)

    def degree(self, node_id: int) -> int:
        return sum(_touches(end, node_id) for wire in self.wires for end in wire)

    def degrees(self) -> Dict[int, int]:
        degrees = {node_id: 0 for node_id in self.nodes}
        for wire in self.wires:
            for end in wire:
                if isinstance(end, Port) and end.node in degrees:
                    degrees[end.node] += 1
        return degrees

    def neighbours(self, node_id: int) -> List[Tuple[int, Endpoint]]:
        """(wire index, far endpoint) for every wire end on `node_id`."""
        found = []
        for index, (a, b) in enumerate(self.wires):
            if _touches(a, node_id):
                found.append((index, b))
            if _touches(b, node_id):
                found.append((index, a))
        return found

    def has_matrix_boxes(self) -> bool:
        return any(node.kind is NodeKind.MATRIX for node in self.nodes.values())

    def relabel(self, offset: int) -> "Diagram":
        """Shift every node id by `offset`."""
        return Diagram(
            {
                node_id + offset: replace(node, id=node_id + offset)
                for node_id, node in self.nodes.items()
            },
            [(_shift_port(a, offset), _shift_port(b, offset)) for a, b in self.wires],
            self.n_inputs,
            self.n_outputs,
        )

    def to_dict(self) -> dict:
        nodes = []
        for node in sorted(self.nodes.values(), key=lambda n: n.id):
            record = {"id": node.id, "kind": node.kind.value}
            if node.kind.is_spider:
                record["phase"] = node.phase.to_dict()
            if node.kind is NodeKind.MATRIX:
                record["matrix"] = [[value.real, value.imag] for value in node.matrix]
            nodes.append(record)
        return {
            "inputs": list(range(self.n_inputs)),
            "outputs": list(range(self.n_outputs)),
            "nodes": nodes,
            "wires": [
                [_endpoint_to_dict(a, self), _endpoint_to_dict(b, self)] for a, b in self.wires
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Diagram":
        nodes, violations = {}, []
        for record in data.get("nodes", []):
            node_id = int(record["id"])
            if node_id in nodes:
                violations.append(Violation("duplicate-id", f"Node id {node_id} used twice."))
                continue
            matrix = record.get("matrix")
            if matrix is not None:
                matrix = tuple(complex(re, im) for re, im in matrix)
            phase = DyadicPhase.from_dict(record["phase"]) if "phase" in record else ZERO
            nodes[node_id] = Node(node_id, NodeKind(record["kind"]), phase, matrix)
        if violations:
            raise DiagramValidationError(violations)

        inputs, outputs = list(data.get("inputs", [])), list(data.get("outputs", []))
        for side, slots in ((IN, inputs), (OUT, outputs)):
            if slots != list(range(len(slots))):
                raise DiagramValidationError(
                    [Violation("boundary-out-of-range", f"{side} slots must be 0..k-1 ({slots}).")]
                )
        wires = [(_endpoint_from_dict(a), _endpoint_from_dict(b)) for a, b in data.get("wires", [])]
        return cls(nodes, wires, len(inputs), len(outputs))


def _as_endpoint(end: Union[Endpoint, int]) -> Endpoint:
    if isinstance(end, (Port, Boundary)):
        return end
    return Port(int(end))


def _touches(end: Endpoint, node_id: int) -> bool:
    return isinstance(end, Port) and end.node == node_id


def _shift_port(end: Endpoint, offset: int) -> Endpoint:
    return Port(end.node + offset, end.leg) if isinstance(end, Port) else end


def _endpoint_to_dict(end: Endpoint, diagram: Diagram) -> dict:
    if isinstance(end, Boundary):
        return {"boundary": end.side, "index": end.index}
    node = diagram.nodes.get(end.node)
    if node is not None and node.kind is NodeKind.MATRIX:
        return {"node": end.node, "leg": end.leg}
    return {"node": end.node}


def _endpoint_from_dict(data: dict) -> Endpoint:
    if "boundary" in data:
        return Boundary(str(data["boundary"]), int(data["index"]))
    return Port(int(data["node"]), int(data.get("leg", 0)))


# Constructors for the small diagrams everything else is assembled from


def spider(
    kind: NodeKind, phase: DyadicPhase = ZERO, n_inputs: int = 1, n_outputs: int = 1
) -> Diagram:
    d = Diagram(n_inputs=n_inputs, n_outputs=n_outputs)
    node = d.add_node(kind, phase)
    for i in range(n_inputs):
        d.add_wire(Boundary(IN, i), node)
    for i in range(n_outputs):
        d.add_wire(node, Boundary(OUT, i))
    return d


def hadamard() -> Diagram:
    d = Diagram(n_inputs=1, n_outputs=1)
    node = d.add_node(NodeKind.H)
    d.add_wire(Boundary(IN, 0), node)
    d.add_wire(node, Boundary(OUT, 0))
    return d


def matrix_box(matrix: Sequence[Sequence[complex]]) -> Diagram:
    """A 1->1 diagram holding an arbitrary 2x2 matrix (float evaluation only)."""
    d = Diagram(n_inputs=1, n_outputs=1)
    node = d.add_node(NodeKind.MATRIX, matrix=[complex(v) for row in matrix for v in row])
    d.add_wire(Boundary(IN, 0), Port(node, 0))
    d.add_wire(Port(node, 1), Boundary(OUT, 0))
    return d


def identity(n_wires: int) -> Diagram:
    d = Diagram(n_inputs=n_wires, n_outputs=n_wires)
    for i in range(n_wires):
        d.add_wire(Boundary(IN, i), Boundary(OUT, i))
    return d


def cnot() -> Diagram:
    """Z copy on the control (wire 0) joined to an X spider on the target (wire 1)."""
    d = Diagram(n_inputs=2, n_outputs=2)
    control = d.add_node(NodeKind.Z)
    target = d.add_node(NodeKind.X)
    d.add_wire(Boundary(IN, 0), control)
    d.add_wire(control, Boundary(OUT, 0))
    d.add_wire(Boundary(IN, 1), target)
    d.add_wire(target, Boundary(OUT, 1))
    d.add_wire(control, target)
    return d


def cz() -> Diagram:
    """Two Z spiders joined through a Hadamard box."""
    d = Diagram(n_inputs=2, n_outputs=2)
    top = d.add_node(NodeKind.Z)
    bottom = d.add_node(NodeKind.Z)
    h = d.add_node(NodeKind.H)
    d.add_wire(Boundary(IN, 0), top)
    d.add_wire(top, Boundary(OUT, 0))
    d.add_wire(Boundary(IN, 1), bottom)
    d.add_wire(bottom, Boundary(OUT, 1))
    d.add_wire(top, h)
    d.add_wire(h, bottom)
    return d


# Operations


def compose(first: Diagram, second: Diagram) -> Diagram:
    """Feed the outputs of `first` into the inputs of `second` (matrix product second·first).

    Joining wires can close loops. A wire that would run from a node back to itself is routed
    through a phase-free Z spider, and a loop through no nodes at all becomes an isolated
    phase-free Z spider, whose value is 2. Both are exact and leave no self-loops behind.
    """
    if first.n_outputs != second.n_inputs:
        raise ArityError(
            f"Cannot compose: {first.n_outputs} outputs into {second.n_inputs} inputs."
        )
    second = second.relabel(first.next_id())
    result = Diagram(dict(first.nodes), [], first.n_inputs, second.n_outputs)
    result.nodes.update(second.nodes)

    # Middle slots appear exactly twice: once as an output of `first`, once as an input of
    # `second`. Chains of wires through them collapse into a single wire.
    wires: List[List[Endpoint]] = []
    for a, b in first.wires:
        wires.append([_to_middle(a, OUT), _to_middle(b, OUT)])
    for a, b in second.wires:
        wires.append([_to_middle(a, IN), _to_middle(b, IN)])

    by_middle: Dict[int, List[Tuple[int, int]]] = {}
    for index, ends in enumerate(wires):
        for position, end in enumerate(ends):
            if isinstance(end, _Middle):
                by_middle.setdefault(end.index, []).append((index, position))

    def follow(index: int, end: Endpoint, visited: set) -> Tuple[int, Endpoint]:
        while isinstance(end, _Middle):
            index, position = next((i, p) for i, p in by_middle[end.index] if i != index)
            visited.add(index)
            end = wires[index][1 - position]
        return index, end

    visited = set()
    for index, ends in enumerate(wires):
        if index in visited:
            continue
        for position in (0, 1):
            if not isinstance(ends[position], _Middle):
                break
        else:
            continue
        visited.add(index)
        start = ends[position]
        _, end = follow(index, ends[1 - position], visited)
        if isinstance(start, Port) and isinstance(end, Port) and start.node == end.node:
            through = result.add_node(NodeKind.Z)
            result.add_wire(start, through)
            result.add_wire(through, end)
            logger.debug(f"Composition loop on node {start.node} routed through {through}")
        else:
            result.add_wire(start, end)

    # What is left are loops through middle slots only
    closed = 0
    for first_index, ends in enumerate(wires):
        if first_index in visited:
            continue
        visited.add(first_index)
        index, end = first_index, ends[1]
        while True:
            index, position = next((i, p) for i, p in by_middle[end.index] if i != index)
            if index == first_index:
                break
            visited.add(index)
            end = wires[index][1 - position]
        result.add_node(NodeKind.Z)
        closed += 1
    if closed:
        logger.debug(f"Composition closed {closed} loops with no nodes on them")
    return result


@dataclass(frozen=True)
class _Middle:
    index: int


def _to_middle(end: Endpoint, side: str) -> Union[Endpoint, _Middle]:
    if isinstance(end, Boundary) and end.side == side:
        return _Middle(end.index)
    return end


def tensor(top: Diagram, bottom: Diagram) -> Diagram:
    """Stack `top` above `bottom`; boundary lists concatenate."""
    bottom = bottom.relabel(top.next_id())
    shift = {IN: top.n_inputs, OUT: top.n_outputs}

    def shifted(end: Endpoint) -> Endpoint:
        if isinstance(end, Boundary):
            return Boundary(end.side, end.index + shift[end.side])
        return end

    nodes = dict(top.nodes)
    nodes.update(bottom.nodes)
    wires = list(top.wires) + [(shifted(a), shifted(b)) for a, b in bottom.wires]
    return Diagram(nodes, wires, top.n_inputs + bottom.n_inputs, top.n_outputs + bottom.n_outputs)


def compose_all(diagrams: Iterable[Diagram]) -> Diagram:
    """Compose left to right: the first diagram is applied first."""
    diagrams = list(diagrams)
    if not diagrams:
        raise ValueError("Nothing to compose.")
    result = diagrams[0]
    for d in diagrams[1:]:
        result = compose(result, d)
    return result


def adjoint(d: Diagram) -> Diagram:
    """Mirror image: boundaries swap sides, phases negate, matrix boxes take their dagger."""

    def mirrored(end: Endpoint) -> Endpoint:
        if isinstance(end, Boundary):
            return Boundary(OUT if end.side == IN else IN, end.index)
        if d.nodes[end.node].kind is NodeKind.MATRIX:
            return Port(end.node, 1 - end.leg)
        return end

    nodes = {}
    for node_id, node in d.nodes.items():
        if node.kind.is_spider:
            node = replace(node, phase=-node.phase)
        elif node.kind is NodeKind.MATRIX:
            m00, m01, m10, m11 = node.matrix
            node = replace(
                node,
                matrix=(m00.conjugate(), m10.conjugate(), m01.conjugate(), m11.conjugate()),
            )
        nodes[node_id] = node
    return Diagram(nodes, [(mirrored(a), mirrored(b)) for a, b in d.wires], d.n_outputs, d.n_inputs)


def validate(d: Diagram) -> List[Violation]:
    """Every structural problem with `d`; an empty list means the diagram is well formed."""
    violations = []
    slot_uses = {(IN, i): 0 for i in range(d.n_inputs)}
    slot_uses.update({(OUT, i): 0 for i in range(d.n_outputs)})
    matrix_legs: Dict[int, List[int]] = {
        node_id: [] for node_id, node in d.nodes.items() if node.kind is NodeKind.MATRIX
    }

    for node_id, node in d.nodes.items():
        if node.id != node_id:
            violations.append(Violation("duplicate-id", f"Node {node.id} stored under {node_id}."))
        if node.kind is NodeKind.MATRIX and (node.matrix is None or len(node.matrix) != 4):
            violations.append(Violation("matrix-arity", f"Matrix box {node_id} needs 4 entries."))

    for index, (a, b) in enumerate(d.wires):
        for end in (a, b):
            if isinstance(end, Boundary):
                key = (end.side, end.index)
                if key not in slot_uses:
                    violations.append(
                        Violation("boundary-out-of-range", f"Wire {index} uses slot {key}.")
                    )
                else:
                    slot_uses[key] += 1
                continue
            node = d.nodes.get(end.node)
            if node is None:
                violations.append(Violation("unknown-node", f"Wire {index} uses node {end.node}."))
            elif node.kind is NodeKind.MATRIX:
                if end.leg not in (0, 1):
                    violations.append(Violation("matrix-leg", f"Wire {index} uses leg {end.leg}."))
                else:
                    matrix_legs[end.node].append(end.leg)
            elif end.leg != 0:
                violations.append(Violation("matrix-leg", f"Wire {index} has a leg on {end.node}."))
        if isinstance(a, Port) and isinstance(b, Port) and a.node == b.node:
            violations.append(Violation("self-loop", f"Wire {index} loops on node {a.node}."))

    for (side, slot), uses in slot_uses.items():
        if uses == 0:
            violations.append(Violation("boundary-unwired", f"Slot {side} {slot} has no wire."))
        elif uses > 1:
            violations.append(
                Violation("boundary-multiwired", f"Slot {side} {slot} has {uses} wires.")
            )

    degrees = d.degrees()
    for node_id, node in d.nodes.items():
        if node.kind is NodeKind.H and degrees[node_id] != 2:
            violations.append(
                Violation("hbox-arity", f"Hadamard box {node_id} has degree {degrees[node_id]}.")
            )
        if node.kind is NodeKind.MATRIX and sorted(matrix_legs[node_id]) != [0, 1]:
            violations.append(
                Violation("matrix-arity", f"Matrix box {node_id} legs {matrix_legs[node_id]}.")
            )

    return violations


def check_valid(d: Diagram):
    violations = validate(d)
    if violations:
        for violation in violations:
            logger.error(f"{violation.code}: {violation.message}")
        raise DiagramValidationError(violations)

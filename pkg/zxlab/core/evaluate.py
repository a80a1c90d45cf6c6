"""Contraction of ZX-diagrams into the matrices they denote.

Every node becomes a tensor with one axis per wire end. Axes are labelled by the wire they
belong to, or by the boundary slot when the wire is open, so contracting two tensors sums over
the labels they share. Exact mode works on object arrays of `FieldElement`; float mode works on
``complex128`` arrays and carries an entrywise bound on the absolute error alongside them.
"""
import logging
import os
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Hashable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from zxlab.core.diagram import Boundary, Diagram, IN, Node, NodeKind, OUT, check_valid
from zxlab.core.errors import ArityError, ExactModeError, SizeCapExceeded
from zxlab.core.field import FieldElement
from zxlab.globals import DEFAULT_SIZE_CAP, SIZE_CAP_ENV

logger = logging.getLogger(__name__)

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

_UNIT_ROUNDOFF = np.finfo(float).eps / 2

Label = Hashable

_to_float = np.frompyfunc(lambda x: x.to_float()[0], 1, 1)
_to_float_bound = np.frompyfunc(lambda x: x.to_float()[1], 1, 1)
_conj = np.frompyfunc(lambda x: x.conj(), 1, 1)
_coerce = np.frompyfunc(
    lambda x: x if isinstance(x, FieldElement) else FieldElement._coerce(x), 1, 1
)


def resolve_size_cap(size_cap: Optional[int] = None) -> int:
    """Explicit cap, else the ZXLAB_SIZE_CAP environment variable, else the default."""
    if size_cap is not None:
        return int(size_cap)
    env_value = os.environ.get(SIZE_CAP_ENV)
    if env_value is None or env_value == "":
        return DEFAULT_SIZE_CAP
    try:
        return int(env_value)
    except ValueError as exc:
        raise ValueError(f"{SIZE_CAP_ENV} must be an integer (received {env_value!r}).") from exc


def _gamma(k: int) -> float:
    """Relative error allowance for a length-k sum of complex products."""
    return 4 * (k + 2) * _UNIT_ROUNDOFF


class ExactMatrix:
    """A 2^out x 2^in matrix of field elements."""

    def __init__(self, entries):
        entries = np.asarray(entries, dtype=object)
        if entries.ndim != 2:
            raise ArityError(f"Matrix entries must be 2-dimensional (shape {entries.shape}).")
        self.entries = np.asarray(_coerce(entries), dtype=object).reshape(entries.shape)

    @classmethod
    def identity(cls, dim: int) -> "ExactMatrix":
        entries = np.full((dim, dim), FieldElement.zero(), dtype=object)
        for i in range(dim):
            entries[i, i] = FieldElement.one()
        return cls(entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __getitem__(self, index):
        return self.entries[index]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ArityError(f"Cannot multiply {self.shape} by {other.shape}.")
        return ExactMatrix(self.entries.dot(other.entries))

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        product = self.entries[:, None, :, None] * other.entries[None, :, None, :]
        return ExactMatrix(product.reshape(self.rows * other.rows, self.cols * other.cols))

    def dagger(self) -> "ExactMatrix":
        return ExactMatrix(np.asarray(_conj(self.entries), dtype=object).T)

    def scale(self, scalar) -> "ExactMatrix":
        return ExactMatrix(self.entries * FieldElement._coerce(scalar))

    def trace(self) -> FieldElement:
        return sum(self.entries.diagonal(), FieldElement.zero())

    def is_zero(self) -> bool:
        return not any(bool(x) for x in self.entries.flat)

    def to_float(self) -> "FloatMatrix":
        values = np.asarray(_to_float(self.entries), dtype=complex).reshape(self.shape)
        bounds = np.asarray(_to_float_bound(self.entries), dtype=float).reshape(self.shape)
        return FloatMatrix(values, float(np.linalg.norm(bounds)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for a, b in zip(self.entries.flat, other.entries.flat)
        )

    def __repr__(self) -> str:
        rows = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)
        return f"ExactMatrix([{rows}])"


class FloatMatrix:
    """A complex matrix with a bound on its distance (operator norm) from the true value."""

    def __init__(self, entries, error_bound: float = 0.0):
        entries = np.asarray(entries, dtype=complex)
        if entries.ndim != 2:
            raise ArityError(f"Matrix entries must be 2-dimensional (shape {entries.shape}).")
        self.entries = entries
        self.error_bound = float(error_bound)

    @classmethod
    def identity(cls, dim: int) -> "FloatMatrix":
        return cls(np.eye(dim, dtype=complex))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __getitem__(self, index):
        return self.entries[index]

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def __matmul__(self, other: "FloatMatrix") -> "FloatMatrix":
        if self.cols != other.rows:
            raise ArityError(f"Cannot multiply {self.shape} by {other.shape}.")
        norm_a, norm_b = self.norm(), other.norm()
        bound = (
            norm_a * other.error_bound
            + self.error_bound * norm_b
            + self.error_bound * other.error_bound
            + _gamma(self.cols) * norm_a * norm_b
        )
        return FloatMatrix(self.entries @ other.entries, bound)

    def kron(self, other: "FloatMatrix") -> "FloatMatrix":
        norm_a, norm_b = self.norm(), other.norm()
        bound = (
            norm_a * other.error_bound
            + self.error_bound * norm_b
            + self.error_bound * other.error_bound
            + _gamma(1) * norm_a * norm_b
        )
        return FloatMatrix(np.kron(self.entries, other.entries), bound)

    def dagger(self) -> "FloatMatrix":
        return FloatMatrix(self.entries.conj().T, self.error_bound)

    def scale(self, scalar: complex) -> "FloatMatrix":
        scalar = complex(scalar)
        bound = abs(scalar) * (self.error_bound + _gamma(1) * self.norm())
        return FloatMatrix(self.entries * scalar, bound)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_zero(self) -> bool:
        return self.norm() <= self.error_bound

    def to_float(self) -> "FloatMatrix":
        return self

    def __repr__(self) -> str:
        return f"FloatMatrix({self.entries!r}, error_bound={self.error_bound:.3e})"


Matrix = Union[ExactMatrix, FloatMatrix]


def _hadamard_exact() -> np.ndarray:
    half = FieldElement.inv_sqrt2()
    return np.array([[half, half], [half, -half]], dtype=object)


def node_tensor(node: Node, degree: int, mode: str = EXACT) -> np.ndarray:
    """The tensor of `node` with `degree` axes.

    Z spiders are 1 on the all-0 entry, e^{iα} on the all-1 entry and 0 elsewhere. X spiders are
    the Z tensor with a Hadamard applied on every axis. Matrix boxes index their axes
    (input side, output side).
    """
    if mode not in MODES:
        raise ValueError(f"Invalid mode ({mode}), must be one of {MODES}.")
    if node.kind is NodeKind.MATRIX:
        if mode == EXACT:
            raise ExactModeError(f"Matrix box {node.id} has no exact semantics.")
        return np.array(node.matrix, dtype=complex).reshape(2, 2).T
    tensor = _exact_node_tensor(node, degree)
    if mode == FLOAT:
        return np.asarray(_to_float(tensor), dtype=complex).reshape(tensor.shape)
    return tensor


def _exact_node_tensor(node: Node, degree: int) -> np.ndarray:
    if node.kind is NodeKind.H:
        return _hadamard_exact()

    tensor = np.full((2,) * degree, FieldElement.zero(), dtype=object)
    phase = node.phase.to_field()
    if degree == 0:
        tensor[()] = FieldElement.one() + phase
        return tensor
    tensor[(0,) * degree] = FieldElement.one()
    tensor[(1,) * degree] = phase

    if node.kind is NodeKind.X:
        hadamard = _hadamard_exact()
        for axis in range(degree):
            tensor = np.moveaxis(np.tensordot(hadamard, tensor, axes=([1], [axis])), 0, axis)
    return tensor


def _float_node_tensor(node: Node, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    if node.kind is NodeKind.MATRIX:
        values = node_tensor(node, degree, FLOAT)
        return values, np.zeros(values.shape)
    exact = _exact_node_tensor(node, degree)
    values = np.asarray(_to_float(exact), dtype=complex).reshape(exact.shape)
    errors = np.asarray(_to_float_bound(exact), dtype=float).reshape(exact.shape)
    return values, errors


def _network_labels(d: Diagram) -> Tuple[List[Optional[Node]], List[List[Label]]]:
    """Tensor sources (a node, or None for a bare boundary-to-boundary wire) and axis labels."""
    sources, labels = [], []
    for node_id in sorted(d.nodes):
        node = d.nodes[node_id]
        axes = []
        for index, far in d.neighbours(node_id):
            label = far if isinstance(far, Boundary) else ("wire", index)
            near = d.wires[index][0] if d.wires[index][1] is far else d.wires[index][1]
            axes.append((near.leg if node.kind is NodeKind.MATRIX else 0, label))
        if node.kind is NodeKind.MATRIX:
            axes.sort(key=lambda axis: axis[0])
        sources.append(node)
        labels.append([label for _, label in axes])
    for a, b in d.wires:
        if isinstance(a, Boundary) and isinstance(b, Boundary):
            sources.append(None)
            labels.append([a, b])
    return sources, labels


def _merged_labels(left: Sequence[Label], right: Sequence[Label]) -> List[Label]:
    return [l for l in left if l not in right] + [l for l in right if l not in left]


@dataclass
class ContractionPlan:
    """Pairwise contractions in order.

    Tensors are numbered in static single assignment style: the initial tensors are
    ``0..tensor_count-1`` and step ``i`` produces tensor ``tensor_count + i``.
    """

    steps: List[Tuple[int, int]]
    tensor_count: int
    max_size: int
    max_rank: int


def _simulate(labels: List[List[Label]], steps: Sequence[Tuple[int, int]]) -> ContractionPlan:
    alive = {i: list(l) for i, l in enumerate(labels)}
    max_rank = max((len(l) for l in labels), default=0)
    next_id = len(labels)
    for a, b in steps:
        if a not in alive or b not in alive or a == b:
            raise ValueError(f"Invalid contraction step ({a}, {b}).")
        merged = _merged_labels(alive.pop(a), alive.pop(b))
        alive[next_id] = merged
        max_rank = max(max_rank, len(merged))
        next_id += 1
    if len(alive) > 1:
        raise ValueError(f"Plan leaves {len(alive)} tensors uncontracted.")
    return ContractionPlan(list(steps), len(labels), 2**max_rank, max_rank)


def _greedy_steps(labels: List[List[Label]]) -> List[Tuple[int, int]]:
    tensor_count = len(labels)
    alive = {i: list(l) for i, l in enumerate(labels)}
    graph = nx.Graph()
    graph.add_nodes_from(alive)
    owners = {}
    for i, tensor_labels in alive.items():
        for label in tensor_labels:
            if not isinstance(label, Boundary):
                owners.setdefault(label, []).append(i)
    for pair in owners.values():
        if len(pair) == 2:
            graph.add_edge(*pair)

    heap = []

    def push(a: int, b: int):
        merged = _merged_labels(alive[a], alive[b])
        cost = 2 ** len(merged) - 2 ** len(alive[a]) - 2 ** len(alive[b])
        fresh = 0 if max(a, b) >= tensor_count else 1
        heappush(heap, (cost, fresh, min(a, b), max(a, b)))

    for a, b in graph.edges:
        push(a, b)

    steps, next_id = [], tensor_count
    while heap:
        _, _, a, b = heappop(heap)
        if a not in alive or b not in alive:
            continue
        alive[next_id] = _merged_labels(alive.pop(a), alive.pop(b))
        neighbours = (set(graph[a]) | set(graph[b])) - {a, b}
        graph.remove_nodes_from([a, b])
        graph.add_node(next_id)
        for neighbour in neighbours:
            graph.add_edge(next_id, neighbour)
            push(next_id, neighbour)
        steps.append((a, b))
        next_id += 1

    # Disconnected pieces: outer products, smallest first
    while len(alive) > 1:
        a, b = sorted(alive, key=lambda i: (len(alive[i]), i))[:2]
        alive[next_id] = _merged_labels(alive.pop(a), alive.pop(b))
        steps.append((min(a, b), max(a, b)))
        next_id += 1
    return steps


def plan_contraction(d: Diagram) -> ContractionPlan:
    """Greedy pairwise order: cheapest size change first, preferring freshly built tensors."""
    _, labels = _network_labels(d)
    plan = _simulate(labels, _greedy_steps(labels))
    logger.info(
        f"Planned {len(plan.steps)} contractions over {plan.tensor_count} tensors "
        f"(largest {plan.max_size} entries)"
    )
    return plan


def _pair(left: np.ndarray, right: np.ndarray, axes: Tuple[List[int], List[int]], dtype):
    if axes[0]:
        return np.tensordot(left, right, axes=axes)
    return np.asarray(np.multiply.outer(left, right), dtype=dtype)


def contract(
    d: Diagram,
    mode: str = EXACT,
    size_cap: Optional[int] = None,
    plan: Optional[ContractionPlan] = None,
) -> Matrix:
    """The operator `d` denotes, exactly or with a certified float error bound."""
    if mode not in MODES:
        raise ValueError(f"Invalid mode ({mode}), must be one of {MODES}.")
    check_valid(d)
    if mode == EXACT and d.has_matrix_boxes():
        raise ExactModeError("Diagram contains matrix boxes; use float mode.")

    sources, labels = _network_labels(d)
    plan = plan_contraction(d) if plan is None else _simulate(labels, plan.steps)
    cap = resolve_size_cap(size_cap)
    if plan.max_size > cap:
        logger.error(f"Contraction needs a tensor of {plan.max_size} entries (cap {cap})")
        raise SizeCapExceeded(plan.max_size, cap)

    dtype = object if mode == EXACT else complex
    tensors, errors = [], []
    for source, tensor_labels in zip(sources, labels):
        degree = len(tensor_labels)
        if source is None:
            values = np.eye(2, dtype=complex)
            if mode == EXACT:
                values = ExactMatrix.identity(2).entries
            tensors.append(values)
            errors.append(np.zeros((2, 2)))
        elif mode == EXACT:
            tensors.append(_exact_node_tensor(source, degree))
        else:
            values, error = _float_node_tensor(source, degree)
            tensors.append(values)
            errors.append(error)

    labels = [list(l) for l in labels]
    for a, b in plan.steps:
        shared = [l for l in labels[a] if l in labels[b]]
        axes = ([labels[a].index(l) for l in shared], [labels[b].index(l) for l in shared])
        tensors.append(_pair(tensors[a], tensors[b], axes, dtype))
        if mode == FLOAT:
            abs_a, abs_b = np.abs(tensors[a]), np.abs(tensors[b])
            errors.append(
                _pair(abs_a, errors[b], axes, float)
                + _pair(errors[a], abs_b, axes, float)
                + _pair(errors[a], errors[b], axes, float)
                + _gamma(2 ** len(shared)) * _pair(abs_a, abs_b, axes, float)
            )
            errors[a] = errors[b] = None
        labels.append(_merged_labels(labels[a], labels[b]))
        tensors[a] = tensors[b] = None

    if tensors:
        result, result_labels = tensors[-1], labels[-1]
        result_errors = errors[-1] if mode == FLOAT else None
    else:
        result, result_labels = np.asarray(FieldElement.one() if mode == EXACT else 1.0 + 0j), []
        result_errors = np.zeros(())

    order = [result_labels.index(Boundary(OUT, i)) for i in range(d.n_outputs)]
    order += [result_labels.index(Boundary(IN, i)) for i in range(d.n_inputs)]
    shape = (2**d.n_outputs, 2**d.n_inputs)
    result = np.transpose(result, order).reshape(shape)
    if mode == EXACT:
        return ExactMatrix(result)
    bound = float(np.linalg.norm(np.transpose(result_errors, order)))
    return FloatMatrix(result, bound)

import numpy as np
import pytest

from zxlab.core.circuits import Circuit, cnot_gate, h_gate, z_gate
from zxlab.core.diagram import IN, OUT, Boundary, Diagram, DyadicPhase, NodeKind
from zxlab.core.field import FieldElement
from zxlab.core.formula import And, BoolFormula, Not, Or, Var, conjunction


@pytest.fixture
def rng():
    return np.random.default_rng(7919)


@pytest.fixture
def random_field_element(rng):
    def make(max_order: int = 16, max_coeff: int = 5) -> FieldElement:
        order = int(2 ** rng.integers(1, int(np.log2(max_order)) + 1))
        coeffs = rng.integers(-max_coeff, max_coeff + 1, size=order // 2)
        denom = int(2 ** rng.integers(0, 4))
        return FieldElement(order, coeffs.tolist(), denom)

    return make


@pytest.fixture
def random_phase(rng):
    def make(max_k: int = 2) -> DyadicPhase:
        k = int(rng.integers(0, max_k + 1))
        return DyadicPhase(int(rng.integers(0, 2 ** (k + 1))), k)

    return make


@pytest.fixture
def random_formula(rng):
    def expr(n_vars, n_ops):
        if n_ops == 0:
            return Var(int(rng.integers(0, n_vars)))
        kind = rng.choice(["not", "and", "or"])
        if kind == "not":
            return Not(expr(n_vars, n_ops - 1))
        left_ops = int(rng.integers(0, n_ops))
        left, right = expr(n_vars, left_ops), expr(n_vars, n_ops - 1 - left_ops)
        return And(left, right) if kind == "and" else Or(left, right)

    def make(n_vars: int, n_ops: int) -> BoolFormula:
        return BoolFormula(n_vars, expr(n_vars, n_ops))

    return make


@pytest.fixture
def planted_unique(rng):
    """Conjunction of one literal per variable: exactly one satisfying assignment."""

    def make(n_vars: int) -> BoolFormula:
        bits = rng.integers(0, 2, size=n_vars)
        literals = [Var(i) if bit else Not(Var(i)) for i, bit in enumerate(bits)]
        return BoolFormula(n_vars, conjunction(literals))

    return make


@pytest.fixture
def random_circuit(rng, random_phase):
    def make(n_qubits: int, depth: int) -> Circuit:
        gates = []
        for _ in range(depth):
            choice = rng.integers(0, 3) if n_qubits > 1 else rng.integers(0, 2)
            qubit = int(rng.integers(0, n_qubits))
            if choice == 0:
                gates.append(z_gate(qubit, random_phase(3)))
            elif choice == 1:
                gates.append(h_gate(qubit))
            else:
                target = int((qubit + rng.integers(1, n_qubits)) % n_qubits)
                gates.append(cnot_gate(qubit, target))
        return Circuit(n_qubits, gates)

    return make


@pytest.fixture
def random_diagram(rng, random_phase):
    """Small valid diagrams mixing Z and X spiders, Hadamard boxes and parallel wires."""

    def make(n_spiders: int = 5, n_edges: int = 6, n_inputs: int = 1, n_outputs: int = 1):
        d = Diagram(n_inputs=n_inputs, n_outputs=n_outputs)
        spiders = [
            d.add_node(NodeKind(rng.choice(["Z", "X"])), random_phase()) for _ in range(n_spiders)
        ]
        for i in range(n_inputs):
            d.add_wire(Boundary(IN, i), int(rng.choice(spiders)))
        for i in range(n_outputs):
            d.add_wire(int(rng.choice(spiders)), Boundary(OUT, i))
        for _ in range(n_edges):
            a, b = rng.choice(spiders, size=2, replace=False)
            if rng.random() < 0.3:
                h = d.add_node(NodeKind.H)
                d.add_wire(int(a), h)
                d.add_wire(h, int(b))
            else:
                d.add_wire(int(a), int(b))
        return d

    return make


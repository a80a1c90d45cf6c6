import json
import math

import numpy as np
import pytest

from zxlab.core.circuits import (
    AuxCircuit,
    Circuit,
    ClassicallyControlled,
    Gate,
    Measure,
    Prepare,
    SymbolicAngle,
    aux_branch_operators,
    aux_is_deterministic,
    circuit_from_records,
    circuit_matrix,
    circuit_to_diagram,
    circuit_to_records,
    cnot_gate,
    gate_matrix,
    h_gate,
    x_rotation,
    z_gate,
)
from zxlab.core.diagram import HALF_PI, PI, QUARTER_PI
from zxlab.core.errors import AuxBoundError, ExactModeError
from zxlab.core.evaluate import EXACT, FLOAT, FloatMatrix, contract
from zxlab.core.field import FieldElement
from zxlab.core.reader import read
from zxlab.core.verify import is_proportional, unitary_up_to_scalar


class TestSymbolicAngle:
    @pytest.mark.parametrize("n1, n, radians", [(0, 2, 0.0), (1, 1, math.pi / 2), (2, 1, math.pi)])
    def test_radians(self, n1, n, radians):
        assert SymbolicAngle(n1, n).radians == pytest.approx(radians)

    def test_n0(self):
        assert SymbolicAngle(3, 3).n0 == 5

    @pytest.mark.parametrize("n1, n", [(-1, 2), (5, 2), (0, 0)])
    def test_invalid(self, n1, n):
        with pytest.raises(AssertionError):
            SymbolicAngle(n1, n)

    def test_x_rotation(self):
        alpha = SymbolicAngle(1, 2).radians
        m = x_rotation(alpha)
        expected = np.array([[3, -1j], [-1j, 3]]) / np.sqrt(10)
        assert is_proportional(FloatMatrix(expected), FloatMatrix(m), tolerance=1e-12).proportional


class TestGates:
    def test_cnot_needs_control(self):
        with pytest.raises(ValueError):
            Gate("CNOT", 0)
        with pytest.raises(ValueError):
            cnot_gate(1, 1)

    def test_unknown_gate(self):
        with pytest.raises(ValueError):
            Gate("T", 0)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            Circuit(1, [h_gate(1)])

    def test_cnot_matrix_big_endian(self):
        m = gate_matrix(cnot_gate(0, 1), 2)
        # |10> -> |11>
        assert m[3, 2] == 1
        assert m[2, 2] == 0
        reversed_ = gate_matrix(cnot_gate(1, 0), 2)
        assert reversed_[3, 1] == 1

    def test_z_gate(self):
        m = gate_matrix(z_gate(0, QUARTER_PI), 1)
        assert m[1, 1] ** 8 == 1
        assert m[0, 0] == 1

    def test_circuit_matrix_order(self):
        # H then S: S·H
        c = Circuit(1, [h_gate(0), z_gate(0, HALF_PI)])
        m = circuit_matrix(c)
        r = FieldElement.inv_sqrt2()
        assert m[1, 0] == FieldElement.imag_unit() * r
        assert m[0, 1] == r

    def test_float_matches_exact(self, random_circuit):
        c = random_circuit(3, 10)
        exact_m, float_m = circuit_matrix(c, EXACT), circuit_matrix(c, FLOAT)
        assert np.allclose(exact_m.to_float().entries, float_m.entries)

    def test_symbolic_needs_float(self):
        c = Circuit(1, [h_gate(0), z_gate(0, SymbolicAngle(1, 2)), h_gate(0)])
        with pytest.raises(ExactModeError):
            circuit_matrix(c, EXACT)
        with pytest.raises(ExactModeError):
            circuit_to_diagram(c)
        expected = x_rotation(SymbolicAngle(1, 2).radians)
        assert np.allclose(circuit_matrix(c, FLOAT).entries, expected)


class TestTranslation:
    def test_bell(self):
        c = read("./tests/fixtures/circuits/bell.jsonl")
        translated = circuit_to_diagram(c)
        assert translated.scalar == FieldElement.inv_sqrt2()
        assert contract(translated.diagram) == circuit_matrix(c).scale(translated.scalar)

    @pytest.mark.slow
    def test_random_circuits(self, random_circuit, rng):
        for _ in range(100):
            c = random_circuit(int(rng.integers(1, 5)), int(rng.integers(0, 21)))
            translated = circuit_to_diagram(c)
            expected = circuit_matrix(c).scale(translated.scalar)
            assert contract(translated.diagram) == expected
            assert unitary_up_to_scalar(translated.diagram).unitary


class TestRecords:
    def test_round_trip(self):
        c = Circuit(2, [h_gate(0), cnot_gate(0, 1), z_gate(1, PI), z_gate(0, SymbolicAngle(1, 3))])
        records = json.loads(json.dumps(circuit_to_records(c)))
        assert circuit_from_records(records) == c

    def test_headerless(self):
        c = circuit_from_records([{"g": "H", "q": 2}])
        assert isinstance(c, Circuit)
        assert c.n_qubits == 3

    def test_aux_records(self):
        c = read("./tests/fixtures/circuits/copy_corrected.jsonl")
        assert isinstance(c, AuxCircuit)
        assert (c.n_main, c.n_aux) == (1, 1)
        assert circuit_from_records(circuit_to_records(c)) == c


class TestAuxCircuits:
    def test_corrected_copy_is_deterministic(self):
        c = read("./tests/fixtures/circuits/copy_corrected.jsonl")
        branches = aux_branch_operators(c)
        assert [b.outcome for b in branches] == ["0", "1"]
        assert [b.weight for b in branches] == pytest.approx([0.5, 0.5])
        first, second = branches[0].operator, branches[1].operator
        assert is_proportional(first, second, tolerance=1e-9).proportional
        deterministic, unitary = aux_is_deterministic(c)
        assert deterministic
        assert np.allclose(unitary.entries, np.eye(2))

    def test_uncorrected_copy(self):
        c = read("./tests/fixtures/circuits/copy_uncorrected.jsonl")
        deterministic, unitary = aux_is_deterministic(c)
        assert not deterministic
        assert unitary is None

    def test_plain_circuit_branch(self):
        c = AuxCircuit(1, 0, [h_gate(0)])
        (branch,) = aux_branch_operators(c)
        assert branch.outcome == ""
        assert branch.weight == pytest.approx(1.0)

    def test_reset_after_measure(self):
        c = AuxCircuit(
            1,
            1,
            [Prepare(0), h_gate(1), Measure(0, "b0"), Prepare(0), h_gate(1), Measure(0, "b1")],
        )
        branches = aux_branch_operators(c)
        assert sorted(b.outcome for b in branches) == ["00", "01", "10", "11"]
        assert sum(b.weight for b in branches) == pytest.approx(1.0)
        assert aux_is_deterministic(c)[0]

    @pytest.mark.parametrize(
        "instructions",
        [
            [h_gate(1)],
            [Prepare(0), Prepare(0)],
            [Measure(0, "b0")],
            [Prepare(0), h_gate(1)],
            [ClassicallyControlled("b0", h_gate(0))],
            [Prepare(3)],
        ],
    )
    def test_invalid(self, instructions):
        with pytest.raises(ValueError):
            AuxCircuit(1, 1, instructions)

    def test_aux_bound(self):
        with pytest.raises(AuxBoundError):
            AuxCircuit(1, 3, [], aux_bound=2)

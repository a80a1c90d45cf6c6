from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from zxlab.core.diagram import (
    HALF_PI,
    IN,
    OUT,
    QUARTER_PI,
    Boundary,
    Diagram,
    NodeKind,
    cnot,
    compose,
    hadamard,
    spider,
    tensor,
)
from zxlab.core.errors import ArityError, NotUnitaryError
from zxlab.core.evaluate import FLOAT, ExactMatrix, FloatMatrix, contract
from zxlab.core.field import FieldElement
from zxlab.core.reader import read
from zxlab.core.verify import is_proportional, sample, sample_counts, unitary_up_to_scalar

I = FieldElement.imag_unit()


def exact(rows):
    return ExactMatrix([[Fraction(x) if isinstance(x, int) else x for x in row] for row in rows])


class TestProportional:
    def test_exact(self):
        a = exact([[1, I], [0, 2]])
        proportional, witness = is_proportional(a, a.scale(3 * I))
        assert proportional
        assert witness == 3 * I

    def test_exact_not_proportional(self):
        assert not is_proportional(exact([[1, 0], [0, 1]]), exact([[1, 0], [0, -1]])).proportional
        assert not is_proportional(exact([[1, 0], [0, 1]]), exact([[1, 0], [0, 0]])).proportional

    def test_zero(self):
        zero = exact([[0, 0], [0, 0]])
        assert is_proportional(zero, zero) == (True, None)
        assert not is_proportional(zero, exact([[1, 0], [0, 0]])).proportional

    def test_phase_only(self):
        a = exact([[1, 0], [0, 1]])
        assert is_proportional(a, a.scale(QUARTER_PI.to_field()), phase_only=True).proportional
        assert not is_proportional(a, a.scale(2), phase_only=True).proportional
        assert is_proportional(a, a.scale(2)).proportional

    def test_float(self):
        a = FloatMatrix(np.array([[1, 1j], [0, 2]]))
        b = FloatMatrix(a.entries * np.exp(0.3j) * 2 + 1e-12)
        assert not is_proportional(a, b).proportional
        proportional, witness = is_proportional(a, b, tolerance=1e-9)
        assert proportional
        assert witness == pytest.approx(2 * np.exp(0.3j))

    def test_float_phase_only(self):
        a = FloatMatrix(np.eye(2))
        assert is_proportional(a, FloatMatrix(np.eye(2) * 1j), phase_only=True).proportional
        assert not is_proportional(a, FloatMatrix(np.eye(2) * 2), phase_only=True).proportional

    def test_error_bounds_count(self):
        a = FloatMatrix(np.eye(2))
        b = FloatMatrix(np.diag([1, 1 + 1e-6]), error_bound=1e-5)
        assert is_proportional(a, b).proportional

    def test_mixed(self):
        a = exact([[1, 0], [0, I]])
        b = FloatMatrix(np.diag([2, 2j]))
        assert is_proportional(a, b).proportional

    def test_shapes(self):
        with pytest.raises(ArityError):
            is_proportional(ExactMatrix.identity(2), ExactMatrix.identity(4))

    def test_t_squared_is_s(self):
        t = read("./tests/fixtures/diagrams/t_gate.json")
        s = read("./tests/fixtures/diagrams/s_gate.json")
        assert is_proportional(contract(s), contract(t), phase_only=True).proportional


class TestUnitary:
    def test_cnot(self):
        verdict = unitary_up_to_scalar(cnot())
        assert verdict.unitary
        assert verdict.scalar == Fraction(1, 2)

    def test_float_mode(self):
        verdict = unitary_up_to_scalar(cnot(), mode=FLOAT, tolerance=1e-9)
        assert verdict.unitary
        assert verdict.scalar == pytest.approx(0.5)

    def test_projector(self):
        assert unitary_up_to_scalar(read("./tests/fixtures/diagrams/projector.json")) == (
            False,
            None,
        )

    def test_not_square(self):
        assert not unitary_up_to_scalar(read("./tests/fixtures/diagrams/plus_state.json")).unitary

    def test_phases(self):
        d = compose(hadamard(), spider(NodeKind.Z, QUARTER_PI))
        assert unitary_up_to_scalar(d).unitary

    def test_cap_cup(self):
        d = Diagram(n_inputs=2, n_outputs=2)
        d.add_wire(Boundary(IN, 0), Boundary(IN, 1))
        d.add_wire(Boundary(OUT, 0), Boundary(OUT, 1))
        assert unitary_up_to_scalar(d) == (False, None)

    def test_swap(self):
        d = Diagram(n_inputs=2, n_outputs=2)
        d.add_wire(Boundary(IN, 0), Boundary(OUT, 1))
        d.add_wire(Boundary(IN, 1), Boundary(OUT, 0))
        verdict = unitary_up_to_scalar(d)
        assert verdict.unitary
        assert verdict.scalar == 1


class TestSample:
    def test_deterministic_outcome(self):
        assert set(sample(cnot(), 1, 50)) == {"00"}

    def test_reproducible(self):
        d = compose(tensor(hadamard(), hadamard()), cnot())
        first, second = sample(d, 42, 64), sample(d, 42, 64)
        assert first == second
        assert sample(d, 42, 10) == first[:10]

    def test_distribution(self):
        # H then S then H puts 1/2 on each outcome
        d = compose(compose(hadamard(), spider(NodeKind.Z, HALF_PI)), hadamard())
        counts = sample_counts(sample(d, 7, 4000))
        assert list(counts.index) == ["0", "1"]
        assert chisquare(counts.values, [2000, 2000]).pvalue > 1e-3

    def test_bell_distribution(self):
        d = compose(tensor(hadamard(), spider(NodeKind.Z)), cnot())
        counts = sample_counts(sample(d, 3, 2000))
        assert set(counts.index) == {"00", "11"}
        assert chisquare(counts.values).pvalue > 1e-3

    def test_not_unitary(self):
        projector = read("./tests/fixtures/diagrams/projector.json")
        with pytest.raises(NotUnitaryError):
            sample(projector, 1, 10)
        samples = sample(projector, 1, 10, promise_arbitrary=True)
        assert len(samples) == 10
        assert set(samples) <= {"0", "1"}

    def test_counts(self):
        counts = sample_counts(["1", "0", "1", "1"])
        assert counts.to_dict() == {"0": 1, "1": 3}

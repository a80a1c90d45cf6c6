"""Counting through circuit extraction, and deciding SAT through unitary sampling.

A hardness gadget for f is proportional to N0·I - i·N1·P. Any circuit equivalent to it reveals
the ratio N1 : N0 and therefore the model count. The oracles here extract such circuits by
brute-force contraction, which only works at desk scale.
"""
import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd

from zxlab.core.circuits import (
    AuxCircuit,
    Circuit,
    ClassicallyControlled,
    Gate,
    Measure,
    Prepare,
    SymbolicAngle,
    aux_is_deterministic,
    circuit_matrix,
    cnot_gate,
    h_gate,
    z_gate,
)
from zxlab.core.diagram import HALF_PI, PI, Diagram, DyadicPhase
from zxlab.core.errors import ArityError, SizeCapExceeded, VerificationError
from zxlab.core.evaluate import EXACT, FLOAT, ExactMatrix, Matrix, contract
from zxlab.core.field import FieldElement
from zxlab.core.formula import And, BoolFormula, Expr, Not, Or, Var, conjunction, evaluate_all
from zxlab.core.gadgets import PAULIS, hardness_gadget, sampling_gadget
from zxlab.core.verify import is_proportional, sample, unitary_up_to_scalar
from zxlab.globals import BRUTE_FORCE_MAX_VARS, DEFAULT_TRIALS, FLOAT_TOLERANCE, VV_ROUNDS_PER_VAR

logger = logging.getLogger(__name__)

EXACT_RATIO = "exact-ratio"
APPROX_ROUNDED = "approx-rounded"
BRUTE_FORCE = "brute-force"
PROVENANCES = (EXACT_RATIO, APPROX_ROUNDED, BRUTE_FORCE)


@dataclass(frozen=True)
class CountResult:
    """A model count.

    Args:
        n1: Number of satisfying assignments.
        n0: Number of falsifying assignments.
        n_vars: Number of variables.
        provenance: How the count was obtained: exact-ratio, approx-rounded or brute-force.
    """

    n1: int
    n0: int
    n_vars: int
    provenance: str

    def __post_init__(self):
        assert self.n1 >= 0, f"n1 ({self.n1}) is negative."
        assert (
            self.n0 + self.n1 == 2**self.n_vars
        ), f"n0 + n1 ({self.n0 + self.n1}) is not 2**{self.n_vars}."
        assert self.provenance in PROVENANCES, (
            f"Invalid provenance ({self.provenance}), " f"must be one of {PROVENANCES}."
        )

    def to_dict(self) -> dict:
        return asdict(self)


def brute_force_count(f: BoolFormula, max_vars: int = BRUTE_FORCE_MAX_VARS) -> CountResult:
    if f.n_vars > max_vars:
        logger.error(f"Refusing to enumerate 2**{f.n_vars} assignments")
        raise SizeCapExceeded(2**f.n_vars, 2**max_vars)
    n1 = int(np.count_nonzero(evaluate_all(f)))
    return CountResult(n1, 2**f.n_vars - n1, f.n_vars, BRUTE_FORCE)


# Decoding


def _pauli(pauli: str, mode: str) -> Matrix:
    if pauli not in PAULIS:
        raise ValueError(f"Invalid pauli ({pauli}), must be one of {PAULIS}.")
    if mode == FLOAT:
        return {
            "x": np.array([[0, 1], [1, 0]], dtype=complex),
            "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
            "z": np.array([[1, 0], [0, -1]], dtype=complex),
        }[pauli]
    zero, one, i = FieldElement.zero(), FieldElement.one(), FieldElement.imag_unit()
    return ExactMatrix(
        {
            "x": [[zero, one], [one, zero]],
            "y": [[zero, -i], [i, zero]],
            "z": [[one, zero], [zero, -one]],
        }[pauli]
    )


def _decode_exact(m: ExactMatrix, n: int, pauli: str) -> Tuple[int, bool]:
    """N1 and whether the rotation came out mirrored (N0·I + i·N1·P)."""
    if m.shape != (2, 2):
        raise ArityError(f"Expected a 2x2 matrix, got {m.shape}.")
    p = _pauli(pauli, EXACT)
    diagonal = m.trace() * Fraction(1, 2)
    off_diagonal = (p @ m).trace() * Fraction(1, 2)
    expected = ExactMatrix(ExactMatrix.identity(2).entries * diagonal + p.entries * off_diagonal)
    if expected != m:
        raise VerificationError(f"Matrix is not in the span of I and {pauli.upper()}.")
    if diagonal.is_zero() and off_diagonal.is_zero():
        raise VerificationError("Matrix is zero.")

    total = 2**n
    if off_diagonal.is_zero():
        return 0, False
    if diagonal.is_zero():
        return total, False
    ratio = (FieldElement.imag_unit() * off_diagonal).divide(diagonal).rational_value()
    if ratio is None:
        raise VerificationError(f"N1/N0 is not rational: {m}.")
    n1 = total * abs(ratio) / (1 + abs(ratio))
    if n1.denominator != 1:
        raise VerificationError(f"N1/N0 = {abs(ratio)} admits no count over {n} variables.")
    return int(n1), ratio < 0


def decode_count_exact(m: ExactMatrix, n: int, pauli: str = "x") -> CountResult:
    """Read N1 off an exact matrix proportional to N0·I ∓ i·N1·P."""
    n1, _ = _decode_exact(m, n, pauli)
    logger.info(f"Decoded N1 = {n1} of {2 ** n}")
    return CountResult(n1, 2**n - n1, n, EXACT_RATIO)


def _rotation(pauli: str, half_angle: float) -> np.ndarray:
    return math.cos(half_angle) * np.eye(2) - 1j * math.sin(half_angle) * _pauli(pauli, FLOAT)


def _phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Operator-norm distance from `a` to e^{iθ}·b, θ aligning the two traces."""
    overlap = np.trace(b.conj().T @ a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b, 2))


def decode_count_approx(m: Matrix, n: int, pauli: str = "x") -> CountResult:
    """Round a matrix near e^{iθ}·P_α to the closest allowed count.

    Exact whenever `m` is within 2^-(n+2) in operator norm of a rotation whose half angle is
    atan2(N1, N0). Raises `VerificationError` when no allowed rotation is that close.
    """
    m = m.to_float()
    if m.shape != (2, 2):
        raise ArityError(f"Expected a 2x2 matrix, got {m.shape}.")
    total = 2**n
    cos_part = abs(np.trace(m.entries)) / 2
    sin_part = abs(np.trace(_pauli(pauli, FLOAT) @ m.entries)) / 2
    if cos_part + sin_part == 0:
        raise VerificationError("Matrix has no component along I or the rotation axis.")

    half_angle = math.atan2(sin_part, cos_part)
    nearest = round(total * sin_part / (sin_part + cos_part))
    candidates = [k for k in (nearest - 1, nearest, nearest + 1) if 0 <= k <= total]
    n1 = min(candidates, key=lambda k: abs(math.atan2(k, total - k) - half_angle))

    allowed = math.atan2(n1, total - n1)
    residual = min(
        _phase_distance(m.entries, _rotation(pauli, sign * allowed)) for sign in (1, -1)
    )
    tolerance = 3 * 2.0 ** -(n + 2) + m.error_bound
    if residual > tolerance:
        logger.error(f"Closest rotation (N1 = {n1}) is {residual:.3g} away, over {tolerance:.3g}")
        raise VerificationError(f"Matrix is {residual:.3g} from every allowed rotation.")
    logger.info(f"Rounded to N1 = {n1} of {total}, residual {residual:.3g}")
    return CountResult(n1, total - n1, n, APPROX_ROUNDED)


# Extraction oracles


def _rotation_gates(pauli: str, angle) -> List[Gate]:
    if pauli == "x":
        return [h_gate(0), z_gate(0, angle), h_gate(0)]
    if pauli == "z":
        return [z_gate(0, angle)]
    return [z_gate(0, -HALF_PI), h_gate(0), z_gate(0, angle), h_gate(0), z_gate(0, HALF_PI)]


def _flip_gates(pauli: str) -> List[Gate]:
    """A Pauli anticommuting with `pauli`; conjugating by it negates the rotation angle."""
    if pauli == "z":
        return [h_gate(0), z_gate(0, PI), h_gate(0)]
    return [z_gate(0, PI)]


def _require_one_qubit(d: Diagram):
    if d.n_inputs != 1 or d.n_outputs != 1:
        raise ArityError(f"Expected a 1->1 diagram, got {d.n_inputs}->{d.n_outputs}.")


def mock_extraction_oracle(
    d: Diagram, n: int, pauli: str = "x", size_cap: Optional[int] = None
) -> Circuit:
    """Extract a circuit over {H, Z, CNOT} plus symbolic angles for a 1->1 rotation diagram.

    Works by exact contraction. Raises `VerificationError` when `d` is not proportional to a
    unitary, or to no rotation the gate set over `n` variables can express.
    """
    _require_one_qubit(d)
    if not unitary_up_to_scalar(d, size_cap=size_cap, mode=EXACT).unitary:
        logger.error("Extraction input is not proportional to a unitary")
        raise VerificationError("Diagram is not proportional to a unitary: no such circuit exists.")

    m = contract(d, mode=EXACT, size_cap=size_cap)
    n1, mirrored = _decode_exact(m, n, pauli)
    gates = _rotation_gates(pauli, SymbolicAngle(n1, n))
    if mirrored:
        gates = _flip_gates(pauli) + gates + _flip_gates(pauli)
    circuit = Circuit(1, gates)

    proportional, _ = is_proportional(
        circuit_matrix(circuit, FLOAT), m.to_float(), tolerance=FLOAT_TOLERANCE
    )
    if not proportional:
        raise VerificationError("Extracted circuit does not reproduce the diagram.")
    logger.info(f"Extracted {len(gates)} gates with N1 = {n1}")
    return circuit


def theorem1_pipeline(
    f: BoolFormula, pauli: str = "x", size_cap: Optional[int] = None
) -> CountResult:
    """Count the models of `f` from the circuit extracted for its hardness gadget."""
    circuit = mock_extraction_oracle(hardness_gadget(f, pauli), f.n_vars, pauli, size_cap)
    (angle,) = circuit.symbolic_angles()
    return CountResult(angle.n1, angle.n0, f.n_vars, EXACT_RATIO)


def approx_extraction_oracle(
    d: Diagram, eps: float, pauli: str = "x", size_cap: Optional[int] = None
) -> Circuit:
    """A circuit over {H, Z_{aπ/2^k}} within `eps` of the rotation `d` denotes, up to phase."""
    assert eps > 0, f"eps ({eps}) must be positive."
    _require_one_qubit(d)
    verdict = unitary_up_to_scalar(d, size_cap=size_cap, mode=FLOAT, tolerance=FLOAT_TOLERANCE)
    if not verdict.unitary:
        logger.error("Extraction input is not proportional to a unitary")
        raise VerificationError("Diagram is not proportional to a unitary: no such circuit exists.")

    unitary = contract(d, mode=FLOAT, size_cap=size_cap).entries / math.sqrt(verdict.scalar)
    cos_part = np.trace(unitary) / 2
    sin_part = 1j * np.trace(_pauli(pauli, FLOAT) @ unitary) / 2
    sign = -1 if (sin_part * np.conj(cos_part)).real < 0 else 1
    alpha = 2 * sign * math.atan2(abs(sin_part), abs(cos_part))

    k = max(1, math.ceil(math.log2(math.pi / eps)))
    circuit = Circuit(1, _rotation_gates(pauli, DyadicPhase(round(alpha * 2**k / math.pi), k)))
    distance = _phase_distance(unitary, circuit_matrix(circuit, FLOAT).entries)
    if distance > eps + FLOAT_TOLERANCE:
        raise VerificationError(f"Diagram is not a {pauli.upper()} rotation ({distance:.3g} off).")
    logger.info(f"Approximated the rotation to within {distance:.3g} with k = {k}")
    return circuit


def approx_pipeline(
    f: BoolFormula,
    eps: Optional[float] = None,
    pauli: str = "x",
    size_cap: Optional[int] = None,
) -> CountResult:
    """Count the models of `f` from an eps-approximate circuit for its hardness gadget."""
    radius = 2.0 ** -(f.n_vars + 2)
    if eps is None:
        eps = radius
    elif eps > radius:
        logger.warning(f"eps ({eps}) exceeds 2**-(n+2) ({radius}); decoding may fail")
    circuit = approx_extraction_oracle(hardness_gadget(f, pauli), eps, pauli, size_cap)
    return decode_count_approx(circuit_matrix(circuit, FLOAT), f.n_vars, pauli)


def aux_extraction_oracle(
    d: Diagram, n: int, pauli: str = "x", size_cap: Optional[int] = None
) -> AuxCircuit:
    """A deterministic circuit with one aux qubit for the rotation `d` denotes.

    The aux qubit is put in |+⟩, copied onto the main qubit by a CNOT and measured; an X
    correction on outcome 1 undoes the copy, so both branches apply the same rotation.
    """
    rotation = approx_extraction_oracle(d, 2.0 ** -(n + 2), pauli, size_cap)
    correction = [h_gate(0), z_gate(0, PI), h_gate(0)]
    instructions = [Prepare(0), h_gate(1), cnot_gate(1, 0), Measure(0, "b0")]
    instructions += [ClassicallyControlled("b0", gate) for gate in correction]
    instructions += rotation.gates
    return AuxCircuit(1, 1, instructions)


def aux_pipeline(f: BoolFormula, pauli: str = "x", size_cap: Optional[int] = None) -> CountResult:
    """Count the models of `f` from the common unitary of an extracted aux circuit."""
    circuit = aux_extraction_oracle(hardness_gadget(f, pauli), f.n_vars, pauli, size_cap)
    deterministic, unitary = aux_is_deterministic(circuit, size_cap)
    if not deterministic:
        raise VerificationError("Extracted aux circuit is not deterministic.")
    return decode_count_approx(unitary, f.n_vars, pauli)


# Valiant-Vazirani


def _xor(left: Expr, right: Expr) -> Expr:
    return And(Or(left, right), Not(And(left, right)))


def parity(variables: List[Expr]) -> Expr:
    """Balanced XOR tree over a non-empty list."""
    if len(variables) == 1:
        return variables[0]
    middle = len(variables) // 2
    return _xor(parity(variables[:middle]), parity(variables[middle:]))


def vv_reduce(f: BoolFormula, seed: int, m: Optional[int] = None) -> List[BoolFormula]:
    """`m` formulas f ∧ (A·x = b) with random GF(2) constraints of random height k ≤ n + 1.

    Formula `j` depends only on ``(seed, j)``. Unsatisfiable inputs stay unsatisfiable; a
    satisfiable input has, with constant probability per round, a round with exactly one
    solution.
    """
    n = f.n_vars
    if m is None:
        m = VV_ROUNDS_PER_VAR * n
    contradiction = And(Var(0), Not(Var(0)))

    formulas = []
    for j in range(m):
        rng = np.random.default_rng([seed, j])
        k = int(rng.integers(1, n + 2))
        rows = rng.integers(0, 2, size=(k, n))
        targets = rng.integers(0, 2, size=k)

        constraints = []
        for row, target in zip(rows, targets):
            members = [Var(i) for i in np.flatnonzero(row)]
            if not members:
                if target:
                    constraints.append(contradiction)
                continue
            constraint = parity(members)
            constraints.append(constraint if target else Not(constraint))
        formulas.append(BoolFormula(n, conjunction([f.root] + constraints)))
    logger.info(f"Built {m} isolation rounds for {n} variables")
    return formulas


class SatDecision(NamedTuple):
    sat: bool
    report: pd.DataFrame


def sat_decide_randomized(
    f: BoolFormula,
    seed: int,
    trials: int = DEFAULT_TRIALS,
    m: Optional[int] = None,
    size_cap: Optional[int] = None,
) -> SatDecision:
    """Decide satisfiability by sampling the boosted gadget of every isolation round.

    A round whose formula has exactly one solution gives X_π and samples 1; an unsatisfiable
    round gives I and samples 0. Rounds with several solutions are usually not unitary and are
    sampled under the arbitrary-output promise. `f` is declared satisfiable when some round
    samples 1 in a majority of its `trials`.
    """
    rows = []
    for j, formula in enumerate(vv_reduce(f, seed, m)):
        round_seed = int(np.random.SeedSequence([seed, j]).generate_state(1)[0])
        gadget = sampling_gadget(formula, 1)
        samples = sample(gadget, round_seed, trials, promise_arbitrary=True, size_cap=size_cap)
        ones = samples.count("1")
        rows.append({"round": j, "size": formula.size, "ones": ones, "trials": trials})

    report = pd.DataFrame(rows, columns=["round", "size", "ones", "trials"])
    report["majority"] = report["ones"] > report["trials"] / 2
    sat = bool(report["majority"].any())
    logger.info(f"{int(report['majority'].sum())} of {len(report)} rounds voted satisfiable")
    return SatDecision(sat, report)

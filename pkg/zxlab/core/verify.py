"""Proportionality and unitarity checks, and the unitary-diagram sampler."""
import logging
from typing import List, NamedTuple, Optional, Union

import numpy as np
import pandas as pd

from zxlab.core.diagram import Diagram, adjoint, compose
from zxlab.core.errors import ArityError, NotUnitaryError
from zxlab.core.evaluate import EXACT, FLOAT, ExactMatrix, FloatMatrix, Matrix, contract
from zxlab.core.field import FieldElement
from zxlab.globals import SAMPLING_TOLERANCE

logger = logging.getLogger(__name__)

_UNIT_ROUNDOFF = np.finfo(float).eps / 2


class Proportionality(NamedTuple):
    proportional: bool
    witness: Optional[Union[FieldElement, complex]]


class UnitaryVerdict(NamedTuple):
    unitary: bool
    scalar: Optional[Union[FieldElement, float]]


def _exact_proportional(a: ExactMatrix, b: ExactMatrix, phase_only: bool) -> Proportionality:
    pivot = next((i for i, x in enumerate(a.entries.flat) if x), None)
    if pivot is None:
        return Proportionality(b.is_zero(), None)

    a_pivot, b_pivot = a.entries.flat[pivot], b.entries.flat[pivot]
    for x, y in zip(a.entries.flat, b.entries.flat):
        if bool(x) != bool(y) or x * b_pivot != y * a_pivot:
            return Proportionality(False, None)
    witness = b_pivot.divide(a_pivot)
    if phase_only and witness * witness.conj() != 1:
        return Proportionality(False, witness)
    return Proportionality(True, witness)


def _float_proportional(
    a: FloatMatrix, b: FloatMatrix, phase_only: bool, tolerance: float
) -> Proportionality:
    x, y = a.entries.ravel(), b.entries.ravel()
    scale_a, scale_b = np.abs(x).max(initial=0.0), np.abs(y).max(initial=0.0)
    slack = (
        2 * (a.error_bound * (scale_b + b.error_bound) + b.error_bound * scale_a)
        + (8 * _UNIT_ROUNDOFF + tolerance) * scale_a * scale_b
    )
    a_zero, b_zero = scale_a <= a.error_bound, scale_b <= b.error_bound
    if a_zero or b_zero:
        return Proportionality(a_zero and b_zero, None)

    pivot = int(np.argmax(np.abs(x)))
    cross = np.abs(x[pivot] * y - x * y[pivot])
    if cross.max() > slack:
        return Proportionality(False, None)
    witness = complex(y[pivot] / x[pivot])
    modulus_slack = tolerance + 8 * _UNIT_ROUNDOFF + slack / abs(x[pivot]) ** 2
    if phase_only and abs(abs(witness) - 1) > modulus_slack:
        return Proportionality(False, witness)
    return Proportionality(True, witness)


def is_proportional(
    a: Matrix, b: Matrix, phase_only: bool = False, tolerance: float = 0.0
) -> Proportionality:
    """Whether ``b = c·a`` for some scalar c, with c as the witness.

    Exact matrices are compared through the cross products ``a_p·b_j - a_j·b_p`` against a pivot
    entry p. Float matrices allow each cross product the error their certified bounds permit,
    plus `tolerance` relative to the largest entries.
    """
    if a.shape != b.shape:
        raise ArityError(f"Cannot compare shapes {a.shape} and {b.shape}.")
    if isinstance(a, ExactMatrix) and isinstance(b, ExactMatrix):
        return _exact_proportional(a, b, phase_only)
    return _float_proportional(a.to_float(), b.to_float(), phase_only, tolerance)


def unitary_up_to_scalar(
    d: Diagram,
    size_cap: Optional[int] = None,
    mode: Optional[str] = None,
    tolerance: float = 0.0,
) -> UnitaryVerdict:
    """Whether V·V† ∝ I with a positive scalar, V being the operator `d` denotes."""
    if d.n_inputs != d.n_outputs:
        logger.info(f"Diagram is {d.n_inputs}->{d.n_outputs}, not square")
        return UnitaryVerdict(False, None)
    if mode is None:
        mode = FLOAT if d.has_matrix_boxes() else EXACT

    gram = contract(compose(adjoint(d), d), mode=mode, size_cap=size_cap)
    identity = ExactMatrix.identity(gram.rows) if mode == EXACT else FloatMatrix.identity(gram.rows)
    proportional, witness = is_proportional(identity, gram, tolerance=tolerance)
    if not proportional or witness is None:
        return UnitaryVerdict(False, None)

    if mode == EXACT:
        value = witness.rational_value()
        if value is None or value <= 0:
            return UnitaryVerdict(False, None)
        return UnitaryVerdict(True, witness)
    if witness.real <= 0 or abs(witness.imag) > SAMPLING_TOLERANCE * abs(witness):
        return UnitaryVerdict(False, None)
    return UnitaryVerdict(True, witness.real)


def _bitstrings(indices: np.ndarray, width: int) -> List[str]:
    return [format(int(index), f"0{width}b") if width else "" for index in indices]


def sample(
    d: Diagram,
    seed: int,
    count: int,
    promise_arbitrary: bool = False,
    size_cap: Optional[int] = None,
) -> List[str]:
    """Draw outcomes from |<x|U|0...0>|² for the unitary U that `d` is proportional to.

    Sample `i` is a function of ``(seed, i)`` alone: it is read from a Philox counter-based
    stream keyed by `seed`. A non-unitary diagram raises `NotUnitaryError` unless
    `promise_arbitrary` is set, in which case the samples are arbitrary (uniform).
    """
    assert seed >= 0, f"seed ({seed}) must be non-negative."
    assert count >= 0, f"count ({count}) must be non-negative."
    generator = np.random.Generator(np.random.Philox(key=seed))
    uniforms = generator.random(count)

    matrix = contract(d, mode=FLOAT, size_cap=size_cap)
    verdict = unitary_up_to_scalar(d, size_cap=size_cap, mode=FLOAT, tolerance=SAMPLING_TOLERANCE)
    if not verdict.unitary:
        if not promise_arbitrary:
            logger.error("Refusing to sample a diagram that is not proportional to a unitary")
            raise NotUnitaryError("Diagram is not proportional to a unitary.")
        logger.warning("Diagram is not proportional to a unitary; samples are arbitrary")
        indices = np.minimum((uniforms * matrix.rows).astype(int), matrix.rows - 1)
        return _bitstrings(indices, d.n_outputs)

    probabilities = np.abs(matrix.entries[:, 0]) ** 2
    cumulative = np.cumsum(probabilities / probabilities.sum())
    indices = np.minimum(np.searchsorted(cumulative, uniforms, side="right"), matrix.rows - 1)
    return _bitstrings(indices, d.n_outputs)


def sample_counts(samples: List[str]) -> pd.Series:
    """Outcome frequencies, indexed by outcome."""
    return pd.Series(samples, dtype=str).value_counts().sort_index()

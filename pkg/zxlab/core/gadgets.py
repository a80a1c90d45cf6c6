"""Diagram constructions for Boolean formulas: NOT, AND, the formula map L_f, the counting gadget
and the boosted sampling gadget.

Formulas are first rewritten to AND and NOT. Each variable is fanned out by a phase-free Z spider,
which copies computational basis states, so every construction below denotes its truth table up
to one scalar shared by all basis inputs.
"""
import logging
from typing import Dict

import numpy as np

from zxlab.core.circuits import SymbolicAngle, x_rotation
from zxlab.core.diagram import (
    HALF_PI,
    IN,
    OUT,
    PI,
    QUARTER_PI,
    ZERO,
    Boundary,
    Diagram,
    Endpoint,
    NodeKind,
    Port,
    compose,
    compose_all,
    identity,
    matrix_box,
    spider,
    tensor,
)
from zxlab.core.formula import And, BoolFormula, Expr, Not, Var, eliminate_or
from zxlab.core.rewrite import bound_degree

logger = logging.getLogger(__name__)

PAULIS = ("x", "y", "z")


def _add_not(d: Diagram, source: Endpoint) -> Endpoint:
    node = d.add_node(NodeKind.X, PI)
    d.add_wire(source, node)
    return Port(node)


def _add_and(d: Diagram, left: Endpoint, right: Endpoint) -> Endpoint:
    """Wire an AND into `d`: ⟨+|⊗⟨+|⊗I after a Toffoli whose target starts in |0⟩.

    The CCZ inside the Toffoli is the phase polynomial
    abc = (a + b + c - a⊕b - a⊕c - b⊕c + a⊕b⊕c) / 4, one phase gadget per parity term. The
    target's |0⟩ and the first Hadamard fuse into the target's Z spider, and the two ⟨+|
    effects fuse into the control spiders. The result is Σ |a·b⟩⟨ab| / 4.
    """
    a, b, c = (d.add_node(NodeKind.Z, QUARTER_PI) for _ in range(3))
    d.add_wire(left, a)
    d.add_wire(right, b)
    for members, phase in (
        ((a, b), -QUARTER_PI),
        ((a, c), -QUARTER_PI),
        ((b, c), -QUARTER_PI),
        ((a, b, c), QUARTER_PI),
    ):
        parity = d.add_node(NodeKind.X)
        for member in members:
            d.add_wire(member, parity)
        d.add_wire(parity, d.add_node(NodeKind.Z, phase))
    out = d.add_node(NodeKind.H)
    d.add_wire(c, out)
    return Port(out)


def not_gadget() -> Diagram:
    """X_π: exactly [[0, 1], [1, 0]]."""
    return spider(NodeKind.X, PI)


def and_gadget() -> Diagram:
    """2->1 diagram denoting Σ_{x,y} |x·y⟩⟨xy| / 4."""
    d = Diagram(n_inputs=2, n_outputs=1)
    out = _add_and(d, Boundary(IN, 0), Boundary(IN, 1))
    d.add_wire(out, Boundary(OUT, 0))
    return d


class _FormulaBuilder:
    """Lays an AND/NOT tree into a diagram, one fan-out spider per variable."""

    def __init__(self, f: BoolFormula, with_inputs: bool):
        self.d = Diagram(n_inputs=f.n_vars if with_inputs else 0, n_outputs=0)
        self.fanout: Dict[int, int] = {}
        for index in range(f.n_vars):
            self.fanout[index] = self.d.add_node(NodeKind.Z)
            if with_inputs:
                self.d.add_wire(Boundary(IN, index), self.fanout[index])
        self.root = self.build(eliminate_or(f.root))

    def build(self, expr: Expr) -> Endpoint:
        """Endpoint carrying the value of `expr`; shared subtrees are laid out once per use."""
        if isinstance(expr, Var):
            return Port(self.fanout[expr.index])
        if isinstance(expr, Not):
            return _add_not(self.d, self.build(expr.child))
        if isinstance(expr, And):
            return _add_and(self.d, self.build(expr.left), self.build(expr.right))
        raise ValueError(f"Unexpected formula node {expr!r}.")

    def finish(self) -> Diagram:
        return bound_degree(self.d, 3, nodes=self.fanout.values())


def formula_map(f: BoolFormula) -> Diagram:
    """The n->1 map L_f = Σ_x |f(x)⟩⟨x|, scaled by 4^-(number of ANDs)."""
    builder = _FormulaBuilder(f, with_inputs=True)
    builder.d.n_outputs = 1
    builder.d.add_wire(builder.root, Boundary(OUT, 0))
    d = builder.finish()
    logger.info(f"Built L_f with {len(d.nodes)} nodes for {f.n_vars} variables")
    return d


def _add_controlled(d: Diagram, control: Endpoint, pauli: str):
    """Apply controlled-(-iP) from `control` onto the open wire and discard the control with ⟨+|.

    -iX and -iZ are a CNOT or CZ behind a Z_{-π/2} on the control; -iY = XZ needs no phase.
    """
    if pauli == "y":
        hub = d.add_node(NodeKind.Z)
        d.add_wire(control, hub)
        z_target, h = d.add_node(NodeKind.Z), d.add_node(NodeKind.H)
        x_target = d.add_node(NodeKind.X)
        d.add_wire(hub, h)
        d.add_wire(h, z_target)
        d.add_wire(hub, x_target)
        d.add_wire(Boundary(IN, 0), z_target)
        d.add_wire(z_target, x_target)
        d.add_wire(x_target, Boundary(OUT, 0))
        return

    hub = d.add_node(NodeKind.Z, -HALF_PI)
    d.add_wire(control, hub)
    if pauli == "x":
        target = d.add_node(NodeKind.X)
        d.add_wire(hub, target)
    else:
        target, h = d.add_node(NodeKind.Z), d.add_node(NodeKind.H)
        d.add_wire(hub, h)
        d.add_wire(h, target)
    d.add_wire(Boundary(IN, 0), target)
    d.add_wire(target, Boundary(OUT, 0))


def hardness_gadget(f: BoolFormula, pauli: str = "x") -> Diagram:
    """1->1 diagram proportional to N0·I - i·N1·P for the Pauli P named by `pauli`.

    N1 and N0 count the satisfying and falsifying assignments of `f`. The state Σ_x |f(x)⟩ is
    built by feeding L_f a |+⟩ on every variable, and controls a -iP on the open wire. For
    P = X the result is proportional to the X rotation by SymbolicAngle(N1, n).
    """
    if pauli not in PAULIS:
        raise ValueError(f"Invalid pauli ({pauli}), must be one of {PAULIS}.")
    builder = _FormulaBuilder(f, with_inputs=False)
    builder.d.n_inputs, builder.d.n_outputs = 1, 1
    _add_controlled(builder.d, builder.root, pauli)
    d = builder.finish()
    logger.info(f"Built the {pauli.upper()} hardness gadget with {len(d.nodes)} nodes")
    return d


def boost_matrix(n1: int, n: int) -> np.ndarray:
    """The non-unitary M with M|0⟩ = |0⟩ and M·X_α|0⟩ = |1⟩, α = SymbolicAngle(n1, n)."""
    if n1 == 0:
        raise ValueError("The rotation angle is 0, so |0> and X_a|0> coincide.")
    alpha = SymbolicAngle(n1, n).radians
    columns = np.column_stack([np.array([1.0, 0.0], dtype=complex), x_rotation(alpha)[:, 0]])
    return np.linalg.inv(columns)


def sampling_gadget(f: BoolFormula, assumed_n1: int = 1) -> Diagram:
    """1->1 diagram proportional to I when `f` is unsatisfiable and to X_π when it has exactly
    `assumed_n1` solutions.

    M·(hardness gadget)|0⟩ is |0⟩ or |1⟩ in those two cases; it is used as the control of a CNOT
    onto the open wire, then discarded with ⟨+|. Contains a matrix box, so evaluate in float mode.
    """
    state = compose_all(
        [
            spider(NodeKind.X, ZERO, 0, 1),
            hardness_gadget(f, "x"),
            matrix_box(boost_matrix(assumed_n1, f.n_vars)),
        ]
    )

    ctrl = Diagram(n_inputs=2, n_outputs=1)
    control, target = ctrl.add_node(NodeKind.Z), ctrl.add_node(NodeKind.X)
    ctrl.add_wire(Boundary(IN, 0), control)
    ctrl.add_wire(Boundary(IN, 1), target)
    ctrl.add_wire(control, target)
    ctrl.add_wire(target, Boundary(OUT, 0))
    return compose(tensor(state, identity(1)), ctrl)

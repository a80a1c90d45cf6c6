"""Semantics-preserving rewrites: spider fusion, identity removal and Hadamard cancellation."""
import logging
from dataclasses import replace
from typing import Iterable, List, Optional

from zxlab.core.diagram import ZERO, Diagram, Node, NodeKind, Port, Wire
from zxlab.core.errors import NotFusibleError
from zxlab.core.evaluate import node_tensor
from zxlab.core.field import FieldElement

logger = logging.getLogger(__name__)


def _loop_scalar(node: Node) -> FieldElement:
    """Factor picked up when a self-loop on `node` is removed.

    Tracing two legs of a spider gives the same spider with two fewer legs times this factor,
    read off by comparing a traced 3-legged tensor with the 1-legged one.
    """
    traced = node_tensor(node, 3)
    traced = [traced[i, 0, 0] + traced[i, 1, 1] for i in range(2)]
    bare = node_tensor(node, 1)
    pivot = 0 if bare[0] else 1
    scalar = traced[pivot].divide(bare[pivot])
    assert all(t == scalar * b for t, b in zip(traced, bare)), "Loop trace is not a multiple."
    return scalar


def fusible_wire(d: Diagram, index: int) -> bool:
    a, b = d.wires[index]
    if not (isinstance(a, Port) and isinstance(b, Port)) or a.node == b.node:
        return False
    kind_a, kind_b = d.nodes[a.node].kind, d.nodes[b.node].kind
    return kind_a.is_spider and kind_a is kind_b


def fuse_once(d: Diagram, wire: int) -> Diagram:
    """Merge the two same-colour spiders joined by ``d.wires[wire]``."""
    if not 0 <= wire < len(d.wires) or not fusible_wire(d, wire):
        raise NotFusibleError(f"Wire {wire} does not join two spiders of the same colour.")

    keep_end, drop_end = d.wires[wire]
    keep, drop = d.nodes[keep_end.node], d.nodes[drop_end.node]
    fused = replace(keep, phase=keep.phase + drop.phase)

    wires: List[Wire] = []
    loops = 0
    for index, (a, b) in enumerate(d.wires):
        if index == wire:
            continue
        a = Port(keep.id) if isinstance(a, Port) and a.node == drop.id else a
        b = Port(keep.id) if isinstance(b, Port) and b.node == drop.id else b
        if isinstance(a, Port) and isinstance(b, Port) and a.node == b.node == keep.id:
            loops += 1
            continue
        wires.append((a, b))

    if loops:
        scalar = _loop_scalar(fused)
        assert scalar == 1, f"Self-loop on a {fused.kind.value} spider scales by {scalar}."
        logger.debug(f"Removed {loops} self-loops while fusing {drop.id} into {keep.id}")

    nodes = {node_id: node for node_id, node in d.nodes.items() if node_id != drop.id}
    nodes[keep.id] = fused
    return Diagram(nodes, wires, d.n_inputs, d.n_outputs)


def _bypass(d: Diagram, removed: Iterable[int], inner: Iterable[int], left, right) -> Diagram:
    """Drop nodes `removed` and the wires `inner`, joining `left` to `right` directly."""
    removed, inner = set(removed), set(inner)
    nodes = {node_id: node for node_id, node in d.nodes.items() if node_id not in removed}
    wires = [wire for index, wire in enumerate(d.wires) if index not in inner]
    wires.append((left, right))
    return Diagram(nodes, wires, d.n_inputs, d.n_outputs)


def _remove_identity(d: Diagram) -> Optional[Diagram]:
    for node_id, node in sorted(d.nodes.items()):
        if not node.kind.is_spider or not node.phase.is_zero():
            continue
        around = d.neighbours(node_id)
        if len(around) != 2:
            continue
        (first_wire, left), (second_wire, right) = around
        if first_wire == second_wire:
            continue
        if isinstance(left, Port) and isinstance(right, Port) and left.node == right.node:
            continue
        return _bypass(d, [node_id], [first_wire, second_wire], left, right)
    return None


def _cancel_hadamards(d: Diagram) -> Optional[Diagram]:
    for index, (a, b) in enumerate(d.wires):
        if not (isinstance(a, Port) and isinstance(b, Port)) or a.node == b.node:
            continue
        if d.nodes[a.node].kind is not NodeKind.H or d.nodes[b.node].kind is not NodeKind.H:
            continue
        outer = []
        for end in (a, b):
            others = [(i, far) for i, far in d.neighbours(end.node) if i != index]
            if len(others) != 1:
                break
            outer.append(others[0])
        if len(outer) != 2:
            continue
        (left_wire, left), (right_wire, right) = outer
        if isinstance(left, Port) and isinstance(right, Port) and left.node == right.node:
            continue
        return _bypass(d, [a.node, b.node], [index, left_wire, right_wire], left, right)
    return None


def simplify(d: Diagram) -> Diagram:
    """Apply fusion, identity removal and H-H cancellation until none applies."""
    applied = 0
    while True:
        fusible = next((i for i in range(len(d.wires)) if fusible_wire(d, i)), None)
        if fusible is not None:
            d = fuse_once(d, fusible)
        else:
            rewritten = _remove_identity(d)
            if rewritten is None:
                rewritten = _cancel_hadamards(d)
            if rewritten is None:
                break
            d = rewritten
        applied += 1
    logger.info(f"Simplified with {applied} rewrites, {len(d.nodes)} nodes left")
    return d


def bound_degree(
    d: Diagram, max_degree: int = 3, nodes: Optional[Iterable[int]] = None
) -> Diagram:
    """Unfuse spiders into chains so that no spider has more than `max_degree` legs.

    The original spider keeps its phase; the spiders split off from it are phase-free and of the
    same colour. Only the spiders in `nodes` are touched when it is given.
    """
    assert max_degree >= 3, f"max_degree ({max_degree}) must be at least 3."
    d = d.copy()
    targets = sorted(d.nodes) if nodes is None else sorted(nodes)
    for node_id in targets:
        node = d.nodes[node_id]
        if not node.kind.is_spider:
            continue
        current = node_id
        around = d.neighbours(current)
        while len(around) > max_degree:
            moved = {index for index, _ in around[max_degree - 1 :]}
            successor = d.add_node(node.kind, ZERO)
            for index in moved:
                a, b = d.wires[index]
                a = Port(successor) if isinstance(a, Port) and a.node == current else a
                b = Port(successor) if isinstance(b, Port) and b.node == current else b
                d.wires[index] = (a, b)
            d.add_wire(current, successor)
            current = successor
            around = d.neighbours(current)
    return d

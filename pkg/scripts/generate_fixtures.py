"""Regenerate the diagram and matrix fixtures under tests/fixtures."""
import json
from pathlib import Path

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
    spider,
)
from zxlab.core.evaluate import FLOAT, contract
from zxlab.core.field import FieldElement
from zxlab.core.formula import parse_formula
from zxlab.core.gadgets import hardness_gadget
from zxlab.core.verify import unitary_up_to_scalar
from zxlab.core.writer import jsonable

FIXTURES = Path("./tests/fixtures")


def projector() -> Diagram:
    """|0><0| up to scalar: a Z spider with an X state on its third leg."""
    d = Diagram(n_inputs=1, n_outputs=1)
    z, x = d.add_node(NodeKind.Z), d.add_node(NodeKind.X)
    d.add_wire(Boundary(IN, 0), z)
    d.add_wire(z, Boundary(OUT, 0))
    d.add_wire(z, x)
    return d


def write_json(file_path: Path, data):
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")


DIAGRAMS = {
    "cnot": cnot(),
    "t_gate": compose(spider(NodeKind.Z, QUARTER_PI), spider(NodeKind.Z, QUARTER_PI)),
    "s_gate": spider(NodeKind.Z, HALF_PI),
    "plus_state": spider(NodeKind.Z, n_inputs=0),
    "projector": projector(),
}

for name, d in DIAGRAMS.items():
    print(f"{name=}")
    write_json(FIXTURES / "diagrams" / f"{name}.json", d.to_dict())

# N0·I - i·N1·X for x1 & x2, scaled so that the diagonal is N0 = 3
gadget = hardness_gadget(parse_formula("x1 & x2"))
exact_matrix = contract(gadget)
exact_matrix = exact_matrix.scale(FieldElement.from_int(3).divide(exact_matrix[0, 0]))
write_json(FIXTURES / "matrices" / "hardness_and2_exact.json", {"entries": jsonable(exact_matrix)})

# the same operator as a unitary with a real positive diagonal
float_matrix = contract(gadget, mode=FLOAT)
scale = unitary_up_to_scalar(gadget, mode=FLOAT, tolerance=1e-9).scalar
float_matrix = float_matrix.scale(scale**-0.5)
float_matrix = float_matrix.scale(abs(float_matrix[0, 0]) / float_matrix[0, 0])
entries = [[[e.real, e.imag] for e in row] for row in float_matrix.entries.tolist()]
write_json(
    FIXTURES / "matrices" / "hardness_and2_float.json",
    {"entries": entries, "error_bound": max(float_matrix.error_bound, 1e-15)},
)

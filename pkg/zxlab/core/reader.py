"""Functions for reading diagrams, circuits, formulas and matrices from disk."""
import json
import logging
from os import PathLike, path
from typing import Optional, Union

import numpy as np

from zxlab.core.circuits import AuxCircuit, Circuit, circuit_from_records
from zxlab.core.diagram import Diagram
from zxlab.core.evaluate import ExactMatrix, FloatMatrix
from zxlab.core.field import FieldElement
from zxlab.core.formula import BoolFormula, parse_dimacs, parse_formula

logger = logging.getLogger(__name__)

MATRIX = "matrix"


class Reader:
    """Reads one input file; the subclass is picked from the file suffix, or from `kind`."""

    suffixes = ()

    def __new__(cls, input_file: PathLike, kind: Optional[str] = None):
        if cls is not Reader:
            return super().__new__(cls)
        if kind == MATRIX:
            return super().__new__(MatrixReader)
        _, suffix = path.splitext(str(input_file))
        for reader_class in (DiagramReader, CircuitReader, FormulaReader, DimacsReader):
            if suffix.lower() in reader_class.suffixes:
                return super().__new__(reader_class)
        raise ValueError(f"Cannot tell the format of {input_file} from its suffix.")

    def __init__(self, input_file: PathLike, kind: Optional[str] = None):
        if not path.exists(input_file):
            raise FileNotFoundError(f"No such file: {input_file}")
        self.input_file = input_file

    def read_text(self) -> str:
        with open(self.input_file, encoding="utf-8") as f:
            return f.read()

    def __call__(self):
        raise NotImplementedError


class DiagramReader(Reader):
    suffixes = (".json",)

    def __call__(self) -> Diagram:
        d = Diagram.from_dict(json.loads(self.read_text()))
        logger.info(f"Read a {d.n_inputs}->{d.n_outputs} diagram with {len(d.nodes)} nodes")
        return d


class CircuitReader(Reader):
    suffixes = (".jsonl",)

    def __call__(self) -> Union[Circuit, AuxCircuit]:
        records = [json.loads(line) for line in self.read_text().splitlines() if line.strip()]
        return circuit_from_records(records)


class FormulaReader(Reader):
    suffixes = (".bool",)

    def __call__(self) -> BoolFormula:
        return parse_formula(self.read_text())


class DimacsReader(Reader):
    suffixes = (".cnf", ".dimacs")

    def __call__(self) -> BoolFormula:
        return parse_dimacs(self.read_text())


class MatrixReader(Reader):
    """``{"entries": [[e, ...], ...], "error_bound": b}``, each e a field string or [re, im]."""

    def __call__(self) -> Union[ExactMatrix, FloatMatrix]:
        data = json.loads(self.read_text())
        rows = data["entries"]
        if all(isinstance(e, str) for row in rows for e in row):
            return ExactMatrix([[FieldElement.parse(e) for e in row] for row in rows])
        if any(isinstance(e, str) for row in rows for e in row):
            raise ValueError("Matrix mixes exact and float entries.")
        entries = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
        return FloatMatrix(entries, float(data.get("error_bound", 0.0)))


def read(input_file: PathLike, kind: Optional[str] = None):
    return Reader(input_file, kind)()

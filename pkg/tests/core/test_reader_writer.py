import json

import numpy as np
import pandas as pd
import pytest

from zxlab.core.circuits import AuxCircuit, Circuit
from zxlab.core.diagram import Diagram, cnot
from zxlab.core.evaluate import ExactMatrix, FloatMatrix, contract
from zxlab.core.field import FieldElement
from zxlab.core.formula import BoolFormula
from zxlab.core.reader import (
    MATRIX,
    CircuitReader,
    DiagramReader,
    DimacsReader,
    FormulaReader,
    MatrixReader,
    Reader,
    read,
)
from zxlab.core.writer import JsonWriter, PrettyWriter, Writer, format_complex, jsonable
from zxlab.globals import STDOUT

FIXTURES = "./tests/fixtures"


class TestReader:
    @pytest.mark.parametrize(
        "input_file, reader_class",
        [
            (f"{FIXTURES}/diagrams/cnot.json", DiagramReader),
            (f"{FIXTURES}/circuits/bell.jsonl", CircuitReader),
            (f"{FIXTURES}/formulas/and2.bool", FormulaReader),
            (f"{FIXTURES}/formulas/small.cnf", DimacsReader),
        ],
    )
    def test_dispatch(self, input_file, reader_class):
        assert isinstance(Reader(input_file), reader_class)

    def test_matrix_kind(self):
        reader = Reader(f"{FIXTURES}/matrices/hardness_and2_exact.json", kind=MATRIX)
        assert isinstance(reader, MatrixReader)

    def test_unknown_suffix(self):
        with pytest.raises(ValueError):
            Reader(f"{FIXTURES}/formulas/and2.txt")

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            read(f"{FIXTURES}/diagrams/missing.json")

    def test_read_types(self):
        assert isinstance(read(f"{FIXTURES}/diagrams/cnot.json"), Diagram)
        assert isinstance(read(f"{FIXTURES}/circuits/bell.jsonl"), Circuit)
        assert isinstance(read(f"{FIXTURES}/circuits/copy_corrected.jsonl"), AuxCircuit)
        assert isinstance(read(f"{FIXTURES}/formulas/majority3.bool"), BoolFormula)

    def test_cnot_fixture(self):
        assert contract(read(f"{FIXTURES}/diagrams/cnot.json")) == contract(cnot())

    def test_read_exact_matrix(self):
        m = read(f"{FIXTURES}/matrices/hardness_and2_exact.json", MATRIX)
        assert isinstance(m, ExactMatrix)
        assert m[0, 0] == 3
        assert m[0, 1] == -FieldElement.imag_unit()

    def test_read_float_matrix(self):
        m = read(f"{FIXTURES}/matrices/hardness_and2_float.json", MATRIX)
        assert isinstance(m, FloatMatrix)
        assert m.error_bound == 1e-15
        assert np.allclose(m.entries, np.array([[3, -1j], [-1j, 3]]) / np.sqrt(10))

    def test_mixed_matrix(self):
        with pytest.raises(ValueError):
            read(f"{FIXTURES}/matrices/mixed.json", MATRIX)

    def test_round_trip_diagram(self, tmp_path, random_diagram):
        d = random_diagram()
        output = tmp_path / "diagram.json"
        output.write_text(json.dumps(d.to_dict()))
        assert contract(read(str(output))) == contract(d)


class TestJsonable:
    def test_values(self):
        record = {
            "element": FieldElement.inv_sqrt2(),
            "flag": np.bool_(True),
            "count": np.int64(3),
            "ratio": np.float64(0.5),
            "z": 1j,
            "nested": [(FieldElement.one(),)],
        }
        assert jsonable(record) == {
            "element": str(FieldElement.inv_sqrt2()),
            "flag": True,
            "count": 3,
            "ratio": 0.5,
            "z": format_complex(1j),
            "nested": [[str(FieldElement.one())]],
        }

    def test_tables(self):
        frame = pd.DataFrame({"round": [0, 1], "ones": [2, 0]})
        assert jsonable(frame) == [{"round": 0, "ones": 2}, {"round": 1, "ones": 0}]
        assert jsonable(pd.Series({"0": 3, "1": 1})) == {"0": 3, "1": 1}

    def test_matrices(self):
        assert jsonable(ExactMatrix.identity(2))[1][1] == str(FieldElement.one())
        assert complex(jsonable(FloatMatrix(np.eye(2) * 1j))[0][0]) == 1j

    def test_format_complex(self):
        assert complex(format_complex(0.25 - 2j)) == 0.25 - 2j


class TestWriter:
    def test_dispatch(self, tmp_path):
        assert isinstance(Writer(tmp_path / "a.json"), JsonWriter)
        assert isinstance(Writer(tmp_path / "b.txt", pretty=True), PrettyWriter)

    def test_file_exists(self, tmp_path):
        output = tmp_path / "exists.json"
        output.touch()
        with pytest.raises(FileExistsError):
            Writer(output)

    def test_creates_directory(self, tmp_path):
        output = tmp_path / "nested" / "dir" / "out.json"
        Writer(output)
        assert output.exists()

    def test_json(self, tmp_path):
        output = tmp_path / "out.json"
        writer = Writer(output)
        writer({"n1": 1, "scalar": FieldElement.one()})
        writer({"n1": 2})
        lines = output.read_text().splitlines()
        assert lines == ['{"n1":1,"scalar":"%s"}' % FieldElement.one(), '{"n1":2}']

    def test_pretty(self, tmp_path):
        output = tmp_path / "out.txt"
        record = {
            "sat": True,
            "report": pd.DataFrame({"round": [0], "ones": [3]}),
            "entries": ExactMatrix.identity(2),
        }
        Writer(output, pretty=True)(record)
        lines = output.read_text().splitlines()
        assert lines[0] == "sat: True"
        assert lines[1] == "report:"
        assert "round" in lines[2]
        assert "entries:" in lines

    def test_stdout(self, capsys):
        Writer(STDOUT)({"unitary": False})
        assert capsys.readouterr().out == '{"unitary":false}\n'

    def test_cleanup(self, tmp_path):
        output = tmp_path / "out.json"
        writer = Writer(output)
        writer.cleanup_output()
        assert not output.exists()

    def test_empty_lines(self, tmp_path):
        output = tmp_path / "out.json"
        Writer(output).write_lines([])
        assert output.read_text() == ""

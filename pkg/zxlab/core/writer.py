"""Functions for writing results to disk."""
import json
import logging
import sys
from os import PathLike, makedirs, path, remove
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from zxlab.core.evaluate import ExactMatrix, FloatMatrix
from zxlab.core.field import FieldElement
from zxlab.globals import STDOUT

logger = logging.getLogger(__name__)


def format_complex(value: complex) -> str:
    return f"{value.real:.14e}{value.imag:+.14e}j"


def jsonable(value: Any) -> Any:
    """Plain JSON types for results: field elements as strings, tables as lists of records."""
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, ExactMatrix):
        return [[str(e) for e in row] for row in value.entries]
    if isinstance(value, FloatMatrix):
        return [[format_complex(complex(e)) for e in row] for row in value.entries]
    if isinstance(value, FieldElement):
        return str(value)
    if isinstance(value, pd.DataFrame):
        return jsonable(value.to_dict(orient="records"))
    if isinstance(value, pd.Series):
        return jsonable(value.to_dict())
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(complex(value))
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


class Writer:
    def __new__(cls, _output_file, pretty: bool = False):
        if cls is Writer:
            return super().__new__(PrettyWriter if pretty else JsonWriter)
        return super().__new__(cls)

    def __init__(self, output_file: PathLike, pretty: bool = False):
        self.output_file = self._validate_output_file(output_file)

    @staticmethod
    def _validate_output_file(output_file: PathLike) -> PathLike:
        if output_file == STDOUT:
            return output_file

        output_file = path.abspath(output_file)
        if path.exists(output_file):
            raise FileExistsError("File exists, remove the file or select a different destination.")

        parent_dir, _ = path.split(output_file)
        if not path.exists(parent_dir):
            logger.info(f"Directory {parent_dir} doesn't exist, creating.")
            makedirs(parent_dir, exist_ok=True)

        Path(output_file).touch()
        return output_file

    def cleanup_output(self):
        if self.output_file != STDOUT and path.exists(self.output_file):
            remove(self.output_file)

    def write_lines(self, lines: List[str]):
        if len(lines) == 0:
            logger.warning("Empty list of lines received")
            return
        if self.output_file == STDOUT:
            sys.stdout.writelines(f"{line}\n" for line in lines)
            return

        error_received = None
        with open(self.output_file, "a", encoding="utf-8") as f:
            try:
                f.writelines(f"{line}\n" for line in lines)
            except KeyboardInterrupt:
                logger.error("Keyboard interrupt received, safely closing file.")
            except Exception as error:  # pylint: disable=broad-except
                logger.error("Unknown error received, safely closing file.")
                error_received = error

        if error_received is not None:
            self.cleanup_output()
            raise error_received

    def __call__(self, record: Dict[str, Any]):
        raise NotImplementedError


class JsonWriter(Writer):
    """One compact JSON object per record, keys in insertion order."""

    def __call__(self, record: Dict[str, Any]):
        self.write_lines([json.dumps(jsonable(record), separators=(",", ":"))])


class PrettyWriter(Writer):
    """``key: value`` lines; tables and matrices are laid out over several lines."""

    def __call__(self, record: Dict[str, Any]):
        lines = []
        for key, value in record.items():
            if isinstance(value, (pd.DataFrame, pd.Series)):
                lines.append(f"{key}:")
                lines.extend("  " + line for line in value.to_string().splitlines())
            elif isinstance(value, (ExactMatrix, FloatMatrix)):
                lines.append(f"{key}:")
                lines.extend("  " + "  ".join(row) for row in jsonable(value))
            elif isinstance(value, dict):
                lines.append(f"{key}: {json.dumps(jsonable(value), indent=2)}")
            else:
                lines.append(f"{key}: {jsonable(value)}")
        self.write_lines(lines)

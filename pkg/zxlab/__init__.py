from importlib.metadata import PackageNotFoundError, version

from .log import setup_logging
from .core.diagram import Diagram, adjoint, compose, tensor
from .core.evaluate import contract
from .core.field import FieldElement
from .core.formula import BoolFormula, parse_dimacs, parse_formula
from .core.gadgets import hardness_gadget, sampling_gadget
from .core.reduction import brute_force_count, sat_decide_randomized, theorem1_pipeline
from .core.verify import is_proportional, sample, unitary_up_to_scalar

setup_logging()

__all__ = [
    "__version__",
    "BoolFormula",
    "Diagram",
    "FieldElement",
    "adjoint",
    "brute_force_count",
    "compose",
    "contract",
    "hardness_gadget",
    "is_proportional",
    "parse_dimacs",
    "parse_formula",
    "sample",
    "sampling_gadget",
    "sat_decide_randomized",
    "tensor",
    "theorem1_pipeline",
    "unitary_up_to_scalar",
]

try:
    __version__ = version("zxlab")
except PackageNotFoundError:
    __version__ = "0.0.0"

from .diagram import Diagram
from .evaluate import contract
from .field import FieldElement
from .formula import BoolFormula

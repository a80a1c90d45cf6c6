"""Exceptions raised by zxlab.

Most of these subclass the builtin that already describes the failure, so callers that only care
about `ValueError` or `RuntimeError` keep working.
"""
from typing import List


class DiagramValidationError(ValueError):
    def __init__(self, violations: List["Violation"]):  # noqa: F821
        self.violations = list(violations)
        codes = ", ".join(sorted({v.code for v in self.violations}))
        super().__init__(f"Invalid diagram ({len(self.violations)} violations: {codes}).")


class ArityError(ValueError):
    pass


class NotFusibleError(ValueError):
    pass


class ExactModeError(ValueError):
    """Something that only has a float semantics reached an exact evaluation."""


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class SizeCapExceeded(RuntimeError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"Intermediate tensor of {size} entries exceeds the size cap ({cap}).")


class VerificationError(RuntimeError):
    pass


class NotUnitaryError(VerificationError):
    pass


class AuxBoundError(ValueError):
    pass

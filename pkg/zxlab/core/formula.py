"""Boolean formulas over AND, NOT and OR, their parsers and their truth tables.

Variables are written ``x1..xN`` and stored zero-based. In truth tables and diagram inputs ``x1``
is the first (most significant) position.
"""
import logging
import re
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from zxlab.core.errors import FormulaSyntaxError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index + 1}"


@dataclass(frozen=True)
class Not:
    child: "Expr"

    def __str__(self):
        return f"~{_wrapped(self.child)}"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"

    def __str__(self):
        return f"{_wrapped(self.left)} & {_wrapped(self.right)}"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"

    def __str__(self):
        return f"{_wrapped(self.left)} | {_wrapped(self.right)}"


Expr = Union[Var, Not, And, Or]


def _wrapped(expr: Expr) -> str:
    return str(expr) if isinstance(expr, (Var, Not)) else f"({expr})"


@dataclass(frozen=True)
class BoolFormula:
    """A formula `root` over variables ``0..n_vars-1``."""

    n_vars: int
    root: Expr

    def __post_init__(self):
        assert self.n_vars >= 1, f"n_vars ({self.n_vars}) must be positive."
        largest = max((v.index for v in iter_nodes(self.root) if isinstance(v, Var)), default=-1)
        assert largest < self.n_vars, f"x{largest + 1} used with only {self.n_vars} variables."

    @property
    def size(self) -> int:
        """Number of AST nodes."""
        return sum(1 for _ in iter_nodes(self.root))

    def __str__(self):
        return str(self.root)


def iter_nodes(expr: Expr) -> Iterator[Expr]:
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend((node.right, node.left))


def eliminate_or(expr: Expr) -> Expr:
    """Rewrite OR with De Morgan's law and drop double negations."""
    if isinstance(expr, Var):
        return expr
    if isinstance(expr, Not):
        child = eliminate_or(expr.child)
        return child.child if isinstance(child, Not) else Not(child)
    left, right = eliminate_or(expr.left), eliminate_or(expr.right)
    if isinstance(expr, And):
        return And(left, right)
    return eliminate_or(Not(And(Not(left), Not(right))))


def assignments(n_vars: int) -> np.ndarray:
    """All 2**n assignments as rows of a bool array, x1 most significant."""
    indices = np.arange(2**n_vars)
    shifts = np.arange(n_vars - 1, -1, -1)
    return ((indices[:, None] >> shifts[None, :]) & 1).astype(bool)


def evaluate_all(f: BoolFormula) -> np.ndarray:
    """Truth value of `f` on every assignment, in basis order."""
    columns = assignments(f.n_vars).T

    def value(expr: Expr) -> np.ndarray:
        if isinstance(expr, Var):
            return columns[expr.index]
        if isinstance(expr, Not):
            return ~value(expr.child)
        if isinstance(expr, And):
            return value(expr.left) & value(expr.right)
        return value(expr.left) | value(expr.right)

    return np.broadcast_to(value(f.root), (2**f.n_vars,)).copy()


def evaluate(f: BoolFormula, assignment: Union[str, List[bool]]) -> bool:
    if isinstance(assignment, str):
        assignment = [bit == "1" for bit in assignment]

    def value(expr: Expr) -> bool:
        if isinstance(expr, Var):
            return bool(assignment[expr.index])
        if isinstance(expr, Not):
            return not value(expr.child)
        if isinstance(expr, And):
            return value(expr.left) and value(expr.right)
        return value(expr.left) or value(expr.right)

    return value(f.root)


def truth_table(f: BoolFormula) -> pd.DataFrame:
    table = pd.DataFrame(
        assignments(f.n_vars).astype(int), columns=[f"x{i + 1}" for i in range(f.n_vars)]
    )
    table["f"] = evaluate_all(f).astype(int)
    return table


# Parsing

_TOKEN = re.compile(r"\s*(?:(x(\d+))|([~&|()]))")
_VARS_LINE = re.compile(r"^\s*#\s*vars\s*:\s*(\d+)\s*$")


class _Parser:
    """Recursive descent over ``or := and ('|' and)*``, ``and := unary ('&' unary)*``."""

    def __init__(self, text: str):
        self.tokens: List[Tuple[str, int, int, int]] = []
        for line_number, line in enumerate(text.splitlines(), start=1):
            code = line.split("#", 1)[0]
            position = 0
            while position < len(code):
                if code[position:].strip() == "":
                    break
                match = _TOKEN.match(code, position)
                if match is None:
                    column = position + len(code[position:]) - len(code[position:].lstrip()) + 1
                    raise FormulaSyntaxError(
                        f"Unexpected character {code[column - 1]!r}", line_number, column
                    )
                column = match.start(1 if match.group(1) else 3) + 1
                if match.group(1):
                    index = int(match.group(2))
                    if index < 1:
                        raise FormulaSyntaxError("Variables start at x1", line_number, column)
                    self.tokens.append(("var", index - 1, line_number, column))
                else:
                    self.tokens.append((match.group(3), 0, line_number, column))
                position = match.end()
        self.position = 0
        self.last_line = max(1, len(text.splitlines()))

    def peek(self) -> Optional[str]:
        return self.tokens[self.position][0] if self.position < len(self.tokens) else None

    def fail(self, message: str):
        if self.position < len(self.tokens):
            _, _, line, column = self.tokens[self.position]
        else:
            line, column = self.last_line, 1
        raise FormulaSyntaxError(message, line, column)

    def take(self, kind: str) -> Tuple[str, int, int, int]:
        if self.peek() != kind:
            self.fail(f"Expected {kind!r}, found {self.peek() or 'end of input'!r}")
        token = self.tokens[self.position]
        self.position += 1
        return token

    def parse(self) -> Expr:
        if not self.tokens:
            self.fail("Empty formula")
        expr = self.disjunction()
        if self.peek() is not None:
            self.fail(f"Unexpected {self.peek()!r}")
        return expr

    def disjunction(self) -> Expr:
        expr = self.conjunction()
        while self.peek() == "|":
            self.take("|")
            expr = Or(expr, self.conjunction())
        return expr

    def conjunction(self) -> Expr:
        expr = self.unary()
        while self.peek() == "&":
            self.take("&")
            expr = And(expr, self.unary())
        return expr

    def unary(self) -> Expr:
        kind = self.peek()
        if kind == "~":
            self.take("~")
            return Not(self.unary())
        if kind == "(":
            self.take("(")
            expr = self.disjunction()
            self.take(")")
            return expr
        if kind == "var":
            return Var(self.take("var")[1])
        self.fail(f"Expected a variable, '~' or '(', found {kind or 'end of input'!r}")
        return None  # unreachable


def parse_formula(text: str, n_vars: Optional[int] = None) -> BoolFormula:
    """Parse the ``x1 & ~(x2 | x3)`` grammar; a ``# vars: N`` line fixes the variable count."""
    for line in text.splitlines():
        match = _VARS_LINE.match(line)
        if match and n_vars is None:
            n_vars = int(match.group(1))
    root = _Parser(text).parse()
    largest = max(v.index for v in iter_nodes(root) if isinstance(v, Var)) + 1
    if n_vars is None:
        n_vars = largest
    elif largest > n_vars:
        raise FormulaSyntaxError(f"x{largest} used with only {n_vars} variables", 1, 1)
    return BoolFormula(n_vars, root)


def conjunction(exprs: List[Expr]) -> Expr:
    """Balanced AND of a non-empty list."""
    if len(exprs) == 1:
        return exprs[0]
    middle = len(exprs) // 2
    return And(conjunction(exprs[:middle]), conjunction(exprs[middle:]))


def disjunction(exprs: List[Expr]) -> Expr:
    if len(exprs) == 1:
        return exprs[0]
    middle = len(exprs) // 2
    return Or(disjunction(exprs[:middle]), disjunction(exprs[middle:]))


def parse_dimacs(text: str) -> BoolFormula:
    """DIMACS CNF: ``p cnf <vars> <clauses>`` header, ``c`` comments, clauses ending in 0."""
    n_vars, clauses, literals = None, [], []
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaSyntaxError(f"Invalid problem line {line!r}", line_number, 1)
            column = line.index(parts[2], len(parts[0]) + len(parts[1])) + 1
            if not parts[2].isdigit() or int(parts[2]) < 1:
                raise FormulaSyntaxError(
                    f"Variable count must be a positive integer ({parts[2]!r})", line_number, column
                )
            n_vars = int(parts[2])
            continue
        if n_vars is None:
            raise FormulaSyntaxError("Clause before the problem line", line_number, 1)
        for token in line.split():
            try:
                literal = int(token)
            except ValueError as exc:
                raise FormulaSyntaxError(
                    f"Invalid literal {token!r}", line_number, line.index(token) + 1
                ) from exc
            if literal == 0:
                # the empty clause is unsatisfiable
                clauses.append(disjunction(literals) if literals else And(Var(0), Not(Var(0))))
                literals = []
            elif abs(literal) > n_vars:
                column = line.index(token) + 1
                raise FormulaSyntaxError(
                    f"Literal {literal} exceeds {n_vars} variables", line_number, column
                )
            else:
                var = Var(abs(literal) - 1)
                literals.append(var if literal > 0 else Not(var))
    if literals:
        raise FormulaSyntaxError("Last clause is not terminated by 0", line_number, 1)
    if n_vars is None:
        raise FormulaSyntaxError("Missing problem line", 1, 1)
    if not clauses:
        # no clauses: every assignment satisfies the formula
        clauses = [Or(Var(0), Not(Var(0)))]
    logger.info(f"Read {len(clauses)} clauses over {n_vars} variables")
    return BoolFormula(n_vars, conjunction(clauses))

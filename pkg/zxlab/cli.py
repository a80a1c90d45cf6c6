import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple, Union

from . import __version__
from .core.circuits import (
    AuxCircuit,
    Circuit,
    aux_branch_operators,
    aux_is_deterministic,
    circuit_matrix,
)
from .core.diagram import Diagram
from .core.errors import SizeCapExceeded, VerificationError
from .core.evaluate import EXACT, FLOAT, FloatMatrix, Matrix, contract
from .core.formula import BoolFormula, truth_table
from .core.gadgets import and_gadget, formula_map, hardness_gadget, not_gadget, sampling_gadget
from .core.options import Options
from .core.reader import MATRIX, read
from .core.reduction import (
    approx_pipeline,
    aux_pipeline,
    brute_force_count,
    decode_count_approx,
    decode_count_exact,
    sat_decide_randomized,
    theorem1_pipeline,
)
from .core.rewrite import bound_degree, simplify
from .core.verify import is_proportional, sample, sample_counts, unitary_up_to_scalar
from .core.writer import Writer
from .globals import (
    DEFAULT_SAMPLES,
    DEFAULT_TRIALS,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_SIZE_CAP,
    EXIT_USAGE,
    FLOAT_TOLERANCE,
    STDOUT,
)
from .log import setup_logging

logger = logging.getLogger(__name__)

GADGETS = ("not", "and", "lf", "hardness", "sampling")

FLAG_NAMES = {"float_mode": "float"}

METAVARS = {
    k: value
    for keys, value in [
        (["output", "matrix"], "PATH"),
        (["size_cap"], "ENTRIES"),
        (["n", "max_degree", "assumed_n1", "count", "trials", "m"], "INT"),
        (["eps", "tolerance"], "FLOAT"),
        (["pauli"], "{x,y,z}"),
        (["seed"], "SEED"),
    ]
    for k in keys
}

Result = Tuple[dict, int]
Operator = Union[Diagram, Circuit, AuxCircuit]


def _read_one(paths: List[str], expected: Tuple[type, ...], what: str):
    if len(paths) != 1:
        raise ValueError(f"Expected one {what} file, got {len(paths)}.")
    source = read(paths[0])
    if not isinstance(source, expected):
        raise ValueError(f"Expected a {what} file, {paths[0]} holds a {type(source).__name__}.")
    return source


def _needs_float(source: Operator) -> bool:
    if isinstance(source, Diagram):
        return source.has_matrix_boxes()
    if isinstance(source, Circuit):
        return bool(source.symbolic_angles())
    return True


def _mode(options: Options, *sources: Operator) -> str:
    if options.float_mode:
        return FLOAT
    if options.exact:
        return EXACT
    return FLOAT if any(_needs_float(source) for source in sources) else EXACT


def _operator_matrix(source: Operator, mode: str, size_cap: Optional[int]) -> Matrix:
    """The matrix a diagram or circuit file denotes; aux circuits must be deterministic."""
    if isinstance(source, Diagram):
        return contract(source, mode=mode, size_cap=size_cap)
    if isinstance(source, Circuit):
        return circuit_matrix(source, mode)
    if isinstance(source, AuxCircuit):
        deterministic, unitary = aux_is_deterministic(source, size_cap)
        if not deterministic:
            raise VerificationError("Aux circuit does not implement a single unitary.")
        return unitary
    raise ValueError(f"Expected a diagram or circuit file, got a {type(source).__name__}.")


def _tolerance(options: Options, mode: str) -> float:
    if options.tolerance is not None:
        return options.tolerance
    return FLOAT_TOLERANCE if mode == FLOAT else 0.0


def _eval(paths: List[str], options: Options) -> Result:
    d = _read_one(paths, (Diagram,), "diagram")
    mode = _mode(options, d)
    matrix = contract(d, mode=mode, size_cap=options.size_cap)
    record = {"mode": mode, "shape": list(matrix.shape), "entries": matrix}
    if isinstance(matrix, FloatMatrix):
        record["error_bound"] = matrix.error_bound
    return record, EXIT_OK


def _simplify(paths: List[str], options: Options) -> Result:
    d = simplify(_read_one(paths, (Diagram,), "diagram"))
    if options.max_degree:
        d = bound_degree(d, options.max_degree)
    return d.to_dict(), EXIT_OK


def _gadget(paths: List[str], options: Options) -> Result:
    if not paths or paths[0] not in GADGETS:
        raise ValueError(f"Expected a gadget name, one of {GADGETS}.")
    kind, files = paths[0], paths[1:]
    if kind == "not":
        d = not_gadget()
    elif kind == "and":
        d = and_gadget()
    else:
        f = _read_one(files, (BoolFormula,), "formula")
        if kind == "lf":
            d = formula_map(f)
        elif kind == "hardness":
            d = hardness_gadget(f, options.pauli or "x")
        else:
            d = sampling_gadget(f, options.assumed_n1 or 1)
    if options.max_degree:
        d = bound_degree(d, options.max_degree)
    return d.to_dict(), EXIT_OK


def _count(paths: List[str], options: Options) -> Result:
    f = _read_one(paths, (BoolFormula,), "formula")
    pauli = options.pauli or "x"
    if options.aux:
        result = aux_pipeline(f, pauli, options.size_cap)
    elif options.approx:
        result = approx_pipeline(f, options.eps, pauli, options.size_cap)
    else:
        result = theorem1_pipeline(f, pauli, options.size_cap)

    record, exit_code = {"n1": result.n1}, EXIT_OK
    if options.brute_check:
        expected = brute_force_count(f).n1
        if expected == result.n1:
            record["check"] = "ok"
        else:
            logger.error(f"Extracted count {result.n1} differs from brute force {expected}")
            record.update(check="mismatch", expected=expected)
            exit_code = EXIT_MISMATCH
    if options.pretty:
        record["provenance"] = result.provenance
        record["truth_table"] = truth_table(f)
    return record, exit_code


def _decode(paths: List[str], options: Options) -> Result:
    if paths or options.matrix is None or options.n is None:
        raise ValueError("decode takes --matrix PATH and --n INT and no positional files.")
    m = read(options.matrix, kind=MATRIX)
    pauli = options.pauli or "x"
    if options.approx or isinstance(m, FloatMatrix):
        result = decode_count_approx(m, options.n, pauli)
    else:
        result = decode_count_exact(m, options.n, pauli)
    return {"n1": result.n1, "n0": result.n0, "provenance": result.provenance}, EXIT_OK


def _check_unitary(paths: List[str], options: Options) -> Result:
    d = _read_one(paths, (Diagram,), "diagram")
    mode = _mode(options, d)
    verdict = unitary_up_to_scalar(d, options.size_cap, mode, _tolerance(options, mode))
    record = {"unitary": verdict.unitary}
    if verdict.unitary:
        record["scalar"] = verdict.scalar
    return record, EXIT_OK


def _check_prop(paths: List[str], options: Options) -> Result:
    if len(paths) != 2:
        raise ValueError(f"check-prop compares two diagram or circuit files, got {len(paths)}.")
    first, second = read(paths[0]), read(paths[1])
    mode = _mode(options, first, second)
    proportional, witness = is_proportional(
        _operator_matrix(first, mode, options.size_cap),
        _operator_matrix(second, mode, options.size_cap),
        phase_only=bool(options.phase_only),
        tolerance=_tolerance(options, mode),
    )
    return {"proportional": proportional, "witness": witness}, EXIT_OK


def _sample(paths: List[str], options: Options) -> Result:
    d = _read_one(paths, (Diagram,), "diagram")
    samples = sample(
        d,
        options.seed or 0,
        DEFAULT_SAMPLES if options.count is None else options.count,
        promise_arbitrary=bool(options.promise_arbitrary),
        size_cap=options.size_cap,
    )
    return {"samples": samples, "counts": sample_counts(samples)}, EXIT_OK


def _vv_demo(paths: List[str], options: Options) -> Result:
    f = _read_one(paths, (BoolFormula,), "formula")
    decision = sat_decide_randomized(
        f, options.seed or 0, options.trials or DEFAULT_TRIALS, options.m, options.size_cap
    )
    record = {
        "sat": decision.sat,
        "rounds": len(decision.report),
        "majority_rounds": int(decision.report["majority"].sum()),
    }
    exit_code = EXIT_OK
    if options.brute_check:
        expected = brute_force_count(f).n1 > 0
        record["check"] = "ok" if expected == decision.sat else "mismatch"
        if expected != decision.sat:
            logger.error(f"Randomized decision {decision.sat} differs from brute force {expected}")
            exit_code = EXIT_MISMATCH
    if options.pretty:
        record["report"] = decision.report
    return record, exit_code


def _aux_check(paths: List[str], options: Options) -> Result:
    c = _read_one(paths, (Circuit, AuxCircuit), "circuit")
    if not isinstance(c, AuxCircuit):
        c = AuxCircuit(c.n_qubits, 0, list(c.gates))
    deterministic, unitary = aux_is_deterministic(c, options.size_cap)
    branches = aux_branch_operators(c, options.size_cap)
    record = {
        "deterministic": deterministic,
        "branches": [{"outcome": b.outcome, "weight": round(b.weight, 12)} for b in branches],
    }
    if deterministic and options.pretty:
        record["unitary"] = unitary
    return record, EXIT_OK


COMMANDS: Dict[str, Callable[[List[str], Options], Result]] = {
    "eval": _eval,
    "simplify": _simplify,
    "gadget": _gadget,
    "count": _count,
    "decode": _decode,
    "check-unitary": _check_unitary,
    "check-prop": _check_prop,
    "sample": _sample,
    "vv-demo": _vv_demo,
    "aux-check": _aux_check,
}


def run(cli_input: Optional[List[str]] = None) -> int:
    parser = get_parser()
    cli_args = parser.parse_args(cli_input)

    try:
        # pylint: disable=unsupported-membership-test
        options = Options(**{k: v for k, v in vars(cli_args).items() if k in Options.fields()})
    except AssertionError as error:
        logger.error(f"Invalid options: {error}")
        return EXIT_USAGE
    if options.verbose:
        setup_logging(logging.INFO)
    logger.debug(f"Running {cli_args.command} with {options}")

    try:
        record, exit_code = COMMANDS[cli_args.command](cli_args.paths, options)
        writer = Writer(options.output or STDOUT, bool(options.pretty))
        writer(record)
    except SizeCapExceeded as error:
        logger.error(f"{error}")
        return EXIT_SIZE_CAP
    except VerificationError as error:
        logger.error(f"Verification failed: {error}")
        return EXIT_MISMATCH
    except (ValueError, AssertionError, FileNotFoundError, FileExistsError) as error:
        logger.error(f"{error}")
        return EXIT_USAGE
    return exit_code


class _Parser(argparse.ArgumentParser):
    """Exits with the usage code on bad arguments."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def get_parser() -> argparse.ArgumentParser:
    cli_doc_head = "Evaluate ZX-diagrams exactly and run the counting and sampling reductions."
    parser = _Parser(prog="zxlab", description=cli_doc_head, add_help=True)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=list(COMMANDS), help="action to perform.")
    parser.add_argument(
        "paths",
        nargs="*",
        help="input files (gadget takes a gadget name first: " + ", ".join(GADGETS) + ").",
    )

    for component_class in Options.component_classes():
        group = parser.add_argument_group(component_class.name() + " arguments")

        for field_name, field_doc in component_class.field_docs().items():
            field_type = component_class.field_types()[field_name]
            add_arg_kwargs = dict(
                help=field_doc,
                required=False,
                default=None,
                dest=field_name,
            )
            if field_type is bool:
                add_arg_kwargs["action"] = "store_true"
            else:
                add_arg_kwargs["type"] = field_type
                add_arg_kwargs["metavar"] = METAVARS.get(field_name, field_type.__name__.upper())

            flag = FLAG_NAMES.get(field_name, field_name.replace("_", "-"))
            group.add_argument("--" + flag, **add_arg_kwargs)

    return parser

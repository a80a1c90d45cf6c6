"""Classes and methods for representation of command-line options."""
import re
from abc import ABC, abstractmethod
from dataclasses import Field, asdict, dataclass, fields
from inspect import getdoc, getmro
from typing import Any, Dict, List, Optional, get_args

from zxlab.core.gadgets import PAULIS


class _FieldHelper:
    """Mixin for generating metadata for a dataclass."""

    @classmethod
    def fields(cls) -> Dict[str, Field]:
        return {f.name: f for f in fields(cls)}

    @classmethod
    def field_docs(cls) -> Dict[str, str]:
        _, doc = cls.__doc__.split("Args:", 1)
        doc = re.sub(r"\n\s{12,}", " ", doc.strip())

        field_docs = {}
        field_names = list(cls.fields())
        for line in doc.split("\n"):
            for name in field_names:
                if line.strip().startswith(name + ":"):
                    field_names.remove(name)
                    _, field_doc = line.split(":", 1)
                    field_docs[name] = field_doc.strip()
                    break
        return field_docs

    @classmethod
    def field_types(cls) -> Dict[str, type]:
        field_types = {}
        for name, f in cls.fields().items():
            if callable(f.type) and not hasattr(f.type, "__args__"):
                f_type = f.type
            else:
                f_type = next(t for t in get_args(f.type) if t is not None and callable(t))
            field_types[name] = f_type
        return field_types


class _FieldChecker:
    def assert_fields_bounded(self, field_names, min_value=None, max_value=None):
        for field_name in field_names:
            field_value = getattr(self, field_name)
            if field_value is not None:
                assert (
                    min_value is None or min_value <= field_value
                ), f"{field_name} is less than {min_value}."
                assert (
                    max_value is None or field_value <= max_value
                ), f"{field_name} is greater than {max_value}."

    def assert_fields_mutually_exclusive(self, field_names):
        n_values_set = sum(int(bool(getattr(self, field_name))) for field_name in field_names)
        assert n_values_set <= 1, f"Only one of {field_names} can be accepted."

    def assert_field_allowed_values(self, field_name, allowed_values):
        field_value = getattr(self, field_name)
        assert field_value is None or field_value in allowed_values, (
            f"Invalid {field_name} ({field_value}), " f"must be one of {allowed_values}."
        )


@dataclass
class _BaseOptions(_FieldHelper, _FieldChecker):
    """Base dataclass chaining the post-init calls of the option groups.

    Each option group inherits from this class. A group's __post_init__ must call
    super().__post_init__ so that every group gets checked.
    """

    def __post_init__(self):
        """Auto-typecast fields as their appropriate types."""
        for field_name, field_type in self.field_types().items():
            value = getattr(self, field_name)
            if value is not None and not isinstance(value, field_type):
                setattr(self, field_name, field_type(value))

    @classmethod
    def name(cls) -> str:
        name = cls.__name__.removeprefix("_").removesuffix("Options")
        return re.sub(r"(\w)([A-Z])", r"\1 \2", name).lower()

    def __str__(self):
        out = self.__class__.__name__ + "("
        for key, value in asdict(self).items():
            if value is not None:
                out += "\n" + 4 * " " + f"{key}: {str(value)}"
        out += "\n)"
        return out


@dataclass
class _ContractionOptions(_BaseOptions):
    """Options for evaluating diagrams.

    Args:
        [Contraction]
        exact: Evaluate in the cyclotomic field (the default for diagrams without matrix boxes).
        float_mode: Evaluate in complex floating point with a certified error bound.
        size_cap: Largest intermediate tensor, in entries, a contraction may build (defaults to
            $ZXLAB_SIZE_CAP or 2**20).
    """

    exact: Optional[bool] = None
    float_mode: Optional[bool] = None
    size_cap: Optional[int] = None

    def __post_init__(self):
        super().__post_init__()
        self.assert_fields_mutually_exclusive(["exact", "float_mode"])
        self.assert_fields_bounded(["size_cap"], 1, None)


@dataclass
class _OutputOptions(_BaseOptions):
    """Options for reporting results.

    Args:
        [Output]
        output: Write the result to this file instead of standard output.
        pretty: Print a human-readable report instead of compact JSON.
        verbose: Log progress at INFO level.
    """

    output: Optional[str] = None
    pretty: Optional[bool] = None
    verbose: Optional[bool] = None


@dataclass
class _FormulaOptions(_BaseOptions):
    """Options for formula gadgets.

    Args:
        [Formula]
        pauli: Pauli of the controlled operation in the hardness gadget (one of "x", "y", "z").
        max_degree: Unfuse spiders so that none has more than this many legs (at least 3).
        assumed_n1: Solution count the sampling gadget is boosted for.
    """

    pauli: Optional[str] = None
    max_degree: Optional[int] = None
    assumed_n1: Optional[int] = None

    def __post_init__(self):
        super().__post_init__()
        self.assert_field_allowed_values("pauli", PAULIS)
        self.assert_fields_bounded(["max_degree"], 3, None)
        self.assert_fields_bounded(["assumed_n1"], 1, None)


@dataclass
class _DecodeOptions(_BaseOptions):
    """Options for counting and decoding.

    Args:
        [Decode]
        matrix: Matrix file to decode.
        n: Number of variables the decoded count ranges over.
        approx: Use the approximate extraction oracle and rounding decoder.
        aux: Use the aux-register extraction oracle.
        eps: Precision of the approximate extraction oracle (defaults to 2**-(n+2)).
        brute_check: Compare the count with a brute-force enumeration.
    """

    matrix: Optional[str] = None
    n: Optional[int] = None
    approx: Optional[bool] = None
    aux: Optional[bool] = None
    eps: Optional[float] = None
    brute_check: Optional[bool] = None

    def __post_init__(self):
        super().__post_init__()
        self.assert_fields_mutually_exclusive(["approx", "aux"])
        self.assert_fields_bounded(["n"], 1, None)
        self.assert_fields_bounded(["eps"], 0, None)


@dataclass
class _VerifyOptions(_BaseOptions):
    """Options for proportionality checks.

    Args:
        [Verify]
        phase_only: Require the proportionality constant to have modulus 1.
        tolerance: Relative slack allowed on top of the certified float error.
    """

    phase_only: Optional[bool] = None
    tolerance: Optional[float] = None

    def __post_init__(self):
        super().__post_init__()
        self.assert_fields_bounded(["tolerance"], 0, None)


@dataclass
class _SamplingOptions(_BaseOptions):
    """Options for sampling.

    Args:
        [Sampling]
        seed: Seed of the sample stream; sample i depends only on (seed, i).
        count: Number of samples to draw.
        trials: Samples drawn per isolation round.
        m: Number of isolation rounds (defaults to 8 per variable).
        promise_arbitrary: Return arbitrary samples instead of failing on non-unitary diagrams.
    """

    seed: Optional[int] = None
    count: Optional[int] = None
    trials: Optional[int] = None
    m: Optional[int] = None
    promise_arbitrary: Optional[bool] = None

    def __post_init__(self):
        super().__post_init__()
        self.assert_fields_bounded(["seed", "count"], 0, None)
        self.assert_fields_bounded(["trials", "m"], 1, None)


class _CompositeFieldDocumenter(ABC):
    @classmethod
    @abstractmethod
    def doc_head(cls) -> str:
        return ""

    @classmethod
    def generate_doc(cls) -> str:
        doc = "\n\n".join([cls.doc_head().removesuffix("\n"), "Args:"])
        for class_name in cls.component_classes():
            _, args_doc = getdoc(class_name).split("Args:", 1)
            doc = "\n".join([doc, args_doc])
        return doc

    @classmethod
    def component_classes(cls) -> List[Any]:
        return [
            class_name
            for class_name in getmro(cls)
            if class_name
            not in [
                cls,
                _BaseOptions,
                ABC,
                object,
                _FieldHelper,
                _FieldChecker,
                _CompositeFieldDocumenter,
            ]
        ]


@dataclass
class Options(
    _CompositeFieldDocumenter,
    _ContractionOptions,
    _OutputOptions,
    _FormulaOptions,
    _DecodeOptions,
    _VerifyOptions,
    _SamplingOptions,
):
    """Every command-line option, grouped by concern."""

    @classmethod
    def doc_head(cls) -> str:
        return "Options shared by the zxlab subcommands."

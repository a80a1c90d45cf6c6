from dataclasses import Field, dataclass
from inspect import getdoc
from typing import Optional
from unittest.mock import patch

import pytest

from zxlab.core.options import (
    Options,
    _BaseOptions,
    _CompositeFieldDocumenter,
    _ContractionOptions,
    _DecodeOptions,
    _FormulaOptions,
    _SamplingOptions,
)


@dataclass
class _ComponentMockOptions(_BaseOptions):
    """A mock option group.

    Args:
        [Mock]
        mock_field: A mock field.
        another_mock_field: Another mock field
            with a multiline docstring.
        flag_field: A flag.
    """

    mock_field: Optional[int] = None
    another_mock_field: Optional[float] = None
    flag_field: Optional[bool] = None


@dataclass
class MockOptions(_CompositeFieldDocumenter, _ComponentMockOptions):
    """Mock composite of option groups."""

    @classmethod
    def doc_head(cls) -> str:
        return "DOC HEAD"

    def __post_init__(self):
        super().__post_init__()
        self._mock_post_init_called = True


class TestFieldChecker:
    def test_assert_fields_bounded(self):
        options = _ComponentMockOptions(mock_field=4)
        options.assert_fields_bounded(["mock_field", "another_mock_field"], 3, 5)

    @pytest.mark.parametrize("min_value, max_value", [(5, 6), (5, None), (1, 2), (None, 2)])
    def test_raise_assert_fields_bounded(self, min_value, max_value):
        options = _ComponentMockOptions(mock_field=4)
        with pytest.raises(AssertionError):
            options.assert_fields_bounded(
                ["another_mock_field", "mock_field"], min_value, max_value
            )

    def test_assert_fields_mutually_exclusive(self):
        options = _ComponentMockOptions(mock_field=4, flag_field=False)
        options.assert_fields_mutually_exclusive(["mock_field", "flag_field"])

    def test_raise_assert_fields_mutually_exclusive(self):
        options = _ComponentMockOptions(mock_field=4, flag_field=True)
        with pytest.raises(AssertionError):
            options.assert_fields_mutually_exclusive(["mock_field", "flag_field"])

    def test_assert_field_allowed_values(self):
        options = _ComponentMockOptions(mock_field=4)
        options.assert_field_allowed_values("mock_field", [4])
        options.assert_field_allowed_values("another_mock_field", [1.0])
        with pytest.raises(AssertionError):
            options.assert_field_allowed_values("mock_field", [5])


class TestBaseOptions:
    def test_name(self):
        assert _ComponentMockOptions.name() == "component mock"
        assert _ContractionOptions.name() == "contraction"

    def test_fields(self):
        fields = _ComponentMockOptions.fields()
        assert list(fields) == ["mock_field", "another_mock_field", "flag_field"]
        assert all(isinstance(f, Field) for f in fields.values())

    def test_field_docs(self):
        assert _ComponentMockOptions.field_docs() == {
            "mock_field": "A mock field.",
            "another_mock_field": "Another mock field with a multiline docstring.",
            "flag_field": "A flag.",
        }

    def test_field_types(self):
        assert _ComponentMockOptions.field_types() == {
            "mock_field": int,
            "another_mock_field": float,
            "flag_field": bool,
        }

    def test_typecast(self):
        options = _ComponentMockOptions(mock_field="12", another_mock_field=1)
        assert options.mock_field == 12
        assert isinstance(options.another_mock_field, float)

    def test_post_init(self):
        with patch("zxlab.core.options._BaseOptions.__post_init__") as mock_post_init:
            options = MockOptions()
            mock_post_init.assert_called()
            assert options._mock_post_init_called  # pylint: disable=protected-access

    def test_str(self):
        text = str(_ComponentMockOptions(mock_field=3))
        assert text == "_ComponentMockOptions(\n    mock_field: 3\n)"

    def test_generate_doc(self):
        doc = MockOptions.generate_doc()
        assert doc.startswith("DOC HEAD\n\nArgs:")
        _, args_doc = getdoc(_ComponentMockOptions).split("Args:", 1)
        assert doc.endswith(args_doc)


class TestOptions:
    def test_defaults(self):
        options = Options()
        assert all(getattr(options, name) is None for name in Options.fields())

    def test_component_classes(self):
        names = [c.name() for c in Options.component_classes()]
        assert names == ["contraction", "output", "formula", "decode", "verify", "sampling"]

    def test_every_field_documented(self):
        documented = {}
        for component in Options.component_classes():
            documented.update(component.field_docs())
        assert set(documented) == set(Options.fields())

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(exact=True, float_mode=True),
            dict(size_cap=0),
            dict(pauli="w"),
            dict(max_degree=2),
            dict(assumed_n1=0),
            dict(approx=True, aux=True),
            dict(n=0),
            dict(eps=-0.1),
            dict(tolerance=-1.0),
            dict(seed=-1),
            dict(trials=0),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(AssertionError):
            Options(**kwargs)

    def test_valid(self):
        options = Options(pauli="y", max_degree=3, n=4, eps=0.01, seed=0, trials=5, m=2)
        assert options.pauli == "y"
        assert options.n == 4

    @pytest.mark.parametrize(
        "component, kwargs",
        [
            (_FormulaOptions, dict(pauli="z")),
            (_DecodeOptions, dict(approx=True, n=3)),
            (_SamplingOptions, dict(seed=7, count=0)),
        ],
    )
    def test_components(self, component, kwargs):
        options = component(**kwargs)
        for key, value in kwargs.items():
            assert getattr(options, key) == value

import io
import math

import numpy as np
import pytest

from meancalc.expr import parse
from meancalc.functions import from_expression, label_of, wrap
from meancalc.tabular import load_csv


class TestFromExpression:
    def test_scalar_and_vector_agree(self):
        h = from_expression("x^2")
        assert h(0.5) == 0.25
        np.testing.assert_allclose(h.values_at([1.0, 2.0, 3.0]), [1.0, 4.0, 9.0])

    def test_label_defaults_to_source(self):
        assert from_expression("x^2").label == "(x ^ 2)"
        assert from_expression("x^2", label="square").label == "square"

    def test_accepts_parsed_tree(self):
        h = from_expression(parse("sin(x)"))
        assert h(math.pi / 2) == pytest.approx(1.0)


class TestWrap:
    def test_plain_callable(self):
        h = wrap(math.sin)
        assert h(0.0) == 0.0
        assert h.label == "sin"
        assert h.values_at([0.0, math.pi / 2]).tolist() == pytest.approx([0.0, 1.0])

    def test_tabular_function_keeps_vector_path(self):
        tf = load_csv(io.StringIO("0,0\n2,4\n"), source="chord")
        h = wrap(tf)
        assert h(1.0) == 2.0
        np.testing.assert_allclose(h.values_at([0.0, 2.0]), [0.0, 4.0])
        assert h.label == "chord"

    def test_idempotent_on_handles(self):
        h = from_expression("x")
        assert wrap(h) is h
        assert wrap(h, label="renamed").label == "renamed"

    def test_rejects_non_callable(self):
        with pytest.raises(TypeError):
            wrap(42)


class TestLabelOf:
    def test_expression_tree(self):
        assert label_of(parse("x + 1")) == "(x + 1)"

    def test_named_function(self):
        assert label_of(math.cos) == "cos"

    def test_lambda_falls_back_to_type(self):
        assert label_of(lambda x: x) == "function"

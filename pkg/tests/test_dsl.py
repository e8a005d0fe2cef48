from pathlib import Path

import pytest

from toricmirror.algebra import LaurentPoly
from toricmirror.dsl import load_document, parse_expr, parse_model_file, print_expr, print_file
from toricmirror.dsl.lexer import tokenize
from toricmirror.errors import ParseError, PipelineError, SemanticError

from conftest import CORPUS

COTANGENT = """
model ts2 {
  affine y, w, p;
  torus s1, s2;
  potential y*w*p + (1 + s1)*y + (1 + s2)*w;
  sigma s1 = s1;
  sigma s2 = s2;
}
"""


def test_parse_cotangent_sphere():
    doc = load_document(COTANGENT)
    m = doc.model("ts2")
    assert m.names == ("y", "w", "p", "s1", "s2")
    assert [v.spec for v in m.vars] == ["affine"] * 3 + ["torus"] * 2
    y, w, p, s1, s2 = (LaurentPoly.var(m.vars, n) for n in m.names)
    assert m.potential == y * w * p + (1 + s1) * y + (1 + s2) * w
    assert m.sigma("s2") == s2


def test_empty_file():
    doc = load_document("")
    assert list(doc.items) == []
    assert doc.check_all() == []


def test_comments_and_whitespace_only():
    assert list(load_document("# nothing here\n\n  # still nothing\n").items) == []


def test_domain_violation_is_located():
    text = "model m { affine x; potential x^-1; }"
    with pytest.raises(SemanticError) as info:
        load_document(text).model("m")
    assert info.value.line == 1
    assert info.value.col == text.index("x^-1") + 1


def test_parse_error_location():
    text = "model m {\n  torus x;\n  potential x +;\n}\n"
    with pytest.raises(ParseError) as info:
        parse_model_file(text)
    assert info.value.line == 3
    assert info.value.col > 1


def test_lexer_rejects_stray_character():
    with pytest.raises(ParseError) as info:
        tokenize("model m { torus x; potential x $ 1; }")
    assert info.value.col == 32


def test_unknown_variable_in_expression():
    with pytest.raises(SemanticError):
        load_document("model m { torus x; potential y; }").model("m")


def test_unknown_entity():
    with pytest.raises(SemanticError):
        load_document("pipeline q on missing { slice s = 1; }").model("q")


def test_pipeline_error_reports_step_location():
    text = (
        "model m { torus y, s; potential (1 + s)*y; sigma s = s; }\n"
        "pipeline q on m {\n"
        "  slice s = 2;\n"
        "  knorrer-reduce y;\n"
        "}\n"
    )
    with pytest.raises(PipelineError) as info:
        load_document(text).model("q")
    assert (info.value.line, info.value.col) == (4, 3)
    assert info.value.step == 1
    assert info.value.pipeline == "q"


def test_expression_round_trip():
    for text in ["(1 + s)*y", "x^-1 + 1/2*x*y", "-(a - b)^2", "p*u^2 + y*(1 + s)"]:
        node = parse_expr(text)
        assert parse_expr(print_expr(node)) == node


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.tmc")), ids=lambda p: p.stem)
def test_corpus_round_trip(path: Path):
    tree = parse_model_file(path.read_text())
    printed = print_file(tree)
    again = parse_model_file(printed)
    assert print_file(again) == printed
    assert again == tree


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.tmc")), ids=lambda p: p.stem)
def test_corpus_expectations_hold(path: Path):
    doc = load_document(path.read_text())
    results = doc.check_all()
    assert results
    failed = [r.to_json() for r in results if not r.passed]
    assert failed == []


def test_expect_result_json():
    doc = load_document(COTANGENT + "expect crit-contained-in ts2 s1 + 1;\n")
    (r,) = doc.check_all()
    out = r.to_json()
    assert set(out) == {"kind", "subject", "line", "passed", "detail"}
    assert out["passed"] and out["kind"] == "crit-contained-in" and out["subject"] == "ts2"


def test_failed_expectation_is_reported_not_raised():
    doc = load_document(COTANGENT + "expect crit-empty ts2;\n")
    (r,) = doc.check_all()
    assert not r.passed


def test_formal_order_option():
    text = "model m { torus y; formal h; potential (1 + h)^5*y; }"
    m = load_document(text, formal_order=2).model("m")
    y, h = (LaurentPoly.var(m.vars, n) for n in ("y", "h"))
    assert m.potential == (1 + 5 * h) * y

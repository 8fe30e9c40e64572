import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from cocycle_persistence.documents import (
    InputDocument,
    compile_document,
    fraction_str,
    load_document,
    parse_fraction,
)
from cocycle_persistence.errors import ParseError, SchemaError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_parse_fraction_forms():
    assert parse_fraction("3") == F(3)
    assert parse_fraction("3/4") == F(3, 4)
    assert parse_fraction("-7/2") == F(-7, 2)
    with pytest.raises(ParseError):
        parse_fraction("0.1x")


def test_fraction_str_normal_form():
    assert fraction_str(F(3)) == "3/1"
    assert fraction_str(F(-1, 2)) == "-1/2"


def test_load_circle_fixture():
    doc = load_document(FIXTURES / "circle.json")
    ci = compile_document(doc)
    assert ci.complex.vertex_count == 3
    assert len(ci.complex.edges()) == 3
    assert ci.alpha == F(3)
    assert ci.cocycle.value(0, 1) == 1
    assert ci.cocycle.value(2, 0) == 1


def test_roundtrip_every_fixture():
    for path in sorted(FIXTURES.glob("*.json")):
        doc = load_document(path)
        again = InputDocument.model_validate(json.loads(doc.model_dump_json()))
        assert again == doc


def test_unknown_vertex_in_edge():
    doc = InputDocument(
        vertices=["a", "b"],
        simplices=[["a", "b"]],
        cocycle={"a,z": "1"},
    )
    with pytest.raises(SchemaError) as err:
        compile_document(doc)
    assert "a,z" in str(err.value)


def test_non_edge_key_rejected():
    doc = InputDocument(
        vertices=["a", "b", "c"],
        simplices=[["a", "b"]],
        cocycle={"a,c": "1"},
    )
    with pytest.raises(SchemaError):
        compile_document(doc)


def test_bad_rational_value():
    doc = InputDocument(
        vertices=["a", "b"],
        simplices=[["a", "b"]],
        cochain0={"a": "0", "b": "0.1x"},
    )
    with pytest.raises(ParseError):
        compile_document(doc)


def test_duplicate_names_rejected():
    doc = InputDocument(vertices=["a", "a"], simplices=[["a"]])
    with pytest.raises(SchemaError):
        compile_document(doc)


def test_reversed_edge_key_negates():
    doc = InputDocument(
        vertices=["a", "b"],
        simplices=[["a", "b"]],
        cocycle={"b,a": "5"},
    )
    ci = compile_document(doc)
    assert ci.cocycle.value(0, 1) == -5

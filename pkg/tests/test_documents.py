import json
from fractions import Fraction

import pytest

from freechoquet.core import Measure, molecule
from freechoquet.demos import fixture_text, load_fixture
from freechoquet.documents import (
    DocumentSyntaxError,
    SemanticError,
    emit_space,
    measure_document,
    parse_measure,
    parse_rational,
    parse_space,
    parse_vector,
)

HALF = Fraction(1, 2)


@pytest.mark.parametrize("name", ["L3", "W4", "D4"])
def test_fixture_round_trip(name):
    text = fixture_text(f"{name}.json")
    space = parse_space(text)
    canonical = emit_space(space)
    assert parse_space(canonical) == space
    assert emit_space(parse_space(canonical)) == canonical


def test_sparse_and_matrix_forms_agree(W4):
    assert load_fixture("W4") == W4
    doc = json.loads(emit_space(W4))
    assert doc["distances"][1][2] == "1/2"


def test_l3_fixture(L3):
    assert load_fixture("L3") == L3


@pytest.mark.parametrize("value, expected", [("3/6", HALF), (" -2 ", Fraction(-2)), (7, Fraction(7))])
def test_parse_rational(value, expected):
    assert parse_rational(value, "x") == expected


@pytest.mark.parametrize("value", ["1/0", 0.5, True, "1.5", "", None, "a/b"])
def test_parse_rational_rejects(value):
    with pytest.raises(DocumentSyntaxError):
        parse_rational(value, "x")


def test_zero_denominator_mass_is_syntax_error(L3):
    with pytest.raises(DocumentSyntaxError) as info:
        parse_measure('[{"from": "1", "to": "0", "mass": "1/0"}]', L3)
    assert info.value.where == "measure[0].mass"


def test_invalid_json_reports_position():
    with pytest.raises(DocumentSyntaxError) as info:
        parse_space('{"points": [\n  "0",, ]}')
    assert "line 2" in info.value.where


@pytest.mark.parametrize(
    "doc, error",
    [
        ({"points": ["0", "1", "2"], "base": "0"}, DocumentSyntaxError),
        ({"points": ["0", "1", "2"], "base": "0", "distances": [[0, 1], [1, 0]]}, DocumentSyntaxError),
        ({"points": ["0", "1", "2"], "base": "0",
          "distances": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}, SemanticError),
        ({"points": ["0", "1", "2"], "base": "9",
          "distances": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]}, SemanticError),
        ({"points": ["0", "1", "2"], "base": "0",
          "distances": [{"from": "0", "to": "1", "d": "1"}]}, DocumentSyntaxError),
        ({"points": ["0", "1", "2"], "base": "0",
          "distances": [{"from": "0", "to": "1", "d": "1"}, {"from": "1", "to": "0", "d": "2"}]}, SemanticError),
    ],
)
def test_space_errors(doc, error):
    with pytest.raises(error):
        parse_space(json.dumps(doc))


def test_triangle_violation_names_cause():
    doc = {"points": ["0", "1", "2"], "base": "0", "distances": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}
    with pytest.raises(SemanticError) as info:
        parse_space(json.dumps(doc))
    assert "TriangleViolation" in str(info.value)


def test_measure_round_trip(W4):
    mu = W4.measure({("0", "a"): 1, ("b", "a"): HALF})
    assert parse_measure(json.dumps(measure_document(W4, mu)), W4) == mu
    assert parse_measure(json.dumps({"masses": measure_document(W4, mu)}), W4) == mu
    assert parse_measure("[]", W4) == Measure()


@pytest.mark.parametrize(
    "text",
    ['[{"from": "a", "to": "a", "mass": "1"}]', '[{"from": "a", "to": "z", "mass": "1"}]',
     '[{"from": "a", "to": "b", "mass": "-1"}]'],
)
def test_measure_semantic_errors(W4, text):
    with pytest.raises(SemanticError):
        parse_measure(text, W4)


class TestVectorSpec:
    def test_molecules(self, W4):
        m = parse_vector("mol(0,a), mol(b,c)", W4)
        assert m == molecule(W4, W4.pair("0", "a")) + molecule(W4, W4.pair("b", "c"))

    def test_scaled_molecule_and_coordinates(self, W4):
        assert parse_vector("1/2*mol(b,a)", W4) == parse_vector("b=1,a=-1", W4)

    def test_json(self, W4):
        assert parse_vector('{"a": "-1", "b": 1}', W4) == parse_vector("a=-1,b=1", W4)

    def test_base_coordinate_ignored(self, W4):
        assert parse_vector("0=5,a=1", W4) == parse_vector("a=1", W4)

    @pytest.mark.parametrize("spec, error", [("mol(a,a)", SemanticError), ("z=1", SemanticError),
                                             ("nonsense", DocumentSyntaxError), ("a=0.5", DocumentSyntaxError)])
    def test_errors(self, W4, spec, error):
        with pytest.raises(error):
            parse_vector(spec, W4)

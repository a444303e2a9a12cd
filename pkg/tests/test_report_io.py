"""JSON report round trips.

The serializer is pinned two ways: structurally (field order, schema
tag, string encodings) and semantically (deserialization restores every
field exactly, including algebraic critical values and problems with
rational coefficients).
"""

import json
from fractions import Fraction

import pytest

from conftest import U, V, W, fitness_map, pancake_map
from flatimage.boundary import FlatteningProblem
from flatimage.errors import UsageError
from flatimage.regions import flatten_report
from flatimage.report_io import (SCHEMA, deserialize_report, report_document,
                                 serialize_report)


@pytest.fixture(scope="module")
def fitness_report():
    f, g = fitness_map()
    return flatten_report(FlatteningProblem(f, g), 600, 7)


@pytest.fixture(scope="module")
def pancake_report():
    f, g = pancake_map()
    return flatten_report(FlatteningProblem(f, g, mode="pancake"), 600, 7)


class TestRoundTrip:
    def test_fitness_exact(self, fitness_report):
        text = serialize_report(fitness_report)
        assert deserialize_report(text) == fitness_report

    def test_bytes_stable(self, fitness_report):
        text = serialize_report(fitness_report)
        assert serialize_report(deserialize_report(text)) == text

    def test_rational_coefficients_survive(self, pancake_report):
        # f = (u + u*v)/2: primitive rescaling here would silently
        # double the problem, so the problem block must stay verbatim
        text = serialize_report(pancake_report)
        back = deserialize_report(text)
        assert back.problem.f == (U + U * V) * Fraction(1, 2)
        assert back == pancake_report

    def test_algebraic_criticals_exact(self, pancake_report):
        back = deserialize_report(serialize_report(pancake_report))
        assert back.criticals == pancake_report.criticals
        irrational = [v for v in back.criticals.values
                      if not v.is_rational()]
        assert len(irrational) == 2


class TestDocumentShape:
    def test_field_order(self, fitness_report):
        doc = report_document(fitness_report)
        assert list(doc) == ["schema", "problem", "boundary", "criticals",
                             "labels_interior", "labels_boundary",
                             "samples", "seed", "diagnostics"]
        assert doc["schema"] == SCHEMA == "flatimage-report/1"

    def test_polynomials_as_strings(self, fitness_report):
        doc = report_document(fitness_report)
        assert doc["problem"]["f"] == "u*v + u*w + v*w"
        assert doc["boundary"]["p"] == "x^3 - 27*y^2"
        assert doc["problem"]["mode"] == "ball"

    def test_rational_criticals_as_fractions(self, fitness_report):
        doc = report_document(fitness_report)
        by_value = {e["value"]: e for e in doc["criticals"]}
        assert by_value["16/43"]["sources"] == ["pq-intersection"]
        assert "-1/2" in by_value
        # integers still carry an explicit denominator
        assert "1/1" in by_value

    def test_algebraic_critical_entry(self, pancake_report):
        doc = report_document(pancake_report)
        entries = [e for e in doc["criticals"] if "defining" in e]
        assert len(entries) == 2
        for e in entries:
            assert e["defining"] == [-27, 0, 64]
            lo, hi = e["interval"]
            assert "/" in lo and "/" in hi

    def test_labels_sorted_pairs(self, fitness_report):
        doc = report_document(fitness_report)
        labs = doc["labels_interior"]
        assert labs == sorted(labs)
        assert all(len(pair) == 2 for pair in labs)

    def test_serialized_text_is_json(self, fitness_report):
        text = serialize_report(fitness_report)
        assert text.endswith("\n")
        assert json.loads(text)["seed"] == 7


class TestValidation:
    def test_wrong_schema(self, fitness_report):
        doc = report_document(fitness_report)
        doc["schema"] = "flatimage-report/999"
        with pytest.raises(UsageError, match="schema"):
            deserialize_report(json.dumps(doc))

    def test_missing_schema(self):
        with pytest.raises(UsageError, match="schema"):
            deserialize_report("{}")

    def test_not_json(self):
        with pytest.raises(UsageError, match="JSON"):
            deserialize_report("p = x^3 - 27*y^2")

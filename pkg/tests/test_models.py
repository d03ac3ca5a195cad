"""
Unit tests for the Pydantic report models.
"""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from exactalg import RATIONAL, ExactMatrix
from isotropic import ias_matrix, shelter_check
from models import (
    SCHEMA_VERSION,
    CircuitListModel,
    ExampleCheck,
    MatrixReport,
    RunReport,
    ShelterReport,
)


@pytest.mark.unit
class TestMatrixReport:
    """Test labelled matrix serialization."""

    def test_from_matrix(self, example_graph):
        """Test labels and entries of IAS(G)."""
        report = MatrixReport.from_matrix(ias_matrix(example_graph))
        assert report.field == "gf2"
        assert report.rows == ["a", "b", "c", "d"]
        assert report.cols[:2] == ["phi(a)", "phi(b)"]
        assert len(report.entries[0]) == 12

    def test_fractions(self):
        """Test that integral fractions become ints and others strings."""
        m = ExactMatrix(["r"], ["x", "y"], [[Fraction(4, 2), Fraction(1, 3)]], RATIONAL)
        assert MatrixReport.from_matrix(m).entries == [[2, "1/3"]]


@pytest.mark.unit
class TestShelterReport:
    """Test shelter check serialization."""

    def test_passing(self, example_graph):
        """Test a passing strict check."""
        result = shelter_check(ias_matrix(example_graph), example_graph, strict=True)
        report = ShelterReport.from_result("gf2", result)
        assert report.verdict
        assert report.strict
        assert report.first_violating_subtransversal is None
        assert report.candidate_rank == 4


@pytest.mark.unit
class TestRunReport:
    """Test the top-level report."""

    def test_defaults(self):
        """Test the schema version and empty sections."""
        report = RunReport(command="recognize")
        assert report.schema_version == SCHEMA_VERSION
        assert report.exit_code == 0
        assert report.timings is None
        assert report.verdicts == {}

    def test_json_round_trip(self):
        """Test that a dumped report validates again."""
        report = RunReport(command="paper-example", verdicts={"all_passed": True},
                           payload={"checks": [ExampleCheck(name="x", passed=True).model_dump()]})
        assert RunReport.model_validate_json(report.model_dump_json()) == report

    def test_command_required(self):
        """Test that the command name is required."""
        with pytest.raises(ValidationError):
            RunReport()


@pytest.mark.unit
class TestCircuitListModel:
    """Test circuit list validation."""

    def test_valid(self):
        model = CircuitListModel(classes=[["a", "b"]], circuits=[["a"]])
        assert model.classes == [["a", "b"]]

    def test_invalid(self):
        """Test that circuits must be lists of labels."""
        with pytest.raises(ValidationError):
            CircuitListModel(classes=[["a"]], circuits="a")

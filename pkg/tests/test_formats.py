"""
Tests for the graph, word, matroid and circuit-list file formats.
"""

import json

import pytest

from errors import ParseError
from formats import (
    format_matroid,
    read_circuit_list,
    read_dow,
    read_graph,
    read_matroid,
    write_circuit_list,
    write_dow,
    write_graph,
)
from graph import LoopedGraph, named_graph
from multimatroid import fano, mm_isomorphic, s1


@pytest.mark.unit
class TestGraphFiles:
    """Test graph file reading and writing."""

    def test_round_trip_with_loops(self, tmp_path):
        """Test that isolated vertices and loops survive a write and read."""
        g = LoopedGraph(["a", "b", "c"], [("a", "b")], ["b"])
        path = tmp_path / "g.graph"
        write_graph(g, path)
        assert read_graph(path) == g

    def test_comments_and_implicit_vertices(self, tmp_path):
        """Test comments, blank lines and endpoints declared by edges."""
        path = tmp_path / "g.graph"
        path.write_text("# a triangle\n\ne 1 2\ne 2 3  # closing\ne 3 1\n")
        g = read_graph(path)
        assert g == named_graph("K3")

    @pytest.mark.parametrize("text,line", [
        ("v a\nx a b\n", 2),
        ("e a\n", 1),
        ("v a\nv b\nl\n", 3),
    ])
    def test_bad_record(self, tmp_path, text, line):
        """Test that malformed records report their line."""
        path = tmp_path / "bad.graph"
        path.write_text(text)
        with pytest.raises(ParseError) as info:
            read_graph(path)
        assert info.value.details["line"] == line

    def test_empty(self, tmp_path):
        """Test that a graph needs a vertex."""
        path = tmp_path / "empty.graph"
        path.write_text("# nothing\n")
        with pytest.raises(ParseError):
            read_graph(path)

    def test_missing_file(self, tmp_path):
        """Test that unreadable files raise ParseError."""
        with pytest.raises(ParseError):
            read_graph(tmp_path / "absent.graph")


@pytest.mark.unit
class TestDowFiles:
    """Test double occurrence word files."""

    def test_words(self, tmp_path):
        """Test one word per line."""
        path = tmp_path / "c.dow"
        write_dow(["abcdbacd", "ee"], path)
        assert read_dow(path) == ["abcdbacd", "ee"]

    def test_empty(self, tmp_path):
        """Test that a file needs a word."""
        path = tmp_path / "c.dow"
        path.write_text("\n# none\n")
        with pytest.raises(ParseError):
            read_dow(path)


@pytest.mark.unit
class TestMatroidFiles:
    """Test binary matroid files."""

    def test_named(self, tmp_path):
        """Test the `fano` and `graphic` shorthands."""
        path = tmp_path / "m.txt"
        path.write_text("fano\n")
        assert read_matroid(path) == fano()
        path.write_text("graphic K5\n")
        m = read_matroid(path)
        assert (m.rank, len(m.elements)) == (4, 10)

    def test_unknown_graphic(self, tmp_path):
        """Test that unknown graphic names are a parse error on line 1."""
        path = tmp_path / "m.txt"
        path.write_text("graphic K7\n")
        with pytest.raises(ParseError) as info:
            read_matroid(path)
        assert info.value.details["line"] == 1

    def test_labelled_columns(self, tmp_path):
        """Test that columns are row-reduced to standard form."""
        path = tmp_path / "m.txt"
        path.write_text("rank 2\nx 11\ny 01\nz 10\n")
        m = read_matroid(path)
        assert m.rank == 2
        assert set(m.elements) == {"x", "y", "z"}
        assert {frozenset(c) for c in m.circuits()} == {frozenset({"x", "y", "z"})}

    def test_bare_bitstrings(self, tmp_path):
        """Test default labels e1, e2, ..."""
        path = tmp_path / "m.txt"
        path.write_text("rank 1\n1\n1\n")
        m = read_matroid(path)
        assert set(m.elements) == {"e1", "e2"}

    def test_written_form_reads_back(self, tmp_path):
        """Test that a formatted matroid has the same circuits when read."""
        path = tmp_path / "m.txt"
        path.write_text(format_matroid(fano()))
        assert set(read_matroid(path).circuits()) == set(fano().circuits())

    @pytest.mark.parametrize("text,line", [
        ("rank x\n", 1),
        ("rank 2\na 101\n", 2),
        ("rank 2\na 10\na 01\n", 3),
        ("rank 2\na 12\n", 2),
    ])
    def test_bad_lines(self, tmp_path, text, line):
        """Test that malformed matroid lines report their line."""
        path = tmp_path / "m.txt"
        path.write_text(text)
        with pytest.raises(ParseError) as info:
            read_matroid(path)
        assert info.value.details["line"] == line


@pytest.mark.unit
class TestCircuitLists:
    """Test JSON circuit lists."""

    def test_write_and_read(self, tmp_path):
        """Test that S1 reads back isomorphic, named after the file."""
        path = tmp_path / "s1.json"
        write_circuit_list(s1(), path)
        z = read_circuit_list(path)
        assert z.name == "s1"
        assert mm_isomorphic(z, s1()) is not None

    def test_not_json(self, tmp_path):
        """Test that JSON syntax errors carry a line."""
        path = tmp_path / "z.json"
        path.write_text('{"classes": [["a"]],\n "circuits": [[}\n')
        with pytest.raises(ParseError) as info:
            read_circuit_list(path)
        assert info.value.details["line"] == 2

    def test_wrong_shape(self, tmp_path):
        """Test that missing keys are refused."""
        path = tmp_path / "z.json"
        path.write_text(json.dumps({"classes": [["a"]]}))
        with pytest.raises(ParseError):
            read_circuit_list(path)

    def test_invalid_family(self, tmp_path):
        """Test that nested circuits are reported as a parse error."""
        path = tmp_path / "z.json"
        path.write_text(json.dumps({"classes": [["a"], ["b"]], "circuits": [["a"], ["a", "b"]]}))
        with pytest.raises(ParseError):
            read_circuit_list(path)

"""
Unit tests for looped graphs, local complementation, canonical forms and vertex-minors.
"""

import networkx as nx
import pytest

from errors import BoundExceededError, DomainError
from graph import (
    LoopedGraph,
    Move,
    all_simple_graphs,
    apply_moves,
    canonical_form,
    delete_vertices,
    has_vertex_minor,
    is_isomorphic,
    local_complement,
    local_equivalence_orbit,
    loop_complement,
    named_graph,
)


def path(*vs):
    return LoopedGraph(vs, list(zip(vs, vs[1:])))


@pytest.mark.unit
class TestLoopedGraph:
    """Test construction and accessors."""

    def test_self_edge_becomes_loop(self):
        """Test that an (a, a) edge is stored as a loop."""
        g = LoopedGraph("ab", [("a", "a"), ("a", "b")])
        assert g.has_loop("a")
        assert g.edges() == [("a", "b")]

    def test_unknown_vertex(self):
        """Test that edges must use declared vertices."""
        with pytest.raises(DomainError):
            LoopedGraph("ab", [("a", "c")])

    def test_adjacency_matrix_diagonal(self):
        """Test that loops sit on the diagonal of A(G)."""
        g = LoopedGraph("ab", [("a", "b")], ["b"])
        assert g.adjacency_matrix().to_lists() == [[0, 1], [1, 1]]

    def test_equality_ignores_order(self):
        """Test that equality is by vertex, edge and loop sets."""
        assert LoopedGraph("ab", [("a", "b")]) == LoopedGraph("ba", [("b", "a")])
        assert LoopedGraph("ab", [("a", "b")]) != LoopedGraph("ab", [("a", "b")], ["a"])

    def test_networkx_roundtrip(self):
        """Test the networkx bridge keeps loops as node attributes."""
        g = LoopedGraph("abc", [("a", "b")], ["c"])
        assert LoopedGraph.from_networkx(g.to_networkx()) == g


@pytest.mark.unit
class TestComplementation:
    """Test loop and local complementation."""

    def test_local_complement_of_path(self):
        """Test that complementing at the middle of a path gives a triangle."""
        g = local_complement(path("a", "b", "c"), "b")
        assert g.has_edge("a", "c")
        assert g.number_of_edges() == 3
        assert not g.loops

    def test_nonsimple_toggles_neighbour_loops(self):
        """Test that the nonsimple mode also flips loops on the neighbourhood."""
        g = Move("nonsimple", "b").apply(path("a", "b", "c"))
        assert g.loops == {"a", "c"}
        assert g.has_edge("a", "c")

    @pytest.mark.parametrize("mode", ["simple", "nonsimple"])
    def test_involution(self, mode):
        """Test that each generator is an involution."""
        g = named_graph("W5")
        assert local_complement(local_complement(g, "3", mode), "3", mode) == g
        assert loop_complement(loop_complement(g, "3"), "3") == g

    def test_unknown_mode(self):
        """Test that an unknown mode is refused."""
        with pytest.raises(ValueError):
            local_complement(path("a", "b"), "a", "sideways")

    def test_delete_vertices(self):
        """Test induced subgraphs."""
        g = delete_vertices(named_graph("W5"), ["1"])
        assert is_isomorphic(g, named_graph("C5")) is not None

    def test_apply_moves(self):
        """Test replaying a move sequence."""
        g = apply_moves(path("a", "b", "c"), [Move("loop", "a"), Move("simple", "b")])
        assert g.loops == {"a"}
        assert g.number_of_edges() == 3


@pytest.mark.unit
class TestCanonicalForm:
    """Test canonical forms and isomorphism."""

    def test_relabelled_graphs_agree(self):
        """Test that a relabelling does not change the canonical form."""
        g = named_graph("W5")
        h = g.relabel({v: f"x{v}" for v in g.vertices})
        assert canonical_form(g) == canonical_form(h)

    def test_loops_distinguish(self):
        """Test that loop placement is part of the isomorphism type."""
        a = LoopedGraph("abc", [("a", "b"), ("b", "c")], ["a"])
        b = LoopedGraph("abc", [("a", "b"), ("b", "c")], ["c"])
        c = LoopedGraph("abc", [("a", "b"), ("b", "c")], ["b"])
        assert canonical_form(a) == canonical_form(b)
        assert canonical_form(a) != canonical_form(c)

    def test_to_graph(self):
        """Test that a canonical form decodes to an isomorphic graph."""
        g = named_graph("BW3")
        assert is_isomorphic(canonical_form(g).to_graph(), g) is not None

    def test_isomorphism_mapping(self):
        """Test that the returned mapping preserves adjacency."""
        g = named_graph("C5")
        h = g.relabel({"1": "v", "2": "w", "3": "x", "4": "y", "5": "z"})
        mapping = is_isomorphic(g, h)
        assert mapping is not None
        for a, b in g.edges():
            assert h.has_edge(mapping[a], mapping[b])

    def test_non_isomorphic(self):
        """Test a cycle against a path."""
        assert is_isomorphic(named_graph("C5"), named_graph("P5")) is None

    def test_bound(self):
        """Test that the isomorphism bound is enforced."""
        with pytest.raises(BoundExceededError):
            canonical_form(named_graph("P13"))

    def test_simple_graph_census(self):
        """Test the number of simple graphs on four vertices."""
        assert len(all_simple_graphs(4)) == 11


@pytest.mark.unit
class TestOrbits:
    """Test local-equivalence orbits."""

    def test_triangle_simple_orbit(self):
        """Test that K3 and the star P3 form one simple class."""
        orbit = local_equivalence_orbit(named_graph("K3"), simple_only=True)
        assert orbit.complete
        assert orbit.size == 2
        assert path("a", "b", "c") in orbit

    def test_full_orbit_contains_loops(self):
        """Test that loop complementation is part of the closure."""
        g = named_graph("K3")
        orbit = local_equivalence_orbit(g)
        assert orbit.complete
        assert loop_complement(g, "1") in orbit

    def test_budget_truncates(self):
        """Test that a tiny budget yields an incomplete orbit."""
        orbit = local_equivalence_orbit(named_graph("C5"), budget=2)
        assert not orbit.complete
        assert orbit.size <= 2

    def test_budget_must_be_positive(self):
        """Test that a zero budget is refused."""
        with pytest.raises(DomainError):
            local_equivalence_orbit(named_graph("K3"), budget=0)


@pytest.mark.unit
class TestVertexMinors:
    """Test vertex-minor search and its witnesses."""

    def test_triangle_in_path(self):
        """Test that K3 is a vertex-minor of P4 with a replayable witness."""
        g, h = path("a", "b", "c", "d"), named_graph("K3")
        result = has_vertex_minor(g, h)
        assert result.found
        replayed = result.witness.replay(g)
        assert is_isomorphic(replayed, h) == result.witness.isomorphism

    def test_witness_restores_loops(self):
        """Test that witnesses handle looped inputs and targets."""
        g = LoopedGraph("abcd", [("a", "b"), ("b", "c"), ("c", "d")], ["a"])
        h = LoopedGraph("xyz", [("x", "y"), ("y", "z"), ("x", "z")], ["z"])
        result = has_vertex_minor(g, h)
        assert result.found
        assert is_isomorphic(result.witness.replay(g), h) is not None

    def test_cycle_in_wheel(self):
        """Test that deleting the hub is found."""
        result = has_vertex_minor(named_graph("W5"), named_graph("C5"))
        assert result.found

    def test_edgeless_has_no_edge(self):
        """Test that an edgeless graph never gains edges."""
        result = has_vertex_minor(LoopedGraph("abc"), named_graph("P2"))
        assert not result.found
        assert result.complete

    def test_larger_target(self):
        """Test that a larger target is refused."""
        with pytest.raises(DomainError):
            has_vertex_minor(named_graph("C5"), named_graph("W5"))


@pytest.mark.unit
class TestNamedGraphs:
    """Test the named graph catalogue."""

    @pytest.mark.parametrize("name,n,m", [
        ("W5", 6, 10), ("W7", 8, 14), ("BW3", 7, 9), ("K4", 4, 6), ("C6", 6, 6), ("path_4", 4, 3),
    ])
    def test_sizes(self, name, n, m):
        """Test vertex and edge counts."""
        g = named_graph(name)
        assert (g.n, g.number_of_edges()) == (n, m)

    def test_bw3_is_bipartite(self):
        """Test that the bipartite wheel is bipartite with a degree-3 hub."""
        g = named_graph("BW3")
        assert nx.is_bipartite(g.to_networkx())
        assert sorted(map(g.degree, g.vertices)) == [2, 2, 2, 3, 3, 3, 3]

    @pytest.mark.parametrize("name", ["W2", "C2", "Q5", ""])
    def test_unknown(self, name):
        """Test that bad names are refused."""
        with pytest.raises(DomainError):
            named_graph(name)

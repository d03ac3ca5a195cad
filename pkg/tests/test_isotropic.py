"""
Tests for isotropic matrices, rank oracles and sheltering checks.
"""

import pytest

from errors import BoundExceededError, DomainError
from exactalg import ExactMatrix, FieldSpec
from graph import LoopedGraph, all_simple_graphs, local_complement, loop_complement, named_graph
from isotropic import (
    Kind,
    Subtransversal,
    chi,
    contract_phi,
    contraction_shelters,
    ground_set,
    ias_matrix,
    multimatroid_view,
    normalize_strict_z3,
    phi,
    psi,
    rank_sub,
    shelter_check,
    shelters,
    standardize_z2,
    subtransversals,
    transversals,
    z2_candidate,
)
from multimatroid import MultimatroidClass, classify, mm_isomorphic


@pytest.fixture
def triangle():
    return named_graph("K3")


@pytest.mark.unit
class TestGroundSet:
    """Test ground elements and subtransversals."""

    def test_ground_set_order(self):
        """Test phi columns, then chi, then psi."""
        ground = ground_set(["a", "b"])
        assert [str(e) for e in ground] == [
            "phi(a)", "phi(b)", "chi(a)", "chi(b)", "psi(a)", "psi(b)"]

    def test_arity_two(self):
        """Test the two-element classes."""
        assert len(ground_set(["a", "b"], 2)) == 4
        with pytest.raises(DomainError):
            ground_set(["a"], 4)

    def test_subtransversal_rejects_repeats(self):
        """Test at most one element per vertex."""
        with pytest.raises(DomainError):
            Subtransversal([phi("a"), chi("a")])

    def test_counts(self):
        """Test 4^n subtransversals and 3^n transversals."""
        assert sum(1 for _ in subtransversals("abc")) == 64
        assert sum(1 for _ in transversals("abc")) == 27
        assert all(t.is_transversal_of("abc") for t in transversals("abc"))

    def test_symbols(self):
        """Test the Greek symbols used in reports."""
        assert [k.symbol for k in Kind] == ["φ", "χ", "ψ"]


@pytest.mark.unit
class TestIasMatrix:
    """Test IAS(G) = (I | A | I + A)."""

    def test_blocks(self, example_graph):
        """Test the identity, adjacency and sum blocks."""
        m = ias_matrix(example_graph)
        a = example_graph.adjacency_matrix()
        vs = example_graph.vertices
        assert m.shape == (4, 12)
        for v in vs:
            for w in vs:
                unit = 1 if v == w else 0
                assert m.entry(v, phi(w)) == unit
                assert m.entry(v, chi(w)) == a.entry(v, w)
                assert m.entry(v, psi(w)) == (unit + a.entry(v, w)) % 2

    def test_loops_enter_the_diagonal(self):
        """Test that a loop makes chi(v) nonzero at v."""
        g = LoopedGraph("a", loops=["a"])
        m = ias_matrix(g)
        assert m.entry("a", chi("a")) == 1
        assert m.entry("a", psi("a")) == 0

    def test_rank_sub(self, triangle):
        """Test ranks of a few subtransversals of K3."""
        assert rank_sub(triangle, [phi(v) for v in triangle.vertices]) == 3
        assert rank_sub(triangle, [chi(v) for v in triangle.vertices]) == 2
        assert rank_sub(triangle, []) == 0

    def test_rank_sub_unknown_element(self, triangle):
        """Test that foreign elements are refused."""
        with pytest.raises(DomainError):
            rank_sub(triangle, [phi("z")])

    def test_tight_three_matroid(self, triangle):
        """Test that Z3(G) classifies as tight."""
        assert classify(multimatroid_view(triangle, 3).with_circuits()) is MultimatroidClass.TIGHT


@pytest.mark.unit
class TestSheltering:
    """Test sheltering checks and matrix manipulations."""

    def test_ias_shelters_itself(self, example_graph):
        """Test that IAS(G) shelters Z3(G), strictly."""
        result = shelter_check(ias_matrix(example_graph), example_graph, strict=True)
        assert result.verdict
        assert result.candidate_rank == 4
        assert result.first_violation is None
        assert result.checked > 0

    def test_wrong_candidate(self, triangle):
        """Test that a damaged candidate reports a violating subtransversal."""
        m = ias_matrix(LoopedGraph(triangle.vertices))
        result = shelter_check(m, triangle)
        assert not result.verdict
        assert result.first_violation is not None
        assert result.reason == "rank mismatch"

    def test_strict_rank(self, triangle):
        """Test strict checks on intact and damaged candidates."""
        assert shelters(ias_matrix(triangle), triangle, strict=True)
        damaged = ias_matrix(triangle).scale_column(phi("1"), 0)
        result = shelter_check(damaged, triangle, strict=True)
        assert not result.verdict
        assert result.first_violation == {phi("1")}

    def test_missing_columns(self, triangle):
        """Test that candidates must carry every ground element."""
        with pytest.raises(DomainError):
            shelter_check(z2_candidate(ias_matrix(triangle)), triangle, 3)

    def test_z2_shelter(self, triangle):
        """Test that the phi and chi columns shelter Z2(G)."""
        assert shelters(z2_candidate(ias_matrix(triangle)), triangle, 2)

    def test_bound(self):
        """Test the shelter vertex bound."""
        g = named_graph("C9")
        with pytest.raises(BoundExceededError):
            shelter_check(ias_matrix(g), g)

    def test_contract_phi(self, example_graph):
        """Test that contracting phi(v) leaves a shelter of Z3(G - v)."""
        m = ias_matrix(example_graph)
        contracted = contract_phi(m, "a")
        assert phi("a") not in contracted.cols
        assert len(contracted.rows) == 3
        assert contraction_shelters(m, example_graph, "a")


@pytest.mark.unit
class TestStandardForms:
    """Test standard forms of sheltering candidates."""

    def test_standardize_z2(self, example_graph):
        """Test that IAS(G) standardizes to (I A(G))."""
        form = standardize_z2(z2_candidate(ias_matrix(example_graph)), example_graph)
        assert form.support_matches
        assert form.a_block == example_graph.adjacency_matrix()

    def test_normalize_strict_z3(self, example_graph):
        """Test that B = I + A(G) over GF(2)."""
        form = normalize_strict_z3(ias_matrix(example_graph), example_graph)
        assert form.support_matches
        for v in example_graph.vertices:
            assert form.b_block.entry(v, v) == 1

    def test_standard_forms_need_simple_graphs(self):
        """Test that looped graphs are refused."""
        g = LoopedGraph("a", loops=["a"])
        with pytest.raises(DomainError):
            standardize_z2(z2_candidate(ias_matrix(g)), g)

    def test_odd_field_candidate(self):
        """Test a signed candidate over GF(3)."""
        g = named_graph("P2")
        m = ias_matrix(g)
        gf3 = FieldSpec.parse("gf3")
        signed = ExactMatrix(m.rows, m.cols, [[1, 0, 0, 1, 1, -1], [0, 1, -1, 0, -1, 1]], gf3)
        assert shelters(signed, g, strict=True)
        form = normalize_strict_z3(signed, g)
        assert form.b_block.entry("1", "2") * form.b_block.entry("2", "1") % 3 == 1


@pytest.mark.unit
class TestLocalEquivalence:
    """Test that local and loop complementation preserve Z3(G) up to isomorphism."""

    @pytest.mark.parametrize("n", [2, 3, pytest.param(4, marks=pytest.mark.slow)])
    def test_single_moves(self, n):
        """Test every generator at every vertex of every simple graph on n vertices."""
        for g in all_simple_graphs(n):
            z = multimatroid_view(g, 3)
            for v in g.vertices:
                for h in (local_complement(g, v), loop_complement(g, v)):
                    assert mm_isomorphic(z, multimatroid_view(h, 3)) is not None, (g.edges(), v)

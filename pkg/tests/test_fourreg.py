"""
Tests for 4-regular graphs, Euler systems, transitions and circuit partitions.
"""

import random

import pytest

from errors import DomainError, ParseError
from exactalg import GF2, RATIONAL, ExactMatrix, FieldSpec, rank
from fourreg import (
    all_circuit_partitions,
    all_double_occurrence_words,
    canonical_dow,
    cycle_space_basis,
    fundamental_circuits,
    interlacement,
    kappa_transform,
    label_of,
    parse_dow,
    partition_from_labels,
    random_dow,
    resolve_edge,
    reverse_orientation,
    shadow_vector,
    tail_half,
    touch_graph,
    transition_labels,
)
from graph import LoopedGraph, local_complement
from isotropic import GroundElement, Kind, rank_sub


@pytest.mark.unit
class TestParseDow:
    """Test double occurrence word parsing."""

    def test_example_shape(self, example_system):
        """Test vertex, edge and circuit counts of the worked example."""
        f, c = example_system
        assert f.vertices == ("a", "b", "c", "d")
        assert f.edge_count == 8
        assert c.words() == ["abcdbacd"]

    def test_traversal_i_runs_from_i_to_next(self, example_system):
        """Test the edge convention: edge i joins positions i and i + 1."""
        f, _ = example_system
        assert f.ends(0) == ("a", "b")
        assert f.ends(7) == ("d", "a")

    def test_tokens(self):
        """Test whitespace-separated multi-character labels."""
        f, c = parse_dow(["v1 v2 v1 v2"])
        assert f.vertices == ("v1", "v2")
        assert c.words() == ["v1 v2 v1 v2"]

    def test_two_components(self):
        """Test one circuit per word."""
        f, c = parse_dow(["aa", "bcbc"])
        assert len(c.circuits) == 2
        assert c.locate("c")[0] == 1

    @pytest.mark.parametrize("words", [[], ["abca"], ["ab"], ["aa", "aa"], [""]])
    def test_rejects(self, words):
        """Test malformed words."""
        with pytest.raises(ParseError):
            parse_dow(words)


@pytest.mark.unit
class TestInterlacement:
    """Test interlacement graphs."""

    def test_example(self, example_graph):
        """Test that a and b are the only non-interlaced pair."""
        assert example_graph.number_of_edges() == 5
        assert not example_graph.has_edge("a", "b")
        assert example_graph.is_simple

    def test_components_do_not_interlace(self):
        """Test that letters of different words are never adjacent."""
        _, c = parse_dow(["abab", "cc"])
        g = interlacement(c)
        assert g.has_edge("a", "b")
        assert g.degree("c") == 0

    def test_kappa_is_local_complement(self, example_system):
        """Test that a kappa-transformation complements locally."""
        _, c = example_system
        for v in c.vertices:
            assert interlacement(kappa_transform(c, v)) == local_complement(interlacement(c), v)

    def test_kappa_word(self, example_system):
        """Test the reversed segment on the worked example."""
        _, c = example_system
        assert kappa_transform(c, "d").words() == ["abcdcabd"]


@pytest.mark.unit
class TestTransitions:
    """Test transition labelling."""

    def test_three_distinct_transitions(self, example_system):
        """Test that phi, chi and psi are the three pairings at a vertex."""
        f, c = example_system
        for v in c.vertices:
            labels = transition_labels(c, v)
            assert len(set(labels.values())) == 3
            for kind, t in labels.items():
                assert t.half_edges() == frozenset(f.half_edges_at(v))
                assert label_of(c, t) is kind

    def test_phi_follows_the_circuit(self, example_system):
        """Test that the all-phi partition is the Euler circuit itself."""
        _, c = example_system
        p = partition_from_labels(c, {v: Kind.PHI for v in c.vertices})
        assert len(p) == 1

    def test_partition_sizes_match_nullity(self, example_system):
        """Test |P| - 1 = |T| - r(T) for every transversal of the example."""
        _, c = example_system
        g = interlacement(c)
        count = 0
        for labels, p in all_circuit_partitions(c):
            t = [GroundElement(v, k) for v, k in labels.items()]
            assert len(p) - 1 == len(t) - rank_sub(g, t)
            count += 1
        assert count == 81


@pytest.mark.unit
class TestFundamentalCircuits:
    """Test fundamental circuit choice and edge resolution."""

    def test_resolve_edge(self, example_system):
        """Test edge lookup by index, name and vertex pair."""
        _, c = example_system
        assert resolve_edge(c, 3) == 3
        assert resolve_edge(c, "e8") == 7
        assert resolve_edge(c, "ad") == 7
        assert resolve_edge(c, "a-d") == 7
        assert resolve_edge(c, "cd") == 6
        with pytest.raises(DomainError):
            resolve_edge(c, "ab c")
        with pytest.raises(DomainError):
            resolve_edge(c, 8)

    def test_based_segments_avoid_base(self, example_system):
        """Test that no based fundamental circuit uses the base edge."""
        _, c = example_system
        gamma = fundamental_circuits(c, base=["ad"])
        for v in c.vertices:
            assert 7 not in {e for e, _ in gamma.walk(v)}

    def test_base_needs_one_edge_per_component(self):
        """Test that the base must meet every component once."""
        _, c = parse_dow(["abab", "cc"])
        with pytest.raises(DomainError):
            fundamental_circuits(c, base=["e1"])
        with pytest.raises(DomainError):
            fundamental_circuits(c, base=["e1", "e2"])

    def test_choices(self, example_system):
        """Test that occurrence choices pick complementary segments."""
        _, c = example_system
        first = fundamental_circuits(c)
        second = fundamental_circuits(c, choices={"a": 1})
        assert len(first.positions("a")) + len(second.positions("a")) == 8
        with pytest.raises(DomainError):
            fundamental_circuits(c, choices={"a": 2})

    def test_reverse_orientation(self, example_system):
        """Test that reversing C(v) flips its walk."""
        _, c = example_system
        gamma = fundamental_circuits(c)
        rev = reverse_orientation(gamma, "b")
        assert not rev.consistently_oriented
        assert len(rev.walk("b")) == len(gamma.walk("b"))
        assert rev.walk("b")[0] == (gamma.walk("b")[-1][0], not gamma.walk("b")[-1][1])
        assert reverse_orientation(rev, "b").consistently_oriented


@pytest.mark.unit
class TestTouchGraphs:
    """Test touch-graphs and their cycle spaces."""

    def test_touch_graph_shape(self, example_system):
        """Test that every vertex contributes one edge of Tch(P)."""
        _, c = example_system
        p = partition_from_labels(c, {"a": Kind.CHI, "b": Kind.PHI, "c": Kind.PSI, "d": Kind.CHI})
        d = touch_graph(p)
        G = d.to_networkx()
        assert G.number_of_nodes() == len(p)
        assert G.number_of_edges() == 4

    def test_flip_reverses_edge(self, example_system):
        """Test that flipping e_v swaps its ends."""
        _, c = example_system
        p = partition_from_labels(c, {v: Kind.CHI for v in c.vertices})
        d = touch_graph(p)
        for v in c.vertices:
            a, b = d.ends(v)
            assert d.flip(v).ends(v) == (b, a)

    def test_cycle_space_dimension(self, example_system):
        """Test |E| - |V| + components for every partition of the example."""
        _, c = example_system
        for _, p in all_circuit_partitions(c):
            basis = cycle_space_basis(touch_graph(p))
            assert basis.shape[0] == 4 - len(p) + 1

    def test_shadow_of_repeated_walk(self, example_system):
        """Test that traversing a closed walk twice doubles its shadow."""
        _, c = example_system
        d = touch_graph(partition_from_labels(c, {v: Kind.CHI for v in c.vertices}))
        once = shadow_vector(list(c.circuits[0]), d)
        twice = shadow_vector(list(c.circuits[0]) * 2, d)
        assert twice == {v: 2 * z for v, z in once.items()}

    def test_not_closed(self, example_system):
        """Test that an open walk is refused."""
        _, c = example_system
        d = touch_graph(partition_from_labels(c, {v: Kind.PHI for v in c.vertices}))
        with pytest.raises(DomainError):
            shadow_vector(list(c.circuits[0][:3]), d)

    @pytest.mark.parametrize("field", [GF2, FieldSpec.parse("gf3"), FieldSpec.parse("gf5"), RATIONAL])
    def test_closed_walks_lie_in_cycle_space(self, example_system, field):
        """Test that shadows of random closed walks are cycles of Tch(P) for every partition."""
        f, c = example_system
        gamma = fundamental_circuits(c)
        rng = random.Random(3)
        walks = []
        for _ in range(6):
            walk = list(c.circuits[0])
            for _ in range(rng.randint(1, 4)):
                v = rng.choice(c.vertices)
                spots = [k for k, t in enumerate(walk) if f.half_vertex[tail_half(t)] == v]
                k = rng.choice(spots)
                walk[k:k] = gamma.walk(v)
            walks.append(walk)
        for _, p in all_circuit_partitions(c):
            d = touch_graph(p)
            basis = cycle_space_basis(d, field)
            vs = f.vertices
            for walk in walks:
                z = shadow_vector(walk, d)
                if basis.shape[0] == 0:
                    assert not any(field.reduce(x) for x in z.values())
                    continue
                row = ExactMatrix(["walk"], vs, [[z[v] for v in vs]], field)
                assert rank(basis.vstack(row)) == rank(basis)


@pytest.mark.unit
class TestWordEnumeration:
    """Test double occurrence word enumeration."""

    @pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 5), (4, 17)])
    def test_counts_up_to_symmetry(self, n, count):
        """Test chord diagram counts up to rotation and reflection."""
        assert len(all_double_occurrence_words(n)) == count

    def test_raw_count(self):
        """Test (2n - 1)!! labelled words."""
        assert len(all_double_occurrence_words(3, up_to_symmetry=False)) == 15

    def test_canonical_dow_invariance(self):
        """Test that rotations, reflections and relabelling agree."""
        assert canonical_dow("abcdbacd") == canonical_dow("dbacdabc")
        assert canonical_dow("abcdbacd") == canonical_dow("dcabdcba")
        assert canonical_dow("abcdbacd") == canonical_dow("xyzwyxzw")

    def test_random_dow_parses(self):
        """Test that random words are valid."""
        rng = random.Random(3)
        for _ in range(5):
            word = random_dow(5, rng)
            assert parse_dow([word])[0].n == 5

    def test_enumeration_limit(self):
        """Test the enumeration limit."""
        with pytest.raises(DomainError):
            all_double_occurrence_words(8)

"""
4-regular multigraphs at half-edge resolution.

Edge e has half-edges 2e (tail) and 2e+1 (head); a traversal is (edge, forward)
and an Euler circuit is a cyclic tuple of traversals. Passage k of a circuit
is the pair (head of traversal k-1, tail of traversal k) at the vertex the
circuit visits in position k.
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx

from errors import ConsistencyError, DomainError, ParseError
from exactalg import RATIONAL, ExactMatrix, FieldSpec
from graph import LoopedGraph
from isotropic import Kind
from telemetry.run_summary import run_summary

logger = logging.getLogger(__name__)

Vertex = Hashable
Traversal = tuple[int, bool]
Pair = frozenset


def tail_half(t: Traversal) -> int:
    e, forward = t
    return 2 * e if forward else 2 * e + 1


def head_half(t: Traversal) -> int:
    return tail_half(t) ^ 1


def flip(t: Traversal) -> Traversal:
    return (t[0], not t[1])


# ----------------------------------------------------------------------
# Graphs and Euler systems
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FourRegular:
    """Vertex of each half-edge; half-edges 2e and 2e+1 form edge e."""
    vertices: tuple
    half_vertex: tuple
    edge_names: tuple = ()
    _at: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.half_vertex) % 2:
            raise DomainError("odd number of half-edges")
        at: dict = {v: [] for v in self.vertices}
        for h, v in enumerate(self.half_vertex):
            if v not in at:
                raise DomainError(f"half-edge {h} on unknown vertex {v!r}")
            at[v].append(h)
        for v, hs in at.items():
            if len(hs) != 4:
                raise DomainError(f"vertex {v!r} has {len(hs)} half-edges, expected 4")
        if self.edge_names and len(self.edge_names) != self.edge_count:
            raise DomainError("edge name count does not match edge count")
        object.__setattr__(self, "_at", {v: tuple(hs) for v, hs in at.items()})

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.half_vertex) // 2

    def half_edges_at(self, v: Vertex) -> tuple[int, ...]:
        if v not in self._at:
            raise DomainError(f"unknown vertex {v!r}")
        return self._at[v]

    def ends(self, e: int) -> tuple[Vertex, Vertex]:
        return self.half_vertex[2 * e], self.half_vertex[2 * e + 1]

    def edge_name(self, e: int) -> str:
        return self.edge_names[e] if self.edge_names else f"e{e + 1}"

    def to_networkx(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from(self.vertices)
        for e in range(self.edge_count):
            a, b = self.ends(e)
            G.add_edge(a, b, key=e)
        return G


def component_count(f: FourRegular) -> int:
    return nx.number_connected_components(f.to_networkx())


@dataclass(frozen=True)
class EulerSystem:
    """One oriented Euler circuit per connected component."""
    graph: FourRegular
    circuits: tuple
    _where: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        f = self.graph
        seen = Counter(e for circuit in self.circuits for e, _ in circuit)
        if sorted(seen) != list(range(f.edge_count)) or any(k != 1 for k in seen.values()):
            raise DomainError("circuits must use every edge exactly once")
        where: dict = {}
        for ci, circuit in enumerate(self.circuits):
            for k, t in enumerate(circuit):
                v = f.half_vertex[tail_half(t)]
                if f.half_vertex[head_half(circuit[k - 1])] != v:
                    raise DomainError(f"circuit {ci} is not a closed trail at position {k}")
                where.setdefault(v, []).append((ci, k))
        located = {}
        for v in f.vertices:
            visits = where.get(v, [])
            if len(visits) != 2 or visits[0][0] != visits[1][0]:
                raise DomainError(f"vertex {v!r} must be visited twice by one circuit")
            located[v] = (visits[0][0], (visits[0][1], visits[1][1]))
        object.__setattr__(self, "_where", located)

    def locate(self, v: Vertex) -> tuple[int, tuple[int, int]]:
        """(circuit index, (first position, second position)) of v."""
        if v not in self._where:
            raise DomainError(f"unknown vertex {v!r}")
        return self._where[v]

    def passage(self, ci: int, k: int) -> tuple[int, int]:
        circuit = self.circuits[ci]
        return head_half(circuit[k - 1]), tail_half(circuit[k])

    def word(self, ci: int = 0) -> tuple:
        return tuple(self.graph.half_vertex[tail_half(t)] for t in self.circuits[ci])

    def words(self) -> list[str]:
        out = []
        for ci in range(len(self.circuits)):
            labels = [str(v) for v in self.word(ci)]
            sep = "" if all(len(x) == 1 for x in labels) else " "
            out.append(sep.join(labels))
        return out

    @property
    def vertices(self) -> tuple:
        return self.graph.vertices

    def signed_word(self, gamma: "OrientedFundamentalCircuits", ci: int = 0) -> str:
        """Word with v- / v+ marks, read from just after the base edge when based."""
        circuit = self.circuits[ci]
        start = 0
        if gamma.base is not None:
            start = next(k + 1 for k, (e, _) in enumerate(circuit) if e in gamma.base) % len(circuit)
        marks = {}
        for v in self.graph.vertices:
            c, s, t = gamma.segments[v]
            if c == ci:
                marks[s], marks[t] = f"{v}-", f"{v}+"
        return "".join(marks[(start + k) % len(circuit)] for k in range(len(circuit)))


def _tokens(word) -> list[str]:
    if isinstance(word, str):
        text = word.strip()
        return text.split() if any(ch.isspace() for ch in text) else list(text)
    return [str(x) for x in word]


def parse_dow(words: Sequence) -> tuple[FourRegular, EulerSystem]:
    """Build the 4-regular graph and Euler system of double occurrence words.

    Each word becomes one component; traversal i of a word of length L runs
    from position i to position (i + 1) mod L.
    """
    if not words:
        raise ParseError("no double occurrence words given")
    vertices: list = []
    owner: dict = {}
    half_vertex: list = []
    circuits = []
    for wi, word in enumerate(words):
        letters = _tokens(word)
        if not letters:
            raise ParseError(f"word {wi} is empty")
        counts = Counter(letters)
        bad = sorted(x for x, k in counts.items() if k != 2)
        if bad:
            raise ParseError(f"letters {bad} do not occur exactly twice in word {wi}")
        for x in letters:
            if owner.setdefault(x, wi) != wi:
                raise ParseError(f"letter {x!r} occurs in words {owner[x]} and {wi}")
            if x not in vertices:
                vertices.append(x)
        offset = len(half_vertex) // 2
        size = len(letters)
        for i in range(size):
            half_vertex += [letters[i], letters[(i + 1) % size]]
        circuits.append(tuple((offset + i, True) for i in range(size)))
    f = FourRegular(tuple(vertices), tuple(half_vertex))
    return f, EulerSystem(f, tuple(circuits))


def interlacement(c: EulerSystem) -> LoopedGraph:
    """v ~ w iff they appear as v..w..v..w on a common circuit."""
    vs = c.vertices
    edges = []
    for i, v in enumerate(vs):
        ci, (p1, p2) = c.locate(v)
        for w in vs[i + 1:]:
            cj, (q1, q2) = c.locate(w)
            if ci == cj and (p1 < q1 < p2) != (p1 < q2 < p2):
                edges.append((v, w))
    return LoopedGraph(vs, edges)


# ----------------------------------------------------------------------
# Transitions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Transition:
    """A partition of the four half-edges at a vertex into two pairs."""
    vertex: Vertex
    pairing: frozenset

    @classmethod
    def of(cls, vertex: Vertex, first: Iterable[int], second: Iterable[int]) -> "Transition":
        a, b = Pair(first), Pair(second)
        if len(a) != 2 or len(b) != 2 or a & b:
            raise DomainError("a transition pairs four distinct half-edges")
        return cls(vertex, frozenset((a, b)))

    def pairs(self) -> tuple[Pair, Pair]:
        a, b = sorted(self.pairing, key=min)
        return a, b

    def pair_of(self, h: int) -> Pair:
        for pair in self.pairing:
            if h in pair:
                return pair
        raise DomainError(f"half-edge {h} is not at vertex {self.vertex!r}")

    def partner(self, h: int) -> int:
        (other,) = self.pair_of(h) - {h}
        return other

    def half_edges(self) -> frozenset:
        return frozenset().union(*self.pairing)


def transition_labels(c: EulerSystem, v: Vertex) -> dict[Kind, Transition]:
    """The phi / chi / psi transitions at v relative to c."""
    ci, (p1, p2) = c.locate(v)
    h1, h2 = c.passage(ci, p1)
    h3, h4 = c.passage(ci, p2)
    return {
        Kind.PHI: Transition.of(v, (h1, h2), (h3, h4)),
        Kind.CHI: Transition.of(v, (h1, h4), (h2, h3)),
        Kind.PSI: Transition.of(v, (h1, h3), (h2, h4)),
    }


def label_of(c: EulerSystem, t: Transition) -> Kind:
    for kind, candidate in transition_labels(c, t.vertex).items():
        if candidate == t:
            return kind
    raise DomainError(f"{t} is not a transition at {t.vertex!r}")


def pair_from_edges(f: FourRegular, v: Vertex, e1: int, e2: int) -> Pair:
    """The single transition at v formed by the ends of two edges at v."""
    hs = set(f.half_edges_at(v))
    out = []
    for e in (e1, e2):
        ends = hs & {2 * e, 2 * e + 1}
        if len(ends) != 1:
            raise DomainError(f"edge {f.edge_name(e)} does not meet {v!r} exactly once")
        out.append(ends.pop())
    return Pair(out)


# ----------------------------------------------------------------------
# Fundamental circuits
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OrientedFundamentalCircuits:
    """Per vertex: (circuit, start, stop) of the segment from v- to v+.

    The fundamental circuit C(v) consists of traversals start .. stop-1
    (cyclically); vertices in `reversed` walk it backwards.
    """
    system: EulerSystem
    segments: Mapping
    reversed: frozenset = frozenset()
    base: Optional[frozenset] = None

    def _length(self, v: Vertex) -> tuple[int, int, int, int]:
        ci, s, t = self.segments[v]
        size = len(self.system.circuits[ci])
        return ci, s, t, size

    def positions(self, v: Vertex) -> list[int]:
        ci, s, t, size = self._length(v)
        return [(s + k) % size for k in range((t - s) % size)]

    def walk(self, v: Vertex) -> tuple[Traversal, ...]:
        ci = self.segments[v][0]
        circuit = self.system.circuits[ci]
        steps = tuple(circuit[k] for k in self.positions(v))
        if v in self.reversed:
            return tuple(flip(t) for t in reversed(steps))
        return steps

    def interior(self, v: Vertex) -> list[int]:
        """Passage positions strictly between v- and v+."""
        return self.positions(v)[1:]

    def includes(self, v: Vertex, w: Vertex) -> tuple[bool, bool]:
        """Whether C(v) passes through w- and w+."""
        if self.segments[v][0] != self.segments[w][0]:
            return False, False
        inner = set(self.interior(v))
        _, s, t = self.segments[w]
        return s in inner, t in inner

    def closing_passage(self, v: Vertex) -> tuple[int, int]:
        """(arriving, leaving) half-edges of C(v) at v."""
        ci, s, t = self.segments[v]
        h_in, _ = self.system.passage(ci, t)
        _, h_out = self.system.passage(ci, s)
        if v in self.reversed:
            return h_out, h_in
        return h_in, h_out

    @property
    def consistently_oriented(self) -> bool:
        return not self.reversed


def reverse_orientation(gamma: OrientedFundamentalCircuits, v: Vertex) -> OrientedFundamentalCircuits:
    if v not in gamma.segments:
        raise DomainError(f"unknown vertex {v!r}")
    return replace(gamma, reversed=gamma.reversed ^ {v})


def resolve_edge(c: EulerSystem, token) -> int:
    """Edge id from an int, an edge name, or two vertex labels (`ad`, `a d`, `a-d`).

    A vertex pair joined by several edges resolves to the last such edge in
    circuit order.
    """
    f = c.graph
    if isinstance(token, int):
        if not 0 <= token < f.edge_count:
            raise DomainError(f"edge {token} out of range")
        return token
    text = str(token).strip()
    names = [f.edge_name(e) for e in range(f.edge_count)]
    if text in names:
        return names.index(text)
    parts = text.replace("-", " ").split() if ("-" in text or " " in text) else list(text)
    if len(parts) != 2:
        raise DomainError(f"cannot read edge {token!r}")
    a, b = parts
    matches = [e for circuit in c.circuits for e, _ in circuit
               if Counter(f.ends(e)) == Counter((a, b))]
    if not matches:
        raise DomainError(f"no edge joins {a!r} and {b!r}")
    if len(matches) > 1:
        logger.debug("edge %s is ambiguous; using %s", text, f.edge_name(matches[-1]))
    return matches[-1]


def fundamental_circuits(c: EulerSystem, base: Optional[Iterable] = None,
                         choices: Optional[Mapping] = None,
                         reversed_vertices: Iterable[Vertex] = ()) -> OrientedFundamentalCircuits:
    """Choose one fundamental circuit per vertex.

    With `base` (one edge per component) each circuit avoids the base edges;
    with `choices` (vertex -> 0 or 1) the circuit starts at that occurrence;
    otherwise it starts at the first occurrence.
    """
    segments = {}
    base_set = None
    if base is not None:
        base_set = frozenset(resolve_edge(c, e) for e in base)
        base_pos = {}
        for ci, circuit in enumerate(c.circuits):
            hits = [k for k, (e, _) in enumerate(circuit) if e in base_set]
            if len(hits) != 1:
                raise DomainError(f"base must contain exactly one edge of component {ci}")
            base_pos[ci] = hits[0]
        if len(base_set) != len(c.circuits):
            raise DomainError("base must contain exactly one edge per component")
        for v in c.vertices:
            ci, (p1, p2) = c.locate(v)
            segments[v] = (ci, p2, p1) if p1 <= base_pos[ci] < p2 else (ci, p1, p2)
    else:
        choices = choices or {}
        for v in c.vertices:
            ci, (p1, p2) = c.locate(v)
            pick = choices.get(v, 0)
            if pick not in (0, 1):
                raise DomainError(f"occurrence choice for {v!r} must be 0 or 1")
            segments[v] = (ci, p1, p2) if pick == 0 else (ci, p2, p1)
    rev = frozenset(reversed_vertices)
    for v in rev:
        c.locate(v)
    return OrientedFundamentalCircuits(c, segments, rev, base_set)


def kappa_transform(c: EulerSystem, v: Vertex,
                    gamma: Optional[OrientedFundamentalCircuits] = None) -> EulerSystem:
    """Reverse the segment of the circuit at v that traverses C(v)."""
    gamma = gamma or fundamental_circuits(c)
    if gamma.system != c:
        raise DomainError("fundamental circuits belong to another Euler system")
    ci = c.locate(v)[0]
    idx = gamma.positions(v)
    m = len(idx)
    circuit = list(c.circuits[ci])
    old = c.circuits[ci]
    for k in range(m):
        circuit[idx[k]] = flip(old[idx[m - 1 - k]])
    circuits = list(c.circuits)
    circuits[ci] = tuple(circuit)
    return EulerSystem(c.graph, tuple(circuits))


# ----------------------------------------------------------------------
# Circuit partitions and touch-graphs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CircuitPartition:
    graph: FourRegular
    chosen: Mapping
    circuits: tuple
    _circuit_of: dict = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.circuits)

    def circuit_of(self, h: int) -> int:
        return self._circuit_of[h]


def circuit_partition(f: FourRegular, chosen: Mapping) -> CircuitPartition:
    """Follow the chosen pairings to split E(F) into closed trails."""
    for v in f.vertices:
        t = chosen.get(v)
        if t is None or t.half_edges() != frozenset(f.half_edges_at(v)):
            raise DomainError(f"no valid transition chosen at {v!r}")
    used = [False] * f.edge_count
    circuits = []
    circuit_of = {}
    for e0 in range(f.edge_count):
        if used[e0]:
            continue
        start = cur = 2 * e0
        walk = []
        while True:
            e = cur // 2
            used[e] = True
            walk.append((e, cur % 2 == 0))
            circuit_of[cur] = circuit_of[cur ^ 1] = len(circuits)
            arrive = cur ^ 1
            cur = chosen[f.half_vertex[arrive]].partner(arrive)
            if cur == start:
                break
        circuits.append(tuple(walk))
    return CircuitPartition(f, dict(chosen), tuple(circuits), circuit_of)


def partition_from_labels(c: EulerSystem, labels: Mapping) -> CircuitPartition:
    """Circuit partition choosing the transition with the given label at each vertex."""
    chosen = {v: transition_labels(c, v)[Kind(labels[v])] for v in c.vertices}
    return circuit_partition(c.graph, chosen)


def all_circuit_partitions(c: EulerSystem) -> Iterator[tuple[dict, CircuitPartition]]:
    """All 3^n partitions, first vertex most significant, kinds in phi, chi, psi order."""
    vs = c.vertices
    table = {v: transition_labels(c, v) for v in vs}
    count = 0
    try:
        for kinds in product(Kind, repeat=len(vs)):
            labels = dict(zip(vs, kinds))
            count += 1
            yield labels, circuit_partition(c.graph, {v: table[v][labels[v]] for v in vs})
    finally:
        run_summary.observe_partitions(count)


@dataclass(frozen=True)
class TouchGraph:
    """Tch(P) with each e_v directed from the circuit through its initial pair."""
    partition: CircuitPartition
    initial: Mapping

    @property
    def vertex_count(self) -> int:
        return len(self.partition)

    def ends(self, v: Vertex) -> tuple[int, int]:
        first = self.initial[v]
        (second,) = self.partition.chosen[v].pairing - {first}
        return self.partition.circuit_of(min(first)), self.partition.circuit_of(min(second))

    def is_loop(self, v: Vertex) -> bool:
        a, b = self.ends(v)
        return a == b

    def flip(self, v: Vertex) -> "TouchGraph":
        (other,) = self.partition.chosen[v].pairing - {self.initial[v]}
        return TouchGraph(self.partition, {**self.initial, v: other})

    def to_networkx(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from(range(self.vertex_count))
        for v in self.partition.graph.vertices:
            a, b = self.ends(v)
            G.add_edge(a, b, key=v, tail=a)
        return G


def default_orientation(p: CircuitPartition) -> dict:
    """Initial pair of e_v is the one holding the lowest half-edge id at v."""
    f = p.graph
    return {v: p.chosen[v].pair_of(min(f.half_edges_at(v))) for v in f.vertices}


def d_gamma(gamma: OrientedFundamentalCircuits, p: CircuitPartition) -> dict:
    """Initial pair of e_v holds the half-edge by which C(v) returns to v."""
    return {v: p.chosen[v].pair_of(gamma.closing_passage(v)[0]) for v in p.graph.vertices}


def touch_graph(p: CircuitPartition, initial: Optional[Mapping] = None) -> TouchGraph:
    initial = dict(initial) if initial is not None else default_orientation(p)
    for v in p.graph.vertices:
        if initial.get(v) not in p.chosen[v].pairing:
            raise DomainError(f"initial half-edge of e_{v} is not a pair of P({v})")
    return TouchGraph(p, initial)


def flip_direction(d: TouchGraph, v: Vertex) -> TouchGraph:
    return d.flip(v)


def shadow_vector(walk: Sequence[Traversal], d: TouchGraph) -> dict:
    """z_D of the shadow of a closed walk: +1 / -1 per passage crossing e_w.

    Edges and vertices may repeat; each passage contributes on its own.
    """
    f = d.partition.graph
    if not walk:
        raise DomainError("empty walk")
    out = {v: 0 for v in f.vertices}
    for k, t in enumerate(walk):
        h_in, h_out = head_half(walk[k - 1]), tail_half(t)
        w = f.half_vertex[h_in]
        if f.half_vertex[h_out] != w:
            raise DomainError(f"walk is not closed at step {k}")
        transition = d.partition.chosen[w]
        pair = transition.pair_of(h_in)
        if h_out in pair:
            continue
        out[w] += 1 if pair == d.initial[w] else -1
    return out


def m_matrix(gamma: OrientedFundamentalCircuits, p: CircuitPartition,
             d: Optional[TouchGraph] = None) -> ExactMatrix:
    """Rows z_D(shadow of C(v)), columns e_v, over the rationals."""
    d = d if d is not None else touch_graph(p, d_gamma(gamma, p))
    if d.partition.chosen != p.chosen or gamma.system.graph != p.graph:
        raise DomainError("touch-graph, partition and fundamental circuits disagree")
    vs = p.graph.vertices
    rows = []
    for v in vs:
        z = shadow_vector(gamma.walk(v), d)
        rows.append([z[w] for w in vs])
    return ExactMatrix(vs, vs, rows, RATIONAL)


def cycle_space_basis(d: TouchGraph, field: FieldSpec = RATIONAL) -> ExactMatrix:
    """Fundamental cycles of a spanning forest of Tch(P), as signed vectors over e_v."""
    G = d.to_networkx()
    forest = nx.Graph()
    forest.add_nodes_from(G.nodes)
    for a, b, key in nx.minimum_spanning_edges(G, algorithm="kruskal", keys=True, data=False):
        forest.add_edge(a, b, key=key)
    tree_keys = {data["key"] for _, _, data in forest.edges(data=True)}
    vs = d.partition.graph.vertices
    rows = []
    for v in vs:
        if v in tree_keys:
            continue
        a, b = d.ends(v)
        vec = {w: 0 for w in vs}
        vec[v] = 1
        path = nx.shortest_path(forest, b, a)
        for x, y in zip(path, path[1:]):
            key = forest[x][y]["key"]
            vec[key] += 1 if d.ends(key) == (x, y) else -1
        rows.append([vec[w] for w in vs])
    expected = len(vs) - d.vertex_count + nx.number_connected_components(G)
    if len(rows) != expected:
        raise ConsistencyError(f"cycle space basis has {len(rows)} vectors, expected {expected}")
    return ExactMatrix([f"z{i}" for i in range(len(rows))], vs, rows, field)


# ----------------------------------------------------------------------
# Word enumeration
# ----------------------------------------------------------------------

def _first_appearance(word: Sequence) -> str:
    names: dict = {}
    for x in word:
        names.setdefault(x, chr(ord("a") + len(names)))
    return "".join(names[x] for x in word)


def canonical_dow(word: str) -> str:
    """Least relabelled form over rotations and reflections."""
    letters = _tokens(word)
    size = len(letters)
    forms = []
    for seq in (letters, letters[::-1]):
        for r in range(size):
            forms.append(_first_appearance(seq[r:] + seq[:r]))
    return min(forms)


def all_double_occurrence_words(n: int, up_to_symmetry: bool = True) -> list[str]:
    """Double occurrence words on n letters, letters in first-appearance order."""
    if n > 7:
        raise DomainError("word enumeration is limited to 7 letters")
    out = []

    def rec(word: list, open_letters: list, next_letter: int):
        if len(word) == 2 * n:
            out.append("".join(word))
            return
        if next_letter < n:
            letter = chr(ord("a") + next_letter)
            rec(word + [letter], open_letters + [letter], next_letter + 1)
        for i, letter in enumerate(open_letters):
            rec(word + [letter], open_letters[:i] + open_letters[i + 1:], next_letter)

    rec([], [], 0)
    if not up_to_symmetry:
        return out
    return sorted({canonical_dow(w) for w in out})


def random_dow(n: int, rng: random.Random) -> str:
    letters = [chr(ord("a") + i) for i in range(n)] * 2
    rng.shuffle(letters)
    return _first_appearance(letters)

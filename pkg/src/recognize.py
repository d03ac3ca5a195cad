"""
Circle-graph recognition through Naji's GF(2) equations, obstruction
witnesses, small chord-diagram realizations, and the planarity test for
binary matroids through their fundamental graphs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Hashable, Iterable, Optional, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from config import config
from errors import BoundExceededError, ConsistencyError, DomainError
from exactalg import GF2, RATIONAL, ExactMatrix, FieldSpec, solve_gf2_certified
from fourreg import all_double_occurrence_words, interlacement, parse_dow
from graph import (
    CanonicalForm,
    LoopedGraph,
    VertexMinorWitness,
    canonical_form,
    delete_vertices,
    has_vertex_minor,
    named_graph,
)
from isotropic import GroundElement, Kind
from multimatroid import BinaryMatroidRep, fundamental_graph
from telemetry.run_summary import run_summary

logger = logging.getLogger(__name__)

Vertex = Hashable

OBSTRUCTIONS = ("W5", "BW3", "W7")


# ----------------------------------------------------------------------
# Naji equations
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class NajiEquation:
    family: int
    terms: tuple
    rhs: int

    def holds(self, beta: dict) -> bool:
        return sum(beta[t] for t in self.terms) % 2 == self.rhs

    def __str__(self) -> str:
        lhs = " + ".join(f"b({v},{w})" for v, w in self.terms)
        return f"{lhs} = {self.rhs}"


@dataclass(frozen=True)
class NajiSystem:
    variables: tuple
    equations: tuple

    def family_count(self, family: int) -> int:
        return sum(1 for eq in self.equations if eq.family == family)

    def to_matrix(self) -> tuple[ExactMatrix, dict]:
        index = {var: j for j, var in enumerate(self.variables)}
        rows = []
        for eq in self.equations:
            row = [0] * len(self.variables)
            for t in eq.terms:
                row[index[t]] ^= 1
            rows.append(row)
        labels = list(range(len(self.equations)))
        return ExactMatrix(labels, self.variables, rows, GF2), {i: eq.rhs for i, eq in enumerate(self.equations)}

    def is_solution(self, beta: dict) -> bool:
        return all(eq.holds(beta) for eq in self.equations)


def naji_system(g: LoopedGraph) -> NajiSystem:
    """The three families: edges, an edge with a common non-neighbour, a non-adjacent pair of neighbours."""
    if not g.is_simple:
        raise DomainError("Naji equations are defined for graphs without loops")
    vs = g.vertices
    variables = tuple((v, w) for v in vs for w in vs if v != w)
    equations = []
    for v, w in g.edges():
        equations.append(NajiEquation(1, ((v, w), (w, v)), 1))
    for v, w in g.edges():
        for x in vs:
            if x in (v, w) or g.has_edge(x, v) or g.has_edge(x, w):
                continue
            equations.append(NajiEquation(2, ((x, v), (x, w)), 0))
    for v in vs:
        for w, x in combinations([u for u in vs if g.has_edge(v, u)], 2):
            if g.has_edge(w, x):
                continue
            equations.append(NajiEquation(3, ((v, w), (v, x), (w, x), (x, w)), 1))
    run_summary.observe_naji(len(equations))
    return NajiSystem(variables, tuple(equations))


@dataclass(frozen=True)
class CircleVerdict:
    circle: bool
    solution: Optional[dict]
    certificate: tuple = ()
    system: Optional[NajiSystem] = None


def is_circle(g: LoopedGraph) -> CircleVerdict:
    """Solve the Naji system; the certificate lists equations summing to 0 = 1."""
    system = naji_system(g)
    if not system.equations:
        return CircleVerdict(True, {var: 0 for var in system.variables}, system=system)
    a, b = system.to_matrix()
    result = solve_gf2_certified(a, b)
    if result.consistent:
        return CircleVerdict(True, result.solution, system=system)
    return CircleVerdict(False, None, tuple(system.equations[i] for i in result.certificate), system)


def naji_from_signed(s) -> dict:
    """Read a Naji solution off a signed IAS.

    Edge vw: A_vw = 1 gives 0, A_vw = -1 gives 1. Non-edge: B_vw = 0 gives 0,
    B_vw = 2 gives 1.
    """
    g = interlacement(s.system)
    a, b = s.a_block, s.b_block
    beta = {}
    for v in g.vertices:
        for w in g.vertices:
            if v == w:
                continue
            if g.has_edge(v, w):
                value = {1: 0, -1: 1}.get(int(a.entry(v, w)))
            else:
                value = {0: 0, 2: 1}.get(int(b.entry(v, w)))
            if value is None:
                raise ConsistencyError(f"signed IAS entry at ({v}, {w}) does not fit its interlacement")
            beta[v, w] = value
    if not naji_system(g).is_solution(beta):
        raise ConsistencyError("signed IAS does not yield a Naji solution")
    return beta


def mod2_information_loss(s) -> list[tuple]:
    """(v, w, entry) for every pair whose Naji value 1 is invisible mod 2.

    Over GF(2) both A entries of an edge read 1 and both B entries of a
    non-edge read 0, so these are exactly the pairs where the signed matrix
    carries more than IAS(G) does.
    """
    g = interlacement(s.system)
    out = []
    for v in g.vertices:
        for w in g.vertices:
            if v == w:
                continue
            if g.has_edge(v, w) and s.a_block.entry(v, w) == -1:
                out.append((v, w, -1))
            elif not g.has_edge(v, w) and s.b_block.entry(v, w) == 2:
                out.append((v, w, 2))
    return out


# ----------------------------------------------------------------------
# Obstructions and realizations
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionResult:
    name: Optional[str]
    witness: Optional[VertexMinorWitness]
    complete: bool

    @property
    def found(self) -> bool:
        return self.name is not None


def find_obstruction(g: LoopedGraph, budget: Optional[int] = None) -> ObstructionResult:
    """First of W5, BW3, W7 found as a vertex-minor of g."""
    if not g.is_simple:
        raise DomainError("obstruction search needs a graph without loops")
    complete = True
    for name in OBSTRUCTIONS:
        h = named_graph(name)
        if h.n > g.n:
            continue
        result = has_vertex_minor(g, h, budget)
        if result.found:
            logger.info("found %s as a vertex-minor after %d states", name, result.states)
            return ObstructionResult(name, result.witness, True)
        complete = complete and result.complete
    return ObstructionResult(None, None, complete)


@lru_cache(maxsize=None)
def _realizations(k: int) -> dict[CanonicalForm, tuple[str, ...]]:
    """Canonical words of every connected interlacement graph on k letters, grouped by class."""
    table: dict = {}
    for word in all_double_occurrence_words(k):
        _, c = parse_dow([word])
        h = interlacement(c)
        if k > 1 and not nx.is_connected(h.to_networkx()):
            continue
        table.setdefault(canonical_form(h), []).append(word)
    logger.debug("cached %d connected interlacement classes on %d letters", len(table), k)
    return {form: tuple(words) for form, words in table.items()}


def _join(letters: Sequence) -> str:
    labels = [str(x) for x in letters]
    return ("" if all(len(x) == 1 for x in labels) else " ").join(labels)


def _least_word(words: Sequence[str], component: LoopedGraph) -> tuple:
    """Least label sequence over every word, isomorphism onto component, rotation and reversal."""
    best = None
    target = component.to_networkx()
    for word in words:
        _, c = parse_dow([word])
        for iso in GraphMatcher(interlacement(c).to_networkx(), target).isomorphisms_iter():
            letters = [str(iso[x]) for x in word]
            for seq in (letters, letters[::-1]):
                for i in range(len(seq)):
                    candidate = tuple(seq[i:] + seq[:i])
                    if best is None or candidate < best:
                        best = candidate
    if best is None:
        raise ConsistencyError("cached realization lost its interlacement graph")
    return best


def realize(g: LoopedGraph) -> Optional[list[str]]:
    """Lexicographically least word per component whose interlacement is exactly g, or None."""
    if not g.is_simple:
        raise DomainError("only graphs without loops are realized")
    if g.n > config.REALIZE_VERTEX_BOUND:
        raise BoundExceededError("realization", g.n, config.REALIZE_VERTEX_BOUND)
    words = []
    for part in nx.connected_components(g.to_networkx()):
        component = delete_vertices(g, [v for v in g.vertices if v not in part])
        candidates = _realizations(component.n).get(canonical_form(component))
        if candidates is None:
            return None
        words.append(_join(_least_word(candidates, component)))
    return words


# ----------------------------------------------------------------------
# Graphic matroids and planarity
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class GraphicMatroid:
    """Standard binary representation of M(G) with its signed network matrix."""
    rep: BinaryMatroidRep
    network: ExactMatrix


def _edge_label(u, v) -> str:
    return f"{u}{v}"


def network_matrix(vertices: Sequence[Vertex], edges: Sequence[tuple],
                   tree: Optional[Iterable[tuple]] = None) -> ExactMatrix:
    """Rows: tree edges; columns: other edges; +1 / -1 for forward / backward
    tree edges on the tree path from the tail to the head of the column edge.
    """
    G = nx.Graph()
    G.add_nodes_from(vertices)
    G.add_edges_from(edges)
    if not nx.is_connected(G):
        raise DomainError("network matrices need a connected graph")
    if tree is None:
        bfs = {frozenset(e) for e in nx.bfs_tree(G, vertices[0]).edges()}
        tree_edges = [e for e in edges if frozenset(e) in bfs]
    else:
        tree_edges = [tuple(e) for e in tree]
    T = nx.Graph()
    T.add_nodes_from(vertices)
    T.add_edges_from(tree_edges)
    if not nx.is_tree(T) or any(e not in edges for e in tree_edges):
        raise DomainError("tree must be a spanning tree made of graph edges")
    direction = {frozenset(e): e for e in tree_edges}
    cotree = [e for e in edges if e not in tree_edges]
    data = []
    for t in tree_edges:
        data.append([0] * len(cotree))
    row_of = {frozenset(t): i for i, t in enumerate(tree_edges)}
    for j, (u, v) in enumerate(cotree):
        path = nx.shortest_path(T, u, v)
        for a, b in zip(path, path[1:]):
            i = row_of[frozenset((a, b))]
            data[i][j] = 1 if direction[frozenset((a, b))] == (a, b) else -1
    return ExactMatrix([_edge_label(*t) for t in tree_edges], [_edge_label(*e) for e in cotree],
                       data, RATIONAL)


def _named_graphic(name: str) -> tuple[list, list]:
    token = name.strip().upper().replace(",", "")
    if token in ("K4", "K5"):
        vs = [str(i) for i in range(1, int(token[1]) + 1)]
        return vs, list(combinations(vs, 2))
    if token == "K33":
        left, right = ["a1", "a2", "a3"], ["b1", "b2", "b3"]
        return left + right, [(a, b) for a in left for b in right]
    raise DomainError(f"unknown graphic matroid {name!r}")


def graphic_matroid(graph) -> GraphicMatroid:
    """M(K4), M(K5), M(K3,3) by name, or M(G) from (vertices, edges)."""
    vertices, edges = _named_graphic(graph) if isinstance(graph, str) else graph
    vertices, edges = list(vertices), [tuple(e) for e in edges]
    n = network_matrix(vertices, edges)
    a = [[int(x) % 2 for x in n.row(r)] for r in n.rows]
    return GraphicMatroid(BinaryMatroidRep(tuple(n.rows) + tuple(n.cols), tuple(map(tuple, a))), n)


def z2_tu_candidate(gm: GraphicMatroid, field: FieldSpec) -> ExactMatrix:
    """(I | [[0, N], [-N^T, 0]]) with phi / chi columns on the fundamental graph's vertices.

    The rows of the basis carry (I | N), a representation of M; the other
    rows carry (I | -N^T), one of M*. Both are valid over every field since
    N is totally unimodular.
    """
    n = gm.network
    vs = list(n.rows) + list(n.cols)
    signed = {}
    for b in n.rows:
        for c in n.cols:
            signed[b, c] = n.entry(b, c)
            signed[c, b] = -n.entry(b, c)
    cols = [GroundElement(w, k) for k in (Kind.PHI, Kind.CHI) for w in vs]
    data = []
    for v in vs:
        row = []
        for e in cols:
            if e.kind is Kind.PHI:
                row.append(1 if v == e.vertex else 0)
            else:
                row.append(signed.get((v, e.vertex), 0))
        data.append(row)
    return ExactMatrix(vs, cols, data, RATIONAL).over(field)


def matroid_is_planar(m: BinaryMatroidRep) -> bool:
    """Planar iff the fundamental graph is a circle graph."""
    return is_circle(fundamental_graph(m)).circle

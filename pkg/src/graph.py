"""
Looped simple graphs: local and loop complementation, vertex deletion,
local-equivalence orbits, canonical forms, isomorphism and vertex-minor search.

Searches run on a bitset encoding (vertex i <-> bit i) of the labelled graph;
results are translated back to the caller's labels.
"""

from __future__ import annotations

import logging
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from config import config
from errors import BoundExceededError, ConsistencyError, DomainError
from exactalg import GF2, ExactMatrix, FieldSpec
from telemetry.run_summary import run_summary

logger = logging.getLogger(__name__)

Vertex = Hashable
Bits = tuple[int, ...]


class LocalMode(str, Enum):
    SIMPLE = "simple"
    NONSIMPLE = "nonsimple"


class LoopedGraph:
    """Immutable looped simple graph: an adjacency relation plus a loop set."""

    __slots__ = ("vertices", "loops", "_nbrs", "_index")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple[Vertex, Vertex]] = (),
                 loops: Iterable[Vertex] = ()):
        self.vertices = tuple(dict.fromkeys(vertices))
        self._index = {v: i for i, v in enumerate(self.vertices)}
        nbrs: dict[Vertex, set] = {v: set() for v in self.vertices}
        loop_set = set()
        for v in loops:
            self._require(v)
            loop_set.add(v)
        for a, b in edges:
            self._require(a)
            self._require(b)
            if a == b:
                loop_set.add(a)
            else:
                nbrs[a].add(b)
                nbrs[b].add(a)
        self._nbrs = {v: frozenset(s) for v, s in nbrs.items()}
        self.loops = frozenset(loop_set)

    def _require(self, v: Vertex) -> None:
        if v not in self._index:
            raise DomainError(f"unknown vertex {v!r}")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def index(self, v: Vertex) -> int:
        self._require(v)
        return self._index[v]

    def neighbors(self, v: Vertex) -> frozenset:
        self._require(v)
        return self._nbrs[v]

    def degree(self, v: Vertex) -> int:
        return len(self.neighbors(v))

    def has_edge(self, a: Vertex, b: Vertex) -> bool:
        return b in self.neighbors(a)

    def has_loop(self, v: Vertex) -> bool:
        self._require(v)
        return v in self.loops

    @property
    def is_simple(self) -> bool:
        return not self.loops

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        """Edges (a, b) with a before b in vertex order, sorted by that order."""
        out = []
        for i, a in enumerate(self.vertices):
            for b in sorted(self._nbrs[a], key=self._index.__getitem__):
                if self._index[b] > i:
                    out.append((a, b))
        return out

    def number_of_edges(self) -> int:
        return sum(len(s) for s in self._nbrs.values()) // 2

    def adjacency_matrix(self, field: FieldSpec = GF2) -> ExactMatrix:
        """A(G): symmetric, 1 on the diagonal exactly at loops."""
        data = [[1 if (a == b and a in self.loops) or b in self._nbrs[a] else 0
                 for b in self.vertices] for a in self.vertices]
        return ExactMatrix(self.vertices, self.vertices, data, field)

    def without_loops(self) -> "LoopedGraph":
        return LoopedGraph(self.vertices, self.edges())

    def relabel(self, mapping: Mapping[Vertex, Vertex]) -> "LoopedGraph":
        return LoopedGraph([mapping[v] for v in self.vertices],
                           [(mapping[a], mapping[b]) for a, b in self.edges()],
                           [mapping[v] for v in self.vertices if v in self.loops])

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        for v in self.vertices:
            G.add_node(v, loop=v in self.loops)
        G.add_edges_from(self.edges())
        return G

    @classmethod
    def from_networkx(cls, G: nx.Graph) -> "LoopedGraph":
        loops = [v for v, d in G.nodes(data=True) if d.get("loop")]
        loops += [a for a, b in G.edges() if a == b]
        return cls(G.nodes(), [(a, b) for a, b in G.edges() if a != b], loops)

    def to_bits(self) -> tuple[Bits, int]:
        idx = self._index
        adj = tuple(sum(1 << idx[u] for u in self._nbrs[v]) for v in self.vertices)
        loops = sum(1 << idx[v] for v in self.loops)
        return adj, loops

    @classmethod
    def from_bits(cls, vertices: Sequence[Vertex], adj: Bits, loops: int) -> "LoopedGraph":
        vertices = tuple(vertices)
        edges = [(vertices[i], vertices[j]) for i in range(len(vertices))
                 for j in range(i + 1, len(vertices)) if adj[i] >> j & 1]
        return cls(vertices, edges, [vertices[i] for i in range(len(vertices)) if loops >> i & 1])

    def _key(self):
        return (frozenset(self.vertices),
                frozenset(frozenset(e) for e in self.edges()),
                self.loops)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LoopedGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        edges = " ".join(f"{a}{b}" if len(str(a)) == len(str(b)) == 1 else f"{a}-{b}"
                         for a, b in self.edges())
        loops = f", loops={sorted(map(str, self.loops))}" if self.loops else ""
        return f"LoopedGraph(n={self.n}, edges=[{edges}]{loops})"


# ----------------------------------------------------------------------
# Generators and deletion
# ----------------------------------------------------------------------

def _lc_bits(adj: Bits, loops: int, v: int, nonsimple: bool) -> tuple[Bits, int]:
    nb = adj[v]
    new = list(adj)
    rest = nb
    while rest:
        low = rest & -rest
        u = low.bit_length() - 1
        new[u] ^= nb & ~low
        rest ^= low
    if nonsimple:
        loops ^= nb
    return tuple(new), loops


def loop_complement(g: LoopedGraph, v: Vertex) -> LoopedGraph:
    """Flip the loop status of v."""
    g._require(v)
    return LoopedGraph(g.vertices, g.edges(), g.loops ^ {v})


def local_complement(g: LoopedGraph, v: Vertex, mode: LocalMode | str = LocalMode.SIMPLE) -> LoopedGraph:
    """Complement adjacency among the neighbours of v (and their loops when nonsimple)."""
    mode = LocalMode(mode)
    adj, loops = g.to_bits()
    adj, loops = _lc_bits(adj, loops, g.index(v), mode is LocalMode.NONSIMPLE)
    return LoopedGraph.from_bits(g.vertices, adj, loops)


def delete_vertices(g: LoopedGraph, x: Iterable[Vertex]) -> LoopedGraph:
    """Induced subgraph on V(g) minus x."""
    drop = set(x)
    for v in drop:
        g._require(v)
    keep = [v for v in g.vertices if v not in drop]
    keep_set = set(keep)
    return LoopedGraph(keep, [(a, b) for a, b in g.edges() if a in keep_set and b in keep_set],
                       [v for v in g.loops if v in keep_set])


@dataclass(frozen=True)
class Move:
    """One generator application: kind is `loop`, `simple` or `nonsimple`."""
    kind: str
    vertex: Vertex

    def apply(self, g: LoopedGraph) -> LoopedGraph:
        if self.kind == "loop":
            return loop_complement(g, self.vertex)
        return local_complement(g, self.vertex, self.kind)


def apply_moves(g: LoopedGraph, moves: Iterable[Move]) -> LoopedGraph:
    for move in moves:
        g = move.apply(g)
    return g


# ----------------------------------------------------------------------
# Canonical form
# ----------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Isomorphism-invariant byte encoding of a LoopedGraph."""
    data: bytes

    @property
    def n(self) -> int:
        return self.data[0]

    def to_graph(self) -> LoopedGraph:
        n, enc = _unpack(self.data)
        adj, loops = _decode(n, enc)
        return LoopedGraph.from_bits([str(i) for i in range(n)], adj, loops)

    def hex(self) -> str:
        return self.data.hex()


def _encoding_length(n: int) -> int:
    return n + n * (n - 1) // 2


def _pack(n: int, enc: int) -> bytes:
    return bytes([n]) + enc.to_bytes((_encoding_length(n) + 7) // 8, "big")


def _unpack(data: bytes) -> tuple[int, int]:
    return data[0], int.from_bytes(data[1:], "big")


def _decode(n: int, enc: int) -> tuple[Bits, int]:
    length = _encoding_length(n)
    pos = length - 1
    loops = 0
    for i in range(n):
        if enc >> pos & 1:
            loops |= 1 << i
        pos -= 1
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if enc >> pos & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            pos -= 1
    return tuple(adj), loops


def _reindex(keys: list) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(colors: list[int], nbrs: list[list[int]]) -> list[int]:
    cells = len(set(colors))
    while True:
        keys = [(colors[v], tuple(sorted(colors[u] for u in nbrs[v]))) for v in range(len(colors))]
        colors = _reindex(keys)
        new_cells = len(set(colors))
        if new_cells == cells:
            return colors
        cells = new_cells


@lru_cache(maxsize=500_000)
def _canonical(n: int, adj: Bits, loops: int) -> tuple[int, tuple[int, ...]]:
    """Minimum encoding over the leaves of the refinement search tree.

    Returns (encoding, order) where order[k] is the vertex placed at
    canonical position k.
    """
    if n == 0:
        return 0, ()
    nbrs = [[u for u in range(n) if adj[v] >> u & 1] for v in range(n)]
    best: list = [None, None]

    def encode(order: tuple[int, ...]) -> int:
        enc = 0
        for v in order:
            enc = enc << 1 | (loops >> v & 1)
        for i in range(n):
            row = adj[order[i]]
            for j in range(i + 1, n):
                enc = enc << 1 | (row >> order[j] & 1)
        return enc

    def twins(u: int, v: int) -> bool:
        return ((loops >> u & 1) == (loops >> v & 1)
                and adj[u] & ~(1 << v) == adj[v] & ~(1 << u))

    def search(colors: list[int]) -> None:
        colors = _refine(colors, nbrs)
        counts = Counter(colors)
        if len(counts) == n:
            order = tuple(sorted(range(n), key=colors.__getitem__))
            enc = encode(order)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, order
            return
        target = min(c for c, k in counts.items() if k > 1)
        reps: list[int] = []
        for v in range(n):
            if colors[v] == target and not any(twins(u, v) for u in reps):
                reps.append(v)
        for v in reps:
            search(_reindex([(colors[w], 0 if w == v else 1) for w in range(n)]))

    search(_reindex([((loops >> v) & 1, len(nbrs[v])) for v in range(n)]))
    return best[0], best[1]


def canonical_form(g: LoopedGraph) -> CanonicalForm:
    """Byte encoding equal for two graphs exactly when they are isomorphic."""
    if g.n > config.ISOMORPHISM_VERTEX_BOUND:
        raise BoundExceededError("canonical form", g.n, config.ISOMORPHISM_VERTEX_BOUND)
    adj, loops = g.to_bits()
    return CanonicalForm(_pack(g.n, _canonical(g.n, adj, loops)[0]))


def _canonical_bits(n: int, adj: Bits, loops: int) -> tuple[int, Bits, int]:
    enc, _ = _canonical(n, adj, loops)
    cadj, cloops = _decode(n, enc)
    return enc, cadj, cloops


# ----------------------------------------------------------------------
# Isomorphism
# ----------------------------------------------------------------------

def is_isomorphic(g: LoopedGraph, h: LoopedGraph) -> Optional[dict]:
    """A bijection V(g) -> V(h) preserving adjacency and loops, or None."""
    bound = config.ISOMORPHISM_VERTEX_BOUND
    if max(g.n, h.n) > bound:
        raise BoundExceededError("isomorphism", max(g.n, h.n), bound)
    if g.n != h.n or g.number_of_edges() != h.number_of_edges() or len(g.loops) != len(h.loops):
        return None
    if sorted(map(g.degree, g.vertices)) != sorted(map(h.degree, h.vertices)):
        return None
    matcher = GraphMatcher(g.to_networkx(), h.to_networkx(),
                           node_match=lambda a, b: a["loop"] == b["loop"])
    if matcher.is_isomorphic():
        return dict(matcher.mapping)
    return None


# ----------------------------------------------------------------------
# Orbits and vertex-minors
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitResult:
    """Canonical forms reached by the generators; complete unless the budget was hit."""
    forms: frozenset
    complete: bool

    @property
    def size(self) -> int:
        return len(self.forms)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, LoopedGraph):
            item = canonical_form(item)
        return item in self.forms


def _orbit_encodings(n: int, adj: Bits, loops: int, budget: int,
                     simple_only: bool) -> tuple[set[int], bool]:
    enc, cadj, cloops = _canonical_bits(n, adj, loops)
    seen = {enc}
    queue = deque([(cadj, cloops)])
    while queue:
        adj, loops = queue.popleft()
        successors = []
        for v in range(n):
            successors.append(_lc_bits(adj, loops, v, False))
            if not simple_only:
                successors.append(_lc_bits(adj, loops, v, True))
                successors.append((adj, loops ^ (1 << v)))
        for sadj, sloops in successors:
            senc, scadj, scloops = _canonical_bits(n, sadj, sloops)
            if senc in seen:
                continue
            if len(seen) >= budget:
                return seen, False
            seen.add(senc)
            queue.append((scadj, scloops))
    return seen, True


def local_equivalence_orbit(g: LoopedGraph, budget: Optional[int] = None,
                            simple_only: bool = False) -> OrbitResult:
    """BFS closure of g under loop complementation and both local complementations."""
    budget = config.ORBIT_BUDGET if budget is None else budget
    if budget <= 0:
        raise DomainError("orbit budget must be positive")
    if g.n > config.GRAPH_VERTEX_BOUND:
        raise BoundExceededError("local equivalence orbit", g.n, config.GRAPH_VERTEX_BOUND)
    adj, loops = g.to_bits()
    encs, complete = _orbit_encodings(g.n, adj, loops, budget, simple_only)
    run_summary.observe_search(orbit_states=len(encs), truncated=not complete)
    if not complete:
        logger.warning("orbit of %d-vertex graph truncated at %d states", g.n, budget)
    return OrbitResult(frozenset(CanonicalForm(_pack(g.n, e)) for e in encs), complete)


@dataclass(frozen=True)
class VertexMinorWitness:
    """Apply `moves` to g, delete `deleted`; `isomorphism` maps the rest onto h."""
    moves: tuple[Move, ...]
    deleted: frozenset
    isomorphism: dict = field(hash=False)

    def replay(self, g: LoopedGraph) -> LoopedGraph:
        return delete_vertices(apply_moves(g, self.moves), self.deleted)


@dataclass(frozen=True)
class VertexMinorResult:
    witness: Optional[VertexMinorWitness]
    complete: bool
    states: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def _deletion_variants(adj: Bits, order: Sequence[int]) -> Iterator[tuple[Bits, tuple[int, ...]]]:
    """For each vertex of `order` in turn: delete it from G, G*x or G∧xw.

    Yields the graph after the local complementations (deleted vertices are
    still present in the bitsets) and the simple moves applied.
    """
    def rec(k: int, adj: Bits, moves: tuple[int, ...], deleted: int):
        if k == len(order):
            yield adj, moves
            return
        x = order[k]
        nb = adj[x] & ~deleted
        now_deleted = deleted | (1 << x)
        yield from rec(k + 1, adj, moves, now_deleted)
        if nb:
            star, _ = _lc_bits(adj, 0, x, False)
            yield from rec(k + 1, star, moves + (x,), now_deleted)
            w = (nb & -nb).bit_length() - 1
            pivot, _ = _lc_bits(_lc_bits(star, 0, w, False)[0], 0, x, False)
            yield from rec(k + 1, pivot, moves + (x, w, x), now_deleted)

    yield from rec(0, adj, (), 0)


def _induced_bits(adj: Bits, keep: Sequence[int]) -> Bits:
    pos = {v: i for i, v in enumerate(keep)}
    out = []
    for v in keep:
        row = 0
        for u in keep:
            if adj[v] >> u & 1:
                row |= 1 << pos[u]
        out.append(row)
    return tuple(out)


def _lc_path(n: int, adj: Bits, target: int, budget: int) -> Optional[list[int]]:
    """Simple local complementations turning adj into a graph with encoding target."""
    start = _canonical(n, adj, 0)[0]
    if start == target:
        return []
    seen = {start}
    queue = deque([(adj, [])])
    while queue:
        cur, path = queue.popleft()
        for v in range(n):
            nxt, _ = _lc_bits(cur, 0, v, False)
            enc = _canonical(n, nxt, 0)[0]
            if enc == target:
                return path + [v]
            if enc in seen or len(seen) >= budget:
                continue
            seen.add(enc)
            queue.append((nxt, path + [v]))
    return None


def has_vertex_minor(g: LoopedGraph, h: LoopedGraph, budget: Optional[int] = None) -> VertexMinorResult:
    """Search for h as a vertex-minor of g.

    The search removes the vertices of each candidate deletion set one at a
    time, branching over G - x, G*x - x and G∧xw - x; a leaf is accepted when
    it lies in the simple local-equivalence class of h. Loops never affect
    the underlying simple class, so they are cleared first and restored at
    the end with loop complementations.
    """
    budget = config.VERTEX_MINOR_BUDGET if budget is None else budget
    if budget <= 0:
        raise DomainError("vertex-minor budget must be positive")
    if h.n > g.n:
        raise DomainError("h has more vertices than g")
    if g.n > config.GRAPH_VERTEX_BOUND:
        raise BoundExceededError("vertex-minor search", g.n, config.GRAPH_VERTEX_BOUND)

    iso = is_isomorphic(g, h)
    if iso is not None:
        return VertexMinorResult(VertexMinorWitness((), frozenset(), iso), True, 1)

    h_simple = h.without_loops()
    h_adj, _ = h_simple.to_bits()
    target = _canonical(h.n, h_adj, 0)[0]
    targets, complete = _orbit_encodings(h.n, h_adj, 0, budget, simple_only=True)

    adj, _ = g.to_bits()
    states = 0
    for deleted in combinations(range(g.n), g.n - h.n):
        keep = [i for i in range(g.n) if i not in deleted]
        for leaf_adj, lc_moves in _deletion_variants(adj, deleted):
            states += 1
            if states > budget:
                run_summary.observe_search(vertex_minor_states=states, truncated=True)
                return VertexMinorResult(None, False, states)
            sub = _induced_bits(leaf_adj, keep)
            if _canonical(h.n, sub, 0)[0] not in targets:
                continue
            path = _lc_path(h.n, sub, target, budget)
            if path is None:
                continue
            witness = _build_witness(g, h, deleted, lc_moves, [keep[i] for i in path])
            run_summary.observe_search(vertex_minor_states=states)
            return VertexMinorResult(witness, True, states)

    run_summary.observe_search(vertex_minor_states=states, truncated=not complete)
    return VertexMinorResult(None, complete, states)


def _build_witness(g: LoopedGraph, h: LoopedGraph, deleted: Sequence[int],
                   lc_moves: Sequence[int], path: Sequence[int]) -> VertexMinorWitness:
    vs = g.vertices
    moves = [Move("loop", v) for v in vs if v in g.loops]
    moves += [Move(LocalMode.SIMPLE.value, vs[i]) for i in list(lc_moves) + list(path)]
    removed = frozenset(vs[i] for i in deleted)
    reduced = delete_vertices(apply_moves(g, moves), removed)
    iso = is_isomorphic(reduced, h.without_loops())
    if iso is None:
        raise ConsistencyError("vertex-minor witness does not reproduce h")
    moves += [Move("loop", u) for u in reduced.vertices if iso[u] in h.loops]
    witness = VertexMinorWitness(tuple(moves), removed, {})
    final_iso = is_isomorphic(witness.replay(g), h)
    if final_iso is None:
        raise ConsistencyError("vertex-minor witness does not reproduce h")
    return VertexMinorWitness(tuple(moves), removed, final_iso)


# ----------------------------------------------------------------------
# Named graphs
# ----------------------------------------------------------------------

def _wheel(spokes: int) -> LoopedGraph:
    hub = "1"
    rim = [str(i) for i in range(2, spokes + 2)]
    edges = [(hub, r) for r in rim]
    edges += [(rim[i - 1], rim[i]) for i in range(1, len(rim))] + [(rim[0], rim[-1])]
    return LoopedGraph([hub] + rim, edges)


def _bipartite_wheel() -> LoopedGraph:
    # W3 with every rim edge subdivided: bipartite, 7 vertices, 9 edges
    rim = ["r1", "r2", "r3"]
    mids = ["s12", "s23", "s31"]
    edges = [("h", r) for r in rim]
    edges += [("r1", "s12"), ("s12", "r2"), ("r2", "s23"), ("s23", "r3"), ("r3", "s31"), ("s31", "r1")]
    return LoopedGraph(["h"] + rim + mids, edges)


_NAMED = re.compile(r"^(C|K|P|PATH|W)_?(\d+)$")


def named_graph(name: str) -> LoopedGraph:
    """W5, W7, BW3, C_n, K_n, path_n (also written C5, K4, P3, path_4)."""
    token = name.strip().upper()
    if token == "BW3":
        return _bipartite_wheel()
    m = _NAMED.match(token)
    if not m:
        raise DomainError(f"unknown graph name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "W":
        if n < 3:
            raise DomainError("wheels need at least 3 spokes")
        return _wheel(n)
    labels = [str(i) for i in range(1, n + 1)]
    if kind == "K":
        return LoopedGraph(labels, combinations(labels, 2))
    if kind == "C":
        if n < 3:
            raise DomainError("cycles need at least 3 vertices")
        return LoopedGraph(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])
    return LoopedGraph(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])


def all_simple_graphs(n: int) -> list[LoopedGraph]:
    """One representative per isomorphism class of simple graphs on n vertices."""
    if n > 7:
        raise BoundExceededError("simple graph enumeration", n, 7)
    labels = [str(i) for i in range(n)]
    pairs = list(combinations(range(n), 2))
    seen: dict[int, LoopedGraph] = {}
    for mask in range(1 << len(pairs)):
        adj = [0] * n
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        enc = _canonical(n, tuple(adj), 0)[0]
        if enc not in seen:
            seen[enc] = LoopedGraph.from_bits(labels, tuple(adj), 0)
    return [seen[k] for k in sorted(seen)]

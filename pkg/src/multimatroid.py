"""
Semi-multimatroids backed by an explicit circuit family or a rank oracle.

Elements are any hashable labels; the skew classes partition them. Ranks are
only ever asked of subtransversals (at most one element per class).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from math import prod
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from config import config
from errors import BoundExceededError, ConsistencyError, DomainError
from exactalg import GF2, EchelonBasis, ExactMatrix, FieldSpec, column_rank
from graph import LoopedGraph
from logging_config import log_sweep

logger = logging.getLogger(__name__)

Element = Hashable


class MultimatroidClass(str, Enum):
    NOT_MULTIMATROID = "not_multimatroid"
    MULTIMATROID = "multimatroid"
    TIGHT = "tight_multimatroid"


class SemiMultimatroid:
    """(U, Omega, C): ground set, skew classes and circuits.

    Exactly one of `circuits` and `rank` must be given. Explicit circuit
    families are checked for the circuit axioms on every transversal.
    """

    def __init__(self, classes: Iterable[Iterable[Element]], *,
                 circuits: Optional[Iterable[Iterable[Element]]] = None,
                 rank: Optional[Callable[[frozenset], int]] = None,
                 name: str = ""):
        if (circuits is None) == (rank is None):
            raise DomainError("give exactly one of circuits or rank")
        self.classes: tuple[tuple, ...] = tuple(tuple(c) for c in classes if tuple(c))
        self.class_of: dict = {}
        for i, cls in enumerate(self.classes):
            for e in cls:
                if e in self.class_of:
                    raise DomainError(f"element {e!r} lies in two classes")
                self.class_of[e] = i
        self.ground: tuple = tuple(e for cls in self.classes for e in cls)
        self._position = {e: i for i, e in enumerate(self.ground)}
        self.name = name
        self._rank_oracle = rank
        self._circuits: Optional[tuple[frozenset, ...]] = None
        if circuits is not None:
            family = []
            for c in circuits:
                c = self.subtransversal(c)
                if not c:
                    raise DomainError("circuits must be nonempty")
                family.append(c)
            self._circuits = tuple(sorted(set(family), key=self._sort_key))
            self._validate_circuits()
            self._by_element = {e: [c for c in self._circuits if e in c] for e in self.ground}

    # -- basics ---------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.classes)

    @property
    def explicit(self) -> bool:
        return self._rank_oracle is None

    def _sort_key(self, s: frozenset) -> tuple:
        return len(s), sorted(self._position[e] for e in s)

    def subtransversal(self, s: Iterable[Element]) -> frozenset:
        s = frozenset(s)
        seen = set()
        for e in s:
            if e not in self.class_of:
                raise DomainError(f"{e!r} is not an element of {self.name or 'the multimatroid'}")
            if self.class_of[e] in seen:
                raise DomainError(f"{sorted(map(str, s))} meets a skew class twice")
            seen.add(self.class_of[e])
        return s

    def is_subtransversal(self, s: Iterable[Element]) -> bool:
        try:
            self.subtransversal(s)
        except DomainError:
            return False
        return True

    def subtransversals(self) -> Iterator[frozenset]:
        for pick in product(*[(None,) + cls for cls in self.classes]):
            yield frozenset(e for e in pick if e is not None)

    def transversals(self) -> Iterator[frozenset]:
        for pick in product(*self.classes):
            yield frozenset(pick)

    def subtransversal_count(self) -> int:
        return prod(len(cls) + 1 for cls in self.classes)

    def _validate_circuits(self) -> None:
        family = self._circuits
        for c1, c2 in combinations(family, 2):
            if c1 < c2 or c2 < c1:
                raise DomainError(f"circuits {sorted(map(str, c1))} and {sorted(map(str, c2))} are nested")
            union = c1 | c2
            if not self.is_subtransversal(union):
                continue
            for e in c1 & c2:
                rest = union - {e}
                if not any(c3 <= rest for c3 in family):
                    raise DomainError(
                        f"circuit elimination fails for {sorted(map(str, c1))}, "
                        f"{sorted(map(str, c2))} at {e}")

    # -- rank -----------------------------------------------------------

    def rank(self, s: Iterable[Element]) -> int:
        s = self.subtransversal(s)
        if self._rank_oracle is not None:
            return self._rank_oracle(s)
        independent: set = set()
        for e in sorted(s, key=self._position.__getitem__):
            trial = independent | {e}
            if not any(c <= trial for c in self._by_element[e]):
                independent = trial
        return len(independent)

    def independent(self, s: Iterable[Element]) -> bool:
        s = self.subtransversal(s)
        if self._circuits is not None:
            return not any(c <= s for c in self._circuits)
        return self.rank(s) == len(s)

    def dependent(self, s: Iterable[Element]) -> bool:
        return not self.independent(s)

    def circuits(self) -> tuple[frozenset, ...]:
        """The circuit family; oracle-backed instances scan every subtransversal once."""
        if self._circuits is None:
            if self.subtransversal_count() > config.CLASSIFY_TRANSVERSAL_BOUND:
                raise BoundExceededError("circuit materialization", self.subtransversal_count(),
                                         config.CLASSIFY_TRANSVERSAL_BOUND)
            found: list[frozenset] = []
            for s in sorted(self.subtransversals(), key=self._sort_key):
                if not s or any(c <= s for c in found):
                    continue
                if self.rank(s) < len(s):
                    found.append(s)
            self._circuits = tuple(found)
            self._by_element = {e: [c for c in found if e in c] for e in self.ground}
            logger.debug("materialized %d circuits of %s", len(found), self.name)
        return self._circuits

    def with_circuits(self) -> "SemiMultimatroid":
        """Explicitly backed copy."""
        return SemiMultimatroid(self.classes, circuits=self.circuits(), name=self.name)

    def bases(self) -> list[frozenset]:
        """Maximal independent subtransversals."""
        out = []
        for s in self.subtransversals():
            if not self.independent(s):
                continue
            used = {self.class_of[e] for e in s}
            extendable = any(self.independent(s | {e})
                             for i, cls in enumerate(self.classes) if i not in used for e in cls)
            if not extendable:
                out.append(s)
        return out

    # -- derived multimatroids --------------------------------------------

    def restriction(self, x: Iterable[Element]) -> "SemiMultimatroid":
        x = frozenset(x)
        unknown = x - set(self.ground)
        if unknown:
            raise DomainError(f"{sorted(map(str, unknown))} are not elements")
        classes = [tuple(e for e in cls if e in x) for cls in self.classes]
        name = f"{self.name}[X]" if self.name else ""
        if self._rank_oracle is None:
            return SemiMultimatroid(classes, circuits=[c for c in self._circuits if c <= x], name=name)
        return SemiMultimatroid(classes, rank=self._rank_oracle, name=name)

    def delete(self, x: Iterable[Element]) -> "SemiMultimatroid":
        x = frozenset(x)
        return self.restriction(e for e in self.ground if e not in x)

    def minor(self, x: Iterable[Element]) -> "SemiMultimatroid":
        """Z|X: drop the classes X meets and contract X in every transversal."""
        x = self.subtransversal(x)
        touched = {self.class_of[e] for e in x}
        classes = [cls for i, cls in enumerate(self.classes) if i not in touched]
        label = ",".join(sorted(map(str, x)))
        name = f"{self.name}|{{{label}}}" if self.name else ""
        if self._rank_oracle is None:
            candidates = {c - x for c in self._circuits if self.is_subtransversal(c | x)}
            candidates.discard(frozenset())
            minimal = [c for c in candidates if not any(d < c for d in candidates)]
            return SemiMultimatroid(classes, circuits=minimal, name=name)
        base_rank = self._rank_oracle(x)
        oracle = self._rank_oracle
        return SemiMultimatroid(classes, rank=lambda s: oracle(frozenset(s) | x) - base_rank, name=name)

    def relabel(self, mapping: Mapping[Element, Element], name: Optional[str] = None) -> "SemiMultimatroid":
        inverse = {b: a for a, b in mapping.items()}
        if len(inverse) != len(mapping) or set(mapping) != set(self.ground):
            raise DomainError("relabelling must be a bijection on the ground set")
        classes = [tuple(mapping[e] for e in cls) for cls in self.classes]
        name = self.name if name is None else name
        if self._rank_oracle is None:
            return SemiMultimatroid(classes, circuits=[{mapping[e] for e in c} for c in self._circuits],
                                    name=name)
        oracle = self._rank_oracle
        return SemiMultimatroid(classes, rank=lambda s: oracle(frozenset(inverse[e] for e in s)), name=name)

    # -- serialization ----------------------------------------------------

    def to_circuit_list(self) -> dict:
        return {
            "classes": [[str(e) for e in cls] for cls in self.classes],
            "circuits": [sorted((str(e) for e in c), key=self._str_position)
                         for c in self.circuits()],
        }

    def _str_position(self, label: str) -> int:
        return [str(e) for e in self.ground].index(label)

    @classmethod
    def from_circuit_list(cls, data: Mapping, name: str = "") -> "SemiMultimatroid":
        try:
            classes = [[str(e) for e in c] for c in data["classes"]]
            circuits = [[str(e) for e in c] for c in data["circuits"]]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"circuit list needs 'classes' and 'circuits': {exc}") from exc
        return cls(classes, circuits=circuits, name=name)

    def __repr__(self) -> str:
        backing = f"{len(self._circuits)} circuits" if self._circuits is not None else "rank oracle"
        return f"SemiMultimatroid({self.name or '?'}, order={self.order}, {backing})"


# ----------------------------------------------------------------------
# Classification and minors
# ----------------------------------------------------------------------

def order_one_circuit_counts(z: SemiMultimatroid) -> Iterator[tuple[frozenset, int]]:
    """(x, number of circuits of Z|x) for every x that leaves one class."""
    if prod(len(cls) for cls in z.classes) > config.CLASSIFY_TRANSVERSAL_BOUND:
        raise BoundExceededError("order-one minor sweep", prod(len(cls) for cls in z.classes),
                                 config.CLASSIFY_TRANSVERSAL_BOUND)
    for i, remaining in enumerate(z.classes):
        others = [cls for j, cls in enumerate(z.classes) if j != i]
        for pick in product(*others):
            x = frozenset(pick)
            r = z.rank(x)
            loops = sum(1 for e in remaining if z.rank(x | {e}) == r)
            yield x, loops


def classify(z: SemiMultimatroid) -> MultimatroidClass:
    """Every order-1 minor has at most one circuit (multimatroid) or exactly one (tight)."""
    size = sum(prod(len(c) for j, c in enumerate(z.classes) if j != i) for i in range(len(z.classes)))
    verdict = MultimatroidClass.TIGHT
    with log_sweep("classify", size, multimatroid=z.name) as sweep:
        for x, count in order_one_circuit_counts(z):
            sweep.advance()
            if count > 1:
                sweep.debug("%s: minor at %s has %d circuits", z.name, sorted(map(str, x)), count)
                verdict = MultimatroidClass.NOT_MULTIMATROID
                break
            if count == 0 and verdict is MultimatroidClass.TIGHT:
                sweep.debug("%s: minor at %s has no circuit", z.name, sorted(map(str, x)))
                verdict = MultimatroidClass.MULTIMATROID
        sweep.conclude(verdict is not MultimatroidClass.NOT_MULTIMATROID, classification=verdict.value)
    return verdict


def _incidence_graph(z: SemiMultimatroid) -> nx.Graph:
    G = nx.Graph()
    for e in z.ground:
        G.add_node(("e", e), role="element")
    for i, cls in enumerate(z.classes):
        G.add_node(("class", i), role="class")
        G.add_edges_from((("class", i), ("e", e)) for e in cls)
    for k, c in enumerate(z.circuits()):
        G.add_node(("circuit", k), role="circuit")
        G.add_edges_from((("circuit", k), ("e", e)) for e in c)
    return G


def mm_isomorphic(z1: SemiMultimatroid, z2: SemiMultimatroid) -> Optional[dict]:
    """Element bijection respecting classes and circuits, or None."""
    for z in (z1, z2):
        if z.order > config.MM_ISOMORPHISM_ORDER_BOUND:
            raise BoundExceededError("multimatroid isomorphism", z.order, config.MM_ISOMORPHISM_ORDER_BOUND)
    if sorted(map(len, z1.classes)) != sorted(map(len, z2.classes)):
        return None
    c1, c2 = z1.circuits(), z2.circuits()
    if sorted(map(len, c1)) != sorted(map(len, c2)):
        return None
    matcher = GraphMatcher(_incidence_graph(z1), _incidence_graph(z2),
                           node_match=lambda a, b: a["role"] == b["role"])
    if not matcher.is_isomorphic():
        return None
    return {a[1]: b[1] for a, b in matcher.mapping.items() if a[0] == "e"}


def find_minor(z: SemiMultimatroid, target: SemiMultimatroid) -> Optional[tuple[frozenset, dict]]:
    """A subtransversal x with z|x isomorphic to target."""
    size = z.order - target.order
    if size < 0:
        return None
    for chosen in combinations(range(z.order), size):
        for pick in product(*[z.classes[i] for i in chosen]):
            x = frozenset(pick)
            iso = mm_isomorphic(z.minor(x), target)
            if iso is not None:
                return x, iso
    return None


# ----------------------------------------------------------------------
# Named instances
# ----------------------------------------------------------------------

GF3 = FieldSpec.gfp(3)


def h33() -> SemiMultimatroid:
    """AG(2,3) over GF(3) with the three lines y = 0, 1, 2 as skew classes."""
    columns = {f"p{x}{y}": (1, x, y) for y in range(3) for x in range(3)}
    classes = [tuple(f"p{x}{y}" for x in range(3)) for y in range(3)]
    z = SemiMultimatroid(classes, rank=lambda s: column_rank([columns[e] for e in s], GF3), name="H33")
    return z.with_circuits()


def s1() -> SemiMultimatroid:
    classes = [("1a", "1b"), ("2a", "2b"), ("3a", "3b")]
    circuits = [("1a", "2b", "3b"), ("1b", "2a", "3b"), ("1b", "2b", "3a")]
    return SemiMultimatroid(classes, circuits=circuits, name="S1")


def binary_refutation(z: SemiMultimatroid) -> bool:
    """True when some GF(2) sum of circuits is a nonempty subtransversal holding no circuit.

    Such a set would be a disjoint union of circuits in any binary matroid
    sheltering z, so True proves no binary matroid does. False proves nothing.
    """
    if z.order > config.REFUTATION_ORDER_BOUND:
        raise BoundExceededError("binary refutation", z.order, config.REFUTATION_ORDER_BOUND)
    position = {e: i for i, e in enumerate(z.ground)}

    def bits(s: Iterable[Element]) -> int:
        return sum(1 << position[e] for e in s)

    span = EchelonBasis(GF2)
    for c in z.circuits():
        span = span.extended(bits(c)) or span
    for s in z.subtransversals():
        if s and span.contains(bits(s)) and z.independent(s):
            logger.info("%s: %s is a sum of circuits containing none", z.name, sorted(map(str, s)))
            return True
    return False


# ----------------------------------------------------------------------
# Binary matroids
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryMatroidRep:
    """Standard form (I | A) over GF(2); the first `rank` elements form the basis."""
    elements: tuple
    a_rows: tuple

    def __post_init__(self):
        r = len(self.a_rows)
        width = len(self.elements) - r
        if width < 0 or any(len(row) != width for row in self.a_rows):
            raise DomainError("A must have rank rows and |E| - rank columns")
        if len(set(self.elements)) != len(self.elements):
            raise DomainError("element labels must be distinct")
        object.__setattr__(self, "a_rows", tuple(tuple(int(x) % 2 for x in row) for row in self.a_rows))

    @classmethod
    def from_a(cls, a: Sequence[Sequence[int]], elements: Optional[Sequence] = None) -> "BinaryMatroidRep":
        r = len(a)
        width = len(a[0]) if a else 0
        elements = tuple(elements) if elements is not None else tuple(f"e{i + 1}" for i in range(r + width))
        return cls(elements, tuple(tuple(row) for row in a))

    @property
    def rank(self) -> int:
        return len(self.a_rows)

    @property
    def basis(self) -> tuple:
        return self.elements[:self.rank]

    @property
    def cobasis(self) -> tuple:
        return self.elements[self.rank:]

    @property
    def a_block(self) -> ExactMatrix:
        return ExactMatrix(self.basis, self.cobasis, [list(r) for r in self.a_rows], GF2)

    @property
    def matrix(self) -> ExactMatrix:
        return ExactMatrix.identity(self.basis, GF2).hstack(self.a_block)

    def dual(self) -> "BinaryMatroidRep":
        """(A^T | I) reordered to standard form on the cobasis."""
        transposed = [[self.a_rows[i][j] for i in range(self.rank)] for j in range(len(self.cobasis))]
        return BinaryMatroidRep(self.cobasis + self.basis, tuple(tuple(r) for r in transposed))

    def column(self, e: Element) -> tuple[int, ...]:
        return self.matrix.column(e)

    def circuits(self) -> list[frozenset]:
        """Circuits of the column matroid, smallest first."""
        cols = {e: self.column(e) for e in self.elements}
        found: list[frozenset] = []
        for size in range(1, self.rank + 2):
            for subset in combinations(self.elements, size):
                s = frozenset(subset)
                if any(c <= s for c in found):
                    continue
                if column_rank([cols[e] for e in subset], GF2) < size:
                    found.append(s)
        return found


def column_matroid(m: ExactMatrix, cols: Optional[Sequence] = None, name: str = "") -> SemiMultimatroid:
    """The column matroid of m as a multimatroid with singleton classes."""
    cols = list(m.cols) if cols is None else list(cols)
    vectors = {c: m.column(c) for c in cols}
    field = m.field
    return SemiMultimatroid([(c,) for c in cols],
                            rank=lambda s: column_rank([vectors[c] for c in s], field), name=name)


def fano() -> BinaryMatroidRep:
    return BinaryMatroidRep.from_a([[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]],
                                   ["1", "2", "3", "4", "5", "6", "7"])


def _copy(e: Element, k: int) -> str:
    return f"{e}_{k}"


def z2_of_matroid(m: BinaryMatroidRep) -> SemiMultimatroid:
    """Classes {e_1, e_2}; e_1 carries M* = (A^T | I), e_2 carries M = (I | A)."""
    dual = m.dual()
    columns = {}
    r, n = m.rank, len(m.elements)
    for e in m.elements:
        columns[_copy(e, 1)] = tuple(dual.column(e)) + (0,) * r
        columns[_copy(e, 2)] = (0,) * (n - r) + tuple(m.column(e))
    classes = [(_copy(e, 1), _copy(e, 2)) for e in m.elements]
    return SemiMultimatroid(classes, rank=lambda s: column_rank([columns[x] for x in s], GF2),
                            name="Z2(M)")


def fundamental_graph(m: BinaryMatroidRep) -> LoopedGraph:
    """Bipartite graph with adjacency [[0, A], [A^T, 0]]."""
    edges = [(b, c) for i, b in enumerate(m.basis) for j, c in enumerate(m.cobasis) if m.a_rows[i][j]]
    return LoopedGraph(m.elements, edges)


def _lift_labels(m: BinaryMatroidRep) -> dict:
    from isotropic import chi, phi, psi

    mapping = {}
    for b in m.basis:
        mapping.update({phi(b): _copy(b, 2), chi(b): _copy(b, 1), psi(b): _copy(b, 3)})
    for c in m.cobasis:
        mapping.update({phi(c): _copy(c, 1), chi(c): _copy(c, 2), psi(c): _copy(c, 3)})
    return mapping


def z3_of_matroid(m: BinaryMatroidRep, verify: Optional[bool] = None) -> SemiMultimatroid:
    """Z3 of the fundamental graph, with e_1 / e_2 aligned to z2_of_matroid and e_3 the psi copy."""
    from isotropic import multimatroid_view

    g = fundamental_graph(m)
    z3 = multimatroid_view(g, 3).relabel(_lift_labels(m), name="Z3(M)")
    if verify is None:
        verify = len(m.elements) <= config.LIFT_VERIFY_ORDER_BOUND
    if verify:
        reduced = set(z3.delete(_copy(e, 3) for e in m.elements).circuits())
        expected = set(z2_of_matroid(m).circuits())
        if reduced != expected:
            raise ConsistencyError("Z3 lift minus its third copies differs from Z2(M)")
    return z3

"""
Isotropic matroids of looped simple graphs.

IAS(G) = (I | A(G) | I + A(G)) over GF(2), columns indexed by the ground set
W(G) of phi / chi / psi elements. Z3(G) and Z2(G) are exposed as rank
oracles on subtransversals; `shelters` checks a candidate matrix against
them over any field.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Hashable, Iterable, Iterator, Optional, Sequence

from config import config
from errors import BoundExceededError, ConsistencyError, DomainError
from exactalg import GF2, EchelonBasis, ExactMatrix, rank, rref
from graph import LoopedGraph, delete_vertices
from logging_config import log_sweep
from telemetry.run_summary import run_summary


Vertex = Hashable


class Kind(str, Enum):
    PHI = "phi"
    CHI = "chi"
    PSI = "psi"

    @property
    def symbol(self) -> str:
        return {"phi": "φ", "chi": "χ", "psi": "ψ"}[self.value]


@dataclass(frozen=True)
class GroundElement:
    vertex: Vertex
    kind: Kind

    def __str__(self) -> str:
        return f"{self.kind.value}({self.vertex})"


def phi(v: Vertex) -> GroundElement:
    return GroundElement(v, Kind.PHI)


def chi(v: Vertex) -> GroundElement:
    return GroundElement(v, Kind.CHI)


def psi(v: Vertex) -> GroundElement:
    return GroundElement(v, Kind.PSI)


def kinds_for(arity: int) -> tuple[Kind, ...]:
    if arity == 3:
        return (Kind.PHI, Kind.CHI, Kind.PSI)
    if arity == 2:
        return (Kind.PHI, Kind.CHI)
    raise DomainError(f"arity must be 2 or 3, got {arity}")


def ground_set(vertices: Sequence[Vertex], arity: int = 3) -> tuple[GroundElement, ...]:
    """All phi columns, then all chi columns, then all psi columns."""
    return tuple(GroundElement(v, k) for k in kinds_for(arity) for v in vertices)


class Subtransversal(frozenset):
    """A set of ground elements with at most one element per vertex."""

    def __new__(cls, elements: Iterable[GroundElement] = ()):
        s = super().__new__(cls, elements)
        vertices = [e.vertex for e in s]
        if len(set(vertices)) != len(vertices):
            raise DomainError("a subtransversal has at most one element per vertex")
        return s

    @property
    def vertices(self) -> frozenset:
        return frozenset(e.vertex for e in self)

    def is_transversal_of(self, vertices: Iterable[Vertex]) -> bool:
        return self.vertices == frozenset(vertices)

    def __repr__(self) -> str:
        return "{" + ", ".join(sorted(map(str, self))) + "}"


def subtransversals(vertices: Sequence[Vertex], arity: int = 3) -> Iterator[Subtransversal]:
    options = [(None,) + tuple(GroundElement(v, k) for k in kinds_for(arity)) for v in vertices]
    for pick in product(*options):
        yield Subtransversal(e for e in pick if e is not None)


def transversals(vertices: Sequence[Vertex], arity: int = 3) -> Iterator[Subtransversal]:
    options = [tuple(GroundElement(v, k) for k in kinds_for(arity)) for v in vertices]
    for pick in product(*options):
        yield Subtransversal(pick)


# ----------------------------------------------------------------------
# IAS(G) and the rank oracle
# ----------------------------------------------------------------------

def ias_matrix(g: LoopedGraph) -> ExactMatrix:
    """IAS(G) over GF(2), rows V(G), columns W(G)."""
    vs = g.vertices
    a = g.adjacency_matrix(GF2)
    data = []
    for v in vs:
        row = []
        for element in ground_set(vs):
            w = element.vertex
            unit = 1 if v == w else 0
            adj = a.entry(v, w)
            row.append({Kind.PHI: unit, Kind.CHI: adj, Kind.PSI: unit ^ adj}[element.kind])
        data.append(row)
    return ExactMatrix(vs, ground_set(vs), data, GF2)


@lru_cache(maxsize=256)
def _column_bits(g: LoopedGraph) -> dict:
    m = ias_matrix(g)
    return {c: sum(1 << i for i, x in enumerate(m.column(c)) if x) for c in m.cols}


def rank_sub(g: LoopedGraph, s: Iterable[GroundElement]) -> int:
    """Rank of a subtransversal in Z3(G): GF(2) rank of its IAS(G) columns."""
    s = s if isinstance(s, Subtransversal) else Subtransversal(s)
    bits = _column_bits(g)
    basis = EchelonBasis(GF2)
    count = 0
    for element in s:
        if element not in bits:
            raise DomainError(f"{element} is not an element of W(G)")
        nxt = basis.extended(bits[element])
        if nxt is not None:
            basis = nxt
            count += 1
    run_summary.observe_ranks()
    return count


def multimatroid_view(g: LoopedGraph, arity: int = 3):
    """Z3(G) or Z2(G) as a rank-oracle SemiMultimatroid."""
    from multimatroid import SemiMultimatroid

    kinds = kinds_for(arity)
    classes = [tuple(GroundElement(v, k) for k in kinds) for v in g.vertices]
    return SemiMultimatroid(classes, rank=lambda s: rank_sub(g, s),
                            name=f"Z{arity}({g.n}-vertex graph)")


# ----------------------------------------------------------------------
# Sheltering
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ShelterResult:
    verdict: bool
    first_violation: Optional[Subtransversal]
    candidate_rank: int
    expected_rank: Optional[int]
    checked: int
    strict: bool
    reason: str = ""


def shelter_check(candidate: ExactMatrix, g: LoopedGraph, arity: int = 3,
                  strict: bool = False) -> ShelterResult:
    """Compare candidate column ranks with rank_sub on every subtransversal.

    Depth-first over vertices: a subtransversal extends its parent by one
    column, so agreement reduces to agreeing on whether that column is
    independent of the parent's columns.
    """
    if g.n > config.SHELTER_VERTEX_BOUND:
        raise BoundExceededError("shelter check", g.n, config.SHELTER_VERTEX_BOUND)
    kinds = kinds_for(arity)
    needed = ground_set(g.vertices, arity)
    present = set(candidate.cols)
    missing = [str(e) for e in needed if e not in present]
    if missing:
        raise DomainError(f"candidate lacks columns {missing[:5]}")
    field = candidate.field
    cand_cols = {e: candidate.column(e) for e in needed}
    ref_bits = _column_bits(g)
    cand_rank = rank(candidate, needed)
    expected = g.n if strict else None
    if strict and cand_rank != g.n:
        return ShelterResult(False, None, cand_rank, expected, 0, strict,
                             f"candidate rank {cand_rank} differs from {g.n}")

    vs = g.vertices
    checked = 0
    violation: list = [None]

    def dfs(i: int, chosen: tuple, cand: EchelonBasis, ref: EchelonBasis) -> bool:
        nonlocal checked
        if i == len(vs):
            return True
        if not dfs(i + 1, chosen, cand, ref):
            return False
        for k in kinds:
            element = GroundElement(vs[i], k)
            checked += 1
            cand_next = cand.extended(cand_cols[element])
            ref_next = ref.extended(ref_bits[element])
            if (cand_next is None) != (ref_next is None):
                violation[0] = Subtransversal(chosen + (element,))
                return False
            if not dfs(i + 1, chosen + (element,), cand_next or cand, ref_next or ref):
                return False
        return True

    with log_sweep("shelter_check", (len(kinds) + 1) ** g.n, field=field.name, arity=arity) as sweep:
        ok = dfs(0, (), EchelonBasis(field), EchelonBasis(GF2))
        sweep.advance(checked)
        sweep.conclude(ok, first_violation=str(violation[0]) if violation[0] else None)
    run_summary.observe_subtransversals(checked)
    reason = "" if ok else "rank mismatch"
    return ShelterResult(ok, violation[0], cand_rank, expected, checked, strict, reason)


def shelters(candidate: ExactMatrix, g: LoopedGraph, arity: int = 3, strict: bool = False) -> bool:
    return shelter_check(candidate, g, arity, strict).verdict


# ----------------------------------------------------------------------
# Matrix manipulations on sheltering candidates
# ----------------------------------------------------------------------

def contract_phi(m: ExactMatrix, v: Vertex) -> ExactMatrix:
    """(M / phi(v)) - chi(v) - psi(v) as a matrix operation."""
    target = phi(v)
    col = m.column(target)
    drop = {target, chi(v), psi(v)}
    keep_cols = [c for c in m.cols if c not in drop]
    pivot = next((r for r, x in zip(m.rows, col) if x != 0), None)
    if pivot is None:
        return m.submatrix(cols=keep_cols)
    field = m.field
    inv = field.inverse(m.entry(pivot, target))
    work = m
    for r, x in zip(m.rows, col):
        if r != pivot and x != 0:
            work = work.add_row_multiple(r, pivot, field.reduce(-x * inv))
    return work.submatrix(rows=[r for r in m.rows if r != pivot], cols=keep_cols)


def z2_candidate(m: ExactMatrix) -> ExactMatrix:
    """The phi / chi columns of a Z3 candidate."""
    return m.submatrix(cols=[c for c in m.cols if c.kind is not Kind.PSI])


@dataclass(frozen=True)
class StandardForm:
    """Row-reduced candidate with the phi block equal to I."""
    matrix: ExactMatrix
    a_block: ExactMatrix
    b_block: Optional[ExactMatrix]
    support_matches: bool


def _standardize(m: ExactMatrix, g: LoopedGraph, arity: int) -> tuple[ExactMatrix, list]:
    if not g.is_simple:
        raise DomainError("standard forms are defined for simple graphs")
    vs = g.vertices
    cols = list(ground_set(vs, arity))
    reduced, pivots = rref(m.submatrix(cols=cols))
    if pivots[:len(vs)] != [phi(v) for v in vs]:
        raise DomainError("phi columns are not independent in the candidate")
    return reduced, pivots


def standardize_z2(m: ExactMatrix, g: LoopedGraph) -> StandardForm:
    """Bring a Z2(G) candidate to (I A); A must share the support of A(G)."""
    reduced, pivots = _standardize(m, g, 2)
    vs = g.vertices
    if len(pivots) != len(vs):
        raise DomainError("candidate has rank above |V(G)|, so it does not shelter Z2(G)")
    top = reduced.submatrix(rows=reduced.rows[:len(vs)]).relabel(
        rows=dict(zip(reduced.rows[:len(vs)], vs)))
    a_block = top.submatrix(cols=[chi(w) for w in vs]).relabel(
        cols={chi(w): w for w in vs})
    support = all((a_block.entry(v, w) != 0) == g.has_edge(v, w) if v != w
                  else a_block.entry(v, w) == 0 for v in vs for w in vs)
    return StandardForm(top, a_block, None, support)


def normalize_strict_z3(m: ExactMatrix, g: LoopedGraph) -> StandardForm:
    """Normal form (I A B) of a strict Z3(G) candidate.

    psi columns are scaled by 1 / B_vv in vertex order; raises
    ConsistencyError when C != 0, a diagonal entry of B vanishes, or
    B_vw * B_wv != 1 on an edge.
    """
    reduced, pivots = _standardize(m, g, 3)
    vs = g.vertices
    n = len(vs)
    if len(pivots) != n:
        raise ConsistencyError("lower block C is nonzero; candidate is not strict")
    top = reduced.submatrix(rows=reduced.rows[:n]).relabel(rows=dict(zip(reduced.rows[:n], vs)))
    field = top.field
    for v in vs:
        d = top.entry(v, psi(v))
        if d == 0:
            raise ConsistencyError(f"B[{v},{v}] vanishes")
        top = top.scale_column(psi(v), field.inverse(d))
    a_block = top.submatrix(cols=[chi(w) for w in vs]).relabel(cols={chi(w): w for w in vs})
    b_block = top.submatrix(cols=[psi(w) for w in vs]).relabel(cols={psi(w): w for w in vs})
    for v, w in g.edges():
        if field.reduce(b_block.entry(v, w) * b_block.entry(w, v)) != 1:
            raise ConsistencyError(f"B[{v},{w}] * B[{w},{v}] != 1 on an edge")
    support = all((a_block.entry(v, w) != 0) == g.has_edge(v, w) if v != w
                  else a_block.entry(v, w) == 0 for v in vs for w in vs)
    return StandardForm(top, a_block, b_block, support)


def contraction_shelters(m: ExactMatrix, g: LoopedGraph, v: Vertex) -> bool:
    """Whether contract_phi(m, v) shelters Z3(G - v)."""
    return shelters(contract_phi(m, v), delete_vertices(g, [v]), 3)

"""
Signed isotropic matrices IAS(C) = (I | A | B) of an oriented Euler system
with consistently oriented fundamental circuits, and the identities that make
them strict representations of Z3 over every field when the circuits are based.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, product
from typing import Hashable, Mapping, Optional, Sequence

from config import config
from errors import BoundExceededError, ConsistencyError, DomainError
from exactalg import RATIONAL, ExactMatrix, FieldSpec, column_rank, integer_determinant, rank
from fourreg import (
    CircuitPartition,
    EulerSystem,
    OrientedFundamentalCircuits,
    TouchGraph,
    cycle_space_basis,
    d_gamma,
    fundamental_circuits,
    interlacement,
    label_of,
    m_matrix,
    parse_dow,
    partition_from_labels,
    touch_graph,
    transition_labels,
)
from graph import LoopedGraph
from isotropic import GroundElement, Kind, ground_set, shelter_check
from logging_config import log_sweep
from telemetry.run_summary import run_summary

logger = logging.getLogger(__name__)

Vertex = Hashable


@dataclass(frozen=True)
class SignedIAS:
    """Integer matrix (I | A | B) with the Euler system and circuits it came from."""
    matrix: ExactMatrix
    system: EulerSystem
    gamma: OrientedFundamentalCircuits

    @property
    def vertices(self) -> tuple:
        return self.matrix.rows

    @property
    def based(self) -> bool:
        return self.gamma.base is not None

    def block(self, kind: Kind) -> ExactMatrix:
        vs = self.vertices
        return self.matrix.submatrix(cols=[GroundElement(w, kind) for w in vs]).relabel(
            cols={GroundElement(w, kind): w for w in vs})

    @property
    def a_block(self) -> ExactMatrix:
        return self.block(Kind.CHI)

    @property
    def b_block(self) -> ExactMatrix:
        return self.block(Kind.PSI)

    def transversal_submatrix(self, kinds: Mapping[Vertex, Kind]) -> ExactMatrix:
        """Square matrix of the columns kinds[w](w), columns relabelled by w."""
        vs = self.vertices
        cols = [GroundElement(w, Kind(kinds[w])) for w in vs]
        return self.matrix.submatrix(cols=cols).relabel(cols=dict(zip(cols, vs)))

    def column_labels(self) -> list[str]:
        return [f"{c.kind.value}_C({c.vertex})" for c in self.matrix.cols]


def signed_ias(c: EulerSystem, gamma: OrientedFundamentalCircuits) -> SignedIAS:
    """A and B entries read off which of w-, w+ each C(v) passes through."""
    if gamma.system != c:
        raise DomainError("fundamental circuits belong to another Euler system")
    if not gamma.consistently_oriented:
        raise DomainError("signed IAS needs consistently oriented fundamental circuits")
    vs = c.vertices
    a = {}
    b = {}
    for v in vs:
        for w in vs:
            if v == w:
                a[v, w], b[v, w] = 0, 1
                continue
            has_minus, has_plus = gamma.includes(v, w)
            a[v, w] = (1 if has_plus else 0) - (1 if has_minus else 0)
            b[v, w] = int(has_minus) + int(has_plus)
    data = []
    for v in vs:
        row = [1 if v == w else 0 for w in vs]
        row += [a[v, w] for w in vs]
        row += [b[v, w] for w in vs]
        data.append(row)
    return SignedIAS(ExactMatrix(vs, ground_set(vs), data, RATIONAL), c, gamma)


def signed_ias_from_words(words: Sequence, base: Optional[Sequence] = None) -> SignedIAS:
    """Convenience: parse words, base at `base` (or each word's closing edge)."""
    _, c = parse_dow(words)
    if base is None:
        base = [circuit[-1][0] for circuit in c.circuits]
    return signed_ias(c, fundamental_circuits(c, base=base))


def verify_submatrix_identity(s: SignedIAS, p: CircuitPartition) -> bool:
    """Columns P(w) of IAS(C) equal M(C, P, D_Gamma)."""
    c = s.system
    if p.graph != c.graph:
        raise DomainError("partition lives on another graph")
    kinds = {w: label_of(c, p.chosen[w]) for w in c.vertices}
    return s.transversal_submatrix(kinds) == m_matrix(s.gamma, p)


@dataclass(frozen=True)
class DeterminantSweep:
    """Determinant of every transversal submatrix, keyed by kinds in vertex order."""
    determinants: dict
    vertices: tuple

    @property
    def transversely_unimodular(self) -> bool:
        return all(d in (-1, 0, 1) for d in self.determinants.values())

    @property
    def worst(self) -> int:
        return max(self.determinants.values(), key=abs, default=0)

    def values(self) -> set:
        return set(self.determinants.values())


def transversal_determinants(s: SignedIAS) -> DeterminantSweep:
    """All 3^n transversal determinants in mixed-radix order."""
    vs = s.vertices
    if len(vs) > config.TRANSVERSAL_SWEEP_BOUND:
        raise BoundExceededError("transversal sweep", len(vs), config.TRANSVERSAL_SWEEP_BOUND)
    cols = {e: [int(x) for x in s.matrix.column(e)] for e in s.matrix.cols}
    out = {}
    with log_sweep("transversal_determinants", 3 ** len(vs), vertices=len(vs)) as sweep:
        for kinds in product(Kind, repeat=len(vs)):
            columns = [cols[GroundElement(w, k)] for w, k in zip(vs, kinds)]
            rows = [list(r) for r in zip(*columns)] if columns else []
            out[kinds] = integer_determinant(rows)
        result = DeterminantSweep(out, vs)
        sweep.advance(len(out))
        sweep.conclude(result.transversely_unimodular, worst=result.worst)
    run_summary.observe_determinants(len(out))
    return result


def euler_partition(c: EulerSystem) -> CircuitPartition:
    """C itself as a circuit partition (phi at every vertex)."""
    return partition_from_labels(c, {v: Kind.PHI for v in c.vertices})


def _transfer_matrix(to: OrientedFundamentalCircuits, frm: OrientedFundamentalCircuits) -> ExactMatrix:
    pc = euler_partition(frm.system)
    return m_matrix(to, pc, touch_graph(pc, d_gamma(frm, pc)))


def naturality_check(c: EulerSystem, c2: EulerSystem, gamma: OrientedFundamentalCircuits,
                     gamma2: OrientedFundamentalCircuits, p: CircuitPartition,
                     d: Optional[TouchGraph] = None) -> bool:
    """M(C2,P,D) = M(C2,C,D_Gamma) M(C,P,D) and the two transfer matrices are inverse."""
    if c.graph != c2.graph:
        raise DomainError("Euler systems live on different graphs")
    if gamma.base is None or gamma.base != gamma2.base:
        raise DomainError("both sets of fundamental circuits must be based at the same edges")
    if gamma.system != c or gamma2.system != c2:
        raise DomainError("fundamental circuits do not match their Euler systems")
    d = d if d is not None else touch_graph(p)
    forward = _transfer_matrix(gamma2, gamma)
    backward = _transfer_matrix(gamma, gamma2)
    product_ok = m_matrix(gamma2, p, d) == forward @ m_matrix(gamma, p, d)
    inverse_ok = (forward @ backward).is_identity()
    return product_ok and inverse_ok


def represent_over(g: LoopedGraph, field: FieldSpec,
                   realization: Optional[tuple[EulerSystem, Sequence]] = None,
                   verify: bool = True) -> ExactMatrix:
    """A strict representation of Z3(g) over `field` from a based signed IAS."""
    if realization is None:
        from recognize import is_circle, realize

        if not g.is_simple:
            raise DomainError("graph has loops; only simple circle graphs are realized")
        if not is_circle(g).circle:
            raise DomainError("not a circle graph")
        if g.n > config.REALIZE_VERTEX_BOUND:
            raise BoundExceededError("realization", g.n, config.REALIZE_VERTEX_BOUND)
        words = realize(g)
        if words is None:
            raise DomainError("no realization found")
        _, c = parse_dow(words)
        base = [circuit[-1][0] for circuit in c.circuits]
    else:
        c, base = realization
    if interlacement(c) != g.without_loops() or not g.is_simple:
        raise DomainError("realization does not interlace to the given graph")
    s = signed_ias(c, fundamental_circuits(c, base=base))
    result = s.matrix.over(field)
    if verify and g.n <= config.SHELTER_VERTEX_BOUND:
        report = shelter_check(result, g, 3, strict=True)
        if not report.verdict:
            raise ConsistencyError(f"represented matrix fails to shelter Z3 at {report.first_violation}")
    return result


def three_circuits(s: SignedIAS, field: FieldSpec = RATIONAL) -> list[frozenset]:
    """All 3-element circuits of the column matroid over `field`."""
    n = len(s.vertices)
    if n > config.THREE_CIRCUIT_BOUND:
        raise BoundExceededError("3-circuit enumeration", n, config.THREE_CIRCUIT_BOUND)
    m = s.matrix.over(field)
    cols = {c: m.column(c) for c in m.cols}
    out = []
    for triple in combinations(m.cols, 3):
        vectors = [cols[c] for c in triple]
        if column_rank(vectors, field) != 2:
            continue
        if all(column_rank(pair, field) == 2 for pair in combinations(vectors, 2)):
            out.append(frozenset(triple))
    return out


def circuit_incidence(circuits: Sequence[frozenset]) -> dict:
    """How many of the given circuits contain each element."""
    counts: dict = {}
    for circuit in circuits:
        for e in circuit:
            counts[e] = counts.get(e, 0) + 1
    return counts


def relabel_columns(s: SignedIAS) -> ExactMatrix:
    """Columns keyed by the literal transition (pairing of half-edges)."""
    c = s.system
    mapping = {}
    for v in c.vertices:
        for kind, t in transition_labels(c, v).items():
            mapping[GroundElement(v, kind)] = t
    return s.matrix.relabel(cols=mapping)


def express_in(s: SignedIAS, c: EulerSystem) -> ExactMatrix:
    """s's matrix with columns named by their phi / chi / psi labels relative to c."""
    by_transition = relabel_columns(s)
    mapping = {t: GroundElement(t.vertex, label_of(c, t)) for t in by_transition.cols}
    m = by_transition.relabel(cols=mapping)
    return m.submatrix(cols=ground_set(c.vertices))


@dataclass(frozen=True)
class Narrative:
    """Named intermediate matrices of a row-operation transformation."""
    steps: tuple
    negated_columns: tuple
    matches: bool

    def final(self) -> ExactMatrix:
        return self.steps[-1][1]


def row_operation_narrative(source: SignedIAS, target: SignedIAS, v: Vertex) -> Narrative:
    """Turn source (from C*v) into target (from C) by the standard steps.

    Permute columns by transition, subtract row v from the others, negate
    row v, then negate every column with a nonzero entry in row v.
    `matches` says whether the recipe landed on target; with base edge cd
    in the worked example it does not.
    """
    steps = []
    m = express_in(source, target.system)
    steps.append(("permute columns", m))
    for r in m.rows:
        if r != v:
            m = m.add_row_multiple(r, v, -1)
    steps.append((f"subtract row {v}", m))
    m = m.scale_row(v, -1)
    steps.append((f"negate row {v}", m))
    negated = [col for col in m.cols if m.entry(v, col) != 0]
    for col in negated:
        m = m.scale_column(col, -1)
    steps.append(("negate columns", m))
    return Narrative(tuple(steps), tuple(negated), m == target.matrix)


def cycle_space_check(s: SignedIAS, p: CircuitPartition, field: FieldSpec) -> bool:
    """Row space of the P-submatrix over `field` equals the cycle space of Tch(P)."""
    d = touch_graph(p, d_gamma(s.gamma, p))
    sub = m_matrix(s.gamma, p, d).over(field)
    basis = cycle_space_basis(d, field)
    dim = len(basis.rows)
    if rank(sub) != dim:
        return False
    return rank(basis.vstack(sub.relabel(rows={r: ("row", r) for r in sub.rows}))) == dim

"""Executable characterizations of G(d,d-1) and G(d,d-2).

Each checker evaluates the three equivalent conditions independently:
(i) a representation found by the exact solver, (ii) a blow-up of the
pattern graph, (iii) a Forb(F) check. Witnesses are verified before
they are attached to a verdict.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Optional

from src.core.blowup import is_blow_up_of, verify_blow_up_assignment
from src.core.canonical import canonical_form
from src.core.models import (
    BinaryRepresentation, BlowUpPattern, CaseTrace, ConditionOutcome,
    ConditionResult, FamilyMember, ForbiddenFamily, Graph, GraphError,
    MAX_VERTICES, NamedTag, Outcome, Part, SearchConfig, StarReport,
    TheoremVerdict, TwinMode,
)
from src.core.named import make_named, spec, union
from src.core.representation import star_pattern, star_representation, verify_representation
from src.core.solver import IndeterminateError, decide_theta_leq
from src.core.subgraphs import forb_member, max_clique, verify_embedding
from src.core.twins import strip_isolated_universal, twin_reduction

logger = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """A theorem hypothesis does not hold for the input graph."""

    def __init__(self, message: str, vertex: Optional[int] = None):
        super().__init__(message)
        self.vertex = vertex


def binom2(n: int) -> int:
    """C(n, 2), taken as 0 for n < 2."""
    return n * (n - 1) // 2 if n >= 2 else 0


def _family(d: int, specs) -> ForbiddenFamily:
    """Build members, merging isomorphic ones under a '/'-joined name."""
    names: dict[bytes, list[str]] = {}
    graphs: dict[bytes, Graph] = {}
    for named in specs:
        g = make_named(named)
        key = canonical_form(g).certificate
        if key not in graphs:
            graphs[key] = g
            names[key] = []
        if named.name not in names[key]:
            names[key].append(named.name)
    return ForbiddenFamily(
        d=d,
        members=tuple(FamilyMember("/".join(names[key]), graphs[key]) for key in graphs),
    )


@lru_cache(maxsize=None)
def thm2_family(d: int) -> ForbiddenFamily:
    """{coK_{d+1}, P_4, K_1 u P_3, C_4}."""
    if d < 2:
        raise ValueError(f"the Theorem 2 family needs d >= 2, got {d}")
    return _family(d, [
        spec(NamedTag.EMPTY, d + 1),
        spec(NamedTag.PATH, 4),
        union(spec(NamedTag.COMPLETE, 1), spec(NamedTag.PATH, 3), label="K_1|P_3"),
        spec(NamedTag.CYCLE, 4),
    ])


def _with_isolated(named, count: int):
    return union(named, spec(NamedTag.EMPTY, count))


@lru_cache(maxsize=None)
def thm3_family(d: int) -> ForbiddenFamily:
    """The forbidden family F for G(d,d-2), deduplicated by canonical form."""
    if d < 3:
        raise ValueError(f"the Theorem 3 family needs d >= 3, got {d}")
    k2 = spec(NamedTag.COMPLETE, 2)
    specs = [
        union(k2, k2, label="2K_2"),
        spec(NamedTag.CYCLE, 4),
        spec(NamedTag.CYCLE, 5),
        spec(NamedTag.K23_PLUS_E),
        spec(NamedTag.COMPLETE_MINUS_EDGE, 5),
        spec(NamedTag.TRIANGLE_PENDANTS_1, d - 2),
        spec(NamedTag.TRIANGLE_PENDANTS_11, d - 2),
        spec(NamedTag.DIAMOND_PENDANTS, d - 2),
    ]
    for i in [2] + list(range(4, d + 2)):
        specs.append(spec(NamedTag.CLIQUE_PENDANTS, i, d + 1 - i))
    specs += [
        _with_isolated(k2, binom2(d - 1) + 1),
        _with_isolated(spec(NamedTag.COMPLETE, 3), binom2(d - 2) + 1),
        _with_isolated(spec(NamedTag.PATH, 4), binom2(d - 2) + 1),
        _with_isolated(spec(NamedTag.TRIANGLE_PENDANTS_1, 1), binom2(d - 3) + 1),
        _with_isolated(spec(NamedTag.TRIANGLE_PENDANTS_11, 1), binom2(d - 3) + 1),
        _with_isolated(spec(NamedTag.COMPLETE_MINUS_EDGE, 4), binom2(d - 3) + 1),
        spec(NamedTag.EMPTY, binom2(d) + 1),
    ]
    for i in range(4, d + 1):
        specs.append(_with_isolated(spec(NamedTag.COMPLETE, i), binom2(d - i) + 1))
    return _family(d, specs)


def claw_pattern(d: int) -> BlowUpPattern:
    """K_{1,d}, centre 0, every vertex in the CLIQUE part."""
    return BlowUpPattern.uniform(make_named(spec(NamedTag.STAR, d)), Part.CLIQUE)


def _require_no_isolated(g: Graph) -> None:
    isolated = g.isolated_vertices()
    if isolated:
        raise PreconditionError(f"vertex {isolated[0]} is isolated", vertex=isolated[0])


def _require_no_universal(g: Graph) -> None:
    universal = g.universal_vertices()
    if universal:
        raise PreconditionError(f"vertex {universal[0]} is universal", vertex=universal[0])


def _solver_condition(g: Graph, d: int, p: int, cfg: Optional[SearchConfig]) -> ConditionResult:
    result = decide_theta_leq(g, d, p, cfg)
    if result.outcome is Outcome.INDETERMINATE:
        return ConditionResult(ConditionOutcome.INDETERMINATE)
    if result.outcome is Outcome.NO:
        return ConditionResult(ConditionOutcome.FAILS)
    rep = result.representation
    assert verify_representation(g, rep)
    return ConditionResult(ConditionOutcome.HOLDS, witness=",".join(rep.rows()), detail=rep)


def _blow_up_condition(g: Graph, pattern: BlowUpPattern) -> ConditionResult:
    phi = is_blow_up_of(g, pattern)
    if phi is None:
        return ConditionResult(ConditionOutcome.FAILS)
    assert verify_blow_up_assignment(g, pattern, phi)
    return ConditionResult(
        ConditionOutcome.HOLDS,
        witness="bags=" + ",".join(str(b) for b in phi),
        detail=phi,
    )


def _forb_condition(g: Graph, fam: ForbiddenFamily) -> ConditionResult:
    check = forb_member(g, fam)
    if check.holds:
        return ConditionResult(ConditionOutcome.HOLDS)
    member = next(m for m in fam if m.name == check.name)
    assert verify_embedding(g, member.graph, check.embedding)
    return ConditionResult(ConditionOutcome.FAILS, witness=check.name, detail=check.embedding)


def _skipped() -> ConditionResult:
    return ConditionResult(ConditionOutcome.SKIPPED)


def _finish(verdict: TheoremVerdict) -> TheoremVerdict:
    if not verdict.consistent:
        logger.warning(
            "Theorem %d conditions disagree at d=%d: %s",
            verdict.theorem, verdict.d, "; ".join(verdict.report_lines()),
        )
    return verdict


def thm2_check(g: Graph, d: int, with_solver: bool = False,
               cfg: Optional[SearchConfig] = None) -> TheoremVerdict:
    """Evaluate the three conditions characterizing G(d,d-1)."""
    if d < 2:
        raise ValueError(f"Theorem 2 needs d >= 2, got {d}")
    _require_no_isolated(g)
    conditions = {
        "i": _solver_condition(g, d, d - 1, cfg) if with_solver else _skipped(),
        "ii": _blow_up_condition(g, claw_pattern(d)),
        "iii": _forb_condition(g, thm2_family(d)),
    }
    return _finish(TheoremVerdict(theorem=2, d=d, conditions=conditions))


def thm3_check(g: Graph, d: int, with_solver: bool = False,
               cfg: Optional[SearchConfig] = None,
               twin_mode: TwinMode = TwinMode.TRUE_TWINS) -> TheoremVerdict:
    """Evaluate the three conditions characterizing G(d,d-2).

    Condition (iii) inspects the twin reduction; its embedding is reported
    in the vertex numbers of g.
    """
    if d < 3:
        raise ValueError(f"Theorem 3 needs d >= 3, got {d}")
    _require_no_isolated(g)
    _require_no_universal(g)

    reduction = twin_reduction(g, twin_mode)
    forb = _forb_condition(reduction.graph, thm3_family(d))
    if forb.outcome is ConditionOutcome.FAILS:
        representatives = [cls[0] for cls in reduction.classes]
        forb = ConditionResult(
            forb.outcome,
            witness=forb.witness,
            detail=tuple(representatives[v] for v in forb.detail),
        )
    conditions = {
        "i": _solver_condition(g, d, d - 2, cfg) if with_solver else _skipped(),
        "ii": _blow_up_condition(g, star_pattern(d)),
        "iii": forb,
    }
    return _finish(TheoremVerdict(theorem=3, d=d, conditions=conditions))


class _SchemeFailure(Exception):
    pass


def _apply_scheme(h: Graph, d: int, anchors: list[int]) -> tuple[list[int], dict[int, str]]:
    """Assign vectors following the clique scheme with k_eff = len(anchors).

    anchors[i] gets 1 - e_i; every other vertex must only see anchors:
    two anchors i, j give 1 - e_i - e_j, one anchor i gives the next free
    1 - e_i - e_j with j >= k_eff, none gives the next free 1 - e_i - e_j
    with k_eff <= i < j.
    """
    k = len(anchors)
    if k > d:
        raise _SchemeFailure(f"clique of size {k} exceeds dimension {d}")
    full = (1 << d) - 1
    vectors = [0] * h.n
    rationale: dict[int, str] = {}
    slot = {a: i for i, a in enumerate(anchors)}
    anchor_mask = sum(1 << a for a in anchors)
    for i, a in enumerate(anchors):
        vectors[a] = full & ~(1 << i)
        rationale[a] = f"1-e_{i + 1}"

    used_pairs: set[tuple[int, int]] = set()
    next_pendant = {i: k for i in range(k)}
    isolated_slots = [(i, j) for i in range(k, d) for j in range(i + 1, d)]
    for v in range(h.n):
        if v in slot:
            continue
        if h.adj[v] & ~anchor_mask:
            raise _SchemeFailure(f"vertex {v} has a neighbour outside the clique")
        seen = sorted(slot[a] for a in h.neighbors(v))
        if len(seen) > 2:
            raise _SchemeFailure(f"vertex {v} sees {len(seen)} clique vertices")
        if len(seen) == 2:
            pair = (seen[0], seen[1])
            if pair in used_pairs:
                raise _SchemeFailure(f"second vertex on clique pair {pair}")
            rationale[v] = f"1-e_{pair[0] + 1}-e_{pair[1] + 1}"
        elif len(seen) == 1:
            i = seen[0]
            j = next_pendant[i]
            if j >= d:
                raise _SchemeFailure(f"no pendant slot left at clique vertex {anchors[i]}")
            next_pendant[i] = j + 1
            pair = (i, j)
            rationale[v] = f"pendant 1-e_{i + 1}-e_{j + 1}"
        else:
            if not isolated_slots:
                raise _SchemeFailure(f"no isolated slot left for vertex {v}")
            pair = isolated_slots.pop(0)
            rationale[v] = f"isolated 1-e_{pair[0] + 1}-e_{pair[1] + 1}"
        used_pairs.add(pair)
        vectors[v] = full & ~(1 << pair[0]) & ~(1 << pair[1])
    return vectors, rationale


def construct_representation_thm3(h: Graph, d: int) -> tuple[Optional[BinaryRepresentation], CaseTrace]:
    """Build a threshold d-2 representation of a twin-reduced graph by cases.

    Returns (None, trace) when the scheme runs out of slots or the result
    fails verification; callers fall back to the exact solver.
    """
    if d < 3:
        raise ValueError(f"the construction needs d >= 3, got {d}")
    degrees = h.degrees()
    clique = max_clique(h)
    k = len(clique)
    outside = [v for v in range(h.n) if v not in clique]
    y = tuple(v for v in outside if degrees[v])
    z = tuple(v for v in outside if not degrees[v])

    attempts: list[tuple[str, list[int]]] = []
    if k >= 4:
        attempts.append(("1", list(clique)))
    elif k == 3 and all(degrees[x] >= 3 for x in clique):
        attempts.append(("2", list(clique)))
    elif k == 3:
        for x3 in (x for x in clique if degrees[x] == 2):
            x1, x2 = [x for x in clique if x != x3]
            common = h.adj[x1] & h.adj[x2] & ~(1 << x3)
            if common:
                attempts.append(("3b", [x1, x2, x3]))
            else:
                attempts.append(("3a", [x1, x2]))
    elif k == 2 and all(degrees[x] >= 2 for x in clique):
        attempts.append(("4", list(clique)))
    else:
        # only a vertex with a neighbour can anchor; an edgeless h uses all C(d,2) slots
        touched = [v for v in range(h.n) if degrees[v]]
        high = [v for v in touched if degrees[v] >= 2]
        attempts.append(("5", [(high or touched)[0]] if touched else []))

    trace = None
    for case, anchors in attempts:
        try:
            vectors, rationale = _apply_scheme(h, d, anchors)
        except _SchemeFailure as e:
            trace = CaseTrace(clique, k, y, z, case, len(anchors), note=str(e))
            continue
        rep = BinaryRepresentation(d=d, p=d - 2, vectors=tuple(vectors))
        trace = CaseTrace(clique, k, y, z, case, len(anchors), rationale=rationale)
        check = verify_representation(h, rep)
        if check:
            return rep, trace
        trace = CaseTrace(clique, k, y, z, case, len(anchors), rationale=rationale,
                          note=f"scheme output fails at pair {check.pair}")

    if trace is None:
        trace = CaseTrace(clique, k, y, z, "none", 0, note="no case applies")
    logger.warning("construction absent on %d vertices at d=%d: case %s, %s",
                   h.n, d, trace.case, trace.note)
    return None, trace


def verify_star_mfis(d: int, p: int, cfg: Optional[SearchConfig] = None) -> StarReport:
    """Check K_{1,C(d,p)+1} lies outside G(d,p) while its vertex-deleted subgraphs lie inside."""
    if not 1 <= p <= d:
        raise ValueError(f"need 1 <= p <= d, got d={d}, p={p}")
    k = comb(d, p) + 1
    if k + 1 > MAX_VERTICES:
        raise GraphError(f"K_{{1,{k}}} exceeds the {MAX_VERTICES}-vertex cap")

    def member(g: Graph) -> bool:
        result = decide_theta_leq(g, d, p, cfg)
        if result.outcome is Outcome.INDETERMINATE:
            raise IndeterminateError(f"budget exhausted on a graph with {g.n} vertices", result.nodes)
        return result.present

    star = make_named(spec(NamedTag.STAR, k))
    outside = not member(star)
    details = [f"K_{{1,{k}}} in G({d},{p}): {'no' if outside else 'yes'}"]

    deletions: dict[bytes, Graph] = {}
    for v in range(star.n):
        sub = star.delete_vertex(v)
        deletions.setdefault(canonical_form(sub).certificate, sub)
    inside = True
    for sub in deletions.values():
        present = member(sub)
        inside = inside and present
        details.append(f"deletion with {sub.edge_count} edges in G({d},{p}): {'yes' if present else 'no'}")

    explicit = verify_representation(make_named(spec(NamedTag.STAR, k - 1)), star_representation(k - 1, d, p))
    details.append(f"explicit certificate for K_{{1,{k - 1}}}: {'valid' if explicit else 'invalid'}")
    return StarReport(d=d, p=p, k=k, is_mfis=outside and inside and bool(explicit), details=tuple(details))


@dataclass(frozen=True)
class MinimalityObservation:
    name: str
    outside: bool
    deletions_inside: bool

    @property
    def minimal(self) -> bool:
        return self.outside and self.deletions_inside


def family_minimality(theorem: int, d: int,
                            cfg: Optional[SearchConfig] = None) -> list[MinimalityObservation]:
    """Exploratory: is each family member a minimal non-member of its class?

    Isolated and universal vertices are peeled first (and the twin reduction
    taken for G(d,d-2)), then membership is decided by the exact solver.
    """
    if theorem == 2:
        family, p = thm2_family(d), d - 1
    elif theorem == 3:
        family, p = thm3_family(d), d - 2
    else:
        raise ValueError(f"unknown theorem {theorem}")

    def inside(g: Graph) -> bool:
        h, _ = strip_isolated_universal(g)
        if theorem == 3:
            h = twin_reduction(h).graph
        result = decide_theta_leq(h, d, p, cfg)
        if result.outcome is Outcome.INDETERMINATE:
            raise IndeterminateError(f"budget exhausted on a graph with {h.n} vertices", result.nodes)
        return result.present

    observations = []
    for m in family:
        outside = not inside(m.graph)
        deletions: dict[bytes, Graph] = {}
        for v in range(m.graph.n):
            sub = m.graph.delete_vertex(v)
            deletions.setdefault(canonical_form(sub).certificate, sub)
        deletions_inside = all(inside(sub) for sub in deletions.values())
        if not (outside and deletions_inside):
            logger.info("family member %s is not minimal for theorem %d at d=%d", m.name, theorem, d)
        observations.append(MinimalityObservation(m.name, outside, deletions_inside))
    return observations

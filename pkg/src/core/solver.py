"""Exact search for binary dot-product representations."""

import logging
import random
from typing import Optional

import networkx as nx

from src.core.models import (
    BinaryRepresentation, DecisionResult, ENUMERATION_CAP, Graph, GraphError,
    Outcome, SearchConfig, ThetaResult, TwinMode, bit_mask,
)
from src.core.representation import padded_edge_representation, theta_upper_bound, verify_representation
from src.core.twins import twin_reduction

logger = logging.getLogger(__name__)


class SolverError(RuntimeError):
    """The search produced a certificate that fails verification."""
    pass


class IndeterminateError(RuntimeError):
    """A yes/no answer was required but the node budget ran out."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class _BudgetExhausted(Exception):
    pass


class _Search:
    """Backtracking over vertex vectors with column-lex symmetry breaking.

    Coordinates that no assigned vector has distinguished yet form blocks;
    inside a block a new vector must list its ones before its zeros, which
    keeps the columns of the assignment matrix in non-increasing order.
    """

    def __init__(self, h: Graph, order: list[int], d: int, p: int,
                 symmetry_breaking: bool, budget: int, rng: Optional[random.Random]):
        self.h = h
        self.order = order
        self.d = d
        self.p = p
        self.symmetry_breaking = symmetry_breaking
        self.budget = budget
        self.rng = rng
        self.nodes = 0
        self.vectors = [0] * len(order)
        index = {v: k for k, v in enumerate(order)}
        self.constraints = [
            [(index[u], bool(h.adj[v] >> u & 1)) for u in order[:k]]
            for k, v in enumerate(order)
        ]
        self._cache: dict = {}
        self._all = sorted(
            (x for x in range(1 << d) if x.bit_count() >= p),
            key=lambda x: (-x.bit_count(), x),
        )

    def run(self) -> Optional[list[int]]:
        blocks = ((0, self.d),) if self.symmetry_breaking and self.d else None
        if self._extend(0, blocks):
            return list(self.vectors)
        return None

    def _candidates(self, blocks) -> list[int]:
        if blocks is None:
            if self.rng is None:
                return self._all
            shuffled = list(self._all)
            self.rng.shuffle(shuffled)
            return shuffled
        cached = self._cache.get(blocks)
        if cached is None:
            cached = [0]
            for start, length in blocks:
                cached = [
                    x | (((1 << ones) - 1) << start)
                    for x in cached for ones in range(length + 1)
                ]
            cached = sorted(
                (x for x in cached if x.bit_count() >= self.p),
                key=lambda x: (-x.bit_count(), x),
            )
            self._cache[blocks] = cached
        if self.rng is None:
            return cached
        shuffled = list(cached)
        self.rng.shuffle(shuffled)
        return shuffled

    @staticmethod
    def _split(blocks, x: int):
        if blocks is None:
            return None
        refined = []
        for start, length in blocks:
            ones = ((x >> start) & ((1 << length) - 1)).bit_count()
            if ones:
                refined.append((start, ones))
            if length - ones:
                refined.append((start + ones, length - ones))
        return tuple(refined)

    def _extend(self, k: int, blocks) -> bool:
        if k == len(self.order):
            return True
        p = self.p
        vectors = self.vectors
        constraints = self.constraints[k]
        for x in self._candidates(blocks):
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetExhausted()
            if all(((x & vectors[j]).bit_count() >= p) == adjacent for j, adjacent in constraints):
                vectors[k] = x
                if self._extend(k + 1, self._split(blocks, x)):
                    return True
        return False


def _search_order(h: Graph, sizes: list[int]) -> list[int]:
    """Vertices needing a nonzero vector, by twin-class size then degree, descending.

    A class of two or more true twins is a clique, so it needs norm >= p even
    when its representative is isolated in the reduced graph.
    """
    degrees = h.degrees()
    active = [v for v in range(h.n) if degrees[v] or sizes[v] > 1]
    return sorted(active, key=lambda v: (-sizes[v], -degrees[v], v))


def _attempt_budgets(cfg: SearchConfig) -> list[tuple[int, Optional[int]]]:
    """(budget, seed) per attempt; restarts use geometrically growing budgets."""
    if not cfg.randomized_restarts:
        return [(cfg.node_budget, None)]
    attempts = []
    spent = 0
    budget = max(1000, cfg.node_budget // 64)
    attempt = 0
    while spent + budget < cfg.node_budget:
        attempts.append((budget, cfg.seed + attempt))
        spent += budget
        budget *= 2
        attempt += 1
    attempts.append((cfg.node_budget - spent, cfg.seed + attempt))
    return attempts


def decide_theta_leq(g: Graph, d: int, p: int, cfg: Optional[SearchConfig] = None) -> DecisionResult:
    """Decide Theta_p(g) <= d exactly, returning a verified certificate on YES.

    INDETERMINATE is returned, never a guess, when the node budget runs out.
    """
    cfg = cfg or SearchConfig()
    if d < 0 or p < 1:
        raise ValueError(f"need d >= 0 and p >= 1, got d={d}, p={p}")
    if d > cfg.max_dimension:
        raise ValueError(f"dimension {d} exceeds the configured cap {cfg.max_dimension}")

    if g.edge_count == 0:
        return DecisionResult(Outcome.YES, d, p, BinaryRepresentation(d, p, (0,) * g.n))
    if d < p:
        return DecisionResult(Outcome.NO, d, p)

    reduction = twin_reduction(g, TwinMode.TRUE_TWINS)
    h = reduction.graph
    sizes = [len(cls) for cls in reduction.classes]
    order = _search_order(h, sizes)

    nodes = 0
    found: Optional[list[int]] = None
    exhausted = True
    for budget, seed in _attempt_budgets(cfg):
        rng = random.Random(seed) if seed is not None else None
        search = _Search(h, order, d, p, cfg.symmetry_breaking, budget, rng)
        try:
            found = search.run()
            exhausted = False
        except _BudgetExhausted:
            pass
        nodes += min(search.nodes, budget)
        if not exhausted:
            break

    if exhausted:
        logger.warning("node budget %d exhausted deciding Theta_%d <= %d on %d vertices",
                       cfg.node_budget, p, d, g.n)
        return DecisionResult(Outcome.INDETERMINATE, d, p, nodes=nodes)
    logger.debug("Theta_%d <= %d on %d vertices: %d nodes", p, d, g.n, nodes)
    if found is None:
        return DecisionResult(Outcome.NO, d, p, nodes=nodes)

    reduced = [0] * h.n
    for k, v in enumerate(order):
        reduced[v] = found[k]
    rep = BinaryRepresentation(d, p, tuple(reduced[c] for c in reduction.class_of))
    check = verify_representation(g, rep)
    if not check:
        raise SolverError(f"certificate fails at pair {check.pair}")
    return DecisionResult(Outcome.YES, d, p, rep, nodes=nodes)


def theta_p(g: Graph, p: int, cfg: Optional[SearchConfig] = None) -> ThetaResult:
    """Least d with a representation, searched upward from p.

    The padded edge representation certifies the upper bound without search.
    """
    cfg = cfg or SearchConfig()
    if p < 1:
        raise ValueError("threshold must be at least 1")
    upper = theta_upper_bound(g, p)
    if upper == 0:
        return ThetaResult(p, 0, 0, 0, BinaryRepresentation(0, p, (0,) * g.n))
    for d in range(p, upper):
        if d > cfg.max_dimension:
            return ThetaResult(p, None, d, upper)
        result = decide_theta_leq(g, d, p, cfg)
        if result.outcome is Outcome.YES:
            return ThetaResult(p, d, d, d, result.representation)
        if result.outcome is Outcome.INDETERMINATE:
            return ThetaResult(p, None, d, upper)
    return ThetaResult(p, upper, upper, upper, padded_edge_representation(g, p))


def in_theta_class(g: Graph, d: int, p: int, cfg: Optional[SearchConfig] = None) -> bool:
    """Boolean form of decide_theta_leq; raises IndeterminateError."""
    result = decide_theta_leq(g, d, p, cfg)
    if result.outcome is Outcome.INDETERMINATE:
        raise IndeterminateError(f"budget exhausted deciding Theta_{p} <= {d}", result.nodes)
    return result.present


def edge_clique_cover(g: Graph) -> list[tuple[int, ...]]:
    """A minimum set of cliques covering every edge (exact, n <= 10)."""
    if g.n > ENUMERATION_CAP:
        raise GraphError(f"exact edge clique cover is limited to {ENUMERATION_CAP} vertices")
    edges = g.edges()
    if not edges:
        return []
    edge_index = {e: i for i, e in enumerate(edges)}
    cliques = sorted(tuple(sorted(c)) for c in nx.find_cliques(g.to_networkx()) if len(c) >= 2)
    masks = [
        bit_mask(edge_index[(a, b)] for i, a in enumerate(c) for b in c[i + 1:])
        for c in cliques
    ]
    covering = [[c for c, mask in enumerate(masks) if mask >> e & 1] for e in range(len(edges))]
    widest = max(mask.bit_count() for mask in masks)
    best = list(range(len(cliques)))

    def search(uncovered: int, chosen: list[int]) -> None:
        nonlocal best
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + -(-uncovered.bit_count() // widest) >= len(best):
            return
        e = min(
            (i for i in range(len(edges)) if uncovered >> i & 1),
            key=lambda i: (len(covering[i]), i),
        )
        for c in sorted(covering[e], key=lambda c: (-(masks[c] & uncovered).bit_count(), c)):
            chosen.append(c)
            search(uncovered & ~masks[c], chosen)
            chosen.pop()

    search((1 << len(edges)) - 1, [])
    return [cliques[c] for c in sorted(best)]


def min_edge_clique_cover(g: Graph) -> int:
    return len(edge_clique_cover(g))

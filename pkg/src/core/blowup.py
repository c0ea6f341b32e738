"""Blow-ups of a base graph and recognition of the class G(G0; C, I)."""

import logging
from typing import Optional

from src.core.models import BlowUpPattern, Graph, GraphError, MAX_VERTICES, Part, TwinMode, iter_bits
from src.core.twins import twin_partition

logger = logging.getLogger(__name__)


def blow_up_bags(pattern: BlowUpPattern) -> tuple[int, ...]:
    """bag[v] = base vertex whose bag holds blown-up vertex v."""
    bags: list[int] = []
    for u, size in enumerate(pattern.sizes):
        bags.extend([u] * size)
    return tuple(bags)


def blow_up(pattern: BlowUpPattern) -> Graph:
    """Replace base vertex u by sizes[u] vertices (clique or independent set)."""
    if pattern.total_size > MAX_VERTICES:
        raise GraphError(f"blow-up of {pattern.total_size} vertices exceeds the cap")
    bags = blow_up_bags(pattern)
    base = pattern.base
    rows = []
    for v, u in enumerate(bags):
        row = 0
        for w, x in enumerate(bags):
            if w == v:
                continue
            if x == u:
                adjacent = pattern.parts[u] is Part.CLIQUE
            else:
                adjacent = base.has_edge(u, x)
            if adjacent:
                row |= 1 << w
        rows.append(row)
    return Graph(n=len(bags), adj=tuple(rows))


def _assignment_ok(pattern: BlowUpPattern, same: bool, a: int, b: int) -> bool:
    if same:
        return pattern.parts[a] is Part.CLIQUE
    return pattern.base.has_edge(a, b)


def verify_blow_up_assignment(g: Graph, pattern: BlowUpPattern, phi) -> bool:
    """Check phi: V(g) -> V(base) realizes g as a blow-up (sizes ignored)."""
    phi = tuple(phi)
    if len(phi) != g.n or any(not 0 <= b < pattern.base.n for b in phi):
        return False
    for u in range(g.n):
        for v in range(u + 1, g.n):
            expected = _assignment_ok(pattern, phi[u] == phi[v], phi[u], phi[v])
            if g.has_edge(u, v) != expected:
                return False
    return True


def _base_twin_lows(pattern: BlowUpPattern) -> list[int]:
    """lows[b] = mask of interchangeable base vertices below b.

    Base vertices are interchangeable when they share a part and have the
    same neighbourhood apart from each other.
    """
    base = pattern.base
    lows = [0] * base.n
    for b in range(base.n):
        for a in range(b):
            if pattern.parts[a] is not pattern.parts[b]:
                continue
            mask = ~((1 << a) | (1 << b))
            if base.adj[a] & mask == base.adj[b] & mask:
                lows[b] |= 1 << a
    return lows


def is_blow_up_of(g: Graph, pattern: BlowUpPattern) -> Optional[tuple[int, ...]]:
    """Find phi: V(g) -> V(base) with g a blow-up of the pattern, or None.

    Twin classes of g take non-decreasing bag indices, and a base vertex is
    only opened when every interchangeable lower vertex is already in use.
    """
    if g.n == 0:
        return ()
    base = pattern.base
    m = base.n
    if m == 0:
        return None

    full = (1 << m) - 1
    allow_adj = []
    allow_non = []
    for b in range(m):
        own = 1 << b
        in_clique = pattern.parts[b] is Part.CLIQUE
        allow_adj.append(base.adj[b] | (own if in_clique else 0))
        allow_non.append((full & ~base.adj[b] & ~own) | (0 if in_clique else own))
    lows = _base_twin_lows(pattern)

    order: list[int] = []
    placed = 0
    remaining = set(range(g.n))
    degrees = g.degrees()
    while remaining:
        v = max(remaining, key=lambda u: ((g.adj[u] & placed).bit_count(), degrees[u], -u))
        order.append(v)
        placed |= 1 << v
        remaining.remove(v)
    position = {v: k for k, v in enumerate(order)}

    previous_twin: list[Optional[int]] = [None] * g.n
    for mode in (TwinMode.TRUE_TWINS, TwinMode.OPEN_TWINS):
        for cls in twin_partition(g, mode):
            members = sorted(cls, key=position.__getitem__)
            for before, after in zip(members, members[1:]):
                previous_twin[after] = before

    phi = [0] * g.n
    nodes = 0

    def extend(k: int, used: int) -> bool:
        nonlocal nodes
        if k == len(order):
            return True
        v = order[k]
        cand = full
        for u in order[:k]:
            cand &= allow_adj[phi[u]] if g.adj[v] >> u & 1 else allow_non[phi[u]]
            if not cand:
                return False
        floor = phi[previous_twin[v]] if previous_twin[v] is not None else 0
        for b in iter_bits(cand):
            if b < floor:
                continue
            if not used >> b & 1 and lows[b] & ~used:
                continue
            nodes += 1
            phi[v] = b
            if extend(k + 1, used | (1 << b)):
                return True
        return False

    found = extend(0, 0)
    logger.debug("blow-up search on %d vertices visited %d nodes", g.n, nodes)
    return tuple(phi) if found else None

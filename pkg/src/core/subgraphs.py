"""Induced-subgraph search, Forb(F) checks and maximum cliques."""

import logging
from typing import Optional

import networkx as nx

from src.core.models import ForbCheck, ForbiddenFamily, Graph, iter_bits

logger = logging.getLogger(__name__)


def _search_order(h: Graph) -> list[int]:
    """Pattern vertices ordered so each one has many placed neighbours."""
    order: list[int] = []
    placed = 0
    degrees = h.degrees()
    remaining = set(range(h.n))
    while remaining:
        v = max(remaining, key=lambda u: ((h.adj[u] & placed).bit_count(), degrees[u], -u))
        order.append(v)
        placed |= 1 << v
        remaining.remove(v)
    return order


def induced_contains(g: Graph, h: Graph) -> Optional[tuple[int, ...]]:
    """Find an induced copy of h in g.

    Returns phi with phi[i] the image of pattern vertex i, or None.
    """
    if h.n > g.n:
        return None
    if h.n == 0:
        return ()
    if h.edge_count > g.edge_count:
        return None

    order = _search_order(h)
    hdeg = h.degrees()
    gdeg = g.degrees()
    # a pattern vertex needs as many neighbours and non-neighbours in g
    fits = []
    for i in range(h.n):
        mask = 0
        for v in range(g.n):
            if gdeg[v] >= hdeg[i] and (g.n - 1 - gdeg[v]) >= (h.n - 1 - hdeg[i]):
                mask |= 1 << v
        if not mask:
            return None
        fits.append(mask)
    constraints = [
        [(j, bool(h.adj[i] >> j & 1)) for j in order[:k]]
        for k, i in enumerate(order)
    ]
    phi = [0] * h.n

    def extend(k: int, used: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        cand = fits[i] & ~used
        for j, adjacent in constraints[k]:
            cand &= g.adj[phi[j]] if adjacent else ~g.adj[phi[j]]
            if not cand:
                return False
        for v in iter_bits(cand):
            phi[i] = v
            if extend(k + 1, used | (1 << v)):
                return True
        return False

    if extend(0, 0):
        return tuple(phi)
    return None


def verify_embedding(g: Graph, h: Graph, phi) -> bool:
    """Check phi is an injective map realizing h as an induced subgraph of g."""
    phi = tuple(phi)
    if len(phi) != h.n or len(set(phi)) != h.n:
        return False
    if any(not 0 <= v < g.n for v in phi):
        return False
    return all(
        h.has_edge(a, b) == g.has_edge(phi[a], phi[b])
        for a in range(h.n) for b in range(a + 1, h.n)
    )


def forb_member(g: Graph, fam: ForbiddenFamily) -> ForbCheck:
    """Does g avoid every family member as an induced subgraph?"""
    for member in fam:
        phi = induced_contains(g, member.graph)
        if phi is not None:
            logger.debug("found %s in graph on %d vertices", member.name, g.n)
            return ForbCheck(holds=False, name=member.name, embedding=phi)
    return ForbCheck(holds=True)


def max_clique(g: Graph) -> tuple[int, ...]:
    """A maximum clique, preferring ones whose vertices all have degree >= its size.

    Ties go to the lexicographically least sorted vertex tuple.
    """
    if g.n == 0:
        return ()
    cliques = [tuple(sorted(c)) for c in nx.find_cliques(g.to_networkx())]
    size = max(len(c) for c in cliques)
    largest = sorted(c for c in cliques if len(c) == size)
    degrees = g.degrees()
    preferred = [c for c in largest if all(degrees[u] >= size for u in c)]
    return (preferred or largest)[0]


def is_clique(g: Graph, vertices) -> bool:
    vertices = list(vertices)
    return all(g.has_edge(u, v) for i, u in enumerate(vertices) for v in vertices[i + 1:])

"""Constructors for the named graphs of the characterizations."""

from itertools import combinations

from src.core.models import Graph, GraphError, MAX_VERTICES, NamedGraphSpec, NamedTag


class NamedGraphError(GraphError):
    """Invalid named-graph parameters."""
    pass


# tag -> (parameter count, minimum value per parameter)
_PARAMS = {
    NamedTag.COMPLETE: (1, (0,)),
    NamedTag.EMPTY: (1, (0,)),
    NamedTag.PATH: (1, (0,)),
    NamedTag.CYCLE: (1, (3,)),
    NamedTag.STAR: (1, (0,)),
    NamedTag.COMPLETE_MINUS_EDGE: (1, (2,)),
    NamedTag.K23_PLUS_E: (0, ()),
    NamedTag.CLIQUE_PENDANTS: (2, (1, 0)),
    NamedTag.TRIANGLE_PENDANTS_1: (1, (0,)),
    NamedTag.TRIANGLE_PENDANTS_11: (1, (0,)),
    NamedTag.DIAMOND_PENDANTS: (1, (0,)),
    NamedTag.UNION: (0, ()),
}


def spec(tag, *params: int, label=None) -> NamedGraphSpec:
    """Shorthand: spec("star", 3) or spec(NamedTag.STAR, 3)."""
    return NamedGraphSpec(tag=NamedTag(tag), params=tuple(params), label=label)


def union(*parts: NamedGraphSpec, label=None) -> NamedGraphSpec:
    return NamedGraphSpec(tag=NamedTag.UNION, parts=tuple(parts), label=label)


def _complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def _with_pendants(base: Graph, attachments) -> Graph:
    """Append one pendant vertex per entry of attachments (base vertices)."""
    g = base
    for a in attachments:
        g = g.add_vertex(1 << a)
    return g


def make_named(named: NamedGraphSpec) -> Graph:
    """Build the graph a spec names.

    Base-graph vertices come first, then added vertices grouped by
    attachment point.
    """
    tag, params = named.tag, named.params
    count, minima = _PARAMS[tag]
    if len(params) != count:
        raise NamedGraphError(f"{tag.value} takes {count} parameter(s), got {len(params)}")
    for value, low in zip(params, minima):
        if value < low:
            raise NamedGraphError(f"{tag.value} parameter {value} below minimum {low}")

    if tag is NamedTag.UNION:
        g = Graph.empty(0)
        for part in named.parts:
            g = disjoint_union(g, make_named(part))
        return g

    size = _order(named)
    if size > MAX_VERTICES:
        raise NamedGraphError(f"{named.name} has {size} vertices, over the cap")

    if tag is NamedTag.COMPLETE:
        return _complete(params[0])
    if tag is NamedTag.EMPTY:
        return Graph.empty(params[0])
    if tag is NamedTag.PATH:
        n = params[0]
        return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))
    if tag is NamedTag.CYCLE:
        n = params[0]
        return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))
    if tag is NamedTag.STAR:
        t = params[0]
        return Graph.from_edges(t + 1, ((0, i) for i in range(1, t + 1)))
    if tag is NamedTag.COMPLETE_MINUS_EDGE:
        n = params[0]
        return Graph.from_edges(n, (e for e in combinations(range(n), 2) if e != (n - 2, n - 1)))
    if tag is NamedTag.K23_PLUS_E:
        # parts {0,1} and {2,3,4}; the edge joins the two degree-3 vertices
        return Graph.from_edges(5, [(0, 1)] + [(a, b) for a in (0, 1) for b in (2, 3, 4)])
    if tag is NamedTag.CLIQUE_PENDANTS:
        r, s = params
        return _with_pendants(_complete(r), [0] * s)
    if tag is NamedTag.TRIANGLE_PENDANTS_1:
        # s pendants on 0, then one vertex joined to both 1 and 2
        return _with_pendants(_complete(3), [0] * params[0]).add_vertex(0b110)
    if tag is NamedTag.TRIANGLE_PENDANTS_11:
        return _with_pendants(_complete(3), [0] * params[0] + [1, 2])
    if tag is NamedTag.DIAMOND_PENDANTS:
        # K_4 minus edge 2-3; pendants hang on vertex 0, a degree-3 vertex
        diamond = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
        return _with_pendants(diamond, [0] * params[0])
    raise NamedGraphError(f"unknown tag {tag}")


def _order(named: NamedGraphSpec) -> int:
    tag, params = named.tag, named.params
    if tag is NamedTag.UNION:
        return sum(_order(part) for part in named.parts)
    if tag in (NamedTag.COMPLETE, NamedTag.EMPTY, NamedTag.PATH, NamedTag.CYCLE,
               NamedTag.COMPLETE_MINUS_EDGE):
        return params[0]
    if tag is NamedTag.STAR:
        return params[0] + 1
    if tag is NamedTag.K23_PLUS_E:
        return 5
    if tag is NamedTag.CLIQUE_PENDANTS:
        return params[0] + params[1]
    if tag is NamedTag.TRIANGLE_PENDANTS_1:
        return params[0] + 4
    if tag is NamedTag.TRIANGLE_PENDANTS_11:
        return params[0] + 5
    if tag is NamedTag.DIAMOND_PENDANTS:
        return params[0] + 4
    return 0


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """g keeps its indices; h is shifted by g.n."""
    if g.n + h.n > MAX_VERTICES:
        raise GraphError(f"union of {g.n} and {h.n} vertices exceeds the cap")
    shifted = tuple(row << g.n for row in h.adj)
    return Graph(n=g.n + h.n, adj=g.adj + shifted)


def parse_named(text: str) -> NamedGraphSpec:
    """Parse "tag:p1,p2" terms joined by '+', e.g. "complete:2+empty:3"."""
    terms = [t.strip() for t in text.split("+") if t.strip()]
    if not terms:
        raise NamedGraphError(f"empty graph name {text!r}")
    specs = []
    for term in terms:
        tag_text, _, param_text = term.partition(":")
        try:
            tag = NamedTag(tag_text.strip().lower())
        except ValueError:
            choices = ", ".join(t.value for t in NamedTag if t is not NamedTag.UNION)
            raise NamedGraphError(f"unknown graph {tag_text!r}; choose from {choices}") from None
        try:
            params = tuple(int(p) for p in param_text.split(",") if p.strip())
        except ValueError:
            raise NamedGraphError(f"bad parameters in {term!r}") from None
        specs.append(NamedGraphSpec(tag=tag, params=params))
    return specs[0] if len(specs) == 1 else union(*specs)

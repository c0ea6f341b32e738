"""Twin classes, the twin reduction R(G) and isolated/universal peeling."""

from dataclasses import dataclass

from src.core.models import Graph, TwinMode


@dataclass(frozen=True)
class TwinReduction:
    """Reduced graph plus class_of[v] = reduced vertex representing v."""
    graph: Graph
    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]


def _classes_by_key(g: Graph, closed: bool) -> list[list[int]]:
    buckets: dict[int, list[int]] = {}
    for v in range(g.n):
        key = g.adj[v] | (1 << v) if closed else g.adj[v]
        buckets.setdefault(key, []).append(v)
    return list(buckets.values())


def twin_partition(g: Graph, mode: TwinMode = TwinMode.TRUE_TWINS) -> tuple[tuple[int, ...], ...]:
    """Twin classes sorted by least vertex.

    BOTH merges nontrivial true-twin and open-twin classes; two vertices
    are never twins of both kinds, so the classes stay disjoint.
    """
    if mode is TwinMode.TRUE_TWINS:
        classes = _classes_by_key(g, closed=True)
    elif mode is TwinMode.OPEN_TWINS:
        classes = _classes_by_key(g, closed=False)
    else:
        nontrivial = [c for c in _classes_by_key(g, closed=True) if len(c) > 1]
        nontrivial += [c for c in _classes_by_key(g, closed=False) if len(c) > 1]
        covered = {v for c in nontrivial for v in c}
        classes = nontrivial + [[v] for v in range(g.n) if v not in covered]
    return tuple(sorted(tuple(sorted(c)) for c in classes))


def _reduce_once(g: Graph, mode: TwinMode) -> TwinReduction:
    classes = twin_partition(g, mode)
    class_of = [0] * g.n
    for index, cls in enumerate(classes):
        for v in cls:
            class_of[v] = index
    return TwinReduction(
        graph=g.induced(cls[0] for cls in classes),
        class_of=tuple(class_of),
        classes=classes,
    )


def twin_reduction(g: Graph, mode: TwinMode = TwinMode.TRUE_TWINS) -> TwinReduction:
    """Keep the least vertex of every twin class.

    A true-twin or open-twin quotient never creates new twins of the same
    kind, so one pass suffices. BOTH alternates until no twins remain.
    """
    result = _reduce_once(g, mode)
    if mode is not TwinMode.BOTH:
        return result
    while True:
        step = _reduce_once(result.graph, mode)
        if step.graph.n == result.graph.n:
            return result
        class_of = tuple(step.class_of[c] for c in result.class_of)
        classes = tuple(
            tuple(v for v in range(g.n) if class_of[v] == index)
            for index in range(step.graph.n)
        )
        result = TwinReduction(graph=step.graph, class_of=class_of, classes=classes)


def strip_isolated_universal(g: Graph) -> tuple[Graph, list[tuple[int, str]]]:
    """Repeatedly remove isolated and universal vertices.

    Returns the remaining induced subgraph and the (vertex, kind) peeling
    sequence in original vertex numbers.
    """
    alive = list(range(g.n))
    peeled: list[tuple[int, str]] = []
    while True:
        current = g.induced(alive)
        isolated = set(current.isolated_vertices())
        universal = set(current.universal_vertices()) - isolated
        if not isolated and not universal:
            return current, peeled
        for i, v in enumerate(alive):
            if i in isolated:
                peeled.append((v, "isolated"))
            elif i in universal:
                peeled.append((v, "universal"))
        alive = [v for i, v in enumerate(alive) if i not in isolated and i not in universal]

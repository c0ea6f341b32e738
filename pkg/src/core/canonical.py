"""Canonical labeling by colour refinement plus individualization.

The search tree is label-invariant: refinement splits cells by neighbour
counts, and the first non-singleton cell is individualized. The canonical
labeling is the leaf whose relabeled adjacency rows are lexicographically
largest. Leaves that reproduce an earlier leaf's graph yield automorphisms,
which prune later branches.
"""

from functools import lru_cache
from typing import Optional

from src.core.graph6 import emit_graph6
from src.core.models import Graph, IsoCertificate, bit_mask, iter_bits


def _refine(adj: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    """Refine an ordered partition until it is equitable."""
    while True:
        masks = [bit_mask(cell) for cell in cells]
        refined = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            buckets: dict[tuple, list[int]] = {}
            for v in cell:
                key = tuple((adj[v] & m).bit_count() for m in masks)
                buckets.setdefault(key, []).append(v)
            if len(buckets) > 1:
                changed = True
                refined.extend(buckets[key] for key in sorted(buckets))
            else:
                refined.append(cell)
        cells = refined
        if not changed:
            return cells


def _common_prefix(a: list[int], b: list[int]) -> int:
    length = 0
    for x, y in zip(a, b):
        if x != y:
            break
        length += 1
    return length


class _Search:
    def __init__(self, g: Graph):
        self.adj = g.adj
        self.n = g.n
        self.generators: list[tuple[int, ...]] = []
        self.first = None
        self.best = None

    def run(self) -> None:
        if self.n:
            self._visit(_refine(self.adj, [list(range(self.n))]), [])

    def _leaf_key(self, lab: list[int]) -> tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(lab):
            pos[v] = i
        rows = []
        for v in lab:
            row = 0
            for u in iter_bits(self.adj[v]):
                row |= 1 << pos[u]
            rows.append(row)
        return tuple(rows)

    def _visit(self, cells: list[list[int]], path: list[int]) -> Optional[int]:
        """Explore a node; a returned level asks ancestors deeper than it to stop."""
        target = next((i for i, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            return self._leaf([cell[0] for cell in cells], path)
        cell = cells[target]
        tried: list[int] = []
        for v in cell:
            if tried and self._equivalent(v, tried, path):
                continue
            tried.append(v)
            rest = [u for u in cell if u != v]
            child = cells[:target] + [[v], rest] + cells[target + 1:]
            jump = self._visit(_refine(self.adj, child), path + [v])
            if jump is not None and jump < len(path):
                return jump
        return None

    def _leaf(self, lab: list[int], path: list[int]) -> Optional[int]:
        key = self._leaf_key(lab)
        if self.first is None:
            self.first = self.best = (key, path, lab)
            return None
        for ref_key, ref_path, ref_lab in (self.first, self.best):
            if key == ref_key:
                perm = [0] * self.n
                for a, b in zip(ref_lab, lab):
                    perm[a] = b
                self.generators.append(tuple(perm))
                return _common_prefix(path, ref_path)
        if key > self.best[0]:
            self.best = (key, path, lab)
        return None

    def _equivalent(self, v: int, tried: list[int], path: list[int]) -> bool:
        """Is v in the orbit of a tried vertex under automorphisms fixing path?"""
        stabilizer = [
            perm for perm in self.generators
            if all(perm[u] == u for u in path)
        ]
        if not stabilizer:
            return False
        orbit = {v}
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for perm in stabilizer:
                w = perm[u]
                if w not in orbit:
                    orbit.add(w)
                    frontier.append(w)
        return any(t in orbit for t in tried)


@lru_cache(maxsize=65536)
def canonical_form(g: Graph) -> IsoCertificate:
    """Label-invariant certificate; equal bytes iff isomorphic."""
    search = _Search(g)
    search.run()
    if search.best is None:
        labeling: tuple[int, ...] = ()
    else:
        lab = search.best[2]
        pos = [0] * g.n
        for i, v in enumerate(lab):
            pos[v] = i
        labeling = tuple(pos)
    canon = g.relabel(labeling) if g.n else g
    return IsoCertificate(
        certificate=emit_graph6(canon).encode("ascii"),
        labeling=labeling,
        generators=tuple(search.generators),
    )


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_form(g).labeling) if g.n else g


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    return canonical_form(g).certificate == canonical_form(h).certificate

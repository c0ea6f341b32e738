"""Graph enumeration and minimal forbidden induced subgraphs of G(d,p)."""

import logging
import re
import threading
from collections import OrderedDict
from dataclasses import replace
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from math import comb
from typing import Iterator, Optional

from src import __version__
from src.core.canonical import canonical_form, canonical_graph
from src.core.characterizations import thm2_family, thm3_family
from src.core.graph6 import emit_graph6, parse_graph6
from src.core.models import (
    CatalogEntry, DecisionResult, ENUMERATION_CAP, Graph, GraphError, MfisCatalog, NamedTag,
    Outcome, SearchConfig,
)
from src.core.named import make_named, spec
from src.core.representation import (
    RepresentationError, format_certificate, parse_certificate, verify_representation,
)
from src.core.solver import IndeterminateError, decide_theta_leq
from src.core.subgraphs import forb_member

logger = logging.getLogger(__name__)


class CatalogFormatError(ValueError):
    """A catalog file does not follow the catalog text format."""
    pass


def _check_order(n: int) -> None:
    if not 0 <= n <= ENUMERATION_CAP:
        raise GraphError(f"enumeration is limited to 0 <= n <= {ENUMERATION_CAP}, got {n}")


@lru_cache(maxsize=None)
def _graphs_of_order(n: int) -> tuple[Graph, ...]:
    if n == 0:
        return (Graph.empty(0),)
    found: dict[bytes, Graph] = {}
    for g in _graphs_of_order(n - 1):
        for mask in range(1 << (n - 1)):
            h = g.add_vertex(mask)
            key = canonical_form(h).certificate
            if key not in found:
                found[key] = canonical_graph(h)
    return tuple(found[key] for key in sorted(found, key=lambda k: (found[k].edge_count, k)))


def enumerate_graphs(n: int) -> Iterator[Graph]:
    """One canonically labeled graph per isomorphism class of order n.

    Ordered by edge count, then canonical graph6.
    """
    _check_order(n)
    yield from _graphs_of_order(n)


class MembershipOracle:
    """Memoized "g in G(d,p)" keyed by canonical form.

    The in-memory memo is a bounded LRU; an optional MembershipCache
    persists decisions between runs. Stored certificates use the canonical
    vertex order.
    """

    def __init__(self, d: int, p: int, cfg: Optional[SearchConfig] = None,
                 capacity: int = 100_000, store=None):
        if capacity < 1:
            raise ValueError("memo capacity must be positive")
        self.d = d
        self.p = p
        self.cfg = cfg or SearchConfig()
        self.capacity = capacity
        self.store = store
        self._memo: OrderedDict[str, bool] = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.evictions = 0

    def _remember(self, key: str, member: bool) -> None:
        with self._lock:
            self._memo[key] = member
            self._memo.move_to_end(key)
            while len(self._memo) > self.capacity:
                self._memo.popitem(last=False)
                self.evictions += 1

    def lookup(self, key: str) -> Optional[bool]:
        """Known decision for a canonical graph6 key, from the memo or the store."""
        with self._lock:
            if key in self._memo:
                self._memo.move_to_end(key)
                self.hits += 1
                return self._memo[key]
        if self.store is None:
            return None
        stored = self.store.get(key, self.d, self.p)
        if stored is not None:
            with self._lock:
                self.hits += 1
            self._remember(key, stored)
        return stored

    def record(self, key: str, member: bool, certificate: Optional[str] = None, nodes: int = 0) -> None:
        """Count a solved decision and keep it; certificate is in canonical order."""
        with self._lock:
            self.misses += 1
        self._remember(key, member)
        if self.store is not None:
            self.store.put(key, self.d, self.p, member, certificate, nodes)

    def __call__(self, g: Graph) -> bool:
        form = canonical_form(g)
        key = form.graph6
        known = self.lookup(key)
        if known is not None:
            return known

        result = decide_theta_leq(g, self.d, self.p, self.cfg)
        if result.outcome is Outcome.INDETERMINATE:
            with self._lock:
                self.misses += 1
            raise IndeterminateError(
                f"budget exhausted deciding membership of {emit_graph6(g)} in G({self.d},{self.p})",
                result.nodes,
            )
        certificate = None
        if result.present:
            certificate = format_certificate(result.representation.relabel(form.labeling))
        self.record(key, result.present, certificate, result.nodes)
        return result.present

    def stats(self) -> dict[str, int]:
        return {
            "hits": self.hits,
            "misses": self.misses,
            "evictions": self.evictions,
            "size": len(self._memo),
            "capacity": self.capacity,
        }


def cached_decision(g: Graph, d: int, p: int, cfg: Optional[SearchConfig] = None,
                    store=None) -> DecisionResult:
    """decide_theta_leq backed by a MembershipCache.

    A stored certificate is mapped back to g's labeling and re-verified
    before it is trusted; anything else falls through to the solver, whose
    definite answers are stored.
    """
    if store is None:
        return decide_theta_leq(g, d, p, cfg)
    form = canonical_form(g)
    stored = store.get(form.graph6, d, p)
    if stored is False:
        return DecisionResult(Outcome.NO, d, p)
    if stored:
        text = store.get_certificate(form.graph6, d, p)
        if text is not None:
            try:
                rep = parse_certificate(text).restrict(form.labeling)
                if verify_representation(g, rep):
                    return DecisionResult(Outcome.YES, d, p, rep)
            except (RepresentationError, IndexError) as e:
                logger.warning("ignoring stored certificate for %s: %s", form.graph6, e)
            else:
                logger.warning("stored certificate for %s does not verify", form.graph6)

    result = decide_theta_leq(g, d, p, cfg)
    if result.outcome is not Outcome.INDETERMINATE:
        certificate = None
        if result.present:
            certificate = format_certificate(result.representation.relabel(form.labeling))
        store.put(form.graph6, d, p, result.present, certificate, result.nodes)
    return result


@lru_cache(maxsize=32)
def default_oracle(d: int, p: int, cfg: Optional[SearchConfig] = None) -> MembershipOracle:
    return MembershipOracle(d, p, cfg)


def in_class(g: Graph, d: int, p: int, cfg: Optional[SearchConfig] = None,
             oracle: Optional[MembershipOracle] = None) -> bool:
    """Theta_p(g) <= d, memoized; raises IndeterminateError on budget exhaustion."""
    oracle = oracle or default_oracle(d, p, cfg)
    return oracle(g)


def is_minimal_forbidden(g: Graph, d: int, p: int, cfg: Optional[SearchConfig] = None,
                         oracle: Optional[MembershipOracle] = None) -> bool:
    """g lies outside G(d,p) and every one-vertex deletion lies inside.

    One deletion per automorphism orbit is checked.
    """
    oracle = oracle or default_oracle(d, p, cfg)
    if oracle(g):
        return False
    return all(oracle(g.delete_vertex(orbit[0])) for orbit in canonical_form(g).orbits())


def class_split(d: int, p: int) -> tuple[int, int]:
    """(|C_(d,p)|, |I_(d,p)|): vectors of norm >= p and the rest."""
    c_size = sum(comb(d, k) for k in range(p, d + 1))
    return c_size, (1 << d) - c_size


def theorem1_bound(c_size: int, i_size: int) -> int:
    """Order ceiling for minimal forbidden subgraphs of G(G0; C, I)."""
    if c_size < 0 or i_size < 0:
        raise ValueError("part sizes must be nonnegative")
    return 4 * c_size * i_size + 2 * c_size + 2 * i_size + 1


def corollary1_bound(d: int) -> int:
    """3 * 2^(d+1) + 1, reported next to the operative Theorem 1 ceiling."""
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    return 3 * 2 ** (d + 1) + 1


def known_names(d: int, p: int) -> dict[str, str]:
    """Canonical graph6 -> name for family members and the star K_{1,C(d,p)+1}."""
    names: dict[str, str] = {}
    families = []
    if p == d - 1 and d >= 2:
        families.append(thm2_family(d))
    if p == d - 2 and d >= 3:
        families.append(thm3_family(d))
    for family in families:
        for member in family:
            if member.graph.n <= ENUMERATION_CAP:
                names.setdefault(canonical_form(member.graph).graph6, member.name)
    if 1 <= p <= d:
        k = comb(d, p) + 1
        if k + 1 <= ENUMERATION_CAP:
            star = spec(NamedTag.STAR, k)
            names.setdefault(canonical_form(make_named(star)).graph6, star.name)
    return names


def _decide_remote(args: tuple[str, int, int, dict]) -> tuple[str, Optional[bool], Optional[str], int]:
    # graph6 is canonical, so the certificate is already in canonical order
    graph6, d, p, cfg = args
    result = decide_theta_leq(parse_graph6(graph6), d, p, SearchConfig.from_dict(cfg))
    if result.outcome is Outcome.INDETERMINATE:
        return graph6, None, None, result.nodes
    certificate = format_certificate(result.representation) if result.present else None
    return graph6, result.present, certificate, result.nodes


def enumerate_mfis(d: int, p: int, max_n: int, cfg: Optional[SearchConfig] = None,
                   oracle: Optional[MembershipOracle] = None,
                   parallel: bool = False, workers: Optional[int] = None) -> MfisCatalog:
    """All minimal forbidden induced subgraphs of G(d,p) with at most max_n vertices.

    Level n extends the class members of level n - 1 by one vertex. A
    candidate with a deletion outside the class contains a smaller forbidden
    graph and is skipped; the rest are members or minimal forbidden graphs.
    """
    cfg = cfg or SearchConfig()
    if d < 0 or p < 1:
        raise ValueError(f"need d >= 0 and p >= 1, got d={d}, p={p}")
    _check_order(max_n)
    c_size, i_size = class_split(d, p)
    bound1 = theorem1_bound(c_size, i_size)
    if max_n > bound1:
        raise ValueError(f"max_n={max_n} exceeds the order bound {bound1}")
    oracle = oracle or MembershipOracle(d, p, cfg)
    names = known_names(d, p)

    members: list[Graph] = [Graph.empty(0)]
    entries: list[CatalogEntry] = []
    level_stats = {}
    for n in range(1, max_n + 1):
        member_keys = {canonical_form(g).certificate for g in members}
        candidates: dict[bytes, Graph] = {}
        for g in members:
            for mask in range(1 << (n - 1)):
                h = g.add_vertex(mask)
                key = canonical_form(h).certificate
                if key not in candidates:
                    candidates[key] = h
        viable = []
        for key in sorted(candidates):
            h = candidates[key]
            orbits = canonical_form(h).orbits()
            if all(canonical_form(h.delete_vertex(o[0])).certificate in member_keys for o in orbits):
                viable.append((key.decode("ascii"), h))

        decisions = _decide_level(viable, d, p, cfg, oracle, parallel, workers)
        members = []
        found = 0
        for graph6, h in viable:
            if decisions[graph6]:
                members.append(h)
            else:
                entries.append(CatalogEntry(graph6=graph6, order=n, name=names.get(graph6)))
                found += 1
        level_stats[n] = {"candidates": len(candidates), "viable": len(viable),
                          "members": len(members), "mfis": found}
        logger.info("level %d: %d candidates, %d viable, %d members, %d minimal forbidden",
                    n, len(candidates), len(viable), len(members), found)

    logger.info("membership memo: %s", oracle.stats())
    entries.sort(key=lambda e: (e.order, e.graph6))
    return MfisCatalog(
        d=d, p=p, max_n=max_n, entries=tuple(entries), version=__version__,
        budget=cfg.node_budget, theorem1_bound=bound1, corollary1_bound=corollary1_bound(d),
        stats={"levels": level_stats, "memo": oracle.stats()},
    )


def _decide_level(viable, d, p, cfg, oracle, parallel, workers) -> dict[str, bool]:
    if not parallel or len(viable) < 2:
        return {graph6: oracle(h) for graph6, h in viable}
    decisions = {}
    pending = []
    for graph6, _ in viable:
        known = oracle.lookup(graph6)
        if known is None:
            pending.append(graph6)
        else:
            decisions[graph6] = known
    if not pending:
        return decisions
    jobs = [(graph6, d, p, cfg.to_dict()) for graph6 in pending]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for graph6, member, certificate, nodes in pool.map(_decide_remote, jobs, chunksize=16):
            if member is None:
                raise IndeterminateError(f"budget exhausted deciding membership of {graph6}", nodes)
            oracle.record(graph6, member, certificate, nodes)
            decisions[graph6] = member
    return decisions


_HEADER = re.compile(r"^# mfis d=(\d+) p=(\d+) max_n=(\d+) version=(\S+)$")
_ENTRY = re.compile(r"^(\S+) order=(\d+) name=(\S+)$")


def format_catalog(catalog: MfisCatalog) -> str:
    """Stable text form; the creation time stays out for byte-identical reruns."""
    lines = [
        f"# mfis d={catalog.d} p={catalog.p} max_n={catalog.max_n} version={catalog.version}",
        f"# budget={catalog.budget} theorem1_bound={catalog.theorem1_bound} "
        f"corollary1_bound={catalog.corollary1_bound} "
        f"exceeds_corollary1={'true' if catalog.exceeds_corollary1 else 'false'}",
    ]
    for entry in catalog.entries:
        lines.append(f"{entry.graph6} order={entry.order} name={entry.name or '-'}")
    return "\n".join(lines) + "\n"


def parse_catalog(text: str) -> MfisCatalog:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise CatalogFormatError("empty catalog")
    header = _HEADER.match(lines[0].strip())
    if not header:
        raise CatalogFormatError(f"line 1: bad catalog header {lines[0]!r}")
    d, p, max_n = (int(x) for x in header.group(1, 2, 3))
    meta: dict[str, str] = {}
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if line.startswith("#"):
            for token in line[1:].split():
                key, sep, value = token.partition("=")
                if not sep:
                    raise CatalogFormatError(f"line {lineno}: bad metadata token {token!r}")
                meta[key] = value
            continue
        match = _ENTRY.match(line)
        if not match:
            raise CatalogFormatError(f"line {lineno}: bad entry {line!r}")
        graph6, order, name = match.group(1), int(match.group(2)), match.group(3)
        try:
            g = parse_graph6(graph6)
        except GraphError as e:
            raise CatalogFormatError(f"line {lineno}: {e}") from None
        if g.n != order:
            raise CatalogFormatError(f"line {lineno}: order {order} does not match {g.n} vertices")
        entries.append(CatalogEntry(graph6=graph6, order=order, name=None if name == "-" else name))
    c_size, i_size = class_split(d, p)
    try:
        return MfisCatalog(
            d=d, p=p, max_n=max_n, entries=tuple(entries), version=header.group(4),
            budget=int(meta.get("budget", SearchConfig().node_budget)),
            theorem1_bound=int(meta.get("theorem1_bound", theorem1_bound(c_size, i_size))),
            corollary1_bound=int(meta.get("corollary1_bound", corollary1_bound(d))),
        )
    except ValueError as e:
        raise CatalogFormatError(f"bad metadata: {e}") from None


def truncate_catalog(catalog: MfisCatalog, max_n: int) -> MfisCatalog:
    """The catalog a run with the smaller max_n would produce."""
    if max_n > catalog.max_n:
        raise ValueError(f"cannot extend a max_n={catalog.max_n} catalog to {max_n}")
    return replace(catalog, max_n=max_n, entries=tuple(e for e in catalog.entries if e.order <= max_n))


def verify_catalog(catalog: MfisCatalog, cfg: Optional[SearchConfig] = None) -> list[str]:
    """Re-check every entry with fresh, unmemoized solver runs; returns problems."""
    cfg = cfg or SearchConfig(node_budget=catalog.budget)
    problems = []

    def member(g: Graph) -> bool:
        result = decide_theta_leq(g, catalog.d, catalog.p, cfg)
        if result.outcome is Outcome.INDETERMINATE:
            raise IndeterminateError(f"budget exhausted re-verifying {emit_graph6(g)}", result.nodes)
        return result.present

    seen = set()
    previous = None
    for entry in catalog.entries:
        g = parse_graph6(entry.graph6)
        key = canonical_form(g).graph6
        if key in seen:
            problems.append(f"{entry.graph6}: duplicate isomorphism class")
        seen.add(key)
        sort_key = (entry.order, entry.graph6)
        if previous is not None and sort_key < previous:
            problems.append(f"{entry.graph6}: entries out of order")
        previous = sort_key
        if entry.order > catalog.theorem1_bound:
            problems.append(f"{entry.graph6}: order above the Theorem 1 bound")
        if member(g):
            problems.append(f"{entry.graph6}: lies inside G({catalog.d},{catalog.p})")
        for v in range(g.n):
            if not member(g.delete_vertex(v)):
                problems.append(f"{entry.graph6}: deleting vertex {v} leaves a non-member")
                break
    return problems


def catalog_bound_report(catalog: MfisCatalog) -> list[str]:
    """Entry orders against the Theorem 1 ceiling and the Corollary 1 figure."""
    c_size, i_size = class_split(catalog.d, catalog.p)
    largest = max((e.order for e in catalog.entries), default=0)
    over_theorem1 = [e.graph6 for e in catalog.entries if e.order > catalog.theorem1_bound]
    over_corollary1 = [e.graph6 for e in catalog.entries if e.order > catalog.corollary1_bound]
    lines = [
        f"split |C|={c_size} |I|={i_size}",
        f"largest entry order={largest}",
        f"theorem1_bound={catalog.theorem1_bound} violations={len(over_theorem1)}",
        f"corollary1_bound={catalog.corollary1_bound} exceeded_by={len(over_corollary1)}",
    ]
    if c_size * i_size > 2 ** catalog.d:
        lines.append(f"note: |C||I|={c_size * i_size} exceeds 2^d={2 ** catalog.d}; "
                     "the corollary figure is not implied by the theorem bound")
    return lines


def cross_theorem_problems(catalog: MfisCatalog) -> list[str]:
    """At p = d - 1, entries without isolated vertices must contain a Theorem 2 member."""
    if catalog.p != catalog.d - 1 or catalog.d < 2:
        return []
    family = thm2_family(catalog.d)
    problems = []
    for entry in catalog.entries:
        g = parse_graph6(entry.graph6)
        if g.isolated_vertices():
            continue
        if forb_member(g, family).holds:
            problems.append(f"{entry.graph6}: contains no Theorem 2 family member")
    return problems

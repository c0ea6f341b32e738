"""End-to-end acceptance runs, each producing a pass/fail report.

Defaults reproduce the full desk-scale ranges; callers pass smaller
ranges for quick checks.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Callable, Iterator, Optional

from src.core.canonical import canonical_form
from src.core.characterizations import (
    construct_representation_thm3, thm2_check, thm3_check, thm3_family, verify_star_mfis,
)
from src.core.graph6 import emit_graph6, parse_graph6
from src.core.mfis import (
    catalog_bound_report, class_split, cross_theorem_problems, enumerate_graphs, enumerate_mfis,
    format_catalog, parse_catalog, theorem1_bound, verify_catalog,
)
from src.core.models import (
    ConditionOutcome, Graph, NamedTag, Outcome, SearchConfig, TwinMode,
)
from src.core.named import make_named, spec
from src.core.representation import (
    expected_u_double_prime, expected_u_prime, format_certificate, norm_vectors,
    parse_certificate, u_double_prime_count, u_prime_count, verify_representation,
)
from src.core.solver import decide_theta_leq, min_edge_clique_cover, theta_p
from src.core.subgraphs import forb_member
from src.core.twins import twin_reduction

logger = logging.getLogger(__name__)


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    failed: int = 0
    lines: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def check(self, condition: bool, failure: str) -> None:
        if condition:
            self.passed += 1
        else:
            self.failed += 1
            self.lines.append(f"FAIL {failure}")

    def summary(self) -> str:
        return f"suite={self.name} passed={self.passed} failed={self.failed}"


def graphs_up_to(max_n: int, min_n: int = 1) -> Iterator[Graph]:
    for n in range(min_n, max_n + 1):
        yield from enumerate_graphs(n)


def brute_force_member(g: Graph, d: int, p: int) -> bool:
    """Try every assignment of d-bit vectors; independent of the solver."""
    edges = {(u, v) for u, v in g.edges()}
    pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
    for vectors in product(range(1 << d), repeat=g.n):
        if all(((vectors[u] & vectors[v]).bit_count() >= p) == ((u, v) in edges) for u, v in pairs):
            return True
    return False


def suite_thm2(ds=(2, 3, 4), max_n: int = 7, solver_ds=(2, 3), solver_max_n: int = 6,
               cfg: Optional[SearchConfig] = None) -> SuiteReport:
    report = SuiteReport("thm2")
    for g in graphs_up_to(max_n):
        if g.isolated_vertices():
            continue
        for d in ds:
            with_solver = d in solver_ds and g.n <= solver_max_n
            verdict = thm2_check(g, d, with_solver=with_solver, cfg=cfg)
            report.check(
                verdict.consistent and not verdict.any_indeterminate,
                f"d={d} {emit_graph6(g)} " + " ".join(verdict.report_lines()),
            )
    return report


def suite_thm3(ds=(3, 4), max_n: int = 7, cfg: Optional[SearchConfig] = None) -> SuiteReport:
    """Conditions i/ii/iii under true-twin reduction; the both-twins run is tallied alongside."""
    report = SuiteReport("thm3")
    agree = {TwinMode.TRUE_TWINS: 0, TwinMode.BOTH: 0}
    total = 0
    for g in graphs_up_to(max_n):
        if g.isolated_vertices() or g.universal_vertices():
            continue
        for d in ds:
            verdict = thm3_check(g, d, with_solver=True, cfg=cfg)
            report.check(
                verdict.consistent and not verdict.any_indeterminate,
                f"d={d} {emit_graph6(g)} " + " ".join(verdict.report_lines()),
            )
            solver_holds = verdict.conditions["i"].outcome is ConditionOutcome.HOLDS
            total += 1
            for mode in agree:
                reduced = twin_reduction(g, mode).graph
                if forb_member(reduced, thm3_family(d)).holds == solver_holds:
                    agree[mode] += 1
    for mode, count in agree.items():
        report.lines.append(f"twin_mode={mode.value} matches_i={count}/{total}")
    return report


STAR_PAIRS = ((1, 1), (2, 1), (3, 1), (3, 2), (4, 2), (4, 3))


def suite_star(pairs=STAR_PAIRS, cfg: Optional[SearchConfig] = None) -> SuiteReport:
    report = SuiteReport("star")
    for d, p in pairs:
        result = verify_star_mfis(d, p, cfg)
        report.check(result.is_mfis, f"d={d} p={p} k={result.k}: " + "; ".join(result.details))
        report.lines.append(f"d={d} p={p} k={result.k} is_mfis={'true' if result.is_mfis else 'false'}")
    return report


def suite_oracle_p1(max_n: int = 6, cfg: Optional[SearchConfig] = None) -> SuiteReport:
    report = SuiteReport("oracle-p1")
    for g in graphs_up_to(max_n, min_n=0):
        theta = theta_p(g, 1, cfg).value
        cover = min_edge_clique_cover(g)
        report.check(theta == cover, f"{emit_graph6(g)} theta={theta} cover={cover}")
    return report


def brute_force_mfis(d: int, p: int, max_n: int) -> set[str]:
    """Minimal forbidden graphs by exhaustive assignment search."""
    found = set()
    for g in graphs_up_to(max_n):
        if brute_force_member(g, d, p):
            continue
        if all(brute_force_member(g.delete_vertex(v), d, p) for v in range(g.n)):
            found.add(canonical_form(g).graph6)
    return found


def suite_mfis_oracle(d: int = 1, p: int = 1, max_n: int = 5,
                      cfg: Optional[SearchConfig] = None) -> SuiteReport:
    report = SuiteReport("mfis-oracle")
    catalog = enumerate_mfis(d, p, max_n, cfg)
    expected = brute_force_mfis(d, p, max_n)
    got = catalog.certificates()
    for graph6 in sorted(expected | got):
        report.check(graph6 in expected and graph6 in got,
                     f"{graph6} enumerated={graph6 in got} brute_force={graph6 in expected}")
    report.lines.append(f"d={d} p={p} max_n={max_n} entries={len(got)}")
    return report


def suite_containment(max_n: int = 5, cfg: Optional[SearchConfig] = None) -> SuiteReport:
    report = SuiteReport("containment")
    for d, p in ((3, 2), (2, 1)):
        k = comb(d, p) + 1
        star = canonical_form(make_named(spec(NamedTag.STAR, k))).graph6
        catalog = enumerate_mfis(d, p, max_n, cfg)
        report.check(star in catalog.certificates(), f"K_{{1,{k}}} missing from the ({d},{p}) catalog")
    return report


def suite_bounds(pairs=((1, 1), (2, 1), (3, 2)), max_n: int = 5,
                 cfg: Optional[SearchConfig] = None) -> SuiteReport:
    report = SuiteReport("bounds")
    for d, p in pairs:
        catalog = enumerate_mfis(d, p, max_n, cfg)
        bound = theorem1_bound(*class_split(d, p))
        for entry in catalog.entries:
            report.check(entry.order <= bound, f"({d},{p}) {entry.graph6} order {entry.order} > {bound}")
        report.lines.extend(f"({d},{p}) {line}" for line in catalog_bound_report(catalog))
        for problem in verify_catalog(catalog, cfg) + cross_theorem_problems(catalog):
            report.check(False, f"({d},{p}) {problem}")
        if catalog.exceeds_corollary1:
            report.lines.append(f"({d},{p}) flagged: entries above corollary1_bound")
    return report


def suite_counting(max_d: int = 8) -> SuiteReport:
    report = SuiteReport("counting")
    for d in range(3, max_d + 1):
        highs = norm_vectors(d, d - 1)
        for xs in combinations(highs, 3):
            count = u_prime_count(d, xs)
            report.check(count == expected_u_prime(d), f"U' d={d} xs={xs}: {count}")
        for i in range(1, d + 1):
            for xs in combinations(highs, i):
                for first in range(i):
                    ordered = (xs[first],) + xs[:first] + xs[first + 1:]
                    count = u_double_prime_count(d, ordered)
                    report.check(count == expected_u_double_prime(d, i), f"U'' d={d} i={i}: {count}")
    return report


def suite_builder(ds=(3, 4), max_n: int = 7, cfg: Optional[SearchConfig] = None) -> SuiteReport:
    """Constructive certificates: always valid, present whenever the family is avoided."""
    report = SuiteReport("builder")
    explained = 0
    for g in graphs_up_to(max_n):
        if g.isolated_vertices() or g.universal_vertices():
            continue
        reduction = twin_reduction(g, TwinMode.TRUE_TWINS)
        h = reduction.graph
        for d in ds:
            rep, trace = construct_representation_thm3(h, d)
            avoided = forb_member(h, thm3_family(d)).holds
            if rep is not None:
                report.check(
                    bool(verify_representation(h, rep)) and bool(verify_representation(g, rep.restrict(reduction.class_of))),
                    f"d={d} {emit_graph6(g)} case {trace.case} certificate fails",
                )
                continue
            if not avoided:
                report.passed += 1
                continue
            solver = decide_theta_leq(g, d, d - 2, cfg)
            if trace.case == "3a" and solver.outcome is Outcome.YES:
                explained += 1
                report.passed += 1
                report.lines.append(f"explained d={d} {emit_graph6(g)} case 3a: {trace.note}")
            else:
                report.check(False, f"d={d} {emit_graph6(g)} absent in case {trace.case} "
                                    f"({trace.note}); solver={solver.outcome.value}")
    report.lines.append(f"explained_absences={explained}")
    return report


def suite_formats(max_n: int = 7, cfg: Optional[SearchConfig] = None) -> SuiteReport:
    report = SuiteReport("formats")
    for g in graphs_up_to(max_n, min_n=0):
        text = emit_graph6(g)
        report.check(emit_graph6(parse_graph6(text)) == text and parse_graph6(text) == g,
                     f"graph6 round trip {text}")
    for g in graphs_up_to(min(max_n, 4)):
        rep = theta_p(g, 1, cfg).representation
        text = format_certificate(rep)
        report.check(parse_certificate(text) == rep and format_certificate(parse_certificate(text)) == text,
                     f"certificate round trip {emit_graph6(g)}")
    catalog = enumerate_mfis(1, 1, min(max_n, 5), cfg)
    text = format_catalog(catalog)
    report.check(parse_catalog(text) == catalog, "catalog round trip")
    report.check(format_catalog(enumerate_mfis(1, 1, min(max_n, 5), cfg)) == text, "catalog rerun differs")
    return report


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "thm2": suite_thm2,
    "thm3": suite_thm3,
    "star": suite_star,
    "oracle-p1": suite_oracle_p1,
    "mfis-oracle": suite_mfis_oracle,
    "containment": suite_containment,
    "bounds": suite_bounds,
    "counting": suite_counting,
    "builder": suite_builder,
    "formats": suite_formats,
}


def run_suite(name: str, cfg: Optional[SearchConfig] = None) -> SuiteReport:
    try:
        runner = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    logger.info("running suite %s", name)
    if name == "counting":
        return runner()
    return runner(cfg=cfg)

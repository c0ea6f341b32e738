"""Command-line entry point."""

import argparse
import copy
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import yaml

# Load .env file if present
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

from src.core.characterizations import (
    PreconditionError, thm2_check, thm2_family, thm3_check, thm3_family, verify_star_mfis,
)
from src.core.graph6 import emit_edgelist, emit_graph6, parse_graph6, read_graphs
from src.core.mfis import (
    CatalogFormatError, MembershipOracle, cached_decision, cross_theorem_problems, enumerate_mfis,
    format_catalog, truncate_catalog, verify_catalog,
)
from src.core.models import (
    BinaryRepresentation, ConditionOutcome, Graph, GraphError, MfisCatalog, Outcome, SearchConfig,
    TwinMode,
)
from src.core.named import make_named, parse_named
from src.core.representation import RepresentationError, format_certificate
from src.core.solver import IndeterminateError, decide_theta_leq, theta_p
from src.core.suites import SUITES, run_suite
from src.core.twins import twin_reduction
from src.storage.database import MembershipCache
from src.storage.files import CatalogStorage, CertificateStorage

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3

DEFAULT_CONFIG = {
    "solver": {
        "budget": 10 ** 8,
        "max_dimension": 16,
        "symmetry_breaking": True,
        "randomized_restarts": False,
        "seed": 0,
    },
    "cache": {
        "capacity": 100_000,
        "database": None,
    },
    "catalogs": {
        "directory": "data/catalogs",
    },
    "enumeration": {
        "max_n": 8,
    },
    "logging": {
        "level": "WARNING",
    },
}


def _merge(base: dict, override: dict) -> dict:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> dict:
    """Load configuration from file, then apply environment overrides."""
    paths_to_try = [
        config_path,
        os.environ.get("PINTER_CONFIG"),
        "config.yaml",
        os.path.expanduser("~/.config/pinter/config.yaml"),
    ]

    config = None
    for path in paths_to_try:
        if path and os.path.exists(path):
            with open(path, "r") as f:
                config = _merge(DEFAULT_CONFIG, yaml.safe_load(f) or {})
            break

    # Fall back to defaults
    if config is None:
        config = copy.deepcopy(DEFAULT_CONFIG)

    if os.environ.get("PINTER_BUDGET"):
        config["solver"]["budget"] = int(os.environ["PINTER_BUDGET"])
    if os.environ.get("PINTER_CACHE_DB"):
        config["cache"]["database"] = os.environ["PINTER_CACHE_DB"]
    return config


def setup_logging(level_name: str, verbosity: int) -> None:
    level = getattr(logging, str(level_name).upper(), logging.WARNING)
    if verbosity == 1:
        level = min(level, logging.INFO)
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def exit_status(outcomes) -> int:
    """NO wins over INDETERMINATE, which wins over YES."""
    outcomes = set(outcomes)
    if Outcome.NO in outcomes:
        return EXIT_NO
    return EXIT_INDETERMINATE if Outcome.INDETERMINATE in outcomes else EXIT_OK


def _decide_one(job: tuple[str, int, int, dict]) -> tuple[Outcome, Optional[BinaryRepresentation]]:
    graph6, d, p, cfg = job
    result = decide_theta_leq(parse_graph6(graph6), d, p, SearchConfig.from_dict(cfg))
    return result.outcome, result.representation


class App:
    """Holds configuration and runs one subcommand."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = load_config(args.config)
        setup_logging(self.config["logging"]["level"], args.verbose)
        self.search = self._search_config()

    def _membership_store(self) -> Optional[MembershipCache]:
        path = self.config["cache"]["database"]
        return MembershipCache(path) if path else None

    def _search_config(self) -> SearchConfig:
        solver = self.config["solver"]
        budget = self.args.budget if self.args.budget is not None else solver["budget"]
        return SearchConfig(
            node_budget=int(budget),
            max_dimension=int(solver["max_dimension"]),
            symmetry_breaking=bool(solver["symmetry_breaking"]),
            randomized_restarts=bool(solver["randomized_restarts"]),
            seed=int(solver["seed"]),
        )

    # Input and output

    def _read_input(self) -> list[Graph]:
        source = self.args.input
        text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="ascii")
        graphs = read_graphs(text, self.args.format)
        if not graphs:
            raise GraphError("no graphs in input")
        return graphs

    def _emit(self, index: int, total: int, line: str) -> None:
        prefix = f"[{index}] " if total > 1 else ""
        print(f"{prefix}{line}")

    def _emit_graph(self, g: Graph) -> str:
        return emit_edgelist(g).rstrip("\n") if self.args.format == "edgelist" else emit_graph6(g)

    def _require(self, name: str, minimum: int) -> int:
        value = getattr(self.args, name)
        if value is None:
            raise ValueError(f"--{name.replace('_', '-')} is required")
        if value < minimum:
            raise ValueError(f"--{name.replace('_', '-')} must be at least {minimum}, got {value}")
        return value

    def _write_certificates(self, found: list[tuple[int, BinaryRepresentation]]) -> None:
        out = Path(self.args.out)
        if out.is_dir():
            storage = CertificateStorage(out)
            for index, rep in found:
                storage.save(f"cert-d{rep.d}-p{rep.p}-{index}", rep)
            return
        with open(out, "w", encoding="ascii", newline="\n") as f:
            f.write("".join(format_certificate(rep) for _, rep in found))

    # Commands

    def cmd_decide(self) -> int:
        d = self._require("d", 0)
        p = self._require("p", 1)
        graphs = self._read_input()
        if self.args.parallel and len(graphs) > 1:
            jobs = [(emit_graph6(g), d, p, self.search.to_dict()) for g in graphs]
            with ProcessPoolExecutor() as pool:
                results = list(pool.map(_decide_one, jobs))
        else:
            store = self._membership_store()
            results = []
            for g in graphs:
                result = cached_decision(g, d, p, self.search, store)
                results.append((result.outcome, result.representation))

        found = []
        for index, (outcome, rep) in enumerate(results, start=1):
            self._emit(index, len(graphs), outcome.value)
            if outcome is Outcome.YES:
                found.append((index, rep))
                if not self.args.out:
                    sys.stdout.write(format_certificate(rep))
        if self.args.out and found:
            self._write_certificates(found)

        return exit_status(outcome for outcome, _ in results)

    def cmd_theta(self) -> int:
        p = self._require("p", 1)
        graphs = self._read_input()
        status = EXIT_OK
        found = []
        for index, g in enumerate(graphs, start=1):
            result = theta_p(g, p, self.search)
            if result.value is None:
                self._emit(index, len(graphs), f"theta=INDETERMINATE lower={result.lower} upper={result.upper}")
                status = EXIT_INDETERMINATE
                continue
            self._emit(index, len(graphs), f"theta={result.value}")
            found.append((index, result.representation))
            if not self.args.out:
                sys.stdout.write(format_certificate(result.representation))
        if self.args.out and found:
            self._write_certificates(found)
        return status

    def cmd_recognize(self) -> int:
        theorem = self.args.theorem
        if theorem not in (2, 3):
            raise ValueError("--theorem must be 2 or 3")
        d = self._require("d", theorem)
        mode = TwinMode(self.args.twin_mode)
        graphs = self._read_input()
        failed = indeterminate = rejected = False
        for index, g in enumerate(graphs, start=1):
            try:
                if theorem == 2:
                    verdict = thm2_check(g, d, with_solver=self.args.with_solver, cfg=self.search)
                else:
                    verdict = thm3_check(g, d, with_solver=self.args.with_solver, cfg=self.search,
                                         twin_mode=mode)
            except PreconditionError as e:
                prefix = f"[{index}] " if len(graphs) > 1 else ""
                print(f"{prefix}error: precondition violated: {e}", file=sys.stderr)
                rejected = True
                continue
            for line in verdict.report_lines():
                self._emit(index, len(graphs), line)
            if not verdict.consistent or ConditionOutcome.FAILS in verdict.evaluated():
                failed = True
            elif verdict.any_indeterminate:
                indeterminate = True
        if rejected:
            return EXIT_USAGE
        if failed:
            return EXIT_NO
        return EXIT_INDETERMINATE if indeterminate else EXIT_OK

    def cmd_reduce(self) -> int:
        mode = TwinMode(self.args.twin_mode)
        graphs = self._read_input()
        for index, g in enumerate(graphs, start=1):
            reduction = twin_reduction(g, mode)
            logger.info("classes: %s", " ".join(",".join(map(str, c)) for c in reduction.classes))
            self._emit(index, len(graphs), self._emit_graph(reduction.graph))
        return EXIT_OK

    def cmd_family(self) -> int:
        theorem = self.args.theorem
        if theorem == 2:
            family = thm2_family(self._require("d", 2))
        elif theorem == 3:
            family = thm3_family(self._require("d", 3))
        else:
            raise ValueError("--theorem must be 2 or 3")
        for member in family:
            print(f"{emit_graph6(member.graph)} {member.name}")
        return EXIT_OK

    def cmd_gen(self) -> int:
        g = make_named(parse_named(self.args.input))
        print(self._emit_graph(g))
        return EXIT_OK

    def _reused_catalog(self, d: int, p: int, max_n: int) -> Optional[MfisCatalog]:
        storage = CatalogStorage(self.config["catalogs"]["directory"])
        catalog = storage.get_catalog(d, p, max_n)
        if catalog is not None:
            return catalog
        larger = [c for c in storage.list_for(d, p) if c.max_n > max_n]
        if larger:
            logger.info("truncating the stored max_n=%d catalog", larger[0].max_n)
            return truncate_catalog(larger[0], max_n)
        return None

    def cmd_enumerate_mfis(self) -> int:
        d = self._require("d", 0)
        p = self._require("p", 1)
        if self.args.max_n is None:
            self.args.max_n = int(self.config["enumeration"]["max_n"])
        max_n = self._require("max_n", 0)

        catalog = self._reused_catalog(d, p, max_n) if self.args.reuse else None
        if catalog is None:
            store = self._membership_store()
            oracle = MembershipOracle(d, p, self.search, capacity=int(self.config["cache"]["capacity"]),
                                      store=store)
            catalog = enumerate_mfis(d, p, max_n, self.search, oracle=oracle, parallel=self.args.parallel)
            if store is not None:
                logger.info("membership cache: %s", store.stats())

        if self.args.out:
            out = Path(self.args.out)
            if out.is_dir():
                path = CatalogStorage(out).save_catalog(catalog)
            else:
                path = out
                with open(out, "w", encoding="ascii", newline="\n") as f:
                    f.write(format_catalog(catalog))
            logger.info("catalog written to %s", path)
        else:
            sys.stdout.write(format_catalog(catalog))
        if self.args.save:
            path = CatalogStorage(self.config["catalogs"]["directory"]).save_catalog(catalog)
            logger.info("catalog saved to %s", path)

        if self.args.verify:
            problems = verify_catalog(catalog, self.search) + cross_theorem_problems(catalog)
            for problem in problems:
                print(f"error: {problem}", file=sys.stderr)
            if problems:
                return EXIT_NO
        return EXIT_OK

    def cmd_verify_star(self) -> int:
        d = self._require("d", 1)
        p = self._require("p", 1)
        if p > d:
            raise ValueError(f"--p must not exceed --d, got p={p}, d={d}")
        report = verify_star_mfis(d, p, self.search)
        for line in report.details:
            logger.info(line)
        print(f"MFIS {'confirmed' if report.is_mfis else 'refuted'} k={report.k}")
        return EXIT_OK if report.is_mfis else EXIT_NO

    def cmd_suite(self) -> int:
        report = run_suite(self.args.input, self.search)
        for line in report.lines:
            print(line)
        print(report.summary())
        return EXIT_OK if report.ok else EXIT_NO

    COMMANDS = {
        "decide": cmd_decide,
        "theta": cmd_theta,
        "recognize": cmd_recognize,
        "reduce": cmd_reduce,
        "family": cmd_family,
        "gen": cmd_gen,
        "enumerate-mfis": cmd_enumerate_mfis,
        "verify-star": cmd_verify_star,
        "suite": cmd_suite,
    }

    def run(self) -> int:
        """Run the selected command, mapping errors to exit codes."""
        try:
            return self.COMMANDS[self.args.command](self)
        except IndeterminateError as e:
            print(f"error: {e} (after {e.nodes} nodes)", file=sys.stderr)
            return EXIT_INDETERMINATE
        except PreconditionError as e:
            print(f"error: precondition violated: {e}", file=sys.stderr)
            return EXIT_USAGE
        except (GraphError, RepresentationError, CatalogFormatError, ValueError, OSError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pinter", description="Exact p-intersection number toolkit")
    parser.add_argument("-c", "--config", help="Path to config file", default=None)
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="More diagnostics on stderr (repeatable)")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str, input_help: str = "graph file, '-' for stdin") -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help)
        sub.add_argument("input", nargs="?", default="-", help=input_help)
        sub.add_argument("--d", type=int, default=None, help="dimension")
        sub.add_argument("--p", type=int, default=None, help="threshold")
        sub.add_argument("--max-n", dest="max_n", type=int, default=None, help="largest order to enumerate")
        sub.add_argument("--format", choices=["graph6", "edgelist"], default="graph6")
        sub.add_argument("--budget", type=int, default=None, help="solver node budget")
        sub.add_argument("--out", default=None, help="output file or directory")
        sub.add_argument("--parallel", action="store_true", help="use worker processes")
        sub.add_argument("--theorem", type=int, default=None, choices=[2, 3])
        sub.add_argument("--with-solver", dest="with_solver", action="store_true",
                         help="also evaluate condition (i) with the exact solver")
        sub.add_argument("--twin-mode", dest="twin_mode", default=TwinMode.TRUE_TWINS.value,
                         choices=[m.value for m in TwinMode])
        return sub

    command("decide", "decide Theta_p(G) <= d")
    command("theta", "compute Theta_p(G) exactly")
    command("recognize", "evaluate the Theorem 2 or 3 conditions")
    command("reduce", "twin reduction R(G)")
    command("family", "list a forbidden family")
    command("gen", "build a named graph", input_help="named graph, e.g. star:3 or complete:2+empty:1")
    enumerate_cmd = command("enumerate-mfis", "enumerate minimal forbidden induced subgraphs of G(d,p)")
    enumerate_cmd.add_argument("--save", action="store_true",
                               help="also store the catalog in the configured catalogs directory")
    enumerate_cmd.add_argument("--reuse", action="store_true",
                               help="serve the catalog from the catalogs directory when one covers max_n")
    enumerate_cmd.add_argument("--verify", action="store_true",
                               help="re-check every entry with fresh solver runs")
    command("verify-star", "check K_{1,C(d,p)+1} is a minimal forbidden graph")
    command("suite", "run an acceptance suite", input_help=f"one of {', '.join(SUITES)}")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    app = App(args)
    status = app.run()
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Unit tests for enumeration, minimal forbidden subgraphs, catalogs and suites."""

import shutil
import tempfile
from pathlib import Path

import pytest

from src.core.canonical import canonical_form, canonical_graph
from src.core.mfis import (
    CatalogFormatError, MembershipOracle, cached_decision, catalog_bound_report, class_split,
    corollary1_bound, cross_theorem_problems, enumerate_graphs, enumerate_mfis,
    format_catalog, in_class, is_minimal_forbidden, parse_catalog, theorem1_bound, truncate_catalog,
    verify_catalog,
)
from src.core.models import GraphError, NamedTag, Outcome, SearchConfig
from src.core.named import make_named, spec, union
from src.core.representation import parse_certificate, verify_representation
from src.core.solver import IndeterminateError
from src.core.suites import (
    SUITES, brute_force_member, brute_force_mfis, run_suite, suite_bounds, suite_builder, suite_counting,
    suite_formats, suite_mfis_oracle, suite_oracle_p1, suite_star, suite_thm2, suite_thm3,
)
from src.storage.database import MembershipCache


def named(tag, *params):
    return make_named(spec(tag, *params))


def cert(g):
    return canonical_form(g).graph6


class TestEnumeration:
    """Test graph enumeration up to isomorphism."""

    def test_counts(self):
        assert [len(list(enumerate_graphs(n))) for n in range(7)] == [1, 1, 2, 4, 11, 34, 156]

    def test_pairwise_distinct(self):
        graphs = list(enumerate_graphs(5))
        assert len({cert(g) for g in graphs}) == len(graphs)

    def test_deterministic_order(self):
        first = [g.edge_count for g in enumerate_graphs(4)]
        assert first == sorted(first)
        assert list(enumerate_graphs(4)) == list(enumerate_graphs(4))

    def test_cap(self):
        with pytest.raises(GraphError):
            list(enumerate_graphs(11))


class TestBounds:
    """Test the order bounds."""

    def test_theorem1(self):
        assert theorem1_bound(4, 4) == 81
        assert theorem1_bound(0, 5) == 11
        with pytest.raises(ValueError):
            theorem1_bound(-1, 2)

    def test_corollary1(self):
        assert corollary1_bound(3) == 49
        assert corollary1_bound(1) == 13

    def test_class_split(self):
        assert class_split(3, 2) == (4, 4)
        assert class_split(1, 1) == (1, 1)
        assert class_split(4, 2) == (11, 5)


class TestMembership:
    """Test in_class and is_minimal_forbidden."""

    def test_edgeless_always_inside(self):
        for d, p in ((0, 1), (2, 1), (3, 2)):
            assert in_class(named(NamedTag.EMPTY, 4), d, p)

    def test_known_outsiders(self):
        assert not in_class(named(NamedTag.STAR, 4), 3, 2)
        assert not in_class(named(NamedTag.PATH, 3), 1, 1)

    def test_brute_force_agrees(self):
        for g in enumerate_graphs(4):
            assert in_class(g, 1, 1) == brute_force_member(g, 1, 1)
            assert in_class(g, 2, 1) == brute_force_member(g, 2, 1)

    def test_minimal_forbidden(self):
        assert is_minimal_forbidden(named(NamedTag.STAR, 3), 2, 1)
        assert is_minimal_forbidden(named(NamedTag.STAR, 4), 3, 2)
        assert not is_minimal_forbidden(named(NamedTag.CYCLE, 4), 1, 1)
        assert not is_minimal_forbidden(named(NamedTag.COMPLETE, 4), 2, 2)

    def test_indeterminate_propagates(self):
        oracle = MembershipOracle(3, 1, SearchConfig(node_budget=1))
        with pytest.raises(IndeterminateError):
            oracle(named(NamedTag.PATH, 4))


class TestMembershipOracle:
    """Test the memo and its persistent backing."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def test_hits_and_misses(self):
        oracle = MembershipOracle(2, 1)
        p4 = named(NamedTag.PATH, 4)
        assert not oracle(p4)
        assert not oracle(p4.relabel([3, 1, 2, 0]))
        stats = oracle.stats()
        assert stats["misses"] == 1
        assert stats["hits"] == 1

    def test_eviction(self):
        oracle = MembershipOracle(2, 1, capacity=1)
        oracle(named(NamedTag.PATH, 3))
        oracle(named(NamedTag.PATH, 4))
        assert oracle.stats()["evictions"] == 1
        assert oracle.stats()["size"] == 1

    def test_persistent_store(self):
        store = MembershipCache(Path(self.temp_dir) / "memo.db")
        star = named(NamedTag.STAR, 3)
        oracle = MembershipOracle(2, 1, store=store)
        assert not oracle(star)
        assert store.get(cert(star), 2, 1) is False
        assert store.stats() == {"members": 0, "non_members": 1}

        fresh = MembershipOracle(2, 1, store=store)
        assert not fresh(star)
        assert fresh.stats()["misses"] == 0

    def test_stores_certificates_in_canonical_order(self):
        store = MembershipCache(Path(self.temp_dir) / "memo.db")
        p3 = named(NamedTag.PATH, 3).relabel([1, 2, 0])
        MembershipOracle(2, 1, store=store)(p3)
        text = store.get_certificate(cert(p3), 2, 1)
        assert text.startswith("2 1 3\n")
        form = canonical_form(p3)
        assert verify_representation(canonical_graph(p3), parse_certificate(text))
        assert verify_representation(p3, parse_certificate(text).restrict(form.labeling))

    def test_parallel_level_uses_oracle(self):
        serial_store = MembershipCache(Path(self.temp_dir) / "serial.db")
        parallel_store = MembershipCache(Path(self.temp_dir) / "parallel.db")
        serial = MembershipOracle(2, 1, store=serial_store)
        parallel = MembershipOracle(2, 1, store=parallel_store)
        enumerate_mfis(2, 1, 5, oracle=serial)
        enumerate_mfis(2, 1, 5, oracle=parallel, parallel=True, workers=2)
        assert parallel.stats()["misses"] == serial.stats()["misses"]
        assert parallel_store.stats() == serial_store.stats()

        again = MembershipOracle(2, 1, store=parallel_store)
        enumerate_mfis(2, 1, 5, oracle=again, parallel=True, workers=2)
        assert again.stats()["misses"] == 0


class TestCachedDecision:
    """Test solver decisions backed by the membership cache."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        self.store = MembershipCache(Path(self.temp_dir) / "memo.db")

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def test_without_store(self):
        assert cached_decision(named(NamedTag.PATH, 3), 2, 1).present

    def test_member_round_trip(self):
        g = named(NamedTag.PATH, 4).relabel([3, 0, 2, 1])
        first = cached_decision(g, 3, 1, store=self.store)
        assert first.present
        assert self.store.get(cert(g), 3, 1) is True
        second = cached_decision(g, 3, 1, SearchConfig(node_budget=1), store=self.store)
        assert second.present
        assert verify_representation(g, second.representation)

    def test_bad_certificate_is_resolved(self):
        g = named(NamedTag.PATH, 3)
        self.store.put(cert(g), 2, 1, True, "2 1 3\n11\n11\n11\n")
        result = cached_decision(g, 2, 1, store=self.store)
        assert result.present
        assert verify_representation(g, result.representation)

    def test_indeterminate_not_stored(self):
        g = named(NamedTag.PATH, 4)
        result = cached_decision(g, 3, 1, SearchConfig(node_budget=1), store=self.store)
        assert result.outcome is Outcome.INDETERMINATE
        assert self.store.get(cert(g), 3, 1) is None


class TestEnumerateMfis:
    """Test catalogs of minimal forbidden induced subgraphs."""

    def test_g11_catalog(self):
        catalog = enumerate_mfis(1, 1, 5)
        matching = make_named(union(spec(NamedTag.COMPLETE, 2), spec(NamedTag.COMPLETE, 2)))
        assert catalog.certificates() == {cert(named(NamedTag.PATH, 3)), cert(matching)}
        assert catalog.certificates() == brute_force_mfis(1, 1, 5)

    def test_star_entries(self):
        catalog = enumerate_mfis(2, 1, 5)
        stars = [e for e in catalog.entries if e.graph6 == cert(named(NamedTag.STAR, 3))]
        assert len(stars) == 1
        assert stars[0].name == "K_{1,3}"
        wider = enumerate_mfis(3, 2, 5)
        assert cert(named(NamedTag.STAR, 4)) in wider.certificates()
        assert cross_theorem_problems(wider) == []

    def test_entries_sorted(self):
        catalog = enumerate_mfis(2, 1, 5)
        keys = [(e.order, e.graph6) for e in catalog.entries]
        assert keys == sorted(keys)
        assert catalog.theorem1_bound == theorem1_bound(*class_split(2, 1))
        assert not catalog.exceeds_corollary1

    def test_family_names(self):
        catalog = enumerate_mfis(2, 1, 5)
        names = {e.name for e in catalog.entries if e.name}
        assert "C_4" in names
        assert "P_4" in names

    def test_verify_catalog(self):
        catalog = enumerate_mfis(2, 1, 5)
        assert verify_catalog(catalog) == []
        assert cross_theorem_problems(catalog) == []

    def test_truncate(self):
        assert truncate_catalog(enumerate_mfis(1, 1, 5), 3) == enumerate_mfis(1, 1, 3)
        with pytest.raises(ValueError):
            truncate_catalog(enumerate_mfis(1, 1, 3), 4)

    def test_verify_catalog_reports_problems(self):
        catalog = enumerate_mfis(1, 1, 4)
        extra = f"{cert(named(NamedTag.COMPLETE, 3))} order=3 name=-\n"
        problems = verify_catalog(parse_catalog(format_catalog(catalog) + extra))
        assert problems

    def test_parallel_matches_serial(self):
        serial = enumerate_mfis(2, 1, 5)
        parallel = enumerate_mfis(2, 1, 5, parallel=True, workers=2)
        assert format_catalog(parallel) == format_catalog(serial)

    def test_parameter_checks(self):
        with pytest.raises(GraphError):
            enumerate_mfis(1, 1, 11)
        with pytest.raises(ValueError):
            enumerate_mfis(1, 0, 3)
        with pytest.raises(ValueError):
            enumerate_mfis(0, 1, 4)

    def test_bound_report(self):
        lines = catalog_bound_report(enumerate_mfis(1, 1, 5))
        assert lines[0] == "split |C|=1 |I|=1"
        assert "theorem1_bound=9 violations=0" in lines


class TestCatalogFormat:
    """Test the catalog text format."""

    def test_round_trip(self):
        catalog = enumerate_mfis(1, 1, 5)
        text = format_catalog(catalog)
        assert text.startswith("# mfis d=1 p=1 max_n=5 version=")
        assert parse_catalog(text) == catalog
        assert format_catalog(parse_catalog(text)) == text

    def test_repeatable(self):
        assert format_catalog(enumerate_mfis(1, 1, 4)) == format_catalog(enumerate_mfis(1, 1, 4))

    def test_malformed(self):
        with pytest.raises(CatalogFormatError):
            parse_catalog("")
        with pytest.raises(CatalogFormatError):
            parse_catalog("# catalog\n")
        with pytest.raises(CatalogFormatError):
            parse_catalog("# mfis d=1 p=1 max_n=3 version=0.1.0\nB? order=3\n")
        with pytest.raises(CatalogFormatError):
            parse_catalog("# mfis d=1 p=1 max_n=3 version=0.1.0\nB? order=4 name=-\n")
        with pytest.raises(CatalogFormatError):
            parse_catalog("# mfis d=1 p=1 max_n=3 version=0.1.0\nA! order=2 name=-\n")


class TestSuites:
    """Test the acceptance suites on reduced ranges."""

    def test_registry(self):
        assert set(SUITES) == {
            "thm2", "thm3", "star", "oracle-p1", "mfis-oracle", "containment",
            "bounds", "counting", "builder", "formats",
        }
        with pytest.raises(ValueError):
            run_suite("nope")

    def test_thm2(self):
        report = suite_thm2(ds=(2, 3), max_n=5, solver_ds=(2,), solver_max_n=4)
        assert report.ok, report.lines
        assert report.passed > 0

    def test_thm3(self):
        report = suite_thm3(ds=(3,), max_n=5)
        assert report.ok, report.lines
        assert any(line.startswith("twin_mode=true") for line in report.lines)

    def test_star(self):
        report = suite_star(pairs=((1, 1), (2, 1)))
        assert report.ok
        assert report.summary() == "suite=star passed=2 failed=0"

    def test_oracle_p1(self):
        assert suite_oracle_p1(max_n=4).ok

    def test_mfis_oracle(self):
        assert suite_mfis_oracle(max_n=4).ok

    def test_bounds(self):
        report = suite_bounds(pairs=((1, 1), (2, 1)), max_n=4)
        assert report.ok, report.lines
        assert any("theorem1_bound=" in line for line in report.lines)

    def test_counting(self):
        assert suite_counting(max_d=5).ok

    def test_builder(self):
        report = suite_builder()
        assert report.ok, report.lines

    def test_formats(self):
        assert suite_formats(max_n=4).ok

"""Unit tests for graphs, codecs, named graphs, canonical forms, twins and blow-ups."""

from itertools import combinations, permutations

import networkx as nx
import pytest

from src.core.blowup import blow_up, is_blow_up_of, verify_blow_up_assignment
from src.core.canonical import canonical_form, canonical_graph, is_isomorphic
from src.core.characterizations import claw_pattern
from src.core.graph6 import (
    Graph6Error, emit_edgelist, emit_graph6, parse_edgelist, parse_graph6, read_graphs,
)
from src.core.mfis import enumerate_graphs
from src.core.models import (
    BlowUpPattern, ForbiddenFamily, FamilyMember, Graph, GraphError, NamedTag, Part, TwinMode,
)
from src.core.named import NamedGraphError, disjoint_union, make_named, parse_named, spec, union
from src.core.subgraphs import forb_member, induced_contains, is_clique, max_clique, verify_embedding
from src.core.twins import strip_isolated_universal, twin_partition, twin_reduction


def named(tag, *params):
    return make_named(spec(tag, *params))


class TestGraph:
    """Test the adjacency-row graph value."""

    def test_from_edges(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        assert g.edge_count == 3
        assert g.edges() == [(0, 1), (1, 2), (2, 3)]
        assert g.degrees() == (1, 2, 2, 1)
        assert g.has_edge(2, 1)
        assert not g.has_edge(0, 3)

    def test_invariants_are_checked(self):
        with pytest.raises(GraphError):
            Graph(n=2, adj=(0b10, 0))
        with pytest.raises(GraphError):
            Graph(n=2, adj=(0b01, 0))
        with pytest.raises(GraphError):
            Graph(n=2, adj=(0b110, 0b1))
        with pytest.raises(GraphError):
            Graph.from_edges(2, [(0, 0)])
        with pytest.raises(GraphError):
            Graph.empty(513)

    def test_induced_and_delete(self):
        g = named(NamedTag.CYCLE, 5)
        path = g.delete_vertex(0)
        assert path.n == 4
        assert path.edge_count == 3
        sub = g.induced([2, 0, 1])
        assert sub.has_edge(1, 2)
        assert sub.has_edge(0, 2)
        assert not sub.has_edge(0, 1)

    def test_add_vertex(self):
        g = Graph.empty(2).add_vertex(0b11)
        assert g.n == 3
        assert g.edges() == [(0, 2), (1, 2)]
        with pytest.raises(GraphError):
            Graph.empty(2).add_vertex(0b100)

    def test_queries(self):
        g = disjoint_union(named(NamedTag.STAR, 2), Graph.empty(1))
        assert g.isolated_vertices() == [3]
        assert g.universal_vertices() == []
        assert g.components() == [[0, 1, 2], [3]]
        assert named(NamedTag.STAR, 3).universal_vertices() == [0]

    def test_complement_and_relabel(self):
        g = named(NamedTag.PATH, 4)
        assert g.complement().edge_count == 3
        assert is_isomorphic(g.complement(), g)
        assert g.relabel([3, 2, 1, 0]) == g

    def test_networkx_round_trip(self):
        g = named(NamedTag.K23_PLUS_E)
        assert Graph.from_networkx(g.to_networkx()) == g


class TestGraph6:
    """Test graph6 and edge-list codecs."""

    def test_single_vertex(self):
        g = parse_graph6("@")
        assert g.n == 1
        assert g.edge_count == 0

    def test_round_trip_known_string(self):
        g = parse_graph6("D?{")
        assert g.n == 5
        assert emit_graph6(g) == "D?{"

    def test_emit_small_graphs(self):
        assert emit_graph6(named(NamedTag.COMPLETE, 2)) == "A_"
        assert emit_graph6(Graph.empty(3)) == "B?"
        assert parse_graph6(">>graph6<<A_") == named(NamedTag.COMPLETE, 2)

    def test_round_trip_enumerated(self):
        for n in range(0, 6):
            for g in enumerate_graphs(n):
                text = emit_graph6(g)
                assert parse_graph6(text) == g
                assert emit_graph6(parse_graph6(text)) == text

    def test_errors_name_offsets(self):
        with pytest.raises(Graph6Error) as e:
            parse_graph6("")
        assert e.value.offset == 0
        with pytest.raises(Graph6Error) as e:
            parse_graph6("A")
        assert e.value.offset == 1
        with pytest.raises(Graph6Error) as e:
            parse_graph6("A!")
        assert e.value.offset == 1
        with pytest.raises(Graph6Error) as e:
            parse_graph6("A__")
        assert e.value.offset == 2
        with pytest.raises(Graph6Error) as e:
            parse_graph6("A`")
        assert "padding" in str(e.value)
        with pytest.raises(Graph6Error):
            parse_graph6("~?G@")

    def test_edgelist(self):
        graphs = parse_edgelist("# a path\n3 2\n0 1\n1 2\n\n2 0\n")
        assert len(graphs) == 2
        assert graphs[0] == named(NamedTag.PATH, 3)
        assert graphs[1] == Graph.empty(2)
        assert parse_edgelist(emit_edgelist(graphs[0])) == [graphs[0]]

    def test_edgelist_errors(self):
        with pytest.raises(GraphError):
            parse_edgelist("3 2\n0 1\n")
        with pytest.raises(GraphError):
            parse_edgelist("2 1\n0 5\n")
        with pytest.raises(GraphError):
            parse_edgelist("2 x\n")

    def test_read_graphs(self):
        graphs = read_graphs(">>graph6<<\n@\n\nA_\n")
        assert [g.n for g in graphs] == [1, 2]
        with pytest.raises(Graph6Error) as e:
            read_graphs("@\nA!\n")
        assert "line 2" in str(e.value)


class TestNamedGraphs:
    """Test the named-graph constructors."""

    def test_star_is_clique_with_pendants(self):
        for t in range(1, 6):
            assert is_isomorphic(named(NamedTag.CLIQUE_PENDANTS, 2, t - 1), named(NamedTag.STAR, t))

    def test_k23_plus_e(self):
        g = named(NamedTag.K23_PLUS_E)
        assert g.n == 5
        assert g.edge_count == 7
        assert g.has_edge(0, 1)
        assert all(g.has_edge(a, b) for a in (0, 1) for b in (2, 3, 4))

    def test_triangle_pendants(self):
        g = named(NamedTag.TRIANGLE_PENDANTS_11, 2)
        assert g.n == 7
        assert g.degrees()[:3] == (4, 3, 3)
        assert g.degrees()[3:] == (1, 1, 1, 1)
        h = named(NamedTag.TRIANGLE_PENDANTS_1, 1)
        assert h.n == 5
        assert h.edge_count == 6
        assert h.neighbors(4) == [1, 2]

    def test_diamond_pendants(self):
        g = named(NamedTag.DIAMOND_PENDANTS, 2)
        assert g.n == 6
        assert g.degree(0) == 5
        assert not g.has_edge(2, 3)

    def test_complete_minus_edge(self):
        g = named(NamedTag.COMPLETE_MINUS_EDGE, 5)
        assert g.edge_count == 9
        assert not g.has_edge(3, 4)

    def test_names(self):
        assert spec(NamedTag.STAR, 3).name == "K_{1,3}"
        assert spec(NamedTag.COMPLETE, 12).name == "K_{12}"
        assert spec(NamedTag.EMPTY, 4).name == "coK_4"
        assert spec(NamedTag.TRIANGLE_PENDANTS_11, 2).name == "K_3^{+(2,1,1)}"
        assert union(spec(NamedTag.COMPLETE, 2), spec(NamedTag.EMPTY, 1)).name == "K_2|coK_1"
        assert union(spec(NamedTag.COMPLETE, 2), spec(NamedTag.COMPLETE, 2), label="2K_2").name == "2K_2"

    def test_disjoint_union(self):
        g = disjoint_union(named(NamedTag.COMPLETE, 2), Graph.empty(1))
        assert (g.n, g.edge_count) == (3, 1)
        p4 = named(NamedTag.PATH, 4)
        assert disjoint_union(p4, Graph.empty(0)) == p4
        matching = make_named(union(spec(NamedTag.COMPLETE, 2), spec(NamedTag.COMPLETE, 2)))
        assert matching.edges() == [(0, 1), (2, 3)]

    def test_invalid_parameters(self):
        with pytest.raises(NamedGraphError):
            named(NamedTag.CYCLE, 2)
        with pytest.raises(NamedGraphError):
            named(NamedTag.COMPLETE_MINUS_EDGE, 1)
        with pytest.raises(NamedGraphError):
            make_named(spec(NamedTag.STAR))
        with pytest.raises(NamedGraphError):
            named(NamedTag.EMPTY, 600)

    def test_parse_named(self):
        g = make_named(parse_named("star:3+empty:2"))
        assert (g.n, g.edge_count) == (6, 3)
        with pytest.raises(NamedGraphError):
            parse_named("octopus:3")
        with pytest.raises(NamedGraphError):
            parse_named("")


class TestCanonicalForm:
    """Test canonical labeling and isomorphism."""

    def test_invariant_under_relabeling(self):
        g = named(NamedTag.PATH, 4)
        expected = canonical_form(g).certificate
        for perm in permutations(range(4)):
            assert canonical_form(g.relabel(perm)).certificate == expected

    def test_distinguishes_non_isomorphic(self):
        assert canonical_form(named(NamedTag.CYCLE, 4)) != canonical_form(named(NamedTag.STAR, 3))

    def test_eleven_graphs_on_four_vertices(self):
        pairs = list(combinations(range(4), 2))
        certificates = set()
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            certificates.add(canonical_form(Graph.from_edges(4, edges)).certificate)
        assert len(certificates) == 11

    def test_canonical_graph_matches_certificate(self):
        g = named(NamedTag.K23_PLUS_E)
        assert emit_graph6(canonical_graph(g)) == canonical_form(g).graph6

    def test_generators_are_automorphisms(self):
        for g in (named(NamedTag.CYCLE, 6), named(NamedTag.STAR, 4), named(NamedTag.COMPLETE, 4)):
            for perm in canonical_form(g).generators:
                assert g.relabel(perm) == g

    def test_orbits_partition_vertices(self):
        g = named(NamedTag.STAR, 3)
        orbits = canonical_form(g).orbits()
        assert sorted(v for orbit in orbits for v in orbit) == [0, 1, 2, 3]
        assert [0] in orbits

    def test_agrees_with_networkx(self):
        graphs = list(enumerate_graphs(5))
        assert len(graphs) == 34
        for g, h in combinations(graphs, 2):
            assert not nx.is_isomorphic(g.to_networkx(), h.to_networkx())


class TestSubgraphs:
    """Test induced-subgraph search and cliques."""

    def test_induced_contains(self):
        c4 = named(NamedTag.CYCLE, 4)
        p3 = named(NamedTag.PATH, 3)
        phi = induced_contains(c4, p3)
        assert phi is not None
        assert verify_embedding(c4, p3, phi)
        assert induced_contains(named(NamedTag.COMPLETE, 4), p3) is None

    def test_induced_is_not_plain_subgraph(self):
        p4 = named(NamedTag.PATH, 4)
        matching = make_named(union(spec(NamedTag.COMPLETE, 2), spec(NamedTag.COMPLETE, 2)))
        assert induced_contains(p4, matching) is None
        assert induced_contains(named(NamedTag.CYCLE, 5), p4) is not None

    def test_empty_pattern(self):
        assert induced_contains(named(NamedTag.PATH, 3), Graph.empty(0)) == ()
        assert induced_contains(Graph.empty(2), Graph.empty(3)) is None

    def test_forb_member(self):
        fam = ForbiddenFamily(d=2, members=(
            FamilyMember("C_4", named(NamedTag.CYCLE, 4)),
            FamilyMember("P_4", named(NamedTag.PATH, 4)),
        ))
        check = forb_member(named(NamedTag.CYCLE, 5), fam)
        assert not check.holds
        assert check.name == "P_4"
        assert forb_member(named(NamedTag.STAR, 4), fam).holds

    def test_max_clique(self):
        assert max_clique(named(NamedTag.COMPLETE, 4)) == (0, 1, 2, 3)
        assert max_clique(Graph.empty(3)) == (0,)
        assert max_clique(Graph.empty(0)) == ()
        assert max_clique(named(NamedTag.PATH, 4)) == (1, 2)
        for g in enumerate_graphs(5):
            assert is_clique(g, max_clique(g))
        assert not is_clique(named(NamedTag.PATH, 3), (0, 1, 2))


class TestTwins:
    """Test twin partitions and reductions."""

    def test_partitions(self):
        assert twin_partition(named(NamedTag.COMPLETE, 3)) == ((0, 1, 2),)
        assert twin_partition(named(NamedTag.STAR, 3), TwinMode.OPEN_TWINS) == ((0,), (1, 2, 3))
        assert twin_partition(named(NamedTag.PATH, 3)) == ((0,), (1,), (2,))

    def test_reduce_clique(self):
        reduction = twin_reduction(named(NamedTag.COMPLETE, 7))
        assert reduction.graph.n == 1
        assert emit_graph6(reduction.graph) == "@"
        assert reduction.class_of == (0,) * 7

    def test_both_iterates(self):
        star = named(NamedTag.STAR, 3)
        assert twin_reduction(star, TwinMode.TRUE_TWINS).graph.n == 4
        assert twin_reduction(star, TwinMode.OPEN_TWINS).graph.n == 2
        both = twin_reduction(star, TwinMode.BOTH)
        assert both.graph.n == 1
        assert both.classes == ((0, 1, 2, 3),)

    def test_reduction_is_induced_on_representatives(self):
        g = make_named(parse_named("complete:3+complete:2"))
        reduction = twin_reduction(g)
        assert reduction.classes == ((0, 1, 2), (3, 4))
        assert reduction.graph == Graph.empty(2)

    def test_strip_isolated_universal(self):
        g = disjoint_union(named(NamedTag.STAR, 3), Graph.empty(1))
        rest, peeled = strip_isolated_universal(g)
        assert rest.n == 0
        assert peeled == [(4, "isolated"), (0, "universal"), (1, "isolated"), (2, "isolated"), (3, "isolated")]
        unchanged, none = strip_isolated_universal(named(NamedTag.PATH, 4))
        assert unchanged.n == 4 and none == []


class TestBlowUp:
    """Test blow-up construction and recognition."""

    def test_blow_up_edge(self):
        pattern = BlowUpPattern(base=named(NamedTag.COMPLETE, 2), parts=(Part.CLIQUE, Part.INDEPENDENT),
                                sizes=(2, 3))
        g = blow_up(pattern)
        assert is_isomorphic(g, named(NamedTag.K23_PLUS_E))

    def test_empty_bags(self):
        pattern = BlowUpPattern.uniform(named(NamedTag.PATH, 3)).with_sizes((0, 2, 0))
        assert blow_up(pattern) == named(NamedTag.COMPLETE, 2)

    def test_recognizes_own_blow_ups(self):
        base = named(NamedTag.PATH, 3)
        pattern = BlowUpPattern(base=base, parts=(Part.INDEPENDENT, Part.CLIQUE, Part.INDEPENDENT),
                                sizes=(2, 3, 1))
        g = blow_up(pattern)
        phi = is_blow_up_of(g, pattern)
        assert phi is not None
        assert verify_blow_up_assignment(g, pattern, phi)

    def test_claw_pattern(self):
        pattern = claw_pattern(3)
        assert is_blow_up_of(named(NamedTag.STAR, 3), pattern) is not None
        assert is_blow_up_of(named(NamedTag.CYCLE, 4), claw_pattern(2)) is None
        assert is_blow_up_of(Graph.empty(0), pattern) == ()

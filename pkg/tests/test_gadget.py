import networkx as nx
import pytest

from excheck import gadget as gd
from excheck.errors import BudgetExceeded, CapExceeded, InvalidArgument, InvalidParameter
from oracles import brute_chromatic, to_networkx


@pytest.fixture(scope="module")
def G1():
    return gd.build_graph(1)


@pytest.mark.parametrize("m", range(1, 9))
def test_structure_counts(m):
    G = gd.build_graph(m)
    leaves = len(G.leaf_blocks())
    assert leaves == 3 * m + 5
    assert G.vertex_count == 20 * m + 31
    assert G.edge_count == 36 * m + 55
    assert len(G.nbrs[G.v]) == 4 * leaves
    # degree sum: 3 per pentagon vertex except the spine's free ones, plus v
    assert sum(len(s) for s in G.nbrs) == 2 * G.edge_count
    H = to_networkx(G)
    assert nx.is_connected(H)


def test_example_degrees(G1):
    assert (G1.vertex_count, len(G1.blocks), G1.edge_count) == (51, 10, 91)
    # every non-v vertex has degree 3: pentagon (2) plus one external edge
    assert all(len(G1.nbrs[i]) == 3 for i in range(G1.vertex_count) if i != G1.v)
    G2 = gd.build_graph(2)
    # leaves 4 + 3 + 4 = 11, consistent with 71 = 5 * 14 + 1
    assert G2.vertex_count == 71 and len(G2.leaf_blocks()) == 11
    assert len(G2.nbrs[G2.v]) == 44


def test_vertex_ids_are_structured(G1):
    spine0 = gd.BlockId("S", 0)
    leaf = gd.BlockId("L", 0, "a")
    a = G1.index[gd.VertexId(spine0, "a")]
    A = G1.index[gd.VertexId(leaf, "A")]
    assert A in G1.nbrs[a]
    assert A not in G1.nbrs[G1.v]
    assert G1.index[gd.VertexId(leaf, "B")] in G1.nbrs[G1.v]
    c0 = G1.index[gd.VertexId(spine0, "c")]
    a1 = G1.index[gd.VertexId(gd.BlockId("S", 1), "a")]
    assert a1 in G1.nbrs[c0]


def test_leaf_letters():
    assert gd.leaf_letters(0, 3) == "abde"
    assert gd.leaf_letters(2, 3) == "bde"
    assert gd.leaf_letters(3, 3) == "bcde"


def test_bad_m():
    with pytest.raises(InvalidParameter):
        gd.build_graph(0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_k4_free_routes_agree_with_networkx(m):
    G = gd.build_graph(m)
    assert gd.check_k4_free(G)
    assert not gd.has_k4(G)
    assert max(len(c) for c in nx.find_cliques(to_networkx(G))) == 3


def test_k4_detected():
    K4 = gd.complete_graph(4)
    assert gd.has_k4(K4) and not gd.check_k4_free(K4)


@pytest.mark.parametrize("graph,chi", [
    (gd.pentagon(), 3),
    (gd.complete_graph(4), 4),
    (gd.complete_graph(2), 2),
    (gd.from_edges([(0, 1), (1, 2), (2, 3)]), 2),
    # Groetzsch graph: triangle-free and 4-chromatic
    (gd.from_edges([(i, (i + 1) % 5) for i in range(5)]
                   + [(i, 5 + (i + 1) % 5) for i in range(5)] + [(i, 5 + (i - 1) % 5) for i in range(5)]
                   + [(5 + i, 10) for i in range(5)]), 4),
    # odd wheel W5
    (gd.from_edges([(i, (i + 1) % 5) for i in range(5)] + [(i, 5) for i in range(5)]), 4),
])
def test_chromatic_small_graphs(graph, chi):
    res = gd.chromatic_number(graph)
    assert res.chi == chi
    assert gd.is_proper_coloring(graph, res.coloring)
    if graph.vertex_count <= 8:
        assert brute_chromatic(graph.vertex_count, graph.edges()) == chi
    for probing in (True, False):
        assert not gd.color_search(graph, chi - 1, probing=probing).satisfiable


@pytest.mark.parametrize("m", [1, 2, 3])
def test_gadget_is_4_chromatic(m):
    G = gd.build_graph(m)
    res = gd.chromatic_number(G)
    assert res.chi == 4
    assert gd.is_proper_coloring(G, res.coloring)
    cert = res.unsat_certificate
    assert cert.colors == 3 and not cert.satisfiable and cert.nodes >= 1


@pytest.mark.parametrize("m", [1, 2])
def test_plain_backtracking_also_refutes_3_colouring(m):
    res = gd.color_search(gd.build_graph(m), 3, probing=False)
    assert not res.satisfiable and res.nodes > 1


def test_budget_exceeded_reports_partial():
    with pytest.raises(BudgetExceeded) as info:
        gd.chromatic_number(gd.build_graph(2), node_budget=10, probing=False)
    assert info.value.partial["nodes"] > 10


def test_improper_colouring_rejected(G1):
    assert not gd.is_proper_coloring(G1, [0] * G1.vertex_count)
    assert not gd.is_proper_coloring(G1, None)


def test_leaf_forcing_every_leaf():
    G = gd.build_graph(3)
    assert all(gd.leaf_forcing_holds(G, b) for b in G.leaf_blocks())


def test_propagation_rules():
    assert gd.propagation_holds() == {"through": True, "terminal": True}


def test_degeneracy_examples(G1):
    res = gd.is_2_degenerate(G1)
    assert not res and len(res.core) == 51
    assert gd.is_2_degenerate(gd.from_edges([])).degenerate
    assert gd.is_2_degenerate(gd.pentagon()).degenerate


@pytest.mark.parametrize("m", [1, 2, 3])
def test_every_edge_deletion_is_2_degenerate(m):
    G = gd.build_graph(m)
    assert gd.all_proper_subgraphs_3colorable(G)
    H = to_networkx(G)
    for u, w in list(G.edges())[::7]:
        H2 = H.copy()
        H2.remove_edge(u, w)
        assert max(nx.core_number(H2).values()) <= 2


def test_peeling_order_is_a_certificate(G1):
    u, w = G1.edges()[0]
    res = gd.is_2_degenerate(G1, skip_edge=(u, w))
    assert sorted(res.order) == list(range(G1.vertex_count))
    removed = set()
    for x in res.order:
        live = {y for y in G1.nbrs[x] if y not in removed and {x, y} != {u, w}}
        assert len(live) <= 2
        removed.add(x)


def test_k4_minus_edge_is_degenerate():
    # the op reports degeneracy, not 4-criticality
    assert gd.all_proper_subgraphs_3colorable(gd.complete_graph(4))


def test_pentagon_cycle_has_no_chords():
    P = gd.pentagon()
    cycles = list(gd.enumerate_cycles(P))
    assert len(cycles) == 1 and cycles[0].chord_count == 0


def test_cycles_of_k4():
    cycles = list(gd.enumerate_cycles(gd.complete_graph(4)))
    # 4 triangles and 3 four-cycles, each four-cycle with 2 chords
    assert sorted(len(c.vertices) for c in cycles) == [3] * 4 + [4] * 3
    assert max(c.chord_count for c in cycles) == 2


def test_cycles_avoiding_v_are_pentagons(G1):
    avoid = [c for c in gd.enumerate_cycles(G1) if G1.v not in c.vertices]
    assert len(avoid) == 10
    assert all(len(c.vertices) == 5 and c.chord_count == 0 for c in avoid)


def test_enumerators_agree_at_m1(G1):
    generic = {c.edge_set() for c in gd.enumerate_cycles(G1)}
    structured = [c.edge_set() for c in gd.enumerate_cycles_structured(G1)]
    assert len(structured) == len(set(structured))
    assert generic == set(structured)


def test_cycle_count_matches_networkx(G1):
    assert sum(1 for _ in nx.simple_cycles(to_networkx(G1))) == sum(1 for _ in gd.enumerate_cycles(G1))


@pytest.mark.parametrize("m", [1, 2])
def test_max_chords_at_most_ten(m):
    G = gd.build_graph(m)
    gen = gd.max_chords(G)
    st = gd.max_chords(G, structured=True)
    assert gen["max_chords"] == st["max_chords"] <= 10
    assert gen["cycles"] == st["cycles"]


def test_structured_enumerator_scales_to_m3():
    assert gd.max_chords(gd.build_graph(3), structured=True)["max_chords"] <= 10


def test_chord_count_is_consistent(G1):
    for rec in list(gd.enumerate_cycles(G1))[::97]:
        vs = rec.vertices
        cyc = set(vs)
        n = len(vs)
        chords = sum(1 for i in range(n) for j in range(i + 2, n)
                     if not (i == 0 and j == n - 1) and vs[j] in G1.nbrs[vs[i]])
        assert chords == rec.chord_count
        for a, b in zip(vs, vs[1:] + vs[:1]):
            assert b in G1.nbrs[a]
        assert len(cyc) == n


def test_chord_attribution():
    G = gd.build_graph(2)
    for rec in gd.enumerate_cycles(G):
        if G.v not in rec.vertices:
            continue
        br = gd.chord_breakdown(G, rec.vertices)
        assert br["cross"] == 0
        lo, hi = br["spine_range"] or (None, None)
        for block, c in br["counts"].items():
            if block.kind == "L":
                assert c <= 4
            elif block.i in (lo, hi):
                assert c <= 1
            else:
                assert c == 0
        assert sum(br["counts"].values()) == rec.chord_count


def test_cap_exceeded_carries_partial(G1):
    with pytest.raises(CapExceeded) as info:
        gd.max_chords(G1, cap=100)
    assert info.value.partial >= 0
    with pytest.raises(InvalidArgument):
        list(gd.enumerate_cycles(G1, cap=0))


def test_dot_labels(G1):
    dot = gd.to_dot(G1)
    assert dot.startswith("graph G {")
    assert '"S0.a" -- "S0.b"' in dot
    assert '"L0.a.A"' in dot and '"v"' in dot
    assert dot.count("--") == 91

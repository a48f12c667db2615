from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk.errors import InputError, PreconditionError
from qwalk.graph_core import (
    antipode,
    from_edge_list,
    from_json,
    generate,
    incidence,
    is_connected,
    is_isomorphic_bruteforce,
    line_graph,
    parse_generator_spec,
    q_graph,
    regularity,
    signless_laplacian,
    to_json,
)

from conftest import REGULAR_INSTANCES


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(2, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return from_edge_list(n, chosen)


class TestFromEdgeList:
    def test_c4(self):
        g = from_edge_list(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        assert g.m == 4
        assert g.edges == ((0, 1), (0, 3), (1, 2), (2, 3))
        assert (g.adjacency.sum(axis=1) == 2).all()

    def test_k2(self):
        g = from_edge_list(2, [(0, 1)])
        assert g.m == 1 and g.adjacency.tolist() == [[0, 1], [1, 0]]

    def test_duplicate_either_orientation(self):
        with pytest.raises(InputError, match="duplicate"):
            from_edge_list(4, [(0, 1), (1, 0)])

    @pytest.mark.parametrize("pairs", [[(0, 4)], [(-1, 2)], [(2, 2)]])
    def test_bad_pairs(self, pairs):
        with pytest.raises(InputError):
            from_edge_list(4, pairs)

    def test_json_roundtrip(self):
        g = generate("petersen")
        assert from_json(to_json(g)) == g
        assert to_json(from_edge_list(3, [(2, 1), (1, 0)])) == '{"n":3,"edges":[[0,1],[1,2]]}'

    @pytest.mark.parametrize("text", ["{", '{"n": 2}', '{"n": "x", "edges": []}', "[]"])
    def test_bad_json(self, text):
        with pytest.raises(InputError):
            from_json(text)


class TestGenerate:
    def test_hypercube2_is_c4(self):
        q2 = generate("hypercube", 2)
        assert (q2.n, q2.m) == (4, 4)
        assert is_isomorphic_bruteforce(q2, generate("cycle", 4))
        assert q2.labels == ("00", "01", "10", "11")

    def test_cocktail2_is_c4(self):
        g = generate("cocktail", 2)
        assert regularity(g).degree == 2
        assert is_isomorphic_bruteforce(g, generate("cycle", 4))

    def test_cocktail_is_complete_minus_matching(self):
        g = generate("cocktail", 4)
        missing = set(combinations(range(8), 2)) - set(g.edges)
        assert missing == {(0, 1), (2, 3), (4, 5), (6, 7)}

    def test_halved_hypercube2(self):
        words = [w for w in range(16) if bin(w).count("1") % 2 == 0]
        per_vertex = [sum(bin(w ^ x).count("1") == 2 for x in words) for w in words]
        assert per_vertex == [6] * 8
        g = generate("halved_hypercube", 2)
        assert g.n == 8 and regularity(g).degree == 6
        assert g.m == sum(per_vertex) // 2

    def test_petersen(self):
        g = generate("petersen")
        info = regularity(g)
        assert (g.n, g.m, info.degree, info.is_bipartite) == (10, 15, 3, False)

    @pytest.mark.parametrize(
        "family,param", [("hypercube", 0), ("cocktail", 1), ("cycle", 2), ("path", 1), ("complete", 1), ("nope", 3)]
    )
    def test_bounds(self, family, param):
        with pytest.raises(InputError):
            generate(family, param)

    def test_spec_parsing(self):
        assert parse_generator_spec("hypercube:3") == ("hypercube", 3)
        assert parse_generator_spec("petersen") == ("petersen", None)
        with pytest.raises(InputError):
            parse_generator_spec("cycle:x")

    def test_antipodes(self):
        assert antipode("hypercube", 3, 0) == 7
        hh = generate("halved_hypercube", 2)
        assert hh.labels[antipode("halved_hypercube", 2, 0)] == "1111"
        assert antipode("cocktail", 3, 4) == 5
        assert antipode("cycle", 6, 1) == 4


class TestMatrices:
    def test_incidence_k2(self):
        assert incidence(generate("complete", 2)).tolist() == [[1], [1]]

    def test_incidence_c4_rows(self):
        R = incidence(generate("cycle", 4))
        assert R.shape == (4, 4)
        assert (R.sum(axis=1) == 2).all() and (R.sum(axis=0) == 2).all()

    def test_petersen_rrt(self):
        g = generate("petersen")
        R = incidence(g)
        assert R.shape == (10, 15)
        assert np.array_equal(R @ R.T, g.adjacency + 3 * np.eye(10, dtype=int))

    def test_signless_small(self):
        assert signless_laplacian(generate("complete", 2)).tolist() == [[1, 1], [1, 1]]
        c4 = generate("cycle", 4)
        assert np.array_equal(signless_laplacian(c4), 2 * np.eye(4, dtype=int) + c4.adjacency)
        assert sorted(np.linalg.eigvalsh(signless_laplacian(generate("path", 2))).round(12)) == [0, 2]

    def test_matrices_are_integer(self):
        g = generate("hypercube", 3)
        assert incidence(g).dtype.kind == "i" and signless_laplacian(g).dtype.kind == "i"


class TestLineAndQGraph:
    def test_line_graph_examples(self):
        assert is_isomorphic_bruteforce(line_graph(generate("cycle", 4)), generate("cycle", 4))
        k1 = line_graph(generate("complete", 2))
        assert (k1.n, k1.m) == (1, 0)
        assert line_graph(generate("path", 3)) == generate("complete", 2)

    def test_qgraph_k2_is_p3(self):
        qg = q_graph(generate("complete", 2))
        assert is_isomorphic_bruteforce(qg.graph, generate("path", 3))

    def test_qgraph_c4(self):
        qg = q_graph(generate("cycle", 4))
        g = qg.graph
        assert g.n == 8
        sub = g.adjacency[4:, 4:]
        assert np.array_equal(sub, line_graph(generate("cycle", 4)).adjacency)
        assert (sub.sum(axis=1) == 2).all()
        assert not g.adjacency[:4, :4].any()

    def test_qgraph_k4(self):
        qg = q_graph(generate("complete", 4))
        assert qg.graph.n == 10
        assert (qg.graph.adjacency[4:, 4:].sum(axis=1) == 4).all()

    def test_roles(self):
        qg = q_graph(generate("cycle", 4))
        assert qg.roles[:4] == tuple(("vertex", i) for i in range(4))
        assert qg.roles[4] == ("edge", (0, 1))
        assert qg.role_name(5) == "e0-3"

    def test_empty_edge_set(self):
        with pytest.raises(PreconditionError):
            q_graph(from_edge_list(3, []))

    @pytest.mark.parametrize("name,g", REGULAR_INSTANCES[::7])
    def test_block_form(self, name, g):
        r = regularity(g).degree
        R = incidence(g)
        expected = np.block(
            [[r * np.eye(g.n, dtype=int), R], [R.T, 2 * r * np.eye(g.m, dtype=int) + line_graph(g).adjacency]]
        )
        assert np.array_equal(signless_laplacian(q_graph(g).graph), expected)


class TestRegularity:
    def test_examples(self):
        c4 = regularity(generate("cycle", 4))
        assert (c4.is_regular, c4.degree, c4.is_bipartite) == (True, 2, True)
        assert c4.bipartition == ((0, 2), (1, 3))
        k4 = regularity(generate("complete", 4))
        assert (k4.is_regular, k4.degree, k4.is_bipartite) == (True, 3, False)
        assert not regularity(generate("path", 3)).is_regular

    @pytest.mark.parametrize("name,g", [x for x in REGULAR_INSTANCES if regularity(x[1]).is_bipartite])
    def test_regular_bipartite_halves(self, name, g):
        v1, v2 = regularity(g).bipartition
        assert len(v1) == len(v2) == g.n // 2

    def test_connectivity(self):
        assert is_connected(generate("petersen"))
        assert not is_connected(from_edge_list(4, [(0, 1), (2, 3)]))


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_incidence_identities(g):
    R = incidence(g)
    assert np.array_equal(R @ R.T, signless_laplacian(g))
    assert np.array_equal(R.T @ R - 2 * np.eye(g.m, dtype=int), line_graph(g).adjacency)
    if g.m:
        qg = q_graph(g).graph
        assert qg.n == g.n + g.m
        assert qg.m == 2 * g.m + line_graph(g).m


@settings(max_examples=30, deadline=None)
@given(graphs(), st.randoms())
def test_edge_order_is_canonical(g, rnd):
    pairs = [(v, u) if rnd.random() < 0.5 else (u, v) for u, v in g.edges]
    rnd.shuffle(pairs)
    h = from_edge_list(g.n, pairs)
    assert np.array_equal(incidence(h), incidence(g))


@pytest.mark.parametrize("name,g", REGULAR_INSTANCES)
def test_generated_identities(name, g):
    R = incidence(g)
    assert not (R @ R.T - signless_laplacian(g)).any()
    assert not (R.T @ R - 2 * np.eye(g.m, dtype=int) - line_graph(g).adjacency).any()

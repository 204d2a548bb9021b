import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from synchro import graphs
from synchro.graphs import Graph
from synchro.transform import Transformation


def random_graph(n, p, seed):
    rng = random.Random(seed)
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def oracle_chi(g):
    """Plain backtracking in index order, k ascending."""
    n = g.n
    if n == 0:
        return 0
    for k in range(1, n + 1):
        col = [-1] * n

        def place(v):
            if v == n:
                return True
            for c in range(k):
                if all(col[u] != c for u in g.neighbours(v) if u < v):
                    col[v] = c
                    if place(v + 1):
                        return True
            col[v] = -1
            return False

        if place(0):
            return k


def all_endomorphisms(g):
    for f in itertools.product(range(g.n), repeat=g.n):
        if g.is_endomorphism(f):
            yield f


graph_params = st.tuples(st.integers(0, 9), st.floats(0.1, 0.9), st.integers(0, 10_000))


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(2, (1, 0))  # asymmetric
    with pytest.raises(ValueError):
        Graph(1, (1,))  # loop


def test_builders():
    p = graphs.petersen()
    assert (p.n, p.edge_count) == (10, 15) and p.is_regular()
    assert all(p.degree(v) == 3 for v in range(10))
    assert graphs.line_of_complete(5) == p.complement()
    rook = graphs.hamming(2, 3)
    assert rook == graphs.grid(3)
    assert nx.is_isomorphic(to_nx(rook), nx.cartesian_product(nx.complete_graph(3), nx.complete_graph(3)))
    assert graphs.build("cycle", 5) == graphs.cycle(5)
    assert graphs.complete_multipartite([2, 2]).edge_count == 4
    assert graphs.null(4).edge_count == 0
    with pytest.raises(ValueError):
        graphs.build("moebius", 3)
    with pytest.raises(ValueError):
        graphs.johnson(5, 2, {2})


def test_petersen_invariants():
    p = graphs.petersen()
    assert graphs.clique_number(p) == 2
    assert graphs.chromatic_number(p).value == 3
    q = p.complement()
    assert graphs.clique_number(q) == 4
    assert graphs.chromatic_number(q).value == 5
    assert graphs.independence_number(p) == 4


@pytest.mark.parametrize("m", [5, 6, 7, 8])
def test_line_graph_of_complete(m):
    g = graphs.line_of_complete(m)
    assert graphs.clique_number(g) == m - 1
    # chi = m - 1 exactly when m is even
    assert graphs.chromatic_number(g).value == (m - 1 if m % 2 == 0 else m)
    assert graphs.chromatic_number(g.complement()).value == m - 2


def test_complete_graph():
    for n in (1, 4, 7):
        k = graphs.complete(n)
        assert graphs.clique_number(k) == n
        assert graphs.chromatic_number(k).value == n


def test_null_graph_everywhere():
    g = Graph(0, ())
    assert graphs.max_clique(g) == ()
    assert graphs.chromatic_number(g).value == 0
    assert graphs.core(g).core.n == 0
    assert graphs.hull(g).n == 0


@settings(max_examples=60, deadline=None)
@given(graph_params)
def test_clique_against_networkx(params):
    n, p, seed = params
    g = random_graph(n, p, seed)
    clique = graphs.max_clique(g)
    assert g.is_clique(clique)
    expected = max((len(c) for c in nx.find_cliques(to_nx(g))), default=0)
    assert len(clique) == expected
    indep = graphs.max_independent_set(g)
    assert g.is_independent(indep)
    assert len(indep) == graphs.clique_number(g.complement())


@settings(max_examples=60, deadline=None)
@given(graph_params)
def test_chromatic_against_oracle(params):
    n, p, seed = params
    g = random_graph(n, p, seed)
    res = graphs.chromatic_number(g)
    assert res.exact
    assert g.is_proper_colouring(res.colouring)
    assert len(set(res.colouring)) == res.value if n else True
    assert res.value == oracle_chi(g)
    assert graphs.clique_number(g) <= res.value


def test_chromatic_bracket_on_timeout():
    g = graphs.johnson(9, 3, {1})
    res = graphs.chromatic_number(g, time_budget=0.0)
    assert res.lower <= res.upper
    assert g.is_proper_colouring(res.colouring)
    if not res.exact:
        with pytest.raises(graphs.BudgetExhausted):
            res.value


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(1, 6), st.floats(0.2, 0.8), st.integers(0, 10_000)))
def test_endomorphism_constraints_against_brute_force(params):
    n, p, seed = params
    g = random_graph(n, p, seed)
    endos = list(all_endomorphisms(g))
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))

    def key(f):
        return tuple(f[v] for v in order)

    def check(pred, **constraints):
        want = [f for f in endos if pred(f)]
        res = graphs.find_endomorphism(g, **constraints)
        if want:
            assert res.found and res.mapping == min(want, key=key)
        else:
            assert res.status == "none"

    for r in range(1, n + 1):
        check(lambda f: len(set(f)) == r, rank=r)
    check(lambda f: len(set(f)) < n, proper=True)
    check(lambda f: not Transformation(f).is_uniform and len(set(f)) < n, proper=True, non_uniform=True)
    non_edges = [e for e in itertools.combinations(range(n), 2) if not g.has_edge(*e)]
    for a, b in non_edges[:3]:
        check(lambda f: f[a] == f[b], collapse=(a, b))
    assert graphs.automorphism_count(g) == sum(len(set(f)) == n for f in endos)


def test_endomorphism_examples():
    k = graphs.complete(5)
    assert graphs.find_endomorphism(k, rank=4).status == "none"
    rook = graphs.hamming(2, 3)
    res = graphs.find_endomorphism(rook, rank=3)
    assert res.found and rook.is_endomorphism(res.mapping)
    assert Transformation(res.mapping).is_uniform
    assert graphs.find_endomorphism(graphs.petersen(), proper=True).status == "none"
    with pytest.raises(ValueError):
        graphs.find_endomorphism(k, collapse=(0, 1))


def test_endomorphism_budget_is_distinct():
    g = graphs.johnson(8, 3, {0})
    assert graphs.find_endomorphism(g, proper=True, budget=5).status == "budget"


def test_core_examples():
    c = graphs.core(graphs.cycle(6))
    assert c.core == graphs.complete(2)
    assert sorted(len(k) for k in Transformation(c.retraction).kernel) == [3, 3]
    p = graphs.petersen()
    assert graphs.core(p).core == p
    assert graphs.core(graphs.complete(4)).core == graphs.complete(4)


VERTEX_TRANSITIVE = [graphs.cycle(5), graphs.cycle(6), graphs.cycle(8), graphs.petersen(),
                     graphs.hamming(2, 3), graphs.hamming(3, 2), graphs.johnson(6, 2, {1}),
                     graphs.complete_multipartite([3, 3, 3])]


@pytest.mark.parametrize("g", VERTEX_TRANSITIVE, ids=repr)
def test_core_properties(g):
    c = graphs.core(g)
    assert g.n % c.core.n == 0
    assert g.is_endomorphism(c.retraction)
    t = Transformation(c.retraction)
    assert t.image == frozenset(c.vertices)
    assert all(t.images[v] == v for v in c.vertices)
    assert t.is_uniform
    again = graphs.core(c.core)
    assert again.core == c.core and again.vertices == tuple(range(c.core.n))


def test_hull_examples():
    h = graphs.hull(graphs.path(4))
    assert h == graphs.cycle(4)
    assert graphs.automorphism_count(graphs.path(4)) == 2
    assert graphs.automorphism_count(h) == 8
    assert graphs.hull(graphs.complete(4)) == graphs.complete(4)


@pytest.mark.parametrize("g", [graphs.path(4), graphs.path(5), graphs.cycle(6), graphs.petersen(),
                               random_graph(7, 0.4, 3), random_graph(6, 0.5, 11)], ids=repr)
def test_hull_contains_graph_and_keeps_endomorphisms(g):
    h = graphs.hull(g)
    assert set(g.edges) <= set(h.edges)
    for f in itertools.islice(graphs.iter_endomorphisms(g), 50):
        assert h.is_endomorphism(f)


def test_gr_of_monoid_examples():
    assert graphs.gr_of_monoid([Transformation((1, 2, 3, 0))]) == graphs.complete(4)
    assert graphs.gr_of_monoid([Transformation.constant(4)]) == graphs.null(4)

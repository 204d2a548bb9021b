"""Acceptance criteria, one test each.

Every test is timed against its runtime limit and logs a PASS/FAIL line;
the lines are printed in the "acceptance criteria" section at the end of
the pytest run.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations

from synchro import catalogue, graphs
from synchro.classify import (
    NO,
    YES,
    Multiset,
    average_product_check,
    check_hierarchy,
    check_rystsov,
    classify_group,
    is_partition_separating,
    is_separating,
    is_synchronizing_group,
    ns_ranks,
    almost_synchronizing_probe,
    section_projection,
    spreading_by_functions,
    spreading_search,
    synchronizes_map,
)
from synchro.perm import orbital_digraph_connectivity
from synchro.reset import spreading_greedy_reset
from synchro.transform import (
    PairAutomaton,
    Transformation,
    cerny_automaton,
    is_reset_word,
    random_automaton,
    shortest_reset_word,
    subset_bfs_synchronizing,
)


@contextmanager
def criterion(log, number: int, title: str, limit: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException as e:
        elapsed = time.perf_counter() - start
        log.append(f"criterion {number:2d} FAIL  {title} ({elapsed:.2f} s): {type(e).__name__}: {e}")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    log.append(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f} s, limit {limit:g} s)")
    assert ok, f"runtime {elapsed:.2f} s exceeds {limit} s"


def test_criterion_01_cerny_family(acceptance_log):
    with criterion(acceptance_log, 1, "Cerny family shortest reset length (n-1)^2, n = 2..8", 5):
        for n in range(2, 9):
            res = shortest_reset_word(cerny_automaton(n))
            assert res.status == "found"
            assert res.length == (n - 1) ** 2
        c4 = cerny_automaton(4)
        assert is_reset_word(c4, "BRRRBRRRB")
        assert shortest_reset_word(c4).length == 9


def test_criterion_02_petersen(acceptance_log):
    with criterion(acceptance_log, 2, "Petersen graph invariants and Aut(Petersen) classification", 10):
        P = graphs.petersen()
        Q = P.complement()
        assert graphs.clique_number(P) == 2
        assert graphs.chromatic_number(P).value == 3
        assert graphs.clique_number(Q) == 4
        assert graphs.chromatic_number(Q).value == 5
        G = catalogue.petersen_aut()
        rep = classify_group(G)
        assert rep.flags["synchronizing"] == YES
        assert rep.flags["separating"] == YES
        assert rep.flags["spreading"] == NO
        w = rep.witnesses["spreading"]
        w.validate(G)
        assert w.lam == 2
        A = w.A.support
        # A induces a 5-cycle (the pentagon); B is a 4-coclique
        assert w.A.is_set and len(A) == 5
        assert all(sum(P.has_edge(u, v) for v in A) == 2 for u in A)
        assert len(w.B) == 4 and not any(P.has_edge(u, v) for u, v in combinations(w.B, 2))


def test_criterion_03_symmetric_on_pairs(acceptance_log):
    with criterion(acceptance_log, 3, "S_m on 2-subsets, m = 5..8: separating/synchronizing iff m odd", 60):
        for m in range(5, 9):
            G = catalogue.on_subsets(m, 2)
            sep = is_separating(G)
            sync = is_synchronizing_group(G)
            expected = YES if m % 2 else NO
            assert sep.verdict == expected and sync.verdict == expected, m
            if m % 2 == 0:
                L = graphs.line_of_complete(m)
                assert graphs.clique_number(L) == m - 1
                assert graphs.chromatic_number(L).value == m - 1
                w = sync.witness
                w.validate(G)
                # section: a maximum clique of L(K_m); parts: the m-1 colour classes
                assert len(w.partition) == m - 1 and len(w.section) == m - 1
                assert all(L.has_edge(u, v) for u, v in combinations(w.section, 2))
                assert sorted((len(sep.witness.A), len(sep.witness.B))) == [m // 2, m - 1]
        assert is_partition_separating(catalogue.on_subsets(6, 2)).verdict == YES
        for m in (5, 6, 7):
            assert graphs.chromatic_number(graphs.line_of_complete(m).complement()).value == m - 2


def test_criterion_04_seven_on_triples(acceptance_log):
    with criterion(acceptance_log, 4, "S_7 on 3-subsets: section-regular witness with a Fano section", 120):
        G = catalogue.on_subsets(7, 3)
        out = is_synchronizing_group(G, method="clique-first")
        assert out.verdict == NO
        w = out.witness
        w.validate(G)
        assert sorted(len(p) for p in w.partition) == [5] * 7
        triples = list(combinations(range(7), 3))
        lines = [set(triples[i]) for i in w.section]
        assert len(lines) == 7
        assert all(len(a & b) == 1 for a, b in combinations(lines, 2))
        assert all(len([ln for ln in lines if {x, y} <= ln]) == 1 for x, y in combinations(range(7), 2))
        assert not synchronizes_map(G, section_projection(w, 35))


def test_criterion_05_rystsov(acceptance_log):
    with criterion(acceptance_log, 5, "primitive <=> every rank n-1 idempotent synchronized", 30):
        groups = [G for G in catalogue.transitive_catalogue() if G.degree <= 16]
        assert len(groups) >= 10
        kinds = set()
        for G in groups:
            rep = check_rystsov(G)
            assert rep.consistent, G.name
            kinds.add(rep.primitive)
        assert kinds == {True, False}


def test_criterion_06_rank_two(acceptance_log):
    with criterion(acceptance_log, 6, "primitive groups synchronize every rank 2 map", 30):
        primitive = [G for G in catalogue.transitive_catalogue() if G.is_primitive]
        assert primitive
        for G in primitive:
            n = G.degree
            rng = random.Random(n)
            for _ in range(50):
                a, b = rng.sample(range(n), 2)
                kernel = [0, 1] + [rng.randrange(2) for _ in range(n - 2)]
                rng.shuffle(kernel)
                f = Transformation(tuple(a if k == 0 else b for k in kernel))
                assert f.rank == 2
                assert synchronizes_map(G, f), G.name


def test_criterion_07_grid(acceptance_log):
    with criterion(acceptance_log, 7, "S_3 wr S_2 on 9 points: primitive, not synchronizing, 3 in NS", 10):
        G = catalogue.grid_group()
        assert G.is_primitive
        out = is_synchronizing_group(G)
        assert out.verdict == NO
        out.witness.validate(G)
        ns = ns_ranks(G)
        assert 3 in ns.ranks
        ns.witnesses[3].validate(G)
        assert almost_synchronizing_probe(G).verdict == YES


def test_criterion_08_prime_degree(acceptance_log):
    with criterion(acceptance_log, 8, "prime degree 5, 7, 11, 13: separating and spreading", 60):
        seen = {}
        for G in catalogue.prime_degree_catalogue() + catalogue.transitive_catalogue():
            if G.degree in (5, 7, 11, 13) and G.is_transitive:
                seen.setdefault((G.degree, G.name), G)
        assert {d for d, _ in seen} == {5, 7, 11, 13}
        for G in seen.values():
            assert is_separating(G).verdict == YES, G.name
            out = spreading_search(G)
            assert out.verdict == YES, G.name
            assert out.reason.startswith("exhaustive")


def test_criterion_09_spreading_greedy(acceptance_log):
    with criterion(acceptance_log, 9, "greedy reset words for C_p within (p-1)^2", 20):
        for p in (5, 7, 11):
            G = catalogue.cyclic(p)
            rng = random.Random(1000 + p)
            done = 0
            while done < 20:
                f = Transformation(tuple(rng.randrange(p) for _ in range(p)))
                if f.is_permutation:
                    continue
                done += 1
                res = spreading_greedy_reset(G, f)
                assert res.success
                assert is_reset_word(res.automaton, res.word.letters)
                assert res.length <= (p - 1) ** 2


def test_criterion_10_hull_and_core(acceptance_log):
    with criterion(acceptance_log, 10, "hull(P4) = C4 with |Aut| = 8; core(C6) = K2 with uniform kernel", 5):
        h = graphs.hull(graphs.path(4))
        assert h == graphs.cycle(4)
        assert graphs.automorphism_count(h) == 8
        c = graphs.core(graphs.cycle(6))
        assert c.core == graphs.complete(2)
        assert 6 % len(c.vertices) == 0
        retraction = Transformation(c.retraction)
        assert retraction.is_uniform
        assert graphs.cycle(6).is_endomorphism(c.retraction)


def test_criterion_11_average_identity(acceptance_log):
    with criterion(acceptance_log, 11, "average |A * Bg| over G equals |A||B|/n", 30):
        groups = [catalogue.cyclic(6), catalogue.dihedral(5), catalogue.petersen_aut(),
                  catalogue.grid_group(), catalogue.imprimitive_wreath(2, 4)]
        rng = random.Random(2024)
        for G in groups:
            n = G.degree
            for _ in range(100):
                A = Multiset(tuple(rng.randrange(4) for _ in range(n)))
                B = Multiset(tuple(rng.randrange(3) for _ in range(n)))
                avg = average_product_check(G, A, B)
                # independent route: direct sum over the elements
                total = sum(sum(A.multiplicity[x] * B.image(g).multiplicity[x] for x in range(n))
                            for g in G.elements())
                assert avg == Fraction(total, len(G.elements())) == Fraction(A.cardinality * B.cardinality, n)


def test_criterion_12_property_suites(acceptance_log, record_reports):
    with criterion(acceptance_log, 12, "hierarchy, witness re-validation, oracle equivalences", 120):
        # hierarchy and witnesses over a report for every catalogue group
        for G in catalogue.transitive_catalogue():
            rep = classify_group(G, with_ns=False)
            for w in rep.witnesses.values():
                w.validate(G)
        assert record_reports
        for rep in record_reports:
            check_hierarchy(rep.flags)
        # pair collapsing agrees with subset BFS for n <= 12
        rng = random.Random(12)
        for _ in range(200):
            a = random_automaton(rng.randrange(2, 13), rng.randrange(1, 4), rng)
            assert PairAutomaton(a.maps).all_collapsible == subset_bfs_synchronizing(a)
        # block closure agrees with orbital-digraph connectivity
        for G in catalogue.transitive_catalogue():
            connected = all(orbital_digraph_connectivity(G, o).strongly_connected
                            for o in G.orbital_data.orbitals if not o.is_diagonal)
            assert G.block_analysis.is_primitive == connected, G.name
        # spreading search agrees with the function criterion for degree <= 8
        for G in catalogue.transitive_catalogue():
            if G.degree <= 8:
                assert (spreading_search(G).verdict == YES) == spreading_by_functions(G), G.name

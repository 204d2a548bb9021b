"""Worked examples with their known answers, checked end to end.

Each check records where its expected value comes from: ``known`` for a
published result, ``computed`` for a value fixed by an independent
computation, ``definition`` for values forced by the definitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable

from . import catalogue, graphs
from .classify import (
    check_rystsov,
    classify_group,
    is_partition_separating,
    is_separating,
    is_synchronizing_group,
    ns_ranks,
    spreading_search,
)
from .transform import Automaton, cerny_automaton, shortest_reset_word, is_reset_word


@dataclass(frozen=True)
class Check:
    prop: str
    expected: Any
    basis: str
    compute: Callable[[], Any]


@dataclass(frozen=True)
class Fixture:
    name: str
    constructor: str
    checks: tuple[Check, ...]


def dungeon() -> Automaton:
    """Four rooms; Blue, Red, Blue leads to room 0 from anywhere."""
    return Automaton.from_maps({"Blue": [2, 2, 0, 0], "Red": [2, 0, 3, 1]})


def _flag(G, name: str) -> str:
    return str(classify_group(G, with_ns=False).flags[name])


def _petersen_checks() -> tuple[Check, ...]:
    P = graphs.petersen()
    Q = P.complement()
    return (
        Check("omega", 2, "known", lambda: graphs.clique_number(P)),
        Check("chi", 3, "known", lambda: graphs.chromatic_number(P).value),
        Check("complement omega", 4, "known", lambda: graphs.clique_number(Q)),
        Check("complement chi", 5, "known", lambda: graphs.chromatic_number(Q).value),
        Check("proper endomorphism", "none", "known",
              lambda: graphs.find_endomorphism(P, proper=True).status),
    )


def _spreading_petersen():
    out = spreading_search(catalogue.petersen_aut())
    w = out.witness
    return (str(out.verdict), w.lam if w else None)


def _fano_section():
    out = is_synchronizing_group(catalogue.on_subsets(7, 3))
    w = out.witness
    triples = list(combinations(range(7), 3))
    section = [set(triples[i]) for i in w.section]
    fano = all(len(a & b) == 1 for a, b in combinations(section, 2))
    return (str(out.verdict), sorted(len(p) for p in w.partition), fano)


def all_fixtures() -> list[Fixture]:
    c4 = cerny_automaton(4)
    grid = catalogue.grid_group()
    return [
        Fixture("cerny-4", "cerny:4", (
            Check("shortest length", 9, "known", lambda: shortest_reset_word(c4).length),
            Check("BRRRBRRRB resets", True, "known", lambda: is_reset_word(c4, "BRRRBRRRB")),
        )),
        Fixture("cerny-5", "cerny:5", (
            Check("shortest length", 16, "known", lambda: shortest_reset_word(cerny_automaton(5)).length),
        )),
        Fixture("dungeon", "four rooms, Blue/Red", (
            Check("Blue Red Blue image", {0}, "known",
                  lambda: {dungeon().apply(["Blue", "Red", "Blue"], s) for s in range(4)}),
            Check("shortest length", 3, "computed", lambda: shortest_reset_word(dungeon()).length),
        )),
        Fixture("petersen", "graph:petersen", _petersen_checks()),
        Fixture("petersen-aut", "petersen-aut", (
            Check("synchronizing", "YES", "known", lambda: _flag(catalogue.petersen_aut(), "synchronizing")),
            Check("separating", "YES", "known", lambda: str(is_separating(catalogue.petersen_aut()).verdict)),
            Check("spreading, lambda", ("NO", 2), "known", _spreading_petersen),
        )),
        Fixture("S5 on 2-sets", "subsets:5:2", (
            Check("separating", "YES", "known", lambda: str(is_separating(catalogue.on_subsets(5, 2)).verdict)),
            Check("synchronizing", "YES", "known",
                  lambda: str(is_synchronizing_group(catalogue.on_subsets(5, 2)).verdict)),
        )),
        Fixture("S6 on 2-sets", "subsets:6:2", (
            Check("separating", "NO", "known", lambda: str(is_separating(catalogue.on_subsets(6, 2)).verdict)),
            Check("synchronizing", "NO", "known",
                  lambda: str(is_synchronizing_group(catalogue.on_subsets(6, 2)).verdict)),
            Check("partition separating", "YES", "known",
                  lambda: str(is_partition_separating(catalogue.on_subsets(6, 2)).verdict)),
        )),
        Fixture("S7 on 3-sets", "subsets:7:3", (
            Check("synchronizing, part sizes, Fano section", ("NO", [5] * 7, True), "known", _fano_section),
        )),
        Fixture("grid", "grid", (
            Check("primitive", True, "known", lambda: grid.is_primitive),
            Check("synchronizing", "NO", "known", lambda: str(is_synchronizing_group(grid).verdict)),
            Check("3 in NS", True, "known", lambda: 3 in ns_ranks(grid).ranks),
            Check("almost synchronizing probe", "YES", "known", lambda: _flag(grid, "almost_synchronizing_probe")),
        )),
        Fixture("C4", "cyclic:4", (
            Check("Rystsov failing idempotents", ((0, 2),), "computed",
                  lambda: check_rystsov(catalogue.cyclic(4)).failing),
        )),
        Fixture("hull of P4", "graph:path:4", (
            Check("hull is C4", True, "known", lambda: graphs.hull(graphs.path(4)) == graphs.cycle(4)),
            Check("|Aut(hull)|", 8, "known", lambda: graphs.automorphism_count(graphs.hull(graphs.path(4)))),
        )),
        Fixture("core of C6", "graph:cycle:6", (
            Check("core is K2", True, "known", lambda: graphs.core(graphs.cycle(6)).core == graphs.complete(2)),
        )),
        Fixture("complement of L(K_m)", "graph:line_of_complete:m", tuple(
            Check(f"chi, m={m}", m - 2, "known",
                  lambda m=m: graphs.chromatic_number(graphs.line_of_complete(m).complement()).value)
            for m in (5, 6, 7)
        )),
    ]


@dataclass(frozen=True)
class CheckResult:
    fixture: str
    prop: str
    expected: Any
    actual: Any
    basis: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def as_dict(self) -> dict[str, Any]:
        def plain(v):
            if isinstance(v, (set, frozenset)):
                return sorted(v)
            if isinstance(v, tuple):
                return [plain(x) for x in v]
            return v
        return {"fixture": self.fixture, "property": self.prop, "expected": plain(self.expected),
                "actual": plain(self.actual), "basis": self.basis, "ok": self.ok}


def run_fixtures(names: list[str] | None = None) -> list[CheckResult]:
    out = []
    for fx in all_fixtures():
        if names and fx.name not in names:
            continue
        for c in fx.checks:
            out.append(CheckResult(fx.name, c.prop, c.expected, c.compute(), c.basis))
    return out

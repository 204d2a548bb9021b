"""Constructive reset words for groups plus one singular map, and the
length bounds they are measured against."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Sequence

import numpy as np

from .perm import DEFAULT_ELEMENT_CAP, IntransitiveGroupError, PermGroup
from .transform import (
    DEFAULT_SUBSET_CAP,
    Automaton,
    PairAutomaton,
    ResetWord,
    Transformation,
    as_transformation,
    greedy_reset_word,
    is_reset_word,
    shortest_reset_word,
)


def group_automaton(G: PermGroup, maps: Transformation | Sequence[Transformation] = ()) -> Automaton:
    """Letters g0, g1, ... for the generators, then f (or f0, f1, ...)."""
    if isinstance(maps, Transformation) or (maps and isinstance(maps[0], int)):
        maps = [as_transformation(maps)]
    maps = [as_transformation(f) for f in maps]
    letters = [(f"g{i}", Transformation(g.images)) for i, g in enumerate(G.generators)]
    if len(maps) == 1:
        letters.append(("f", maps[0]))
    else:
        letters.extend((f"f{i}", f) for i, f in enumerate(maps))
    return Automaton(G.degree, tuple(letters))


@dataclass(frozen=True)
class SpreadingGreedyResult:
    """``word`` is set on success; ``stuck_set`` on failure."""

    success: bool
    word: ResetWord | None
    f_count: int
    stuck_set: tuple[int, ...] | None = None
    automaton: Automaton | None = None

    @property
    def length(self) -> int | None:
        return self.word.length if self.word else None


def spreading_greedy_reset(G: PermGroup, f, cap: int = DEFAULT_ELEMENT_CAP) -> SpreadingGreedyResult:
    """Grow S from a point of largest f-preimage, S <- {x : x f h in S},
    choosing h to maximise the new size.

    Ties go to the element with the shortlex-least shortest word, which is
    the first in Cayley BFS order. The forward word is f h_m ... f h_1 f.
    """
    f = as_transformation(f)
    n = G.degree
    if f.degree != n:
        raise ValueError("degree mismatch")
    if f.is_permutation:
        raise ValueError("f must be singular")
    elements = G.elements(cap)
    cayley = G.cayley(cap)
    E = np.array([g.images for g in elements], dtype=np.int64)
    fimg = np.array(f.images, dtype=np.int64)
    pre = np.bincount(fimg, minlength=n)
    auto = group_automaton(G, f)

    target = int(np.argmax(pre))  # least point among those of largest preimage
    member = np.zeros(n, dtype=np.int64)
    member[[x for x in range(n) if f.images[x] == target]] = 1
    f_count = 1
    steps: list[int] = []
    while member.sum() < n:
        # |{x : x f h in S}| = sum_y |y f^-1| [y h in S]
        sizes = (member[E] * pre).sum(axis=1)
        best = int(np.argmax(sizes))
        if sizes[best] <= member.sum():
            stuck = tuple(int(x) for x in np.nonzero(member)[0])
            return SpreadingGreedyResult(False, None, f_count, stuck, auto)
        h = E[best]
        member = member[h[fimg]]
        steps.append(best)
        f_count += 1
    letters: list[str] = []
    for idx in reversed(steps):
        letters.append("f")
        letters.extend(f"g{i}" for i in cayley.word(elements[idx]))
    letters.append("f")
    word = ResetWord(tuple(letters), target)
    if not is_reset_word(auto, word.letters):
        raise AssertionError("constructed word does not reset")
    return SpreadingGreedyResult(True, word, f_count, None, auto)


@dataclass(frozen=True)
class BoundReport:
    n: int
    rank: int
    d_A: int
    d_A_truncated: bool
    rank_bound: int
    spreading_bound: int
    cerny_bound: int
    synchronizing: bool | None = None
    greedy_length: int | None = None
    spreading_greedy_length: int | None = None
    shortest_length: int | None = None
    shortest_status: str | None = None

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def rank_bound(n: int, r: int, d_A: int) -> int:
    """ceil(1 + (n - (n-1)/(r-1) + d_A)(n-2)), evaluated exactly."""
    if r < 2:
        raise ValueError("rank must be at least 2")
    value = 1 + (n - Fraction(n - 1, r - 1) + d_A) * (n - 2)
    return ceil(value)


def bound_report(G: PermGroup, target=None, *, cap: int = DEFAULT_ELEMENT_CAP,
                 state_cap: int = DEFAULT_SUBSET_CAP) -> BoundReport:
    """Bounds for reset words over generators(G) plus ``target``.

    ``target`` is a singular map, a list of maps, or a ready-made automaton
    whose letters include the generators. When the combined letters are
    synchronizing the greedy and (within ``state_cap``) exact lengths are
    recorded and checked against both bounds.
    """
    if not G.is_transitive:
        raise IntransitiveGroupError("bounds need a transitive group")
    n = G.degree
    cay = G.cayley(cap)
    d_A = cay.diameter
    r = G.rank
    report = dict(
        n=n, rank=r, d_A=d_A, d_A_truncated=cay.truncated,
        rank_bound=rank_bound(n, r, d_A), spreading_bound=1 + (d_A + 1) * (n - 2),
        cerny_bound=(n - 1) ** 2,
    )
    if target is None:
        return BoundReport(**report)
    auto = target if isinstance(target, Automaton) else group_automaton(G, target)
    sync = PairAutomaton(auto.maps).all_collapsible
    report["synchronizing"] = sync
    if not sync:
        return BoundReport(**report)
    report["greedy_length"] = greedy_reset_word(auto).length
    singular = [t for t in auto.maps if not t.is_permutation]
    if len(singular) == 1 and not cay.truncated:
        sg = spreading_greedy_reset(G, singular[0], cap)
        if sg.success:
            report["spreading_greedy_length"] = sg.length
    res = shortest_reset_word(auto, state_cap)
    report["shortest_status"] = res.status
    if res.status == "found":
        report["shortest_length"] = res.length
        if res.length > report["cerny_bound"]:
            raise AssertionError(f"Cerny bound exceeded: {res.length} > {report['cerny_bound']}")
        # the rank bound needs an exact d_A (a truncated one is only a lower bound)
        if n >= 2 and not cay.truncated and res.length > report["rank_bound"]:
            raise AssertionError(f"rank bound exceeded: {res.length} > {report['rank_bound']}")
    return BoundReport(**report)


@dataclass(frozen=True)
class CernyCheck:
    n: int
    bound: int
    shortest: int | None
    upper: int | None
    exact: bool
    within: bool | None  # None: unknown (greedy upper bound exceeds the bound)
    synchronizing: bool


def verify_within_cerny(a: Automaton, state_cap: int = DEFAULT_SUBSET_CAP) -> CernyCheck:
    n = a.states
    bound = (n - 1) ** 2
    greedy = greedy_reset_word(a)
    if greedy is None:
        return CernyCheck(n, bound, None, None, True, None, False)
    res = shortest_reset_word(a, state_cap)
    if res.status == "found":
        return CernyCheck(n, bound, res.length, res.length, True, res.length <= bound, True)
    upper = greedy.length
    return CernyCheck(n, bound, None, upper, False, True if upper <= bound else None, True)

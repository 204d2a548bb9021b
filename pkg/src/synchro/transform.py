"""Transformations, automata and reset words.

Two searches do the real work here:

* the *pair automaton* (states = unordered pairs plus one absorbing
  "merged" node), walked backwards from the merged node, which tells for
  every pair whether some word collapses it and gives a shortest such word;
* breadth-first search on image subsets (bitmasks) for exact shortest reset
  words.

Words are read left to right: letter ``a`` then letter ``b`` sends ``x`` to
``b(a(x))``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from ._bits import MaskMapper

DEFAULT_SUBSET_CAP = 2**22


@dataclass(frozen=True, order=True)
class Transformation:
    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n == 0:
            raise ValueError("transformation degree must be positive")
        for x in self.images:
            if not 0 <= x < n:
                raise ValueError(f"image {x} out of range for degree {n}")

    @classmethod
    def identity(cls, degree: int) -> "Transformation":
        return cls(tuple(range(degree)))

    @classmethod
    def constant(cls, degree: int, value: int = 0) -> "Transformation":
        return cls((value,) * degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.images)

    @property
    def rank(self) -> int:
        return len(set(self.images))

    @property
    def kernel(self) -> tuple[tuple[int, ...], ...]:
        classes: dict[int, list[int]] = {}
        for x, y in enumerate(self.images):
            classes.setdefault(y, []).append(x)
        return tuple(sorted((tuple(c) for c in classes.values()), key=lambda c: c[0]))

    @property
    def is_permutation(self) -> bool:
        return self.rank == self.degree

    @property
    def is_uniform(self) -> bool:
        return len({len(c) for c in self.kernel}) == 1

    def __getitem__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Transformation") -> "Transformation":
        return compose_t(self, other)


def compose_t(s: Transformation, t: Transformation) -> Transformation:
    """``x -> t(s(x))``."""
    if s.degree != t.degree:
        raise ValueError(f"degree mismatch: {s.degree} vs {t.degree}")
    ti = t.images
    return Transformation(tuple(ti[x] for x in s.images))


def as_transformation(f) -> Transformation:
    """Accept a Transformation, a Permutation or a plain image sequence."""
    if isinstance(f, Transformation):
        return f
    images = getattr(f, "images", f)
    return Transformation(tuple(images))


@dataclass(frozen=True)
class Automaton:
    states: int
    letters: tuple[tuple[str, Transformation], ...]

    def __post_init__(self):
        if self.states <= 0:
            raise ValueError("an automaton needs at least one state")
        names = [name for name, _ in self.letters]
        if len(set(names)) != len(names):
            raise ValueError("letter names must be unique")
        for name, t in self.letters:
            if t.degree != self.states:
                raise ValueError(f"letter {name!r} has degree {t.degree}, expected {self.states}")

    @classmethod
    def from_maps(cls, letters: dict[str, Sequence[int]] | Sequence[tuple[str, Sequence[int]]]):
        items = letters.items() if isinstance(letters, dict) else letters
        pairs = tuple((str(name), as_transformation(tuple(imgs))) for name, imgs in items)
        if not pairs:
            raise ValueError("an automaton needs at least one letter")
        return cls(pairs[0][1].degree, pairs)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.letters)

    @property
    def maps(self) -> tuple[Transformation, ...]:
        return tuple(t for _, t in self.letters)

    def apply(self, word: Iterable[str], state: int) -> int:
        lookup = dict(self.letters)
        for a in word:
            state = lookup[a].images[state]
        return state


@dataclass(frozen=True)
class ResetWord:
    letters: tuple[str, ...]
    image: int

    @property
    def length(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if all(len(a) == 1 for a in self.letters):
            return "".join(self.letters)
        return " ".join(self.letters)


def is_reset_word(a: Automaton, word: Sequence[str]) -> bool:
    return len({a.apply(word, s) for s in range(a.states)}) == 1


@dataclass(frozen=True)
class ResetResult:
    """Outcome of a reset-word search: ``found``, ``none`` or ``truncated``."""

    status: str
    word: ResetWord | None = None
    explored: int = 0

    @property
    def length(self) -> int | None:
        return self.word.length if self.word else None


class PairAutomaton:
    """Backward BFS from the merged node over the pair automaton.

    ``dist[p]`` is the length of a shortest word collapsing pair ``p``
    (``-1`` when no word does).
    """

    def __init__(self, maps: Sequence[Transformation]):
        maps = [as_transformation(m) for m in maps]
        if not maps:
            raise ValueError("need at least one map")
        n = maps[0].degree
        for m in maps:
            if m.degree != n:
                raise ValueError("maps must share one degree")
        self.n = n
        self.maps = maps
        npairs = n * (n - 1) // 2
        self.merged = npairs
        # pair (a, b), a < b, has index a*n - a*(a+1)//2 + (b - a - 1)
        self._row = [a * n - a * (a + 1) // 2 - a - 1 for a in range(n)]
        succ = [[0] * len(maps) for _ in range(npairs)]
        rev: list[list[int]] = [[] for _ in range(npairs + 1)]
        for a in range(n):
            for b in range(a + 1, n):
                p = self._row[a] + b
                for li, m in enumerate(maps):
                    x, y = m.images[a], m.images[b]
                    q = self.merged if x == y else self.index(x, y)
                    succ[p][li] = q
                    rev[q].append(p)
        self.succ = succ
        dist = [-1] * (npairs + 1)
        dist[self.merged] = 0
        queue = deque([self.merged])
        while queue:
            q = queue.popleft()
            for p in rev[q]:
                if dist[p] < 0:
                    dist[p] = dist[q] + 1
                    queue.append(p)
        self.dist = dist

    def index(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        return self._row[a] + b

    def pairs(self):
        n = self.n
        for a in range(n):
            for b in range(a + 1, n):
                yield a, b

    def collapsible(self, a: int, b: int) -> bool:
        return a == b or self.dist[self.index(a, b)] >= 0

    def distance(self, a: int, b: int) -> int:
        return 0 if a == b else self.dist[self.index(a, b)]

    @property
    def all_collapsible(self) -> bool:
        return all(d >= 0 for d in self.dist)

    def collapsing_word(self, a: int, b: int) -> list[int]:
        """Lexicographically least shortest word (letter indices) merging a, b."""
        if a == b:
            return []
        p = self.index(a, b)
        if self.dist[p] < 0:
            raise ValueError(f"pair {(a, b)} cannot be collapsed")
        word = []
        while p != self.merged:
            d = self.dist[p]
            for li, q in enumerate(self.succ[p]):
                if self.dist[q] == d - 1:
                    word.append(li)
                    p = q
                    break
        return word


@dataclass(frozen=True)
class SyncCheck:
    synchronizing: bool
    collapsible: dict[tuple[int, int], bool]


def is_synchronizing_automaton(a: Automaton) -> SyncCheck:
    pa = PairAutomaton(a.maps)
    table = {(x, y): pa.dist[pa.index(x, y)] >= 0 for x, y in pa.pairs()}
    return SyncCheck(all(table.values()), table)


def collapsible_pairs(gens: Sequence[Transformation]) -> set[tuple[int, int]]:
    pa = PairAutomaton(gens)
    return {(x, y) for x, y in pa.pairs() if pa.dist[pa.index(x, y)] >= 0}


def shortest_reset_word(a: Automaton, state_cap: int = DEFAULT_SUBSET_CAP) -> ResetResult:
    """Exact shortest reset word by BFS over image subsets.

    Letters are tried in automaton order, so among the shortest reset words
    the lexicographically least one (by letter position) is returned.
    ``truncated`` means more than ``state_cap`` subsets were visited.
    """
    n = a.states
    if n == 1:
        return ResetResult("found", ResetWord((), 0), 1)
    if not PairAutomaton(a.maps).all_collapsible:
        return ResetResult("none")
    mappers = [MaskMapper(t.images) for t in a.maps]
    full = (1 << n) - 1
    parent = {full: (None, -1)}
    queue = deque([full])
    while queue:
        mask = queue.popleft()
        for li, f in enumerate(mappers):
            im = f(mask)
            if im in parent:
                continue
            parent[im] = (mask, li)
            if im & (im - 1) == 0:
                word = []
                cur = im
                while parent[cur][0] is not None:
                    prev, letter = parent[cur]
                    word.append(a.names[letter])
                    cur = prev
                word.reverse()
                return ResetResult("found", ResetWord(tuple(word), im.bit_length() - 1), len(parent))
            if len(parent) > state_cap:
                return ResetResult("truncated", explored=len(parent))
            queue.append(im)
    # unreachable: the pair test already certified synchronization
    raise AssertionError("subset search exhausted on a synchronizing automaton")


def greedy_reset_word(a: Automaton) -> ResetWord | None:
    """Reset word from repeatedly collapsing the closest pair of the image.

    Tie-break: smallest collapse distance, then lexicographically least pair.
    Returns None when the automaton is not synchronizing.
    """
    pa = PairAutomaton(a.maps)
    if not pa.all_collapsible:
        return None
    current = set(range(a.states))
    word: list[int] = []
    while len(current) > 1:
        pts = sorted(current)
        best = None
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                key = (pa.distance(x, y), x, y)
                if best is None or key < best:
                    best = key
        _, x, y = best
        piece = pa.collapsing_word(x, y)
        for li in piece:
            img = pa.maps[li].images
            current = {img[s] for s in current}
        word.extend(piece)
    (image,) = current
    return ResetWord(tuple(a.names[li] for li in word), image)


def subset_bfs_synchronizing(a: Automaton) -> bool:
    """Independent check: does subset BFS reach a singleton at all?"""
    mappers = [MaskMapper(t.images) for t in a.maps]
    full = (1 << a.states) - 1
    seen = {full}
    stack = [full]
    while stack:
        mask = stack.pop()
        if mask & (mask - 1) == 0:
            return True
        for f in mappers:
            im = f(mask)
            if im not in seen:
                seen.add(im)
                stack.append(im)
    return False


def cerny_automaton(n: int) -> Automaton:
    """Two letters: R cycles the states, B sends 0 to 1 and fixes the rest."""
    if n < 2:
        raise ValueError("the Cerny family starts at n = 2")
    r = tuple((i + 1) % n for i in range(n))
    b = (1,) + tuple(range(1, n))
    return Automaton(n, (("R", Transformation(r)), ("B", Transformation(b))))


def random_automaton(n: int, k: int, rng: random.Random) -> Automaton:
    """Each letter sends each state to an independent uniform state."""
    letters = []
    for i in range(k):
        name = chr(ord("a") + i) if k <= 26 else f"x{i}"
        letters.append((name, Transformation(tuple(rng.randrange(n) for _ in range(n)))))
    return Automaton(n, tuple(letters))


@dataclass(frozen=True)
class RoadCheck:
    strongly_connected: bool
    cycle_gcd: int
    admissible: bool


def underlying_digraph(a: Automaton) -> list[list[int]]:
    return [[t.images[s] for t in a.maps] for s in range(a.states)]


def road_coloring_check(out: Sequence[Sequence[int]]) -> RoadCheck:
    """Necessary conditions for a synchronizing colouring of a digraph.

    ``out[v]`` lists the heads of the arcs leaving ``v`` (with multiplicity).
    """
    n = len(out)
    if n == 0:
        raise ValueError("empty digraph")
    degrees = {len(heads) for heads in out}
    if len(degrees) != 1 or 0 in degrees:
        raise ValueError(f"out-degree must be constant and positive, got {sorted(degrees)}")
    depth = [-1] * n
    depth[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in out[u]:
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                queue.append(v)
    rev = [[] for _ in range(n)]
    for u, heads in enumerate(out):
        for v in heads:
            rev[v].append(u)
    back = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in rev[v]:
            if u not in back:
                back.add(u)
                stack.append(u)
    strong = all(d >= 0 for d in depth) and len(back) == n
    g = 0
    for u, heads in enumerate(out):
        if depth[u] < 0:
            continue
        for v in heads:
            g = gcd(g, abs(depth[u] + 1 - depth[v]))
    return RoadCheck(strong, g, strong and g == 1)


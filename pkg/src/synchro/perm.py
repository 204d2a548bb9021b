"""Permutations and permutation groups given by generators.

Points are ``0 .. n-1`` and groups act on the right: ``compose(p, q)`` is
"p followed by q", so ``x`` goes to ``q[p[x]]``.

Nothing here builds a stabilizer chain. Everything is computed either from
orbit algorithms on points/pairs or by breadth-first enumeration of the
elements (bounded by a cap).
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from ._bits import MaskMapper

DEFAULT_ELEMENT_CAP = 10**6


class IntransitiveGroupError(ValueError):
    """Raised by operations that are only defined for transitive groups."""


class EnumerationCapError(RuntimeError):
    """The group has more elements than the enumeration cap allows."""

    def __init__(self, cap: int):
        super().__init__(f"group order exceeds the element cap {cap}")
        self.cap = cap


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n == 0:
            raise ValueError("permutation degree must be positive")
        if sorted(self.images) != list(range(n)):
            raise ValueError(f"not a bijection on 0..{n - 1}: {list(self.images)}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for p in cyc:
                if not 0 <= p < degree:
                    raise ValueError(f"point {p} out of range for degree {degree}")
                if p in seen:
                    raise ValueError(f"point {p} repeated in cycle notation")
                seen.add(p)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __getitem__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles of length > 1, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int) -> Permutation:
    """Parse ``"[1,2,0]"`` (image list) or ``"(0 1)(2 3)"`` (cycles).

    In cycle form points may be separated by spaces and/or commas, and fixed
    points may be omitted. ``"()"`` is the identity.
    """
    s = text.strip()
    if degree <= 0:
        raise ValueError("degree must be positive")
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValueError(f"malformed image list: {text!r}")
        body = s[1:-1].strip()
        try:
            images = [int(tok) for tok in body.split(",")] if body else []
        except ValueError:
            raise ValueError(f"malformed image list: {text!r}") from None
        if len(images) != degree:
            raise ValueError(f"image list has {len(images)} entries, expected {degree}")
        for x in images:
            if not 0 <= x < degree:
                raise ValueError(f"point {x} out of range for degree {degree}")
        return Permutation(tuple(images))
    if s.startswith("("):
        if _CYCLE_RE.sub("", s).strip():
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(s):
            toks = [t for t in re.split(r"[\s,]+", body.strip()) if t]
            try:
                cycles.append([int(t) for t in toks])
            except ValueError:
                raise ValueError(f"malformed cycle notation: {text!r}") from None
        return Permutation.from_cycles([c for c in cycles if c], degree)
    raise ValueError(f"unrecognised permutation syntax: {text!r}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    qi = q.images
    return Permutation(tuple(qi[x] for x in p.images))


@dataclass(frozen=True)
class Orbital:
    index: int
    representative: tuple[int, int]
    pairs: frozenset[tuple[int, int]]
    is_diagonal: bool
    paired_with: int

    @property
    def is_self_paired(self) -> bool:
        return self.paired_with == self.index


@dataclass(frozen=True)
class OrbitalData:
    orbitals: tuple[Orbital, ...]
    rank: int
    self_paired_count: int
    # orbits on unordered pairs {a, b}, a < b, each sorted, listed by least pair
    two_subset_orbits: tuple[tuple[tuple[int, int], ...], ...]


@dataclass(frozen=True)
class BlockAnalysis:
    systems: tuple[tuple[tuple[int, ...], ...], ...]
    is_primitive: bool


@dataclass(frozen=True)
class Connectivity:
    weakly_connected: bool
    strongly_connected: bool


@dataclass(frozen=True)
class TransitivityProfile:
    transitive: bool
    two_homogeneous: bool
    two_transitive: bool
    generously_transitive: bool


@dataclass
class CayleyData:
    order: int
    diameter: int
    truncated: bool
    elements: list[Permutation]
    # parent index and generator index for each element in BFS order
    _parent: list[int] = field(repr=False)
    _via: list[int] = field(repr=False)
    _index: dict[Permutation, int] = field(repr=False)

    @property
    def word_length(self) -> dict[Permutation, int]:
        out: dict[Permutation, int] = {}
        depth = [0] * len(self.elements)
        for i, g in enumerate(self.elements):
            if i:
                depth[i] = depth[self._parent[i]] + 1
            out[g] = depth[i]
        return out

    def word(self, g: Permutation) -> tuple[int, ...]:
        """Shortest word (generator indices, applied left to right) for g."""
        i = self._index[g]
        out = []
        while i:
            out.append(self._via[i])
            i = self._parent[i]
        return tuple(reversed(out))

    def __contains__(self, g: Permutation) -> bool:
        return g in self._index


class PermGroup:
    """A permutation group given by a nonempty generating list.

    Derived data (orbits, orbitals, blocks, ...) is computed lazily and
    cached; the group itself is never mutated.
    """

    def __init__(self, generators: Sequence[Permutation], name: str | None = None):
        gens = tuple(generators)
        if not gens:
            raise ValueError("a group needs at least one generator")
        n = gens[0].degree
        for g in gens:
            if g.degree != n:
                raise ValueError("generators must share one degree")
        self.generators = gens
        self.degree = n
        self.name = name

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<PermGroup{label} degree={self.degree} gens={len(self.generators)}>"

    @classmethod
    def from_strings(cls, degree: int, generators: Iterable[str], name=None) -> "PermGroup":
        return cls([parse_permutation(s, degree) for s in generators], name=name)

    @cached_property
    def orbits(self) -> list[tuple[int, ...]]:
        return orbits(self)

    @cached_property
    def is_transitive(self) -> bool:
        return len(self.orbits) == 1

    @cached_property
    def orbital_data(self) -> OrbitalData:
        return orbitals(self)

    @property
    def rank(self) -> int:
        return self.orbital_data.rank

    @cached_property
    def block_analysis(self) -> BlockAnalysis:
        return block_systems(self)

    @property
    def is_primitive(self) -> bool:
        return self.is_transitive and self.block_analysis.is_primitive

    @cached_property
    def transitivity(self) -> TransitivityProfile:
        return transitivity_profile(self)

    @cached_property
    def set_mappers(self) -> tuple[MaskMapper, ...]:
        return tuple(MaskMapper(g.images) for g in self.generators)

    def set_orbit(self, mask: int) -> set[int]:
        """Orbit of a point set (as bitmask) under the group."""
        seen = {mask}
        queue = [mask]
        mappers = self.set_mappers
        while queue:
            m = queue.pop()
            for f in mappers:
                im = f(m)
                if im not in seen:
                    seen.add(im)
                    queue.append(im)
        return seen

    def cayley(self, cap: int = DEFAULT_ELEMENT_CAP) -> CayleyData:
        cache = self.__dict__.setdefault("_cayley_cache", {})
        if cap not in cache:
            cache[cap] = cayley_enumerate(self, cap)
        return cache[cap]

    def elements(self, cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
        """All elements, or EnumerationCapError if |G| > cap."""
        data = self.cayley(cap)
        if data.truncated:
            raise EnumerationCapError(cap)
        return data.elements


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def orbits(G: PermGroup) -> list[tuple[int, ...]]:
    n = G.degree
    parent = list(range(n))
    for g in G.generators:
        for x, y in enumerate(g.images):
            rx, ry = _find(parent, x), _find(parent, y)
            if rx != ry:
                if rx < ry:
                    parent[ry] = rx
                else:
                    parent[rx] = ry
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(_find(parent, x), []).append(x)
    return sorted((tuple(c) for c in classes.values()), key=lambda c: c[0])


def _require_transitive(G: PermGroup) -> None:
    if not G.is_transitive:
        raise IntransitiveGroupError(f"group has {len(G.orbits)} orbits, expected 1")


def minimal_block(G: PermGroup, a: int, b: int) -> tuple[tuple[int, ...], ...]:
    """Finest G-invariant partition in which ``a`` and ``b`` share a part.

    Union-find closure: whenever x ~ y, merge xg ~ yg for each generator g.
    """
    n = G.degree
    parent = list(range(n))
    pending = deque([(a, b)])
    while pending:
        x, y = pending.popleft()
        rx, ry = _find(parent, x), _find(parent, y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for g in G.generators:
            pending.append((g.images[x], g.images[y]))
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(_find(parent, x), []).append(x)
    return tuple(sorted((tuple(c) for c in classes.values()), key=lambda c: c[0]))


def _refines(p: Sequence[Sequence[int]], q: Sequence[Sequence[int]]) -> bool:
    where = {}
    for i, part in enumerate(q):
        for x in part:
            where[x] = i
    return all(len({where[x] for x in part}) == 1 for part in p)


def block_systems(G: PermGroup) -> BlockAnalysis:
    """Minimal nontrivial block systems and the primitivity flag.

    The block-closure answer is cross-checked against connectivity of the
    non-diagonal orbital digraphs; a disagreement is a bug and raises.
    """
    _require_transitive(G)
    n = G.degree
    found = []
    for beta in range(1, n):
        part = minimal_block(G, 0, beta)
        if len(part) > 1 and part not in found:
            found.append(part)
    minimal = [p for p in found if not any(q != p and _refines(q, p) for q in found)]
    minimal.sort(key=lambda p: (-len(p), p))
    primitive = not minimal
    by_orbitals = all(
        orbital_digraph_connectivity(G, o).weakly_connected
        for o in G.orbital_data.orbitals
        if not o.is_diagonal
    )
    if n > 1 and primitive != by_orbitals:
        raise RuntimeError("block closure and orbital connectivity disagree on primitivity")
    return BlockAnalysis(tuple(minimal), primitive)


def orbitals(G: PermGroup) -> OrbitalData:
    n = G.degree
    label = [[-1] * n for _ in range(n)]
    reps: list[tuple[int, int]] = []
    members: list[list[tuple[int, int]]] = []
    gens = [g.images for g in G.generators]
    for a in range(n):
        for b in range(n):
            if label[a][b] >= 0:
                continue
            idx = len(reps)
            reps.append((a, b))
            label[a][b] = idx
            stack = [(a, b)]
            pairs = [(a, b)]
            while stack:
                x, y = stack.pop()
                for g in gens:
                    u, v = g[x], g[y]
                    if label[u][v] < 0:
                        label[u][v] = idx
                        stack.append((u, v))
                        pairs.append((u, v))
            members.append(pairs)
    orbs = tuple(
        Orbital(
            index=i,
            representative=reps[i],
            pairs=frozenset(members[i]),
            is_diagonal=reps[i][0] == reps[i][1],
            paired_with=label[reps[i][1]][reps[i][0]],
        )
        for i in range(len(reps))
    )
    # unordered pairs: merge each orbital with its converse
    two_sets = []
    done = set()
    for o in orbs:
        if o.is_diagonal or o.index in done:
            continue
        done.update((o.index, o.paired_with))
        pairs = set()
        for x, y in o.pairs:
            pairs.add((min(x, y), max(x, y)))
        if o.paired_with != o.index:
            for x, y in orbs[o.paired_with].pairs:
                pairs.add((min(x, y), max(x, y)))
        two_sets.append(tuple(sorted(pairs)))
    two_sets.sort(key=lambda s: s[0])
    self_paired = sum(1 for o in orbs if o.is_self_paired)
    return OrbitalData(orbs, len(orbs), self_paired, tuple(two_sets))


def _reach(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def orbital_digraph_connectivity(G: PermGroup, o: Orbital) -> Connectivity:
    if o.is_diagonal:
        raise ValueError("the diagonal orbital has no connectivity to speak of")
    n = G.degree
    out = [[] for _ in range(n)]
    und = [[] for _ in range(n)]
    rev = [[] for _ in range(n)]
    for x, y in o.pairs:
        out[x].append(y)
        rev[y].append(x)
        und[x].append(y)
        und[y].append(x)
    weak = len(_reach(und, 0)) == n
    strong = weak and len(_reach(out, 0)) == n and len(_reach(rev, 0)) == n
    if G.is_transitive and weak != strong:
        # finite transitive: every arc lies on a directed cycle
        raise RuntimeError("weakly but not strongly connected orbital digraph")
    return Connectivity(weak, strong)


def transitivity_profile(G: PermGroup) -> TransitivityProfile:
    data = G.orbital_data
    transitive = G.is_transitive
    n = G.degree
    nondiag = [o for o in data.orbitals if not o.is_diagonal]
    diag = len(data.orbitals) - len(nondiag)
    if n == 1:
        return TransitivityProfile(True, True, True, True)
    two_trans = transitive and diag == 1 and len(nondiag) == 1
    two_hom = transitive and len(data.two_subset_orbits) == 1
    generous = transitive and all(o.is_self_paired for o in data.orbitals)
    return TransitivityProfile(transitive, two_hom, two_trans, generous)


def cayley_enumerate(G: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> CayleyData:
    """Breadth-first walk of the Cayley digraph from the identity.

    Right multiplication by generators, generators tried in list order, so
    the word recorded for each element is the lexicographically least among
    its shortest words.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    e = Permutation.identity(G.degree)
    elements = [e]
    parent = [-1]
    via = [-1]
    index = {e: 0}
    depth = [0]
    truncated = False
    gens = [g.images for g in G.generators]
    head = 0
    while head < len(elements):
        cur = elements[head].images
        for gi, g in enumerate(gens):
            nxt = Permutation.__new__(Permutation)
            object.__setattr__(nxt, "images", tuple(g[x] for x in cur))
            if nxt in index:
                continue
            if len(elements) >= cap:
                truncated = True
                break
            index[nxt] = len(elements)
            elements.append(nxt)
            parent.append(head)
            via.append(gi)
            depth.append(depth[head] + 1)
        if truncated:
            break
        head += 1
    return CayleyData(
        order=len(elements),
        diameter=depth[-1],
        truncated=truncated,
        elements=elements,
        _parent=parent,
        _via=via,
        _index=index,
    )


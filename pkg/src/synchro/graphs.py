"""Simple graphs on ``0 .. n-1`` with exact clique/colouring/endomorphism search.

Adjacency rows are Python ints used as bitsets, so neighbourhood
intersections are single ``&`` operations regardless of ``n``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, product
from math import ceil
from typing import Iterable, Iterator, Sequence

from ._bits import from_mask, popcount
from .transform import Transformation, collapsible_pairs


class BudgetExhausted(RuntimeError):
    pass


class Graph:
    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: Sequence[int]):
        if len(adj) != n:
            raise ValueError("adjacency must have one row per vertex")
        for v, row in enumerate(adj):
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            if row >> n:
                raise ValueError(f"row {v} mentions a vertex >= {n}")
        for v, row in enumerate(adj):
            for u in from_mask(row):
                if not adj[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at {(v, u)}")
        self.n = n
        self.adj = tuple(adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {(u, v)} out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return from_mask(self.adj[v])

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in from_mask(self.adj[u]) if u < v]

    @property
    def edge_count(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full & ~row & ~(1 << v) for v, row in enumerate(self.adj)])

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled ``vertices[i] -> i``."""
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u, v in combinations(vertices, 2) if self.has_edge(u, v)]
        return Graph.from_edges(len(vertices), edges)

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(self.has_edge(u, v) for u, v in combinations(vs, 2))

    def is_independent(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return not any(self.has_edge(u, v) for u, v in combinations(vs, 2))

    def is_proper_colouring(self, colours: Sequence[int]) -> bool:
        return len(colours) == self.n and all(colours[u] != colours[v] for u, v in self.edges)

    def is_endomorphism(self, f: Sequence[int]) -> bool:
        return len(f) == self.n and all(self.has_edge(f[u], f[v]) for u, v in self.edges)

    def is_regular(self) -> bool:
        return len({self.degree(v) for v in range(self.n)}) <= 1


# ---------------------------------------------------------------- builders

def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def null(n: int) -> Graph:
    return Graph(n, [0] * n)


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def k_subsets(m: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), k))


def johnson(m: int, k: int, intersections: Iterable[int]) -> Graph:
    """Vertices: k-subsets of range(m) in lex order; adjacent iff the
    intersection size lies in ``intersections``."""
    if not 0 < k <= m:
        raise ValueError(f"invalid parameters m={m}, k={k}")
    allowed = set(intersections)
    if k in allowed:
        raise ValueError("intersection size k would give loops")
    verts = [frozenset(s) for s in k_subsets(m, k)]
    edges = [(i, j) for i, j in combinations(range(len(verts)), 2)
             if len(verts[i] & verts[j]) in allowed]
    return Graph.from_edges(len(verts), edges)


def line_of_complete(m: int) -> Graph:
    return johnson(m, 2, {1})


def petersen() -> Graph:
    # vertices are the 2-subsets of range(5); adjacent iff disjoint
    return johnson(5, 2, {0})


def hamming(m: int, k: int) -> Graph:
    """m-tuples over range(k), index = base-k number; adjacent iff they
    differ in exactly one coordinate."""
    if m < 1 or k < 1:
        raise ValueError(f"invalid parameters m={m}, k={k}")
    words = list(product(range(k), repeat=m))
    edges = [(i, j) for i, j in combinations(range(len(words)), 2)
             if sum(a != b for a, b in zip(words[i], words[j])) == 1]
    return Graph.from_edges(len(words), edges)


def grid(k: int) -> Graph:
    return hamming(2, k)


def complete_multipartite(parts: Sequence[int]) -> Graph:
    label = [i for i, size in enumerate(parts) for _ in range(size)]
    n = len(label)
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if label[u] != label[v]])


BUILDERS = {
    "complete": complete,
    "null": null,
    "path": path,
    "cycle": cycle,
    "petersen": petersen,
    "line_of_complete": line_of_complete,
    "johnson": johnson,
    "hamming": hamming,
    "grid": grid,
    "complete_multipartite": complete_multipartite,
}


def build(family: str, *params) -> Graph:
    try:
        fn = BUILDERS[family]
    except KeyError:
        raise ValueError(f"unknown graph family {family!r}") from None
    return fn(*params)


# ------------------------------------------------------------ clique search

def _colour_sort(adj: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring of ``cand``: vertices in colour order and
    the running colour count (an upper bound on clique size)."""
    order, bounds = [], []
    colour = 0
    rest = cand
    while rest:
        colour += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v] & ~low
            rest &= ~low
            order.append(v)
            bounds.append(colour)
    return order, bounds


def _relabel_by_degree(g: Graph) -> tuple[list[int], list[int]]:
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    pos = {v: i for i, v in enumerate(order)}
    adj = [0] * g.n
    for i, v in enumerate(order):
        row = 0
        for u in from_mask(g.adj[v]):
            row |= 1 << pos[u]
        adj[i] = row
    return order, adj


def max_clique(g: Graph) -> tuple[int, ...]:
    """A maximum clique (sorted), by colour-bounded branch and bound."""
    if g.n == 0:
        return ()
    order, adj = _relabel_by_degree(g)
    best: list[int] = []

    def expand(clique: list[int], cand: int) -> None:
        nonlocal best
        verts, bounds = _colour_sort(adj, cand)
        for i in range(len(verts) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(best):
                return
            v = verts[i]
            clique.append(v)
            nxt = cand & adj[v]
            if nxt:
                expand(clique, nxt)
            elif len(clique) > len(best):
                best = clique[:]
            clique.pop()
            cand &= ~(1 << v)

    expand([], (1 << g.n) - 1)
    return tuple(sorted(order[v] for v in best))


def clique_number(g: Graph) -> int:
    return len(max_clique(g))


def max_independent_set(g: Graph) -> tuple[int, ...]:
    return max_clique(g.complement())


def independence_number(g: Graph) -> int:
    return len(max_independent_set(g))


def cliques_of_size(g: Graph, size: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """All cliques with exactly ``size`` vertices (raises BudgetExhausted past
    ``limit`` results)."""
    out: list[tuple[int, ...]] = []
    adj = g.adj

    def expand(clique: list[int], cand: int) -> None:
        if len(clique) == size:
            out.append(tuple(clique))
            if limit is not None and len(out) > limit:
                raise BudgetExhausted("too many cliques")
            return
        verts, bounds = _colour_sort(adj, cand)
        for i in range(len(verts) - 1, -1, -1):
            if len(clique) + bounds[i] < size:
                return
            v = verts[i]
            clique.append(v)
            expand(clique, cand & adj[v])
            clique.pop()
            cand &= ~(1 << v)

    if size == 0:
        return [()]
    expand([], (1 << g.n) - 1)
    return sorted(tuple(sorted(c)) for c in out)


# --------------------------------------------------------------- colouring

@dataclass(frozen=True)
class ChromaticResult:
    lower: int
    upper: int
    colouring: tuple[int, ...]

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int:
        if not self.exact:
            raise BudgetExhausted(f"chromatic number only bracketed: [{self.lower}, {self.upper}]")
        return self.lower


@dataclass(frozen=True)
class GraphInvariants:
    clique_number: int
    chromatic_number: int
    independence_number: int
    clique: tuple[int, ...]
    colouring: tuple[int, ...]
    independent_set: tuple[int, ...]


def greedy_dsatur(g: Graph) -> list[int]:
    n = g.n
    colours = [-1] * n
    forbidden = [0] * n
    for _ in range(n):
        v = max((u for u in range(n) if colours[u] < 0),
                key=lambda u: (popcount(forbidden[u]), g.degree(u), -u))
        c = 0
        while forbidden[v] >> c & 1:
            c += 1
        colours[v] = c
        for u in from_mask(g.adj[v]):
            forbidden[u] |= 1 << c
    return colours


def _exact_cover_colouring(g: Graph, k: int, alpha: int, limit: int) -> list[int] | None:
    """k-colouring when k * alpha == n: the classes must be maximum independent
    sets partitioning the vertices, so solve an exact cover."""
    sets = cliques_of_size(g.complement(), alpha, limit=limit)
    masks = [sum(1 << v for v in s) for s in sets]
    by_vertex: list[list[int]] = [[] for _ in range(g.n)]
    for i, m in enumerate(masks):
        for v in sets[i]:
            by_vertex[v].append(i)
    full = (1 << g.n) - 1
    chosen: list[int] = []

    def solve(covered: int) -> bool:
        if covered == full:
            return True
        # cover the uncovered vertex with fewest fitting sets
        best, best_opts = None, None
        rest = full & ~covered
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            opts = [i for i in by_vertex[v] if not masks[i] & covered]
            if best is None or len(opts) < len(best_opts):
                best, best_opts = v, opts
                if not opts:
                    return False
        for i in best_opts:
            chosen.append(i)
            if solve(covered | masks[i]):
                return True
            chosen.pop()
        return False

    if not solve(0):
        return None
    colours = [0] * g.n
    for c, i in enumerate(chosen):
        for v in sets[i]:
            colours[v] = c
    return colours


def _dsatur_decide(g: Graph, k: int, seed_clique: Sequence[int], deadline: float | None) -> list[int] | None:
    """Backtracking k-colouring, highest saturation first (ties: least index).

    The seed clique is precoloured ``0..len-1`` and new colours are opened
    one at a time, which removes colour-permutation symmetry.
    """
    n = g.n
    nbrs = [from_mask(g.adj[v]) for v in range(n)]
    colours = [-1] * n
    count = [[0] * k for _ in range(n)]
    sat = [0] * n
    nodes = 0

    def assign(v: int, c: int) -> bool:
        colours[v] = c
        ok = True
        for u in nbrs[v]:
            row = count[u]
            if row[c] == 0:
                sat[u] += 1
                if colours[u] < 0 and sat[u] == k:
                    ok = False
            row[c] += 1
        return ok

    def unassign(v: int, c: int) -> None:
        colours[v] = -1
        for u in nbrs[v]:
            row = count[u]
            row[c] -= 1
            if row[c] == 0:
                sat[u] -= 1

    used = 0
    for c, v in enumerate(seed_clique):
        if not assign(v, c):
            return None
        used = c + 1

    def search(used: int, remaining: int) -> bool:
        nonlocal nodes
        if remaining == 0:
            return True
        nodes += 1
        if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
            raise BudgetExhausted("chromatic time budget")
        v, best = -1, -1
        for u in range(n):
            if colours[u] < 0 and sat[u] > best:
                v, best = u, sat[u]
        row = count[v]
        for c in range(min(k, used + 1)):
            if row[c]:
                continue
            ok = assign(v, c)
            if ok and search(max(used, c + 1), remaining - 1):
                return True
            unassign(v, c)
        return False

    if search(used, n - len(seed_clique)):
        return colours
    return None


def k_colouring(g: Graph, k: int, *, clique: Sequence[int] | None = None, alpha: int | None = None,
                deadline: float | None = None, cover_limit: int = 200_000) -> list[int] | None:
    """A proper colouring with at most k colours, or None if none exists."""
    n = g.n
    if n == 0:
        return []
    if k <= 0:
        return None
    clique = max_clique(g) if clique is None else clique
    if len(clique) > k:
        return None
    alpha = independence_number(g) if alpha is None else alpha
    if k * alpha < n:
        return None
    if k * alpha == n:
        try:
            return _exact_cover_colouring(g, k, alpha, cover_limit)
        except BudgetExhausted:
            pass
    return _dsatur_decide(g, k, clique, deadline)


def chromatic_number(g: Graph, time_budget: float | None = None) -> ChromaticResult:
    """Exact chromatic number, ascending from max(omega, ceil(n / alpha)).

    With a time budget the search may stop early; the result is then a
    bracket ``lower < upper`` with the best colouring found.
    """
    n = g.n
    if n == 0:
        return ChromaticResult(0, 0, ())
    deadline = None if time_budget is None else time.monotonic() + time_budget
    clique = max_clique(g)
    alpha = independence_number(g)
    lower = max(len(clique), ceil(n / alpha))
    best = greedy_dsatur(g)
    upper = max(best) + 1
    k = lower
    while k < upper:
        try:
            col = k_colouring(g, k, clique=clique, alpha=alpha, deadline=deadline)
        except BudgetExhausted:
            return ChromaticResult(k, upper, tuple(best))
        if col is not None:
            return ChromaticResult(k, k, tuple(col))
        k += 1
    return ChromaticResult(upper, upper, tuple(best))


def invariants(g: Graph) -> GraphInvariants:
    clique = max_clique(g)
    indep = max_independent_set(g)
    chi = chromatic_number(g)
    return GraphInvariants(len(clique), chi.value, len(indep), clique, chi.colouring, indep)


# ------------------------------------------------------- homomorphism search

@dataclass(frozen=True)
class EndoResult:
    """``status`` is ``found``, ``none`` or ``budget``."""

    status: str
    mapping: tuple[int, ...] | None = None

    @property
    def found(self) -> bool:
        return self.status == "found"


def _variable_order(g: Graph) -> list[int]:
    return sorted(range(g.n), key=lambda v: (-g.degree(v), v))


def iter_endomorphisms(
    g: Graph,
    *,
    fixed: dict[int, int] | None = None,
    collapse: tuple[int, int] | None = None,
    rank: int | None = None,
    max_rank: int | None = None,
    injective: bool = False,
    non_uniform: bool = False,
    budget: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Endomorphisms of ``g`` satisfying the constraints, in lexicographic
    order of their images along the variable order (degree descending, then
    vertex index). For vertex-transitive graphs this is plain lex order.

    Raises BudgetExhausted after ``budget`` search nodes.
    """
    n = g.n
    r_hi = n if max_rank is None else max_rank
    r_lo = min(n, 1)
    if rank is not None:
        r_hi = min(r_hi, rank)
        r_lo = rank
    if injective:
        r_lo = max(r_lo, n)
    if r_lo > r_hi:
        return
    if n == 0:
        yield ()
        return
    adj = g.adj
    full = (1 << n) - 1
    dom = [full] * n
    for v, x in (fixed or {}).items():
        dom[v] &= 1 << x
    partner: dict[int, int] = {}
    if collapse is not None:
        a, b = collapse
        if a == b:
            raise ValueError("collapse pair must be two distinct vertices")
        if g.has_edge(a, b):
            raise ValueError(f"cannot collapse the edge {collapse}")
        partner = {a: b, b: a}
    order = _variable_order(g)
    nbrs = [from_mask(adj[v]) for v in range(n)]
    images = [-1] * n
    nodes = 0
    counts = [0] * n  # kernel class sizes indexed by image

    def kernel_uniform() -> bool:
        sizes = {c for c in counts if c}
        return len(sizes) == 1

    def search(depth: int, image_mask: int, image_size: int) -> Iterator[tuple[int, ...]]:
        nonlocal nodes
        if depth == n:
            if image_size >= r_lo and (not non_uniform or not kernel_uniform()):
                yield tuple(images)
            return
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExhausted("endomorphism search budget")
        if image_size + (n - depth) < r_lo:
            return
        v = order[depth]
        cand = dom[v]
        if image_size >= r_hi:
            cand &= image_mask
        if injective:
            cand &= ~image_mask
        while cand:
            low = cand & -cand
            x = low.bit_length() - 1
            cand ^= low
            saved = []
            ok = True
            for u in nbrs[v]:
                if images[u] < 0:
                    new = dom[u] & adj[x]
                    if new != dom[u]:
                        saved.append((u, dom[u]))
                        dom[u] = new
                        if not new:
                            ok = False
                            break
            if ok and v in partner:
                u = partner[v]
                if images[u] < 0:
                    new = dom[u] & low
                    saved.append((u, dom[u]))
                    dom[u] = new
                    ok = bool(new)
                elif images[u] != x:
                    ok = False
            if ok:
                images[v] = x
                counts[x] += 1
                fresh = not image_mask & low
                yield from search(depth + 1, image_mask | low, image_size + fresh)
                counts[x] -= 1
                images[v] = -1
            for u, old in reversed(saved):
                dom[u] = old

    yield from search(0, 0, 0)


def find_endomorphism(g: Graph, *, proper: bool = False, budget: int | None = None, **constraints) -> EndoResult:
    """Lexicographically least endomorphism meeting the constraints.

    ``proper=True`` asks for a non-bijective one (rank < n).
    """
    if proper:
        mr = constraints.get("max_rank")
        constraints["max_rank"] = g.n - 1 if mr is None else min(mr, g.n - 1)
    try:
        for f in iter_endomorphisms(g, budget=budget, **constraints):
            return EndoResult("found", f)
    except BudgetExhausted:
        return EndoResult("budget")
    return EndoResult("none")


def automorphism_count(g: Graph) -> int:
    return sum(1 for _ in iter_endomorphisms(g, injective=True))


@dataclass(frozen=True)
class CoreResult:
    core: Graph
    vertices: tuple[int, ...]  # original labels of the core's vertices
    retraction: tuple[int, ...]  # original vertex -> original vertex


def core(g: Graph, budget: int | None = None) -> CoreResult:
    """Shrink along proper endomorphisms until none is left.

    The composite map is corrected by the inverse of its action on the
    final vertex set, so the returned map is a retraction.
    """
    current = list(range(g.n))
    h = list(range(g.n))
    sub = g
    while True:
        res = find_endomorphism(sub, proper=True, budget=budget)
        if res.status == "budget":
            raise BudgetExhausted("core search budget")
        if res.status == "none":
            break
        f = res.mapping
        h = [current[f[current.index(x)]] for x in h]
        image = sorted({current[y] for y in f})
        current = image
        sub = g.induced(current)
    # h restricted to the core is an automorphism sigma of it; undo sigma
    sigma = {x: h[x] for x in current}
    undo = {y: x for x, y in sigma.items()}
    retraction = tuple(undo[h[x]] for x in range(g.n))
    return CoreResult(sub, tuple(current), retraction)


def hull(g: Graph, budget: int | None = None) -> Graph:
    """Join v, w whenever no endomorphism sends them to one vertex."""
    edges = list(g.edges)
    for v, w in combinations(range(g.n), 2):
        if g.has_edge(v, w):
            continue
        res = find_endomorphism(g, collapse=(v, w), budget=budget)
        if res.status == "budget":
            raise BudgetExhausted(f"hull search budget at pair {(v, w)}")
        if res.status == "none":
            edges.append((v, w))
    return Graph.from_edges(g.n, edges)


def gr_of_monoid(gens: Sequence[Transformation]) -> Graph:
    """Join v, w iff no element of the generated monoid identifies them."""
    gens = list(gens)
    n = gens[0].degree
    coll = collapsible_pairs(gens)
    return Graph.from_edges(n, [(a, b) for a, b in combinations(range(n), 2) if (a, b) not in coll])

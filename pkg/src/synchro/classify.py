"""Where a transitive group sits in the synchronization hierarchy.

Every test works through the G-invariant graphs (unions of orbits on
2-subsets). Negative answers carry a certificate that is re-validated
against the group by orbit closure before being returned; positive answers
are only given when the underlying search was exhaustive.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil
from typing import Any, Sequence

import numpy as np

from ._bits import from_mask, popcount, to_mask
from .graphs import (
    BudgetExhausted,
    Graph,
    complete_multipartite,
    find_endomorphism,
    k_colouring,
    max_clique,
)
from .perm import (
    DEFAULT_ELEMENT_CAP,
    IntransitiveGroupError,
    PermGroup,
)
from .transform import PairAutomaton, Transformation, as_transformation


class Verdict(str, enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"

    def __str__(self) -> str:
        return self.value


YES, NO, UNKNOWN = Verdict.YES, Verdict.NO, Verdict.UNKNOWN


class WitnessError(AssertionError):
    """A certificate failed re-validation."""


def _require_transitive(G: PermGroup) -> None:
    if not G.is_transitive:
        raise IntransitiveGroupError(f"{G!r} is not transitive")


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


# ----------------------------------------------------------------- multisets

@dataclass(frozen=True)
class Multiset:
    multiplicity: tuple[int, ...]

    def __post_init__(self):
        if any(m < 0 for m in self.multiplicity):
            raise ValueError("multiplicities must be nonnegative")

    @classmethod
    def from_set(cls, points, degree: int) -> "Multiset":
        pts = set(points)
        return cls(tuple(1 if i in pts else 0 for i in range(degree)))

    @property
    def degree(self) -> int:
        return len(self.multiplicity)

    @property
    def cardinality(self) -> int:
        return sum(self.multiplicity)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.multiplicity) if m)

    @property
    def is_set(self) -> bool:
        return all(m <= 1 for m in self.multiplicity)

    @property
    def is_trivial(self) -> bool:
        """Constant, or supported on a single point."""
        return len(set(self.multiplicity)) == 1 or len(self.support) == 1

    def product(self, other: "Multiset") -> "Multiset":
        return Multiset(tuple(a * b for a, b in zip(self.multiplicity, other.multiplicity)))

    def image(self, g) -> "Multiset":
        out = [0] * self.degree
        for i, m in enumerate(self.multiplicity):
            out[g.images[i]] = m
        return Multiset(tuple(out))


# ------------------------------------------------------------------ witnesses

def _set_orbit(G: PermGroup, points: Sequence[int]) -> list[int]:
    return sorted(G.set_orbit(to_mask(points)))


def _is_partition(parts, n: int) -> bool:
    flat = sorted(x for p in parts for x in p)
    return flat == list(range(n))


@dataclass(frozen=True)
class SectionRegularWitness:
    partition: tuple[tuple[int, ...], ...]
    section: tuple[int, ...]
    source: str = ""

    def validate(self, G: PermGroup) -> None:
        n = G.degree
        if not _is_partition(self.partition, n):
            raise WitnessError("not a partition of the points")
        if not 1 < len(self.partition) < n:
            raise WitnessError("partition is trivial")
        if len({len(p) for p in self.partition}) != 1:
            raise WitnessError("section-regular partition of a transitive group must be uniform")
        part_masks = [to_mask(p) for p in self.partition]
        for img in _set_orbit(G, self.section):
            if any(popcount(img & pm) != 1 for pm in part_masks):
                raise WitnessError(f"image {from_mask(img)} is not a section")

    def as_dict(self) -> dict[str, Any]:
        return {"kind": "section-regular", "partition": [list(p) for p in self.partition],
                "section": list(self.section), "source": self.source}


def section_projection(w: SectionRegularWitness, degree: int) -> Transformation:
    """Map each point to the section point of its part; G fails to
    synchronize this map whenever ``w`` is valid."""
    images = [0] * degree
    section = set(w.section)
    for part in w.partition:
        (target,) = section.intersection(part)
        for x in part:
            images[x] = target
    return Transformation(tuple(images))


@dataclass(frozen=True)
class SeparationWitness:
    A: tuple[int, ...]
    B: tuple[int, ...]
    source: str = ""

    def validate(self, G: PermGroup) -> None:
        n = G.degree
        if len(self.A) * len(self.B) != n:
            raise WitnessError("|A|.|B| != n")
        if min(len(self.A), len(self.B)) < 2:
            raise WitnessError("A and B must be non-trivial")
        b = to_mask(self.B)
        for img in _set_orbit(G, self.A):
            if popcount(img & b) != 1:
                raise WitnessError(f"|Ag n B| != 1 for Ag = {from_mask(img)}")

    def as_dict(self) -> dict[str, Any]:
        return {"kind": "separation", "A": list(self.A), "B": list(self.B), "source": self.source}


@dataclass(frozen=True)
class PartitionPairWitness:
    P: tuple[tuple[int, ...], ...]
    Q: tuple[tuple[int, ...], ...]
    source: str = ""

    def validate(self, G: PermGroup) -> None:
        n = G.degree
        for parts in (self.P, self.Q):
            if not _is_partition(parts, n) or not 1 < len(parts) < n:
                raise WitnessError("not a non-trivial partition")
        for this, other in ((self.P, self.Q), (self.Q, self.P)):
            masks = [to_mask(p) for p in other]
            for part in this:
                for img in _set_orbit(G, part):
                    if any(popcount(img & m) != 1 for m in masks):
                        raise WitnessError("a part image misses a part of the other partition")

    def as_dict(self) -> dict[str, Any]:
        return {"kind": "partition-pair", "P": [list(p) for p in self.P],
                "Q": [list(q) for q in self.Q], "source": self.source}


@dataclass(frozen=True)
class SpreadingWitness:
    A: Multiset
    B: tuple[int, ...]
    lam: int
    source: str = ""

    def validate(self, G: PermGroup) -> None:
        n = G.degree
        a = self.A.multiplicity
        if self.A.is_trivial:
            raise WitnessError("A is a trivial multiset")
        if not 2 <= len(self.B) <= n - 1:
            raise WitnessError("B is a trivial set")
        if n % self.A.cardinality:
            raise WitnessError("|A| does not divide n")
        if Fraction(self.A.cardinality * len(self.B), n) != self.lam or self.lam <= 0:
            raise WitnessError("lambda != |A||B|/n")
        for img in _set_orbit(G, self.B):
            if sum(a[i] for i in from_mask(img)) != self.lam:
                raise WitnessError(f"|A * Bg| != {self.lam} at Bg = {from_mask(img)}")

    def as_dict(self) -> dict[str, Any]:
        return {"kind": "spreading", "A": list(self.A.multiplicity), "B": list(self.B),
                "lambda": self.lam, "source": self.source}


@dataclass(frozen=True)
class EndomorphismWitness:
    graph_label: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    mapping: tuple[int, ...]

    def validate(self, G: PermGroup) -> None:
        n = G.degree
        g = Graph.from_edges(n, self.edges)
        if not g.is_endomorphism(self.mapping):
            raise WitnessError("map is not an endomorphism of the graph")
        for h in G.generators:
            if any(not g.has_edge(h.images[u], h.images[v]) for u, v in self.edges):
                raise WitnessError("graph is not G-invariant")
        if not 0 < len(self.edges) < n * (n - 1) // 2:
            raise WitnessError("graph is trivial")

    @property
    def transformation(self) -> Transformation:
        return Transformation(self.mapping)

    def as_dict(self) -> dict[str, Any]:
        t = self.transformation
        return {"kind": "endomorphism", "graph_orbits": list(self.graph_label),
                "edges": [list(e) for e in self.edges], "map": list(self.mapping),
                "rank": t.rank, "kernel_sizes": sorted(len(c) for c in t.kernel)}


@dataclass(frozen=True)
class BlockWitness:
    blocks: tuple[tuple[int, ...], ...]

    def validate(self, G: PermGroup) -> None:
        masks = {to_mask(b) for b in self.blocks}
        if not 1 < len(self.blocks) < G.degree:
            raise WitnessError("trivial block system")
        for f in G.set_mappers:
            if any(f(m) not in masks for m in masks):
                raise WitnessError("partition is not G-invariant")

    def as_dict(self) -> dict[str, Any]:
        return {"kind": "block-system", "blocks": [list(b) for b in self.blocks]}


@dataclass(frozen=True)
class OrbitWitness:
    orbits: tuple[tuple[int, ...], ...]

    def validate(self, G: PermGroup) -> None:
        if len(self.orbits) < 2 or list(self.orbits) != G.orbits:
            raise WitnessError("orbit witness does not match")

    def as_dict(self) -> dict[str, Any]:
        return {"kind": "orbits", "orbits": [list(o) for o in self.orbits]}


@dataclass(frozen=True)
class Outcome:
    verdict: Verdict
    witness: Any = None
    reason: str = ""
    detail: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        raise TypeError("use .verdict; an Outcome is tri-state")


def _checked(G: PermGroup, verdict: Verdict, witness, reason: str = "", **detail) -> Outcome:
    if witness is not None:
        witness.validate(G)
    return Outcome(verdict, witness, reason, detail)


# ------------------------------------------------------------ invariant graphs

@dataclass
class InvariantGraph:
    label: tuple[int, ...]  # indices into two_subset_orbits
    complement_label: tuple[int, ...]
    graph: Graph

    @cached_property
    def clique(self) -> tuple[int, ...]:
        return max_clique(self.graph)

    @property
    def omega(self) -> int:
        return len(self.clique)


def invariant_graphs(G: PermGroup) -> list[InvariantGraph]:
    """All 2^r - 2 non-trivial G-invariant graphs, r = orbits on 2-subsets."""
    _require_transitive(G)
    cache = G.__dict__.get("_invariant_graphs")
    if cache is not None:
        return cache
    orbs = G.orbital_data.two_subset_orbits
    r = len(orbs)
    out = []
    everything = tuple(range(r))
    for size in range(1, r):
        for label in combinations(everything, size):
            edges = [e for i in label for e in orbs[i]]
            comp = tuple(i for i in everything if i not in label)
            out.append(InvariantGraph(label, comp, Graph.from_edges(G.degree, edges)))
    G.__dict__["_invariant_graphs"] = out
    return out


def _graph_by_label(G: PermGroup) -> dict[tuple[int, ...], InvariantGraph]:
    return {ig.label: ig for ig in invariant_graphs(G)}


def complementary_pairs(G: PermGroup) -> list[tuple[InvariantGraph, InvariantGraph]]:
    """One entry per complementary pair; the first member contains orbit 0."""
    lookup = _graph_by_label(G)
    return [(ig, lookup[ig.complement_label]) for ig in invariant_graphs(G) if 0 in ig.label]


def _endo_witness(ig: InvariantGraph, mapping) -> EndomorphismWitness:
    return EndomorphismWitness(ig.label, tuple(ig.graph.edges), tuple(mapping))


# ---------------------------------------------------------------- separation

def is_separating(G: PermGroup) -> Outcome:
    """NO iff some invariant graph has omega(graph) * omega(complement) = n."""
    _require_transitive(G)
    n = G.degree
    if _is_prime(n) or n == 1:
        return Outcome(YES, reason="prime degree")
    flagged = []
    witness = None
    for ig, co in complementary_pairs(G):
        if ig.omega * co.omega == n:
            flagged.append((ig.label, co.label))
            if witness is None:
                witness = SeparationWitness(ig.clique, co.clique, source=f"cliques of graphs {ig.label}/{co.label}")
    if witness is not None:
        return _checked(G, NO, witness, flagged=flagged)
    return Outcome(YES, reason="no complementary pair with omega product n", detail={"flagged": []})


def is_synchronizing_group(G: PermGroup, method: str = "clique-first",
                           chi_time_budget: float | None = None) -> Outcome:
    """NO iff some non-trivial invariant graph has clique number = chromatic number.

    ``clique-first`` only colours graphs with omega(g) * omega(complement) = n:
    for a vertex-transitive graph omega = chi forces omega * alpha = n.
    ``all`` colours every invariant graph (slow; used as a cross-check).
    """
    _require_transitive(G)
    n = G.degree
    if n == 1:
        return Outcome(YES, reason="degree 1")
    deadline = None if chi_time_budget is None else time.monotonic() + chi_time_budget
    lookup = _graph_by_label(G)
    inconclusive = []
    for ig in invariant_graphs(G):
        co = lookup[ig.complement_label]
        if method == "clique-first" and ig.omega * co.omega != n:
            continue
        try:
            col = k_colouring(ig.graph, ig.omega, clique=ig.clique, alpha=co.omega, deadline=deadline)
        except BudgetExhausted:
            inconclusive.append(ig.label)
            continue
        if col is not None:
            classes = _colour_classes(col)
            witness = SectionRegularWitness(classes, ig.clique, source=f"graph {ig.label}: omega = chi = {ig.omega}")
            return _checked(G, NO, witness, graph=list(ig.label))
    if inconclusive:
        return Outcome(UNKNOWN, reason="chi_time_budget", detail={"graphs": inconclusive})
    return Outcome(YES, reason=f"no invariant graph with omega = chi ({method})")


def _colour_classes(colours: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        classes.setdefault(c, []).append(v)
    return tuple(sorted((tuple(c) for c in classes.values()), key=lambda c: c[0]))


def is_partition_separating(G: PermGroup, chi_time_budget: float | None = None) -> Outcome:
    """NO iff some invariant graph has chi(graph) * chi(complement) = n.

    chi * chi' >= n always, and chi >= max(omega, n / alpha) =: L, so each
    pair needs at most two colourability tests at exact colour counts.
    """
    _require_transitive(G)
    n = G.degree
    deadline = None if chi_time_budget is None else time.monotonic() + chi_time_budget
    inconclusive = []
    for ig, co in complementary_pairs(G):
        lo = max(ig.omega, ceil(n / co.omega))
        lo_c = max(co.omega, ceil(n / ig.omega))
        if lo * lo_c > n:
            continue
        try:
            found = None
            for first, second, k1, k2 in ((ig, co, lo, lo_c), (co, ig, lo_c, lo)):
                col1 = k_colouring(first.graph, k1, clique=first.clique, alpha=second.omega, deadline=deadline)
                if col1 is None:
                    continue
                if n % k1 or n // k1 < k2:
                    break
                col2 = k_colouring(second.graph, n // k1, clique=second.clique, alpha=first.omega, deadline=deadline)
                if col2 is not None:
                    found = (first, col1, second, col2)
                break
        except BudgetExhausted:
            inconclusive.append(ig.label)
            continue
        if found:
            first, col1, second, col2 = found
            witness = PartitionPairWitness(
                _colour_classes(col1), _colour_classes(col2),
                source=f"optimal colourings of graphs {first.label}/{second.label}",
            )
            return _checked(G, NO, witness)
    if inconclusive:
        return Outcome(UNKNOWN, reason="chi_time_budget", detail={"graphs": inconclusive})
    return Outcome(YES, reason="no complementary pair with chi product n")


# ------------------------------------------------------------ maps and ranks

def synchronizes_map(G: PermGroup, f) -> bool:
    f = as_transformation(f)
    if f.degree != G.degree:
        raise ValueError("degree mismatch")
    if f.is_permutation:
        raise ValueError("f must be singular (not a permutation)")
    return PairAutomaton([as_transformation(g) for g in G.generators] + [f]).all_collapsible


def idempotent(n: int, a: int, b: int) -> Transformation:
    """Rank n-1 idempotent sending a to b and fixing everything else."""
    images = list(range(n))
    images[a] = b
    return Transformation(tuple(images))


@dataclass(frozen=True)
class RystsovReport:
    primitive: bool
    all_synchronized: bool
    failing: tuple[tuple[int, int], ...]

    @property
    def consistent(self) -> bool:
        return self.primitive == self.all_synchronized


def check_rystsov(G: PermGroup) -> RystsovReport:
    """Primitive <=> every rank n-1 idempotent is synchronized.

    One idempotent per non-diagonal orbital suffices (conjugates behave alike).
    """
    _require_transitive(G)
    n = G.degree
    failing = []
    for o in G.orbital_data.orbitals:
        if o.is_diagonal:
            continue
        a, b = o.representative
        if not synchronizes_map(G, idempotent(n, a, b)):
            failing.append((a, b))
    return RystsovReport(G.is_primitive, not failing, tuple(failing))


@dataclass(frozen=True)
class NSResult:
    ranks: frozenset[int]
    undecided: frozenset[int]
    witnesses: dict[int, EndomorphismWitness] = field(default_factory=dict, compare=False)

    @property
    def exact(self) -> bool:
        return not self.undecided


def ns_ranks(G: PermGroup, budget: int | None = 200_000) -> NSResult:
    """Ranks r for which some rank-r map is not synchronized by G.

    r is non-synchronizing iff a non-trivial invariant graph has an
    endomorphism of rank r. Ranks where a search ran out of budget (and no
    other graph settled them) are reported as undecided.
    """
    _require_transitive(G)
    n = G.degree
    found: dict[int, EndomorphismWitness] = {}
    undecided = set()
    for ig in invariant_graphs(G):
        for r in range(max(ig.omega, 1), n):
            if r in found:
                continue
            res = find_endomorphism(ig.graph, rank=r, budget=budget)
            if res.found:
                found[r] = _endo_witness(ig, res.mapping)
                undecided.discard(r)
            elif res.status == "budget":
                undecided.add(r)
    for w in found.values():
        w.validate(G)
    return NSResult(frozenset(found), frozenset(undecided - set(found)), found)


def almost_synchronizing_probe(G: PermGroup, budget: int | None = 200_000) -> Outcome:
    """Look for a proper endomorphism with non-uniform kernel of some
    non-trivial invariant graph; YES only after exhaustive searches."""
    _require_transitive(G)
    incomplete = []
    for ig in invariant_graphs(G):
        res = find_endomorphism(ig.graph, proper=True, non_uniform=True, budget=budget)
        if res.found:
            return _checked(G, NO, _endo_witness(ig, res.mapping))
        if res.status == "budget":
            incomplete.append(ig.label)
    if incomplete:
        return Outcome(UNKNOWN, reason="endo_budget", detail={"graphs": incomplete})
    return Outcome(YES, reason="every proper endomorphism of every invariant graph is uniform")


# ------------------------------------------------------------------ spreading

def _rank_mod_p(rows: np.ndarray, p: int = 2_147_483_629) -> int:
    m = rows.astype(np.int64) % p
    r = 0
    nrows, ncols = m.shape
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i, c]:
                piv = i
                break
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        nz = np.nonzero(col)[0]
        if nz.size:
            m[nz] = (m[nz] - (col[nz, None] * m[r]) % p) % p
        r += 1
        if r == nrows:
            break
    return r


def _milp_multiset(orbit_masks: list[int], n: int, card: int, lam: int, cap: int) -> list[int] | None:
    """Nonnegative integer A with sum card, A[0] = 0 and A . chi(B') = lam
    for every B' in the orbit; None when infeasible.

    Minimises the largest entry, so a set-like witness is preferred.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp

    # variables: A[0..n-1], then t = max entry
    rows = np.zeros((len(orbit_masks) + 1, n + 1))
    for i, m in enumerate(orbit_masks):
        rows[i, list(from_mask(m))] = 1.0
    rows[-1, :n] = 1.0
    rhs = np.full(len(orbit_masks) + 1, float(lam))
    rhs[-1] = float(card)
    cap_rows = np.hstack([np.eye(n), -np.ones((n, 1))])
    upper = np.full(n + 1, float(cap))
    upper[0] = 0.0
    objective = np.zeros(n + 1)
    objective[-1] = 1.0
    res = milp(
        c=objective,
        constraints=[LinearConstraint(rows, rhs, rhs), LinearConstraint(cap_rows, -np.inf, 0.0)],
        integrality=np.ones(n + 1),
        bounds=Bounds(np.zeros(n + 1), upper),
    )
    if res.status == 0 and res.x is not None:
        return [int(round(x)) for x in res.x[:n]]
    if res.status == 2:  # infeasible
        return None
    raise RuntimeError(f"MILP solver failed: {res.message}")


def _orbit_reps_containing_zero(G: PermGroup, k: int, limit: int):
    """Orbit representatives of k-subsets (each orbit meets one containing 0)."""
    seen: set[int] = set()
    visited = 0
    for rest in combinations(range(1, G.degree), k - 1):
        mask = 1 | to_mask(rest)
        visited += 1
        if visited > limit:
            raise BudgetExhausted("subset enumeration cap")
        if mask in seen:
            continue
        orbit = G.set_orbit(mask)
        seen.update(orbit)
        yield mask, orbit


def spreading_search(G: PermGroup, mult_cap: int | None = None, size_cap: int = 12,
                     subset_cap: int = 2_000_000) -> Outcome:
    """Search for a non-spreading witness (A multiset, B set).

    B runs over orbit representatives of subsets of size 2 .. n/2 (a witness
    for B also works for its complement). For each B the linear conditions
    "A . chi(Bg) constant" are first checked for a non-constant rational
    solution (rank test mod p); if one exists an integer program looks for
    A >= 0 for each allowed |A| (a divisor of n making lambda integral),
    smallest first. A[0] = 0 is imposed: a witness with every entry >= 1
    would have |A| = n and be constant, and translating by G moves a zero
    to point 0.
    """
    _require_transitive(G)
    n = G.degree
    cap = n if mult_cap is None else mult_cap
    binding = []
    if cap < n:
        binding.append("mult_cap")
    sizes = range(2, n // 2 + 1)
    divisors = [d for d in range(2, n + 1) if n % d == 0]
    examined = 0
    for k in sizes:
        if k > size_cap:
            binding.append("size_cap")
            break
        try:
            for mask, orbit in _orbit_reps_containing_zero(G, k, subset_cap):
                examined += 1
                orbit_masks = sorted(orbit)
                rows = np.zeros((len(orbit_masks), n), dtype=np.int64)
                for i, m in enumerate(orbit_masks):
                    rows[i, list(from_mask(m))] = 1
                # only constants solve the system: nothing to search
                if len(orbit_masks) > 1 and _rank_mod_p(rows[1:] - rows[0]) >= n - 1:
                    continue
                for card in divisors:
                    if card * k % n:
                        continue
                    A = _milp_multiset(orbit_masks, n, card, card * k // n, min(cap, card))
                    if A is None:
                        continue
                    witness = SpreadingWitness(Multiset(tuple(A)), from_mask(mask), card * k // n,
                                               source=f"integer point of the solution space, |A| = {card}")
                    return _checked(G, NO, witness, examined=examined)
        except BudgetExhausted:
            binding.append("subset_cap")
            break
    if binding:
        return Outcome(UNKNOWN, reason=",".join(binding), detail={"examined": examined})
    return Outcome(YES, reason="exhaustive search over all subset orbits", detail={"examined": examined})


def spreading_by_functions(G: PermGroup) -> bool:
    """Brute-force oracle: G spreading iff for every singular t and every
    non-trivial S some g has |S g t^-1| > |S|.

    Only the preimage-size profile of t matters, so t ranges over
    compositions of n into n parts (not all ones); S over subsets of size
    2 .. n-1. Meant for degree <= 8.
    """
    _require_transitive(G)
    n = G.degree
    profiles = []

    def comps(left: int, slots: int, prefix: list[int]):
        if slots == 1:
            yield prefix + [left]
            return
        for x in range(left + 1):
            yield from comps(left - x, slots - 1, prefix + [x])

    for c in comps(n, n, []):
        if any(x != 1 for x in c):
            profiles.append(c)
    P = np.array(profiles, dtype=np.int64)
    for k in range(2, n):
        for S in combinations(range(n), k):
            orbit = sorted(G.set_orbit(to_mask(S)))
            M = np.zeros((len(orbit), n), dtype=np.int64)
            for i, m in enumerate(orbit):
                M[i, list(from_mask(m))] = 1
            # |S g t^-1| = sum of preimage sizes over Sg
            best = (P @ M.T).max(axis=1)
            if (best <= k).any():
                return False
    return True


# ------------------------------------------------------------ average identity

def average_product_check(G: PermGroup, A: Multiset, B: Multiset, cap: int = DEFAULT_ELEMENT_CAP) -> Fraction:
    """Exact mean of |A * Bg| over all g in G; asserts it equals |A||B|/n."""
    n = G.degree
    if A.degree != n or B.degree != n:
        raise ValueError("degree mismatch")
    elements = G.elements(cap)
    E = np.array([g.images for g in elements], dtype=np.int64)
    a = np.array(A.multiplicity, dtype=object)
    b = np.array(B.multiplicity, dtype=object)
    # (Bg)(E[g, j]) = B(j), so |A * Bg| = sum_j A(jg) B(j)
    total = int((a[E] * b).sum())
    avg = Fraction(total, len(elements))
    expected = Fraction(A.cardinality * B.cardinality, n)
    if G.is_transitive and avg != expected:
        raise AssertionError(f"average {avg} != |A||B|/n = {expected}")
    return avg


# ---------------------------------------------------------- full classification

FLAG_ORDER = (
    "transitive", "primitive", "two_homogeneous", "two_transitive", "generously_transitive",
    "synchronizing", "separating", "partition_separating", "spreading", "almost_synchronizing_probe",
)

# (stronger, weaker): stronger YES forbids weaker NO
IMPLICATIONS = (
    ("two_transitive", "two_homogeneous"),
    ("two_homogeneous", "spreading"),
    ("two_homogeneous", "transitive"),
    ("spreading", "separating"),
    ("separating", "synchronizing"),
    ("synchronizing", "partition_separating"),
    ("synchronizing", "almost_synchronizing_probe"),
    ("synchronizing", "primitive"),
    ("partition_separating", "primitive"),
    ("almost_synchronizing_probe", "primitive"),
    ("primitive", "transitive"),
    ("generously_transitive", "transitive"),
)


class HierarchyViolation(AssertionError):
    pass


def check_hierarchy(flags: dict[str, Verdict]) -> None:
    for strong, weak in IMPLICATIONS:
        if flags.get(strong) == YES and flags.get(weak) == NO:
            raise HierarchyViolation(f"{strong} = YES but {weak} = NO")


@dataclass(frozen=True)
class Limits:
    element_cap: int = DEFAULT_ELEMENT_CAP
    endo_budget: int = 200_000
    chi_time_budget: float = 60.0
    spread_size_cap: int = 12
    spread_subset_cap: int = 2_000_000
    mult_cap: int | None = None
    probe_max_degree: int = 16


@dataclass
class ClassificationReport:
    degree: int
    rank: int
    flags: dict[str, Verdict]
    witnesses: dict[str, Any]
    reasons: dict[str, str]
    ns_ranks: NSResult | None
    timing: dict[str, float]
    name: str | None = None

    def __post_init__(self):
        check_hierarchy(self.flags)

    def as_dict(self) -> dict[str, Any]:
        ns = None
        if self.ns_ranks is not None:
            ns = {"ranks": sorted(self.ns_ranks.ranks), "undecided": sorted(self.ns_ranks.undecided),
                  "exact": self.ns_ranks.exact,
                  "witnesses": {str(r): w.as_dict() for r, w in sorted(self.ns_ranks.witnesses.items())}}
        return {
            "group": self.name,
            "degree": self.degree,
            "rank": self.rank,
            "basic": "not computed",
            "flags": {k: str(self.flags[k]) for k in FLAG_ORDER},
            "reasons": {k: self.reasons[k] for k in FLAG_ORDER if k in self.reasons},
            "witnesses": {k: w.as_dict() for k, w in self.witnesses.items()},
            "ns_ranks": ns,
            "timing": {k: round(v, 4) for k, v in self.timing.items()},
        }


def _transversal_partition(blocks) -> tuple[tuple[int, ...], ...]:
    size = len(blocks[0])
    return tuple(tuple(sorted(b[i] for b in blocks)) for i in range(size))


def classify_group(G: PermGroup, limits: Limits | None = None, with_ns: bool = True) -> ClassificationReport:
    """Run the tests in shortcut order and assemble a report.

    Order: transitivity, primitivity, prime-degree shortcut, separation via
    clique pairs, synchronization via colouring of flagged graphs only,
    partition separation, spreading, then the bounded probes.
    """
    lim = limits or Limits()
    n = G.degree
    flags: dict[str, Verdict] = {}
    witnesses: dict[str, Any] = {}
    reasons: dict[str, str] = {}
    timing: dict[str, float] = {}
    t0 = time.perf_counter()

    def put(name: str, outcome: Outcome, t_start: float | None = None):
        flags[name] = outcome.verdict
        if outcome.witness is not None:
            witnesses[name] = outcome.witness
        if outcome.reason:
            reasons[name] = outcome.reason
        if t_start is not None:
            timing[name] = time.perf_counter() - t_start

    prof = G.transitivity
    flags["two_homogeneous"] = YES if prof.two_homogeneous else NO
    flags["two_transitive"] = YES if prof.two_transitive else NO
    flags["generously_transitive"] = YES if prof.generously_transitive else NO
    downstream = ("primitive", "synchronizing", "separating", "partition_separating",
                  "spreading", "almost_synchronizing_probe")

    if not prof.transitive:
        put("transitive", _checked(G, NO, OrbitWitness(tuple(G.orbits))))
        for name in downstream:
            flags[name] = NO
            reasons[name] = "not applicable: intransitive"
        timing["total"] = time.perf_counter() - t0
        return ClassificationReport(n, G.rank, flags, witnesses, reasons, None, timing, G.name)
    flags["transitive"] = YES

    t = time.perf_counter()
    blocks = G.block_analysis
    if not blocks.is_primitive:
        system = blocks.systems[0]
        put("primitive", _checked(G, NO, BlockWitness(system)), t)
        trans = _transversal_partition(system)
        put("synchronizing", _checked(G, NO, SectionRegularWitness(system, trans[0], source="block system")))
        sep = SeparationWitness(system[0], trans[0], source="block and block transversal")
        put("separating", _checked(G, NO, sep))
        put("partition_separating", _checked(G, NO, PartitionPairWitness(system, trans, source="blocks and transversals")))
        put("spreading", _checked(G, NO, SpreadingWitness(Multiset.from_set(sep.A, n), sep.B, 1, source="separation witness")))
        parts = [len(b) for b in system]
        relabel = [x for b in system for x in b]
        mp = complete_multipartite(parts)
        edges = tuple(sorted((min(relabel[u], relabel[v]), max(relabel[u], relabel[v])) for u, v in mp.edges))
        collapse = list(range(n))
        collapse[system[0][1]] = system[0][0]
        label = tuple(i for i, orb in enumerate(G.orbital_data.two_subset_orbits) if orb[0] in set(edges))
        put("almost_synchronizing_probe", _checked(G, NO, EndomorphismWitness(label, edges, tuple(collapse))))
        ns = None
        if with_ns and n <= lim.probe_max_degree:
            t = time.perf_counter()
            ns = ns_ranks(G, lim.endo_budget)
            timing["ns_ranks"] = time.perf_counter() - t
        timing["total"] = time.perf_counter() - t0
        return ClassificationReport(n, G.rank, flags, witnesses, reasons, ns, timing, G.name)
    flags["primitive"] = YES
    timing["primitive"] = time.perf_counter() - t

    t = time.perf_counter()
    sep = is_separating(G)
    put("separating", sep, t)

    t = time.perf_counter()
    if sep.verdict == YES:
        put("synchronizing", Outcome(YES, reason="implied by separating"), t)
    else:
        put("synchronizing", is_synchronizing_group(G, chi_time_budget=lim.chi_time_budget), t)

    t = time.perf_counter()
    if flags["synchronizing"] == YES:
        put("partition_separating", Outcome(YES, reason="implied by synchronizing"), t)
    else:
        put("partition_separating", is_partition_separating(G, lim.chi_time_budget), t)

    t = time.perf_counter()
    if prof.two_homogeneous:
        put("spreading", Outcome(YES, reason="implied by 2-homogeneity"), t)
    elif sep.verdict == NO:
        w = sep.witness
        put("spreading", _checked(G, NO, SpreadingWitness(Multiset.from_set(w.A, n), w.B, 1, source="separation witness")), t)
    else:
        put("spreading", spreading_search(G, lim.mult_cap, lim.spread_size_cap, lim.spread_subset_cap), t)

    t = time.perf_counter()
    ns = None
    if flags["synchronizing"] == YES:
        put("almost_synchronizing_probe", Outcome(YES, reason="implied by synchronizing"), t)
        ns = NSResult(frozenset(), frozenset()) if with_ns else None
    elif n <= lim.probe_max_degree:
        put("almost_synchronizing_probe", almost_synchronizing_probe(G, lim.endo_budget), t)
        if with_ns:
            t = time.perf_counter()
            ns = ns_ranks(G, lim.endo_budget)
            timing["ns_ranks"] = time.perf_counter() - t
    else:
        put("almost_synchronizing_probe", Outcome(UNKNOWN, reason="probe_max_degree"), t)
    timing["total"] = time.perf_counter() - t0
    return ClassificationReport(n, G.rank, flags, witnesses, reasons, ns, timing, G.name)

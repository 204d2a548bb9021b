"""Named permutation groups used as fixtures and from the command line."""

from __future__ import annotations

from itertools import combinations, product
from typing import Callable

from .perm import Permutation, PermGroup


def _perm(images) -> Permutation:
    return Permutation(tuple(images))


def cyclic(n: int) -> PermGroup:
    return PermGroup([_perm((i + 1) % n for i in range(n))], name=f"C{n}")


def dihedral(n: int) -> PermGroup:
    """Symmetries of the n-gon (order 2n) on its n vertices."""
    rot = _perm((i + 1) % n for i in range(n))
    ref = _perm((-i) % n for i in range(n))
    return PermGroup([rot, ref], name=f"D{n}")


def symmetric(n: int) -> PermGroup:
    if n == 1:
        return PermGroup([Permutation.identity(1)], name="S1")
    gens = [_perm([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(_perm((i + 1) % n for i in range(n)))
    return PermGroup(gens, name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        raise ValueError("alternating groups from n = 3")
    gens = [Permutation.from_cycles([(i, i + 1, i + 2)], n) for i in range(n - 2)]
    return PermGroup(gens, name=f"A{n}")


def coxeter_symmetric(k: int) -> PermGroup:
    """S_k generated by the adjacent transpositions (i, i+1)."""
    gens = [Permutation.from_cycles([(i, i + 1)], k) for i in range(k - 1)]
    return PermGroup(gens, name=f"S{k}-coxeter")


def _primitive_root(p: int) -> int:
    for a in range(2, p):
        if all(pow(a, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return a
    return 1


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def affine_line(p: int, d: int | None = None) -> PermGroup:
    """x -> x + 1 and x -> a x on Z_p, with a of multiplicative order d
    (default p - 1, the full group AGL(1, p))."""
    d = p - 1 if d is None else d
    if (p - 1) % d:
        raise ValueError(f"{d} does not divide {p - 1}")
    a = pow(_primitive_root(p), (p - 1) // d, p)
    gens = [_perm((x + 1) % p for x in range(p))]
    if d > 1:
        gens.append(_perm((a * x) % p for x in range(p)))
    return PermGroup(gens, name=f"C{p}:C{d}" if d < p - 1 else f"AGL(1,{p})")


def psl32() -> PermGroup:
    """PSL(3,2) on the 7 points of the Fano plane (lines {i, i+1, i+3} mod 7)."""
    frob = _perm((2 * x) % 7 for x in range(7))
    shift = _perm((x + 1) % 7 for x in range(7))
    inv = Permutation.from_cycles([(2, 4), (5, 6)], 7)
    return PermGroup([shift, frob, inv], name="PSL(3,2)")


def on_subsets(m: int, k: int, *, coxeter: bool = False) -> PermGroup:
    """S_m acting on the k-subsets of range(m) (points in lex order)."""
    subsets = list(combinations(range(m), k))
    index = {s: i for i, s in enumerate(subsets)}
    base = coxeter_symmetric(m) if coxeter else symmetric(m)
    gens = []
    for g in base.generators:
        gens.append(_perm(index[tuple(sorted(g.images[x] for x in s))] for s in subsets))
    label = f"S{m} on {k}-sets" + (" (coxeter)" if coxeter else "")
    return PermGroup(gens, name=label)


def petersen_aut() -> PermGroup:
    """Aut(Petersen) = S_5 on 2-subsets; vertices as in graphs.petersen()."""
    g = on_subsets(5, 2)
    g.name = "Aut(Petersen)"
    return g


def product_wreath(k: int, m: int) -> PermGroup:
    """S_k wr S_m in product action on range(k)^m (index = base-k number);
    the automorphism group of the Hamming graph H(m, k)."""
    words = list(product(range(k), repeat=m))
    index = {w: i for i, w in enumerate(words)}
    gens = []
    for g in symmetric(k).generators:
        # act on the first coordinate
        gens.append(_perm(index[(g.images[w[0]],) + w[1:]] for w in words))
    if m > 1:
        for h in symmetric(m).generators:
            gens.append(_perm(index[tuple(w[h.images.index(i)] for i in range(m))] for w in words))
    return PermGroup(gens, name=f"S{k} wr S{m} (product)")


def grid_group() -> PermGroup:
    g = product_wreath(3, 2)
    g.name = "S3 wr S2 (3x3 grid)"
    return g


def imprimitive_wreath(k: int, m: int) -> PermGroup:
    """S_k wr S_m on m blocks of size k: point b*k + i is i in block b."""
    n = k * m
    gens = []
    for g in symmetric(k).generators:
        gens.append(_perm(g.images[x % k] if x < k else x for x in range(n)))
    if m > 1:
        for h in symmetric(m).generators:
            gens.append(_perm(h.images[x // k] * k + x % k for x in range(n)))
    return PermGroup(gens, name=f"S{k} wr S{m} (imprimitive)")


GROUPS: dict[str, Callable[..., PermGroup]] = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "alternating": alternating,
    "coxeter": coxeter_symmetric,
    "affine": affine_line,
    "psl32": psl32,
    "subsets": on_subsets,
    "petersen-aut": petersen_aut,
    "product-wreath": product_wreath,
    "grid": grid_group,
    "imprimitive-wreath": imprimitive_wreath,
}


def named_group(spec: str) -> PermGroup:
    """``"petersen-aut"``, ``"cyclic:7"``, ``"subsets:6:2"`` and so on."""
    name, *args = spec.split(":")
    try:
        fn = GROUPS[name]
    except KeyError:
        raise ValueError(f"unknown group {name!r}; known: {', '.join(sorted(GROUPS))}") from None
    return fn(*(int(a) for a in args))


def transitive_catalogue() -> list[PermGroup]:
    """Mixed primitive/imprimitive transitive groups of degree <= 16."""
    return [
        cyclic(4), cyclic(6), cyclic(8), cyclic(9), dihedral(4), dihedral(6),
        imprimitive_wreath(2, 3), imprimitive_wreath(3, 2), imprimitive_wreath(2, 4),
        on_subsets(4, 2),
        cyclic(5), dihedral(5), affine_line(5), symmetric(5), alternating(5),
        cyclic(7), affine_line(7, 3), affine_line(7), psl32(),
        petersen_aut(), grid_group(), product_wreath(2, 3), on_subsets(6, 2),
        cyclic(11), affine_line(11, 5), cyclic(13), affine_line(13, 4),
        alternating(4), symmetric(4), on_subsets(5, 2, coxeter=True),
    ]


def prime_degree_catalogue() -> list[PermGroup]:
    return [
        cyclic(5), dihedral(5), affine_line(5), alternating(5), symmetric(5),
        cyclic(7), dihedral(7), affine_line(7, 3), affine_line(7), psl32(), symmetric(7),
        cyclic(11), dihedral(11), affine_line(11, 5), affine_line(11),
        cyclic(13), dihedral(13), affine_line(13, 3), affine_line(13, 4), affine_line(13),
    ]

"""Finite algebras of six locally finite varieties, with total morphism graphs.

Every algebra carries an explicit element enumeration, so elements are plain
indices 0..size-1 and morphisms are index arrays; this keeps every law
exhaustively checkable.  Boolean algebras and bounded distributive lattices
are stored by their dual presentations (atom count, join-irreducible poset)
and expand elements on demand:

  BA      index = bitmask of atoms
  DL01    index = position in the sorted list of downset masks of the JI poset
  JSL0    index into an explicit join table with least element
  Z2VECT  index = coordinate bit vector
  SET     bare index
  POS     index into an explicit order matrix
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .config import DEFAULT_LIMITS, Limits
from .errors import ResourceExceededError, TagMismatchError

Matrix = tuple[tuple[bool, ...], ...]


class VarietyTag(str, Enum):
    BA = "BA"
    DL01 = "DL01"
    JSL0 = "JSL0"
    Z2VECT = "Z2VECT"
    SET = "SET"
    POS = "POS"


C_SIDE = frozenset({VarietyTag.BA, VarietyTag.DL01, VarietyTag.JSL0, VarietyTag.Z2VECT})
D_SIDE = frozenset({VarietyTag.SET, VarietyTag.POS, VarietyTag.JSL0, VarietyTag.Z2VECT})


@dataclass(frozen=True)
class BoolAlg:
    """Finite boolean algebra presented by its atom count."""

    atoms: int

    tag = VarietyTag.BA

    @property
    def size(self) -> int:
        return 1 << self.atoms

    @property
    def top(self) -> int:
        return (1 << self.atoms) - 1


@dataclass(frozen=True)
class DistLat:
    """Bounded distributive lattice presented by its join-irreducible poset."""

    ji_leq: Matrix

    tag = VarietyTag.DL01

    @property
    def n_ji(self) -> int:
        return len(self.ji_leq)

    @property
    def size(self) -> int:
        return len(downset_masks(self))


@dataclass(frozen=True)
class JoinSemilattice:
    """Join-semilattice with least element, as an explicit join table."""

    join: tuple[tuple[int, ...], ...]
    zero: int

    tag = VarietyTag.JSL0

    @property
    def size(self) -> int:
        return len(self.join)


@dataclass(frozen=True)
class VectZ2:
    """Vector space over the two-element field; elements are bit vectors."""

    dim: int

    tag = VarietyTag.Z2VECT

    @property
    def size(self) -> int:
        return 1 << self.dim


@dataclass(frozen=True)
class FinSet:
    n: int

    tag = VarietyTag.SET

    @property
    def size(self) -> int:
        return self.n


@dataclass(frozen=True)
class FinPoset:
    leq: Matrix

    tag = VarietyTag.POS

    @property
    def size(self) -> int:
        return len(self.leq)


FinAlgebra = BoolAlg | DistLat | JoinSemilattice | VectZ2 | FinSet | FinPoset


@dataclass(frozen=True)
class FinElement:
    """An element of a finite algebra, by owner and enumeration index."""

    algebra: FinAlgebra
    index: int


@dataclass(frozen=True)
class FinMorphism:
    dom: FinAlgebra
    cod: FinAlgebra
    graph: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.graph[x]

    def then(self, other: "FinMorphism") -> "FinMorphism":
        """Composite that applies self first, then other."""
        if self.cod != other.dom:
            raise TagMismatchError("composition endpoints do not match")
        return FinMorphism(self.dom, other.cod, tuple(other.graph[v] for v in self.graph))


def identity(alg: FinAlgebra) -> FinMorphism:
    return FinMorphism(alg, alg, tuple(range(alg.size)))


def is_surjective(m: FinMorphism) -> bool:
    return len(set(m.graph)) == m.cod.size


def is_injective(m: FinMorphism) -> bool:
    return len(set(m.graph)) == len(m.graph)


# ---------------------------------------------------------------------------
# presentations: validation and derived structure


def make_poset(leq: Matrix) -> FinPoset:
    n = len(leq)
    for i in range(n):
        if not leq[i][i]:
            raise ValueError("order not reflexive")
        for j in range(n):
            if leq[i][j] and leq[j][i] and i != j:
                raise ValueError("order not antisymmetric")
            for k in range(n):
                if leq[i][j] and leq[j][k] and not leq[i][k]:
                    raise ValueError("order not transitive")
    return FinPoset(leq)


def make_jsl(join: Sequence[Sequence[int]], zero: int) -> JoinSemilattice:
    table = tuple(tuple(row) for row in join)
    n = len(table)
    for x in range(n):
        if table[x][x] != x:
            raise ValueError("join not idempotent")
        if table[x][zero] != x or table[zero][x] != x:
            raise ValueError("zero is not a unit for join")
        for y in range(n):
            if table[x][y] != table[y][x]:
                raise ValueError("join not commutative")
            for z in range(n):
                if table[table[x][y]][z] != table[x][table[y][z]]:
                    raise ValueError("join not associative")
    return JoinSemilattice(table, zero)


def make_distlat(ji_leq: Matrix) -> DistLat:
    make_poset(ji_leq)
    return DistLat(ji_leq)


@lru_cache(maxsize=None)
def downset_masks(alg: DistLat) -> tuple[int, ...]:
    """All downset masks of the JI poset, ascending."""
    k = alg.n_ji
    below = [sum(1 << i for i in range(k) if alg.ji_leq[i][j]) for j in range(k)]
    out = []
    for mask in range(1 << k):
        if all(below[j] & mask == below[j] for j in range(k) if mask >> j & 1):
            out.append(mask)
    return tuple(out)


@lru_cache(maxsize=None)
def _downset_index(alg: DistLat) -> dict[int, int]:
    return {m: i for i, m in enumerate(downset_masks(alg))}


def dl_mask(alg: DistLat, index: int) -> int:
    return downset_masks(alg)[index]


def dl_index(alg: DistLat, mask: int) -> int:
    return _downset_index(alg)[mask]


def jsl_leq(alg: JoinSemilattice, x: int, y: int) -> bool:
    return alg.join[x][y] == y


@lru_cache(maxsize=None)
def jsl_top(alg: JoinSemilattice) -> int:
    t = alg.zero
    for x in range(alg.size):
        t = alg.join[t][x]
    return t


@lru_cache(maxsize=None)
def jsl_meet_table(alg: JoinSemilattice) -> tuple[tuple[int, ...], ...]:
    """Binary meets; they exist in any finite join-semilattice with zero."""
    n = alg.size
    table = []
    for x in range(n):
        row = []
        for y in range(n):
            m = alg.zero
            for z in range(n):
                if jsl_leq(alg, z, x) and jsl_leq(alg, z, y):
                    m = alg.join[m][z]
            if not (jsl_leq(alg, m, x) and jsl_leq(alg, m, y)):
                raise ValueError("join table does not admit meets")
            row.append(m)
        table.append(tuple(row))
    return tuple(table)


def jsl_from_masks(family: Iterable[int]) -> tuple[JoinSemilattice, tuple[int, ...]]:
    """Join-semilattice structure on a union-closed family of masks with 0.

    Returns the algebra together with the ascending mask enumeration.
    """
    masks = tuple(sorted(set(family)))
    index = {m: i for i, m in enumerate(masks)}
    if 0 not in index:
        raise ValueError("family must contain the empty mask")
    join = tuple(tuple(index[x | y] for y in masks) for x in masks)
    return JoinSemilattice(join, index[0]), masks


def leq(alg: FinAlgebra, x: int, y: int) -> bool:
    """The natural order where one exists; discrete comparison otherwise."""
    match alg:
        case BoolAlg():
            return x & y == x
        case DistLat():
            return dl_mask(alg, x) & dl_mask(alg, y) == dl_mask(alg, x)
        case JoinSemilattice():
            return jsl_leq(alg, x, y)
        case FinPoset():
            return alg.leq[x][y]
        case _:
            return x == y


# ---------------------------------------------------------------------------
# distinguished objects


def two_element_algebra(tag: VarietyTag) -> FinAlgebra:
    """The two-element output algebra of the coalgebra side."""
    match tag:
        case VarietyTag.BA:
            return BoolAlg(1)
        case VarietyTag.DL01:
            return DistLat(((True,),))
        case VarietyTag.JSL0:
            return JoinSemilattice(((0, 1), (1, 1)), 0)
        case VarietyTag.Z2VECT:
            return VectZ2(1)
    raise TagMismatchError(f"{tag} is not an output-side variety")


def free_on_one(tag: VarietyTag) -> FinAlgebra:
    """The free algebra on one generator of the algebra side."""
    match tag:
        case VarietyTag.SET:
            return FinSet(1)
        case VarietyTag.POS:
            return FinPoset(((True,),))
        case VarietyTag.JSL0:
            return JoinSemilattice(((0, 1), (1, 1)), 0)
        case VarietyTag.Z2VECT:
            return VectZ2(1)
    raise TagMismatchError(f"{tag} is not an algebra-side variety")


def free_generator_index(tag: VarietyTag) -> int:
    """Index of the generator inside free_on_one(tag)."""
    return 0 if tag in (VarietyTag.SET, VarietyTag.POS) else 1


# ---------------------------------------------------------------------------
# operations, constants, and morphism validation per tag


def constants(alg: FinAlgebra) -> list[int]:
    match alg:
        case BoolAlg():
            return [0, alg.top]
        case DistLat():
            return [dl_index(alg, 0), dl_index(alg, (1 << alg.n_ji) - 1)]
        case JoinSemilattice():
            return [alg.zero]
        case VectZ2():
            return [0]
        case _:
            return []


def unary_ops(alg: FinAlgebra) -> list[Callable[[int], int]]:
    match alg:
        case BoolAlg():
            return [lambda x: alg.top ^ x]
        case _:
            return []


def binary_ops(alg: FinAlgebra) -> list[Callable[[int, int], int]]:
    match alg:
        case BoolAlg():
            return [lambda x, y: x | y, lambda x, y: x & y]
        case DistLat():
            return [
                lambda x, y: dl_index(alg, dl_mask(alg, x) | dl_mask(alg, y)),
                lambda x, y: dl_index(alg, dl_mask(alg, x) & dl_mask(alg, y)),
            ]
        case JoinSemilattice():
            return [lambda x, y: alg.join[x][y]]
        case VectZ2():
            return [lambda x, y: x ^ y]
        case _:
            return []


def validate_morphism(m: FinMorphism) -> bool:
    """Exhaustively check the preservation laws of the common variety."""
    if m.dom.tag != m.cod.tag:
        raise TagMismatchError(f"morphism between {m.dom.tag} and {m.cod.tag}")
    if len(m.graph) != m.dom.size or any(not 0 <= v < m.cod.size for v in m.graph):
        return False
    g = m.graph
    dom, cod = m.dom, m.cod
    match dom:
        case BoolAlg():
            assert isinstance(cod, BoolAlg)
            if g[0] != 0 or g[dom.top] != cod.top:
                return False
            for x in range(dom.size):
                image = 0
                for i in range(dom.atoms):
                    if x >> i & 1:
                        image |= g[1 << i]
                if g[x] != image or g[dom.top ^ x] != cod.top ^ g[x]:
                    return False
            return True
        case DistLat():
            assert isinstance(cod, DistLat)
            masks = downset_masks(dom)
            cod_index = _downset_index(cod)
            cod_masks = downset_masks(cod)
            if g[dl_index(dom, 0)] != cod_index[0]:
                return False
            if g[dl_index(dom, (1 << dom.n_ji) - 1)] != cod_index[(1 << cod.n_ji) - 1]:
                return False
            n = dom.size
            for x in range(n):
                for y in range(x, n):
                    join = _downset_index(dom)[masks[x] | masks[y]]
                    meet = _downset_index(dom)[masks[x] & masks[y]]
                    if cod_masks[g[join]] != cod_masks[g[x]] | cod_masks[g[y]]:
                        return False
                    if cod_masks[g[meet]] != cod_masks[g[x]] & cod_masks[g[y]]:
                        return False
            return True
        case JoinSemilattice():
            assert isinstance(cod, JoinSemilattice)
            if g[dom.zero] != cod.zero:
                return False
            n = dom.size
            for x in range(n):
                for y in range(x, n):
                    if g[dom.join[x][y]] != cod.join[g[x]][g[y]]:
                        return False
            return True
        case VectZ2():
            if g[0] != 0:
                return False
            for x in range(dom.size):
                image = 0
                for i in range(dom.dim):
                    if x >> i & 1:
                        image ^= g[1 << i]
                if g[x] != image:
                    return False
            return True
        case FinSet():
            return True
        case FinPoset():
            assert isinstance(cod, FinPoset)
            n = dom.size
            for x in range(n):
                for y in range(n):
                    if dom.leq[x][y] and not cod.leq[g[x]][g[y]]:
                        return False
            return True
    raise TypeError(f"not a FinAlgebra: {dom!r}")


def is_order_reflecting(m: FinMorphism) -> bool:
    """For ordered carriers: the map reflects the natural order (embedding)."""
    n = m.dom.size
    for x in range(n):
        for y in range(n):
            if leq(m.cod, m.graph[x], m.graph[y]) and not leq(m.dom, x, y):
                return False
    return True


# ---------------------------------------------------------------------------
# subalgebra generation and image factorization


def gaussian_basis(vectors: Iterable[int]) -> list[int]:
    basis: list[int] = []
    for v in sorted(set(vectors)):
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    basis.sort()
    return basis


def _xor_decompose(basis: list[int], v: int) -> int | None:
    """Coefficients of v over the sorted basis, or None if outside the span."""
    coeffs = 0
    for i in range(len(basis) - 1, -1, -1):
        b = basis[i]
        if v ^ b < v:
            v ^= b
            coeffs |= 1 << i
    return coeffs if v == 0 else None


def present_subset(
    amb: FinAlgebra, subset: Sequence[int]
) -> tuple[FinAlgebra, FinMorphism, dict[int, int]]:
    """Present a closed subset in its own right.

    Returns (algebra, inclusion into amb, ambient index -> subset index).
    The subset must be closed under the variety operations and constants.
    """
    subset = sorted(set(subset))
    match amb:
        case BoolAlg():
            nonzero = [m for m in subset if m]
            atoms = [m for m in nonzero if not any(o and o & m == o and o != m for o in nonzero)]
            k = len(atoms)
            if 1 << k != len(subset):
                raise ValueError("subset is not a boolean subalgebra")
            sub = BoolAlg(k)
            incl = []
            for idx in range(1 << k):
                v = 0
                for i in range(k):
                    if idx >> i & 1:
                        v |= atoms[i]
                incl.append(v)
            to_sub = {v: i for i, v in enumerate(incl)}
            return sub, FinMorphism(sub, amb, tuple(incl)), to_sub
        case DistLat():
            masks = [dl_mask(amb, i) for i in subset]
            return _present_mask_lattice(masks, lambda m: dl_index(amb, m), amb)
        case JoinSemilattice():
            index = {v: i for i, v in enumerate(subset)}
            join = tuple(tuple(index[amb.join[x][y]] for y in subset) for x in subset)
            sub = JoinSemilattice(join, index[amb.zero])
            return sub, FinMorphism(sub, amb, tuple(subset)), index
        case VectZ2():
            basis = gaussian_basis(subset)
            r = len(basis)
            if 1 << r != len(subset):
                raise ValueError("subset is not a linear subspace")
            sub = VectZ2(r)
            incl = []
            for idx in range(1 << r):
                v = 0
                for i in range(r):
                    if idx >> i & 1:
                        v ^= basis[i]
                incl.append(v)
            to_sub = {v: i for i, v in enumerate(incl)}
            return sub, FinMorphism(sub, amb, tuple(incl)), to_sub
        case FinSet():
            sub = FinSet(len(subset))
            return sub, FinMorphism(sub, amb, tuple(subset)), {v: i for i, v in enumerate(subset)}
        case FinPoset():
            order = tuple(tuple(amb.leq[x][y] for y in subset) for x in subset)
            sub = FinPoset(order)
            return sub, FinMorphism(sub, amb, tuple(subset)), {v: i for i, v in enumerate(subset)}
    raise TypeError(f"not a FinAlgebra: {amb!r}")


def mask_lattice_presentation(masks: Iterable[int]) -> tuple[DistLat, tuple[int, ...]]:
    """Present a 01-sublattice of sets (given as masks) by its JI poset.

    Returns the lattice together with, per element index, the original mask.
    """
    family = sorted(set(masks))
    ji = []
    for s in family:
        if s == 0:
            continue
        below = [t for t in family if t & s == t and t != s]
        covers = [t for t in below if not any(u & t == t and t != u for u in below)]
        if len(covers) == 1:
            ji.append(s)
    ji_leq = tuple(tuple(ji[i] & ji[j] == ji[i] for j in range(len(ji))) for i in range(len(ji)))
    sub = DistLat(ji_leq)
    if sub.size != len(family):
        raise ValueError("family is not a distributive lattice of sets")
    element_masks = []
    for dmask in downset_masks(sub):
        v = 0
        for i in range(len(ji)):
            if dmask >> i & 1:
                v |= ji[i]
        element_masks.append(v)
    return sub, tuple(element_masks)


def _present_mask_lattice(masks: Sequence[int], to_amb_index, amb):
    sub, element_masks = mask_lattice_presentation(masks)
    incl = []
    to_sub = {}
    for idx, v in enumerate(element_masks):
        incl.append(to_amb_index(v))
        to_sub[to_amb_index(v)] = idx
    return sub, FinMorphism(sub, amb, tuple(incl)), to_sub


def generate_subalgebra(
    amb: FinAlgebra,
    gens: Iterable[int],
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[FinAlgebra, FinMorphism]:
    """Smallest subalgebra containing gens: worklist closure, then presentation."""
    closed = set(gens) | set(constants(amb))
    unary = unary_ops(amb)
    binary = binary_ops(amb)
    queue = deque(sorted(closed))
    while queue:
        x = queue.popleft()
        new = [op(x) for op in unary]
        for y in sorted(closed):
            for op in binary:
                new.append(op(x, y))
                new.append(op(y, x))
        for v in new:
            if v not in closed:
                if len(closed) >= limits.max_carrier:
                    raise ResourceExceededError("subalgebra closure exceeded the carrier cap")
                closed.add(v)
                queue.append(v)
    sub, incl, _ = present_subset(amb, sorted(closed))
    return sub, incl


def image_factorize(m: FinMorphism) -> tuple[FinMorphism, FinMorphism]:
    """Factor m as a surjection onto its image followed by an inclusion."""
    if m.dom.tag != m.cod.tag:
        raise TagMismatchError("cannot factorize a cross-variety map")
    image = sorted(set(m.graph))
    mid, incl, to_sub = present_subset(m.cod, image)
    epi = FinMorphism(m.dom, mid, tuple(to_sub[v] for v in m.graph))
    return epi, incl


# ---------------------------------------------------------------------------
# products


def product_algebra(a: FinAlgebra, b: FinAlgebra) -> tuple[FinAlgebra, FinMorphism, FinMorphism]:
    if a.tag != b.tag:
        raise TagMismatchError(f"product of {a.tag} and {b.tag}")
    match (a, b):
        case (BoolAlg(), BoolAlg()):
            prod = BoolAlg(a.atoms + b.atoms)
            low = (1 << a.atoms) - 1
            p1 = tuple(x & low for x in range(prod.size))
            p2 = tuple(x >> a.atoms for x in range(prod.size))
            return prod, FinMorphism(prod, a, p1), FinMorphism(prod, b, p2)
        case (DistLat(), DistLat()):
            ka, kb = a.n_ji, b.n_ji

            def block(i: int, j: int) -> bool:
                if i < ka and j < ka:
                    return a.ji_leq[i][j]
                if i >= ka and j >= ka:
                    return b.ji_leq[i - ka][j - ka]
                return False

            prod = DistLat(tuple(tuple(block(i, j) for j in range(ka + kb)) for i in range(ka + kb)))
            low = (1 << ka) - 1
            p1 = tuple(dl_index(a, dl_mask(prod, x) & low) for x in range(prod.size))
            p2 = tuple(dl_index(b, dl_mask(prod, x) >> ka) for x in range(prod.size))
            return prod, FinMorphism(prod, a, p1), FinMorphism(prod, b, p2)
        case (JoinSemilattice(), JoinSemilattice()):
            nb = b.size
            pairs = [(x, y) for x in range(a.size) for y in range(nb)]
            join = tuple(
                tuple(a.join[x1][x2] * nb + b.join[y1][y2] for (x2, y2) in pairs)
                for (x1, y1) in pairs
            )
            prod = JoinSemilattice(join, a.zero * nb + b.zero)
            p1 = tuple(x for (x, _) in pairs)
            p2 = tuple(y for (_, y) in pairs)
            return prod, FinMorphism(prod, a, p1), FinMorphism(prod, b, p2)
        case (VectZ2(), VectZ2()):
            prod = VectZ2(a.dim + b.dim)
            low = (1 << a.dim) - 1
            p1 = tuple(x & low for x in range(prod.size))
            p2 = tuple(x >> a.dim for x in range(prod.size))
            return prod, FinMorphism(prod, a, p1), FinMorphism(prod, b, p2)
        case (FinSet(), FinSet()):
            prod = FinSet(a.size * b.size)
            p1 = tuple(x // b.size for x in range(prod.size))
            p2 = tuple(x % b.size for x in range(prod.size))
            return prod, FinMorphism(prod, a, p1), FinMorphism(prod, b, p2)
        case (FinPoset(), FinPoset()):
            nb = b.size
            pairs = [(x, y) for x in range(a.size) for y in range(nb)]
            order = tuple(
                tuple(a.leq[x1][x2] and b.leq[y1][y2] for (x2, y2) in pairs)
                for (x1, y1) in pairs
            )
            prod = FinPoset(order)
            p1 = tuple(x for (x, _) in pairs)
            p2 = tuple(y for (_, y) in pairs)
            return prod, FinMorphism(prod, a, p1), FinMorphism(prod, b, p2)
    raise TagMismatchError(f"product of {a.tag} and {b.tag}")


def pairing(f: FinMorphism, g: FinMorphism, prod: FinAlgebra, p1: FinMorphism, p2: FinMorphism) -> FinMorphism:
    """The morphism <f, g> into a product built by product_algebra."""
    lookup = {(p1.graph[x], p2.graph[x]): x for x in range(prod.size)}
    return FinMorphism(f.dom, prod, tuple(lookup[(f.graph[x], g.graph[x])] for x in range(f.dom.size)))


# ---------------------------------------------------------------------------
# JSON shapes


def algebra_to_json(alg: FinAlgebra) -> dict:
    match alg:
        case BoolAlg():
            return {"tag": "BA", "atoms": alg.atoms}
        case DistLat():
            return {"tag": "DL01", "ji_order": [list(row) for row in alg.ji_leq]}
        case JoinSemilattice():
            return {
                "tag": "JSL0",
                "size": alg.size,
                "join": [list(row) for row in alg.join],
                "zero": alg.zero,
            }
        case VectZ2():
            return {"tag": "Z2VECT", "dim": alg.dim}
        case FinSet():
            return {"tag": "SET", "size": alg.size}
        case FinPoset():
            return {"tag": "POS", "order": [list(row) for row in alg.leq]}
    raise TypeError(f"not a FinAlgebra: {alg!r}")


def algebra_from_json(data: dict) -> FinAlgebra:
    tag = VarietyTag(data["tag"])
    match tag:
        case VarietyTag.BA:
            return BoolAlg(int(data["atoms"]))
        case VarietyTag.DL01:
            return make_distlat(tuple(tuple(bool(v) for v in row) for row in data["ji_order"]))
        case VarietyTag.JSL0:
            return make_jsl(data["join"], int(data["zero"]))
        case VarietyTag.Z2VECT:
            return VectZ2(int(data["dim"]))
        case VarietyTag.SET:
            return FinSet(int(data["size"]))
        case VarietyTag.POS:
            return make_poset(tuple(tuple(bool(v) for v in row) for row in data["order"]))
    raise ValueError(f"unknown tag {data['tag']!r}")

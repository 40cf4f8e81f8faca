"""Finite alphabet-generated monoids with carrier-compatible multiplication.

Depending on the carrier variety these are plain monoids (SET), ordered
monoids (POS), idempotent semirings (JSL0) or algebras over the two-element
field (Z2VECT).  Elements of the free such monoid have normal forms: a word
for SET/POS, a finite language for JSL0, and a finite language read as a
characteristic vector for Z2VECT, where products keep a word exactly when it
has an odd number of factorizations.

The workhorse construction is the transition monoid: the closure of the
letter actions of a reachable algebra under composition and the pointwise
carrier operations.  Multiplication follows reading order, so evaluating a
word left to right is a monoid homomorphism.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import DAlgebra, reachable_part
from .config import DEFAULT_LIMITS, Limits
from .errors import NotReachableError, ResourceExceededError, TagMismatchError
from .varieties import (
    FinAlgebra,
    FinMorphism,
    FinPoset,
    FinSet,
    JoinSemilattice,
    VarietyTag,
    VectZ2,
    algebra_to_json,
    binary_ops,
    constants,
    gaussian_basis,
    is_order_reflecting,
    leq,
    unary_ops,
    validate_morphism,
)

D_TAGS = (VarietyTag.SET, VarietyTag.POS, VarietyTag.JSL0, VarietyTag.Z2VECT)
LINEARISH = (VarietyTag.JSL0, VarietyTag.Z2VECT)


# ---------------------------------------------------------------------------
# free normal forms


@dataclass(frozen=True)
class FreeElement:
    """Normal form of a free-monoid element: one word, or a finite language."""

    tag: VarietyTag
    words: tuple[str, ...]

    def __post_init__(self):
        if self.tag not in D_TAGS:
            raise TagMismatchError(f"{self.tag} is not an algebra-side variety")
        if self.tag in (VarietyTag.SET, VarietyTag.POS):
            if len(self.words) != 1:
                raise ValueError("word-shaped normal forms hold exactly one word")
        elif list(self.words) != sorted(set(self.words)):
            raise ValueError("language-shaped normal forms are sorted and duplicate-free")


def free_unit(tag: VarietyTag) -> FreeElement:
    return FreeElement(tag, ("",))


def free_word(tag: VarietyTag, word: str) -> FreeElement:
    # for language-shaped tags a single word is the singleton language
    return FreeElement(tag, (word,))


def free_language(tag: VarietyTag, words: Iterable[str]) -> FreeElement:
    if tag not in LINEARISH:
        raise TagMismatchError(f"{tag} normal forms are single words")
    return FreeElement(tag, tuple(sorted(set(words))))


def free_mult(tag: VarietyTag, x: FreeElement, y: FreeElement) -> FreeElement:
    if x.tag != tag or y.tag != tag:
        raise TagMismatchError("free elements of the wrong variety")
    match tag:
        case VarietyTag.SET | VarietyTag.POS:
            return FreeElement(tag, (x.words[0] + y.words[0],))
        case VarietyTag.JSL0:
            return FreeElement(tag, tuple(sorted({u + v for u in x.words for v in y.words})))
        case VarietyTag.Z2VECT:
            xs, ys = set(x.words), set(y.words)
            out = []
            for w in {u + v for u in xs for v in ys}:
                count = sum(1 for i in range(len(w) + 1) if w[:i] in xs and w[i:] in ys)
                if count % 2 == 1:
                    out.append(w)
            return FreeElement(tag, tuple(sorted(out)))
    raise TagMismatchError(f"{tag} is not an algebra-side variety")


# ---------------------------------------------------------------------------
# finite alphabet-generated monoids


def carrier_add(carrier: FinAlgebra, x: int, y: int) -> int:
    """The additive carrier operation where one exists (join or vector sum)."""
    match carrier:
        case JoinSemilattice():
            return carrier.join[x][y]
        case VectZ2():
            return x ^ y
    raise TagMismatchError(f"{carrier.tag} has no additive structure")


def carrier_zero(carrier: FinAlgebra) -> int:
    match carrier:
        case JoinSemilattice():
            return carrier.zero
        case VectZ2():
            return 0
    raise TagMismatchError(f"{carrier.tag} has no additive structure")


@dataclass(frozen=True)
class SigmaMonoid:
    carrier: FinAlgebra
    alphabet: tuple[str, ...]
    unit: int
    mult: tuple[tuple[int, ...], ...]
    gen: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.carrier.size

    def gen_of(self, a: str) -> int:
        return self.gen[self.alphabet.index(a)]

    def product(self, x: int, y: int) -> int:
        return self.mult[x][y]


def trivial_monoid(tag: VarietyTag, alphabet: Sequence[str]) -> SigmaMonoid:
    match tag:
        case VarietyTag.SET:
            carrier: FinAlgebra = FinSet(1)
        case VarietyTag.POS:
            carrier = FinPoset(((True,),))
        case VarietyTag.JSL0:
            carrier = JoinSemilattice(((0,),), 0)
        case VarietyTag.Z2VECT:
            carrier = VectZ2(0)
        case _:
            raise TagMismatchError(f"{tag} is not an algebra-side variety")
    return SigmaMonoid(carrier, tuple(alphabet), 0, ((0,),), (0,) * len(alphabet))


def eval_word(m: SigmaMonoid, x: FreeElement | str) -> int:
    """The unique monoid morphism from free normal forms, letter by letter."""
    if isinstance(x, str):
        cur = m.unit
        for a in x:
            cur = m.mult[cur][m.gen_of(a)]
        return cur
    if x.tag != m.carrier.tag:
        raise TagMismatchError("free element of the wrong variety")
    if x.tag in (VarietyTag.SET, VarietyTag.POS):
        return eval_word(m, x.words[0])
    total = carrier_zero(m.carrier)
    for w in x.words:
        total = carrier_add(m.carrier, total, eval_word(m, w))
    return total


# ---------------------------------------------------------------------------
# transition monoids


def _encode_linear(graph: tuple[int, ...], dim: int) -> int:
    return sum(graph[1 << i] << (i * dim) for i in range(dim))


def _decode_linear(code: int, dim: int) -> tuple[int, ...]:
    images = [(code >> (i * dim)) & ((1 << dim) - 1) for i in range(dim)]
    out = []
    for x in range(1 << dim):
        v = 0
        for i in range(dim):
            if x >> i & 1:
                v ^= images[i]
        out.append(v)
    return tuple(out)


def _map_pointwise(carrier: FinAlgebra, f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(carrier_add(carrier, f[q], g[q]) for q in range(len(f)))


def transition_monoid(
    a: DAlgebra,
    reverse_composition: bool = False,
    limits: Limits = DEFAULT_LIMITS,
) -> SigmaMonoid:
    """Closure of the letter actions under composition and pointwise carrier
    operations, multiplied in reading order.

    With reverse_composition the product applies its second factor first;
    this variant is used at the duality boundary, where the dual letter
    actions act like left multiplications and the reading order has to be
    restored.
    """
    if a.carrier.tag not in D_TAGS:
        raise TagMismatchError(f"{a.carrier.tag} is not an algebra-side variety")
    if reachable_part(a, limits).size != a.size:
        raise NotReachableError("algebra is not generated by its initial state")

    carrier = a.carrier
    n = carrier.size
    ident = tuple(range(n))
    seeds = [ident] + [m.graph for m in a.alpha]
    if carrier.tag in LINEARISH:
        seeds.append(tuple(carrier_zero(carrier) for _ in range(n)))
    closed: dict[tuple[int, ...], int] = {}
    order: list[tuple[int, ...]] = []
    queue: deque[tuple[int, ...]] = deque()
    for s in seeds:
        if s not in closed:
            closed[s] = len(order)
            order.append(s)
            queue.append(s)
    while queue:
        f = queue.popleft()
        new = []
        for g in list(order):
            new.append(tuple(g[f[q]] for q in range(n)))
            new.append(tuple(f[g[q]] for q in range(n)))
            if carrier.tag in LINEARISH:
                new.append(_map_pointwise(carrier, f, g))
        for h in new:
            if h not in closed:
                if len(order) >= limits.max_carrier:
                    raise ResourceExceededError("transition monoid exceeded the carrier cap")
                closed[h] = len(order)
                order.append(h)
                queue.append(h)

    funcs, index = _present_map_family(carrier, order)

    def compose(i: int, j: int) -> int:
        f, g = funcs[i], funcs[j]
        if reverse_composition:
            return index[tuple(f[g[q]] for q in range(n))]
        return index[tuple(g[f[q]] for q in range(n))]

    size = len(funcs)
    mult = tuple(tuple(compose(i, j) for j in range(size)) for i in range(size))
    unit = index[ident]
    gens = tuple(index[m.graph] for m in a.alpha)
    monoid_carrier = _map_carrier(carrier, funcs)
    return SigmaMonoid(monoid_carrier, a.alphabet, unit, mult, gens)


def _present_map_family(carrier: FinAlgebra, maps: list[tuple[int, ...]]):
    """Fix the enumeration of a closed family of maps, per carrier variety."""
    if carrier.tag is VarietyTag.Z2VECT:
        assert isinstance(carrier, VectZ2)
        d = carrier.dim
        basis = gaussian_basis(_encode_linear(m, d) for m in maps)
        funcs = []
        for idx in range(1 << len(basis)):
            code = 0
            for i, b in enumerate(basis):
                if idx >> i & 1:
                    code ^= b
            funcs.append(_decode_linear(code, d))
        if len(funcs) != len(maps):
            raise ValueError("map family is not closed under pointwise sums")
        return funcs, {f: i for i, f in enumerate(funcs)}
    funcs = sorted(maps)
    return funcs, {f: i for i, f in enumerate(funcs)}


def _map_carrier(carrier: FinAlgebra, funcs: list[tuple[int, ...]]) -> FinAlgebra:
    """The carrier structure on a closed family of maps, pointwise."""
    match carrier:
        case FinSet():
            return FinSet(len(funcs))
        case FinPoset():
            return FinPoset(
                tuple(
                    tuple(all(carrier.leq[f[q]][g[q]] for q in range(len(f))) for g in funcs)
                    for f in funcs
                )
            )
        case JoinSemilattice():
            index = {f: i for i, f in enumerate(funcs)}
            join = tuple(
                tuple(index[_map_pointwise(carrier, f, g)] for g in funcs) for f in funcs
            )
            zero = index[tuple(carrier.zero for _ in range(carrier.size))]
            return JoinSemilattice(join, zero)
        case VectZ2():
            r = (len(funcs) - 1).bit_length() if len(funcs) > 1 else 0
            return VectZ2(r)
    raise TagMismatchError(f"{carrier.tag} is not an algebra-side variety")


# ---------------------------------------------------------------------------
# validation


def validate_monoid(m: SigmaMonoid, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Exhaustive monoid axioms, bilinearity, and alphabet-generation."""
    n = m.size
    if len(m.mult) != n or any(len(row) != n for row in m.mult):
        return False
    if any(m.mult[m.unit][x] != x or m.mult[x][m.unit] != x for x in range(n)):
        return False
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if m.mult[m.mult[x][y]][z] != m.mult[x][m.mult[y][z]]:
                    return False
    for x in range(n):
        left = FinMorphism(m.carrier, m.carrier, tuple(m.mult[x][y] for y in range(n)))
        right = FinMorphism(m.carrier, m.carrier, tuple(m.mult[y][x] for y in range(n)))
        if not (validate_morphism(left) and validate_morphism(right)):
            return False
    return _generated_closure(m, limits) == set(range(n))


def _generated_closure(m: SigmaMonoid, limits: Limits = DEFAULT_LIMITS) -> set[int]:
    closed = {m.unit} | set(m.gen) | set(constants(m.carrier))
    unary = unary_ops(m.carrier)
    binary = binary_ops(m.carrier)
    queue = deque(sorted(closed))
    while queue:
        x = queue.popleft()
        new = [op(x) for op in unary]
        for y in sorted(closed):
            new.append(m.mult[x][y])
            new.append(m.mult[y][x])
            for op in binary:
                new.append(op(x, y))
        for v in new:
            if v not in closed:
                if len(closed) >= limits.max_carrier:
                    raise ResourceExceededError("generation closure exceeded the carrier cap")
                closed.add(v)
                queue.append(v)
    return closed


# ---------------------------------------------------------------------------
# quotient order, subdirect products, pseudovarieties


def _check_compatible(m1: SigmaMonoid, m2: SigmaMonoid) -> None:
    if m1.carrier.tag != m2.carrier.tag:
        raise TagMismatchError(f"{m1.carrier.tag} and {m2.carrier.tag} monoids")
    if m1.alphabet != m2.alphabet:
        raise ValueError("monoids over different alphabets")


def _subdirect_pairs(m1: SigmaMonoid, m2: SigmaMonoid, limits: Limits) -> list[tuple[int, int]]:
    """Image of the paired evaluation: word pairs, then the additive span."""
    _check_compatible(m1, m2)
    pairs = {(m1.unit, m2.unit)}
    queue = deque(pairs)
    while queue:
        x1, x2 = queue.popleft()
        for g1, g2 in zip(m1.gen, m2.gen):
            nxt = (m1.mult[x1][g1], m2.mult[x2][g2])
            if nxt not in pairs:
                if len(pairs) >= limits.max_carrier:
                    raise ResourceExceededError("subdirect closure exceeded the carrier cap")
                pairs.add(nxt)
                queue.append(nxt)
    if m1.carrier.tag in LINEARISH:
        pairs.add((carrier_zero(m1.carrier), carrier_zero(m2.carrier)))
        queue = deque(sorted(pairs))
        while queue:
            p = queue.popleft()
            for q in sorted(pairs):
                s = (
                    carrier_add(m1.carrier, p[0], q[0]),
                    carrier_add(m2.carrier, p[1], q[1]),
                )
                if s not in pairs:
                    if len(pairs) >= limits.max_carrier:
                        raise ResourceExceededError("subdirect closure exceeded the carrier cap")
                    pairs.add(s)
                    queue.append(s)
    return sorted(pairs)


def subdirect_product(m1: SigmaMonoid, m2: SigmaMonoid, limits: Limits = DEFAULT_LIMITS) -> SigmaMonoid:
    """The join in the quotient order: the monoid generated by paired letters
    inside the product."""
    pairs = _subdirect_pairs(m1, m2, limits)
    index = {p: i for i, p in enumerate(pairs)}
    tag = m1.carrier.tag
    match tag:
        case VarietyTag.SET:
            carrier: FinAlgebra = FinSet(len(pairs))
        case VarietyTag.POS:
            carrier = FinPoset(
                tuple(
                    tuple(
                        leq(m1.carrier, p[0], q[0]) and leq(m2.carrier, p[1], q[1])
                        for q in pairs
                    )
                    for p in pairs
                )
            )
        case VarietyTag.JSL0:
            join = tuple(
                tuple(
                    index[
                        (
                            carrier_add(m1.carrier, p[0], q[0]),
                            carrier_add(m2.carrier, p[1], q[1]),
                        )
                    ]
                    for q in pairs
                )
                for p in pairs
            )
            carrier = JoinSemilattice(join, index[(carrier_zero(m1.carrier), carrier_zero(m2.carrier))])
        case VarietyTag.Z2VECT:
            r = (len(pairs) - 1).bit_length() if len(pairs) > 1 else 0
            carrier = VectZ2(r)
            pairs = _relabel_pairs_linearly(m1, m2, pairs)
            index = {p: i for i, p in enumerate(pairs)}
        case _:
            raise TagMismatchError(f"{tag} is not an algebra-side variety")
    mult = tuple(
        tuple(index[(m1.mult[p[0]][q[0]], m2.mult[p[1]][q[1]])] for q in pairs) for p in pairs
    )
    unit = index[(m1.unit, m2.unit)]
    gens = tuple(index[(g1, g2)] for g1, g2 in zip(m1.gen, m2.gen))
    return SigmaMonoid(carrier, m1.alphabet, unit, mult, gens)


def _relabel_pairs_linearly(m1, m2, pairs):
    """Order the pair set so indices are coordinates over a chosen basis."""
    d2 = m2.carrier.dim if isinstance(m2.carrier, VectZ2) else 0
    basis = gaussian_basis(p[0] << d2 | p[1] for p in pairs)
    if 1 << len(basis) != len(pairs):
        raise ValueError("pair family is not closed under sums")
    out = []
    for idx in range(1 << len(basis)):
        code = 0
        for i, b in enumerate(basis):
            if idx >> i & 1:
                code ^= b
        out.append((code >> d2, code & ((1 << d2) - 1)))
    return out


def quotient_leq(m1: SigmaMonoid, m2: SigmaMonoid, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether m1 is a quotient of m2 as alphabet-generated monoids.

    Decided on the subdirect product of (m2, m1): a generator-preserving map
    m2 -> m1 exists exactly when the first projection is injective there (and
    order-reflecting for ordered carriers).
    """
    _check_compatible(m1, m2)
    pairs = _subdirect_pairs(m2, m1, limits)
    firsts = [p[0] for p in pairs]
    if len(set(firsts)) != len(firsts):
        return False
    if m1.carrier.tag is VarietyTag.POS:
        for p in pairs:
            for q in pairs:
                if leq(m2.carrier, p[0], q[0]) and not leq(m1.carrier, p[1], q[1]):
                    return False
    return True


def pseudovariety_member(
    m: SigmaMonoid, gens: Sequence[SigmaMonoid], limits: Limits = DEFAULT_LIMITS
) -> bool:
    """Membership in the pseudovariety generated by finitely many monoids.

    Finitely generated ideals in the join-semilattice of monoids are
    principal, so this is a single quotient test against the iterated
    subdirect product.
    """
    top = trivial_monoid(m.carrier.tag, m.alphabet)
    for g in gens:
        top = subdirect_product(top, g, limits)
    return quotient_leq(m, top, limits)


def sigma_monoid_iso(m1: SigmaMonoid, m2: SigmaMonoid) -> FinMorphism | None:
    """The generator-preserving isomorphism, if one exists.

    Generation forces the candidate: images of words propagate through
    multiplication by letters and through the carrier operations, so no
    search is involved.
    """
    try:
        _check_compatible(m1, m2)
    except (TagMismatchError, ValueError):
        return None
    mapping = {m1.unit: m2.unit}
    if m1.carrier.tag in LINEARISH:
        # the additive zero is the image of the empty language, hence forced
        mapping[carrier_zero(m1.carrier)] = carrier_zero(m2.carrier)
    changed = True
    while changed:
        changed = False
        for x in list(mapping):
            fx = mapping[x]
            images = [
                (m1.mult[x][g1], m2.mult[fx][g2]) for g1, g2 in zip(m1.gen, m2.gen)
            ]
            for y in list(mapping):
                fy = mapping[y]
                images.append((m1.mult[x][y], m2.mult[fx][fy]))
                if m1.carrier.tag in LINEARISH:
                    images.append(
                        (
                            carrier_add(m1.carrier, x, y),
                            carrier_add(m2.carrier, fx, fy),
                        )
                    )
            for src, dst in images:
                if mapping.get(src, dst) != dst:
                    return None
                if src not in mapping:
                    mapping[src] = dst
                    changed = True
    if len(mapping) != m1.size or len(set(mapping.values())) != m2.size:
        return None
    morphism = FinMorphism(m1.carrier, m2.carrier, tuple(mapping[x] for x in range(m1.size)))
    if not validate_morphism(morphism):
        return None
    if m1.carrier.tag is VarietyTag.POS and not is_order_reflecting(morphism):
        return None
    for x in range(m1.size):
        for y in range(m1.size):
            if morphism.graph[m1.mult[x][y]] != m2.mult[morphism.graph[x]][morphism.graph[y]]:
                return None
    return morphism


# ---------------------------------------------------------------------------
# JSON and DOT


def monoid_to_json(m: SigmaMonoid) -> dict:
    return {
        "tag": m.carrier.tag.value,
        "carrier": algebra_to_json(m.carrier),
        "unit": m.unit,
        "mult": [list(row) for row in m.mult],
        "gen": {a: m.gen[ai] for ai, a in enumerate(m.alphabet)},
    }


def monoid_to_dot(m: SigmaMonoid) -> str:
    lines = ["digraph cayley {", "  rankdir=LR;"]
    for x in range(m.size):
        shape = "doublecircle" if x == m.unit else "circle"
        lines.append(f'  e{x} [shape={shape}, label="{x}"];')
    for x in range(m.size):
        for ai, a in enumerate(m.alphabet):
            lines.append(f'  e{x} -> e{m.mult[x][m.gen[ai]]} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

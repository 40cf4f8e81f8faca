"""Deterministic automata over the variety pairs, and derivative closures.

A CCoalgebra is an automaton whose state set carries an output-side algebra:
per-letter transition morphisms and an output morphism into the two-element
algebra.  A DAlgebra is the dual shape: an initial state and per-letter
transitions on an algebra-side carrier, no outputs.

Closure constructions work inside the transition-map automaton of the
generators: the distinct maps gamma_w form a finite deterministic automaton
whose languages are exactly the unions of map-classes, so every language in a
derivative- and operation-closed family is a bitmask over maps.  Left and
right word derivatives become preimages along precomposition/postcomposition
with a letter map, and the variety operations become bitwise operations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .config import DEFAULT_LIMITS, Limits
from .duality import DualityTag, c_tag, d_tag, dual_morphism, dual_object
from .errors import ResourceExceededError, TagMismatchError
from .languages import (
    Dfa,
    LanguageId,
    canonical_language,
    language_to_regex,
    left_derivative,
    right_derivative,
)
from .varieties import (
    BoolAlg,
    FinAlgebra,
    FinMorphism,
    FinSet,
    JoinSemilattice,
    VarietyTag,
    VectZ2,
    gaussian_basis,
    binary_ops,
    constants,
    free_on_one,
    identity,
    jsl_from_masks,
    mask_lattice_presentation,
    present_subset,
    two_element_algebra,
    unary_ops,
    validate_morphism,
)

C_OPERATION_TAGS = (VarietyTag.BA, VarietyTag.DL01, VarietyTag.JSL0, VarietyTag.Z2VECT)


@dataclass(frozen=True)
class CCoalgebra:
    """States with output-side algebra structure, letter actions and outputs."""

    carrier: FinAlgebra
    alphabet: tuple[str, ...]
    gamma: tuple[FinMorphism, ...]
    out: FinMorphism
    labels: tuple[LanguageId, ...] | None = None

    def gamma_of(self, a: str) -> FinMorphism:
        return self.gamma[self.alphabet.index(a)]

    @property
    def size(self) -> int:
        return self.carrier.size


@dataclass(frozen=True)
class DAlgebra:
    """States with algebra-side structure, letter actions and an initial state."""

    carrier: FinAlgebra
    alphabet: tuple[str, ...]
    alpha: tuple[FinMorphism, ...]
    init: int

    def alpha_of(self, a: str) -> FinMorphism:
        return self.alpha[self.alphabet.index(a)]

    @property
    def size(self) -> int:
        return self.carrier.size


def label_set(q: CCoalgebra) -> frozenset[LanguageId]:
    if q.labels is None:
        raise ValueError("coalgebra carries no labels")
    return frozenset(q.labels)


def validate_coalgebra(q: CCoalgebra) -> bool:
    if q.carrier.tag not in C_OPERATION_TAGS:
        raise TagMismatchError(f"{q.carrier.tag} is not an output-side variety")
    two = two_element_algebra(q.carrier.tag)
    if q.out.cod != two:
        return False
    if not all(validate_morphism(g) for g in q.gamma):
        return False
    return validate_morphism(q.out)


def check_labels(q: CCoalgebra) -> bool:
    """Labels must be a coalgebra homomorphism into the language automaton."""
    if q.labels is None:
        return False
    for state in range(q.size):
        if (q.out.graph[state] == 1) != q.labels[state].dfa.accepts_word(""):
            return False
        for ai, a in enumerate(q.alphabet):
            if q.labels[q.gamma[ai].graph[state]] != left_derivative(q.labels[state], a):
                return False
    return True


# ---------------------------------------------------------------------------
# the finals-shift and the initial-shift


def word_action(maps: Sequence[FinMorphism], alphabet: Sequence[str], word: str, carrier: FinAlgebra) -> FinMorphism:
    """gamma_w (resp. alpha_w): the letter actions composed in reading order."""
    out = identity(carrier)
    for a in word:
        out = out.then(maps[alphabet.index(a)])
    return out


def coalg_shift(q: CCoalgebra, word: str) -> CCoalgebra:
    """Replace the output by out after gamma_w; labels no longer apply."""
    gw = word_action(q.gamma, q.alphabet, word, q.carrier)
    return replace(q, out=gw.then(q.out), labels=None)


def alg_shift(a: DAlgebra, word: str) -> DAlgebra:
    aw = word_action(a.alpha, a.alphabet, word, a.carrier)
    return replace(a, init=aw.graph[a.init])


# ---------------------------------------------------------------------------
# the transition-map automaton of a generator family


@dataclass(frozen=True)
class ClassAutomaton:
    """Distinct transition maps of the generators' joint DFA.

    Reading a word u from the identity ends in the map gamma_u, so the
    languages over this automaton are exactly the unions of map-classes.
    """

    alphabet: tuple[str, ...]
    maps: tuple[tuple[int, ...], ...]
    identity_index: int
    post: tuple[tuple[int, ...], ...]  # index of (letter after map): word u -> ua
    pre: tuple[tuple[int, ...], ...]  # index of (map after letter): word u -> au

    @property
    def n_maps(self) -> int:
        return len(self.maps)

    @property
    def full_mask(self) -> int:
        return (1 << self.n_maps) - 1

    def language_of_mask(self, mask: int) -> LanguageId:
        finals = frozenset(j for j in range(self.n_maps) if mask >> j & 1)
        delta = tuple(
            tuple(self.post[ai][j] for ai in range(len(self.alphabet)))
            for j in range(self.n_maps)
        )
        return canonical_language(
            Dfa(self.alphabet, self.n_maps, self.identity_index, finals, delta)
        )

    def left_preimage(self, mask: int, ai: int) -> int:
        return sum(1 << j for j in range(self.n_maps) if mask >> self.pre[ai][j] & 1)

    def right_preimage(self, mask: int, ai: int) -> int:
        return sum(1 << j for j in range(self.n_maps) if mask >> self.post[ai][j] & 1)


def _joint_dfa(gens: Sequence[LanguageId]) -> tuple[tuple[str, ...], tuple[tuple[int, ...], ...], list[frozenset[int]]]:
    """Reachable product of the generators' DFAs; finals kept per generator."""
    alphabet = gens[0].alphabet
    if any(g.alphabet != alphabet for g in gens):
        raise ValueError("generators must share one alphabet")
    k = len(alphabet)
    start = tuple(g.dfa.initial for g in gens)
    index = {start: 0}
    order = [start]
    rows = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        row = []
        for ai in range(k):
            nxt = tuple(g.dfa.delta[s][ai] for g, s in zip(gens, state))
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            row.append(index[nxt])
        rows.append(tuple(row))
    finals = [
        frozenset(i for i, st in enumerate(order) if st[gi] in g.dfa.finals)
        for gi, g in enumerate(gens)
    ]
    return alphabet, tuple(rows), finals


def class_automaton(gens: Sequence[LanguageId], limits: Limits = DEFAULT_LIMITS) -> tuple[ClassAutomaton, list[int]]:
    """Build the map automaton and the generator languages as masks."""
    alphabet, delta, finals = _joint_dfa(gens)
    n = len(delta)
    k = len(alphabet)
    ident = tuple(range(n))
    index = {ident: 0}
    maps = [ident]
    post_rows: list[list[int]] = [[]]
    queue = deque([0])
    while queue:
        j = queue.popleft()
        m = maps[j]
        row = []
        for ai in range(k):
            nxt = tuple(delta[m[q]][ai] for q in range(n))
            if nxt not in index:
                if len(maps) >= limits.max_carrier:
                    raise ResourceExceededError("transition-map closure exceeded the carrier cap")
                index[nxt] = len(maps)
                maps.append(nxt)
                post_rows.append([])
                queue.append(len(maps) - 1)
            row.append(index[nxt])
        post_rows[j] = row
    pre = tuple(
        tuple(index[tuple(maps[j][delta[q][ai]] for q in range(n))] for j in range(len(maps)))
        for ai in range(k)
    )
    post = tuple(tuple(post_rows[j][ai] for j in range(len(maps))) for ai in range(k))
    caut = ClassAutomaton(alphabet, tuple(maps), 0, post, pre)
    gen_masks = [
        sum(1 << j for j in range(len(maps)) if maps[j][0] in fin) for fin in finals
    ]
    return caut, gen_masks


def _derivative_mask_closure(
    caut: ClassAutomaton, seeds: Iterable[int], include_right: bool, limits: Limits
) -> set[int]:
    closed = set(seeds)
    queue = deque(sorted(closed))
    k = len(caut.alphabet)
    while queue:
        mask = queue.popleft()
        for ai in range(k):
            new = [caut.left_preimage(mask, ai)]
            if include_right:
                new.append(caut.right_preimage(mask, ai))
            for nxt in new:
                if nxt not in closed:
                    if len(closed) >= limits.max_carrier:
                        raise ResourceExceededError("derivative closure exceeded the carrier cap")
                    closed.add(nxt)
                    queue.append(nxt)
    return closed


def _pairwise_fixpoint(seed: set[int], op, cap: int) -> set[int]:
    closed = set(seed)
    queue = deque(sorted(closed))
    while queue:
        x = queue.popleft()
        for y in sorted(closed):
            v = op(x, y)
            if v not in closed:
                if len(closed) >= cap:
                    raise ResourceExceededError("operation closure exceeded the carrier cap")
                closed.add(v)
                queue.append(v)
    return closed


def _family_under_operations(tag: VarietyTag, seeds: set[int], full: int, cap: int) -> tuple[int, ...]:
    """Close masks under the variety's language operations and constants."""
    match tag:
        case VarietyTag.BA:
            nbits = full.bit_length()
            ordered = sorted(seeds)
            groups: dict[tuple[bool, ...], int] = {}
            for j in range(nbits):
                sig = tuple(bool(s >> j & 1) for s in ordered)
                groups[sig] = groups.get(sig, 0) | (1 << j)
            atoms = sorted(groups.values())
            if 1 << len(atoms) > cap:
                raise ResourceExceededError("boolean closure exceeded the carrier cap")
            family = []
            for choice in range(1 << len(atoms)):
                v = 0
                for i, atom in enumerate(atoms):
                    if choice >> i & 1:
                        v |= atom
                family.append(v)
            return tuple(sorted(family))
        case VarietyTag.DL01:
            meets = _pairwise_fixpoint(seeds | {0, full}, lambda x, y: x & y, cap)
            joins = _pairwise_fixpoint(meets, lambda x, y: x | y, cap)
            return tuple(sorted(joins))
        case VarietyTag.JSL0:
            return tuple(sorted(_pairwise_fixpoint(seeds | {0}, lambda x, y: x | y, cap)))
        case VarietyTag.Z2VECT:
            basis = gaussian_basis(seeds)
            if 1 << len(basis) > cap:
                raise ResourceExceededError("linear closure exceeded the carrier cap")
            family = []
            for choice in range(1 << len(basis)):
                v = 0
                for i, b in enumerate(basis):
                    if choice >> i & 1:
                        v ^= b
                family.append(v)
            return tuple(sorted(family))
    raise TagMismatchError(f"{tag} is not an output-side variety")


def _present_family(tag: VarietyTag, family: tuple[int, ...]) -> tuple[FinAlgebra, tuple[int, ...]]:
    """Carrier presentation of a closed family plus the element -> mask table."""
    match tag:
        case VarietyTag.BA:
            nonzero = [m for m in family if m]
            atoms = [m for m in nonzero if not any(o & m == o and o != m for o in nonzero)]
            carrier = BoolAlg(len(atoms))
            element_masks = []
            for idx in range(carrier.size):
                v = 0
                for i, atom in enumerate(atoms):
                    if idx >> i & 1:
                        v |= atom
                element_masks.append(v)
            if sorted(element_masks) != list(family):
                raise ValueError("family is not a boolean algebra of classes")
            return carrier, tuple(element_masks)
        case VarietyTag.DL01:
            return mask_lattice_presentation(family)
        case VarietyTag.JSL0:
            carrier, masks = jsl_from_masks(family)
            return carrier, masks
        case VarietyTag.Z2VECT:
            basis = gaussian_basis(family)
            carrier = VectZ2(len(basis))
            element_masks = []
            for idx in range(carrier.size):
                v = 0
                for i, b in enumerate(basis):
                    if idx >> i & 1:
                        v ^= b
                element_masks.append(v)
            if sorted(element_masks) != list(family):
                raise ValueError("family is not closed under symmetric difference")
            return carrier, tuple(element_masks)
    raise TagMismatchError(f"{tag} is not an output-side variety")


def _piece_from_masks(tag: VarietyTag, caut: ClassAutomaton, family: tuple[int, ...]) -> CCoalgebra:
    carrier, element_masks = _present_family(tag, family)
    mask_index = {m: i for i, m in enumerate(element_masks)}
    k = len(caut.alphabet)
    gamma = tuple(
        FinMorphism(
            carrier,
            carrier,
            tuple(mask_index[caut.left_preimage(m, ai)] for m in element_masks),
        )
        for ai in range(k)
    )
    two = two_element_algebra(tag)
    out = FinMorphism(
        carrier,
        two,
        tuple(1 if m >> caut.identity_index & 1 else 0 for m in element_masks),
    )
    labels = tuple(caut.language_of_mask(m) for m in element_masks)
    return CCoalgebra(carrier, caut.alphabet, gamma, out, labels)


def generate_subcoalgebra(
    tag: VarietyTag, gens: Iterable[LanguageId], limits: Limits = DEFAULT_LIMITS
) -> CCoalgebra:
    """Smallest labeled subautomaton of the language automaton containing gens,
    closed under left derivatives and the variety operations on languages."""
    gens = sorted(set(gens), key=lambda g: g.sort_key())
    if not gens:
        raise ValueError("at least one generator language is required")
    caut, gen_masks = class_automaton(gens, limits)
    seeds = _derivative_mask_closure(caut, gen_masks, include_right=False, limits=limits)
    family = _family_under_operations(tag, seeds, caut.full_mask, limits.max_carrier)
    return _piece_from_masks(tag, caut, family)


def rqc_closure(
    tag: VarietyTag, gens: Iterable[LanguageId], limits: Limits = DEFAULT_LIMITS
) -> CCoalgebra:
    """Like generate_subcoalgebra, but also closed under right derivatives."""
    gens = sorted(set(gens), key=lambda g: g.sort_key())
    if not gens:
        raise ValueError("at least one generator language is required")
    caut, gen_masks = class_automaton(gens, limits)
    seeds = _derivative_mask_closure(caut, gen_masks, include_right=True, limits=limits)
    family = _family_under_operations(tag, seeds, caut.full_mask, limits.max_carrier)
    return _piece_from_masks(tag, caut, family)


def carrier_map_monoid(q: CCoalgebra, limits: Limits = DEFAULT_LIMITS) -> list[tuple[str, FinMorphism]]:
    """Representative words for the distinct composites gamma_w."""
    seen = {identity(q.carrier).graph: ""}
    order = [("", identity(q.carrier))]
    queue = deque(order)
    while queue:
        word, m = queue.popleft()
        for ai, a in enumerate(q.alphabet):
            nxt = m.then(q.gamma[ai])
            if nxt.graph not in seen:
                if len(seen) >= limits.max_carrier:
                    raise ResourceExceededError("carrier map monoid exceeded the carrier cap")
                seen[nxt.graph] = word + a
                order.append((word + a, nxt))
                queue.append((word + a, nxt))
    return order


def is_rqc_closed(q: CCoalgebra, limits: Limits = DEFAULT_LIMITS) -> bool:
    """All right derivatives of the labels stay inside the label set.

    Words are enumerated up to stabilization of the composite transition
    maps, which is exhaustive because a right derivative only depends on the
    map gamma_w.
    """
    labels = label_set(q)
    for word, _ in carrier_map_monoid(q, limits):
        for lang in labels:
            if right_derivative(lang, word) not in labels:
                return False
    return True


# ---------------------------------------------------------------------------
# duality between coalgebras and algebras


def _generator_index_in_dual_two(d: DualityTag) -> int:
    """Where the free generator of the one-generated algebra lands inside the
    dual of the two-element algebra.

    For the JSL self-duality the identification is the order-reversing swap,
    so the generator sits on the old bottom element.
    """
    return 1 if d is DualityTag.Z2_SELF else 0


def coalgebra_to_dalgebra(d: DualityTag, q: CCoalgebra) -> DAlgebra:
    """Dualize carrier, letter actions, and output; the initial state is the
    image of the free generator under the dual of the output morphism."""
    if q.carrier.tag != c_tag(d):
        raise TagMismatchError(f"coalgebra carrier {q.carrier.tag} does not match {d}")
    alpha = tuple(dual_morphism(d, g) for g in q.gamma)
    init_morphism = dual_morphism(d, q.out)
    init = init_morphism.graph[_generator_index_in_dual_two(d)]
    return DAlgebra(dual_object(d, q.carrier), q.alphabet, alpha, init)


def _initial_state_morphism(d: DualityTag, a: DAlgebra) -> FinMorphism:
    one = free_on_one(d_tag(d))
    match one:
        case JoinSemilattice():
            assert isinstance(a.carrier, JoinSemilattice)
            graph = (a.carrier.zero, a.init)
        case VectZ2():
            graph = (0, a.init)
        case _:
            graph = (a.init,)
    return FinMorphism(one, a.carrier, graph)


def _two_relabel(d: DualityTag) -> FinMorphism:
    """Canonical identification of dual(free_on_one) with the two-element algebra."""
    two = two_element_algebra(c_tag(d))
    dual_one = dual_object(d, free_on_one(d_tag(d)))
    if d is DualityTag.JSL_SELF:
        return FinMorphism(dual_one, two, (1, 0))
    return FinMorphism(dual_one, two, (0, 1))


def dalgebra_to_coalgebra(d: DualityTag, a: DAlgebra) -> CCoalgebra:
    """Inverse dualization; recomputes labels from scratch."""
    if a.carrier.tag != d_tag(d):
        raise TagMismatchError(f"algebra carrier {a.carrier.tag} does not match {d}")
    gamma = tuple(dual_morphism(d, al) for al in a.alpha)
    out = dual_morphism(d, _initial_state_morphism(d, a)).then(_two_relabel(d))
    carrier = dual_object(d, a.carrier)
    partial = CCoalgebra(carrier, a.alphabet, gamma, out, labels=None)
    labels = tuple(state_language(partial, s) for s in range(carrier.size))
    return replace(partial, labels=labels)


def state_language(q: CCoalgebra, state: int) -> LanguageId:
    """The language accepted from a state, reading outputs as finality."""
    delta = tuple(
        tuple(q.gamma[ai].graph[s] for ai in range(len(q.alphabet)))
        for s in range(q.size)
    )
    finals = frozenset(s for s in range(q.size) if q.out.graph[s] == 1)
    return canonical_language(Dfa(q.alphabet, q.size, state, finals, delta))


def language_dalgebra(lang: LanguageId) -> DAlgebra:
    """The canonical DFA of a language as a plain initialized automaton."""
    d = lang.dfa
    carrier = FinSet(d.n_states)
    alpha = tuple(
        FinMorphism(carrier, carrier, tuple(d.delta[q][ai] for q in range(d.n_states)))
        for ai in range(len(d.alphabet))
    )
    return DAlgebra(carrier, d.alphabet, alpha, d.initial)


def reachable_part(a: DAlgebra, limits: Limits = DEFAULT_LIMITS) -> DAlgebra:
    """Restrict to the closure of the initial state under letter actions and
    the carrier operations."""
    closed = {a.init} | set(constants(a.carrier))
    unary = unary_ops(a.carrier)
    binary = binary_ops(a.carrier)
    queue = deque(sorted(closed))
    while queue:
        x = queue.popleft()
        new = [m.graph[x] for m in a.alpha]
        new.extend(op(x) for op in unary)
        for y in sorted(closed):
            for op in binary:
                new.append(op(x, y))
        for v in new:
            if v not in closed:
                if len(closed) >= limits.max_carrier:
                    raise ResourceExceededError("reachable closure exceeded the carrier cap")
                closed.add(v)
                queue.append(v)
    if len(closed) == a.size:
        return a
    sub, incl, to_sub = present_subset(a.carrier, sorted(closed))
    alpha = tuple(
        FinMorphism(sub, sub, tuple(to_sub[m.graph[incl.graph[i]]] for i in range(sub.size)))
        for m in a.alpha
    )
    return DAlgebra(sub, a.alphabet, alpha, to_sub[a.init])


# ---------------------------------------------------------------------------
# JSON and DOT


def ccoalgebra_to_json(q: CCoalgebra) -> dict:
    from .varieties import algebra_to_json

    data = {
        "carrier": algebra_to_json(q.carrier),
        "alphabet": list(q.alphabet),
        "gamma": {a: list(q.gamma[ai].graph) for ai, a in enumerate(q.alphabet)},
        "out": list(q.out.graph),
    }
    if q.labels is not None:
        data["labels"] = [language_to_regex(lang) for lang in q.labels]
    return data


def dalgebra_to_json(a: DAlgebra) -> dict:
    from .varieties import algebra_to_json

    return {
        "carrier": algebra_to_json(a.carrier),
        "alphabet": list(a.alphabet),
        "alpha": {s: list(a.alpha[ai].graph) for ai, s in enumerate(a.alphabet)},
        "init": a.init,
    }


def coalgebra_to_dot(q: CCoalgebra) -> str:
    lines = ["digraph coalgebra {", "  rankdir=LR;"]
    for s in range(q.size):
        shape = "doublecircle" if q.out.graph[s] == 1 else "circle"
        name = language_to_regex(q.labels[s]) if q.labels is not None else str(s)
        lines.append(f'  q{s} [shape={shape}, label="{name}"];')
    for s in range(q.size):
        for ai, a in enumerate(q.alphabet):
            lines.append(f'  q{s} -> q{q.gamma[ai].graph[s]} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dalgebra_to_dot(a: DAlgebra) -> str:
    lines = ["digraph dalgebra {", "  rankdir=LR;", '  start [shape=point, label=""];']
    for s in range(a.size):
        lines.append(f'  q{s} [shape=circle, label="{s}"];')
    lines.append(f"  start -> q{a.init};")
    for s in range(a.size):
        for ai, sym in enumerate(a.alphabet):
            lines.append(f'  q{s} -> q{a.alpha[ai].graph[s]} [label="{sym}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

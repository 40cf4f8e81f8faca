"""Seeded random instances: regexes, algebras, and valid morphisms.

Used by the property-test corpus and by the CLI's randomized verification
runs, so identical seeds reproduce identical instances.
"""

from __future__ import annotations

import random

from .languages import Concat, Empty, Epsilon, Literal, Regex, Star, Union
from .varieties import (
    BoolAlg,
    DistLat,
    FinAlgebra,
    FinMorphism,
    FinPoset,
    FinSet,
    JoinSemilattice,
    VarietyTag,
    VectZ2,
    downset_masks,
    jsl_from_masks,
    jsl_leq,
    make_poset,
    validate_morphism,
)


def random_regex(rng: random.Random, alphabet, max_depth: int = 4) -> Regex:
    if max_depth <= 0:
        roll = rng.random()
        if roll < 0.75:
            return Literal(rng.choice(alphabet))
        if roll < 0.95:
            return Epsilon()
        return Empty()
    roll = rng.random()
    if roll < 0.35:
        return Literal(rng.choice(alphabet))
    if roll < 0.55:
        return Union(random_regex(rng, alphabet, max_depth - 1), random_regex(rng, alphabet, max_depth - 1))
    if roll < 0.80:
        return Concat(random_regex(rng, alphabet, max_depth - 1), random_regex(rng, alphabet, max_depth - 1))
    if roll < 0.95:
        return Star(random_regex(rng, alphabet, max_depth - 1))
    return Epsilon()


def _random_poset_matrix(rng: random.Random, n: int):
    strict = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            strict[i][j] = rng.random() < 0.4
    # transitive closure keeps i < j only, so the result is antisymmetric
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if strict[i][k] and strict[k][j]:
                    strict[i][j] = True
    return tuple(tuple(strict[i][j] or i == j for j in range(n)) for i in range(n))


def random_algebra(rng: random.Random, tag: VarietyTag, max_size: int = 16) -> FinAlgebra:
    match tag:
        case VarietyTag.BA:
            max_atoms = max(1, max_size.bit_length() - 1)
            return BoolAlg(rng.randint(1, min(4, max_atoms)))
        case VarietyTag.DL01:
            while True:
                k = rng.randint(1, 4)
                alg = DistLat(_random_poset_matrix(rng, k))
                if alg.size <= max_size:
                    return alg
        case VarietyTag.JSL0:
            family = {0}
            for _ in range(rng.randint(1, 5)):
                family.add(rng.randrange(16))
            closed = set(family)
            while True:
                extra = {x | y for x in closed for y in closed} - closed
                if not extra:
                    break
                closed |= extra
            if len(closed) > max_size:
                closed = {0}
            alg, _ = jsl_from_masks(closed)
            return alg
        case VarietyTag.Z2VECT:
            max_dim = max(1, max_size.bit_length() - 1)
            return VectZ2(rng.randint(1, min(4, max_dim)))
        case VarietyTag.SET:
            return FinSet(rng.randint(1, min(8, max_size)))
        case VarietyTag.POS:
            return make_poset(_random_poset_matrix(rng, rng.randint(1, min(6, max_size))))
    raise ValueError(tag)


def _random_monotone(rng: random.Random, dom_leq, cod_leq, n_dom: int, n_cod: int):
    """Random monotone map between explicit posets, None when a draw fails."""
    order = sorted(range(n_dom), key=lambda x: sum(dom_leq[y][x] for y in range(n_dom)))
    graph: dict[int, int] = {}
    for x in order:
        lower = [graph[y] for y in range(n_dom) if y != x and dom_leq[y][x] and y in graph]
        candidates = [c for c in range(n_cod) if all(cod_leq[v][c] for v in lower)]
        if not candidates:
            return None
        graph[x] = rng.choice(candidates)
    return tuple(graph[x] for x in range(n_dom))


def random_morphism(rng: random.Random, dom: FinAlgebra, cod: FinAlgebra) -> FinMorphism:
    """A uniformly scruffy but always valid morphism dom -> cod."""
    match (dom, cod):
        case (BoolAlg(), BoolAlg()):
            atom_map = [rng.randrange(dom.atoms) for _ in range(cod.atoms)]
            graph = []
            for x in range(dom.size):
                image = 0
                for j, src in enumerate(atom_map):
                    if x >> src & 1:
                        image |= 1 << j
                graph.append(image)
            return FinMorphism(dom, cod, tuple(graph))
        case (DistLat(), DistLat()):
            # dual to a monotone map from the codomain JI poset to the domain's
            while True:
                f = _random_monotone(rng, cod.ji_leq, dom.ji_leq, cod.n_ji, dom.n_ji)
                if f is not None:
                    break
            graph = []
            for x_mask in downset_masks(dom):
                image = 0
                for j in range(cod.n_ji):
                    if x_mask >> f[j] & 1:
                        image |= 1 << j
                graph.append(downset_masks(cod).index(image))
            return FinMorphism(dom, cod, tuple(graph))
        case (JoinSemilattice(), JoinSemilattice()):
            for _ in range(64):
                order = sorted(
                    range(dom.size), key=lambda x: sum(jsl_leq(dom, y, x) for y in range(dom.size))
                )
                graph: dict[int, int] = {dom.zero: cod.zero}
                ok = True
                for x in order:
                    if x in graph:
                        continue
                    parts = [
                        (y, z)
                        for y in range(dom.size)
                        for z in range(dom.size)
                        if y in graph and z in graph and y != x and z != x and dom.join[y][z] == x
                    ]
                    if parts:
                        y, z = parts[0]
                        graph[x] = cod.join[graph[y]][graph[z]]
                        continue
                    lower = [graph[y] for y in range(dom.size) if y in graph and jsl_leq(dom, y, x)]
                    floor = cod.zero
                    for v in lower:
                        floor = cod.join[floor][v]
                    candidates = [c for c in range(cod.size) if jsl_leq(cod, floor, c)]
                    graph[x] = rng.choice(candidates)
                m = FinMorphism(dom, cod, tuple(graph[x] for x in range(dom.size)))
                if validate_morphism(m):
                    return m
            return FinMorphism(dom, cod, tuple(cod.zero for _ in range(dom.size)))
        case (VectZ2(), VectZ2()):
            basis_images = [rng.randrange(cod.size) for _ in range(dom.dim)]
            graph = []
            for x in range(dom.size):
                image = 0
                for i in range(dom.dim):
                    if x >> i & 1:
                        image ^= basis_images[i]
                graph.append(image)
            return FinMorphism(dom, cod, tuple(graph))
        case (FinSet(), FinSet()):
            return FinMorphism(dom, cod, tuple(rng.randrange(cod.size) for _ in range(dom.size)))
        case (FinPoset(), FinPoset()):
            while True:
                f = _random_monotone(rng, dom.leq, cod.leq, dom.size, cod.size)
                if f is not None:
                    return FinMorphism(dom, cod, f)
    raise ValueError(f"cannot build a morphism from {dom.tag} to {cod.tag}")

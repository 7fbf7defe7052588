"""Shared test apparatus: exhaustive and random lattice generation, plus
brute-force oracles kept deliberately independent of the library's own
search paths."""

from __future__ import annotations

import itertools
import random

from freelat.errors import NotALattice, NotDistributive
from freelat.homs import ChainColoring
from freelat.lattice import (FiniteLattice, Sublattice, chain,
                             lattices_isomorphic, product,
                             sublattice_closure)


def all_distributive_lattices(max_n: int = 6) -> list[FiniteLattice]:
    """Every distributive lattice with at most max_n elements, one per
    isomorphism class.

    Every finite poset admits a topological labeling, so enumerating all
    transitively closed subsets of {(i, j) : i < j} reaches every poset up
    to isomorphism; lattice and distributivity filtering plus isomorphism
    deduplication does the rest.
    """
    found: list[FiniteLattice] = []
    for n in range(1, max_n + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for bits in range(1 << len(pairs)):
            rel = [[False] * n for _ in range(n)]
            for t, (i, j) in enumerate(pairs):
                if (bits >> t) & 1:
                    rel[i][j] = True
            ok = True
            for i in range(n):
                for j in range(i + 1, n):
                    if rel[i][j]:
                        for k in range(j + 1, n):
                            if rel[j][k] and not rel[i][k]:
                                ok = False
                                break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                continue
            masks = []
            for i in range(n):
                mask = 1 << i
                for j in range(i + 1, n):
                    if rel[i][j]:
                        mask |= 1 << j
                masks.append(mask)
            try:
                lat = FiniteLattice([str(i) for i in range(n)], masks)
            except (NotALattice, NotDistributive):
                continue
            if not any(lattices_isomorphic(lat, seen) for seen in found
                       if seen.n == n):
                found.append(lat)
    return found


def random_distributive_lattice(rng: random.Random,
                                max_elements: int = 9,
                                min_elements: int = 2) -> FiniteLattice:
    """A random sublattice of a small grid, re-presented as a lattice.

    Sublattices of distributive lattices are distributive, so the sample
    space is guaranteed valid by construction.
    """
    while True:
        a = rng.randint(2, 4)
        b = rng.randint(2, 4)
        box = product(chain(a), chain(b))
        size = rng.randint(min_elements, min(max_elements, box.n))
        seed_elems = rng.sample(range(box.n), size)
        sub = sublattice_closure(box, seed_elems)
        if min_elements <= len(sub) <= max_elements:
            return sub.lattice


def random_sublattice(rng: random.Random, lat: FiniteLattice) -> Sublattice:
    size = rng.randint(1, lat.n)
    return sublattice_closure(lat, rng.sample(range(lat.n), size))


# -- brute-force oracles ------------------------------------------------------

def brute_force_sublattices(lat: FiniteLattice) -> list[tuple[int, ...]]:
    """All nonempty meet/join-closed subsets by direct subset filtering."""
    out = []
    for size in range(1, lat.n + 1):
        for combo in itertools.combinations(range(lat.n), size):
            cset = set(combo)
            if all(lat.meet(a, b) in cset and lat.join(a, b) in cset
                   for a in combo for b in combo):
                out.append(combo)
    return out


_coloring_memo: dict[int, set[tuple[int, ...]]] = {}


def brute_force_colorings(lat: FiniteLattice) -> set[tuple[int, ...]]:
    """All canonical chain colorings by filtering every map into {1..n}."""
    cached = _coloring_memo.get(id(lat))
    if cached is not None:
        return cached
    out = set()
    for values in itertools.product(range(1, lat.n + 1), repeat=lat.n):
        if all(values[lat.meet(i, j)] == min(values[i], values[j])
               and values[lat.join(i, j)] == max(values[i], values[j])
               for i in range(lat.n) for j in range(lat.n)):
            ranks = {v: r + 1 for r, v in enumerate(sorted(set(values)))}
            out.add(tuple(ranks[v] for v in values))
    _coloring_memo[id(lat)] = out
    return out


def brute_force_restriction_image(sub: Sublattice) -> set[tuple[int, ...]]:
    """Canonical restrictions to the sublattice of every parent coloring."""
    out = set()
    for levels in brute_force_colorings(sub.parent):
        raw = [levels[i] for i in sub.member_list]
        ranks = {v: r + 1 for r, v in enumerate(sorted(set(raw)))}
        out.add(tuple(ranks[v] for v in raw))
    return out


def coloring_is_valid(coloring: ChainColoring) -> bool:
    lat = coloring.lattice
    lv = coloring.levels
    return all(lv[lat.meet(i, j)] == min(lv[i], lv[j])
               and lv[lat.join(i, j)] == max(lv[i], lv[j])
               for i in range(lat.n) for j in range(lat.n))

"""Lattice homomorphisms into finite chains and into [-1, 1].

Extendability questions are decided at the level of chain colorings (order
types).  A non-decreasing reparameterization of a chain of values preserves
min and max, so two homomorphisms with the same order type extend together;
the brute-force oracle tests pin this reduction down on small instances.
Level logic runs in integers, values are exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .errors import NonMonotoneValues, SizeCapExceeded
from .lattice import DEFAULT_ENUM_CAP, FiniteLattice, Sublattice

ONE = Fraction(1)


def search_maps(dom: FiniteLattice,
                candidates: Sequence[Sequence[int]],
                meet_of: Callable[[int, int], int],
                join_of: Callable[[int, int], int],
                surjective_onto: Optional[Sequence[int]] = None
                ) -> Iterator[tuple[int, ...]]:
    """Backtracking enumeration of meet/join-preserving maps out of ``dom``.

    ``candidates[e]`` lists allowed codomain values for element e; the search
    walks the domain's linear extension and checks each (x, y, x^y, xvy)
    constraint at the first step where all four values are assigned, so every
    equation is verified exactly once per branch.  With ``surjective_onto``
    only maps covering that whole value set are produced.  Deterministic.
    """
    order = dom.linear_extension
    schedule = dom.pair_schedule
    n = dom.n
    assign: list[int] = [0] * n
    need = set(surjective_onto) if surjective_onto is not None else None

    def rec(t: int, missing: frozenset) -> Iterator[tuple[int, ...]]:
        if t == n:
            if not missing:
                yield tuple(assign)
            return
        e = order[t]
        checks = schedule[t]
        slots_left = n - t - 1
        for v in candidates[e]:
            assign[e] = v
            ok = True
            for (i, j, m, w) in checks:
                ai = assign[i]
                aj = assign[j]
                if assign[m] != meet_of(ai, aj) or assign[w] != join_of(ai, aj):
                    ok = False
                    break
            if not ok:
                continue
            rest = missing - {v} if v in missing else missing
            if len(rest) > slots_left:
                continue
            yield from rec(t + 1, rest)

    yield from rec(0, frozenset(need) if need else frozenset())


def _canonical_levels(raw: Sequence[int]) -> tuple[int, ...]:
    ranks = {v: r + 1 for r, v in enumerate(sorted(set(raw)))}
    return tuple(ranks[v] for v in raw)


@dataclass(frozen=True)
class ChainColoring:
    """A homomorphism onto the chain {1, ..., k}, in canonical form.

    ``levels[i]`` is the level of element i; used levels are exactly
    1..k, level(xvy) = max and level(x^y) = min of the operand levels.
    """

    lattice: FiniteLattice
    levels: tuple[int, ...]

    def __post_init__(self):
        lat = self.lattice
        levels = tuple(int(v) for v in self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) != lat.n:
            raise ValueError("one level per lattice element is required")
        used = sorted(set(levels))
        if used != list(range(1, len(used) + 1)):
            raise ValueError("levels must use exactly 1..k")
        for i in range(lat.n):
            li = levels[i]
            for j in range(i + 1, lat.n):
                lj = levels[j]
                if levels[lat.meet(i, j)] != min(li, lj) or \
                   levels[lat.join(i, j)] != max(li, lj):
                    raise ValueError(
                        "levels do not preserve meet/join on "
                        f"({lat.labels[i]!r}, {lat.labels[j]!r})")

    @classmethod
    def from_raw(cls, lattice: FiniteLattice, raw: Sequence[int]) -> "ChainColoring":
        return cls(lattice, _canonical_levels(raw))

    @property
    def k(self) -> int:
        return max(self.levels)

    def level_of(self, label) -> int:
        return self.levels[self.lattice.index(label)]

    def classes(self) -> tuple[tuple[int, ...], ...]:
        """Element indices grouped by level, lowest first."""
        return tuple(
            tuple(i for i, v in enumerate(self.levels) if v == lvl)
            for lvl in range(1, self.k + 1))

    def __hash__(self):
        return hash((id(self.lattice), self.levels))


def enumerate_chain_colorings(lat: FiniteLattice,
                              cap: int = DEFAULT_ENUM_CAP
                              ) -> tuple[ChainColoring, ...]:
    """All canonical chain colorings, each exactly once, sorted by (k, levels)."""
    if lat.n > cap:
        raise SizeCapExceeded(
            f"coloring enumeration over {lat.n} elements exceeds cap {cap}")
    found: list[tuple[int, ...]] = []
    for k in range(1, lat.height + 1):
        candidates = [range(1, k + 1)] * lat.n
        onto = range(1, k + 1)
        for sol in search_maps(lat, candidates, min, max, surjective_onto=onto):
            found.append(sol)
    found.sort(key=lambda s: (max(s), s))
    return tuple(ChainColoring(lat, s) for s in found)


def restrict_and_normalize(coloring: ChainColoring,
                           sub: Sublattice) -> ChainColoring:
    """Restriction of a parent coloring to a sublattice, re-ranked densely."""
    if coloring.lattice is not sub.parent:
        raise ValueError("coloring is not defined on the parent lattice")
    raw = [coloring.levels[i] for i in sub.member_list]
    return ChainColoring.from_raw(sub.lattice, raw)


def _extension_grid(coloring: ChainColoring, sub: Sublattice):
    """Candidate integer levels for extending ``coloring`` to the parent.

    Members are pinned at level*G with G = |M \\ L| + 1; the grid leaves G
    slots below the lowest pin, G above the highest, and G - 1 in each gap,
    enough to host every order type an extension can realize.
    """
    parent = sub.parent
    gap = parent.n - len(sub.member_list) + 1
    k = coloring.k
    candidates: list[Sequence[int]] = []
    for e in range(parent.n):
        if e in sub.members:
            candidates.append((coloring.levels[sub.position(e)] * gap,))
        else:
            candidates.append(range(0, (k + 1) * gap + 1))
    return candidates


def extension_assignments(coloring: ChainColoring, sub: Sublattice,
                          limit: Optional[int] = None
                          ) -> list[tuple[int, ...]]:
    """Raw grid-level assignments on the parent whose restriction is
    ``coloring``, one per distinct canonical extension, search order."""
    if coloring.lattice is not sub.lattice:
        raise ValueError("coloring is not defined on the sublattice")
    candidates = _extension_grid(coloring, sub)
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for sol in search_maps(sub.parent, candidates, min, max):
        canon = _canonical_levels(sol)
        if canon not in seen:
            seen[canon] = sol
            if limit is not None and len(seen) >= limit:
                break
    return list(seen.values())


def extension_colorings(coloring: ChainColoring, sub: Sublattice,
                        limit: Optional[int] = None
                        ) -> tuple[ChainColoring, ...]:
    """All distinct canonical colorings of the parent extending ``coloring``."""
    return tuple(ChainColoring.from_raw(sub.parent, sol)
                 for sol in extension_assignments(coloring, sub, limit))


def extend_coloring(coloring: ChainColoring,
                    sub: Sublattice) -> Optional[ChainColoring]:
    """First extension of ``coloring`` to the parent, or None if none exists."""
    exts = extension_colorings(coloring, sub, limit=1)
    return exts[0] if exts else None


@dataclass(frozen=True)
class RealHom:
    """A lattice homomorphism into [-1, 1] as an exact value assignment."""

    lattice: FiniteLattice
    values: tuple[Fraction, ...]

    def __post_init__(self):
        lat = self.lattice
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != lat.n:
            raise ValueError("one value per lattice element is required")
        for v in vals:
            if not -1 <= v <= 1:
                raise ValueError(f"value {v} outside [-1, 1]")
        for i in range(lat.n):
            vi = vals[i]
            for j in range(i + 1, lat.n):
                vj = vals[j]
                if vals[lat.meet(i, j)] != min(vi, vj) or \
                   vals[lat.join(i, j)] != max(vi, vj):
                    raise ValueError(
                        "values do not preserve meet/join on "
                        f"({lat.labels[i]!r}, {lat.labels[j]!r})")

    def value(self, label) -> Fraction:
        return self.values[self.lattice.index(label)]

    def coloring(self) -> ChainColoring:
        return ChainColoring.from_raw(self.lattice, _rank(self.values))

    def scale(self, factor: Fraction) -> "RealHom":
        f = Fraction(factor)
        if f < 0:
            raise ValueError("scaling factor must be nonnegative")
        return RealHom(self.lattice, tuple(v * f for v in self.values))

    def sup_abs(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def __hash__(self):
        return hash((id(self.lattice), self.values))


def _rank(values: Sequence[Fraction]) -> list[int]:
    order = {v: r + 1 for r, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


def realize_hom(coloring: ChainColoring,
                level_values: Sequence) -> RealHom:
    """Assign a strictly increasing value in [-1, 1] to each level."""
    vals = [Fraction(v) for v in level_values]
    if len(vals) != coloring.k:
        raise NonMonotoneValues(
            f"expected {coloring.k} level values, got {len(vals)}")
    for a, b in zip(vals, vals[1:]):
        if not a < b:
            raise NonMonotoneValues("level values must be strictly increasing")
    if vals and not (-1 <= vals[0] and vals[-1] <= 1):
        raise NonMonotoneValues("level values must lie in [-1, 1]")
    return RealHom(coloring.lattice,
                   tuple(vals[lv - 1] for lv in coloring.levels))


def extend_real_hom(hom: RealHom, sub: Sublattice) -> Optional[RealHom]:
    """Extend a homomorphism on the sublattice to the whole parent.

    The order type is extended on the integer grid; pinned levels keep their
    original values and new levels receive equally spaced interior values
    (the midpoint when a gap hosts a single new level).  New levels past an
    extreme move halfway toward the matching endpoint of [-1, 1]; when that
    endpoint is already attained they collapse onto the extreme pin, which
    stays a homomorphism because the realization only needs to be monotone.
    """
    if hom.lattice is not sub.lattice:
        raise ValueError("homomorphism is not defined on the sublattice")
    coloring = hom.coloring()
    raws = extension_assignments(coloring, sub, limit=1)
    if not raws:
        return None
    raw = raws[0]
    gap = sub.parent.n - len(sub.member_list) + 1
    k = coloring.k
    pin_values = sorted(set(hom.values))  # class values u_1 < ... < u_k

    value_at: dict[int, Fraction] = {
        lvl * gap: pin_values[lvl - 1] for lvl in range(1, k + 1)}
    new_levels = sorted(set(raw) - set(value_at))
    by_gap: dict[int, list[int]] = {}
    for lv in new_levels:
        by_gap.setdefault(lv // gap, []).append(lv)
    for g, levels in by_gap.items():
        lo = Fraction(-1) if g == 0 else pin_values[g - 1]
        hi = Fraction(1) if g >= k else pin_values[g]
        t = len(levels)
        for pos, lv in enumerate(sorted(levels), start=1):
            if lo == hi:
                value_at[lv] = lo
            else:
                value_at[lv] = lo + (hi - lo) * Fraction(pos, t + 1)
    return RealHom(sub.parent, tuple(value_at[lv] for lv in raw))


def radial_decompose(hom: RealHom) -> tuple[Fraction, Optional[RealHom]]:
    """Split x* into lambda * base with base on the unit sphere of the cone.

    lambda is max(|x*(bottom)|, |x*(top)|); the zero homomorphism returns
    (0, None).  Homomorphism values are monotone between bottom and top, so
    base stays inside [-1, 1] and satisfies the sphere condition exactly.
    """
    lat = hom.lattice
    lam = max(abs(hom.values[lat.bottom]), abs(hom.values[lat.top]))
    if lam == 0:
        return Fraction(0), None
    return lam, hom.scale(ONE / lam)


@dataclass(frozen=True)
class VectorHom:
    """A homomorphism into n-dimensional sequence space with the sum norm.

    Each component is a real-valued lattice homomorphism (no [-1, 1] box);
    the norm is the exact maximum over elements of the summed absolute
    component values.
    """

    lattice: FiniteLattice
    components: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        lat = self.lattice
        comps = tuple(tuple(Fraction(v) for v in comp)
                      for comp in self.components)
        object.__setattr__(self, "components", comps)
        for comp in comps:
            if len(comp) != lat.n:
                raise ValueError("component length must match the lattice")
            for i in range(lat.n):
                for j in range(i + 1, lat.n):
                    if comp[lat.meet(i, j)] != min(comp[i], comp[j]) or \
                       comp[lat.join(i, j)] != max(comp[i], comp[j]):
                        raise ValueError(
                            "component is not a lattice homomorphism")

    @property
    def dim(self) -> int:
        return len(self.components)

    def at(self, element: int) -> tuple[Fraction, ...]:
        return tuple(comp[element] for comp in self.components)

    def norm(self) -> Fraction:
        if not self.components:
            return Fraction(0)
        return max(sum(abs(comp[x]) for comp in self.components)
                   for x in range(self.lattice.n))

    def scale(self, factor: Fraction) -> "VectorHom":
        f = Fraction(factor)
        return VectorHom(self.lattice, tuple(
            tuple(v * f for v in comp) for comp in self.components))


# -- JSON -------------------------------------------------------------------

def real_hom_to_json(hom: RealHom) -> dict:
    return {"values": {lab: str(v)
                       for lab, v in zip(hom.lattice.labels, hom.values)}}


def real_hom_from_json(lat: FiniteLattice, data: dict) -> RealHom:
    values = data["values"]
    return RealHom(lat, tuple(Fraction(values[lab]) for lab in lat.labels))


def coloring_to_json(coloring: ChainColoring) -> dict:
    return {"levels": {lab: lv
                       for lab, lv in zip(coloring.lattice.labels,
                                          coloring.levels)}}


def coloring_from_json(lat: FiniteLattice, data: dict) -> ChainColoring:
    levels = data["levels"]
    return ChainColoring(lat, tuple(int(levels[lab]) for lab in lat.labels))

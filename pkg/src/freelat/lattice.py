"""Finite distributive lattices: construction, validation, structure, I/O.

Elements are referenced by dense integer indices internally; labels exist
only at the I/O boundary.  Order data is stored as per-element bitmasks,
meet and join as full tables, so all binary queries are O(1).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import NotALattice, NotDistributive, SizeCapExceeded

#: Default guard for exponential enumerations (subsets, colorings).
DEFAULT_ENUM_CAP = 16


class FiniteLattice:
    """A finite distributive lattice over an ordered tuple of labels.

    Instances are validated eagerly at construction: the relation must be a
    partial order, every pair must have a unique infimum and supremum, and
    distributivity must hold for all triples.  Non-distributive input is
    rejected with a witness triple.  Instances are immutable and safe to
    share across threads.
    """

    __slots__ = ("labels", "n", "_index", "_up", "_down", "_meet", "_join",
                 "bottom", "top", "_covers", "_linext", "_schedule", "_height")

    def __init__(self, labels: Sequence[str], up_masks: Sequence[int]):
        labels = tuple(labels)
        if not labels:
            raise NotALattice("at least one element is required")
        if len(set(labels)) != len(labels):
            raise NotALattice("element labels must be unique")
        n = len(labels)
        up = tuple(up_masks)
        if len(up) != n:
            raise NotALattice("order relation size mismatch")
        full = (1 << n) - 1
        for i, mask in enumerate(up):
            if mask & ~full:
                raise NotALattice("order relation references unknown elements")
            if not (mask >> i) & 1:
                raise NotALattice(f"order is not reflexive at {labels[i]!r}")
        for i in range(n):
            for j in range(i + 1, n):
                if (up[i] >> j) & 1 and (up[j] >> i) & 1:
                    raise NotALattice(
                        "order is not antisymmetric on "
                        f"{labels[i]!r}, {labels[j]!r} (cycle in covers?)")
        for i in range(n):
            rest = up[i] & ~(1 << i)
            while rest:
                j = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if up[j] & ~up[i]:
                    raise NotALattice(
                        f"order is not transitive through {labels[j]!r}")

        down = [0] * n
        for i in range(n):
            mask = up[i]
            while mask:
                j = (mask & -mask).bit_length() - 1
                mask &= mask - 1
                down[j] |= 1 << i

        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m = self._extreme(down[i] & down[j], down, labels, i, j, "infimum")
                w = self._extreme(up[i] & up[j], up, labels, i, j, "supremum")
                meet[i][j] = meet[j][i] = m
                join[i][j] = join[j][i] = w

        # Sanity net over the derived tables: x <= y  iff  x^y = x  iff  xvy = y.
        for i in range(n):
            for j in range(n):
                le = bool((up[i] >> j) & 1)
                if (meet[i][j] == i) != le or (join[i][j] == j) != le:
                    raise NotALattice("meet/join tables disagree with the order")

        for i in range(n):
            mi = meet[i]
            for j in range(n):
                mij = mi[j]
                jj = join[j]
                for k in range(j, n):
                    if mi[jj[k]] != join[mij][mi[k]]:
                        raise NotDistributive(
                            "distributivity fails on "
                            f"({labels[i]!r}, {labels[j]!r}, {labels[k]!r})",
                            witness=(labels[i], labels[j], labels[k]))

        self.labels = labels
        self.n = n
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._up = up
        self._down = tuple(down)
        self._meet = tuple(tuple(row) for row in meet)
        self._join = tuple(tuple(row) for row in join)
        self.bottom = next(i for i in range(n) if up[i] == full)
        self.top = next(i for i in range(n) if down[i] == full)
        self._covers = None
        self._linext = None
        self._schedule = None
        self._height = None

    @staticmethod
    def _extreme(common: int, cones: Sequence[int], labels, i, j, kind: str) -> int:
        # Greatest (resp. least) element of the bound set `common`: the unique
        # z in common whose cone contains all of common.
        mask = common
        while mask:
            z = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            if not common & ~cones[z]:
                return z
        raise NotALattice(
            f"pair ({labels[i]!r}, {labels[j]!r}) has no {kind}")

    # -- basic queries -------------------------------------------------

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown element {label!r}") from None

    def label(self, i: int):
        return self.labels[i]

    def leq(self, i: int, j: int) -> bool:
        return bool((self._up[i] >> j) & 1)

    def meet(self, i: int, j: int) -> int:
        return self._meet[i][j]

    def join(self, i: int, j: int) -> int:
        return self._join[i][j]

    def meet_all(self, indices: Iterable[int]) -> int:
        it = iter(indices)
        acc = next(it)
        for i in it:
            acc = self._meet[acc][i]
        return acc

    def join_all(self, indices: Iterable[int]) -> int:
        it = iter(indices)
        acc = next(it)
        for i in it:
            acc = self._join[acc][i]
        return acc

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    # -- derived structure ---------------------------------------------

    @property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse diagram edges (i, j) with j covering i."""
        if self._covers is None:
            out = []
            for i in range(self.n):
                strict = self._up[i] & ~(1 << i)
                mask = strict
                while mask:
                    j = (mask & -mask).bit_length() - 1
                    mask &= mask - 1
                    between = strict & self._down[j] & ~(1 << j)
                    if not between:
                        out.append((i, j))
                    # elements strictly between i and j rule out the cover
            self._covers = tuple(sorted(out))
        return self._covers

    @property
    def linear_extension(self) -> tuple[int, ...]:
        """Topological order of the Hasse diagram, ties broken by index."""
        if self._linext is None:
            n = self.n
            placed = 0
            order = []
            remaining = set(range(n))
            while remaining:
                e = min(i for i in remaining
                        if not (self._down[i] & ~(1 << i)) & ~placed)
                order.append(e)
                placed |= 1 << e
                remaining.discard(e)
            self._linext = tuple(order)
        return self._linext

    @property
    def pair_schedule(self) -> tuple[tuple[tuple[int, int, int, int], ...], ...]:
        """Per linear-extension step, the (i, j, i^j, ivj) checks that first
        become fully assigned at that step.  Used by backtracking searches."""
        if self._schedule is None:
            pos = [0] * self.n
            for t, e in enumerate(self.linear_extension):
                pos[e] = t
            sched: list[list[tuple[int, int, int, int]]] = [[] for _ in range(self.n)]
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    m = self._meet[i][j]
                    w = self._join[i][j]
                    t = max(pos[i], pos[j], pos[m], pos[w])
                    sched[t].append((i, j, m, w))
            self._schedule = tuple(tuple(s) for s in sched)
        return self._schedule

    @property
    def height(self) -> int:
        """Number of elements in a longest chain."""
        if self._height is None:
            h = [1] * self.n
            for e in self.linear_extension:
                below = self._down[e] & ~(1 << e)
                while below:
                    i = (below & -below).bit_length() - 1
                    below &= below - 1
                    if h[i] + 1 > h[e]:
                        h[e] = h[i] + 1
            self._height = max(h)
        return self._height

    def join_irreducibles(self) -> tuple[int, ...]:
        """Elements with exactly one lower cover (excludes the bottom)."""
        lower_count = [0] * self.n
        for i, j in self.covers:
            lower_count[j] += 1
        return tuple(j for j in range(self.n)
                     if j != self.bottom and lower_count[j] == 1)

    def __repr__(self) -> str:
        return f"FiniteLattice({list(self.labels)!r})"

    # -- construction --------------------------------------------------

    @classmethod
    def from_covers(cls, labels: Sequence[str],
                    cover_pairs: Iterable[tuple[str, str]]) -> "FiniteLattice":
        labels = tuple(labels)
        index = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise NotALattice("element labels must be unique")
            index[lab] = i
        n = len(labels)
        up = [1 << i for i in range(n)]
        edges = []
        for a, b in cover_pairs:
            if a not in index or b not in index:
                raise NotALattice(f"cover ({a!r}, {b!r}) names unknown elements")
            edges.append((index[a], index[b]))
        # Reflexive-transitive closure by fixpoint; a cycle surfaces later as
        # an antisymmetry failure in the constructor.
        changed = True
        while changed:
            changed = False
            for a, b in edges:
                merged = up[a] | up[b]
                if merged != up[a]:
                    up[a] = merged
                    changed = True
        return cls(labels, up)


def build_lattice(elements: Sequence[str],
                  cover_pairs: Iterable[tuple[str, str]]) -> FiniteLattice:
    """Validated lattice from labels and Hasse-diagram cover pairs (a below b)."""
    return FiniteLattice.from_covers(elements, cover_pairs)


# -- standard constructors ----------------------------------------------

def chain(n: int) -> FiniteLattice:
    """Totally ordered lattice with elements labeled "1" .. str(n)."""
    if n < 1:
        raise ValueError("a chain needs at least one element")
    labels = [str(i + 1) for i in range(n)]
    full = (1 << n) - 1
    masks = [(full >> i) << i for i in range(n)]
    return FiniteLattice(labels, masks)


def diamond() -> FiniteLattice:
    """Four elements m < a, b < M with a, b incomparable."""
    return build_lattice(["m", "a", "b", "M"],
                         [("m", "a"), ("m", "b"), ("a", "M"), ("b", "M")])


def product(left: FiniteLattice, right: FiniteLattice) -> FiniteLattice:
    """Coordinatewise-ordered product; labels are "(x,y)" pairs."""
    labels = []
    pairs = []
    for i in range(left.n):
        for j in range(right.n):
            labels.append(f"({left.labels[i]},{right.labels[j]})")
            pairs.append((i, j))
    masks = []
    for i, j in pairs:
        mask = 0
        for t, (a, b) in enumerate(pairs):
            if left.leq(i, a) and right.leq(j, b):
                mask |= 1 << t
        masks.append(mask)
    return FiniteLattice(labels, masks)


def _fresh_label(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    lab = base
    while lab in taken:
        lab += "*"
    return lab


def bound_extension(inner: FiniteLattice) -> FiniteLattice:
    """Adjoin a fresh global minimum and maximum below/above all of ``inner``."""
    bot = _fresh_label("bot", inner.labels)
    top = _fresh_label("top", inner.labels)
    labels = (bot,) + inner.labels + (top,)
    n = inner.n
    full = (1 << (n + 2)) - 1
    masks = [full]
    for i in range(n):
        masks.append((inner._up[i] << 1) | (1 << (n + 1)))
    masks.append(1 << (n + 1))
    return FiniteLattice(labels, masks)


# -- sublattices ----------------------------------------------------------

class Sublattice:
    """A nonempty subset of a parent lattice closed under meet and join."""

    __slots__ = ("parent", "members", "member_list", "_pos", "_lattice")

    def __init__(self, parent: FiniteLattice, members: Iterable[int]):
        ms = sorted(set(members))
        if not ms:
            raise NotALattice("a sublattice must be nonempty")
        for i in ms:
            if not 0 <= i < parent.n:
                raise NotALattice("sublattice member out of range")
        mset = frozenset(ms)
        for a in ms:
            for b in ms:
                if parent.meet(a, b) not in mset or parent.join(a, b) not in mset:
                    raise NotALattice(
                        "subset is not closed under meet and join "
                        f"(offending pair {parent.labels[a]!r}, {parent.labels[b]!r})")
        self.parent = parent
        self.members = mset
        self.member_list = tuple(ms)
        self._pos = {e: t for t, e in enumerate(ms)}
        self._lattice = None

    @classmethod
    def from_labels(cls, parent: FiniteLattice, labels: Iterable[str]) -> "Sublattice":
        return cls(parent, (parent.index(lab) for lab in labels))

    def __contains__(self, parent_index: int) -> bool:
        return parent_index in self.members

    def __len__(self) -> int:
        return len(self.member_list)

    def position(self, parent_index: int) -> int:
        """Index of a member inside the induced lattice."""
        return self._pos[parent_index]

    def parent_index(self, position: int) -> int:
        return self.member_list[position]

    @property
    def lattice(self) -> FiniteLattice:
        """The members as a lattice in their own right (labels preserved)."""
        if self._lattice is None:
            labels = [self.parent.labels[i] for i in self.member_list]
            masks = []
            for a in self.member_list:
                mask = 0
                for t, b in enumerate(self.member_list):
                    if self.parent.leq(a, b):
                        mask |= 1 << t
                masks.append(mask)
            self._lattice = FiniteLattice(labels, masks)
        return self._lattice

    def __repr__(self) -> str:
        labs = [self.parent.labels[i] for i in self.member_list]
        return f"Sublattice({labs!r})"


def sublattice_closure(parent: FiniteLattice,
                       subset: Iterable) -> Sublattice:
    """Smallest meet/join-closed superset of ``subset`` (labels or indices)."""
    current = set()
    for x in subset:
        current.add(x if isinstance(x, int) else parent.index(x))
    if not current:
        raise NotALattice("closure of the empty set is not a sublattice")
    while True:
        fresh = set()
        for a in current:
            for b in current:
                m = parent.meet(a, b)
                w = parent.join(a, b)
                if m not in current:
                    fresh.add(m)
                if w not in current:
                    fresh.add(w)
        if not fresh:
            return Sublattice(parent, current)
        current |= fresh


def enumerate_sublattices(parent: FiniteLattice,
                          cap: int = DEFAULT_ENUM_CAP) -> Iterator[Sublattice]:
    """Every nonempty meet/join-closed subset, by cardinality then lex order.

    Deterministic single-consumer stream; guarded because the subset space
    is exponential in the lattice size.
    """
    if parent.n > cap:
        raise SizeCapExceeded(
            f"sublattice enumeration over {parent.n} elements exceeds cap {cap}")
    meet = parent._meet
    join = parent._join
    for size in range(1, parent.n + 1):
        for combo in itertools.combinations(range(parent.n), size):
            cset = set(combo)
            ok = True
            for a in combo:
                row_m = meet[a]
                row_j = join[a]
                for b in combo:
                    if b < a:
                        continue
                    if row_m[b] not in cset or row_j[b] not in cset:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                yield Sublattice(parent, combo)


# -- structural predicates ------------------------------------------------

def is_chain(sub: Sublattice) -> bool:
    """All members pairwise comparable."""
    ms = sub.member_list
    return all(sub.parent.comparable(a, b)
               for a, b in itertools.combinations(ms, 2))


def is_ideal(sub: Sublattice) -> bool:
    """Down-closed in the parent: x <= y with y a member forces x in."""
    parent = sub.parent
    for y in sub.member_list:
        below = parent._down[y]
        while below:
            x = (below & -below).bit_length() - 1
            below &= below - 1
            if x not in sub.members:
                return False
    return True


def is_filter(sub: Sublattice) -> bool:
    """Up-closed in the parent: x >= y with y a member forces x in."""
    parent = sub.parent
    for y in sub.member_list:
        above = parent._up[y]
        while above:
            x = (above & -above).bit_length() - 1
            above &= above - 1
            if x not in sub.members:
                return False
    return True


def lattice_is_chain(lat: FiniteLattice) -> bool:
    return all(lat.comparable(i, j)
               for i, j in itertools.combinations(range(lat.n), 2))


# -- Birkhoff embedding ----------------------------------------------------

@dataclass(frozen=True)
class BirkhoffEmbedding:
    """Injective meet/join-preserving map into a Boolean cube.

    ``vectors[i]`` is the indicator, over ``irreducibles``, of the
    join-irreducible elements below element i.
    """

    lattice: FiniteLattice
    irreducibles: tuple[int, ...]
    vectors: tuple[tuple[int, ...], ...]

    def vector(self, i: int) -> tuple[int, ...]:
        return self.vectors[i]


def birkhoff_embed(lat: FiniteLattice) -> BirkhoffEmbedding:
    """Embed a finite distributive lattice into {0,1}^n via join-irreducibles."""
    irr = lat.join_irreducibles()
    vectors = tuple(
        tuple(1 if lat.leq(j, x) else 0 for j in irr) for x in range(lat.n))
    return BirkhoffEmbedding(lat, irr, vectors)


# -- isomorphism (test/support utility) ------------------------------------

def _invariant(lat: FiniteLattice, i: int) -> tuple[int, int]:
    return (bin(lat._down[i]).count("1"), bin(lat._up[i]).count("1"))


def lattices_isomorphic(a: FiniteLattice, b: FiniteLattice) -> bool:
    """Structural isomorphism test by invariant-guided backtracking."""
    if a.n != b.n:
        return False
    if sorted(map(lambda i: _invariant(a, i), range(a.n))) != \
       sorted(map(lambda i: _invariant(b, i), range(b.n))):
        return False
    targets: list[list[int]] = [
        [j for j in range(b.n) if _invariant(a, i) == _invariant(b, j)]
        for i in range(a.n)
    ]
    assign: list[int] = [-1] * a.n
    used = [False] * b.n

    def rec(i: int) -> bool:
        if i == a.n:
            return True
        for j in targets[i]:
            if used[j]:
                continue
            ok = True
            for k in range(i):
                if a.leq(i, k) != b.leq(j, assign[k]) or \
                   a.leq(k, i) != b.leq(assign[k], j):
                    ok = False
                    break
            if ok:
                assign[i] = j
                used[j] = True
                if rec(i + 1):
                    return True
                used[j] = False
        return False

    # Order preservation on a bijection between lattices preserves meet/join.
    return rec(0)


# -- I/O --------------------------------------------------------------------

def lattice_to_json(lat: FiniteLattice) -> dict:
    """JSON-ready dict: ``{"elements": [...], "covers": [[a, b], ...]}``."""
    return {
        "elements": list(lat.labels),
        "covers": [[lat.labels[i], lat.labels[j]] for i, j in lat.covers],
    }


def lattice_from_json(data: dict) -> FiniteLattice:
    if not isinstance(data, dict) or "elements" not in data:
        raise NotALattice("lattice JSON needs an 'elements' list")
    elements = data["elements"]
    covers = [tuple(pair) for pair in data.get("covers", [])]
    return build_lattice(elements, covers)


def load_lattice(path: str) -> FiniteLattice:
    with open(path, "r", encoding="utf-8") as fh:
        return lattice_from_json(json.load(fh))


def to_dot(lat: FiniteLattice) -> str:
    """Hasse diagram in DOT format, ranked bottom-to-top."""
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for lab in lat.labels:
        lines.append(f'  "{lab}";')
    for i, j in lat.covers:
        lines.append(f'  "{lat.labels[i]}" -> "{lat.labels[j]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Embedding trichotomy for sublattice pairs L inside M.

Three nested properties are decided with constructive witnesses: a global
homomorphic retraction, local complements on every sublattice, and the
extension property for homomorphisms into [-1, 1].  For finite pairs the
first two coincide; the analysis computes both and cross-checks.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import NotLocallyComplemented, SizeCapExceeded
from .lattice import (DEFAULT_ENUM_CAP, FiniteLattice, Sublattice,
                      enumerate_sublattices, is_chain, is_filter, is_ideal,
                      lattice_is_chain)
from .homs import (ChainColoring, RealHom, VectorHom, coloring_to_json,
                   enumerate_chain_colorings, extend_coloring,
                   extension_colorings, restrict_and_normalize, search_maps)


def _hom_into_members(dom: FiniteLattice, parent: FiniteLattice,
                      pinned: dict[int, int],
                      codomain: tuple[int, ...]):
    """Maps dom -> codomain (parent indices) preserving dom's meet/join,
    with values combined through the parent's tables."""
    meet_tab = parent._meet
    join_tab = parent._join
    candidates = [
        (pinned[e],) if e in pinned else codomain for e in range(dom.n)]
    return search_maps(dom, candidates,
                       lambda a, b: meet_tab[a][b],
                       lambda a, b: join_tab[a][b])


def find_retraction(sub: Sublattice,
                    cap: int = DEFAULT_ENUM_CAP) -> Optional[tuple[int, ...]]:
    """Complete backtracking search for r: M -> L fixing L pointwise.

    Returns the image as parent indices aligned with the parent's elements,
    or None when no retraction exists.
    """
    parent = sub.parent
    if parent.n > cap:
        raise SizeCapExceeded(
            f"retraction search over {parent.n} elements exceeds cap {cap}")
    pinned = {e: e for e in sub.member_list}
    for sol in _hom_into_members(parent, parent, pinned, sub.member_list):
        return sol
    return None


@dataclass(frozen=True)
class LocalComplementReport:
    """Outcome of the per-sublattice complement sweep.

    ``witnesses`` pairs each sublattice (as parent-index tuples) with a map
    T into L fixing the overlap, aligned with the sublattice's members;
    ``failing`` is the first sublattice without such a map, smallest first.
    """

    holds: bool
    witnesses: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    failing: Optional[tuple[int, ...]]

    def witness_for(self, members: tuple[int, ...]) -> tuple[int, ...]:
        for f_members, t_map in self.witnesses:
            if f_members == members:
                return t_map
        raise KeyError(members)


def local_complement_check(sub: Sublattice,
                           cap: int = DEFAULT_ENUM_CAP) -> LocalComplementReport:
    """Search T: F -> L fixing F with L, for every sublattice F of the parent.

    Sublattices are processed smallest first and the sweep short-circuits on
    the first failure.
    """
    parent = sub.parent
    witnesses = []
    for f_sub in enumerate_sublattices(parent, cap):
        pinned = {f_sub.position(e): e for e in f_sub.member_list
                  if e in sub.members}
        found = None
        for sol in _hom_into_members(f_sub.lattice, parent, pinned,
                                     sub.member_list):
            found = sol
            break
        if found is None:
            return LocalComplementReport(False, tuple(witnesses),
                                         f_sub.member_list)
        witnesses.append((f_sub.member_list, found))
    return LocalComplementReport(True, tuple(witnesses), None)


def validate_local_witness(sub: Sublattice, f_members: tuple[int, ...],
                           t_map: tuple[int, ...]) -> bool:
    """Literal check of the local-complement conditions for one sublattice."""
    parent = sub.parent
    pos = {e: t for t, e in enumerate(f_members)}
    for e in f_members:
        if t_map[pos[e]] not in sub.members:
            return False
        if e in sub.members and t_map[pos[e]] != e:
            return False
    for a in f_members:
        for b in f_members:
            ta = t_map[pos[a]]
            tb = t_map[pos[b]]
            if t_map[pos[parent.meet(a, b)]] != parent.meet(ta, tb):
                return False
            if t_map[pos[parent.join(a, b)]] != parent.join(ta, tb):
                return False
    return True


TBuilder = Callable[[Sublattice], tuple[int, ...]]


def fast_path_loc_comp(sub: Sublattice) -> Optional[tuple[str, TBuilder]]:
    """Constructive local complements for the four structural special cases.

    Tags, first match wins: "chain" (the parent is totally ordered), "ideal",
    "filter", and "bounded-extension" (the parent only adds a bottom and a
    top).  The builder maps any sublattice F of the parent to T: F -> L as
    parent indices aligned with F's members.
    """
    parent = sub.parent
    l_bottom = parent.meet_all(sub.member_list)

    def constant(f_sub: Sublattice) -> tuple[int, ...]:
        return tuple(l_bottom for _ in f_sub.member_list)

    if lattice_is_chain(parent):

        def build_chain(f_sub: Sublattice) -> tuple[int, ...]:
            inter = [e for e in f_sub.member_list if e in sub.members]
            if not inter:
                return constant(f_sub)
            out = []
            for x in f_sub.member_list:
                ups = [y for y in inter if parent.leq(x, y)]
                if ups:
                    out.append(parent.meet_all(ups))
                else:
                    out.append(parent.join_all(
                        y for y in inter if parent.leq(y, x)))
            return tuple(out)

        return "chain", build_chain

    if is_ideal(sub):

        def build_ideal(f_sub: Sublattice) -> tuple[int, ...]:
            inter = [e for e in f_sub.member_list if e in sub.members]
            if not inter:
                return constant(f_sub)
            z = parent.join_all(inter)
            return tuple(parent.meet(x, z) for x in f_sub.member_list)

        return "ideal", build_ideal

    if is_filter(sub):

        def build_filter(f_sub: Sublattice) -> tuple[int, ...]:
            inter = [e for e in f_sub.member_list if e in sub.members]
            if not inter:
                return constant(f_sub)
            z = parent.meet_all(inter)
            return tuple(parent.join(x, z) for x in f_sub.member_list)

        return "filter", build_filter

    extras = set(range(parent.n)) - sub.members
    if extras <= {parent.bottom, parent.top}:

        def build_bounded(f_sub: Sublattice) -> tuple[int, ...]:
            inter = [e for e in f_sub.member_list if e in sub.members]
            if not inter:
                return constant(f_sub)
            out = []
            for x in f_sub.member_list:
                if x in sub.members:
                    out.append(x)
                elif x == parent.bottom:
                    out.append(parent.meet_all(inter))
                else:
                    out.append(parent.join_all(inter))
            return tuple(out)

        return "bounded-extension", build_bounded

    return None


@dataclass(frozen=True)
class ExtensionPropertyReport:
    holds: bool
    witness: Optional[ChainColoring]  # a non-extendable order type on L


def extension_property(sub: Sublattice,
                       cap: int = DEFAULT_ENUM_CAP) -> ExtensionPropertyReport:
    """Does every homomorphism L -> [-1, 1] extend to the parent?

    Decided on order types: true iff every canonical coloring of L extends.
    A failing coloring realizes (with any strictly increasing values) to a
    concrete non-extendable homomorphism.
    """
    for coloring in enumerate_chain_colorings(sub.lattice, cap):
        if extend_coloring(coloring, sub) is None:
            return ExtensionPropertyReport(False, coloring)
    return ExtensionPropertyReport(True, None)


def extension_property_bruteforce(sub: Sublattice,
                                  cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Restriction-image oracle: enumerate all parent colorings and compare
    their restrictions with the full set of colorings of L."""
    restricted = {restrict_and_normalize(c, sub).levels
                  for c in enumerate_chain_colorings(sub.parent, cap)}
    wanted = {c.levels for c in enumerate_chain_colorings(sub.lattice, cap)}
    return wanted <= restricted


def extend_vector_hom(phi: VectorHom, sub: Sublattice,
                      cap: int = DEFAULT_ENUM_CAP) -> VectorHom:
    """Extend a vector-valued homomorphism along a locally complemented pair.

    Takes the complement witness T: M -> L for the whole parent and returns
    phi o T, which restricts to phi on L, maps into phi(L), and has exactly
    the same norm.
    """
    if phi.lattice is not sub.lattice:
        raise ValueError("vector homomorphism is not defined on the sublattice")
    report = local_complement_check(sub, cap)
    if not report.holds:
        raise NotLocallyComplemented(
            f"no local complement for sublattice {report.failing}")
    parent = sub.parent
    t_map = report.witness_for(tuple(range(parent.n)))
    comps = tuple(
        tuple(comp[sub.position(t_map[x])] for x in range(parent.n))
        for comp in phi.components)
    extended = VectorHom(parent, comps)
    assert extended.norm() == phi.norm()
    return extended


# -- heuristic explorer -----------------------------------------------------

def _random_real_hom(lat: FiniteLattice, rng: random.Random,
                     colorings: tuple[ChainColoring, ...],
                     denominator: int = 64) -> RealHom:
    coloring = rng.choice(colorings)
    pool = sorted(rng.sample(range(-denominator, denominator + 1), coloring.k))
    values = [Fraction(p, denominator) for p in pool]
    return RealHom(lat, tuple(values[lv - 1] for lv in coloring.levels))


def random_vector_hom(lat: FiniteLattice, dim: int, rng: random.Random,
                      colorings: Optional[tuple[ChainColoring, ...]] = None
                      ) -> VectorHom:
    """Random rational vector homomorphism scaled to norm at most one."""
    if colorings is None:
        colorings = enumerate_chain_colorings(lat)
    comps = tuple(_random_real_hom(lat, rng, colorings).values
                  for _ in range(dim))
    phi = VectorHom(lat, comps)
    c = phi.norm()
    if c > 1:
        phi = phi.scale(Fraction(1) / c)
    return phi


def explore_l1n_extension(sub: Sublattice, dim: int, sample_count: int,
                          seed: int,
                          seed_homs: tuple[VectorHom, ...] = (),
                          combo_budget: int = 256,
                          cap: int = DEFAULT_ENUM_CAP) -> dict:
    """Sampling-based falsification probe for norm-preserving extensions.

    For each sampled vector homomorphism of norm at most one the search
    extends every coordinate's order type and solves a rational feasibility
    program for the new values.  A failure here is evidence only: the report
    is labeled heuristic, and exhausting the search does not prove that no
    extension exists (except when a single coordinate's order type already
    fails to extend, which is noted as definite).
    """
    from .simplex import Infeasible, solve_box_lp

    rng = random.Random(seed)
    lat = sub.lattice
    parent = sub.parent
    colorings = enumerate_chain_colorings(lat, cap)
    samples = list(seed_homs)
    while len(samples) < len(seed_homs) + sample_count:
        samples.append(random_vector_hom(lat, dim, rng, colorings))

    failures = []
    for phi in samples:
        bound = phi.norm()
        per_coord = []
        definite = False
        for comp in phi.components:
            coloring = ChainColoring.from_raw(lat, _order_ranks(comp))
            from .homs import extension_assignments
            raws = extension_assignments(coloring, sub, limit=combo_budget)
            if not raws:
                definite = True
                break
            per_coord.append((comp, raws))
        if definite:
            failures.append({"hom": _vector_hom_json(phi),
                             "definite": True,
                             "budget_exhausted": False})
            continue

        combos = itertools.product(*(raws for _, raws in per_coord))
        feasible = False
        tried = 0
        exhausted_budget = False
        for combo in combos:
            tried += 1
            if tried > combo_budget:
                exhausted_budget = True
                break
            if _combo_feasible(sub, per_coord, combo, bound, solve_box_lp,
                               Infeasible):
                feasible = True
                break
        if not feasible:
            failures.append({"hom": _vector_hom_json(phi),
                             "definite": False,
                             "budget_exhausted": exhausted_budget})

    return {
        "heuristic": True,
        "note": ("failure to extend by this bounded search is not a proof "
                 "of non-extendability unless marked definite"),
        "dimension": dim,
        "samples": len(samples),
        "failures": failures,
    }


def _order_ranks(values) -> list[int]:
    order = {v: r + 1 for r, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


def _vector_hom_json(phi: VectorHom) -> dict:
    return {"components": [
        {lab: str(v) for lab, v in zip(phi.lattice.labels, comp)}
        for comp in phi.components]}


def _combo_feasible(sub, per_coord, combo, bound, solve_box_lp, Infeasible):
    """Rational feasibility program for coordinate values on a fixed tuple of
    order-type extensions; pinned classes are constants, new classes are
    variables tied by the chain order, and the sum norm stays below bound."""
    parent = sub.parent
    gap = parent.n - len(sub.member_list) + 1
    var_index: dict[tuple[int, int], int] = {}
    fixed: dict[tuple[int, int], Fraction] = {}
    for ci, (comp, _) in enumerate(per_coord):
        class_values = sorted(set(comp))
        raw = combo[ci]
        for lv in sorted(set(raw)):
            key = (ci, lv)
            if lv % gap == 0 and gap <= lv <= len(class_values) * gap:
                fixed[key] = class_values[lv // gap - 1]
            else:
                var_index.setdefault(key, len(var_index))
    nvars = len(var_index)

    def term(ci, lv):
        key = (ci, lv)
        if key in fixed:
            return None, fixed[key]
        return var_index[key], Fraction(0)

    rows = []
    # chain order within each coordinate (weak, enough for a homomorphism)
    for ci, (comp, _) in enumerate(per_coord):
        lvls = sorted(set(combo[ci]))
        for lo, hi in zip(lvls, lvls[1:]):
            coeffs = [Fraction(0)] * nvars
            rhs = Fraction(0)
            vi, cv = term(ci, lo)
            if vi is not None:
                coeffs[vi] += 1
            else:
                rhs -= cv
            vi, cv = term(ci, hi)
            if vi is not None:
                coeffs[vi] -= 1
            else:
                rhs += cv
            rows.append((coeffs, rhs))
    # sum-norm bound through all sign vectors
    for x in range(parent.n):
        for signs in itertools.product((1, -1), repeat=len(per_coord)):
            coeffs = [Fraction(0)] * nvars
            rhs = bound
            for ci, sgn in enumerate(signs):
                vi, cv = term(ci, combo[ci][x])
                if vi is not None:
                    coeffs[vi] += sgn
                else:
                    rhs -= sgn * cv
            rows.append((coeffs, rhs))
    try:
        solve_box_lp([Fraction(0)] * nvars, rows, lo=Fraction(-1),
                     hi=Fraction(1))
        return True
    except Infeasible:
        return False


# -- the combined report ------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingReport:
    """Decision record for one pair L inside M, with witnesses.

    The logical chain complemented => locally complemented => extension
    property is asserted at construction, as is the finite-case coincidence
    of the first two properties.
    """

    left_name: str
    right_name: str
    complemented: bool
    retraction: Optional[dict]
    locally_complemented: bool
    local_witnesses: tuple
    failing_sublattice: Optional[tuple[str, ...]]
    extension_holds: bool
    nonextendable: Optional[dict]
    fast_path: Optional[str]

    def __post_init__(self):
        if self.complemented and not self.locally_complemented:
            raise AssertionError("complemented pair without local complements")
        if self.locally_complemented and not self.extension_holds:
            raise AssertionError("locally complemented pair without extension")
        if self.complemented != self.locally_complemented:
            raise AssertionError(
                "finite pairs must have both or neither of retraction and "
                "local complements")

    @property
    def exit_code(self) -> int:
        if self.locally_complemented:
            return 0
        if self.extension_holds:
            return 1
        return 2

    def to_json(self) -> dict:
        return {
            "pair": {"sublattice": self.left_name, "parent": self.right_name},
            "complemented": self.complemented,
            "retraction": self.retraction,
            "locally_complemented": self.locally_complemented,
            "local_witnesses": [
                {"sublattice": list(f), "map": dict(zip(f, t))}
                for f, t in self.local_witnesses],
            "failing_sublattice": (list(self.failing_sublattice)
                                   if self.failing_sublattice else None),
            "extension_property": self.extension_holds,
            "nonextendable_coloring": self.nonextendable,
            "fast_path": self.fast_path,
            "verdict": ("isometric-certified" if self.locally_complemented
                        else "isomorphic-only" if self.extension_holds
                        else "not-injective"),
        }


def analyze_pair(sub: Sublattice, left_name: str = "L", right_name: str = "M",
                 cap: int = DEFAULT_ENUM_CAP) -> EmbeddingReport:
    """Full trichotomy analysis with independently computed witnesses."""
    parent = sub.parent
    retraction = find_retraction(sub, cap)
    local = local_complement_check(sub, cap)
    ext = extension_property(sub, cap)
    fast = fast_path_loc_comp(sub)

    retraction_json = None
    if retraction is not None:
        retraction_json = {parent.labels[x]: parent.labels[retraction[x]]
                           for x in range(parent.n)}
    witnesses_json = tuple(
        (tuple(parent.labels[e] for e in f_members),
         tuple(parent.labels[v] for v in t_map))
        for f_members, t_map in local.witnesses)
    failing = (tuple(parent.labels[e] for e in local.failing)
               if local.failing is not None else None)
    nonext = coloring_to_json(ext.witness) if ext.witness is not None else None

    return EmbeddingReport(
        left_name=left_name,
        right_name=right_name,
        complemented=retraction is not None,
        retraction=retraction_json,
        locally_complemented=local.holds,
        local_witnesses=witnesses_json,
        failing_sublattice=failing,
        extension_holds=ext.holds,
        nonextendable=nonext,
        fast_path=fast[0] if fast is not None else None,
    )

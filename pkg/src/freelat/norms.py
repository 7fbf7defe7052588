"""Certified bounds for the free-Banach-lattice norm over a finite lattice.

The norm of a positively homogeneous function f is the supremum, over
finite tuples of homomorphisms into [-1, 1] whose pointwise absolute sums
stay below one, of the summed absolute values of f.  The supremum over
unbounded tuple length is not computed exactly; the engine reports a
certified interval instead:

* every lower bound is witnessed by an admissible tuple and re-derived by
  direct exact evaluation before being reported;
* the upper bound is twice the supremum of |f| over the compact base of the
  homomorphism cone, which dominates the norm with a factor-2 guarantee.

Cell searches may run float-guided, but certificates are always rational.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .errors import GeneratorNotInSublattice, SizeCapExceeded
from .expressions import Expr, Gen, Join, Meet, Scale, Sum, eval_expr, generators
from .homs import RealHom, enumerate_chain_colorings, radial_decompose
from .lattice import FiniteLattice, Sublattice
from .simplex import Infeasible, solve_box_lp

F0 = Fraction(0)
F1 = Fraction(1)


# -- normable functions -------------------------------------------------------

@dataclass(frozen=True)
class ExpressionFunction:
    """A lattice-linear expression evaluated over homomorphisms."""

    lattice: FiniteLattice
    expr: Expr

    def __post_init__(self):
        for lab in generators(self.expr):
            self.lattice.index(lab)


@dataclass(frozen=True)
class RadialFunction:
    """f(lambda * base) = lambda * g(base) for base on the cone's unit sphere.

    ``base`` receives the value tuple of a sphere homomorphism (aligned with
    the lattice's elements) and must return an exact rational.  ``base_max``,
    when given, must be a true upper bound for |g| on the sphere; it makes
    the factor-2 upper bound available.  ``seeds`` are known high-value
    sphere homomorphisms used to start searches.
    """

    lattice: FiniteLattice
    base: Callable[[tuple[Fraction, ...]], Fraction]
    seeds: tuple[RealHom, ...] = ()
    base_max: Optional[Fraction] = None


@dataclass(frozen=True)
class RestrictedFunction:
    """A function over L evaluated at parent homomorphisms by restriction."""

    inner: "NormableFunction"
    sub: Sublattice

    def __post_init__(self):
        if self.inner.lattice is not self.sub.lattice:
            raise GeneratorNotInSublattice(
                "inner function is not defined on the sublattice")

    @property
    def lattice(self) -> FiniteLattice:
        return self.sub.parent


NormableFunction = Union[ExpressionFunction, RadialFunction, RestrictedFunction]


def expression_function(lat: FiniteLattice, text_or_expr) -> ExpressionFunction:
    from .expressions import parse_sexpr
    expr = text_or_expr if not isinstance(text_or_expr, str) \
        else parse_sexpr(text_or_expr)
    return ExpressionFunction(lat, expr)


def _eval_values(f: NormableFunction, values: Sequence[Fraction]) -> Fraction:
    if isinstance(f, ExpressionFunction):
        lat = f.lattice
        return eval_expr(f.expr, lambda lab: values[lat._index[lab]])
    if isinstance(f, RadialFunction):
        lat = f.lattice
        lam = max(abs(values[lat.bottom]), abs(values[lat.top]))
        if lam == 0:
            return F0
        return lam * Fraction(f.base(tuple(v / lam for v in values)))
    restricted = tuple(values[i] for i in f.sub.member_list)
    return _eval_values(f.inner, restricted)


def evaluate(f: NormableFunction, hom: RealHom) -> Fraction:
    """Exact evaluation of a normable function at a homomorphism."""
    if hom.lattice is not f.lattice:
        raise ValueError("homomorphism is defined on a different lattice")
    return _eval_values(f, hom.values)


# -- admissible tuples and certified lower bounds -----------------------------

def admissibility(homs: Sequence[RealHom]) -> Fraction:
    """Exact max over elements of the summed absolute homomorphism values."""
    homs = tuple(homs)
    if not homs:
        return F0
    lat = homs[0].lattice
    for h in homs:
        if h.lattice is not lat:
            raise ValueError("all homomorphisms must share one lattice")
    return max(sum(abs(h.values[x]) for h in homs) for x in range(lat.n))


@dataclass(frozen=True)
class AdmissibleTuple:
    """A tuple of homomorphisms with its exact constraint value."""

    homs: tuple[RealHom, ...]
    constraint_value: Fraction

    @classmethod
    def from_homs(cls, homs: Sequence[RealHom]) -> "AdmissibleTuple":
        homs = tuple(homs)
        return cls(homs, admissibility(homs))

    @property
    def is_admissible(self) -> bool:
        return self.constraint_value <= 1

    def normalized(self) -> "AdmissibleTuple":
        """Scaled by 1/max(c, 1); never upscales."""
        c = self.constraint_value
        if c <= 1:
            return self
        factor = F1 / c
        return AdmissibleTuple.from_homs(tuple(h.scale(factor)
                                               for h in self.homs))

    def certificate(self, f: NormableFunction) -> Fraction:
        return sum((abs(evaluate(f, h)) for h in self.homs), F0)


@dataclass(frozen=True)
class LowerBound:
    value: Fraction
    witness: AdmissibleTuple
    exhaustive_n: int = 0  # largest tuple size with complete cell enumeration


def lower_bound(f: NormableFunction,
                tuples: Sequence[Sequence[RealHom]]) -> LowerBound:
    """Best certificate among the supplied tuples, re-verified exactly.

    Each tuple is scaled by 1/max(c, 1) and re-checked for admissibility
    before its certificate is trusted.
    """
    best_val = F0
    best_witness = AdmissibleTuple.from_homs(())
    for homs in tuples:
        tup = AdmissibleTuple.from_homs(tuple(homs)).normalized()
        if not tup.is_admissible:
            raise AssertionError("scaling failed to produce an admissible tuple")
        val = tup.certificate(f)
        if val > best_val:
            best_val = val
            best_witness = tup
    return LowerBound(best_val, best_witness)


# -- expression cells ----------------------------------------------------------

def _choice_arities(expr: Expr) -> list[int]:
    out: list[int] = []

    def walk(e: Expr):
        if isinstance(e, (Join, Meet)):
            out.append(len(e.children))
            for c in e.children:
                walk(c)
        elif isinstance(e, Scale):
            walk(e.child)
        elif isinstance(e, Sum):
            for c in e.children:
                walk(c)

    walk(expr)
    return out


def _branch_patterns(expr: Expr):
    return itertools.product(*(range(a) for a in _choice_arities(expr)))


def _linearize(f: ExpressionFunction, levels: Sequence[int], k: int,
               pattern: tuple[int, ...]):
    """Linear form of f over the k class values, given a branch pattern.

    Returns (vec, rows) where rows are the attainment constraints
    coeffs . v <= 0 forcing each chosen join/meet branch to win.
    """
    lat = f.lattice
    rows: list[list[Fraction]] = []
    cursor = [0]

    def walk(e: Expr) -> list[Fraction]:
        if isinstance(e, Gen):
            vec = [F0] * k
            vec[levels[lat._index[e.label]] - 1] += F1
            return vec
        if isinstance(e, Scale):
            return [e.coeff * c for c in walk(e.child)]
        if isinstance(e, Sum):
            vecs = [walk(c) for c in e.children]
            return [sum(col, F0) for col in zip(*vecs)]
        choice = pattern[cursor[0]]
        cursor[0] += 1
        vecs = [walk(c) for c in e.children]
        chosen = vecs[choice]
        for t, other in enumerate(vecs):
            if t == choice:
                continue
            if isinstance(e, Join):
                rows.append([o - c for o, c in zip(other, chosen)])
            else:
                rows.append([c - o for o, c in zip(other, chosen)])
        return chosen

    vec = walk(f.expr)
    return vec, rows


def _order_rows(k: int, offset: int, nvars: int) -> list[tuple[list[Fraction], Fraction]]:
    rows = []
    for j in range(k - 1):
        coeffs = [F0] * nvars
        coeffs[offset + j] = F1
        coeffs[offset + j + 1] = -F1
        rows.append((coeffs, F0))
    return rows


def _hom_from_class_values(lat: FiniteLattice, levels: Sequence[int],
                           class_values: Sequence[Fraction]) -> RealHom:
    return RealHom(lat, tuple(class_values[lv - 1] for lv in levels))


# -- supremum over the cone base ------------------------------------------------

@dataclass(frozen=True)
class SupnormResult:
    value: Fraction
    witness: RealHom
    exact: bool


def _sphere_pin_cases(k: int):
    # On the compact base, the bottom class (always class 1) or the top class
    # (always class k) sits at -1 or +1; the four pinned programs cover it.
    return ((0, Fraction(-1)), (0, F1), (k - 1, Fraction(-1)), (k - 1, F1))


def supnorm_K(f: NormableFunction, cap: int = 16,
              sample_seed: int = 0, sample_rounds: int = 400) -> SupnormResult:
    """Maximize |f| over sphere homomorphisms (unit value at bottom or top).

    Expressions get full cell enumeration with an exact rational program per
    cell, so the result is the exact supremum.  Radial and restricted
    functions are searched by seeded sampling with local refinement; the
    value is then a certified lower bound of the supremum, flagged exact
    only when it attains a declared bound.
    """
    lat = f.lattice
    const_one = RealHom(lat, (F1,) * lat.n)
    best_val = abs(evaluate(f, const_one))
    best_hom = const_one

    if isinstance(f, ExpressionFunction):
        for coloring in enumerate_chain_colorings(lat, cap):
            k = coloring.k
            order = _order_rows(k, 0, k)
            for pattern in _branch_patterns(f.expr):
                vec, raw_rows = _linearize(f, coloring.levels, k, pattern)
                rows = order + [(r, F0) for r in raw_rows]
                for pin_var, pin_val in _sphere_pin_cases(k):
                    for sigma in (F1, Fraction(-1)):
                        obj = [sigma * c for c in vec]
                        try:
                            _, x = solve_box_lp(obj, rows,
                                                fixed={pin_var: pin_val})
                        except Infeasible:
                            continue
                        hom = _hom_from_class_values(lat, coloring.levels, x)
                        val = abs(evaluate(f, hom))
                        if val > best_val:
                            best_val = val
                            best_hom = hom
        return SupnormResult(best_val, best_hom, True)

    seeds = f.seeds if isinstance(f, RadialFunction) else ()
    for seed_hom in seeds:
        lam, base = radial_decompose(seed_hom)
        cand = base if base is not None else seed_hom
        val = abs(evaluate(f, cand))
        if val > best_val:
            best_val = val
            best_hom = cand
    rng = random.Random(sample_seed)
    colorings = enumerate_chain_colorings(lat, cap)
    denom = 16
    for _ in range(sample_rounds):
        coloring = rng.choice(colorings)
        k = coloring.k
        pool = sorted(rng.sample(range(-denom, denom + 1), k))
        values = [Fraction(p, denom) for p in pool]
        # pin one extreme class to the sphere
        if rng.random() < 0.5:
            values[0] = Fraction(-1)
        else:
            values[-1] = F1
        if len(set(values)) != k:
            continue
        hom = _hom_from_class_values(lat, coloring.levels, values)
        val = abs(evaluate(f, hom))
        if val > best_val:
            best_val = val
            best_hom = hom
    declared = f.base_max if isinstance(f, RadialFunction) else None
    exact = declared is not None and best_val == declared
    return SupnormResult(best_val, best_hom, exact)


def upper_bound(f: NormableFunction, cap: int = 16) -> tuple[Fraction, str]:
    """A true upper bound for the norm: twice a certified supremum bound.

    Expressions use the exact cell supremum; radial functions need a
    declared base bound.  The tag is "trivial" for the zero bound.
    """
    if isinstance(f, ExpressionFunction):
        bound = supnorm_K(f, cap).value
    elif isinstance(f, RadialFunction) and f.base_max is not None:
        bound = Fraction(f.base_max)
    else:
        raise ValueError(
            "upper bound needs an exact supremum: an expression or a radial "
            "function with a declared base bound")
    upper = 2 * bound
    return upper, ("trivial" if upper == 0 else "factor-2-sandwich")


# -- lower-bound search ----------------------------------------------------------

@dataclass(frozen=True)
class SearchParams:
    n_max: int = 3
    restarts: int = 64
    seed: int = 0
    cell_budget: int = 256
    seed_tuples: tuple[tuple[RealHom, ...], ...] = ()


def _admissibility_rows(slot_levels: Sequence[Sequence[int]],
                        offsets: Sequence[int], nvars: int,
                        lat_n: int) -> list[tuple[list[Fraction], Fraction]]:
    rows = []
    n = len(slot_levels)
    for x in range(lat_n):
        for signs in itertools.product((F1, Fraction(-1)), repeat=n):
            coeffs = [F0] * nvars
            for i, sgn in enumerate(signs):
                coeffs[offsets[i] + slot_levels[i][x] - 1] += sgn
            rows.append((coeffs, F1))
    return rows


def _search_expression(f: ExpressionFunction, params: SearchParams,
                       cap: int) -> LowerBound:
    lat = f.lattice
    colorings = enumerate_chain_colorings(lat, cap)
    patterns = list(_branch_patterns(f.expr))
    cells = [(coloring, sigma, pattern)
             for coloring in colorings
             for sigma in (F1, Fraction(-1))
             for pattern in patterns]
    rng = random.Random(params.seed)
    best = lower_bound(f, params.seed_tuples)
    best_val = best.value
    best_witness = best.witness
    exhaustive_n = 0

    for n in range(1, params.n_max + 1):
        total = math.comb(len(cells) + n - 1, n)
        if total <= params.cell_budget:
            combos = itertools.combinations_with_replacement(cells, n)
            exhaustive_here = True
        else:
            combos = (tuple(rng.choice(cells) for _ in range(n))
                      for _ in range(params.restarts))
            exhaustive_here = False

        for combo in combos:
            offsets = []
            nvars = 0
            for coloring, _, _ in combo:
                offsets.append(nvars)
                nvars += coloring.k
            rows: list[tuple[list[Fraction], Fraction]] = []
            obj = [F0] * nvars
            for i, (coloring, sigma, pattern) in enumerate(combo):
                k = coloring.k
                rows.extend((
                    ([F0] * offsets[i] + coeffs + [F0] * (nvars - offsets[i] - k),
                     rhs)
                    for coeffs, rhs in _order_rows(k, 0, k)))
                vec, raw_rows = _linearize(f, coloring.levels, k, pattern)
                for r in raw_rows:
                    row = [F0] * nvars
                    row[offsets[i]:offsets[i] + k] = r
                    rows.append((row, F0))
                for j, c in enumerate(vec):
                    obj[offsets[i] + j] += sigma * c
            rows.extend(_admissibility_rows(
                [coloring.levels for coloring, _, _ in combo],
                offsets, nvars, lat.n))
            try:
                _, x = solve_box_lp(obj, rows)
            except Infeasible:
                continue
            homs = tuple(
                _hom_from_class_values(lat, coloring.levels,
                                       x[offsets[i]:offsets[i] + coloring.k])
                for i, (coloring, _, _) in enumerate(combo))
            cand = lower_bound(f, (homs,))
            if cand.value > best_val:
                best_val = cand.value
                best_witness = cand.witness
        if exhaustive_here:
            exhaustive_n = n
    return LowerBound(best_val, best_witness, exhaustive_n)


def _random_monotone_values(rng: random.Random, k: int,
                            denom: int = 64) -> list[Fraction]:
    pool = sorted(rng.sample(range(-denom, denom + 1), k))
    return [Fraction(p, denom) for p in pool]


def _search_sampling(f: NormableFunction, params: SearchParams,
                     cap: int) -> LowerBound:
    """Stochastic cell search for functions without a linear cell structure."""
    lat = f.lattice
    colorings = enumerate_chain_colorings(lat, cap)
    rng = random.Random(params.seed)
    best = lower_bound(f, params.seed_tuples)
    best_val = best.value
    best_witness = best.witness

    def try_tuple(class_values: list[list[Fraction]],
                  slot_levels: list[tuple[int, ...]]):
        nonlocal best_val, best_witness
        raw = [tuple(cv[lv - 1] for lv in levels)
               for cv, levels in zip(class_values, slot_levels)]
        c = max(sum(abs(v[x]) for v in raw) for x in range(lat.n)) \
            if raw else F0
        scale = F1 / c if c > 1 else F1
        total = F0
        for v in raw:
            total += abs(_eval_values(f, tuple(x * scale for x in v)))
        if total > best_val:
            homs = tuple(RealHom(lat, tuple(x * scale for x in v))
                         for v in raw)
            cand = lower_bound(f, (homs,))
            if cand.value > best_val:
                best_val = cand.value
                best_witness = cand.witness
            return True
        return False

    incumbent: Optional[tuple[list[list[Fraction]], list[tuple[int, ...]]]] = None
    for n in range(1, params.n_max + 1):
        for _ in range(params.restarts):
            slots = [rng.choice(colorings) for _ in range(n)]
            levels = [c.levels for c in slots]
            values = [_random_monotone_values(rng, c.k) for c in slots]
            if try_tuple(values, levels):
                incumbent = ([list(v) for v in values], list(levels))

    # local refinement around the best random tuple
    if incumbent is not None:
        values, levels = incumbent
        for step in (Fraction(1, 8), Fraction(1, 32), Fraction(1, 128)):
            improved = True
            while improved:
                improved = False
                for si, cv in enumerate(values):
                    for ci in range(len(cv)):
                        for delta in (step, -step):
                            trial = list(cv)
                            trial[ci] = trial[ci] + delta
                            if not -1 <= trial[ci] <= 1:
                                continue
                            if ci > 0 and trial[ci] <= trial[ci - 1]:
                                continue
                            if ci + 1 < len(trial) and trial[ci] >= trial[ci + 1]:
                                continue
                            probe = [list(v) for v in values]
                            probe[si] = trial
                            if try_tuple(probe, levels):
                                values = probe
                                improved = True
    return LowerBound(best_val, best_witness, 0)


def search_lower_bound(f: NormableFunction, params: SearchParams = SearchParams(),
                       cap: int = 16) -> LowerBound:
    """Anytime certified lower bound for the norm of f.

    Expressions: cells pair an order type, a sign, and a join/meet branch
    pattern per tuple slot; inside a cell the objective is linear in the
    class values and the constraint linearizes over all sign vectors, so an
    exact rational program finds the cell optimum.  Cells are enumerated
    fully up to the budget, then sampled.  Other functions are searched by
    seeded sampling with local refinement.  Every reported bound comes from
    a re-verified admissible witness.  Deterministic given the seed.
    """
    if f.lattice.n > cap:
        raise SizeCapExceeded(
            f"norm search over {f.lattice.n} elements exceeds cap {cap}")
    if isinstance(f, ExpressionFunction):
        return _search_expression(f, params, cap)
    return _search_sampling(f, params, cap)


# -- push-forward ----------------------------------------------------------------

def push_forward(f: NormableFunction, sub: Sublattice) -> NormableFunction:
    """Interpret a function over L as a function over the parent of L.

    Expressions keep their tree with generators re-pointed at the parent;
    radial (and other non-expression) functions become restrictions, i.e.
    they evaluate parent homomorphisms through their trace on L.
    """
    if f.lattice is not sub.lattice:
        raise GeneratorNotInSublattice(
            "function is not defined on the given sublattice")
    if isinstance(f, ExpressionFunction):
        return ExpressionFunction(sub.parent, f.expr)
    return RestrictedFunction(f, sub)


# -- interval estimates ------------------------------------------------------------

@dataclass(frozen=True)
class NormEstimate:
    """Certified interval [lower, upper] for the norm, with witnesses."""

    lower: Fraction
    lower_witness: AdmissibleTuple
    upper: Fraction
    upper_method: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise AssertionError("lower bound exceeds upper bound")

    def to_json(self) -> dict:
        from .homs import real_hom_to_json
        return {
            "lower": {
                "value": str(self.lower),
                "value_float": float(self.lower),
                "witness": {
                    "constraint_value": str(self.lower_witness.constraint_value),
                    "homs": [real_hom_to_json(h)
                             for h in self.lower_witness.homs],
                },
            },
            "upper": {
                "value": str(self.upper),
                "value_float": float(self.upper),
                "method": self.upper_method,
            },
        }


def estimate_norm(f: NormableFunction, params: SearchParams = SearchParams(),
                  cap: int = 16) -> NormEstimate:
    """Interval estimate seeded with the sphere-supremum witness.

    The witness makes the lower bound at least the sphere supremum, so the
    reported interval always satisfies sup <= lower <= upper = 2 * sup-bound.
    """
    sup = supnorm_K(f, cap)
    params = replace(params,
                     seed_tuples=params.seed_tuples + ((sup.witness,),))
    low = search_lower_bound(f, params, cap)
    up, method = upper_bound(f, cap)
    return NormEstimate(low.value, low.witness, up, method)


# -- independent grid oracle --------------------------------------------------------

def grid_oracle_norm(f: NormableFunction, grid_step: Fraction = Fraction(1, 20),
                     n_max: int = 3, hom_cap: int = 200_000) -> LowerBound:
    """Brute-force oracle over homomorphisms with grid values only.

    Enumerates every homomorphism whose values sit on the grid, then runs an
    exact branch-and-bound over admissible tuples (admissibility checked in
    integer arithmetic).  Exists solely to validate the search machinery on
    tiny instances, and is guarded accordingly.
    """
    lat = f.lattice
    grid_step = Fraction(grid_step)
    if lat.n > 5:
        raise SizeCapExceeded("grid oracle is limited to 5 elements")
    if n_max > 3:
        raise SizeCapExceeded("grid oracle is limited to tuples of 3")
    if grid_step < Fraction(1, 20):
        raise SizeCapExceeded("grid oracle is limited to steps >= 1/20")
    if (2 / grid_step).denominator != 1:
        raise ValueError("grid step must divide the interval [-1, 1] evenly")
    steps = int(2 / grid_step)
    grid = [Fraction(-1) + i * grid_step for i in range(steps + 1)]
    scale_int = grid_step.denominator

    homs: list[tuple[Fraction, ...]] = []
    for coloring in enumerate_chain_colorings(lat):
        for combo in itertools.combinations(grid, coloring.k):
            homs.append(tuple(combo[lv - 1] for lv in coloring.levels))
            if len(homs) > hom_cap:
                raise SizeCapExceeded("grid oracle hom pool exceeds cap")

    fvals = [abs(_eval_values(f, values)) for values in homs]
    ints = [tuple(int(v * scale_int) for v in values) for values in homs]
    order = sorted(range(len(homs)), key=lambda i: -fvals[i])
    fsorted = [float(fvals[i]) for i in order]
    asorted = [tuple(abs(v) for v in ints[i]) for i in order]

    best_float = 0.0
    best_exact = F0
    best_pick: tuple[int, ...] = ()
    n_elem = lat.n
    full = scale_int  # admissibility budget per element, integer scaled

    def rec(start: int, slots: int, budget: tuple[int, ...],
            acc_exact: Fraction, acc_float: float, picks: tuple[int, ...]):
        nonlocal best_float, best_exact, best_pick
        if acc_exact > best_exact:
            best_exact = acc_exact
            best_float = float(acc_exact)
            best_pick = picks
        if slots == 0:
            return
        for idx in range(start, len(order)):
            fv = fsorted[idx]
            if acc_float + slots * fv <= best_float + 1e-12:
                break
            av = asorted[idx]
            ok = True
            for x in range(n_elem):
                if av[x] > budget[x]:
                    ok = False
                    break
            if not ok:
                continue
            rec(idx, slots - 1,
                tuple(b - a for b, a in zip(budget, av)),
                acc_exact + fvals[order[idx]], acc_float + fv, picks + (idx,))

    rec(0, n_max, (full,) * n_elem, F0, 0.0, ())
    witness_homs = tuple(RealHom(lat, homs[order[i]]) for i in best_pick)
    witness = AdmissibleTuple.from_homs(witness_homs)
    assert witness.is_admissible
    value = witness.certificate(f)
    assert value == best_exact
    return LowerBound(value, witness)

"""The 3x3 grid with its 5-element sublattice: a pair whose induced map on
free Banach lattices embeds isomorphically but not isometrically.

The fixture carries two sphere homomorphisms x1, x2 at distance parameter
epsilon, their strict neighborhoods V1, V2 on the cone base, and a radial
bump function equal to 1 at x1 and x2 and vanishing outside V1 union V2.
The bump uses an explicit max/hinge formula, so everything stays rational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import EpsilonOutOfRange
from .homs import ChainColoring, RealHom, realize_hom
from .lattice import FiniteLattice, Sublattice, chain, product
from .norms import RadialFunction

SUBLATTICE_LABELS = ("(1,1)", "(2,2)", "(2,3)", "(3,2)", "(3,3)")


def build_grid_pair() -> tuple[FiniteLattice, Sublattice]:
    """The 3x3 coordinatewise-ordered grid and its 5-element sublattice."""
    grid = product(chain(3), chain(3))
    return grid, Sublattice.from_labels(grid, SUBLATTICE_LABELS)


@dataclass(frozen=True)
class GridPairFixture:
    epsilon: Fraction
    grid: FiniteLattice
    sub: Sublattice
    x1: RealHom
    x2: RealHom
    bump: RadialFunction

    def distance_to(self, i: int, hom: RealHom) -> Fraction:
        """Sup distance from hom to x_i over the sublattice."""
        ref = (self.x1, self.x2)[i - 1]
        return max(abs(a - b) for a, b in zip(hom.values, ref.values))

    def in_neighborhood(self, i: int, hom: RealHom) -> bool:
        """Strict epsilon/2 neighborhood V_i of x_i on the cone base."""
        return self.distance_to(i, hom) < self.epsilon / 2

    def neighborhood_of(self, hom: RealHom) -> Optional[int]:
        for i in (1, 2):
            if self.in_neighborhood(i, hom):
                return i
        return None


def build_gap_fixture(epsilon) -> GridPairFixture:
    """Fixture for a rational parameter strictly between 0 and 1/2.

    x1 takes values (-1, 0, 0, eps, eps) and x2 takes (0, eps, 1, eps, 1)
    on ((1,1), (2,2), (2,3), (3,2), (3,3)); the bump's base is
    g(x*) = max_i max(0, 1 - (2/eps) * dist_i(x*)), which is 1 exactly at
    x_i, vanishes outside V1 union V2, and never exceeds 1.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise EpsilonOutOfRange(f"need 0 < epsilon < 1/2, got {eps}")
    grid, sub = build_grid_pair()
    lat = sub.lattice
    x1 = RealHom(lat, (Fraction(-1), Fraction(0), Fraction(0), eps, eps))
    x2 = RealHom(lat, (Fraction(0), eps, Fraction(1), eps, Fraction(1)))

    def base(values: Sequence[Fraction]) -> Fraction:
        best = Fraction(0)
        for ref in (x1, x2):
            d = max(abs(a - b) for a, b in zip(values, ref.values))
            hinge = 1 - 2 * d / eps
            if hinge > best:
                best = hinge
        return best

    bump = RadialFunction(lat, base, seeds=(x1, x2), base_max=Fraction(1))
    return GridPairFixture(eps, grid, sub, x1, x2, bump)


def sample_neighborhood_homs(fixture: GridPairFixture, count: int,
                             seed: int) -> tuple[RealHom, ...]:
    """Random homomorphisms inside V1 union V2, cell-consistently.

    Each sample perturbs the three class values of x1 or x2 by rationals of
    magnitude at most epsilon/4, clipped to keep all values inside [-1, 1].
    The class gaps of x_i are at least epsilon, so the perturbed values stay
    strictly increasing and the sample keeps the same three-level order type.
    """
    rng = random.Random(seed)
    eps = fixture.epsilon
    radius = eps / 4
    denom = 997
    out = []
    for _ in range(count):
        ref = (fixture.x1, fixture.x2)[rng.randrange(2)]
        coloring = ref.coloring()
        class_values = sorted(set(ref.values))
        perturbed = []
        for u in class_values:
            lo = max(-radius, Fraction(-1) - u)
            hi = min(radius, Fraction(1) - u)
            span = hi - lo
            delta = lo + span * Fraction(rng.randrange(denom + 1), denom)
            perturbed.append(u + delta)
        out.append(realize_hom(coloring, perturbed))
    return tuple(out)

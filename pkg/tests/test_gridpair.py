from fractions import Fraction as F

import pytest

from freelat.errors import EpsilonOutOfRange
from freelat.gridpair import (build_gap_fixture, build_grid_pair,
                              sample_neighborhood_homs)
from freelat.homs import radial_decompose
from freelat.norms import evaluate


def test_pair_shape():
    grid, sub = build_grid_pair()
    assert grid.n == 9 and len(sub) == 5
    assert [grid.labels[i] for i in sub.member_list] == \
        ["(1,1)", "(2,2)", "(2,3)", "(3,2)", "(3,3)"]


def test_epsilon_range_guarded():
    for bad in (F(0), F(1, 2), F(3, 5), F(-1, 10)):
        with pytest.raises(EpsilonOutOfRange):
            build_gap_fixture(bad)


@pytest.mark.parametrize("eps", [F(1, 10), F(1, 5), F(2, 5)])
def test_fixture_homs_are_valid_and_on_sphere(eps):
    fixture = build_gap_fixture(eps)
    for hom in (fixture.x1, fixture.x2):
        lam, base = radial_decompose(hom)
        assert lam == 1 and base.values == hom.values  # members of the base
    assert fixture.x1.values == (F(-1), F(0), F(0), eps, eps)
    assert fixture.x2.values == (F(0), eps, F(1), eps, F(1))


@pytest.mark.parametrize("eps", [F(1, 10), F(1, 5), F(2, 5)])
def test_bump_values(eps):
    fixture = build_gap_fixture(eps)
    assert evaluate(fixture.bump, fixture.x1) == 1
    assert evaluate(fixture.bump, fixture.x2) == 1
    one = fixture.x1.lattice
    from freelat.homs import RealHom
    const = RealHom(one, (F(1),) * 5)
    assert evaluate(fixture.bump, const) == 0  # outside both neighborhoods


def test_neighborhood_predicate_matches_distance():
    eps = F(1, 5)
    fixture = build_gap_fixture(eps)
    assert fixture.in_neighborhood(1, fixture.x1)
    assert not fixture.in_neighborhood(2, fixture.x1)
    assert fixture.neighborhood_of(fixture.x2) == 2
    # x* at sup distance exactly eps/2 sits outside the strict neighborhood
    shifted = fixture.x1.values[0] + eps / 2
    from freelat.homs import RealHom
    boundary = RealHom(fixture.sub.lattice,
                       (shifted, F(0), F(0), eps, eps))
    assert not fixture.in_neighborhood(1, boundary)


def test_bump_vanishes_outside_neighborhoods():
    fixture = build_gap_fixture(F(1, 10))
    import random
    from freelat.homs import enumerate_chain_colorings, realize_hom
    rng = random.Random(0)
    lat = fixture.sub.lattice
    for _ in range(200):
        coloring = rng.choice(enumerate_chain_colorings(lat))
        pool = sorted(rng.sample(range(-12, 13), coloring.k))
        hom = realize_hom(coloring, [F(p, 12) for p in pool])
        lam, base = radial_decompose(hom)
        if base is None:
            assert evaluate(fixture.bump, hom) == 0
            continue
        g = evaluate(fixture.bump, base)
        if fixture.neighborhood_of(base) is None:
            assert g == 0
        else:
            assert 0 <= g <= 1
        assert evaluate(fixture.bump, hom) == lam * g


@pytest.mark.parametrize("eps", [F(1, 10), F(2, 5)])
def test_sampler_stays_in_neighborhoods_with_three_values(eps):
    fixture = build_gap_fixture(eps)
    samples = sample_neighborhood_homs(fixture, 120, seed=11)
    assert len(samples) == 120
    seen = set()
    for hom in samples:
        which = fixture.neighborhood_of(hom)
        assert which in (1, 2)
        seen.add(which)
        assert len(set(hom.values)) == 3
        assert all(-1 <= v <= 1 for v in hom.values)
    assert seen == {1, 2}


def test_sampler_deterministic():
    fixture = build_gap_fixture(F(1, 5))
    a = sample_neighborhood_homs(fixture, 20, seed=3)
    b = sample_neighborhood_homs(fixture, 20, seed=3)
    assert [h.values for h in a] == [h.values for h in b]

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freelat.errors import GeneratorNotInSublattice, SizeCapExceeded
from freelat.expressions import Gen, Join, Meet, Scale, Sum, parse_sexpr
from freelat.gridpair import build_gap_fixture
from freelat.homs import RealHom, enumerate_chain_colorings, realize_hom
from freelat.lattice import Sublattice, chain, diamond, product
from freelat.norms import (AdmissibleTuple, ExpressionFunction, RadialFunction,
                           RestrictedFunction, SearchParams, admissibility,
                           estimate_norm, evaluate, expression_function,
                           grid_oracle_norm, lower_bound, push_forward,
                           search_lower_bound, supnorm_K, upper_bound)
from latgen import random_distributive_lattice


def random_expr(rng, labels):
    def leaf():
        return Gen(rng.choice(labels))
    kind = rng.randrange(4)
    if kind == 0:
        return Sum((leaf(), Scale(F(rng.randint(-2, 2)), leaf())))
    if kind == 1:
        return Join((leaf(), Meet((leaf(), leaf()))))
    if kind == 2:
        return Meet((Sum((leaf(), leaf())), leaf()))
    return Scale(F(rng.randint(1, 3), 2), Join((leaf(), leaf())))


def random_hom(rng, lat):
    coloring = rng.choice(enumerate_chain_colorings(lat))
    pool = sorted(rng.sample(range(-16, 17), coloring.k))
    return realize_hom(coloring, [F(p, 16) for p in pool])


# -- evaluation ---------------------------------------------------------------

def test_eval_generator_is_point_evaluation():
    d = diamond()
    f = expression_function(d, '(gen "a")')
    hom = RealHom(d, (F(-1, 2), F(-1, 2), F(0), F(0)))
    assert evaluate(f, hom) == F(-1, 2)


def test_eval_meet_on_fixture_hom():
    fixture = build_gap_fixture(F(1, 10))
    f = expression_function(fixture.sub.lattice,
                            '(meet (gen "(2,3)") (gen "(3,2)"))')
    assert evaluate(f, fixture.x1) == min(F(0), F(1, 10)) == 0


def test_eval_mismatched_lattice_rejected():
    f = expression_function(diamond(), '(gen "a")')
    with pytest.raises(ValueError):
        evaluate(f, RealHom(chain(2), (F(0), F(1))))


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False),
       st.sampled_from([F(0), F(1, 4), F(1, 2), F(1)]))
def test_eval_positively_homogeneous(rnd, lam):
    lat = random_distributive_lattice(rnd, max_elements=6)
    f = ExpressionFunction(lat, random_expr(rnd, lat.labels))
    hom = random_hom(rnd, lat)
    assert evaluate(f, hom.scale(lam)) == lam * evaluate(f, hom)


def test_radial_eval_homogeneous():
    fixture = build_gap_fixture(F(1, 5))
    for lam in (F(0), F(1, 4), F(1, 2), F(1)):
        assert evaluate(fixture.bump, fixture.x1.scale(lam)) == lam


# -- admissibility -------------------------------------------------------------

def test_admissibility_constant_one():
    d = diamond()
    assert admissibility((RealHom(d, (F(1),) * 4),)) == 1


def test_admissibility_fixture_pair():
    fixture = build_gap_fixture(F(1, 10))
    c = admissibility((fixture.x1, fixture.x2))
    assert c == F(11, 10)
    # attained at the top corner: eps + 1
    top = fixture.sub.lattice.top
    assert abs(fixture.x1.values[top]) + abs(fixture.x2.values[top]) == c


def test_admissibility_empty():
    assert admissibility(()) == 0


def test_admissible_tuple_normalization():
    fixture = build_gap_fixture(F(1, 10))
    tup = AdmissibleTuple.from_homs((fixture.x1, fixture.x2))
    assert not tup.is_admissible
    scaled = tup.normalized()
    assert scaled.is_admissible
    assert scaled.constraint_value == 1


# -- certified lower bounds -------------------------------------------------------

def test_lower_bound_delta_with_constant_witness():
    d = diamond()
    f = expression_function(d, '(gen "b")')
    witness = RealHom(d, (F(1),) * 4)
    assert lower_bound(f, [(witness,)]).value == 1


def test_lower_bound_fixture_value():
    fixture = build_gap_fixture(F(1, 5))
    res = lower_bound(fixture.bump, [(fixture.x1, fixture.x2)])
    assert res.value == F(2) / (1 + F(1, 5)) == F(5, 3)
    assert res.witness.constraint_value == 1


def test_lower_bound_zero_function():
    d = diamond()
    f = expression_function(d, '(scale 0 (gen "a"))')
    hom = RealHom(d, (F(-1), F(-1), F(1, 2), F(1, 2)))
    assert lower_bound(f, [(hom,)]).value == 0


# -- search ------------------------------------------------------------------------

def test_search_delta_on_chain2_exact():
    f = expression_function(chain(2), '(gen "2")')
    res = search_lower_bound(f, SearchParams(n_max=1, seed=3))
    assert res.value == 1
    assert res.exhaustive_n >= 1


def test_search_matches_oracle_on_diamond_expression():
    d = diamond()
    f = expression_function(d, '(join (gen "a") (scale 1/2 (gen "M")))')
    oracle = grid_oracle_norm(f, F(1, 20), n_max=3)
    res = search_lower_bound(f, SearchParams(n_max=3, seed=3,
                                             cell_budget=3000))
    assert abs(float(res.value) - float(oracle.value)) < 1e-6


def test_search_spec_expression_is_zero():
    # min + max telescopes against the plain sum on every homomorphism
    d = diamond()
    f = expression_function(
        d, '(sum (gen "a") (gen "b") (scale -1 (gen "m")) '
           '(scale -1 (gen "M")))')
    assert supnorm_K(f).value == 0
    assert search_lower_bound(f, SearchParams(n_max=2, seed=1)).value == 0
    assert grid_oracle_norm(f, F(1, 10), n_max=2).value == 0


def test_search_fixture_bump_reaches_pair_bound():
    fixture = build_gap_fixture(F(1, 10))
    params = SearchParams(n_max=2, restarts=60, seed=5,
                          seed_tuples=((fixture.x1, fixture.x2),))
    res = search_lower_bound(fixture.bump, params)
    assert res.value >= F(2) / F(11, 10) - F(1, 10 ** 9)


def test_search_cap():
    big = product(chain(5), chain(4))
    f = ExpressionFunction(big, Gen("(1,1)"))
    with pytest.raises(SizeCapExceeded):
        search_lower_bound(f, SearchParams())


# -- supremum over the cone base ------------------------------------------------------

def test_supnorm_delta_at_top():
    d = diamond()
    res = supnorm_K(expression_function(d, '(gen "M")'))
    assert res.value == 1 and res.exact
    assert abs(res.witness.values[d.top]) == 1


def test_supnorm_difference_expression():
    # delta_a - delta_b reaches 2 on the sphere: a at -1 and b at +1 is a
    # valid homomorphism with the bottom at -1
    d = diamond()
    res = supnorm_K(expression_function(
        d, '(sum (gen "a") (scale -1 (gen "b")))'))
    assert res.value == 2
    oracle = grid_oracle_norm(
        expression_function(d, '(sum (gen "a") (scale -1 (gen "b")))'),
        F(1, 4), n_max=1)
    assert oracle.value == 2  # same point is an admissible single-hom tuple


def test_supnorm_bump_is_one():
    fixture = build_gap_fixture(F(1, 10))
    res = supnorm_K(fixture.bump)
    assert res.value == 1 and res.exact
    assert res.witness.values in (fixture.x1.values, fixture.x2.values)


def test_supnorm_witness_is_on_sphere():
    rng = random.Random(4)
    for _ in range(10):
        lat = random_distributive_lattice(rng, max_elements=6)
        f = ExpressionFunction(lat, random_expr(rng, lat.labels))
        res = supnorm_K(f)
        w = res.witness
        assert max(abs(w.values[lat.bottom]), abs(w.values[lat.top])) == 1
        assert abs(evaluate(f, w)) == res.value


# -- upper bounds ------------------------------------------------------------------------

def test_upper_bound_doubles_supnorm():
    d = diamond()
    f = expression_function(d, '(gen "a")')
    up, method = upper_bound(f)
    assert up == 2 and method == "factor-2-sandwich"


def test_upper_bound_zero_is_trivial():
    d = diamond()
    up, method = upper_bound(expression_function(d, '(scale 0 (gen "a"))'))
    assert up == 0 and method == "trivial"


def test_upper_bound_bump():
    fixture = build_gap_fixture(F(2, 5))
    up, method = upper_bound(fixture.bump)
    assert up == 2 and method == "factor-2-sandwich"


def test_upper_bound_needs_declared_base_bound():
    fixture = build_gap_fixture(F(1, 5))
    bare = RadialFunction(fixture.sub.lattice, fixture.bump.base)
    with pytest.raises(ValueError):
        upper_bound(bare)


# -- interval estimates ---------------------------------------------------------------------

def test_estimate_interval_for_generators():
    for lat in (chain(2), chain(3), diamond()):
        for lab in lat.labels:
            f = ExpressionFunction(lat, Gen(lab))
            est = estimate_norm(f, SearchParams(n_max=1, seed=2))
            assert est.lower == 1  # norm of every generator is exactly 1
            assert est.upper == 2
            assert est.lower <= est.upper


def test_estimate_sandwich_invariant():
    rng = random.Random(12)
    d = diamond()
    for _ in range(8):
        f = ExpressionFunction(d, random_expr(rng, d.labels))
        sup = supnorm_K(f)
        est = estimate_norm(f, SearchParams(n_max=2, seed=7))
        assert sup.value <= est.lower <= est.upper
        assert est.upper == 2 * sup.value
        # certificate re-verification: witness reproduces the bound exactly
        assert est.lower_witness.certificate(f) == est.lower
        assert est.lower_witness.constraint_value <= 1


def test_estimate_json_shape():
    est = estimate_norm(expression_function(chain(2), '(gen "2")'),
                        SearchParams(n_max=1, seed=2))
    data = est.to_json()
    assert data["lower"]["value"] == "1"
    assert data["upper"]["value"] == "2"
    assert data["upper"]["method"] == "factor-2-sandwich"
    assert data["lower"]["witness"]["homs"]


# -- push-forward -----------------------------------------------------------------------------

def test_push_forward_eval_identity():
    grid = product(chain(3), chain(3))
    sub = Sublattice.from_labels(
        grid, ["(1,1)", "(2,2)", "(2,3)", "(3,2)", "(3,3)"])
    f = expression_function(sub.lattice,
                            '(join (gen "(2,3)") (gen "(3,2)"))')
    pushed = push_forward(f, sub)
    rng = random.Random(6)
    for _ in range(15):
        y = random_hom(rng, grid)
        restricted = RealHom(sub.lattice,
                             tuple(y.values[i] for i in sub.member_list))
        assert evaluate(pushed, y) == evaluate(f, restricted)


def test_push_forward_radial_uses_restriction():
    fixture = build_gap_fixture(F(1, 10))
    pushed = push_forward(fixture.bump, fixture.sub)
    assert isinstance(pushed, RestrictedFunction)
    rng = random.Random(9)
    for _ in range(10):
        y = random_hom(rng, fixture.grid)
        restricted = RealHom(
            fixture.sub.lattice,
            tuple(y.values[i] for i in fixture.sub.member_list))
        assert evaluate(pushed, y) == evaluate(fixture.bump, restricted)


def test_push_forward_checks_lattice():
    f = expression_function(diamond(), '(gen "a")')
    grid = product(chain(3), chain(3))
    sub = Sublattice.from_labels(grid, ["(1,1)", "(1,2)"])
    with pytest.raises(GeneratorNotInSublattice):
        push_forward(f, sub)


def test_push_forward_preserves_single_slot_norms_on_chains():
    # chains are locally complemented in chains: the exhaustive single-slot
    # cell norms must coincide exactly on both sides
    c2 = chain(2)
    c3 = chain(3)
    sub = Sublattice.from_labels(c3, ["1", "3"])
    f = ExpressionFunction(sub.lattice,
                           Sum((Gen("1"), Scale(F(-1), Gen("3")))))
    low_l = search_lower_bound(f, SearchParams(n_max=1, seed=1,
                                               cell_budget=2048))
    low_m = search_lower_bound(push_forward(f, sub),
                               SearchParams(n_max=1, seed=1,
                                            cell_budget=2048))
    assert low_l.exhaustive_n >= 1 and low_m.exhaustive_n >= 1
    assert abs(float(low_l.value) - float(low_m.value)) < 1e-6


# -- grid oracle -------------------------------------------------------------------------------

def test_oracle_delta_is_one():
    for lat in (chain(2), diamond()):
        f = ExpressionFunction(lat, Gen(lat.labels[-1]))
        assert grid_oracle_norm(f, F(1, 4), n_max=2).value == 1


def test_oracle_coarse_grid_values():
    f = expression_function(chain(2), '(gen "2")')
    res = grid_oracle_norm(f, F(1), n_max=1)
    assert res.value == 1
    for h in res.witness.homs:
        assert all(v in (F(-1), F(0), F(1)) for v in h.values)


def test_oracle_guards():
    f = ExpressionFunction(product(chain(3), chain(2)), Gen("(1,1)"))
    with pytest.raises(SizeCapExceeded):
        grid_oracle_norm(f, F(1, 4), n_max=2)  # six elements
    f2 = expression_function(chain(2), '(gen "2")')
    with pytest.raises(SizeCapExceeded):
        grid_oracle_norm(f2, F(1, 40), n_max=1)
    with pytest.raises(SizeCapExceeded):
        grid_oracle_norm(f2, F(1, 4), n_max=4)


def test_oracle_agrees_with_search_on_random_diamond_expressions():
    rng = random.Random(99)
    d = diamond()
    for i in range(20):
        f = ExpressionFunction(d, random_expr(rng, d.labels))
        oracle = grid_oracle_norm(f, F(1, 20), n_max=2)
        found = search_lower_bound(f, SearchParams(n_max=2, seed=i,
                                                   cell_budget=700))
        assert found.exhaustive_n >= 2
        assert abs(float(found.value) - float(oracle.value)) <= 1 / 20 + 1e-9


def test_oracle_witness_is_admissible_and_reproduces_value():
    d = diamond()
    f = expression_function(d, '(join (gen "a") (gen "b"))')
    res = grid_oracle_norm(f, F(1, 8), n_max=2)
    assert res.witness.constraint_value <= 1
    assert res.witness.certificate(f) == res.value

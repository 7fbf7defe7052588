import random
from fractions import Fraction as F

import pytest

from freelat.simplex import Infeasible, Unbounded, solve_box_lp, solve_lp_max


def test_textbook_instance():
    value, x = solve_lp_max([F(3), F(2)],
                            [([F(1), F(1)], F(4)), ([F(1), F(3)], F(6))])
    assert value == 12
    assert x == [F(4), F(0)]


def test_degenerate_and_negative_rhs():
    value, x = solve_lp_max([F(1)], [([F(-1)], F(-2)), ([F(1)], F(5))])
    assert value == 5
    value, x = solve_lp_max([F(-1)], [([F(-1)], F(-2)), ([F(1)], F(5))])
    assert value == -2 and x == [F(2)]


def test_infeasible():
    with pytest.raises(Infeasible):
        solve_lp_max([F(1)], [([F(1)], F(1)), ([F(-1)], F(-3))])


def test_unbounded():
    with pytest.raises(Unbounded):
        solve_lp_max([F(1)], [([F(-1)], F(0))])


def test_box_fixed_variables():
    value, x = solve_box_lp([F(1), F(1)], [([F(1), F(1)], F(1, 2))],
                            fixed={0: F(-1, 4)})
    assert x[0] == F(-1, 4)
    assert value == F(1, 2)  # x1 can use the remaining 3/4 up to the box


def test_box_exactness_is_rational():
    value, x = solve_box_lp([F(1, 3)], [([F(1)], F(2, 7))])
    assert value == F(2, 21)
    assert x == [F(2, 7)]


def test_against_scipy_on_random_boxes():
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = random.Random(0)
    for _ in range(300):
        n = rng.randint(1, 5)
        m = rng.randint(0, 7)
        obj = [F(rng.randint(-5, 5)) for _ in range(n)]
        rows = [([F(rng.randint(-4, 4)) for _ in range(n)],
                 F(rng.randint(-3, 8))) for _ in range(m)]
        try:
            value, x = solve_box_lp(obj, rows)
            ok = True
            for coeffs, rhs in rows:
                assert sum(c * v for c, v in zip(coeffs, x)) <= rhs
            assert all(-1 <= v <= 1 for v in x)
        except Infeasible:
            ok = False
        res = scipy_opt.linprog([-float(c) for c in obj],
                                A_ub=[[float(c) for c in coeffs]
                                      for coeffs, _ in rows] or None,
                                b_ub=[float(r) for _, r in rows] or None,
                                bounds=[(-1, 1)] * n, method="highs")
        assert ok == res.success
        if ok:
            assert abs(float(value) - (-res.fun)) < 1e-7

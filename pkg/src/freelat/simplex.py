"""Small dense two-phase simplex over exact rationals, Bland's rule.

Sized for the norm search: tens of variables, at most a few hundred rows.
Certificates produced downstream are re-verified by direct evaluation, so
this solver's job is exact optima on small cell programs, not speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def solve_lp_max(objective: Sequence[Fraction],
                 rows: Sequence[tuple[Sequence[Fraction], Fraction]]
                 ) -> tuple[Fraction, list[Fraction]]:
    """Maximize objective . x subject to coeffs . x <= rhs and x >= 0."""
    n = len(objective)
    m = len(rows)
    # Tableau columns: n structural, m slack, then artificials as needed.
    art_cols = []
    tab = []
    basis = []
    for r, (coeffs, rhs) in enumerate(rows):
        row = [Fraction(c) for c in coeffs] + [ZERO] * m
        row[n + r] = ONE
        rhs = Fraction(rhs)
        if rhs < 0:
            row = [-c for c in row]
            rhs = -rhs
            art_cols.append(r)
            basis.append(None)  # placeholder, artificial assigned below
        else:
            basis.append(n + r)
        row.append(rhs)
        tab.append(row)
    width = n + m
    for r in art_cols:
        for row in tab:
            row.insert(width, ZERO)
        tab[r][width] = ONE
        basis[r] = width
        width += 1

    def pivot(r: int, c: int):
        piv = tab[r][c]
        tab[r] = [v / piv for v in tab[r]]
        for rr in range(m):
            if rr != r and tab[rr][c] != 0:
                f = tab[rr][c]
                tab[rr] = [a - f * b for a, b in zip(tab[rr], tab[r])]
        basis[r] = c

    def run(costs: list[Fraction], allowed: int) -> Fraction:
        # Maximize costs . x with Bland's rule; returns the optimum value.
        while True:
            reduced = list(costs[:allowed])
            offset = ZERO
            for r in range(m):
                cb = costs[basis[r]]
                if cb != 0:
                    offset += cb * tab[r][-1]
                    for c in range(allowed):
                        reduced[c] -= cb * tab[r][c]
            enter = next((c for c in range(allowed)
                          if reduced[c] > 0 and not _basic(c)), None)
            if enter is None:
                return offset
            leave = None
            best = None
            for r in range(m):
                a = tab[r][enter]
                if a > 0:
                    ratio = tab[r][-1] / a
                    if best is None or ratio < best or \
                       (ratio == best and basis[r] < basis[leave]):
                        best = ratio
                        leave = r
            if leave is None:
                raise Unbounded("objective unbounded above")
            pivot(leave, enter)

    def _basic(c: int) -> bool:
        return c in basis

    if art_cols:
        costs = [ZERO] * width
        for r in range(m):
            if basis[r] >= n + m:
                costs[basis[r]] = -ONE
        value = run(costs, width)
        if value != 0:
            raise Infeasible("phase-1 optimum is nonzero")
        # Drive any lingering artificial out of the basis if possible.
        for r in range(m):
            if basis[r] >= n + m:
                enter = next((c for c in range(n + m) if tab[r][c] != 0), None)
                if enter is not None:
                    pivot(r, enter)

    costs = [Fraction(c) for c in objective] + [ZERO] * (width - n)
    # Zero out artificial columns so phase 2 never re-enters them.
    for row in tab:
        for c in range(n + m, width):
            row[c] = ZERO
    value = run(costs, n + m)
    x = [ZERO] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = tab[r][-1]
    return value, x


def solve_box_lp(objective: Sequence[Fraction],
                 rows: Sequence[tuple[Sequence[Fraction], Fraction]],
                 lo: Fraction = Fraction(-1),
                 hi: Fraction = Fraction(1),
                 fixed: Optional[dict[int, Fraction]] = None
                 ) -> tuple[Fraction, list[Fraction]]:
    """Maximize over box-constrained variables: coeffs . x <= rhs, lo <= x <= hi.

    ``fixed`` pins selected variables to constants (substituted out before
    solving).  Returns the optimum and a full assignment including pins.
    """
    fixed = fixed or {}
    nall = len(objective)
    free = [i for i in range(nall) if i not in fixed]
    pos = {v: t for t, v in enumerate(free)}
    n = len(free)
    lo = Fraction(lo)
    hi = Fraction(hi)
    span = hi - lo

    conv_rows: list[tuple[list[Fraction], Fraction]] = []
    for coeffs, rhs in rows:
        out = [ZERO] * n
        acc = Fraction(rhs)
        for i, c in enumerate(coeffs):
            c = Fraction(c)
            if c == 0:
                continue
            if i in fixed:
                acc -= c * fixed[i]
            else:
                out[pos[i]] = c
                acc -= c * lo  # shift y = x - lo
        conv_rows.append((out, acc))
    for t in range(n):
        unit = [ZERO] * n
        unit[t] = ONE
        conv_rows.append((unit, span))

    obj = [ZERO] * n
    const = ZERO
    for i, c in enumerate(objective):
        c = Fraction(c)
        if c == 0:
            continue
        if i in fixed:
            const += c * fixed[i]
        else:
            obj[pos[i]] = c
            const += c * lo
    value, y = solve_lp_max(obj, conv_rows)
    x = [ZERO] * nall
    for i in range(nall):
        if i in fixed:
            x[i] = fixed[i]
        else:
            x[i] = y[pos[i]] + lo
    return value + const, x

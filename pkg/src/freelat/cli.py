"""Command-line interface: JSON reports on stdout, human summaries on stderr.

Exit codes: subcommand-specific results as documented per command; usage
errors exit 64 and I/O errors exit 74.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

EX_USAGE = 64
EX_IOERR = 74
EX_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _emit(payload: dict, summary: str) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _load_lattice(path: str):
    from .lattice import lattice_from_json
    with open(path, "r", encoding="utf-8") as fh:
        return lattice_from_json(json.load(fh))


def _cmd_lattice_check(args) -> int:
    from .errors import LatticeError
    from .lattice import lattice_to_json
    try:
        lat = _load_lattice(args.file)
    except LatticeError as exc:
        _emit({"valid": False, "error": str(exc)}, f"invalid: {exc}")
        return 1
    payload = {"valid": True, "size": lat.n,
               "bottom": lat.labels[lat.bottom], "top": lat.labels[lat.top],
               "height": lat.height}
    payload.update(lattice_to_json(lat))
    _emit(payload, f"valid distributive lattice with {lat.n} elements")
    return 0


def _cmd_lattice_dot(args) -> int:
    from .lattice import to_dot
    lat = _load_lattice(args.file)
    sys.stdout.write(to_dot(lat))
    print(f"DOT export of {lat.n} elements, {len(lat.covers)} covers",
          file=sys.stderr)
    return 0


def _cmd_pair_analyze(args) -> int:
    from .embeddings import analyze_pair
    from .errors import LatticeError, NotALattice, SizeCapExceeded
    from .lattice import Sublattice
    small = _load_lattice(args.sublattice)
    big = _load_lattice(args.parent)
    try:
        missing = [lab for lab in small.labels if lab not in big.labels]
        if missing:
            raise NotALattice(
                f"parent lattice is missing elements {missing}")
        sub = Sublattice.from_labels(big, small.labels)
        induced = sub.lattice
        for a in small.labels:
            for b in small.labels:
                if small.leq(small.index(a), small.index(b)) != \
                        induced.leq(induced.index(a), induced.index(b)):
                    raise NotALattice(
                        "the first lattice's own order disagrees with the "
                        "order induced on its elements by the second lattice "
                        f"(at {a!r}, {b!r})")
        report = analyze_pair(sub, args.sublattice, args.parent, cap=args.cap)
    except (LatticeError, SizeCapExceeded) as exc:
        _emit({"error": str(exc)}, f"error: {exc}")
        return EX_ERROR
    payload = report.to_json()
    _emit(payload, f"verdict: {payload['verdict']} (exit {report.exit_code})")
    return report.exit_code


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SystemExit(EX_USAGE)


def _cmd_norm(args) -> int:
    from .errors import LatticeError
    from .expressions import parse_sexpr
    from .norms import SearchParams, estimate_norm, expression_function
    lat = _load_lattice(args.lattice)
    with open(args.expr, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        f = expression_function(lat, parse_sexpr(text))
        params = SearchParams(n_max=args.nmax, restarts=args.restarts,
                              seed=args.seed, cell_budget=args.budget)
        estimate = estimate_norm(f, params)
    except (LatticeError, ValueError) as exc:
        _emit({"error": str(exc)}, f"error: {exc}")
        return EX_ERROR
    _emit(estimate.to_json(),
          f"norm in [{float(estimate.lower):.9g}, "
          f"{float(estimate.upper):.9g}] ({estimate.upper_method})")
    return 0


def _cmd_repro_diamond(args) -> int:
    from .repro import repro_diamond_pair
    report = repro_diamond_pair()
    _emit(report.to_json(), "\n".join(report.summary_lines()))
    return 0 if report.passed else 1


def _cmd_repro_grid(args) -> int:
    from .errors import EpsilonOutOfRange
    from .repro import repro_grid_pair
    eps = _parse_rational(args.epsilon)
    try:
        report = repro_grid_pair(eps, sample_count=args.samples,
                                 budget=args.budget, seed=args.seed)
    except EpsilonOutOfRange as exc:
        _emit({"error": str(exc)}, f"error: {exc}")
        return EX_ERROR
    if args.expression_witness:
        report.checks.append(_witness_search(eps, args.expression_witness,
                                             args.seed))
    _emit(report.to_json(), "\n".join(report.summary_lines()))
    return 0 if report.passed else 1


def _witness_search(eps: Fraction, attempts: int, seed: int):
    """Exploratory search for an expression already separating the pair.

    Tries random small expressions over the sublattice and compares a
    certified lower bound over it with a certified upper bound over the
    grid.  Finding one would be a strict certificate; not finding one means
    nothing.  No promise attached.
    """
    import random

    from .expressions import Gen, Join, Meet, Scale, Sum
    from .gridpair import build_gap_fixture
    from .norms import (ExpressionFunction, SearchParams, push_forward,
                        search_lower_bound, upper_bound)
    from .repro import CheckResult

    fixture = build_gap_fixture(eps)
    rng = random.Random(seed)
    labels = fixture.sub.lattice.labels
    found = None
    for _ in range(attempts):
        gens = [Gen(rng.choice(labels)) for _ in range(3)]
        expr = rng.choice([
            Join((Meet((gens[0], gens[1])), gens[2])),
            Sum((gens[0], Scale(Fraction(rng.randint(-2, 2)), gens[1]))),
            Meet((Sum((gens[0], gens[1])), gens[2])),
        ])
        f = ExpressionFunction(fixture.sub.lattice, expr)
        low = search_lower_bound(f, SearchParams(n_max=2, restarts=16,
                                                 seed=seed))
        up_m, _ = upper_bound(push_forward(f, fixture.sub))
        if low.value > up_m:
            found = (expr, low.value, up_m)
            break
    observed = ("none found" if found is None
                else f"lower {found[1]} > grid upper {found[2]}")
    return CheckResult(
        "(optional) expression witness search", "no promise", observed,
        True, "derived",
        note="exploratory only; absence of a witness proves nothing")


def main(argv=None) -> int:
    parser = _Parser(prog="freelat",
                     description="embedding analysis and certified norm "
                                 "bounds over finite distributive lattices")
    sub = parser.add_subparsers(dest="command", required=True)

    lat = sub.add_parser("lattice", help="validate or export a lattice file")
    lat_sub = lat.add_subparsers(dest="lattice_command", required=True)
    chk = lat_sub.add_parser("check", help="validate a lattice JSON file")
    chk.add_argument("file")
    chk.set_defaults(func=_cmd_lattice_check)
    dot = lat_sub.add_parser("export-dot",
                             help="write the order diagram in DOT form")
    dot.add_argument("file")
    dot.set_defaults(func=_cmd_lattice_dot)

    pair = sub.add_parser("pair", help="analyze a sublattice pair")
    pair_sub = pair.add_subparsers(dest="pair_command", required=True)
    ana = pair_sub.add_parser(
        "analyze",
        help="decide retraction, local complements and the extension "
             "property; exit 0 isometric-certified, 1 isomorphic-only, "
             "2 not injective, 3 error")
    ana.add_argument("sublattice")
    ana.add_argument("parent")
    ana.add_argument("--cap", type=int, default=16)
    ana.set_defaults(func=_cmd_pair_analyze)

    norm = sub.add_parser("norm", help="certified norm interval for an "
                                       "expression over a lattice")
    norm.add_argument("--lattice", required=True)
    norm.add_argument("--expr", required=True)
    norm.add_argument("--nmax", type=int, default=4)
    norm.add_argument("--restarts", type=int, default=64)
    norm.add_argument("--seed", type=int, default=7)
    norm.add_argument("--budget", type=int, default=256)
    norm.set_defaults(func=_cmd_norm)

    repro = sub.add_parser("repro", help="run a bundled reproduction suite")
    repro_sub = repro.add_subparsers(dest="repro_command", required=True)
    dia = repro_sub.add_parser("diamond",
                               help="the diamond / three-chain pair "
                                    "(extension fails)")
    dia.set_defaults(func=_cmd_repro_diamond)
    grd = repro_sub.add_parser("grid",
                               help="the 3x3 grid pair (isomorphic but "
                                    "quantitatively not isometric)")
    grd.add_argument("--epsilon", default="1/10",
                     help="rational in (0, 1/2), e.g. 1/10")
    grd.add_argument("--samples", type=int, default=1000)
    grd.add_argument("--budget", type=int, default=10000)
    grd.add_argument("--seed", type=int, default=7)
    grd.add_argument("--expression-witness", type=int, default=0,
                     metavar="N", help="also try N random expressions as "
                                       "separation witnesses (exploratory)")
    grd.set_defaults(func=_cmd_repro_grid)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"freelat: i/o error: {exc}", file=sys.stderr)
        return EX_IOERR
    except json.JSONDecodeError as exc:
        print(f"freelat: i/o error: malformed JSON ({exc})", file=sys.stderr)
        return EX_IOERR


if __name__ == "__main__":
    raise SystemExit(main())

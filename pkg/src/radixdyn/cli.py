"""Command line front end: one subcommand per analysis, JSON on stdout.

Exit codes: 0 success, 1 invalid input system, 2 resource budget exceeded,
3 inconclusive verdict. Diagnostics go to stderr, one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import boxspline, catalog, dynamics, onedim, tiles
from .bounds import ResourceBudgetError
from .linalg import SingularMatrixError, UnsupportedDegreeError
from .render import RenderError, render
from .system import (
    DigitSystem,
    classify,
    digit_fixed_points,
    is_expansive,
    parse_system,
    validate,
)

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **detail):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.detail = detail


def diagnose(level: str, kind: str, message: str, **detail) -> None:
    rec = {"level": level, "kind": kind, "message": message}
    if detail:
        rec["detail"] = detail
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")


def emit(args, command: str, payload: dict) -> None:
    doc = {"schema": SCHEMA, "command": command, **payload}
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def vec(text: str) -> tuple[int, ...]:
    """Parse "1,-2", "[1,-2]" or a bare integer."""
    text = text.strip()
    if text.startswith("["):
        return tuple(int(v) for v in json.loads(text))
    return tuple(int(v) for v in text.split(","))


# Loading the input system


def load_document(spec: str) -> dict:
    if spec in catalog.NAMED:
        return catalog.NAMED[spec]().to_json()
    if spec.lstrip().startswith("{"):
        return json.loads(spec)
    path = Path(spec)
    if path.exists():
        return json.loads(path.read_text(encoding="utf-8"))
    raise CliError(EXIT_INVALID, "bad-input", f"not a file, JSON object or catalog name: {spec!r}",
                   catalog=sorted(catalog.NAMED))


def load_report(args):
    if not args.input:
        raise CliError(EXIT_INVALID, "bad-input", "--input is required for this command")
    try:
        matrix, digits = parse_system(load_document(args.input))
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_INVALID, "bad-input", str(exc))
    return validate(matrix, digits)


def load_system(args) -> DigitSystem:
    report = load_report(args)
    if not report.valid:
        raise CliError(EXIT_INVALID, "invalid-system", "input is not a valid digit system",
                       **report.to_json())
    return report.system


def expansive_system(args) -> DigitSystem:
    system = load_system(args)
    if not is_expansive(system):
        raise CliError(EXIT_INVALID, "not-expansive",
                       "orbit analysis needs an expansive matrix (try `hyperbolic`)",
                       spectral=classify(system).to_json())
    return system


def points_json(points) -> list:
    return [list(p) for p in sorted(points)]


# Commands


def cmd_validate(args) -> int:
    report = load_report(args)
    emit(args, "validate", report.to_json())
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_classify(args) -> int:
    system = load_system(args)
    spec = classify(system)
    fixed = None
    if spec.expansive or spec.hyperbolic:
        fixed = [{"digit": list(d), "point": list(x)} for d, x in digit_fixed_points(system)]
    emit(args, "classify", {"system": system.to_json(), "spectral": spec.to_json(),
                            "digit_fixed_points": fixed})
    return EXIT_OK


def cmd_orbit(args) -> int:
    system = load_system(args)
    x = vec(args.x)
    if not is_expansive(system) and args.step_cap is None:
        raise CliError(EXIT_INVALID, "not-expansive",
                       "coding of a non-expansive system needs --step-cap")
    try:
        c = dynamics.coding(system, x, args.step_cap if not is_expansive(system) else None)
    except RuntimeError as exc:
        raise CliError(EXIT_INCONCLUSIVE, "step-cap", str(exc))
    emit(args, "orbit", {"x": list(x), **c.to_json()})
    return EXIT_OK


def cmd_bpoints(args) -> int:
    system = expansive_system(args)
    budget = args.budget_cells
    sweep = dynamics.periodic_points(system, budget=budget)
    structure = dynamics.cycle_atom_structure(system, budget=budget)
    k_max = args.depth or max(structure.lengths())
    words = dynamics.finite_period_points_by_words(system, k_max, budget)
    minus = tiles.integral_points_in_minus_T(system, budget=budget)
    # the -T oracle returns Z^dim intersected with -T, which is B_inf itself
    agree = sweep == words == minus.points
    emit(args, "bpoints", {
        "periodic_points": points_json(sweep),
        "word_points": points_json(words),
        "word_k_max": k_max,
        "minus_T_points": points_json(minus.points),
        "minus_T_depth": minus.depth,
        "agree": agree,
    })
    if not agree:
        diagnose("warning", "oracle-disagreement", "the three B_inf oracles differ")
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_structure(args) -> int:
    system = expansive_system(args)
    structure = dynamics.cycle_atom_structure(system, budget=args.budget_cells)
    emit(args, "structure", {**structure.to_json(),
                             "zeta": dynamics.zeta_series(structure, args.zeta_order)})
    return EXIT_OK


def cmd_equiv(args) -> int:
    system = expansive_system(args)
    x, y = vec(args.x), vec(args.y)
    emit(args, "equiv", {
        "x": list(x), "y": list(y),
        "sim": dynamics.equivalent_sim(system, x, y),
        "approx": dynamics.equivalent_approx(system, x, y),
        "atom_x": dynamics.atom_of(system, x).to_json(),
        "atom_y": dynamics.atom_of(system, y).to_json(),
    })
    return EXIT_OK


def cmd_subcuntz(args) -> int:
    system = expansive_system(args)
    words = [{"point": list(m), "word": list(w), "digits": [list(system.digits[i]) for i in w]}
             for m, w in dynamics.sub_cuntz_words(system)]
    emit(args, "subcuntz", {"words": words})
    return EXIT_OK


def cmd_tile(args) -> int:
    system = expansive_system(args)
    if args.action != "render":
        raise CliError(EXIT_INVALID, "bad-input", f"unknown tile action {args.action!r}")
    if not args.out:
        raise CliError(EXIT_INVALID, "bad-input", "tile render needs --out")
    depth = args.depth if args.depth is not None else tiles.default_depth(system)
    fmt = args.format or Path(args.out).suffix.lstrip(".") or "ppm"
    cloud = tiles.tile_points(system, depth, args.budget_cells)
    try:
        render(cloud, args.out, fmt, args.size)
    except RenderError as exc:
        raise CliError(EXIT_INVALID, "render", str(exc))
    diagnose("info", "rendered", f"wrote {args.out}", depth=depth, points=len(cloud), format=fmt)
    return EXIT_OK


def cmd_tiling_test(args) -> int:
    system = expansive_system(args)
    bound = args.bound if args.bound is not None else 6
    verdict = tiles.lattice_tiling_test(system, bound)
    payload = verdict.to_json()
    payload["measure"] = tiles.measure_from_lattice(verdict) if verdict.kind == "tiles_by" else None
    emit(args, "tiling-test", payload)
    return EXIT_OK if verdict.kind == "tiles_by" else EXIT_INCONCLUSIVE


def cmd_lattice(args) -> int:
    system = load_system(args)
    lat = tiles.digit_lattice(system)
    emit(args, "lattice", {"basis": [list(b) for b in lat.basis], "rank": lat.rank,
                           "index": lat.index})
    return EXIT_OK


def _search_chunk(lo: int, hi: int, composite_only: bool) -> list:
    # odd p in [lo, hi]
    return [t for t in onedim.uniform_cycle_search(hi, composite_only) if t[0] >= lo]


def cmd_onedim(args) -> int:
    if args.action == "census":
        if args.p is None:
            raise CliError(EXIT_INVALID, "bad-input", "census needs --p")
        try:
            census = onedim.census_two(args.p)
        except ValueError as exc:
            raise CliError(EXIT_INVALID, "bad-input", str(exc))
        fmt = args.format or "csv"
        if fmt == "csv":
            text = onedim.census_csv(census)
            if args.out:
                Path(args.out).write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
        else:
            emit(args, "onedim census", census.to_json())
        return EXIT_OK
    if args.action == "necklace":
        n = args.n or 2
        ks = [args.k] if args.k else list(range(1, (args.bound or 12) + 1))
        emit(args, "onedim necklace", {"n": n, "counts": {str(k): onedim.necklace_count(n, k) for k in ks}})
        return EXIT_OK
    if args.action == "uniform-search":
        bound = args.bound or 10000
        if bound < 3:
            raise CliError(EXIT_INVALID, "bad-input", "bound must be at least 3")
        threads = max(1, args.threads)
        if threads == 1:
            found = onedim.uniform_cycle_search(bound, args.composite_only)
        else:
            # disjoint p ranges, merged in p order so the output never depends on scheduling
            edges = [3 + (bound - 2) * i // threads for i in range(threads + 1)]
            with ProcessPoolExecutor(threads) as pool:
                parts = pool.map(_search_chunk, edges[:-1], [e - 1 for e in edges[1:-1]] + [bound],
                                 [args.composite_only] * threads)
                found = sorted({t for part in parts for t in part})
        emit(args, "onedim uniform-search", {
            "bound": bound, "composite_only": args.composite_only,
            "results": [{"p": p, "cycle_length": k, "cycle_count": c} for p, k, c in found],
        })
        return EXIT_OK
    raise CliError(EXIT_INVALID, "bad-input", f"unknown onedim action {args.action!r}")


def cmd_boxspline(args) -> int:
    base = load_system(args)
    if not base.is_one_dim:
        raise CliError(EXIT_INVALID, "bad-input", "boxspline needs a 1-D base system")
    m = args.m
    if args.action == "lift":
        lifted = boxspline.lift(base, m)
        predicted = boxspline.predicted_structure(dynamics.cycle_atom_structure(base), m)
        actual = dynamics.cycle_atom_structure(lifted.lifted, budget=args.budget_cells).histogram()
        emit(args, "boxspline lift", {
            "m": m, "lifted": lifted.lifted.to_json(),
            "predicted": {str(k): v for k, v in predicted.items()},
            "computed": {str(k): v for k, v in actual.items()},
            "agree": predicted == actual,
        })
        return EXIT_OK if predicted == actual else EXIT_INCONCLUSIVE
    if args.action == "check":
        radius = args.bound if args.bound is not None else 64
        try:
            target = boxspline.phi_target(base, m)
        except ValueError as exc:
            raise CliError(EXIT_INVALID, "bad-input", str(exc))
        bad = boxspline.check_intertwining(base, m, radius)
        images = [boxspline.phi_bijection(n, base, m) for n in range(-radius, radius + 1)]
        injective = len(set(images)) == len(images)
        emit(args, "boxspline check", {
            "m": m, "radius": radius, "target": target.lifted.to_json(),
            "failures": [list(f) for f in bad], "injective": injective,
        })
        return EXIT_OK if not bad and injective else EXIT_INCONCLUSIVE
    raise CliError(EXIT_INVALID, "bad-input", f"unknown boxspline action {args.action!r}")


def cmd_hyperbolic(args) -> int:
    system = load_system(args)
    try:
        res = dynamics.hyperbolic_periodic_points(system, args.budget_cells)
    except dynamics.NotExpansiveError as exc:
        raise CliError(EXIT_INVALID, "not-hyperbolic", str(exc))
    except dynamics.UnsupportedSystemError as exc:
        raise CliError(EXIT_INCONCLUSIVE, "unsupported", str(exc))
    emit(args, "hyperbolic", {"b_infinity": points_json(res.b_infinity),
                              "has_infinite_cycles": res.has_infinite_cycles})
    return EXIT_OK


# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="system JSON file, inline JSON, or a catalog name")
    common.add_argument("--depth", type=int)
    common.add_argument("--bound", type=int)
    common.add_argument("--budget-cells", type=int, dest="budget_cells")
    common.add_argument("--format", choices=["json", "csv", "ppm", "svg"])
    common.add_argument("--out")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="radixdyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate)
    add("classify", cmd_classify)
    p = add("orbit", cmd_orbit)
    p.add_argument("x")
    p.add_argument("--step-cap", type=int, dest="step_cap")
    add("bpoints", cmd_bpoints)
    p = add("structure", cmd_structure)
    p.add_argument("--zeta-order", type=int, default=8, dest="zeta_order")
    p = add("equiv", cmd_equiv)
    p.add_argument("x")
    p.add_argument("y")
    add("subcuntz", cmd_subcuntz)
    p = add("tile", cmd_tile)
    p.add_argument("action", choices=["render"])
    p.add_argument("--size", type=int, default=400)
    add("tiling-test", cmd_tiling_test)
    add("lattice", cmd_lattice)
    p = add("onedim", cmd_onedim)
    p.add_argument("action", choices=["census", "necklace", "uniform-search"])
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--composite-only", action="store_true", dest="composite_only")
    p = add("boxspline", cmd_boxspline)
    p.add_argument("action", choices=["lift", "check"])
    p.add_argument("--m", type=int, default=2)
    add("hyperbolic", cmd_hyperbolic)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.budget_cells is not None and args.budget_cells <= 0:
        diagnose("error", "bad-input", "--budget-cells must be positive")
        return EXIT_INVALID
    try:
        return args.func(args)
    except CliError as exc:
        diagnose("error", exc.kind, str(exc), **exc.detail)
        return exc.code
    except ResourceBudgetError as exc:
        diagnose("error", "budget", str(exc), needed=exc.needed, budget=exc.budget)
        return EXIT_BUDGET
    except (SingularMatrixError, UnsupportedDegreeError) as exc:
        diagnose("error", "unsupported", str(exc))
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())

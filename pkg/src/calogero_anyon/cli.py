"""``cak``: build states, run verification suites, tabulate spectra.

Machine output is JSON (stdout or ``--out``); a short summary goes to stderr.

Exit codes: 0 pass, 1 verification failure, 2 usage or validation error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from . import __version__
from .anyon_states import (
    SpectrumParams,
    count_degeneracy,
    excitations,
    lll_state,
    spectrum_checks,
    spectrum_rows,
)
from .calogero_states import build_state, eigen_residual
from .exchange_algebra import BudgetExceeded
from .kernel_map import (
    boundary_term_check,
    intertwiner_constant_check,
    intertwining_relation_check,
    sample_z,
    verify_mapping,
)
from .kernel_map.quadrature import gauss_hermite_tensor
from .kernel_map.wedge import PANEL_DEFAULTS, default_panel_grid
from .scattering import build_scattering_symbolic, check_eigen, check_swap_symmetry

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
PRNG = "PCG64"
SUITES = ("map", "eigen", "intertwine", "boundary", "spectrum")

# desk-scale defaults used when --n/--g/--ell are omitted
DEFAULT_MAP_CASES = [(2, 1, 4), (2, 2, 4), (3, 1, 3)]  # (n, g, max sum of ell)
DEFAULT_EIGEN_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]
DEFAULT_INTERTWINE_CASES = [(n, g) for n in (2, 3) for g in (0, 1, 2)]
DEFAULT_BOUNDARY_G = [0.5, 0.75, 1.0, 1.5, 2.0]
DEFAULT_Z_SAMPLES = 5
CALOGERO_EIGEN_MAX_TOTAL = 2


class UsageError(ValueError):
    pass


def parse_ell(text: str | None) -> tuple | None:
    if text is None:
        return None
    try:
        ell = tuple(int(v) for v in str(text).replace(" ", "").split(",") if v != "")
    except ValueError:
        raise UsageError(f"cannot parse --ell {text!r}")
    if not ell:
        raise UsageError("--ell is empty")
    if any(v < 0 for v in ell):
        raise UsageError("--ell entries must be non-negative")
    if any(a > b for a, b in zip(ell, ell[1:])):
        raise UsageError(f"--ell must be nondecreasing, got {text}")
    return ell


def parse_number(text) -> Fraction | float:
    if isinstance(text, (int, float)):
        return Fraction(text) if float(text).is_integer() else float(text)
    try:
        return Fraction(str(text))
    except ValueError:
        raise UsageError(f"not a number: {text!r}")


def _num(q) -> str | float:
    if isinstance(q, Fraction):
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return float(q)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--config", help="JSON file of defaults; explicit flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cak", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cak {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-state", help="construct a Calogero or anyon state")
    b.add_argument("--model", choices=("calogero", "anyon"), default="calogero")
    b.add_argument("--n", type=int, default=2)
    b.add_argument("--g", default="1", help="Calogero coupling (non-negative integer)")
    b.add_argument("--alpha", default="0", help="anyon statistics parameter")
    b.add_argument("--ell", help="nondecreasing excitations, e.g. 0,2 (default: all zero)")
    b.add_argument("--budget", type=int, default=10**6, help="maximum expression terms")
    _common(b)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--n", type=int)
    v.add_argument("--g")
    v.add_argument("--ell")
    v.add_argument("--tol", type=float, help="mapping tolerance (default 1e-6 for n=2, 1e-3 for n=3)")
    v.add_argument("--grid-points", type=int, help="Gauss-Hermite points per axis")
    v.add_argument("--box-radius", type=float, help="wedge panel box radius (default: automatic)")
    v.add_argument("--z-seed", type=int, default=0)
    v.add_argument("--z-samples", type=int, default=DEFAULT_Z_SAMPLES)
    v.add_argument("--budget", type=int, default=10**6)
    _common(v)

    s = sub.add_parser("spectrum", help="linear anyon spectrum table")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--alpha-steps", default="0,0.5,1")
    s.add_argument("--max-excitation", type=int, default=2)
    s.add_argument("--omega", default="1")
    s.add_argument("--omega-c", default="0")
    s.add_argument("--count-degeneracy", type=int, metavar="TOTAL",
                   help="print only the number of states with this excitation")
    _common(s)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}")
    if not isinstance(config, dict):
        raise UsageError("config must be a JSON object")
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in subparser._actions}
    unknown = set(k.replace("-", "_") for k in config) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    defaults = {}
    for k, val in config.items():
        if isinstance(val, list):
            val = ",".join(str(x) for x in val)
        defaults[k.replace("-", "_")] = val
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- build-state --------------------------------------------------------------


def command_build_state(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("--n must be positive")
    ell = parse_ell(args.ell) or (0,) * n
    if len(ell) != n:
        raise UsageError(f"--ell needs {n} entries")
    if args.model == "calogero":
        g = parse_number(args.g)
        if not isinstance(g, Fraction) or g.denominator != 1 or g < 0:
            raise UsageError("--g must be a non-negative integer for symbolic states")
        state = build_state(n, g, ell, budget=args.budget)
        payload = {"model": "calogero", "state": state.to_dict(), "bodyText": str(state.body)}
        _say(f"calogero n={n} g={_num(g)} ell={list(ell)} energy={_num(state.energy)} "
             f"terms={state.body.term_count()}")
    else:
        alpha = parse_number(args.alpha)
        if alpha < 0:
            raise UsageError("--alpha must be non-negative")
        state = lll_state(n, alpha, ell)
        payload = {"model": "anyon", "state": state.to_dict(), "bodyText": str(state.body)}
        _say(f"anyon n={n} alpha={_num(alpha)} ell={list(ell)} body={state.body}")
    _emit(payload, args.out)
    return EXIT_PASS


# -- verify -------------------------------------------------------------------


def _ell_cases(n: int, max_total: int) -> List[tuple]:
    return [ell for total in range(max_total + 1) for ell in excitations(n, total)]


def _int_g(text) -> int:
    g = parse_number(text)
    if not isinstance(g, Fraction) or g.denominator != 1 or g < 0:
        raise UsageError("--g must be a non-negative integer for this suite")
    return int(g)


def suite_map(args) -> List[dict]:
    if args.n is not None or args.g is not None or args.ell is not None:
        n = args.n or 2
        g = _int_g(args.g if args.g is not None else 1)
        ell = parse_ell(args.ell)
        ells = [ell] if ell else _ell_cases(n, 4 if n == 2 else 3)
        cases = [(n, g, e) for e in ells]
    else:
        cases = [(n, g, e) for n, g, top in DEFAULT_MAP_CASES for e in _ell_cases(n, top)]
    hermite = None
    reports = []
    for n, g, ell in cases:
        if len(ell) != n:
            raise UsageError(f"--ell needs {n} entries")
        if args.grid_points:
            hermite = gauss_hermite_tensor(n, args.grid_points, rate=1.0)
        panel = None
        if args.box_radius:
            panel = default_panel_grid(n, float(args.box_radius), *PANEL_DEFAULTS[n][1:])
        zs = sample_z(n, args.z_samples, seed=args.z_seed)
        rep = verify_mapping(n, g, ell, zs, tol=args.tol, panel_grid=panel, hermite_grid=hermite,
                             budget=args.budget)
        d = rep.to_dict()
        d["check"] = "map"
        reports.append(d)
        _say(f"map n={n} g={g} ell={list(ell)} maxRelErr={max(rep.relative_errors):.2e} "
             f"tol={rep.tolerance:g} {'PASS' if rep.passed else 'FAIL'}")
    return reports


def suite_eigen(args) -> List[dict]:
    if args.n is not None or args.g is not None:
        cases = [(args.n or 2, _int_g(args.g if args.g is not None else 1))]
    else:
        cases = DEFAULT_EIGEN_CASES
    ell = parse_ell(args.ell)
    reports = []
    for n, g in cases:
        state = build_scattering_symbolic(n, g, budget=args.budget)
        eig = check_eigen(state)
        swap = check_swap_symmetry(state)
        ok = eig.passed and swap.passed
        reports.append({"check": "scatteringEigen", "n": n, "g": g, "pass": ok,
                        "eigen": eig.to_dict(), "swap": swap.to_dict(), "terms": state.expression.term_count()})
        _say(f"scattering n={n} g={g} eigen={eig.passed} swap={swap.passed}")
        ells = [ell] if ell else _ell_cases(n, CALOGERO_EIGEN_MAX_TOTAL)
        for e in ells:
            if len(e) != n:
                raise UsageError(f"--ell needs {n} entries")
            st = build_state(n, g, e, budget=args.budget)
            res = eigen_residual(st)
            reports.append({"check": "calogeroEigen", "n": n, "g": g, "ell": list(e),
                            "energy": _num(st.energy), "pass": res.is_zero()})
            _say(f"calogero n={n} g={g} ell={list(e)} residualZero={res.is_zero()}")
    return reports


def suite_intertwine(args) -> List[dict]:
    if args.n is not None or args.g is not None:
        cases = [(args.n or 2, _int_g(args.g if args.g is not None else 1))]
    else:
        cases = DEFAULT_INTERTWINE_CASES
    reports = []
    for n, g in cases:
        const = intertwiner_constant_check(n, g)
        rel = intertwining_relation_check(n, g)
        reports.append({"check": "intertwine", "n": n, "g": g, "pass": const.passed and rel.passed,
                        "constant": const.to_dict(), "relation": rel.to_dict()})
        _say(f"intertwine n={n} g={g} constant={const.passed} relation={rel.passed}")
    return reports


def suite_boundary(args) -> List[dict]:
    gs = [float(parse_number(args.g))] if args.g is not None else DEFAULT_BOUNDARY_G
    ells = [parse_ell(args.ell)[-1]] if args.ell else [1, 2, 3]
    reports = []
    for g in gs:
        if g <= 0:
            raise UsageError("boundary suite needs g > 0")
        for ell in ells:
            for irregular in (False, True):
                if irregular and float(g - 0.5).is_integer():
                    continue  # no independent irregular solution
                rep = boundary_term_check(g, max(ell, 1), irregular=irregular)
                d = rep.to_dict()
                d["check"] = "boundary"
                reports.append(d)
                _say(f"boundary g={g:g} ell={max(ell, 1)} irregular={irregular} "
                     f"{'PASS' if rep.passed else 'FAIL'}")
    return reports


def suite_spectrum(args) -> List[dict]:
    rep = spectrum_checks()
    _say(f"spectrum {'PASS' if rep.passed else 'FAIL'}")
    d = rep.to_dict()
    d["check"] = "spectrum"
    return [d]


SUITE_RUNNERS: Dict[str, Callable] = {
    "map": suite_map,
    "eigen": suite_eigen,
    "intertwine": suite_intertwine,
    "boundary": suite_boundary,
    "spectrum": suite_spectrum,
}


def command_verify(args) -> int:
    if args.tol is not None and args.tol <= 0:
        raise UsageError("--tol must be positive")
    if args.z_samples < 1:
        raise UsageError("--z-samples must be positive")
    if args.n is not None and args.n < 2:
        raise UsageError("--n must be at least 2")
    suites = SUITES if args.suite == "all" else (args.suite,)
    results = {}
    for name in suites:
        t0 = time.perf_counter()
        reports = SUITE_RUNNERS[name](args)
        results[name] = {"pass": all(r["pass"] for r in reports), "reports": reports}
        _say(f"suite {name}: {'PASS' if results[name]['pass'] else 'FAIL'} ({time.perf_counter() - t0:.1f}s)")
    ok = all(r["pass"] for r in results.values())
    payload = {
        "pass": ok,
        "suites": results,
        "metadata": {"prng": PRNG, "zSeed": args.z_seed, "zSamples": args.z_samples, "version": __version__},
    }
    _emit(payload, args.out)
    return EXIT_PASS if ok else EXIT_FAIL


# -- spectrum -----------------------------------------------------------------


def command_spectrum(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    try:
        params = SpectrumParams(parse_number(args.omega), parse_number(args.omega_c))
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.count_degeneracy is not None:
        if args.count_degeneracy < 0:
            raise UsageError("--count-degeneracy must be non-negative")
        count = count_degeneracy(args.n, args.count_degeneracy)
        _emit({"n": args.n, "excitation": args.count_degeneracy, "degeneracy": count}, args.out)
        _say(f"n={args.n} excitation={args.count_degeneracy}: {count} states")
        return EXIT_PASS
    if args.max_excitation < 0:
        raise UsageError("--max-excitation must be non-negative")
    alphas = [parse_number(a) for a in str(args.alpha_steps).split(",") if a.strip()]
    if not alphas or any(a < 0 for a in alphas):
        raise UsageError("--alpha-steps needs non-negative values")
    rows = spectrum_rows(args.n, alphas, args.max_excitation, params)
    degeneracy = [{"excitation": t, "degeneracy": count_degeneracy(args.n, t)}
                  for t in range(args.max_excitation + 1)]
    _emit({"n": args.n, "omega": _num(params.omega), "omegaC": _num(params.omega_c),
           "rows": rows, "degeneracy": degeneracy}, args.out)
    _say(f"{len(rows)} rows for n={args.n}, {len(alphas)} alpha values")
    return EXIT_PASS


COMMANDS = {"build-state": command_build_state, "verify": command_verify, "spectrum": command_spectrum}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    except UsageError as exc:
        _say(f"cak: error: {exc}")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _say(f"cak: budget exceeded: {exc}")
        return EXIT_BUDGET
    except ValueError as exc:
        _say(f"cak: error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

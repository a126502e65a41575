"""Command-line entry point: ``so3zi <command> ...``.

Exit status is 0 on success, 1 when a verification or reduction fails, and 2
on bad usage or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import BudgetExceededError, DomainError, NonConvergenceError
from .gaussian import omega_reps, parse_gaussian
from .hecke import hecke_decompose, xi_classify
from .hyperbolic import H3Point, default_eps, export_domain, reduce_gamma, reduce_picard
from .matrices import Mat2
from .orthogonal import conj3, coset_rep, gamma_membership, is_so3_gaussian
from .realform import H2Point, conj_eta, gamma_int_membership, reduce_gamma_int
from .verify import SUITE_ORDER, default_threads, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(obj) -> None:
    print(json.dumps(obj, ensure_ascii=False, indent=2))


def _load_matrix(arg: str) -> Mat2:
    text = arg.strip()
    if not text.startswith(("{", "[")):
        path = Path(arg)
        if not path.is_file():
            raise UsageError(f"{arg!r} is neither inline JSON nor a readable file")
        text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"matrix is not valid JSON: {exc}") from exc
    try:
        return Mat2.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"matrix JSON has the wrong shape: {exc}") from exc


def _floats(text: str, n: int, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"{what} must be {n} comma-separated numbers") from exc
    if len(vals) != n:
        raise UsageError(f"{what} must be {n} comma-separated numbers, got {len(vals)}")
    return vals


def cmd_conj(args) -> int:
    g = _load_matrix(args.matrix)
    m = conj3(g)
    _emit({"conj3": m.to_json()["rows"], "gaussian": m.is_gaussian(),
           "special_orthogonal": m.is_special_orthogonal(), "member": is_so3_gaussian(m)})
    return EXIT_OK


def cmd_member(args) -> int:
    g = _load_matrix(args.matrix)
    if args.real:
        tag = gamma_int_membership(g)
        m = conj_eta(g)
        _emit({"member": tag is not None, "coset": tag.value if tag else None,
               "conj_eta": m.to_json()["rows"], "integral": m.is_rational_integral()})
    else:
        lab = gamma_membership(g)
        _emit({"member": lab is not None, "coset": str(lab) if lab else None})
    return EXIT_OK


def cmd_coset(args) -> int:
    g = _load_matrix(args.matrix)
    lab = gamma_membership(g)
    if lab is None:
        _emit({"member": False, "coset": None})
        return EXIT_OK
    rep = coset_rep(lab)
    xi = g * rep.inverse()
    _emit({"member": True, "coset": str(lab), "representative": rep.to_json(),
           "xi12_factor": xi.to_json(), "xi_class": xi_classify(xi).value})
    return EXIT_OK


def cmd_hecke(args) -> int:
    g = _load_matrix(args.matrix)
    if not g.is_gaussian():
        raise DomainError("hecke needs a matrix with Gaussian integer entries")
    _emit(hecke_decompose(g).to_json())
    return EXIT_OK


def cmd_reduce(args) -> int:
    if args.group == "gamma-int":
        x, y = _floats(args.point, 2, "--point")
        res = reduce_gamma_int(H2Point(x, y), args.eps, args.max_iter)
        doc = res.to_json()
        doc["member"] = gamma_int_membership(res.gamma).value
    else:
        z = H3Point(*_floats(args.point, 3, "--point"))
        if args.group == "gamma":
            res = reduce_gamma(z, args.eps, args.max_iter)
            doc = res.to_json()
            doc["member"] = str(gamma_membership(res.gamma))
        else:
            res = reduce_picard(z, args.eps, args.max_iter)
            doc = res.to_json()
    doc["group"] = args.group
    _emit(doc)
    return EXIT_OK


def cmd_residues(args) -> int:
    try:
        y = parse_gaussian(args.modulus)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit([str(r) for r in omega_reps(y).reps])
    return EXIT_OK


_DOMAIN_ALIASES = {"picard": "picard", "gamma": "gamma", "gammaInt": "gammaInt",
                   "gamma-int": "gammaInt"}


def cmd_domain_export(args) -> int:
    slices = _floats(args.slices, len(args.slices.split(",")), "--slices") if args.slices else []
    _emit(export_domain(_DOMAIN_ALIASES[args.which], slices))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITE_ORDER if args.suite == "all" else (args.suite,)
    results = run_suites(names, args.samples, args.seed, args.eps, args.threads)
    ok = all(r.passed for r in results)
    if args.json:
        docs = [r.to_json() for r in results]
        if not args.timings:
            for d in docs:
                d.pop("seconds")
        _emit({"passed": ok, "seed": args.seed, "samples": args.samples, "suites": docs})
    else:
        for r in results:
            line = f"{'PASS' if r.passed else 'FAIL'}  {r.name:<14} checks={r.checks}"
            if args.timings:
                line += f"  {r.seconds:.2f}s"
            print(line)
            for f in r.failures[:5]:
                print(f"      {json.dumps(f, ensure_ascii=False)}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--eps", type=float, default=None,
                        help="tolerance for domain tests (default: $FORD_EPS or 1e-9)")
    common.add_argument("--json", action="store_true", help="machine-readable output and errors")
    common.add_argument("--seed", type=int, default=7, help="seed for random suites")

    parser = _Parser(prog="so3zi", description="Exact SO3(Z[i]) arithmetic and fundamental-domain reduction.")
    sub = parser.add_subparsers(dest="command", required=True)

    def matrix_cmd(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("matrix", help="Mat2 as inline JSON or a path to a JSON file")
        p.set_defaults(func=fn)
        return p

    matrix_cmd("conj", cmd_conj, "image in SO(3) and integrality flags")
    matrix_cmd("member", cmd_member, "membership and coset label").add_argument(
        "--real", action="store_true", help="test membership in the real form instead")
    matrix_cmd("coset", cmd_coset, "coset label with its representative and Xi12 factor")
    matrix_cmd("hecke", cmd_hecke, "factor a Gaussian matrix as gamma * alpha(m, x)")

    p = sub.add_parser("reduce", parents=[common], help="reduce a point into a fundamental domain")
    p.add_argument("--group", choices=("picard", "gamma", "gamma-int"), required=True)
    p.add_argument("--point", required=True, help="x1,x2,y (or x,y for gamma-int)")
    p.add_argument("--max-iter", type=int, default=10_000)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("residues", parents=[common], help="residue system modulo a Gaussian integer")
    p.add_argument("--modulus", required=True, help='Gaussian literal such as "2" or "1+i"')
    p.set_defaults(func=cmd_residues)

    def add_export_args(p):
        p.add_argument("--which", choices=sorted(_DOMAIN_ALIASES), required=True)
        p.add_argument("--slices", default="", help="comma-separated heights y for cross-sections")
        p.set_defaults(func=cmd_domain_export)

    add_export_args(sub.add_parser("domain-export", parents=[common], help="geometry of a domain"))
    dom = sub.add_parser("domain", parents=[common], help="domain geometry")
    dsub = dom.add_subparsers(dest="domain_command", required=True)
    add_export_args(dsub.add_parser("export", parents=[common], help="geometry of a domain"))

    p = sub.add_parser("verify", parents=[common], help="run property suites")
    p.add_argument("suite", nargs="?", default="all", choices=("all",) + SUITE_ORDER)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--threads", type=int, default=default_threads())
    p.add_argument("--timings", action="store_true", help="report wall time per suite")
    p.set_defaults(func=cmd_verify)
    return parser


def _error(kind: str, message: str, as_json: bool) -> None:
    if as_json:
        _emit({"error": kind, "message": message})
    else:
        print(f"error: {message}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        if args.eps is None:
            args.eps = default_eps()
        if getattr(args, "samples", 1) < 1 or getattr(args, "threads", 1) < 1:
            raise UsageError("--samples and --threads must be positive")
        return args.func(args)
    except UsageError as exc:
        _error("usage", str(exc), as_json)
        return EXIT_USAGE
    except DomainError as exc:
        _error("domain", str(exc), as_json)
        return EXIT_USAGE
    except (NonConvergenceError, BudgetExceededError) as exc:
        _error(type(exc).__name__, str(exc), as_json)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

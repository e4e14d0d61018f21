"""Command-line front end.

Exit codes: 0 success / check holds, 1 infeasible or check failed,
2 usage or input error, 3 bound or budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Optional, Sequence

from .diophantine import (
    DEFAULT_CAP,
    BoundTooLargeError,
    DiophantineSystem,
    find_bounded_solution,
    gcd_maximal_minors,
    minor_bound,
    saturate,
)
from .exact_linalg import DimensionError, IntMatrix
from .verify import (
    DEFAULT_BUDGET,
    MODES,
    BudgetError,
    CampaignReport,
    GenParams,
    TheoremReport,
    brute_force_box_search,
    check_theorem,
    fuzz_campaign,
    lemma_violation,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
FORMAT_VERSION = 1
_INT_RE = re.compile(r"[+-]?[0-9]+")


class DocumentError(ValueError):
    """A system document is malformed or describes an invalid system."""


def _parse_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DocumentError(f"{where}: expected an integer or decimal string, got {value!r}")
    if isinstance(value, str):
        if not _INT_RE.fullmatch(value.strip()):
            raise DocumentError(f"{where}: {value!r} is not a decimal integer")
        return int(value)
    return value


def parse_system(document: bytes | str) -> DiophantineSystem:
    """Parse a JSON system document ``{"format": 1, "A": [[...]], "b": [...]}``."""
    return parse_document(document)[0]


def parse_document(document: bytes | str) -> tuple[DiophantineSystem, Optional[str]]:
    """Like :func:`parse_system` but also returns the optional ``name``."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError(f"input is not UTF-8: {exc}") from None
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    fmt = doc.get("format", FORMAT_VERSION)
    if fmt != FORMAT_VERSION:
        raise DocumentError(f"format: unsupported version {fmt!r}")
    if "name" in doc and not isinstance(doc["name"], str):
        raise DocumentError("name: expected a string")
    for key in ("A", "b"):
        if key not in doc:
            raise DocumentError(f"{key}: missing")
    rows = doc["A"]
    if not isinstance(rows, list) or not rows:
        raise DocumentError("A: expected a nonempty array of rows")
    a = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise DocumentError(f"A[{i}]: expected an array")
        a.append([_parse_int(v, f"A[{i}][{j}]") for j, v in enumerate(row)])
    if not isinstance(doc["b"], list):
        raise DocumentError("b: expected an array")
    b = [_parse_int(v, f"b[{i}]") for i, v in enumerate(doc["b"])]
    try:
        return DiophantineSystem(IntMatrix.from_rows(a), tuple(b)), doc.get("name")
    except (DimensionError, ValueError) as exc:
        raise DocumentError(f"invalid system: {exc}") from None


def system_to_dict(system: DiophantineSystem, name: Optional[str] = None) -> dict:
    doc: dict[str, Any] = {"format": FORMAT_VERSION}
    if name is not None:
        doc["name"] = name
    doc["A"] = [[str(v) for v in row] for row in system.a.to_rows()]
    doc["b"] = [str(v) for v in system.b]
    return doc


def render_system(system: DiophantineSystem, name: Optional[str] = None) -> str:
    return json.dumps(system_to_dict(system, name))


def _vec(x: Sequence[int]) -> list[str]:
    return [str(v) for v in x]


def theorem_report_to_dict(rep: TheoremReport) -> dict:
    cert = rep.certificate
    return {
        "d": str(rep.d),
        "feasible": rep.feasible,
        "certificate": None if cert is None else {"x0": _vec(cert.x0), "d": str(cert.d)},
        "holds": rep.holds,
        "oracle_agrees": rep.oracle_agrees,
    }


def campaign_to_dict(rep: CampaignReport, mode: str, p: GenParams, timing: bool) -> dict:
    out: dict[str, Any] = {
        "mode": mode,
        "params": {
            "m": p.m, "n": p.n, "entry_bound": p.entry_bound,
            "witness_bound": p.witness_bound, "seed": str(p.seed),
        },
        "trials": rep.trials,
        "passed": rep.passed,
        "failures": [
            {
                "seed": str(f.seed),
                "system": None if f.system is None else system_to_dict(f.system),
                "detail": f.detail,
            }
            for f in rep.failures
        ],
    }
    if timing:
        out["elapsed_ms"] = round(rep.elapsed, 3)
    return out


def _emit(args: argparse.Namespace, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _read_system(args: argparse.Namespace) -> DiophantineSystem:
    if args.input and args.input != "-":
        try:
            with open(args.input, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise DocumentError(f"cannot read {args.input}: {exc.strerror}") from None
    else:
        data = sys.stdin.buffer.read()
    return parse_system(data)


def _cmd_bound(args: argparse.Namespace) -> int:
    system = _read_system(args)
    d = minor_bound(system)
    _emit(args, {"d": str(d)}, [f"d = {d}"])
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    system = _read_system(args)
    cert = find_bounded_solution(system, args.cap)
    if cert is None:
        d = minor_bound(system)
        _emit(args, {"feasible": False, "d": str(d), "certificate": None}, [f"d = {d}", "infeasible"])
        return EXIT_FAILED
    _emit(
        args,
        {"feasible": True, "d": str(cert.d), "certificate": {"x0": _vec(cert.x0), "d": str(cert.d)}},
        [f"d = {cert.d}", "x0 = " + " ".join(_vec(cert.x0))],
    )
    return EXIT_OK


def _yn(flag: Optional[bool]) -> str:
    return "n/a" if flag is None else str(flag).lower()


def _cmd_check(args: argparse.Namespace) -> int:
    rep = check_theorem(_read_system(args), args.cap)
    cert = "none" if rep.certificate is None else " ".join(_vec(rep.certificate.x0))
    _emit(args, theorem_report_to_dict(rep), [
        f"d = {rep.d}",
        f"feasible = {_yn(rep.feasible)}",
        f"certificate = {cert}",
        f"holds = {_yn(rep.holds)}",
        f"oracle_agrees = {_yn(rep.oracle_agrees)}",
    ])
    return EXIT_OK if rep.holds and rep.oracle_agrees is not False else EXIT_FAILED


def _cmd_lemma(args: argparse.Namespace) -> int:
    system = _read_system(args)
    g = gcd_maximal_minors(system.a)
    a = system.a if g == 1 else saturate(DiophantineSystem(system.a, (0,) * system.m)).a_prime
    bad = lemma_violation(a)
    payload = {
        "gcd": str(g),
        "matrix": [_vec(r) for r in a.to_rows()],
        "holds": bad is None,
        "violation": None if bad is None else list(bad),
    }
    lines = [f"gcd = {g}" + ("" if g == 1 else " (saturated before checking)")]
    lines.append("holds = true" if bad is None else f"holds = false (columns {list(bad)})")
    _emit(args, payload, lines)
    return EXIT_OK if bad is None else EXIT_FAILED


def _cmd_oracle(args: argparse.Namespace) -> int:
    system = _read_system(args)
    d = minor_bound(system)
    sols = brute_force_box_search(system, d, args.budget)
    cert = find_bounded_solution(system, args.cap)
    got = None if cert is None else cert.x0
    want = sols[0] if sols else None
    agree = got == want
    _emit(
        args,
        {
            "d": str(d),
            "solutions": [_vec(x) for x in sols],
            "solver": None if got is None else _vec(got),
            "agrees": agree,
        },
        [
            f"d = {d}",
            f"solutions in box = {len(sols)}",
            "oracle first = " + ("none" if want is None else " ".join(_vec(want))),
            "solver = " + ("none" if got is None else " ".join(_vec(got))),
            f"agrees = {_yn(agree)}",
        ],
    )
    return EXIT_OK if agree else EXIT_FAILED


def _cmd_fuzz(args: argparse.Namespace) -> int:
    p = GenParams(args.m, args.n, args.entry_bound, args.witness_bound, args.seed)
    rep = fuzz_campaign(p, args.trials, args.mode, workers=args.workers)
    lines = [
        f"mode = {args.mode}",
        f"params = m={p.m} n={p.n} entry_bound={p.entry_bound} witness_bound={p.witness_bound} seed={p.seed}",
        f"trials = {rep.trials}",
        f"failures = {len(rep.failures)}",
    ]
    for f in rep.failures:
        system = "none" if f.system is None else render_system(f.system)
        lines.append(f"  seed {f.seed}: {f.detail}; system {system}")
    if args.timing:
        lines.append(f"elapsed_ms = {rep.elapsed:.3f}")
    lines.append("PASS" if rep.passed else "FAIL")
    _emit(args, campaign_to_dict(rep, args.mode, p, args.timing), lines)
    return EXIT_OK if rep.passed else EXIT_FAILED


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--input", metavar="FILE", help="system document (default: stdin)")
    io.add_argument("--cap", type=_nonneg, default=DEFAULT_CAP, help="largest d the solver accepts")

    parser = argparse.ArgumentParser(prog="diophbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bound", parents=[common, io], help="print the minor bound d")
    sub.add_parser("solve", parents=[common, io], help="find a solution with every x_i <= d")
    sub.add_parser("check", parents=[common, io], help="check the box bound on one system")
    sub.add_parser("lemma", parents=[common, io], help="check complementary minor duality")
    oracle = sub.add_parser("oracle", parents=[common, io], help="compare solver with brute force")
    oracle.add_argument("--budget", type=_nonneg, default=DEFAULT_BUDGET, help="max enumerated points")

    fuzz = sub.add_parser("fuzz", parents=[common], help="seeded random campaign")
    fuzz.add_argument("--mode", choices=MODES, default="theorem")
    fuzz.add_argument("--trials", type=_nonneg, default=100)
    fuzz.add_argument("--seed", type=_u64, default=0)
    fuzz.add_argument("--m", type=int, default=2)
    fuzz.add_argument("--n", type=int, default=4)
    fuzz.add_argument("--entry-bound", type=int, default=5)
    fuzz.add_argument("--witness-bound", type=int, default=4)
    fuzz.add_argument("--workers", type=int, default=1)
    fuzz.add_argument("--timing", action="store_true", help="include elapsed time (breaks byte identity)")
    return parser


_COMMANDS = {
    "bound": _cmd_bound,
    "solve": _cmd_solve,
    "check": _cmd_check,
    "lemma": _cmd_lemma,
    "oracle": _cmd_oracle,
    "fuzz": _cmd_fuzz,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # invalid generator parameters and similar
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BoundTooLargeError, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())

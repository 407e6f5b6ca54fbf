"""
Command line entry point.

    obstruct classify --coeffs "c_n ... c_0" [--extra-primes 3,7] [--ells FILE] [--height H] [--json OUT]
    obstruct sample --genus g --bound n --count N --seed s --json OUT.jsonl [--workers k]
    obstruct verify --report OUT.json
    obstruct bounds

Exit codes: 0 decided, 2 undecided, 3 input error, 4 resource or precision abort.
"""
import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.engine.primes import theorem_bound_table, threshold_rhs
from app.engine.verify import verify_report
from app.etale.curve import Curve
from app.models.config import EngineConfig, SampleConfig
from app.models.report import ClassificationResult, ObstructionReport
from app.pipeline.batch import emit_report, run_batch
from app.pipeline.orchestrator import classify_curve
from app.utils.config import get_settings
from app.utils.errors import InvalidCurveError, NonSquareNormError, ResourceAbort
from app.utils.logging_utils import setup_logger

logger = setup_logger("cli")

EXIT_DECIDED = 0
EXIT_UNDECIDED = 2
EXIT_INPUT = 3
EXIT_ABORT = 4

_INPUT_ERRORS = {InvalidCurveError.__name__, NonSquareNormError.__name__}
_ABORTS = {ResourceAbort.__name__} | {cls.__name__ for cls in ResourceAbort.__subclasses__()}


def parse_primes(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        return [int(p) for p in text.replace(" ", "").split(",") if p]
    except ValueError as e:
        raise InvalidCurveError(f"cannot parse prime list {text!r}") from e


def read_ells(path: Path) -> List[List[str]]:
    """One ℓ per line: rational coefficients of 1, θ, θ², ...; '#' starts a comment."""
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([str(Fraction(tok)) for tok in line.split()])
        except ValueError as e:
            raise InvalidCurveError(f"{path}:{lineno}: cannot parse {line!r}") from e
    return rows


def exit_code_for(result: ClassificationResult) -> int:
    error_type = result.diagnostics.get("error_type")
    if error_type in _INPUT_ERRORS:
        return EXIT_INPUT
    if result.category != "Undecided":
        return EXIT_DECIDED
    if error_type in _ABORTS:
        return EXIT_ABORT
    return EXIT_UNDECIDED


def _write_json(path: Optional[str], payload: str) -> None:
    if path:
        Path(path).write_text(payload + "\n", encoding="utf-8")


def cmd_classify(args: argparse.Namespace) -> int:
    curve = Curve.parse(args.coeffs)
    config = SampleConfig(
        genus=curve.genus,
        height_bound=args.height or get_settings().height_bound,
        engine=EngineConfig(extra_primes=parse_primes(args.extra_primes), deep=args.deep),
        consistency_check=not args.no_check,
    )
    ells = read_ells(Path(args.ells)) if args.ells else None
    result = classify_curve(curve, config, ells=ells)

    print(f"{curve}: {result.category}")
    if result.point is not None:
        x = "infinity" if result.point.x is None else result.point.x
        print(f"  point: x = {x}, y = {result.point.y}")
    if result.failing_place is not None:
        print(f"  no points over Q_{result.failing_place}")
    if result.report is not None:
        print(f"  S = {[e.place for e in result.report.S]}, {len(result.report.phi)} functionals, "
              f"{len(result.report.survivors)} surviving subproducts")
    if result.diagnostics.get("error"):
        print(f"  error: {result.diagnostics['error']}")
    _write_json(args.json, result.model_dump_json(indent=2))
    return exit_code_for(result)


def cmd_sample(args: argparse.Namespace) -> int:
    config = SampleConfig(
        genus=args.genus,
        bound=args.bound,
        sample_size=args.count,
        seed=args.seed,
        height_bound=args.height or get_settings().height_bound,
        engine=EngineConfig(deep=args.deep),
        consistency_check=not args.no_check,
        workers=args.workers,
    )
    path = Path(args.json) if args.json else None
    results = run_batch(config, path, resume=not args.no_resume)
    title = f"g = {config.genus}, n = {config.bound}, {len(results)} curves, seed {config.seed}"
    print(emit_report(results, title=title))
    return EXIT_DECIDED


def cmd_verify(args: argparse.Namespace) -> int:
    data = json.loads(Path(args.report).read_text(encoding="utf-8"))
    if "category" in data:
        data = data.get("report")
        if data is None:
            raise InvalidCurveError("classification result carries no obstruction report")
    report = ObstructionReport.model_validate(data)
    outcome = verify_report(report)
    print(outcome.model_dump_json(indent=2))
    return EXIT_DECIDED if outcome.valid else EXIT_UNDECIDED


def cmd_bounds(args: argparse.Namespace) -> int:
    print(f"{'g':>3}{'rhs':>8}{'q bound':>10}")
    for g, bound in theorem_bound_table(range(args.min_genus, args.max_genus + 1)).items():
        print(f"{g:>3}{threshold_rhs(g):>8}{bound:>10}")
    return EXIT_DECIDED


def build_parser() -> argparse.ArgumentParser:
    argp = argparse.ArgumentParser(prog="obstruct", description="Rational points and Brauer-Manin obstructions on y^2 = f(x)")
    sub = argp.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Classify one curve")
    p.add_argument("--coeffs", required=True, help="Integer coefficients of f, leading first")
    p.add_argument("--extra-primes", help="Comma separated primes added to S")
    p.add_argument("--ells", help="File with one element of L per line, constant coefficient first")
    p.add_argument("--height", type=int, help="Point search height bound")
    p.add_argument("--deep", action="store_true", help="Retry over a larger S when S_min gives no obstruction")
    p.add_argument("--no-check", action="store_true", help="Skip the point/survivor cross-check")
    p.add_argument("--json", help="Write the full result here")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sample", help="Classify a random sample of curves")
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--bound", type=int, default=10)
    p.add_argument("--count", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--height", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--deep", action="store_true")
    p.add_argument("--no-check", action="store_true")
    p.add_argument("--no-resume", action="store_true", help="Start over instead of skipping classified indices")
    p.add_argument("--json", help="JSON lines output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="Replay the F2 arithmetic of a report")
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="Prime bounds above which good reduction guarantees local points")
    p.add_argument("--min-genus", type=int, default=2)
    p.add_argument("--max-genus", type=int, default=10)
    p.set_defaults(func=cmd_bounds)
    return argp


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidCurveError, NonSquareNormError, ValidationError, json.JSONDecodeError, OSError) as e:
        logger.error(f"input error: {e}")
        return EXIT_INPUT
    except ResourceAbort as e:
        logger.error(f"aborted: {e}", exc_info=True)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())

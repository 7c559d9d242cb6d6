"""Command-line front end: evaluate primitives, run verification suites, check integrals.

Exit codes: 0 success, 1 a verification check failed, 2 a domain violation or an
invalid configuration, 3 a computation that did not converge.
"""

from __future__ import annotations

import argparse
import json
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
import uuid
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, Sequence

from pydantic import ValidationError

from rogers_engine import ROGERS_ENGINE_VERSION
from rogers_engine.adapters.reports import json_default, read_reports, summary_table
from rogers_engine.bootstrap import build_default_service_container
from rogers_engine.core.exceptions import DomainViolation, NonConvergent, PoleError
from rogers_engine.core.identities import (
    COROLLARY_CATALOG,
    IDENTITY_CATALOG,
    STRUCTURAL_SUITES,
    CorollaryId,
    IdentityId,
    PolyFamily,
)
from rogers_engine.core.logging import get_logger, run_id_context
from rogers_engine.core.models import (
    EvalResult,
    HypSpec,
    PhiSpec,
    PolySpec,
    SuiteConfig,
    VerificationReport,
    WeightSpec,
)
from rogers_engine.services.hyperseries import hyp, phi
from rogers_engine.services.polyfamilies import poly_eval
from rogers_engine.services.qcore import qpoch_finite, qpoch_general, qpoch_infinite
from rogers_engine.services.quadrature import corollary_residual, corollary_sides, weight_eval
from rogers_engine.services.suite_router import SuiteNotFoundError, SuiteRequest

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_NONCONVERGENT = 3

# Base used by q-corollaries when ``--q`` is omitted.
DEFAULT_COROLLARY_Q = 0.5

_COROLLARY_FLAGS = ("beta", "t", "a1", "a2", "a3", "a4", "u", "alpha", "gamma", "mu", "lambda", "nu")

Handler = Callable[[argparse.Namespace], int]


class ConfigError(ValueError):
    """Raised when a ``--config`` file cannot be read or parsed."""


def parse_complex(text: str) -> complex:
    """Parse ``0.3``, ``-1e-3`` or ``0.3+0.1j`` into a complex number."""

    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def parse_complex_list(text: str) -> tuple[complex, ...]:
    """Parse a comma-separated list; the empty string is the empty list."""

    return tuple(parse_complex(part) for part in text.split(",") if part.strip())


def _emit(payload: Mapping[str, Any]) -> None:
    print(json.dumps(payload, default=json_default))


def _eval_payload(kind: str, result: EvalResult) -> dict[str, Any]:
    return {
        "kind": kind,
        "value": result.value,
        "terms_used": result.terms_used,
        "converged": result.converged,
        "tail_bound": result.tail_bound,
    }


def _finish_eval(kind: str, result: EvalResult) -> int:
    _emit(_eval_payload(kind, result))
    if not result.converged:
        logger.warning("[cli] %s did not converge after %d terms", kind, result.terms_used)
        return EXIT_NONCONVERGENT
    return EXIT_OK


def cmd_eval_qpoch(args: argparse.Namespace) -> int:
    """Print ``(a;q)_n``, ``(a;q)_beta`` or ``(a;q)_inf``."""

    if args.infinite:
        result = qpoch_infinite(args.a, args.q)
    elif args.beta is not None:
        result = qpoch_general(args.a, args.q, args.beta)
    else:
        n = 0 if args.n is None else args.n
        result = EvalResult(qpoch_finite(args.a, args.q, n), n, True)
    return _finish_eval("qpoch", result)


def cmd_eval_phi(args: argparse.Namespace) -> int:
    """Print the basic hypergeometric series value."""

    return _finish_eval("phi", phi(PhiSpec(args.num, args.den, args.q, args.z)))


def cmd_eval_hyp(args: argparse.Namespace) -> int:
    """Print the generalized hypergeometric series value."""

    return _finish_eval("hyp", hyp(HypSpec(args.num, args.den, args.z)))


def cmd_eval_poly(args: argparse.Namespace) -> int:
    """Print one polynomial value."""

    spec = PolySpec(PolyFamily(args.family), args.params, args.q)
    value = poly_eval(spec, args.n, args.x, args.method)
    _emit({"kind": "poly", "family": spec.family.value, "n": args.n, "value": value})
    return EXIT_OK


def cmd_eval_weight(args: argparse.Namespace) -> int:
    """Print one weight value."""

    w = WeightSpec(PolyFamily(args.family), args.params, args.q)
    _emit({"kind": "weight", "family": w.family.value, "value": weight_eval(w, args.x)})
    return EXIT_OK


def _load_config_file(path: Path) -> dict[str, Any]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = tomllib.loads(text) if path.suffix.lower() == ".toml" else json.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a table of settings")
    return data


def resolve_config(args: argparse.Namespace) -> SuiteConfig:
    """Merge flags over the config file over the environment defaults."""

    data = _load_config_file(Path(args.config)) if args.config else {}
    overrides = {
        "suites": args.suite,
        "seed": args.seed,
        "threads": args.threads,
        "format": args.format,
        "output_path": args.output,
        "timings": args.timings,
    }
    data.update({key: value for key, value in overrides.items() if value is not None})
    return SuiteConfig.model_validate(data)


def expand_suites(names: Sequence[str]) -> list[str]:
    """Replace ``all`` by every registered suite, keeping first-seen order."""

    expanded: list[str] = []
    for name in names:
        group = [*STRUCTURAL_SUITES, *(i.value for i in IdentityId)] if name == "all" else [name]
        expanded.extend(item for item in group if item not in expanded)
    return expanded


def cmd_verify(args: argparse.Namespace) -> int:
    """Run the configured suites, write the report and print a summary table."""

    config = resolve_config(args)
    output = Path(config.output_path) if config.output_path else None
    container = build_default_service_container(config.format, output, config.truncation)
    if container.suite_router is None or container.report_sink is None:
        raise RuntimeError("Service container is missing its suite router or report sink.")
    suites = expand_suites(config.suites)
    requests = [SuiteRequest(name, config.seed, config.grids.get(name)) for name in suites]
    logger.info(
        "[cli] verify %d suites (seed=%d, threads=%d)", len(requests), config.seed, config.threads
    )
    batches = container.suite_router.dispatch_many(requests, container, threads=config.threads)
    reports: list[VerificationReport] = [report for batch in batches for report in batch]
    document = container.report_sink.write(reports, timings=config.timings)
    table = summary_table(reports)
    if output is None:
        sys.stdout.write(document)
        sys.stderr.write(table)
    else:
        sys.stdout.write(table)
    failed = [f"{r.suite}/{r.id}" for r in reports if not r.passed]
    if failed:
        logger.warning("[cli] %d checks failed: %s", len(failed), failed)
        return EXIT_FAILED
    return EXIT_OK


def cmd_integrate(args: argparse.Namespace) -> int:
    """Compare one corollary's quadrature against its closed form."""

    cor = CorollaryId(args.cor)
    descriptor = COROLLARY_CATALOG[cor]
    given = {name: getattr(args, name) for name in _COROLLARY_FLAGS if getattr(args, name) is not None}
    params = {name: complex(given.get(name, descriptor.defaults.get(name, 0.0))) for name in descriptor.required}
    q = args.q if args.q is not None else (DEFAULT_COROLLARY_Q if descriptor.q_required else None)
    integral, closed = corollary_sides(cor, args.n, params, q)
    residual = corollary_residual(integral, closed)
    _emit(
        {
            "cor": cor.value,
            "n": args.n,
            "params": params,
            "q": q,
            "quadrature": integral.value,
            "closed_form": closed,
            "nodes_used": integral.nodes_used,
            "est_error": integral.est_error,
            "rel_residual": residual,
        }
    )
    return EXIT_OK


def cmd_list_suites(_args: argparse.Namespace) -> int:
    """Print every suite name, identity suites with their summaries."""

    for name in STRUCTURAL_SUITES:
        print(name)
    for identity in IdentityId:
        print(f"{identity.value}\t{IDENTITY_CATALOG[identity].summary}")
    return EXIT_OK


def cmd_summary(args: argparse.Namespace) -> int:
    """Re-read a report file and print its summary table."""

    reports = read_reports(Path(args.path))
    sys.stdout.write(summary_table(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _add_eval_parsers(sub: argparse._SubParsersAction) -> None:  # pylint: disable=protected-access
    families = [f.value for f in PolyFamily]
    eval_parser = sub.add_parser("eval", help="Evaluate a primitive")
    kinds = eval_parser.add_subparsers(dest="kind", required=True)

    p = kinds.add_parser("qpoch", help="q-shifted factorial")
    p.add_argument("--a", type=parse_complex, required=True)
    p.add_argument("--q", type=parse_complex, required=True)
    length = p.add_mutually_exclusive_group()
    length.add_argument("--n", type=int)
    length.add_argument("--beta", type=parse_complex)
    length.add_argument("--infinite", action="store_true")
    p.set_defaults(handler=cmd_eval_qpoch)

    p = kinds.add_parser("phi", help="basic hypergeometric series")
    p.add_argument("--num", type=parse_complex_list, default=())
    p.add_argument("--den", type=parse_complex_list, default=())
    p.add_argument("--q", type=parse_complex, required=True)
    p.add_argument("--z", type=parse_complex, required=True)
    p.set_defaults(handler=cmd_eval_phi)

    p = kinds.add_parser("hyp", help="generalized hypergeometric series")
    p.add_argument("--num", type=parse_complex_list, default=())
    p.add_argument("--den", type=parse_complex_list, default=())
    p.add_argument("--z", type=parse_complex, required=True)
    p.set_defaults(handler=cmd_eval_hyp)

    p = kinds.add_parser("poly", help="orthogonal polynomial value")
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=parse_complex, required=True)
    p.add_argument("--params", type=parse_complex_list, default=())
    p.add_argument("--q", type=parse_complex)
    p.add_argument("--method", choices=["auto", "series", "recurrence"], default="auto")
    p.set_defaults(handler=cmd_eval_poly)

    p = kinds.add_parser("weight", help="orthogonality weight value")
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--params", type=parse_complex_list, default=())
    p.add_argument("--q", type=parse_complex)
    p.set_defaults(handler=cmd_eval_weight)


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser of the ``rogers-engine`` command."""

    parser = argparse.ArgumentParser(
        prog="rogers-engine",
        description="Evaluate and verify expansions of generalized Rogers generating functions.",
    )
    parser.add_argument("--version", action="version", version=ROGERS_ENGINE_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)
    _add_eval_parsers(sub)

    p = sub.add_parser("verify", help="Run verification suites")
    p.add_argument("--suite", action="append", help="suite name or 'all' (repeatable)")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--output", help="report file path; the report goes to stdout when omitted")
    p.add_argument("--config", help="TOML or JSON file mirroring the suite configuration")
    p.add_argument("--timings", action="store_true", default=None, help="include wall_time_ms")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("integrate", help="Check one definite-integral corollary")
    p.add_argument("--cor", choices=[c.value for c in CorollaryId], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=parse_complex)
    for name in _COROLLARY_FLAGS:
        p.add_argument(f"--{name}", type=parse_complex)
    p.set_defaults(handler=cmd_integrate)

    p = sub.add_parser("list-suites", help="List suite names")
    p.set_defaults(handler=cmd_list_suites)

    p = sub.add_parser("summary", help="Print the summary table of a report file")
    p.add_argument("path")
    p.set_defaults(handler=cmd_summary)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``rogers-engine`` console script."""

    args = build_parser().parse_args(argv)
    handler: Handler = args.handler
    with run_id_context(uuid.uuid4().hex[:12]):
        try:
            return handler(args)
        except (DomainViolation, PoleError) as exc:
            logger.error("[cli] domain error: %s", exc)
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        except NonConvergent as exc:
            logger.error("[cli] no convergence: %s", exc)
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NONCONVERGENT
        except (ValidationError, ConfigError, SuiteNotFoundError) as exc:
            logger.error("[cli] invalid configuration: %s", exc)
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())


__all__ = [
    "EXIT_OK",
    "EXIT_FAILED",
    "EXIT_DOMAIN",
    "EXIT_NONCONVERGENT",
    "ConfigError",
    "parse_complex",
    "parse_complex_list",
    "resolve_config",
    "expand_suites",
    "build_parser",
    "main",
]

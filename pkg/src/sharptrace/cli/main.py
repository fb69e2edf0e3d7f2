"""``sharptrace`` command line.

Exit codes: 0 when every check passes or is flagged, 1 when any check
fails (or an inequality is violated), 2 for usage and I/O errors.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys

from .. import __version__
from ..errors import AccuracyError, ConvergenceError, SharpTraceError, UsageError
from .report import render_rows, render_report
from .suites import SUITES, SuiteConfig, resolve_workers, run_suite, zero_runtimes

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv", "text")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message on stderr
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, default_format: str = "json") -> None:
    p.add_argument("--format", choices=FORMATS, default=default_format)
    p.add_argument("--output", "-o", help="write to this path instead of stdout")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp and zero runtimes for byte-stable output")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sharptrace", description="Verify sharp trace and Lebedev-Milin identities on the ball and half-space.")
    ap.add_argument("--version", action="version", version=f"sharptrace {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n-min", type=int, default=4)
    v.add_argument("--n-max", type=int, default=7)
    v.add_argument("--m-min", type=int, default=0)
    v.add_argument("--m-max", type=int, default=None)
    v.add_argument("--lmax", type=int, default=8)
    v.add_argument("--order", type=int, default=200, help="quadrature order")
    v.add_argument("--L", dest="L", type=int, default=40, help="zonal series truncation")
    v.add_argument("--mode", choices=("all", "exact", "numeric"), default="all")
    v.add_argument("--workers", type=int, default=None)
    _common(v, "text")

    ineq = sub.add_parser("ineq", help="evaluate one inequality report")
    isub = ineq.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    t = isub.add_parser("trace", help="trace inequality on the ball")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--datum", choices=("extremal", "perturbed", "const"), default="extremal")
    t.add_argument("--x0", type=float, default=0.3)
    t.add_argument("--exponent-choice", choices=("beckner", "printed"), default="beckner")
    t.add_argument("--amplitude", type=float, default=0.1)
    t.add_argument("--mode-degree", type=int, default=2)
    t.add_argument("--L", dest="L", type=int, default=40)
    t.add_argument("--order", type=int, default=200)
    _common(t)
    lm = isub.add_parser("lebedev-milin", help="Lebedev-Milin inequality at the critical order")
    lm.add_argument("--n", type=int, required=True)
    lm.add_argument("--x0", type=float, default=0.3)
    lm.add_argument("--datum", choices=("extremal", "perturbed", "const"), default="extremal")
    lm.add_argument("--amplitude", type=float, default=0.1)
    lm.add_argument("--mode-degree", type=int, default=2)
    lm.add_argument("--L", dest="L", type=int, default=40)
    lm.add_argument("--order", type=int, default=200)
    _common(lm)
    hs = isub.add_parser("halfspace", help="Gaussian trace inequality on the half-space")
    hs.add_argument("--n", type=int, required=True)
    hs.add_argument("--m", type=int, required=True)
    hs.add_argument("--sigma", type=float, default=1.0)
    _common(hs)

    mt = sub.add_parser("metric", help="sample the adapted metric factor")
    mt.add_argument("--n", type=int, required=True)
    mt.add_argument("--gamma", type=str, required=True, help="order, e.g. 1.5, 3/2 or 0.7")
    mt.add_argument("--samples", type=int, default=20)
    _common(mt, "csv")
    return ap


def _timestamp(args) -> str | None:
    if args.no_timestamp:
        return None
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _cmd_verify(args) -> int:
    cfg = SuiteConfig(
        suite=args.suite,
        n_min=args.n_min,
        n_max=args.n_max,
        m_min=args.m_min,
        m_max=args.m_max,
        lmax=args.lmax,
        order=args.order,
        L=args.L,
        mode=args.mode,
        workers=resolve_workers(args.workers),
    )
    report = run_suite(cfg, _timestamp(args))
    if args.no_timestamp:
        zero_runtimes(report)
    _emit(render_report(report, args.format), args.output)
    return EXIT_FAIL if report.failed else EXIT_OK


def _datum(args):
    from ..ballmodel.inequality import const, extremal, perturbed

    if args.datum == "const":
        return const(1.0)
    base = extremal(args.x0, getattr(args, "exponent_choice", "beckner"))
    if args.datum == "perturbed":
        return perturbed(base, args.amplitude, args.mode_degree)
    return base


def _render_inequality(rep, args) -> str:
    d = rep.to_dict()
    if args.no_timestamp is False:
        d["timestamp"] = _timestamp(args)
    if args.format == "json":
        return json.dumps(d, indent=2, default=str) + "\n"
    rows = [
        ("kind", d["kind"]),
        ("lhs", d["lhs"]),
        ("rhs", d["rhs"]),
        ("ratio", d["ratio"]),
        ("sharp_constant", d["sharp_constant"]),
    ]
    rows += [(f"breakdown.{k}", v) for k, v in d["breakdown"].items()]
    rows += [(f"extras.{k}", v) for k, v in d["extras"].items() if not isinstance(v, (list, dict))]
    if args.format == "csv":
        return render_rows(["field", "value"], rows, "csv")
    return "\n".join(f"{k:32} {v}" for k, v in rows) + "\n"


def _cmd_ineq(args) -> int:
    from ..sphere import ModelParams

    if args.kind == "trace":
        from ..ballmodel.inequality import trace_inequality_report

        rep = trace_inequality_report(ModelParams.half_integer(args.n, args.m), _datum(args), args.L, args.order)
    elif args.kind == "lebedev-milin":
        from ..ballmodel.inequality import lebedev_milin_report

        if args.n % 2 == 0:
            raise UsageError("Lebedev-Milin needs n odd")
        rep = lebedev_milin_report(ModelParams.half_integer(args.n, (args.n - 1) // 2), _datum(args), args.L, args.order)
    else:
        from ..halfspace import halfspace_trace_report

        rep = halfspace_trace_report(args.n, args.m, args.sigma)
    _emit(_render_inequality(rep, args), args.output)
    violated = rep.rhs < rep.lhs - 1e-9 * max(1.0, abs(rep.lhs))
    return EXIT_FAIL if violated else EXIT_OK


def _cmd_metric(args) -> int:
    from fractions import Fraction

    from ..ballmodel.metric import adapted_metric, conformal_factor
    from ..sphere import ModelParams

    if args.samples < 1:
        raise UsageError("--samples must be positive")
    try:
        gamma = Fraction(args.gamma)
    except ValueError:
        raise UsageError(f"cannot parse gamma {args.gamma!r}") from None
    params = ModelParams(args.n, gamma if gamma.denominator in (1, 2) else float(gamma))
    f = adapted_metric(params)
    rows = []
    for i in range(1, args.samples + 1):
        rho = i / (2 * args.samples)
        # at the critical order psi_gamma degenerates to its limit 1; the factor is e^(2S)
        psi = 1.0 if f.kind == "critical" else float(f(rho))
        rows.append((rho, psi, float(conformal_factor(params, rho))))
    _emit(render_rows(["ρ", "psi_gamma", "conformal_factor"], rows, args.format), args.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "ineq":
            return _cmd_ineq(args)
        return _cmd_metric(args)
    except (AccuracyError, ConvergenceError) as exc:
        print(f"sharptrace: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SharpTraceError, ValueError) as exc:
        print(f"sharptrace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"sharptrace: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Batch front end: zero tables, audits, reports, and static plots.

Exit codes are exhaustive and disjoint:
    0  success (all verdicts passing or merely flagged)
    1  audit failure (any FAIL or DISTINCT verdict)
    2  usage error (bad flags, bad config, empty plot range)
    3  cache corruption (checksum or structure mismatch)
    4  numerical non-convergence

All outputs are deterministic: reports are canonical JSON with sorted
keys, plots are hand-rendered SVG, and parallel scans merge in grid
order, so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .carlson import Conclusion, audit_difference, audit_eq9
from .config import ConfigError, RunConfig, build_config
from .coupling import (
    CLAIMED_NORM_COEFF,
    STANDARD_NORM_COEFF,
    audit_eq5,
    summarize_eq5,
)
from .errors import (
    AccuracyError,
    CacheCorruptionError,
    DivergenceError,
    NonConvergenceError,
    RealnessError,
    XispecError,
)
from .hadamard import ProductSpec, audit_coincidence, fitted_misfit
from .report import (
    AuditReport,
    Verdict,
    report_csv_rows,
    write_aggregate,
    write_report,
)
from .specfun import BesselOrder, EM_ORDER_CAP, EM_TERMS_CAP, em_truncation, xi, xi_critical
from .zeros import (
    CriticalZero,
    ZeroCache,
    roundtrip_precision,
    scan_zeros,
    zero_count_estimate,
)

EXIT_OK = 0
EXIT_AUDIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_CACHE_CORRUPTION = 3
EXIT_NUMERICAL = 4

HADAMARD_TRUNCATIONS = (50, 100, 200, 400, 800)
HADAMARD_MISFIT_TOL = 2e-2
COINCIDENCE_PROBES = 5
CARLSON_INTEGER_COUNT = 10
CARLSON_FIT_SMAX = 10.0

_AUDIT_NAMES = ("eq5", "eq9", "hadamard", "coincidence", "carlson")


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _verdict_text(verdict: Verdict) -> str:
    if not _use_color():
        return verdict.value
    color = {
        Verdict.PASS: "32",
        Verdict.CONSISTENT_UP_TO_CONSTANT: "32",
        Verdict.COINCIDE: "32",
        Verdict.FAIL: "31",
        Verdict.DISTINCT: "31",
        Verdict.INCONCLUSIVE: "33",
        Verdict.NOT_APPLICABLE: "33",
    }[verdict]
    return f"\x1b[{color}m{verdict.value}\x1b[0m"


def _t_for_zero_count(count: int) -> float:
    """Smallest t whose asymptotic zero count comfortably covers `count`."""
    lo, hi = 10.0, 10.0
    while zero_count_estimate(hi) < count + 2:
        hi *= 2.0
        if hi > 1e6:
            break
    while hi - lo > 0.5:
        mid = 0.5 * (lo + hi)
        if zero_count_estimate(mid) < count + 2:
            lo = mid
        else:
            hi = mid
    return hi + 2.0


def _gather_zeros(
    cfg: RunConfig,
    t_max: float,
    need_count: int | None = None,
) -> list[CriticalZero]:
    """Zeros up to t_max (or covering need_count), via cache when valid."""
    if need_count is not None:
        t_max = max(t_max, _t_for_zero_count(need_count))
    if cfg.cache and os.path.exists(cfg.cache):
        cache = ZeroCache.load(cfg.cache)  # corruption propagates: exit 3
        if cache.matches(t_max, cfg.tol):
            zeros = [z for z in cache.zeros if z.gamma <= t_max]
            if need_count is None or len(zeros) >= need_count:
                return zeros
    zeros = scan_zeros(t_max, cfg.tol, threads=cfg.worker_count)
    while need_count is not None and len(zeros) < need_count:
        t_max *= 1.15
        zeros = scan_zeros(t_max, cfg.tol, threads=cfg.worker_count)
    if cfg.cache:
        # Work with the serialized precision from the start, so this run's
        # outputs are byte-identical to a later cache-hitting run's.
        zeros = roundtrip_precision(zeros)
        ZeroCache(t_max=t_max, tol=cfg.tol, zeros=zeros).save(cfg.cache)
    return zeros


# ------------------------------- audits -------------------------------


def _run_eq5(cfg: RunConfig) -> tuple[AuditReport, list[str]]:
    orders = [BesselOrder.real_order(k / 10.0) for k in range(1, 10)]
    orders += [BesselOrder.imaginary_order(m) for m in (0.5, 1.0, 2.0)]
    audits = audit_eq5(orders, threads=cfg.worker_count)
    report = summarize_eq5(audits)
    rows = ["order_kind,order_magnitude,quadrature,closed_form,ratio,verdict,error"]
    for a in audits:
        rows.append(
            f"{a.order.kind.value},{a.order.magnitude:.12g},"
            f"{'' if a.quadrature_value is None else format(a.quadrature_value, '.12g')},"
            f"{'' if a.paper_closed_form is None else format(a.paper_closed_form, '.12g')},"
            f"{'' if a.ratio is None else format(a.ratio, '.12g')},"
            f"{a.verdict.value},{a.error}"
        )
    return report, rows


def _run_eq9(cfg: RunConfig) -> tuple[AuditReport, list[str]]:
    fit = audit_eq9(CARLSON_FIT_SMAX, 51)
    report = AuditReport(
        name="log-linear-exponential-fit",
        params={
            "s_max": CARLSON_FIT_SMAX,
            "samples": 51,
            "log_C": fit.B,
            "A": fit.D,
            "note": "residual is the finding; no pass/fail applies",
        },
        measured=[math.exp(fit.B), fit.D],
        reference=[],
        ratio_or_residual=fit.max_residual,
        tolerance=0.0,
        verdict=Verdict.NOT_APPLICABLE,
        provenance="eq9",
    )
    rows = [
        "C,A,max_log_residual",
        f"{math.exp(fit.B):.12g},{fit.D:.12g},{fit.max_residual:.12g}",
    ]
    return report, rows


def _hadamard_curve(
    cfg: RunConfig,
    zeros: list[CriticalZero],
    grid: tuple[int, ...] = HADAMARD_TRUNCATIONS,
) -> tuple[list[int], list[float], list[float], list[float]]:
    spec = ProductSpec(zero_ordinates=tuple(z.gamma for z in zeros))
    xs = np.linspace(-1.0, 2.0, 21)
    targets = np.array([xi(complex(x, 0.0)).real for x in xs])
    truncations = [n for n in grid if n <= len(zeros)]
    misfits, fit_b, fit_d = [], [], []
    for n in truncations:
        fit, worst = fitted_misfit(xs, targets, spec, n)
        misfits.append(worst)
        fit_b.append(fit.B)
        fit_d.append(fit.D)
    return truncations, misfits, fit_b, fit_d


def _run_hadamard(cfg: RunConfig) -> tuple[AuditReport, list[str]]:
    need = min(max(HADAMARD_TRUNCATIONS), cfg.n_zeros)
    zeros = _gather_zeros(cfg, cfg.t_max, need_count=need)
    truncations, misfits, fit_b, fit_d = _hadamard_curve(cfg, zeros)
    non_increasing = all(
        b <= a + 1e-12 for a, b in zip(misfits, misfits[1:])
    )
    final_ok = misfits[-1] < HADAMARD_MISFIT_TOL
    report = AuditReport(
        name="hadamard-product-misfit",
        params={
            "truncations": truncations,
            "fitted_B": fit_b,
            "fitted_D": fit_d,
            "zeros_available": len(zeros),
            "sample_interval": [-1.0, 2.0],
            "samples": 21,
            "non_increasing": non_increasing,
        },
        measured=misfits,
        reference=[HADAMARD_MISFIT_TOL],
        ratio_or_residual=misfits[-1],
        tolerance=HADAMARD_MISFIT_TOL,
        verdict=Verdict.PASS if (non_increasing and final_ok) else Verdict.FAIL,
        provenance="hadamard",
    )
    rows = ["n_factors,max_relative_misfit,fitted_B,fitted_D"]
    rows += [
        f"{n},{m:.12g},{b:.12g},{d:.12g}"
        for n, m, b, d in zip(truncations, misfits, fit_b, fit_d)
    ]
    return report, rows


def _run_coincidence(cfg: RunConfig) -> tuple[AuditReport, list[str]]:
    need = min(max(HADAMARD_TRUNCATIONS), cfg.n_zeros)
    zeros = _gather_zeros(cfg, cfg.t_max, need_count=need)
    spec = ProductSpec(zero_ordinates=tuple(z.gamma for z in zeros))
    n = min(len(zeros), cfg.n_zeros)
    probes = [z.gamma for z in zeros[:COINCIDENCE_PROBES]]
    if cfg.perturb != 0.0:
        probes[0] += cfg.perturb
    report = audit_coincidence(spec, probes, n)
    report.params["perturb"] = cfg.perturb
    rows = ["probe,product_magnitude,is_member"]
    rows += [
        f"{p:.15g},{v:.6e},{m}"
        for p, v, m in zip(probes, report.measured, report.params["probe_is_member"])
    ]
    return report, rows


def _run_carlson(cfg: RunConfig) -> tuple[AuditReport, list[str]]:
    audit = audit_difference(
        CARLSON_INTEGER_COUNT, CARLSON_FIT_SMAX, scale=float(cfg.m)
    )
    verdict_map = {
        Conclusion.IDENTICALLY_ZERO_IMPLIED: Verdict.PASS,
        Conclusion.CONDITIONS_NOT_MET: Verdict.INCONCLUSIVE,
        Conclusion.INCONCLUSIVE: Verdict.INCONCLUSIVE,
    }
    cv = audit.verdict
    report = AuditReport(
        name="difference-function-growth",
        params={
            "conclusion": cv.conclusion.value,
            "alpha_slope": cv.growth.alpha.slope,
            "beta_slope": cv.growth.beta.slope,
            "beta_margin": cv.margin,
            "alpha_finite": cv.alpha_finite,
            "beta_below_pi": cv.beta_below_pi,
            "integer_vanishing": cv.vanishing,
            "integer_scale_m": cfg.m,
            "fit_log_C": audit.eq9_fit.B,
            "fit_A": audit.eq9_fit.D,
            "a": audit.a,
            "b": audit.b,
        },
        measured=list(audit.residuals),
        reference=[1e-9],
        ratio_or_residual=max(audit.residuals) if audit.residuals else 0.0,
        tolerance=1e-9,
        verdict=verdict_map[cv.conclusion],
        provenance="carlson",
    )
    rows = ["n,abs_difference"]
    rows += [
        f"{cfg.m * (k + 1)},{r:.12g}" for k, r in enumerate(audit.residuals)
    ]
    return report, rows


_AUDIT_RUNNERS = {
    "eq5": _run_eq5,
    "eq9": _run_eq9,
    "hadamard": _run_hadamard,
    "coincidence": _run_coincidence,
    "carlson": _run_carlson,
}


def _metadata(cfg: RunConfig) -> dict:
    t_scan = max(cfg.t_max, _t_for_zero_count(min(max(HADAMARD_TRUNCATIONS), cfg.n_zeros)))
    return {
        "tool": "xispec",
        "version": __version__,
        "em_order_cap": EM_ORDER_CAP,
        "em_terms_cap": EM_TERMS_CAP,
        "em_truncation_at_scan_top": em_truncation(complex(0.5, t_scan)),
        "norm_coefficients": {
            "claimed": CLAIMED_NORM_COEFF,
            "standard": STANDARD_NORM_COEFF,
        },
        # thread count deliberately omitted: parallelism must not change
        # any output byte, so it is not part of the report's identity.
        "config": {
            "t_max": cfg.t_max,
            "tol": cfg.tol,
            "n_zeros": cfg.n_zeros,
            "perturb": cfg.perturb,
            "m": cfg.m,
        },
    }


# ----------------------------- subcommands -----------------------------


def _cmd_zeros(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    zeros = _gather_zeros(cfg, cfg.t_max)
    rows = [f"{z.index},{z.gamma:.15g},{z.abs_err:.3e}" for z in zeros]
    for row in rows:
        print(row)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("n,gamma,abs_err\n")
            handle.write("".join(row + "\n" for row in rows))
    check = zero_count_estimate(cfg.t_max)
    print(
        f"# {len(zeros)} zeros <= {cfg.t_max:g} (count estimate {check})",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_audit(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    names = list(_AUDIT_NAMES) if args.which == "all" else [args.which]
    out_dir = cfg.out or "reports"
    os.makedirs(out_dir, exist_ok=True)

    reports: list[AuditReport] = []
    for name in names:
        report, rows = _AUDIT_RUNNERS[name](cfg)
        reports.append(report)
        if cfg.format == "json":
            write_report(report, os.path.join(out_dir, f"audit_{name}.json"))
        else:
            with open(
                os.path.join(out_dir, f"audit_{name}.csv"),
                "w",
                encoding="utf-8",
                newline="\n",
            ) as handle:
                handle.write("".join(row + "\n" for row in rows))
        flag = " (flagged)" if report.verdict in (
            Verdict.INCONCLUSIVE,
            Verdict.NOT_APPLICABLE,
        ) else ""
        print(
            f"{report.name}: {_verdict_text(report.verdict)}{flag} "
            f"[residual {report.ratio_or_residual:.6g}, tol {report.tolerance:g}]"
        )

    if args.which == "all":
        if cfg.format == "json":
            write_aggregate(
                reports, _metadata(cfg), os.path.join(out_dir, "audit_all.json")
            )
        else:
            with open(
                os.path.join(out_dir, "audit_all.csv"),
                "w",
                encoding="utf-8",
                newline="\n",
            ) as handle:
                handle.write("".join(r + "\n" for r in report_csv_rows(reports)))

    if any(r.failed for r in reports):
        return EXIT_AUDIT_FAILURE
    return EXIT_OK


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo_s, hi_s = text.split(":", 1)
        lo, hi = float(lo_s), float(hi_s)
    except ValueError as exc:
        raise ConfigError(f"bad range {text!r}, expected a:b") from exc
    if not (hi > lo):
        raise ConfigError(f"empty plot range {text!r}")
    return lo, hi


def _cmd_plot(args: argparse.Namespace) -> int:
    from .svgplot import render_line_plot

    cfg = _config_from_args(args)
    out = cfg.out or f"{args.target}.svg"
    if args.target == "xi-critical":
        lo, hi = _parse_range(args.t or "0:30")
        ts = np.linspace(lo, hi, 601)
        ys = [xi_critical(float(t)) for t in ts]
        svg = render_line_plot(
            list(ts), ys, title="Xi on the critical line", xlabel="t",
            ylabel="Xi(t)",
        )
    elif args.target == "eq5-ratio":
        orders = [BesselOrder.real_order(k / 10.0) for k in range(1, 10)]
        orders += [BesselOrder.imaginary_order(m) for m in (0.5, 1.0, 2.0)]
        audits = audit_eq5(orders)
        xs = list(range(1, len(audits) + 1))
        ys = [a.ratio if a.ratio is not None else float("nan") for a in audits]
        svg = render_line_plot(
            xs, ys, title="norm-integral ratio per order",
            xlabel="order index (real 0.1..0.9, then imaginary 0.5,1,2)",
            ylabel="quadrature / closed form",
        )
    elif args.target == "product-convergence":
        zeros = _gather_zeros(
            cfg, cfg.t_max, need_count=min(max(HADAMARD_TRUNCATIONS), cfg.n_zeros)
        )
        truncations, misfits, _, _ = _hadamard_curve(
            cfg, zeros, grid=(10, 25) + HADAMARD_TRUNCATIONS
        )
        svg = render_line_plot(
            [float(n) for n in truncations],
            misfits,
            title="product misfit vs truncation",
            xlabel="factors",
            ylabel="max relative misfit",
            logy=True,
        )
    elif args.target == "residuals":
        audit = audit_difference(
            CARLSON_INTEGER_COUNT, CARLSON_FIT_SMAX, scale=float(cfg.m)
        )
        svg = render_line_plot(
            [float(cfg.m * (k + 1)) for k in range(len(audit.residuals))],
            list(audit.residuals),
            title="difference-function residuals at integer points",
            xlabel="n",
            ylabel="|d(n)|",
            logy=True,
        )
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown plot target {args.target!r}")

    with open(out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(svg)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    import json

    paths = args.paths
    if not paths:
        out_dir = args.out or "reports"
        paths = sorted(
            os.path.join(out_dir, p)
            for p in os.listdir(out_dir)
            if p.endswith(".json")
        )
    failed = False
    for path in paths:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        entries = payload["audits"] if "audits" in payload else [payload]
        for entry in entries:
            report = AuditReport.from_dict(entry)
            failed = failed or report.failed
            print(
                f"{os.path.basename(path)}: {report.name}: "
                f"{_verdict_text(report.verdict)} "
                f"[residual {report.ratio_or_residual:.6g}]"
            )
    return EXIT_AUDIT_FAILURE if failed else EXIT_OK


# ------------------------------- plumbing -------------------------------


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-max", dest="t_max", type=float, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--n-zeros", dest="n_zeros", type=int, default=None)
    parser.add_argument("--perturb", type=float, default=None)
    parser.add_argument("--m", type=int, default=None, help="integer grid scale")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    parser.add_argument("--out", default=None)
    parser.add_argument("--cache", default=None)
    parser.add_argument("--config", default=None, help="flat key = value file")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        key: getattr(args, key, None)
        for key in (
            "t_max",
            "tol",
            "n_zeros",
            "perturb",
            "m",
            "threads",
            "format",
            "out",
            "cache",
        )
    }
    return build_config(getattr(args, "config", None), overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xispec",
        description=(
            "critical-line zeros of the completed xi function and numerical "
            "audits of the coupling-spectrum identification"
        ),
    )
    parser.add_argument("--version", action="version", version=f"xispec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_zeros = sub.add_parser("zeros", help="scan and refine critical-line zeros")
    _add_common_flags(p_zeros)
    p_zeros.set_defaults(func=_cmd_zeros)

    p_audit = sub.add_parser("audit", help="run one audit or all of them")
    p_audit.add_argument("which", choices=_AUDIT_NAMES + ("all",))
    _add_common_flags(p_audit)
    p_audit.set_defaults(func=_cmd_audit)

    p_plot = sub.add_parser("plot", help="emit a static SVG plot")
    p_plot.add_argument(
        "target",
        choices=("xi-critical", "eq5-ratio", "product-convergence", "residuals"),
    )
    p_plot.add_argument("--t", default=None, help="range a:b for xi-critical")
    _add_common_flags(p_plot)
    p_plot.set_defaults(func=_cmd_plot)

    p_report = sub.add_parser("report", help="summarize existing report files")
    p_report.add_argument("paths", nargs="*")
    p_report.add_argument("--out", default=None)
    p_report.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"xispec: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CacheCorruptionError as exc:
        print(f"xispec: cache corruption: {exc}", file=sys.stderr)
        return EXIT_CACHE_CORRUPTION
    except (
        NonConvergenceError,
        AccuracyError,
        DivergenceError,
        RealnessError,
    ) as exc:
        print(f"xispec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except XispecError as exc:
        print(f"xispec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

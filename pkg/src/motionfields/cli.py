"""Configuration-driven entry point.

``motionfields run --scenario m3-default --output-dir out`` builds the
instance, runs the five-condition verification plan and the bundled
convergence queries, and writes:

* ``reports.json``      -- condition reports and the overall verdict
* ``convergence.json``  -- one certificate per convergence query
* ``norms.csv``         -- operator and HS norms per sampled dual point
* ``mu_decay.csv``, ``lambda_decay.csv``, ``h_ladder.csv``,
  ``continuity.csv``    -- two-column curve data extracted from witnesses

Exit status: 0 overall pass, 1 overall fail, 2 invalid configuration,
3 runtime error in a module.  Outputs are deterministic for a fixed
scenario (floats printed at 12 significant digits).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import ScenarioConfig, dump_json
from .dual import converges, make_dual_point
from .errors import ConfigError, MotionFieldsError
from .fourier import hs_norm, operator_norm
from .scenarios import BUNDLED_NAMES, bundled_scenario
from .verifier import run_verification

OUTPUT_DIR_ENV = "MOTIONFIELDS_OUTDIR"


def _fmt(x):
    return f"{float(x):.12g}"


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")


def _label_str(label):
    if isinstance(label, tuple):
        return "(" + ";".join(str(x) for x in label) + ")"
    return str(label)


def _norms_rows(samples):
    rows = []
    for name, sample in samples.items():
        for p in sample.grid:
            T = sample.operators[p]
            rows.append(
                (
                    name,
                    p.stratum,
                    _label_str(p.label),
                    "(" + ";".join(_fmt(h) for h in p.H) + ")" if p.H else "0",
                    _fmt(operator_norm(T)),
                    _fmt(hs_norm(T)),
                )
            )
    return rows


def emit_plot_data(report, samples, outdir):
    """Two-column CSV per decay/continuity curve, from the check witnesses."""
    by_cond = {r.condition: r for r in report.reports}
    written = []

    mu_rows = [
        (_label_str(w["mu"]), _fmt(w["norm"])) for w in by_cond[3].witnesses
    ]
    path = outdir / "mu_decay.csv"
    _write_csv(path, ["mu", "op_norm"], mu_rows)
    written.append(path)

    lam_rows = [
        (_label_str(w["lambda"]), _fmt(w["norm"])) for w in by_cond[5].witnesses
    ]
    path = outdir / "lambda_decay.csv"
    _write_csv(path, ["lambda", "op_norm"], lam_rows)
    written.append(path)

    ladder_rows = [
        (_label_str(w["mu"]), w["j"], _fmt(w["delta"]))
        for w in by_cond[4].witnesses
    ]
    path = outdir / "h_ladder.csv"
    _write_csv(path, ["mu", "level", "delta_op_norm"], ladder_rows)
    written.append(path)

    cont_rows = [
        (_fmt(w["step"]), _fmt(w["difference"])) for w in by_cond[2].witnesses
    ]
    path = outdir / "continuity.csv"
    _write_csv(path, ["step", "difference_op_norm"], cont_rows)
    written.append(path)
    return written


def run_convergence_queries(pair, queries):
    out = []
    for i, q in enumerate(queries):
        lim = q["limit"]
        limit = make_dual_point(
            pair,
            _label_in(lim["label"]),
            lim.get("H"),
        )
        seq = [
            make_dual_point(pair, _label_in(e["label"]), e.get("H"))
            for e in q["sequence"]
        ]
        cert = converges(pair, seq, limit)
        out.append(
            {
                "name": q.get("name", f"query-{i}"),
                "limit": {"stratum": limit.stratum, "label": _label_str(limit.label)},
                "verdict": "converges" if cert.verdict else "diverges",
                "tail_index": cert.tail_index,
                "evidence": cert.evidence,
            }
        )
    return out


def _label_in(x):
    return tuple(int(v) for v in x) if isinstance(x, list) else int(x)


def run_scenario(config: ScenarioConfig, outdir, threads=1):
    """Execute a scenario and write all artifact files; returns the report."""
    pair = config.build_pair()
    f = config.build_test_function(pair)
    plan = config.build_plan()
    thresholds = config.build_thresholds()

    report, samples = run_verification(f, pair, plan, thresholds, threads=threads)
    certificates = run_convergence_queries(pair, config.convergence_queries)

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "reports.json").write_text(dump_json(report.to_dict()))
    (outdir / "convergence.json").write_text(dump_json(certificates))
    _write_csv(
        outdir / "norms.csv",
        ["grid", "stratum", "label", "H", "op_norm", "hs_norm"],
        _norms_rows(samples),
    )
    emit_plot_data(report, samples, outdir)
    return report, certificates


def load_scenario(spec):
    """A bundled name or a path to a JSON scenario document."""
    if spec in BUNDLED_NAMES:
        return ScenarioConfig.from_dict(bundled_scenario(spec))
    path = Path(spec)
    if not path.exists():
        raise ConfigError(
            "scenario",
            f"{spec!r} is neither a bundled scenario ({', '.join(BUNDLED_NAMES)}) "
            "nor an existing file",
        )
    return ScenarioConfig.from_json(path.read_text())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="motionfields",
        description="Operator fields over motion-group duals: verification runs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a scenario and write artifacts")
    run_p.add_argument(
        "--scenario", required=True, help="bundled name or path to scenario JSON"
    )
    run_p.add_argument(
        "--output-dir",
        default=None,
        help=f"artifact directory (default: scenario value, then ${OUTPUT_DIR_ENV}, then ./out)",
    )
    run_p.add_argument(
        "--threads", type=int, default=1, help="worker threads for grid evaluation"
    )
    run_p.add_argument(
        "--override-tolerance",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override a verdict threshold (repeatable)",
    )
    sub.add_parser("list-scenarios", help="print bundled scenario names")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list-scenarios":
        for name in BUNDLED_NAMES:
            print(name)
        return 0
    try:
        config = load_scenario(args.scenario)
        for item in args.override_tolerance:
            if "=" not in item:
                raise ConfigError("override-tolerance", f"expected NAME=VALUE, got {item!r}")
            k, v = item.split("=", 1)
            config.tolerances[k] = float(v)
        config.build_thresholds()  # validate overrides early
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except TypeError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2

    outdir = (
        args.output_dir
        or config.output_dir
        or os.environ.get(OUTPUT_DIR_ENV)
        or "out"
    )
    try:
        report, certificates = run_scenario(config, outdir, threads=args.threads)
    except MotionFieldsError as e:
        print(f"run failed: {type(e).__name__}: {e}", file=sys.stderr)
        return 3
    for r in report.reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"condition {r.condition} ({r.name}): {status}")
    for c in certificates:
        print(f"convergence {c['name']}: {c['verdict']}")
    print(f"overall: {'PASS' if report.overall else 'FAIL'}  (artifacts in {outdir})")
    return 0 if report.overall else 1


if __name__ == "__main__":
    sys.exit(main())

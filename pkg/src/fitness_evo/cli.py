"""Command-line front end: analyze / simulate / verify / scenario.

Configs are JSON (schema in README.md).  Exit codes: 0 success, 1
verification failure, 2 usage or config error.  Infinite values are emitted
as the strings "+inf" / "-inf" since JSON has no infinity literal.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import analytics, simulate, verify
from .errors import FitnessEvoError, RegimeError
from .increments import Deterministic, IncrementLaw, ZetaLike
from .measure import BorelSet, FitnessMeasure
from .population import write_snapshot
from .simulate import Observable, SimConfig

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _jsonable(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "+inf" if v > 0 else "-inf"
        if math.isnan(v):
            return None
    return v


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FitnessEvoError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FitnessEvoError(f"config {path} is not valid JSON: {exc}") from exc


def _parse_fraction(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise FitnessEvoError(f"cannot parse number {text!r}") from exc


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def analysis_report(measure: FitnessMeasure, law: IncrementLaw) -> dict:
    mx, my = law.mean_x, law.mean_y
    ratio = math.inf if math.isinf(my) else (0.0 if math.isinf(mx) else my / mx)
    fc = analytics.critical_fitness(measure, law)
    report: dict = {
        "f_c": _jsonable(fc),
        "ratio": _jsonable(ratio),
        "mean_x": _jsonable(mx),
        "mean_y": _jsonable(my),
    }
    if math.isfinite(fc):
        report["F_at_fc"] = measure.cdf(fc)
        report["F_left_at_fc"] = measure.cdf_left(fc)
        report["drift_at_fc"] = _jsonable(law.drift(measure.cdf(fc)))
        report["drift_left_at_fc"] = _jsonable(law.drift(measure.cdf_left(fc)))
        verdict, drift = analytics.survival_verdict(measure, law, fc)
        report["verdict_at_fc"] = verdict
        recurrence = {}
        for label, include in (("closed", True), ("open", False)):
            try:
                cls = analytics.classify_left_interval(measure, law, fc, include_f=include)
                recurrence[label] = {"class": cls.tag, "drift": _jsonable(cls.drift)}
            except FitnessEvoError:
                recurrence[label] = None
        report["recurrence"] = recurrence
    else:
        report.update({"F_at_fc": None, "F_left_at_fc": None, "drift_at_fc": None,
                       "drift_left_at_fc": None, "verdict_at_fc": None, "recurrence": None})

    shape = analytics.shape_law(measure, law)
    if shape.defined:
        grid = np.linspace(0.0, 1.0, 101)
        report["shape"] = {
            "defined": True,
            "atom_at_fc": shape.atom_at_fc,
            "continuous_factor": shape.continuous_factor,
            "cdf_samples": [[float(f), shape.cdf(float(f))] for f in grid],
        }
    else:
        report["shape"] = {"defined": False, "atom_at_fc": None,
                           "continuous_factor": None, "cdf_samples": None}

    try:
        kr = analytics.killing_report(measure, law)
        report["kill_report"] = {
            "below": {"rate": kr.below.rate, "total_finite": kr.below.total_finite},
            "at_critical": {"rate": kr.at_critical.rate, "total_finite": kr.at_critical.total_finite},
            "above": {"rate": kr.above.rate, "total_finite": kr.above.total_finite},
            "at_or_above_rate": kr.at_or_above_rate,
            "at_or_above_diverges": kr.at_or_above_diverges,
        }
    except RegimeError:
        report["kill_report"] = None
    return report


def cmd_analyze(args) -> int:
    cfg = _load_config(args.config)
    measure = FitnessMeasure.from_config(cfg.get("measure", {}))
    law = IncrementLaw.from_config(cfg.get("increments", {}))
    json.dump(analysis_report(measure, law), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def run_simulation(cfg: SimConfig, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    result = simulate.replicate(cfg)
    written = []
    for i, rec in enumerate(result.records):
        path = out_dir / f"trajectory_{i:03d}.csv"
        with open(path, "w") as fh:
            rec.write_csv(fh)
        written.append(path)
        for step, (keys, counts) in sorted(rec.snapshots.items()):
            spath = out_dir / f"snapshot_{i:03d}_n{step}.csv"
            with open(spath, "w") as fh:
                write_snapshot(fh, step, int(counts.sum()), zip(keys.tolist(), counts.tolist()))
            written.append(spath)
    apath = out_dir / "aggregate.json"
    with open(apath, "w") as fh:
        json.dump({"config": cfg.to_config(), "aggregate": result.to_json_dict()}, fh, indent=2)
        fh.write("\n")
    written.append(apath)
    return written


def cmd_simulate(args) -> int:
    cfg = SimConfig.from_config(_load_config(args.config))
    if args.thin is not None:
        cfg = replace(cfg, stride=args.thin)
    out_dir = Path(args.out)
    try:
        written = run_simulation(cfg, out_dir)
    except OSError as exc:
        raise FitnessEvoError(f"cannot write to {out_dir}: {exc}") from exc
    for path in written:
        print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, seed=args.seed)
    for r in results:
        print(r.line())
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} checks passed")
    return EXIT_OK if n_pass == len(results) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# scenario presets
# ---------------------------------------------------------------------------

GMS_TABLE_PS = tuple(p for p, *_ in verify.GMS_ROWS)


def _preset_config(args) -> tuple[SimConfig, dict]:
    """Build (SimConfig, extras) for the named preset; extras drive side reports."""
    horizon = args.horizon
    preset = args.preset
    if preset == "gms-table":
        p = _parse_fraction(args.p) if args.p else 2 / 3
        if not any(abs(p - known) < 1e-12 for known in GMS_TABLE_PS) and not 0.5 < p < 1.0:
            raise FitnessEvoError(f"gms-table p={p} must be a table row or lie in (1/2, 1)")
        cfg = SimConfig(
            measure=FitnessMeasure.atom_uniform_mix(0.5),
            law=IncrementLaw.gms(p),
            horizon=horizon or 200_000, seed=args.seed, replicas=args.replicas,
            observables=(Observable("below_half", BorelSet.interval(0.0, 0.5)),
                         Observable("above_half", BorelSet.interval(0.5, 1.0, False, True))),
        )
        return replace(cfg, snapshot_steps=(cfg.horizon,)), {}
    if preset == "markov-table":
        if args.p is None or args.q is None:
            raise FitnessEvoError("markov-table requires --p and --q")
        p, q = _parse_fraction(args.p), _parse_fraction(args.q)
        if not p > q:
            raise FitnessEvoError(f"markov-table needs p > q, got p={p}, q={q}")
        cfg = SimConfig(
            measure=FitnessMeasure.atom_uniform_mix(0.5),
            law=IncrementLaw.markov(p, q),
            horizon=horizon or 200_000, seed=args.seed, replicas=args.replicas,
            observables=(Observable("below_half", BorelSet.interval(0.0, 0.5)),
                         Observable("above_half", BorelSet.interval(0.5, 1.0, False, True))),
        )
        return replace(cfg, snapshot_steps=(cfg.horizon,)), {}
    if preset == "bp-demo":
        cfg = SimConfig(
            measure=FitnessMeasure.uniform(),
            law=IncrementLaw.bp(Deterministic(2)),
            horizon=horizon or 2000, seed=args.seed, replicas=args.replicas,
            observables=(Observable("subcritical_range", BorelSet.interval(0.0, 0.75)),),
        )
        return cfg, {"bp_mc": {"f": 0.75, "replicas": 10_000}}
    if preset == "heavy-tail":
        cfg = SimConfig(
            measure=FitnessMeasure.uniform(),
            law=IncrementLaw.bp(ZetaLike(2.0)),
            horizon=horizon or 100_000, seed=args.seed, replicas=args.replicas,
            observables=(Observable("low_band", BorelSet.interval(0.0, 0.3)),),
        )
        return replace(cfg, snapshot_steps=(cfg.horizon,)), {}
    if preset == "counterexample":
        cfg = SimConfig(
            measure=FitnessMeasure.uniform(),
            law=simulate.build_counterexample_law(args.k_max),
            horizon=horizon or 20_000, seed=args.seed, replicas=args.replicas,
            observables=(Observable("low_band", BorelSet.interval(0.0, 0.3)),),
        )
        return cfg, {"counterexample_demo": {"k_max": args.k_max, "seeds": 50}}
    raise FitnessEvoError(f"unknown preset {preset!r}")


def cmd_scenario(args) -> int:
    cfg, extras = _preset_config(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg_path = out_dir / "config.json"
    with open(cfg_path, "w") as fh:
        json.dump(cfg.to_config(), fh, indent=2)
        fh.write("\n")
    written = [cfg_path] + run_simulation(cfg, out_dir)
    if "bp_mc" in extras:
        opts = extras["bp_mc"]
        q = analytics.bp_extinction(cfg.measure, cfg.law, opts["f"])
        freq = simulate.bp_hit_zero_frequency(cfg.measure, cfg.law, opts["f"],
                                              horizon=cfg.horizon, replicas=opts["replicas"],
                                              seed=cfg.seed)
        path = out_dir / "bp_mc.json"
        with open(path, "w") as fh:
            json.dump({"f": opts["f"], "extinction_probability": q,
                       "hit_zero_frequency": freq, "replicas": opts["replicas"],
                       "horizon": cfg.horizon}, fh, indent=2)
            fh.write("\n")
        written.append(path)
    if "counterexample_demo" in extras:
        opts = extras["counterexample_demo"]
        demo = simulate.counterexample_demo(opts["k_max"], cfg.horizon,
                                            range(opts["seeds"]),
                                            cfg.observables[0].borel, cfg.measure)
        path = out_dir / "counterexample_demo.json"
        with open(path, "w") as fh:
            json.dump({"runs": demo,
                       "any_dominant": any(r["max_ratio"] > 0.9 for r in demo)}, fh, indent=2)
            fh.write("\n")
        written.append(path)
    for path in written:
        print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fitness-evo",
        description="Simulate the batch-birth / least-fit-removal evolution model "
                    "and compute its exact asymptotics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="closed-form report for a model config")
    p_an.add_argument("config")
    p_an.set_defaults(fn=cmd_analyze)

    p_sim = sub.add_parser("simulate", help="run trajectories and write CSV/JSON outputs")
    p_sim.add_argument("config")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--thin", type=int, default=None,
                       help="record every k-th step instead of the default schedule")
    p_sim.set_defaults(fn=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run a built-in verification suite")
    p_ver.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.set_defaults(fn=cmd_verify)

    p_sc = sub.add_parser("scenario", help="run a named preset end to end")
    p_sc.add_argument("preset", choices=["gms-table", "markov-table", "bp-demo",
                                         "heavy-tail", "counterexample"])
    p_sc.add_argument("--out", required=True)
    p_sc.add_argument("--p", default=None, help="birth parameter (accepts fractions like 8/15)")
    p_sc.add_argument("--q", default=None, help="death parameter for markov-table")
    p_sc.add_argument("--horizon", type=int, default=None)
    p_sc.add_argument("--seed", type=int, default=0)
    p_sc.add_argument("--replicas", type=int, default=1)
    p_sc.add_argument("--k-max", type=int, default=4, dest="k_max")
    p_sc.set_defaults(fn=cmd_scenario)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FitnessEvoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: simulate, detect, train, classify, evaluate, sweep.

Exit codes: 0 success, 1 usage error, 2 data or validation error. Results go
to stdout; the fully-resolved parameter echo and errors go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bundled import bundled_supro_dir, data_dir
from .detect import DetectionConfig, ReferencePattern, detect
from .dtw import build_mode_references, classify_dtw
from .errors import InvalidInputError, InvalidParameterError, SuplabError
from .evaluate import ApplianceSpec, compare_methods, detection_sweep
from .io import read_day_series, read_training_csv, write_training_csv
from .omicc import OmiccParams, TrainingSet, build_training_set, omicc_classify
from .simulate import (
    ApplianceConfig,
    IntensityDistribution,
    LabeledDataset,
    SimTuning,
    TurnOnDistribution,
    generate_dataset,
    load_dataset,
)
from .supro import load_library

DEFAULT_SEED = 42


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _echo(args: argparse.Namespace) -> None:
    resolved = {k: str(v) for k, v in sorted(vars(args).items()) if k != "func"}
    print("config: " + json.dumps(resolved, sort_keys=True), file=sys.stderr)


def _seed(value) -> int:
    if value is not None:
        return value
    return int(os.environ.get("SUPLAB_SEED", DEFAULT_SEED))


def _tuning(args, config: dict) -> SimTuning:
    section = config.get("tuning", {})

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return section.get(key, default)

    return SimTuning(
        alpha_sigma=pick(args.alpha_sigma, "alpha_sigma", 0.2),
        beta_sigma=pick(args.beta_sigma, "beta_sigma", 0.2),
        gamma=pick(args.gamma, "gamma", 40.0),
        smoother_window=pick(args.smoother_window, "smoother_window", 5),
    )


def _turn_on_for(name: str, config: dict) -> TurnOnDistribution:
    entry = config.get("appliances", {}).get(name, {})
    if "turn_on_pdf" in entry:
        return TurnOnDistribution(np.asarray(entry["turn_on_pdf"], dtype=np.float64))
    if "turn_on_weights" in entry:
        w = np.asarray(entry["turn_on_weights"], dtype=np.float64)
        return TurnOnDistribution(w / w.sum())
    bundled = json.loads((data_dir() / "benchmark.json").read_text(encoding="utf-8"))
    entry = bundled.get("appliances", {}).get(name, {})
    if "turn_on_weights" in entry:
        w = np.asarray(entry["turn_on_weights"], dtype=np.float64)
        return TurnOnDistribution(w / w.sum())
    return TurnOnDistribution.uniform()


def _omicc_params(args) -> OmiccParams:
    return OmiccParams(
        half_window=args.ell,
        zeta=args.zeta,
        smoother_window=args.smoother_window if args.smoother_window else 5,
        clusters=args.clusters,
        neighbors=args.neighbors,
    )


def cmd_simulate(args) -> int:
    config = json.loads(Path(args.config).read_text(encoding="utf-8")) if args.config else {}
    seed = _seed(args.seed if args.seed is not None else config.get("seed"))
    args.seed = seed
    _echo(args)
    tuning = _tuning(args, config)
    intensity_name = args.intensity or config.get("intensity", "Medium")
    intensity = IntensityDistribution.for_intensity(intensity_name)
    supro_dir = Path(args.supro_dir) if args.supro_dir else bundled_supro_dir()
    library = load_library(supro_dir)
    if not library:
        raise InvalidInputError(f"no SUPRO files found in {supro_dir}")
    appliances = [
        ApplianceConfig(name, modes, _turn_on_for(name, config), intensity)
        for name, modes in sorted(library.items())
    ]
    dataset = generate_dataset(
        appliances, args.days, tuning, seed, args.out,
        intensity_tag=intensity.intensity, jobs=args.jobs,
    )
    print(f"{len(dataset.records)} day files in {args.out}")
    return 0


def cmd_detect(args) -> int:
    _echo(args)
    day = read_day_series(args.day)
    ref = ReferencePattern(read_day_series(args.ref))
    result = detect(ref, day, DetectionConfig(args.delta), keep_trace=args.trace is not None)
    if args.trace:
        lines = ["t,X,Xbar"]
        lines.extend(
            f"{t},{x:.6f},{r:.6f}" for t, (x, r) in enumerate(zip(result.xcorr, result.residue))
        )
        Path(args.trace).write_text("\n".join(lines) + "\n", encoding="utf-8")
    for t in result.turn_ons:
        print(t)
    return 0


def cmd_train(args) -> int:
    _echo(args)
    dataset = load_dataset(args.dataset)
    training, skipped = build_training_set(dataset, _omicc_params(args), args.appliance)
    write_training_csv(args.out, training.features, list(training.labels))
    print(f"{len(training)} observations ({skipped} skipped) -> {args.out}")
    return 0


def cmd_classify(args) -> int:
    _echo(args)
    day = read_day_series(args.day)
    if args.method == "dtw":
        if not args.refs:
            raise InvalidParameterError("--refs is required for --method dtw")
        library = load_library(args.refs)
        if len(library) != 1:
            raise InvalidInputError(
                f"--refs must hold exactly one appliance, found {sorted(library)}"
            )
        (name, supros), = library.items()
        refs = build_mode_references(supros, args.smoother_window or 5)
        result = classify_dtw(day, args.t_on, refs)
        for mode, dist in result.distances.items():
            print(f"{mode},{dist:.6f}")
        print(result.chosen_mode)
    else:
        if not args.train:
            raise InvalidParameterError("--train is required for --method omicc")
        features, labels = read_training_csv(args.train)
        training = TrainingSet(features, tuple(labels))
        print(omicc_classify(day, args.t_on, training, _omicc_params(args)))
    return 0


def _split_dataset(dataset: LabeledDataset, frac: float):
    by_app: dict[str, list] = {}
    for rec in dataset.records:
        by_app.setdefault(rec.appliance, []).append(rec)
    train, test = [], []
    for name in sorted(by_app):
        records = by_app[name]
        cut = max(1, int(round(frac * len(records))))
        if cut >= len(records):
            cut = len(records) - 1
        train.extend(records[:cut])
        test.extend(records[cut:])
    return (
        LabeledDataset(dataset.root, train, dataset.intensity),
        LabeledDataset(dataset.root, test, dataset.intensity),
    )


def cmd_evaluate(args) -> int:
    _echo(args)
    dataset = load_dataset(args.dataset, args.intensity)
    names = sorted({r.appliance for r in dataset.records})
    library = load_library(args.refs)
    missing = [n for n in names if n not in library]
    if missing:
        raise InvalidInputError(f"--refs is missing appliances {missing}")
    smoother = args.smoother_window or 5
    refs_by_app = {n: build_mode_references(library[n], smoother) for n in names}
    params = _omicc_params(args)

    test_set = dataset
    training_by_app: dict[str, TrainingSet] = {}
    if args.train:
        pairs = []
        for item in args.train:
            if "=" in item:
                name, path = item.split("=", 1)
                pairs.append((name, path))
            elif len(names) == 1:
                pairs.append((names[0], item))
            else:
                raise InvalidParameterError(
                    "--train needs appliance=path entries for multi-appliance datasets"
                )
        for name, path in pairs:
            feats, labels = read_training_csv(path)
            training_by_app[name] = TrainingSet(feats, tuple(labels), name)
        missing = [n for n in names if n not in training_by_app]
        if missing:
            raise InvalidInputError(f"--train is missing appliances {missing}")
    else:
        train_set, test_set = _split_dataset(dataset, args.train_frac)
        for name in names:
            training_by_app[name], _ = build_training_set(train_set, params, name)

    report = compare_methods(test_set, refs_by_app, training_by_app, params, jobs=args.jobs)
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    if args.plot_data:
        from . import plots

        plots.write_method_comparison(report, args.plot_data)
        plots.write_intensity_breakdown(report, args.plot_data)
    print(report.to_text(), end="")
    return 0


def cmd_sweep(args) -> int:
    seed = _seed(args.seed)
    args.seed = seed
    _echo(args)
    supro_dir = Path(args.supro_dir) if args.supro_dir else bundled_supro_dir()
    library = load_library(supro_dir)
    if args.appliance not in library:
        raise InvalidInputError(f"appliance {args.appliance!r} not in {supro_dir}")
    spec = ApplianceSpec(args.appliance, library[args.appliance], _turn_on_for(args.appliance, {}))
    sizes = [int(s) for s in args.sizes.split(",")]
    table = detection_sweep(spec, sizes, args.days, seed, args.delta)
    if args.out:
        lines = ["n,mean_detected"] + [f"{n},{table[n]:.6f}" for n in sizes]
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.plot_data:
        from . import plots

        plots.write_sweep({args.appliance: table}, args.plot_data)
    for n in sizes:
        print(f"{n},{table[n]:.6f}")
    return 0


def _add_omicc_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ell", type=int, default=20, help="step-test half window")
    p.add_argument("--zeta", type=int, default=2, help="edge threshold multiplier")
    p.add_argument("--clusters", type=int, default=3, help="cycle clusters")
    p.add_argument("--neighbors", type=int, default=5, help="KNN neighbors")


def build_parser() -> _Parser:
    parser = _Parser(prog="suplab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a labeled synthetic dataset")
    p.add_argument("--supro-dir", help="SUPRO library directory (default: bundled)")
    p.add_argument("--days", type=int, required=True, help="days per appliance")
    p.add_argument("--intensity", choices=["low", "medium", "high", "Low", "Medium", "High"])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output dataset directory")
    p.add_argument("--config", help="JSON config with pdfs/tuning overrides")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--gamma", type=float, help="idle noise ceiling in watts")
    p.add_argument("--alpha-sigma", type=float, dest="alpha_sigma")
    p.add_argument("--beta-sigma", type=float, dest="beta_sigma")
    p.add_argument("--smoother-window", type=int, dest="smoother_window")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("detect", help="find turn-on times in a day series")
    p.add_argument("--day", required=True)
    p.add_argument("--ref", required=True, help="reference pattern CSV (t,power)")
    p.add_argument("--delta", type=float, default=0.90)
    p.add_argument("--trace", help="write t,X,Xbar CSV here")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("train", help="build an OMICC training set from a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--appliance", help="required when the dataset mixes appliances")
    p.add_argument("--smoother-window", type=int, dest="smoother_window")
    _add_omicc_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify one usage at a known turn-on")
    p.add_argument("--method", choices=["dtw", "omicc"], required=True)
    p.add_argument("--day", required=True)
    p.add_argument("--t-on", type=int, required=True, dest="t_on")
    p.add_argument("--refs", help="SUPRO directory for one appliance (dtw)")
    p.add_argument("--train", help="training CSV (omicc)")
    p.add_argument("--smoother-window", type=int, dest="smoother_window")
    _add_omicc_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="compare both classifiers on a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--refs", required=True, help="SUPRO library directory")
    p.add_argument("--train", action="append", help="training CSV or appliance=path")
    p.add_argument("--train-frac", type=float, default=0.67, dest="train_frac",
                   help="split fraction when no --train is given")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--plot-data", dest="plot_data", help="write figure CSVs and PNGs here")
    p.add_argument("--intensity", help="intensity tag for the breakdown")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--smoother-window", type=int, dest="smoother_window")
    _add_omicc_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="detection count vs reference pattern size")
    p.add_argument("--appliance", required=True)
    p.add_argument("--supro-dir", help="SUPRO library directory (default: bundled)")
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--days", type=int, default=50)
    p.add_argument("--seed", type=int)
    p.add_argument("--delta", type=float, default=0.90)
    p.add_argument("--out", help="write n,mean_detected CSV here")
    p.add_argument("--plot-data", dest="plot_data")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SuplabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

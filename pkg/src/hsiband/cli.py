"""Command-line pipeline: synthesize suites, preprocess them, run
evaluation scenarios, and pretty-print report files.

Exit codes: 0 on success, 1 on usage errors (bad flags, malformed
configuration), 2 on data errors (missing or unreadable inputs, invalid
values at run time).  Progress and summaries go to standard error; data
goes to files or standard output.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import Callable, Sequence

from .data import (
    DataError,
    LabeledDataset,
    SceneImage,
    extract_labeled,
    merge_datasets,
)
from .ga import FitnessError, GaConfig
from .grids import GRID_CLASSIFIERS, desk_grids, paper_grids
from .io import FormatError, read_suite, write_suite
from .preprocess import (
    DEFAULT_REMOVED_BANDS,
    BandTranslation,
    PreprocessConfig,
    apply_chain,
    median_filter,
    preprocess_cube,
)
from .scenarios import (
    REPORT_HEADER,
    ScenarioConfig,
    ScenarioError,
    SelectionMethod,
    format_report,
    run_scenario,
    write_reports,
)
from .synth import SceneRecipe, generate_suite

_SCENARIO_BY_FLAG = {
    "htc": "HTC",
    "hic": "HIC",
    "hicvs-small": "HICVS-small",
    "hicvs-large": "HICVS-large",
}


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit with code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        print(f"run '{self.prog} --help' for details", file=sys.stderr)
        raise SystemExit(1)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_int(text: str) -> int:
    return int(text)


def _parse_positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"expected a positive integer, got {text}")
    return value


def _parse_non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(f"expected a non-negative integer, got {text}")
    return value


def _parse_auto_positive(text: str) -> int | None:
    """A positive count, or 'auto' for the scenario's own default."""
    if text.strip().lower() == "auto":
        return None
    return _parse_positive(text)


def _parse_choice(choices: Sequence[str]) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in choices:
            raise ValueError(f"expected one of {', '.join(choices)}; got {text!r}")
        return text

    return parse


# key -> (value parser, desk-scale default, paper-scale default).  The
# resolution order is: scale defaults, then config file, then flags.
_RUN_SCHEMA: dict[str, tuple[Callable[[str], object], object, object]] = {
    "scenario": (_parse_choice(tuple(_SCENARIO_BY_FLAG)), "htc", "htc"),
    "selector": (_parse_choice(("ga", "gs")), "gs", "gs"),
    "classifier": (_parse_choice(GRID_CLASSIFIERS), "nu-svm", "nu-svm"),
    "suite": (str, "suite", "suite"),
    "out": (str, "report.csv", "report.csv"),
    "seed": (_parse_int, 0, 0),
    "workers": (_parse_positive, 1, 1),
    "paper_scale": (_parse_bool, False, True),
    "quota": (_parse_auto_positive, 50, None),
    "pool_per_class": (_parse_auto_positive, 50, None),
    "folds": (_parse_auto_positive, None, None),
    "repetitions": (_parse_positive, 5, 5),
    "subsample_per_class": (_parse_positive, 10, 10),
    "conventional_cv": (_parse_bool, False, False),
    "population": (_parse_positive, 50, 200),
    "epochs": (_parse_positive, 30, 100),
    "median_radius": (_parse_non_negative, 1, 1),
    "skip_normalize": (_parse_bool, False, False),
    "skip_derivative": (_parse_bool, False, False),
    "keep_all_bands": (_parse_bool, False, False),
}


def _read_config_file(path: str, parser: argparse.ArgumentParser) -> dict:
    """Parse a flat key=value file; unknown keys or bad values are usage errors."""
    text = Path(path).read_text(encoding="utf-8")
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _RUN_SCHEMA:
            parser.error(f"{path}:{lineno}: unknown option {key!r}")
        try:
            values[key] = _RUN_SCHEMA[key][0](value.strip())
        except ValueError as exc:
            parser.error(f"{path}:{lineno}: {key}: {exc}")
    return values


def resolve_run_config(
    args: argparse.Namespace, parser: argparse.ArgumentParser
) -> dict:
    """Merge defaults, config file, and flags into one options dict."""
    file_values = _read_config_file(args.config, parser) if args.config else {}
    flag_values: dict[str, object] = {}
    for key in _RUN_SCHEMA:
        raw = getattr(args, key, None)
        if raw is None:
            continue
        if isinstance(raw, str):
            try:
                raw = _RUN_SCHEMA[key][0](raw)
            except ValueError as exc:
                parser.error(f"--{key.replace('_', '-')}: {exc}")
        flag_values[key] = raw
    paper = bool(
        flag_values.get("paper_scale", file_values.get("paper_scale", False))
    )
    resolved = {
        key: (paper_default if paper else desk_default)
        for key, (_, desk_default, paper_default) in _RUN_SCHEMA.items()
    }
    resolved.update(file_values)
    resolved.update(flag_values)
    resolved["paper_scale"] = paper
    if resolved["selector"] == "ga" and resolved["classifier"] != "nu-svm":
        parser.error(
            "selector 'ga' optimizes the nu-svm family only; "
            "drop --classifier or set it to nu-svm"
        )
    return resolved


def _format_config_value(value: object) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def format_config(resolved: dict) -> str:
    """Resolved options as config-file text (round-trips through --config)."""
    return "\n".join(
        f"{key}={_format_config_value(resolved[key])}" for key in sorted(_RUN_SCHEMA)
    )


def _default_removal(bands: int) -> frozenset[int]:
    """The stock noisy-band list applies to the 128-band sensor layout only."""
    return DEFAULT_REMOVED_BANDS if bands == 128 else frozenset()


def _preprocess_config(options: dict, bands: int) -> PreprocessConfig:
    removed = (
        frozenset() if options["keep_all_bands"] else _default_removal(bands)
    )
    return PreprocessConfig(
        median_radius=options["median_radius"],
        removed_bands=removed,
        normalize=not options["skip_normalize"],
        derivative=not options["skip_derivative"],
    )


def _load_dataset(options: dict) -> LabeledDataset:
    """Read the suite, median-filter each cube, pool pixels, run the chain."""
    images = read_suite(options["suite"])
    config = _preprocess_config(options, images[0].cube.bands)
    parts = []
    for img in images:
        filtered = median_filter(img.cube, config.median_radius)
        parts.append(extract_labeled(filtered, img.labels, img.meta))
    dataset = merge_datasets(parts)
    spectra, _ = apply_chain(dataset.spectra, config)
    return dataset.with_spectra(spectra)


def _translate_informative(
    informative: tuple[int, ...] | None, translation: BandTranslation
) -> tuple[int, ...] | None:
    """Re-index informative bands through removal and differencing.

    A derivative feature counts as informative when either band of its
    differenced pair is.
    """
    if informative is None:
        return None
    original = set(informative)
    survivors = translation.survivors
    kept = []
    for i in range(translation.n_features):
        hit = int(survivors[i]) in original
        if translation.derivative:
            hit = hit or int(survivors[i + 1]) in original
        if hit:
            kept.append(i)
    return tuple(kept)


def cmd_synth(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    kwargs = {}
    for name in (
        "bands",
        "rows",
        "cols",
        "noise_std",
        "background_contrast",
        "illumination_contrast",
        "drift",
    ):
        value = getattr(args, name)
        if value is not None:
            kwargs[name] = value
    if args.alpha_lo is not None or args.alpha_hi is not None:
        default = SceneRecipe.__dataclass_fields__["alpha_range"].default
        kwargs["alpha_range"] = (
            default[0] if args.alpha_lo is None else args.alpha_lo,
            default[1] if args.alpha_hi is None else args.alpha_hi,
        )
    recipe = SceneRecipe(**kwargs)
    images = generate_suite(recipe, seed=args.seed)
    write_suite(images, args.out)
    print(f"wrote {len(images)} images to {args.out}", file=sys.stderr)
    return 0


def cmd_preprocess(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if Path(args.out).resolve() == Path(args.suite).resolve():
        parser.error("--out must differ from --suite (inputs are never mutated)")
    images = read_suite(args.suite)
    config = PreprocessConfig(
        median_radius=args.median_radius,
        removed_bands=(
            frozenset()
            if args.keep_all_bands
            else _default_removal(images[0].cube.bands)
        ),
        normalize=not args.skip_normalize,
        derivative=not args.skip_derivative,
    )
    processed = []
    for img in images:
        cube, translation = preprocess_cube(img.cube, config)
        meta = dataclasses.replace(
            img.meta,
            informative_bands=_translate_informative(
                img.meta.informative_bands, translation
            ),
        )
        processed.append(SceneImage(cube=cube, labels=img.labels, meta=meta))
    write_suite(processed, args.out)
    print(
        f"preprocessed {len(processed)} images "
        f"({images[0].cube.bands} -> {processed[0].cube.bands} features) to {args.out}",
        file=sys.stderr,
    )
    return 0


def cmd_run(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    options = resolve_run_config(args, parser)
    if args.print_config:
        print(format_config(options))
        return 0
    dataset = _load_dataset(options)
    scenario = ScenarioConfig(
        kind=_SCENARIO_BY_FLAG[options["scenario"]],
        quota=options["quota"],
        pool_per_class=options["pool_per_class"],
        folds=options["folds"],
        subsample_per_class=options["subsample_per_class"],
        inverted=not options["conventional_cv"],
        repetitions=options["repetitions"],
    )
    if options["selector"] == "ga":
        method = SelectionMethod(
            "GA",
            ga=GaConfig(
                n_bands=dataset.n_features,
                population=options["population"],
                epochs=options["epochs"],
            ),
        )
    else:
        grids = paper_grids() if options["paper_scale"] else desk_grids()
        method = SelectionMethod("GS", grid=grids[options["classifier"]])
    print(
        f"running {scenario.kind} with {options['selector']} / {method.classifier} "
        f"on {len(dataset)} pixels x {dataset.n_features} features",
        file=sys.stderr,
    )
    report = run_scenario(
        dataset,
        scenario,
        method,
        seed=options["seed"],
        workers=options["workers"],
    )
    write_reports([report], options["out"])
    print(format_report(report), file=sys.stderr)
    print(f"wrote {options['out']}", file=sys.stderr)
    return 0


def cmd_report(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    lines = [
        line
        for line in Path(args.csv).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if not lines or lines[0] != REPORT_HEADER:
        raise FormatError(f"{args.csv} is not a scenario report (unexpected header)")
    widths = (12, 8, 10, 8)
    header = ("scenario", "selector", "classifier", "day")
    print(
        "  ".join(h.ljust(w) for h, w in zip(header, widths))
        + "  accuracy            bands"
    )
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != 7:
            raise FormatError(f"{args.csv}:{lineno}: expected 7 fields")
        scenario, selector, classifier, day, mean, std, bands = fields
        try:
            mean_v, std_v, bands_v = float(mean), float(std), int(bands)
        except ValueError as exc:
            raise FormatError(f"{args.csv}:{lineno}: {exc}") from exc
        cells = (scenario, selector, classifier, day)
        print(
            "  ".join(c.ljust(w) for c, w in zip(cells, widths))
            + f"  {mean_v:7.2f} +/- {std_v:6.2f}  {bands_v:5d}"
        )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="hsiband",
        description="Synthetic hyperspectral suites, preprocessing, "
        "and band-selection evaluation scenarios.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    synth = sub.add_parser("synth", help="generate a 7-image synthetic suite")
    synth.add_argument("--out", default="suite", help="output directory")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--bands", type=int, default=None)
    synth.add_argument("--rows", type=int, default=None)
    synth.add_argument("--cols", type=int, default=None)
    synth.add_argument("--noise-std", type=float, default=None)
    synth.add_argument("--background-contrast", type=float, default=None)
    synth.add_argument("--illumination-contrast", type=float, default=None)
    synth.add_argument("--drift", type=float, default=None)
    synth.add_argument("--alpha-lo", type=float, default=None)
    synth.add_argument("--alpha-hi", type=float, default=None)
    synth.set_defaults(func=cmd_synth)

    preprocess = sub.add_parser(
        "preprocess", help="apply the preprocessing chain to a stored suite"
    )
    preprocess.add_argument("--suite", required=True, help="input suite directory")
    preprocess.add_argument("--out", required=True, help="output suite directory")
    preprocess.add_argument("--median-radius", type=int, default=1)
    preprocess.add_argument("--skip-normalize", action="store_true")
    preprocess.add_argument("--skip-derivative", action="store_true")
    preprocess.add_argument("--keep-all-bands", action="store_true")
    preprocess.set_defaults(func=cmd_preprocess)

    run = sub.add_parser("run", help="run one evaluation scenario end to end")
    run.add_argument("--config", default=None, help="flat key=value options file")
    run.add_argument(
        "--print-config",
        action="store_true",
        help="print the resolved options and exit",
    )
    run.add_argument("--scenario", choices=tuple(_SCENARIO_BY_FLAG), default=None)
    run.add_argument("--selector", choices=("ga", "gs"), default=None)
    run.add_argument("--classifier", choices=GRID_CLASSIFIERS, default=None)
    run.add_argument("--suite", default=None, help="input suite directory")
    run.add_argument("--out", default=None, help="report CSV path")
    run.add_argument("--seed", default=None)
    run.add_argument("--workers", default=None)
    run.add_argument(
        "--paper-scale",
        action="store_true",
        default=None,
        help="full-size quotas, grids, and GA settings",
    )
    run.add_argument("--quota", default=None, help="HTC rows per class-image, or auto")
    run.add_argument(
        "--pool-per-class",
        default=None,
        help="HIC/HICVS pool rows per class per Frame image, or auto",
    )
    run.add_argument("--folds", default=None, help="selection folds, or auto")
    run.add_argument("--repetitions", default=None)
    run.add_argument("--subsample-per-class", default=None)
    run.add_argument(
        "--conventional-cv",
        action="store_true",
        default=None,
        help="replace the inverted HIC fold protocol with ordinary CV",
    )
    run.add_argument("--population", default=None, help="GA population size")
    run.add_argument("--epochs", default=None, help="GA epochs")
    run.add_argument("--median-radius", default=None)
    run.add_argument("--skip-normalize", action="store_true", default=None)
    run.add_argument("--skip-derivative", action="store_true", default=None)
    run.add_argument("--keep-all-bands", action="store_true", default=None)
    run.set_defaults(func=cmd_run)

    report = sub.add_parser("report", help="pretty-print a report CSV")
    report.add_argument("csv", help="report file written by 'run'")
    report.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            parser.print_help(sys.stderr)
            return 1
        return args.func(args, parser)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    except (DataError, ScenarioError, FitnessError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

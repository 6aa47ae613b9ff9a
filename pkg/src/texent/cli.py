"""Command-line interface: tiling, GLCM export, entropy features, maps, classification.

Exit status is 0 on success, 1 for domain or usage errors (the message names
the offending flag or file), and 2 for I/O or parse failures.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import classifier, dataset, fbim, glcm, measures
from ._text import sig15
from .errors import DomainError, PgmError

_MEASURE_CHOICES = list(measures.MEASURE_KINDS)
_COMPARE_MEASURES = (
    measures.PROPOSED,
    measures.SHANNON,
    measures.RENYI,
    measures.TSALLIS,
    measures.PAL_PAL,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; this CLI reserves 2 for I/O.
    def error(self, message):
        raise _UsageError(message)


def _default_threads() -> int:
    return os.cpu_count() or 1


def _add_common(p, *, levels=True, symmetric=True, threads=False):
    if levels:
        p.add_argument("--levels", type=int, default=256,
                       help="requantize the image down to this many gray bins (default 256)")
    if symmetric:
        p.add_argument("--symmetric", action="store_true",
                       help="count each pixel pair in both directions")
    if threads:
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker threads (default: hardware parallelism)")


def _add_measure(p, default="proposed"):
    p.add_argument("--measure", choices=_MEASURE_CHOICES, default=default,
                   help=f"entropy measure (default {default})")
    p.add_argument("--alpha", type=float, default=2.0,
                   help="Renyi order (default 2)")
    p.add_argument("--q", type=float, default=2.0,
                   help="Tsallis exponent (default 2)")


def _add_distances(p):
    p.add_argument("--dist", type=int, default=31,
                   help="spacing-vector magnitude in pixels (default 31)")
    p.add_argument("--drange", metavar="START:END", default=None,
                   help="inclusive distance range; one feature per distance")


def build_parser() -> _Parser:
    parser = _Parser(prog="texent",
                     description="Texture analysis with a Gaussian-gain entropy.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("tile", help="split an image into square tiles")
    p.add_argument("image", help="input PGM")
    p.add_argument("--size", type=int, required=True, help="tile side in pixels")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_tile)

    p = sub.add_parser("glcm", help="write a co-occurrence count matrix as CSV")
    p.add_argument("image", help="input PGM")
    p.add_argument("--dist", type=int, default=31, help="spacing magnitude (default 31)")
    p.add_argument("--angle", type=int, choices=list(glcm.ANGLES), default=0,
                   help="spacing angle in degrees (default 0)")
    _add_common(p)
    p.add_argument("--out", default=None, help="output CSV (default: stdout)")
    p.set_defaults(func=_cmd_glcm)

    p = sub.add_parser("entropy", help="print per-image entropy feature values")
    p.add_argument("image", help="input PGM")
    _add_measure(p)
    _add_distances(p)
    _add_common(p)
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("fbim", help="write a polar interaction map as PGM and CSV")
    p.add_argument("image", help="input PGM")
    p.add_argument("--feature", default="proposed",
                   choices=_MEASURE_CHOICES + [fbim.CORRELATION],
                   help="feature to map (default proposed)")
    p.add_argument("--alpha", type=float, default=2.0, help="Renyi order (default 2)")
    p.add_argument("--q", type=float, default=2.0, help="Tsallis exponent (default 2)")
    p.add_argument("--dmax", type=int, default=31,
                   help="largest spacing magnitude (default 31)")
    p.add_argument("--out", required=True, help="output PGM map")
    p.add_argument("--csv", default=None, help="also write cell values as CSV")
    _add_common(p, threads=True)
    p.set_defaults(func=_cmd_fbim)

    p = sub.add_parser("classify", help="train and evaluate a texture classifier")
    _add_classify_args(p)
    _add_measure(p)
    p.add_argument("--report", required=True, help="output report CSV")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("compare", help="run classify for every entropy measure")
    _add_classify_args(p)
    p.add_argument("--alpha", type=float, default=2.0, help="Renyi order (default 2)")
    p.add_argument("--q", type=float, default=2.0, help="Tsallis exponent (default 2)")
    p.add_argument("--report", required=True, help="output combined report CSV")
    p.set_defaults(func=_cmd_compare)

    return parser


def _add_classify_args(p):
    p.add_argument("--train", required=True,
                   help="corpus directory (one subdirectory of PGM tiles per class)")
    p.add_argument("--test", default=None,
                   help="held-out corpus; omit to split --train by --seed")
    _add_distances(p)
    p.add_argument("--classifier", choices=[classifier.ONE_NN, classifier.NEAREST_CENTROID],
                   default=classifier.ONE_NN, help="classifier kind (default 1nn)")
    p.add_argument("--seed", type=int, default=42, help="split seed (default 42)")
    p.add_argument("--fraction", type=float, default=0.5,
                   help="train fraction for the split (default 0.5)")
    p.add_argument("--trials", type=int, default=1,
                   help="average over this many seeded splits (default 1)")
    p.add_argument("--features-out", default=None, help="also write the feature table CSV")
    _add_common(p, threads=True)


def _load_image(path: str, levels: int) -> glcm.GrayImage:
    try:
        img = dataset.read_pgm(path)
    except PgmError as e:
        raise PgmError(f"{path}: {e}") from None
    if levels < img.levels:
        img = img.quantize(levels)
    return img


def _measure_from(name: str, alpha: float, q: float) -> measures.EntropyMeasure:
    if name == measures.RENYI:
        return measures.EntropyMeasure(name, alpha=alpha)
    if name == measures.TSALLIS:
        return measures.EntropyMeasure(name, q=q)
    return measures.EntropyMeasure(name)


def _distances_from(args) -> "int | list[int]":
    if args.drange is None:
        if args.dist < 1:
            raise DomainError(f"--dist must be >= 1, got {args.dist}")
        return args.dist
    parts = args.drange.split(":")
    try:
        start, end = (int(x) for x in parts)
    except ValueError:
        raise DomainError(f"--drange must be START:END, got {args.drange!r}") from None
    if len(parts) != 2 or start < 1 or end < start:
        raise DomainError(f"--drange must satisfy 1 <= START <= END, got {args.drange!r}")
    return list(range(start, end + 1))


def _cmd_tile(args) -> int:
    img = _load_image(args.image, 256)
    tiles = dataset.tile(img, args.size)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cols = img.width // args.size
    for i, t in enumerate(tiles):
        dataset.write_pgm(out / f"r{i // cols}_c{i % cols}.pgm", t)
    print(f"wrote {len(tiles)} tiles to {out}")
    return 0


def _cmd_glcm(args) -> int:
    img = _load_image(args.image, args.levels)
    g = glcm.compute_glcm(
        img, glcm.SpacingVector(d=args.dist, theta=args.angle), args.symmetric
    )
    text = "\n".join(",".join(str(int(v)) for v in row) for row in g.counts) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_entropy(args) -> int:
    img = _load_image(args.image, args.levels)
    measure = _measure_from(args.measure, args.alpha, args.q)
    values = dataset.extract_feature(img, measure, _distances_from(args), args.symmetric)
    for v in values:
        print(sig15(v))
    return 0


def _cmd_fbim(args) -> int:
    img = _load_image(args.image, args.levels)
    if args.feature == fbim.CORRELATION:
        feature = fbim.CORRELATION
    else:
        feature = _measure_from(args.feature, args.alpha, args.q)
    f = fbim.compute_fbim(img, feature, d_max=args.dmax,
                          symmetric=args.symmetric, threads=args.threads)
    dataset.write_pgm(args.out, fbim.fbim_to_image(f))
    if args.csv:
        Path(args.csv).write_text(fbim.fbim_to_csv(f))
    return 0


def _corpus_features(args, measure_by_key):
    distances = _distances_from(args)
    items = dataset.load_labeled_images(args.train)
    if args.levels < 256:
        items = [(lbl, src, img.quantize(min(args.levels, img.levels)))
                 for lbl, src, img in items]
    sets = dataset.build_feature_sets(items, measure_by_key, distances,
                                      args.symmetric, args.threads)
    test_sets = None
    if args.test is not None:
        test_items = dataset.load_labeled_images(args.test)
        if args.levels < 256:
            test_items = [(lbl, src, img.quantize(min(args.levels, img.levels)))
                          for lbl, src, img in test_items]
        test_sets = dataset.build_feature_sets(test_items, measure_by_key, distances,
                                               args.symmetric, args.threads)
    return sets, test_sets


def _mean_reports(reports):
    per_class = {}
    for label in reports[0].per_class_accuracy:
        per_class[label] = sum(r.per_class_accuracy[label] for r in reports) / len(reports)
    confusion = np.sum([r.confusion for r in reports], axis=0)
    average = sum(r.average_accuracy for r in reports) / len(reports)
    return classifier.EvalReport(
        labels=reports[0].labels,
        confusion=confusion,
        per_class_accuracy=per_class,
        average_accuracy=average,
    )


def _evaluate_pair(args, full_set, test_set):
    """(validation, cross-validation) reports for one measure's features."""
    if test_set is not None:
        if args.trials != 1:
            raise DomainError("--trials applies only when --test is omitted")
        fold_a = classifier.evaluate(classifier.train(full_set, args.classifier), test_set)
        fold_b = classifier.evaluate(classifier.train(test_set, args.classifier), full_set)
        return fold_a, fold_b
    if args.trials < 1:
        raise DomainError(f"--trials must be >= 1, got {args.trials}")
    folds_a, folds_b = [], []
    for trial in range(args.trials):
        spec = dataset.SplitSpec(seed=args.seed + trial, fraction=args.fraction)
        a, b = classifier.cross_validate(full_set, spec, args.classifier)
        folds_a.append(a)
        folds_b.append(b)
    if args.trials == 1:
        return folds_a[0], folds_b[0]
    return _mean_reports(folds_a), _mean_reports(folds_b)


def _cmd_classify(args) -> int:
    measure = _measure_from(args.measure, args.alpha, args.q)
    sets, test_sets = _corpus_features(args, {"m": measure})
    full_set = sets["m"]
    if args.features_out:
        table = full_set if test_sets is None else dataset.LabeledFeatureSet(
            list(full_set.records) + list(test_sets["m"].records)
        )
        dataset.write_feature_csv(args.features_out, table)
    report_v, report_cv = _evaluate_pair(
        args, full_set, None if test_sets is None else test_sets["m"]
    )
    Path(args.report).write_text(classifier.report_csv(report_v, report_cv))
    print(f"average_v={sig15(report_v.average_accuracy)} "
          f"average_cv={sig15(report_cv.average_accuracy)}")
    return 0


def _cmd_compare(args) -> int:
    measure_by_key = {
        name: _measure_from(name, args.alpha, args.q) for name in _COMPARE_MEASURES
    }
    sets, test_sets = _corpus_features(args, measure_by_key)
    if args.features_out:
        dataset.write_feature_csv(args.features_out, sets[measures.PROPOSED])

    results = {}
    for name in _COMPARE_MEASURES:
        results[name] = _evaluate_pair(
            args, sets[name], None if test_sets is None else test_sets[name]
        )

    classes = sorted(results[_COMPARE_MEASURES[0]][0].per_class_accuracy)
    header = ["class"]
    for name in _COMPARE_MEASURES:
        header += [f"{name}_v", f"{name}_cv"]
    lines = [",".join(header)]
    for label in classes:
        row = [label]
        for name in _COMPARE_MEASURES:
            v, cv = results[name]
            row += [sig15(v.per_class_accuracy[label]), sig15(cv.per_class_accuracy[label])]
        lines.append(",".join(row))
    row = ["average"]
    for name in _COMPARE_MEASURES:
        v, cv = results[name]
        row += [sig15(v.average_accuracy), sig15(cv.average_accuracy)]
    lines.append(",".join(row))
    Path(args.report).write_text("\n".join(lines) + "\n")

    for name in _COMPARE_MEASURES:
        v, cv = results[name]
        print(f"{name} average_v={sig15(v.average_accuracy)} "
              f"average_cv={sig15(cv.average_accuracy)}")
    return 0


def run(argv) -> int:
    """Parse and execute one invocation; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except _UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return 1
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except PgmError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # argparse --help
        return int(e.code or 0)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

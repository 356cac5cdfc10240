import argparse
import json
import sys
from contextlib import contextmanager, nullcontext

from dotenv import load_dotenv

load_dotenv()

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from src import __version__
from src.anchors import generate_anchors
from src.assignment import assign_steps, label_histogram, merge_histograms
from src.config import load_run_config
from src.errors import BoxkitError, InvalidConfigError
from src.evaluation import compare_nms_variants, compare_regression_losses, evaluate
from src.formats import (
    histogram_frame,
    parse_anchor_records,
    parse_annotations,
    parse_detections,
    serialize_anchors,
    serialize_assignments,
    serialize_detections,
    write_comparison_csv,
    write_curve_csv,
    write_frame,
)
from src.geometry import Box
from src.losses import (
    REGRESSION_LOSS_KINDS,
    grad_center_iou,
    regression_loss,
    run_descent_check,
    run_grad_check,
)
from src.nms import list_variants, postprocess, run_nms
from src.schemas import NMSVariant, Subset, Thresholds
from src.utils.parallel import map_images
from src.utils.structured_logging import log_command_execution

stderr = Console(stderr=True)


# ==============================================
# I/O helpers
# ==============================================


@contextmanager
def _open_in(path: str | None):
    if path in (None, "-"):
        with nullcontext(sys.stdin) as stream:
            yield stream
    else:
        with open(path) as stream:
            yield stream


@contextmanager
def _open_out(path: str | None):
    if path in (None, "-"):
        with nullcontext(sys.stdout) as stream:
            yield stream
    else:
        with open(path, "w") as stream:
            yield stream


def _write_lines(out, lines):
    for line in lines:
        out.write(line + "\n")


def _box_arg(text: str) -> Box:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected x1,y1,x2,y2, got '{text}'") from e
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"expected 4 comma-separated numbers, got '{text}'")
    return Box(*values)


def _thresholds_arg(text: str) -> dict:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected t_neg,t_pos[,t_vis], got '{text}'")
    keys = ("t_neg", "t_pos", "t_vis")
    return {k: float(v) for k, v in zip(keys, parts, strict=False)}


def _config_overrides(args) -> dict:
    """Map CLI flags onto RunConfig fields; unset flags stay None and are skipped."""
    get = lambda name: getattr(args, name, None)  # noqa: E731
    return {
        "steps": get("thresholds"),
        "loss": {"sigma": get("sigma_ln")},
        "nms": {
            "variant": get("variant"),
            "n_t": get("nt"),
            "sigma": get("sigma"),
            "conf_thresh": get("conf_thresh"),
            "pre_top_k": get("pre_top_k"),
            "final_top_k": get("final_top_k"),
        },
        "eval": {"iou_thresh": get("iou"), "subset": get("subset"), "min_height": get("min_height")},
    }


# ==============================================
# Subcommands
# ==============================================


def cmd_anchors(args, config) -> int:
    anchors = generate_anchors(args.width, args.height, config.anchor_levels)
    with _open_out(args.out) as out:
        _write_lines(out, serialize_anchors(anchors))
    return 0


def _anchors_for(args, config):
    if args.anchors:
        with _open_in(args.anchors) as stream:
            return parse_anchor_records(stream)
    return generate_anchors(args.width, args.height, config.anchor_levels)


def _steps(args, config) -> list[Thresholds]:
    """config.steps with --tneg / --tpos / --tvis applied to the first step."""
    updates = {
        k: v
        for k, v in (("t_neg", args.tneg), ("t_pos", args.tpos), ("t_vis", args.tvis))
        if v is not None
    }
    steps = list(config.steps)
    if updates:
        steps[0] = Thresholds.model_validate({**steps[0].model_dump(), **updates})
    return steps


def cmd_assign(args, config) -> int:
    anchors = _anchors_for(args, config)
    steps = _steps(args, config)
    with _open_in(args.input) as stream:
        images = parse_annotations(stream)

    with _open_out(args.out) as out:
        for image, gts in images:
            for step, samples in enumerate(assign_steps(anchors, gts, steps), start=1):
                if args.nonzero:
                    samples = [s for s in samples if s.label > 0.0]
                _write_lines(out, serialize_assignments(image, step, samples))
    return 0


def cmd_stats(args, config) -> int:
    anchors = _anchors_for(args, config)
    steps = _steps(args, config)
    if not 1 <= args.step <= len(steps):
        raise InvalidConfigError(f"--step must lie in [1, {len(steps)}], got {args.step}")
    with _open_in(args.input) as stream:
        images = parse_annotations(stream)

    per_step = [[] for _ in steps]
    for _, gts in images:
        for k, samples in enumerate(assign_steps(anchors, gts, steps)):
            per_step[k].append(label_histogram(samples, args.bins))

    csv_frame = None
    table = Table(title="Label statistics")
    for column in ("step", "t_neg", "t_pos", "positive", "semi-positive", "negative", "excluded"):
        table.add_column(column)
    for k, (thresholds, hists) in enumerate(zip(steps, per_step, strict=True), start=1):
        if not hists:
            continue
        merged = merge_histograms(hists)
        if k == args.step:
            csv_frame = histogram_frame(merged)
        table.add_row(
            str(k),
            f"{thresholds.t_neg:g}",
            f"{thresholds.t_pos:g}",
            str(merged.positive),
            str(merged.semi_positive),
            str(merged.negative),
            str(merged.excluded),
        )

    with _open_out(args.out) as out:
        if csv_frame is not None:
            write_frame(csv_frame, out)
    stderr.print(table)
    return 0


def cmd_loss(args, config) -> int:
    values = {args.kind: regression_loss(args.kind, args.pred, args.gt, args.ref, config.loss)}
    if args.grad:
        values["grad"] = grad_center_iou(args.pred, args.gt, args.ref, config.loss).tolist()
    with _open_out(args.out) as out:
        out.write(json.dumps(values) + "\n")
    return 0


def cmd_compare_losses(args, config) -> int:
    values = compare_regression_losses(args.pred, args.gt, args.ref, config.loss)
    table = Table(title="Regression losses")
    table.add_column("loss")
    table.add_column("value", justify="right")
    for kind, value in values.items():
        table.add_row(kind, f"{value:.6f}")
    stderr.print(table)
    with _open_out(args.out) as out:
        out.write(json.dumps(values) + "\n")
    return 0


def cmd_grad_check(args, config) -> int:
    report = run_grad_check(trials=args.trials, seed=args.seed, h=args.h, tolerance=args.tolerance)
    summary = {
        "trials": report.trials,
        "checked": report.checked,
        "skipped": report.skipped,
        "skip_fraction": report.skip_fraction,
        "max_rel_error": report.max_rel_error,
        "passed": report.passed,
    }
    if args.descent:
        descent = run_descent_check(trials=args.descent, seed=args.seed, cfg=config.loss)
        summary["descent_rate"] = descent.rate
    with _open_out(args.out) as out:
        out.write(json.dumps(summary) + "\n")
    return 0 if report.passed else 1


def cmd_nms(args, config) -> int:
    with _open_in(args.input) as stream:
        images = parse_detections(stream)

    apply = run_nms if args.no_filter else postprocess
    kept = map_images(lambda item: (item[0], apply(item[1], config.nms)), images)
    with _open_out(args.out) as out:
        _write_lines(out, serialize_detections(kept))
    return 0


def _load_eval_inputs(args):
    with _open_in(args.dets) as stream:
        dets = dict(parse_detections(stream))
    with _open_in(args.annotations) as stream:
        gts = dict(parse_annotations(stream))
    return dets, gts


def cmd_eval(args, config) -> int:
    dets, gts = _load_eval_inputs(args)
    result = evaluate(dets, gts, config.eval)
    summary = (
        f"MR-2 {100 * result.log_average_miss_rate:.2f}% "
        f"(subset={config.eval.subset.value}, iou={config.eval.iou_thresh:g}, "
        f"recall={100 * result.recall:.2f}%, images={result.n_images}, gts={result.n_included_gts})"
    )
    with _open_out(args.out) as out:
        write_curve_csv(result.curve, out)
    # stdout carries the curve when no --out is given
    print(summary, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return 0


def cmd_compare_nms(args, config) -> int:
    dets, gts = _load_eval_inputs(args)
    nms_configs = [config.nms.model_copy(update={"variant": NMSVariant(v)}) for v in args.variants]
    rows = compare_nms_variants(
        dets,
        gts,
        nms_configs,
        subsets=[Subset(s) for s in args.subsets],
        iou_thresholds=args.ious,
        base_cfg=config.eval,
    )

    table = Table(title="NMS comparison (MR-2, lower is better)")
    for column in ("variant", "subset", "IoU", "MR-2", "recall"):
        table.add_column(column)
    for row in rows:
        table.add_row(
            row.variant,
            row.subset,
            f"{row.iou_thresh:g}",
            "-" if row.log_average_miss_rate is None else f"{100 * row.log_average_miss_rate:.2f}%",
            "-" if row.recall is None else f"{100 * row.recall:.2f}%",
        )
    stderr.print(table)
    with _open_out(args.out) as out:
        write_comparison_csv(rows, out)
    return 0


COMMANDS = {
    "anchors": cmd_anchors,
    "assign": cmd_assign,
    "stats": cmd_stats,
    "loss": cmd_loss,
    "compare-losses": cmd_compare_losses,
    "grad-check": cmd_grad_check,
    "nms": cmd_nms,
    "eval": cmd_eval,
    "compare-nms": cmd_compare_nms,
}


# ==============================================
# Parser
# ==============================================


def _add_io(parser, with_input: bool = True):
    if with_input:
        parser.add_argument("--in", dest="input", default=None, help="Input file (default: stdin)")
    parser.add_argument("--out", default=None, help="Output file (default: stdout)")


def _add_image_size(parser):
    parser.add_argument("--width", type=int, default=2048, help="Image width in pixels")
    parser.add_argument("--height", type=int, default=1024, help="Image height in pixels")


def _add_assignment_args(parser):
    _add_image_size(parser)
    parser.add_argument("--anchors", default=None, help="Anchor records to use instead of a generated grid")
    parser.add_argument(
        "--thresholds",
        type=_thresholds_arg,
        nargs="+",
        default=None,
        help="One t_neg,t_pos[,t_vis] per refinement step (default: 0.4,0.5 0.5,0.6)",
    )
    parser.add_argument("--annotations", dest="input", default=None, help="Same as --in")
    parser.add_argument("--tneg", type=float, default=None, help="t_neg of the first step")
    parser.add_argument("--tpos", type=float, default=None, help="t_pos of the first step")
    parser.add_argument("--tvis", type=float, default=None, help="t_vis of the first step")


def _add_box_pair(parser):
    parser.add_argument("--pred", type=_box_arg, required=True, help="Predicted box x1,y1,x2,y2")
    parser.add_argument("--gt", type=_box_arg, required=True, help="Ground-truth box x1,y1,x2,y2")
    parser.add_argument("--ref", type=_box_arg, default=None, help="Reference (anchor) box; default: gt")
    parser.add_argument("--sigma-ln", type=float, default=None, help="smooth_ln knee sigma")


def _add_nms_args(parser):
    parser.add_argument("--variant", choices=[v.value for v in NMSVariant], default=None)
    parser.add_argument("--nt", type=float, default=None, help="Overlap threshold N_t")
    parser.add_argument("--sigma", type=float, default=None, help="Gaussian Soft-NMS sigma")
    parser.add_argument("--conf-thresh", type=float, default=None)
    parser.add_argument("--pre-top-k", type=int, default=None)
    parser.add_argument("--final-top-k", type=int, default=None)


def _add_eval_args(parser):
    parser.add_argument("--dets", required=True, help="Detection records")
    parser.add_argument("--annotations", required=True, help="Annotation records")
    parser.add_argument("--min-height", type=float, default=None, help="Reasonable-subset height")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxkit",
        description="boxkit - pedestrian detection toolkit: anchors, soft-label assignment, "
        "Center-IoU loss, Cosine-NMS and Caltech-style evaluation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Anchor grid of a 2048x1024 image
  python main.py anchors --width 2048 --height 1024 --out anchors.jsonl

  # Soft labels of every anchor, two refinement steps
  python main.py assign --in annotations.jsonl --thresholds 0.4,0.5 0.5,0.6 --nonzero

  # Positive / semi-positive counts and the soft-label histogram
  python main.py stats --in annotations.jsonl --bins 10 --out histogram.csv

  # One regression loss, or all of them side by side
  python main.py loss --kind centeriou --pred 2,2,6,6 --gt 0,0,10,10 --grad
  python main.py compare-losses --pred 2,2,6,6 --gt 0,0,10,10

  # Verify the analytic Center-IoU gradient
  python main.py grad-check --trials 500 --seed 0

  # Cosine-NMS with the inference pipeline (conf filter, top-k)
  python main.py nms --variant cosine --nt 0.3 --in raw.jsonl --out kept.jsonl

  # Log-average miss rate on the Reasonable subset
  python main.py eval --dets kept.jsonl --annotations gt.jsonl --iou 0.5 --subset reasonable

  # All NMS variants on all subsets
  python main.py compare-nms --dets raw.jsonl --annotations gt.jsonl --subsets reasonable heavy
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="YAML or JSON run configuration")
    parser.add_argument("--seed", type=int, default=0, help="Seed of every random draw")
    subparsers = parser.add_subparsers(dest="command")
    # --seed after a subcommand; when absent the global value stands
    seed_parent = argparse.ArgumentParser(add_help=False)
    seed_parent.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Seed of every random draw")

    anchors_parser = subparsers.add_parser("anchors", help="Generate the anchor grid")
    _add_image_size(anchors_parser)
    _add_io(anchors_parser, with_input=False)

    assign_parser = subparsers.add_parser("assign", help="Assign soft labels and regression targets")
    _add_assignment_args(assign_parser)
    assign_parser.add_argument("--nonzero", action="store_true", help="Only emit anchors with label > 0")
    _add_io(assign_parser)

    stats_parser = subparsers.add_parser("stats", help="Positive / semi-positive statistics")
    _add_assignment_args(stats_parser)
    stats_parser.add_argument("--bins", type=int, default=10, help="Histogram bins over (0, 1)")
    stats_parser.add_argument(
        "--step", type=int, default=1, help="Refinement step whose histogram goes to the CSV"
    )
    _add_io(stats_parser)

    loss_parser = subparsers.add_parser("loss", help="Evaluate one regression loss")
    _add_box_pair(loss_parser)
    loss_parser.add_argument(
        "--kind", choices=REGRESSION_LOSS_KINDS, default="centeriou"
    )
    loss_parser.add_argument("--grad", action="store_true", help="Also emit the Center-IoU gradient")
    _add_io(loss_parser, with_input=False)

    compare_losses_parser = subparsers.add_parser("compare-losses", help="All regression losses side by side")
    _add_box_pair(compare_losses_parser)
    _add_io(compare_losses_parser, with_input=False)

    grad_parser = subparsers.add_parser(
        "grad-check", parents=[seed_parent], help="Analytic vs numeric Center-IoU gradient"
    )
    grad_parser.add_argument("--trials", type=int, default=500)
    grad_parser.add_argument("--h", type=float, default=1e-5, help="Finite-difference step")
    grad_parser.add_argument("--tolerance", type=float, default=1e-4, help="Max relative error")
    grad_parser.add_argument(
        "--descent", type=int, default=0, metavar="TRIALS", help="Also run an L-BFGS-B descent check"
    )
    _add_io(grad_parser, with_input=False)

    nms_parser = subparsers.add_parser(
        "nms",
        help="Suppress or rescore detections",
        description="Available variants: "
        + ", ".join(f"{k} ({v['description']})" for k, v in list_variants().items()),
    )
    _add_nms_args(nms_parser)
    nms_parser.add_argument(
        "--no-filter", action="store_true", help="Skip the confidence filter and top-k truncation"
    )
    _add_io(nms_parser)

    eval_parser = subparsers.add_parser("eval", help="Miss-rate curve and MR-2")
    _add_eval_args(eval_parser)
    eval_parser.add_argument("--iou", type=float, default=None)
    eval_parser.add_argument("--subset", choices=[s.value for s in Subset], default=None)
    _add_io(eval_parser, with_input=False)

    compare_parser = subparsers.add_parser("compare-nms", help="MR-2 of every NMS variant per subset")
    _add_eval_args(compare_parser)
    _add_nms_args(compare_parser)
    compare_parser.add_argument(
        "--variants", nargs="+", choices=[v.value for v in NMSVariant], default=[v.value for v in NMSVariant]
    )
    compare_parser.add_argument(
        "--subsets", nargs="+", choices=[s.value for s in Subset], default=[Subset.REASONABLE.value]
    )
    compare_parser.add_argument("--ious", type=float, nargs="+", default=[0.5])
    _add_io(compare_parser, with_input=False)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    try:
        with log_command_execution(args.command, seed=args.seed):
            config = load_run_config(args.config, _config_overrides(args))
            return COMMANDS[args.command](args, config)
    except (BoxkitError, ValidationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""CSV output of curves, histograms and comparison tables (pandas)."""

from collections.abc import Iterable
from dataclasses import asdict
from typing import IO

import pandas as pd

from src.assignment import LabelHistogram
from src.evaluation import ComparisonRow, MissRateCurve

FLOAT_FORMAT = "%.9g"


def curve_frame(curve: MissRateCurve) -> pd.DataFrame:
    return pd.DataFrame(curve.rows(), columns=["threshold", "fppi", "miss_rate"])


def histogram_frame(hist: LabelHistogram) -> pd.DataFrame:
    return pd.DataFrame(hist.rows(), columns=["bin_low", "bin_high", "count"])


def comparison_frame(rows: Iterable[ComparisonRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [asdict(r) for r in rows],
        columns=["variant", "subset", "iou_thresh", "log_average_miss_rate", "recall"],
    )


def write_frame(frame: pd.DataFrame, out: IO[str]):
    frame.to_csv(out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_curve_csv(curve: MissRateCurve, out: IO[str]):
    write_frame(curve_frame(curve), out)


def write_histogram_csv(hist: LabelHistogram, out: IO[str]):
    write_frame(histogram_frame(hist), out)


def write_comparison_csv(rows: Iterable[ComparisonRow], out: IO[str]):
    write_frame(comparison_frame(rows), out)

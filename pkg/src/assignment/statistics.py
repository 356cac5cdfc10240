"""
Label statistics - counts of positive, semi-positive and negative samples
and the distribution of semi-positive label values.
"""

from dataclasses import dataclass

import numpy as np

from src.errors import InvalidConfigError

from .matcher import AssignedSample


@dataclass(frozen=True)
class LabelHistogram:
    """
    Semi-positive label histogram over (0, 1).

    Bins are right-closed: bin k covers (k / bins, (k + 1) / bins].
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    positive: int
    semi_positive: int
    negative: int
    excluded: int

    @property
    def total(self) -> int:
        return self.positive + self.semi_positive + self.negative + self.excluded

    def rows(self) -> list[tuple[float, float, int]]:
        """(bin_low, bin_high, count) per bin."""
        return [
            (float(self.bin_edges[k]), float(self.bin_edges[k + 1]), int(self.counts[k]))
            for k in range(len(self.counts))
        ]


def label_histogram(samples: list[AssignedSample], bins: int) -> LabelHistogram:
    if bins < 1:
        raise InvalidConfigError(f"bins must be >= 1, got {bins}")

    labels = np.array([s.label for s in samples if not s.excluded], dtype=np.float64)
    excluded = sum(1 for s in samples if s.excluded)

    semi = labels[(labels > 0.0) & (labels < 1.0)]
    # snap so labels on a bin edge (0.3 * 10 = 3.0000000000000004) stay right-closed
    index = np.clip(np.ceil(np.round(semi * bins, 9)).astype(np.int64) - 1, 0, bins - 1)
    counts = np.bincount(index, minlength=bins)

    return LabelHistogram(
        bin_edges=np.linspace(0.0, 1.0, bins + 1),
        counts=counts,
        positive=int(np.count_nonzero(labels >= 1.0)),
        semi_positive=int(semi.size),
        negative=int(np.count_nonzero(labels <= 0.0)),
        excluded=excluded,
    )


def merge_histograms(histograms: list[LabelHistogram]) -> LabelHistogram:
    """Sum histograms with identical binning (e.g. one per image)."""
    if not histograms:
        raise InvalidConfigError("Nothing to merge")
    first = histograms[0]
    return LabelHistogram(
        bin_edges=first.bin_edges,
        counts=np.sum([h.counts for h in histograms], axis=0),
        positive=sum(h.positive for h in histograms),
        semi_positive=sum(h.semi_positive for h in histograms),
        negative=sum(h.negative for h in histograms),
        excluded=sum(h.excluded for h in histograms),
    )

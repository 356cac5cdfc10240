"""
Test configuration and fixtures for boxkit.

This module provides:
- Seeded random box / detection generators
- Common fixtures (boxes, ground truths, the 3-box NMS scene)
- Test environment configuration
- Assertion helpers
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path for `from src...` imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.assignment import GroundTruth  # noqa: E402
from src.geometry import Box  # noqa: E402
from src.nms import Detection  # noqa: E402

# ==================== Generators ====================


def random_box(rng: np.random.Generator, extent: float = 5.0, min_size: float = 0.2) -> Box:
    """A box with corners in [0, extent] and sides of at least min_size."""
    x1, y1 = rng.uniform(0.0, extent - min_size, size=2)
    x2 = rng.uniform(x1 + min_size, extent)
    y2 = rng.uniform(y1 + min_size, extent)
    return Box(float(x1), float(y1), float(x2), float(y2))


def random_detections(
    rng: np.random.Generator, n: int, extent: float = 100.0, cluster: bool = True
) -> list[Detection]:
    """
    n detections with distinct ids. With cluster=True boxes are jittered
    copies of a few centres so that NMS has real overlaps to resolve.
    """
    centres = rng.uniform(20.0, extent - 20.0, size=(max(n // 5, 1), 2))
    dets = []
    for i in range(n):
        cx, cy = centres[rng.integers(len(centres))] if cluster else rng.uniform(20.0, extent - 20.0, 2)
        cx, cy = cx + rng.normal(0.0, 2.0), cy + rng.normal(0.0, 2.0)
        w, h = rng.uniform(8.0, 16.0), rng.uniform(16.0, 32.0)
        box = Box(float(cx - w / 2), float(cy - h / 2), float(cx + w / 2), float(cy + h / 2))
        dets.append(Detection(box, float(rng.uniform(0.0, 1.0)), i))
    return dets


# ==================== Fixtures: Environment ====================


@pytest.fixture(autouse=True, scope="session")
def test_env():
    """Single-threaded, quiet runs; environment restored afterwards."""
    from src.config import get_settings

    original_env = os.environ.copy()
    os.environ["BOXKIT_THREADS"] = "1"
    os.environ["LOG_LEVEL"] = "WARNING"
    get_settings.cache_clear()

    yield

    os.environ.clear()
    os.environ.update(original_env)
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


# ==================== Fixtures: Geometry ====================


@pytest.fixture
def overlapping_pair() -> tuple[Box, Box]:
    """(0,0,2,2) and (1,1,3,3): intersection 1, union 7, enclosing box 9."""
    return Box(0, 0, 2, 2), Box(1, 1, 3, 3)


@pytest.fixture
def pedestrian() -> GroundTruth:
    """100 px tall, half visible."""
    return GroundTruth.from_boxes(Box(0, 0, 40, 100), Box(0, 0, 40, 50))


# ==================== Fixtures: NMS ====================


@pytest.fixture
def three_box_scene() -> list[Detection]:
    """
    A (0.9) and B (0.8) overlap with IoU 0.6; C (0.7) is disjoint.
    """
    return [
        Detection(Box(0, 0, 10, 10), 0.9, 0),
        Detection(Box(0, 0, 10, 6), 0.8, 1),
        Detection(Box(50, 50, 60, 60), 0.7, 2),
    ]


# ==================== Assertion Helpers ====================


def assert_sorted_by_score(dets: list[Detection]):
    """Score descending, ties by id ascending."""
    keys = [(-d.score, d.id) for d in dets]
    assert keys == sorted(keys), f"detections out of order: {keys}"


def assert_same_ids(a: list[Detection], b: list[Detection]):
    assert sorted(d.id for d in a) == sorted(d.id for d in b)


# ==================== Pytest Configuration ====================


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "integration: CLI tests")
    config.addinivalue_line("markers", "slow: Large seeded sweeps")
    config.addinivalue_line("markers", "benchmark: Timing contracts")
    config.addinivalue_line("markers", "scientific: Oracle and numerical-accuracy checks")

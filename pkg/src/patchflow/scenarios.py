"""Synthetic two-class scenarios: a dictionary plus clean and noisy labels.

Each generator is deterministic given its seed.  The `lines` scenario
pairs a line/cross template dictionary with a grid pattern of separated
full-width and full-height lines; `checkerboard` uses the two
checkerboard phases; `blobs` smooths seeded noise into two-class blobs
regularized by constant templates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dictionary import PatchDictionary, PatchTemplate

SCENARIO_NAMES = ("lines", "checkerboard", "blobs")


@dataclass(frozen=True)
class Scenario:
    name: str
    dictionary: PatchDictionary
    clean: np.ndarray
    noisy: np.ndarray


def line_dictionary(side: int = 3) -> PatchDictionary:
    """Binary line/cross templates.

    The empty patch, one full horizontal line per row, one full vertical
    line per column, and every horizontal/vertical crossing; 1 + 2k + k²
    templates (16 for k = 3).
    """
    if side < 1 or side % 2 == 0:
        raise ValueError(f"patch side must be odd and positive, got {side}")
    templates = [PatchTemplate(np.zeros((side, side), dtype=int))]
    for r in range(side):
        cells = np.zeros((side, side), dtype=int)
        cells[r, :] = 1
        templates.append(PatchTemplate(cells))
    for c in range(side):
        cells = np.zeros((side, side), dtype=int)
        cells[:, c] = 1
        templates.append(PatchTemplate(cells))
    for r in range(side):
        for c in range(side):
            cells = np.zeros((side, side), dtype=int)
            cells[r, :] = 1
            cells[:, c] = 1
            templates.append(PatchTemplate(cells))
    return PatchDictionary(tuple(templates), class_count=2,
                           class_names=("background", "foreground"))


def checkerboard_dictionary(side: int = 3) -> PatchDictionary:
    """The two checkerboard phases as templates."""
    if side < 1 or side % 2 == 0:
        raise ValueError(f"patch side must be odd and positive, got {side}")
    base = np.add.outer(np.arange(side), np.arange(side)) % 2
    return PatchDictionary((PatchTemplate(base), PatchTemplate(1 - base)),
                           class_count=2)


def constant_dictionary(side: int, class_count: int) -> PatchDictionary:
    """One constant template per class."""
    templates = tuple(PatchTemplate(np.full((side, side), v, dtype=int))
                      for v in range(class_count))
    return PatchDictionary(templates, class_count=class_count)


def flip_labels(labels: np.ndarray, class_count: int, noise_rate: float,
                rng: np.random.Generator) -> np.ndarray:
    """Flip each vertex independently with probability `noise_rate`.

    Flipped vertices move to a uniformly random other class.
    """
    if not (0.0 <= noise_rate <= 1.0):
        raise ValueError(f"noise rate must lie in [0, 1], got {noise_rate}")
    flips = rng.random(labels.shape) < noise_rate
    jumps = rng.integers(1, max(class_count, 2), size=labels.shape)
    noisy = np.where(flips, (labels + jumps) % class_count, labels)
    return noisy.astype(int)


def _separated_positions(rng: np.random.Generator, count: int,
                         low: int, high: int, min_gap: int) -> np.ndarray:
    """`count` positions in [low, high) with pairwise distance >= min_gap."""
    if high - low < (count - 1) * min_gap + 1:
        raise ValueError(f"cannot place {count} positions with gap {min_gap} "
                         f"in [{low}, {high})")
    while True:
        pos = np.sort(rng.integers(low, high, size=count))
        if count == 1 or int(np.diff(pos).min()) >= min_gap:
            return pos


def _line_pattern(rng: np.random.Generator, size: int, side: int) -> np.ndarray:
    labels = np.zeros((size, size), dtype=int)
    count = max(1, size // 8)
    rows = _separated_positions(rng, count, 1, size - 1, side)
    cols = _separated_positions(rng, count, 1, size - 1, side)
    labels[rows, :] = 1
    labels[:, cols] = 1
    return labels


def _box_blur(values: np.ndarray, radius: int) -> np.ndarray:
    out = values
    for axis in (0, 1):
        padded = np.pad(out, [(radius, radius) if ax == axis else (0, 0)
                              for ax in (0, 1)], mode="edge")
        cumsum = np.cumsum(padded, axis=axis)
        cumsum = np.concatenate([np.zeros_like(np.take(cumsum, [0], axis=axis)), cumsum],
                                axis=axis)
        width = 2 * radius + 1
        hi = np.take(cumsum, range(width, cumsum.shape[axis]), axis=axis)
        lo = np.take(cumsum, range(0, cumsum.shape[axis] - width), axis=axis)
        out = (hi - lo) / width
    return out


def _blob_pattern(rng: np.random.Generator, size: int) -> np.ndarray:
    field = _box_blur(rng.random((size, size)), radius=max(2, size // 8))
    return (field > np.median(field)).astype(int)


def generate(name: str, size: int, noise_rate: float, seed,
             patch_side: int = 3) -> Scenario:
    """Build a named scenario: dictionary, clean labels, noisy labels."""
    if name not in SCENARIO_NAMES:
        raise ValueError(f"unknown scenario {name!r}, expected one of {SCENARIO_NAMES}")
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    rng = np.random.default_rng(seed)
    if name == "lines":
        dictionary = line_dictionary(patch_side)
        clean = _line_pattern(rng, size, patch_side)
    elif name == "checkerboard":
        dictionary = checkerboard_dictionary(patch_side)
        clean = np.add.outer(np.arange(size), np.arange(size)) % 2
    else:
        dictionary = constant_dictionary(patch_side, 2)
        clean = _blob_pattern(rng, size)
    noisy = flip_labels(clean, dictionary.class_count, noise_rate, rng)
    return Scenario(name=name, dictionary=dictionary, clean=clean, noisy=noisy)

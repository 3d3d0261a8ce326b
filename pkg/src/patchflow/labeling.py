"""From label fields to template assignment fields and back.

`smooth_labels` blends a hard per-vertex labeling with the uniform
distribution; `initialize` scores every template against the blended
labels over its (grid-clipped) window and softmaxes the scores into an
initial assignment field.  After integration, `extract_labeling` reads
the center class of each vertex's best template, and
`mean_patch_assignment` superimposes all assigned templates covering a
vertex into a per-vertex uncertainty value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dictionary import PatchDictionary, template_assignment_rows
from .grid import GridGraph


def check_label_field(labels, class_count: int) -> np.ndarray:
    """Validate an H×W array of class ids in [0, class_count)."""
    labels = np.asarray(labels)
    if labels.ndim != 2:
        raise ValueError(f"label field must be 2-D, got shape {labels.shape}")
    if not np.issubdtype(labels.dtype, np.integer):
        labels = labels.astype(int)
    if labels.size and (labels.min() < 0 or labels.max() >= class_count):
        raise ValueError(f"label ids must lie in [0, {class_count}), "
                         f"got range [{labels.min()}, {labels.max()}]")
    return labels


def smooth_labels(labels, class_count: int, lam: float) -> np.ndarray:
    """Blend one-hot labels with the uniform distribution.

    Row i is (1-lam) * e_{label(i)} + lam * (1/c, ..., 1/c); rows are
    interior simplex points for lam > 0 and one-hot at lam = 0.
    """
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"smoothing parameter must lie in [0, 1], got {lam}")
    labels = check_label_field(labels, class_count)
    flat = labels.reshape(-1)
    W = np.full((flat.size, class_count), lam / class_count)
    W[np.arange(flat.size), flat] += 1.0 - lam
    return W


def _offset_slices(dr: int, dc: int, height: int, width: int):
    """Destination/source slices so dst + (dr, dc) = src, both in-grid."""
    dst = (slice(max(0, -dr), height - max(0, dr)),
           slice(max(0, -dc), width - max(0, dc)))
    src = (slice(max(0, dr), height + min(0, dr)),
           slice(max(0, dc), width + min(0, dc)))
    return dst, src


def initialize(w_field, dictionary: PatchDictionary, graph: GridGraph,
               class_weights=None) -> np.ndarray:
    """Initial template assignment field from blended labels.

    The score of template d at vertex i is the inner product of the
    blended label rows over the clipped window with the template's
    (class-weighted) one-hot cells; rows are the softmax of the scores.
    """
    w_field = np.asarray(w_field, dtype=float)
    n = graph.num_vertices
    c = dictionary.class_count
    if w_field.shape != (n, c):
        raise ValueError(f"label assignment field must have shape ({n}, {c}), "
                         f"got {w_field.shape}")
    H, W = graph.height, graph.width
    k = dictionary.side
    radius = k // 2
    encodings = template_assignment_rows(dictionary, class_weights)
    cells = dictionary.cells_array()
    grid_field = w_field.reshape(H, W, c)
    scores = np.zeros((H, W, dictionary.size))
    for d in range(dictionary.size):
        for a in range(k):
            for b in range(k):
                v = int(cells[d, a, b])
                weight = encodings[d, a, b, v]
                dst, src = _offset_slices(a - radius, b - radius, H, W)
                scores[dst[0], dst[1], d] += weight * grid_field[src[0], src[1], v]
    scores -= scores.max(axis=2, keepdims=True)
    P = np.exp(scores)
    P /= P.sum(axis=2, keepdims=True)
    return P.reshape(n, dictionary.size)


def extract_labeling(P, dictionary: PatchDictionary, graph: GridGraph) -> np.ndarray:
    """Center class of each vertex's highest-weight template.

    Ties resolve to the lowest template index, so the output is
    deterministic.
    """
    P = np.asarray(P, dtype=float)
    n = graph.num_vertices
    if P.shape != (n, dictionary.size):
        raise ValueError(f"assignment field must have shape ({n}, {dictionary.size}), "
                         f"got {P.shape}")
    centers = np.array([t.center_class for t in dictionary.templates])
    best = P.argmax(axis=1)
    return centers[best].reshape(graph.height, graph.width)


def sample_labeling(P, dictionary: PatchDictionary, graph: GridGraph,
                    seed) -> np.ndarray:
    """Center class of a template drawn per vertex from its assignment row."""
    P = np.asarray(P, dtype=float)
    n = graph.num_vertices
    if P.shape != (n, dictionary.size):
        raise ValueError(f"assignment field must have shape ({n}, {dictionary.size}), "
                         f"got {P.shape}")
    rng = np.random.default_rng(seed)
    cumulative = np.cumsum(P, axis=1)
    cumulative /= cumulative[:, -1:]
    u = rng.random(n)
    drawn = (cumulative < u[:, None]).sum(axis=1)
    centers = np.array([t.center_class for t in dictionary.templates])
    return centers[drawn].reshape(graph.height, graph.width)


@dataclass(frozen=True)
class MeanAssignment:
    """Superposition of assigned templates, raw and display-normalized.

    `raw` divides the per-vertex sum by the dictionary size, so it is not
    bounded by 1 when many patch centers cover a vertex; `normalized`
    divides by the per-vertex coverage instead and lies in [0, 1] (rows
    summing to 1 in the multiclass form).  `coverage[i]` counts the patch
    centers whose clipped window contains vertex i.
    """

    raw: np.ndarray
    normalized: np.ndarray
    coverage: np.ndarray


def mean_patch_assignment(P, dictionary: PatchDictionary, graph: GridGraph,
                          multiclass=None) -> MeanAssignment:
    """Per-vertex weighted superposition of all covering templates.

    Every patch center j pastes its P_j-weighted template mix onto the
    grid; vertex i accumulates the pasted values of all windows that
    contain it.  The scalar form (two classes, template values 0/1)
    returns H×W fields; the multiclass form accumulates one-hot class
    vectors and returns H×W×c fields.
    """
    P = np.asarray(P, dtype=float)
    n = graph.num_vertices
    if P.shape != (n, dictionary.size):
        raise ValueError(f"assignment field must have shape ({n}, {dictionary.size}), "
                         f"got {P.shape}")
    c = dictionary.class_count
    if multiclass is None:
        multiclass = c != 2
    if not multiclass and c != 2:
        raise ValueError(f"scalar mean assignment requires 2 classes, got {c}")
    H, W = graph.height, graph.width
    k = dictionary.side
    radius = k // 2
    cells = dictionary.cells_array()
    if multiclass:
        values = np.zeros((dictionary.size, k, k, c))
        d_idx = np.arange(dictionary.size)[:, None, None]
        a_idx = np.arange(k)[None, :, None]
        b_idx = np.arange(k)[None, None, :]
        values[d_idx, a_idx, b_idx, cells] = 1.0
        channels = c
    else:
        values = cells[..., None].astype(float)
        channels = 1
    # expected template value per window cell, for each patch center
    mixed = (P @ values.reshape(dictionary.size, -1)).reshape(H, W, k, k, channels)
    total = np.zeros((H, W, channels))
    coverage = np.zeros((H, W))
    for a in range(k):
        for b in range(k):
            dst, src = _offset_slices(-(a - radius), -(b - radius), H, W)
            total[dst] += mixed[src[0], src[1], a, b]
            coverage[dst] += 1.0
    raw = total / dictionary.size
    normalized = total / coverage[..., None]
    if not multiclass:
        raw = raw[..., 0]
        normalized = normalized[..., 0]
    return MeanAssignment(raw=raw, normalized=normalized, coverage=coverage)

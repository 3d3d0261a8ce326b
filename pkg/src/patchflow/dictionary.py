"""Labeled patch templates, template similarities, and their adjacency matrices.

A template is an abstract k×k array of class ids; a dictionary is an
ordered collection of same-sized templates over one class set.  Two
similarity functions compare a template pair whose centers are
displaced by an integer shift: `overlap_similarity` counts agreeing
cells on the window overlap (normalized by the full patch size k²),
and `binary_similarity` is 1 exactly when the overlap agrees everywhere
(vacuously 1 on empty overlap).

The canonical shifts are one column rightward for the horizontal
adjacency matrix and one row downward for the vertical one; entry
(d, d') weighs the transition from template d at a vertex to template
d' at the next vertex in that direction.  Similarities are evaluated on
the full abstract templates, never on grid-clipped windows, so the
matrices do not depend on where on the grid the pair sits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

HORIZONTAL_SHIFT = (0, 1)
VERTICAL_SHIFT = (1, 0)

SIMILARITY_NAMES = ("overlap", "binary")


@dataclass(frozen=True)
class PatchTemplate:
    """A k×k array of class ids, position-free (k odd)."""

    cells: np.ndarray

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=int)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValueError(f"template cells must be square, got shape {cells.shape}")
        if cells.shape[0] % 2 == 0:
            raise ValueError(f"template side must be odd, got {cells.shape[0]}")
        if cells.min(initial=0) < 0:
            raise ValueError("template class ids must be nonnegative")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def side(self) -> int:
        return self.cells.shape[0]

    @property
    def center_class(self) -> int:
        r = self.side // 2
        return int(self.cells[r, r])


@dataclass(frozen=True)
class PatchDictionary:
    """Ordered collection of same-sized templates over classes {0, ..., c-1}."""

    templates: tuple
    class_count: int
    class_names: Optional[tuple] = None

    def __post_init__(self):
        templates = tuple(self.templates)
        if not templates:
            raise ValueError("dictionary must contain at least one template")
        side = templates[0].side
        for idx, t in enumerate(templates):
            if t.side != side:
                raise ValueError(f"template {idx} has side {t.side}, expected {side}")
            if t.cells.max() >= self.class_count:
                raise ValueError(f"template {idx} uses class id {t.cells.max()} "
                                 f">= class count {self.class_count}")
        if self.class_names is not None:
            names = tuple(self.class_names)
            if len(names) != self.class_count:
                raise ValueError(f"{len(names)} class names for {self.class_count} classes")
            object.__setattr__(self, "class_names", names)
        object.__setattr__(self, "templates", templates)

    @property
    def size(self) -> int:
        return len(self.templates)

    @property
    def side(self) -> int:
        return self.templates[0].side

    @property
    def patch_cells(self) -> int:
        return self.side * self.side

    def cells_array(self) -> np.ndarray:
        """All templates stacked as a (|D|, k, k) int array."""
        return np.stack([t.cells for t in self.templates])


@dataclass(frozen=True)
class PatchAdjacency:
    """The pair of |D|×|D| nonnegative template adjacency matrices."""

    omega_h: np.ndarray
    omega_v: np.ndarray

    def __post_init__(self):
        oh = np.ascontiguousarray(self.omega_h, dtype=float)
        ov = np.ascontiguousarray(self.omega_v, dtype=float)
        if oh.ndim != 2 or oh.shape[0] != oh.shape[1]:
            raise ValueError(f"omega_h must be square, got shape {oh.shape}")
        if ov.shape != oh.shape:
            raise ValueError(f"omega_v shape {ov.shape} differs from omega_h {oh.shape}")
        if (oh < 0).any() or (ov < 0).any():
            raise ValueError("adjacency weights must be nonnegative")
        oh.setflags(write=False)
        ov.setflags(write=False)
        object.__setattr__(self, "omega_h", oh)
        object.__setattr__(self, "omega_v", ov)

    @property
    def size(self) -> int:
        return self.omega_h.shape[0]


def _overlap_slices(side: int, shift) -> tuple:
    """Array slices of the window overlap, for the first and second template."""
    dr, dc = int(shift[0]), int(shift[1])
    r0, r1 = max(0, dr), side + min(0, dr)
    c0, c1 = max(0, dc), side + min(0, dc)
    if r0 >= r1 or c0 >= c1:
        return None
    first = (slice(r0, r1), slice(c0, c1))
    second = (slice(r0 - dr, r1 - dr), slice(c0 - dc, c1 - dc))
    return first, second


def overlap_similarity(d: PatchTemplate, d2: PatchTemplate, shift) -> float:
    """Agreement count on the window overlap divided by the full patch size k².

    `shift` is the (row, col) displacement from the first template's
    center to the second's; empty overlap gives 0.
    """
    if d.side != d2.side:
        raise ValueError(f"template side mismatch: {d.side} vs {d2.side}")
    sl = _overlap_slices(d.side, shift)
    if sl is None:
        return 0.0
    first, second = sl
    agree = int(np.count_nonzero(d.cells[first] == d2.cells[second]))
    return agree / float(d.side * d.side)


def binary_similarity(d: PatchTemplate, d2: PatchTemplate, shift) -> float:
    """1.0 when the two templates coincide on the whole window overlap.

    Empty overlap counts as coinciding (vacuous agreement).
    """
    if d.side != d2.side:
        raise ValueError(f"template side mismatch: {d.side} vs {d2.side}")
    sl = _overlap_slices(d.side, shift)
    if sl is None:
        return 1.0
    first, second = sl
    return 1.0 if bool(np.array_equal(d.cells[first], d2.cells[second])) else 0.0


def similarity_matrix(dictionary: PatchDictionary, similarity: str, shift) -> np.ndarray:
    """All-pairs similarity of the dictionary at one center displacement."""
    if similarity not in SIMILARITY_NAMES:
        raise ValueError(f"similarity must be one of {SIMILARITY_NAMES}, got {similarity!r}")
    cells = dictionary.cells_array()
    n = dictionary.size
    p = dictionary.patch_cells
    sl = _overlap_slices(dictionary.side, shift)
    if sl is None:
        if similarity == "binary":
            return np.ones((n, n))
        return np.zeros((n, n))
    first, second = sl
    a = cells[:, first[0], first[1]]
    b = cells[:, second[0], second[1]]
    agree = (a[:, None] == b[None, :]).sum(axis=(2, 3))
    if similarity == "binary":
        area = a.shape[1] * a.shape[2]
        return (agree == area).astype(float)
    return agree / float(p)


def build_adjacency(dictionary: PatchDictionary, similarity="overlap") -> PatchAdjacency:
    """Template adjacency matrices at the canonical shifts.

    `similarity` is "overlap", "binary", or an explicit (omega_h, omega_v)
    pair of |D|×|D| arrays taken verbatim (custom table).
    """
    if isinstance(similarity, str):
        omega_h = similarity_matrix(dictionary, similarity, HORIZONTAL_SHIFT)
        omega_v = similarity_matrix(dictionary, similarity, VERTICAL_SHIFT)
        return PatchAdjacency(omega_h, omega_v)
    omega_h, omega_v = similarity
    omega_h = np.asarray(omega_h, dtype=float)
    omega_v = np.asarray(omega_v, dtype=float)
    n = dictionary.size
    if omega_h.shape != (n, n) or omega_v.shape != (n, n):
        raise ValueError(f"custom adjacency must be two {n}x{n} matrices, "
                         f"got {omega_h.shape} and {omega_v.shape}")
    return PatchAdjacency(omega_h, omega_v)


def export_dictionary_graph(adjacency: PatchAdjacency) -> str:
    """Weighted edge list of the template graph, split by direction.

    Edges are the strictly positive entries; weights are printed at 17
    significant digits.
    """
    lines = [f"dictgraph {adjacency.size}"]
    for tag, matrix in (("h", adjacency.omega_h), ("v", adjacency.omega_v)):
        for a in range(adjacency.size):
            for b in range(adjacency.size):
                w = matrix[a, b]
                if w > 0.0:
                    lines.append(f"{tag} {a} {b} {w:.17g}")
    return "\n".join(lines) + "\n"


def template_assignment_rows(dictionary: PatchDictionary, class_weights=None) -> np.ndarray:
    """Per-template cell encodings as scaled unit vectors.

    Returns a (|D|, k, k, c) array where cell (r, s) of template d holds
    class_weights[v] times the unit vector of its class v.
    """
    c = dictionary.class_count
    if class_weights is None:
        class_weights = np.ones(c)
    cw = np.asarray(class_weights, dtype=float)
    if cw.shape != (c,):
        raise ValueError(f"expected {c} class weights, got shape {cw.shape}")
    if not np.all(cw > 0.0):
        raise ValueError("class weights must be strictly positive")
    cells = dictionary.cells_array()
    n, k = dictionary.size, dictionary.side
    out = np.zeros((n, k, k, c))
    d_idx = np.arange(n)[:, None, None]
    r_idx = np.arange(k)[None, :, None]
    s_idx = np.arange(k)[None, None, :]
    out[d_idx, r_idx, s_idx, cells] = cw[cells]
    return out


# ---------------------------------------------------------------------------
# file formats


class _LineReader:
    """Token reader over the non-blank, non-comment lines of a text file."""

    def __init__(self, path):
        self.path = str(path)
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read().splitlines()
        self._lines = [(i + 1, line) for i, line in enumerate(raw)
                       if line.strip() and not line.lstrip().startswith("#")]
        self._pos = 0
        self.lineno = 0

    def next_tokens(self, what: str) -> list:
        if self._pos >= len(self._lines):
            raise ValueError(f"{self.path}: unexpected end of file, expected {what}")
        self.lineno, line = self._lines[self._pos]
        self._pos += 1
        return line.split()

    def error(self, message: str) -> ValueError:
        return ValueError(f"{self.path}:{self.lineno}: {message}")

    def done(self) -> bool:
        return self._pos >= len(self._lines)


def write_dictionary(path, dictionary: PatchDictionary) -> None:
    """Write the line-oriented dictionary file format."""
    lines = [f"patchdict v1 {dictionary.side} {dictionary.class_count} {dictionary.size}"]
    for idx, t in enumerate(dictionary.templates):
        lines.append(f"template {idx}")
        for row in t.cells:
            lines.append(" ".join(str(int(v)) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_dictionary(path) -> PatchDictionary:
    """Parse the dictionary file format written by `write_dictionary`."""
    reader = _LineReader(path)
    header = reader.next_tokens("header 'patchdict v1 <k> <c> <count>'")
    if len(header) != 5 or header[0] != "patchdict" or header[1] != "v1":
        raise reader.error("expected header 'patchdict v1 <k> <c> <count>'")
    try:
        side, class_count, count = int(header[2]), int(header[3]), int(header[4])
    except ValueError:
        raise reader.error("header sizes must be integers") from None
    templates = []
    for idx in range(count):
        marker = reader.next_tokens(f"'template {idx}'")
        if len(marker) != 2 or marker[0] != "template" or marker[1] != str(idx):
            raise reader.error(f"expected 'template {idx}'")
        rows = []
        for _ in range(side):
            tokens = reader.next_tokens(f"{side} class ids")
            if len(tokens) != side:
                raise reader.error(f"expected {side} class ids, got {len(tokens)}")
            try:
                row = [int(tok) for tok in tokens]
            except ValueError:
                raise reader.error("class ids must be integers") from None
            if any(v < 0 or v >= class_count for v in row):
                raise reader.error(f"class id outside [0, {class_count})")
            rows.append(row)
        templates.append(PatchTemplate(np.array(rows, dtype=int)))
    if not reader.done():
        reader.next_tokens("end of file")
        raise reader.error("trailing content after last template")
    return PatchDictionary(tuple(templates), class_count=class_count)


def write_omega(path, adjacency: PatchAdjacency) -> None:
    """Write the custom adjacency file: omega_h rows, then omega_v rows."""
    lines = [f"omega v1 {adjacency.size}"]
    for matrix in (adjacency.omega_h, adjacency.omega_v):
        for row in matrix:
            lines.append(" ".join(f"{v:.17g}" for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_omega(path) -> PatchAdjacency:
    """Parse the custom adjacency file written by `write_omega`."""
    reader = _LineReader(path)
    header = reader.next_tokens("header 'omega v1 <count>'")
    if len(header) != 3 or header[0] != "omega" or header[1] != "v1":
        raise reader.error("expected header 'omega v1 <count>'")
    try:
        count = int(header[2])
    except ValueError:
        raise reader.error("matrix size must be an integer") from None
    matrices = []
    for _ in range(2):
        rows = []
        for _ in range(count):
            tokens = reader.next_tokens(f"{count} weights")
            if len(tokens) != count:
                raise reader.error(f"expected {count} weights, got {len(tokens)}")
            try:
                rows.append([float(tok) for tok in tokens])
            except ValueError:
                raise reader.error("weights must be numbers") from None
        matrices.append(np.array(rows))
    if not reader.done():
        reader.next_tokens("end of file")
        raise reader.error("trailing content after matrices")
    return PatchAdjacency(matrices[0], matrices[1])

"""PGM (P2/P5) and delimited text I/O for label and uncertainty fields."""

from __future__ import annotations

import numpy as np


def read_pgm(path) -> np.ndarray:
    """Read a PGM image (ASCII P2 or binary P5) as an H×W int array."""
    with open(path, "rb") as fh:
        data = fh.read()

    tokens = []
    pos = 0
    # header tokens, honoring '#' comments
    while len(tokens) < 4 and pos < len(data):
        if data[pos:pos + 1].isspace():
            pos += 1
            continue
        if data[pos:pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
            continue
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    if len(tokens) < 4:
        raise ValueError(f"{path}: truncated PGM header")
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"{path}: unsupported magic {magic!r}, expected P2 or P5")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError:
        raise ValueError(f"{path}: non-integer PGM header fields") from None
    if width < 1 or height < 1 or not (0 < maxval < 65536):
        raise ValueError(f"{path}: invalid PGM dimensions {width}x{height} maxval {maxval}")

    if magic == b"P2":
        values = data[pos:].split()
        if len(values) != width * height:
            raise ValueError(f"{path}: expected {width * height} pixels, got {len(values)}")
        try:
            pixels = np.array([int(v) for v in values], dtype=int)
        except ValueError:
            raise ValueError(f"{path}: non-integer pixel value") from None
    else:
        pos += 1  # single whitespace byte after maxval
        count = width * height
        if maxval > 255:
            raw = data[pos:pos + 2 * count]
            if len(raw) != 2 * count:
                raise ValueError(f"{path}: truncated P5 pixel data")
            pixels = np.frombuffer(raw, dtype=">u2").astype(int)
        else:
            raw = data[pos:pos + count]
            if len(raw) != count:
                raise ValueError(f"{path}: truncated P5 pixel data")
            pixels = np.frombuffer(raw, dtype=np.uint8).astype(int)
    if pixels.max(initial=0) > maxval:
        raise ValueError(f"{path}: pixel value exceeds maxval {maxval}")
    return pixels.reshape(height, width)


def write_pgm(path, image, maxval=None, raw=False) -> None:
    """Write an H×W int array as PGM; ASCII P2 by default, binary P5 if raw."""
    image = np.asarray(image)
    if image.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {image.shape}")
    image = image.astype(int)
    if maxval is None:
        maxval = max(int(image.max(initial=0)), 1)
    if image.min(initial=0) < 0 or image.max(initial=0) > maxval:
        raise ValueError(f"pixel values outside [0, {maxval}]")
    height, width = image.shape
    if raw:
        if maxval > 255:
            body = image.astype(">u2").tobytes()
        else:
            body = image.astype(np.uint8).tobytes()
        with open(path, "wb") as fh:
            fh.write(f"P5\n{width} {height}\n{maxval}\n".encode("ascii"))
            fh.write(body)
    else:
        lines = ["P2", f"{width} {height}", str(maxval)]
        lines.extend(" ".join(str(v) for v in row) for row in image)
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def write_int_csv(path, values) -> None:
    """Comma-separated integers, one grid row per line."""
    values = np.asarray(values).astype(int)
    if values.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {values.shape}")
    lines = [",".join(str(v) for v in row) for row in values]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_int_csv(path) -> np.ndarray:
    """Parse a comma-separated integer grid written by `write_int_csv`."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([int(tok) for tok in line.split(",")])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer entry") from None
    if not rows:
        raise ValueError(f"{path}: empty label file")
    width = len(rows[0])
    for idx, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path}:{idx + 1}: expected {width} columns, got {len(row)}")
    return np.array(rows, dtype=int)


def write_float_csv(path, values) -> None:
    """Comma-separated reals at 17 significant digits, one row per line."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 3:  # per-class channels flattened class-fastest
        values = values.reshape(values.shape[0], -1)
    if values.ndim != 2:
        raise ValueError(f"expected a 2-D or 3-D array, got shape {values.shape}")
    lines = [",".join(f"{v:.17g}" for v in row) for row in values]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_label_field(path) -> np.ndarray:
    """Read a label field from PGM (sniffed by magic) or integer CSV."""
    with open(path, "rb") as fh:
        head = fh.read(2)
    if head in (b"P2", b"P5"):
        return read_pgm(path)
    return read_int_csv(path)

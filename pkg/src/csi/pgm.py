"""Portable graymap (PGM) reading and writing, plain (P2) and raw (P5)."""

import numpy as np

from .errors import PgmError

_WHITESPACE = b" \t\n\r\v\f"


class _HeaderReader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos : self.pos + 1]
            if c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                break

    def token(self, what):
        self.skip_space()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos : self.pos + 1] not in _WHITESPACE + b"#":
            self.pos += 1
        if self.pos == start:
            raise PgmError(f"missing {what}", start)
        return data[start : self.pos], start

    def integer(self, what):
        tok, start = self.token(what)
        if not tok.isdigit():
            raise PgmError(f"{what} is not a non-negative integer: {tok[:16]!r}", start)
        return int(tok), start


def read_pgm(data):
    """Parse PGM bytes.

    Returns ``(samples, maxval)`` where ``samples`` is a ``(height, width)``
    integer array, top row first.
    """
    data = bytes(data)
    reader = _HeaderReader(data)
    magic, _ = reader.token("magic number")
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"not a graymap (magic {magic[:8]!r})", 0)
    width, off = reader.integer("width")
    if width == 0:
        raise PgmError("zero width", off)
    height, off = reader.integer("height")
    if height == 0:
        raise PgmError("zero height", off)
    maxval, off = reader.integer("maxval")
    if not 0 < maxval <= 65535:
        raise PgmError(f"maxval {maxval} outside 1..65535", off)
    count = width * height

    if magic == b"P5":
        if reader.pos >= len(data) or data[reader.pos : reader.pos + 1] not in _WHITESPACE:
            raise PgmError("expected single whitespace after maxval", reader.pos)
        start = reader.pos + 1
        itemsize = 1 if maxval < 256 else 2
        end = start + count * itemsize
        if len(data) < end:
            raise PgmError(f"truncated raster: need {count * itemsize} bytes, have {len(data) - start}", len(data))
        dtype = np.uint8 if itemsize == 1 else np.dtype(">u2")
        samples = np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.uint16)
    else:
        values = []
        for _ in range(count):
            reader.skip_space()
            if reader.pos >= len(data):
                raise PgmError(f"truncated raster: got {len(values)} of {count} samples", reader.pos)
            v, _ = reader.integer("sample")
            values.append(v)
        samples = np.array(values, dtype=np.uint16)
    if samples.max(initial=0) > maxval:
        raise PgmError("sample exceeds maxval", reader.pos)
    return samples.reshape(height, width), maxval


def write_pgm(samples, maxval=None, binary=True, comments=()):
    """Serialize a 2-D integer array as PGM bytes."""
    samples = np.asarray(samples)
    if samples.ndim != 2 or 0 in samples.shape:
        raise ValueError("samples must be a non-empty 2-D array")
    if not np.issubdtype(samples.dtype, np.integer):
        raise TypeError("samples must be integers; quantize first")
    if maxval is None:
        maxval = 255 if samples.max() < 256 else 65535
    if samples.min() < 0 or samples.max() > maxval or maxval > 65535:
        raise ValueError("samples out of range for maxval")
    height, width = samples.shape
    header = b"P5\n" if binary else b"P2\n"
    for line in comments:
        header += b"# " + line.encode("ascii") + b"\n"
    header += f"{width} {height}\n{maxval}\n".encode("ascii")
    if binary:
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        return header + samples.astype(dtype).tobytes()
    rows = [" ".join(str(int(v)) for v in row) for row in samples]
    return header + ("\n".join(rows) + "\n").encode("ascii")


def quantize(values, maxval=255):
    """Map values in [0, 1] to integers 0..maxval (round half to even)."""
    values = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    return np.rint(values * maxval).astype(np.uint16 if maxval > 255 else np.uint8)

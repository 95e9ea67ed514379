"""Frame ingestion: PGM decoding, grayscale conversion, downsampling, and
assembly of the p x n observation matrix.

Only Netpbm PGM (P2 ASCII / P5 binary) is decoded in core -- it is bit-exact
and dependency-free.  Convert video to numbered PGM frames with any standard
tool; frames are ordered by lexicographic file name, so zero-pad the numbers.
Pixels are normalized to [0, 1] floats at load.
"""

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

LUMA_WEIGHTS = (0.299, 0.587, 0.114)

_clamped = 0


class PgmError(ValueError):
    """Base class for PGM decode failures."""


class PgmBadMagicError(PgmError):
    pass


class PgmTruncatedError(PgmError):
    pass


class PgmMaxvalError(PgmError):
    pass


@dataclass(frozen=True)
class FrameSequence:
    width: int
    height: int
    frames: list  # flattened row-major vectors, values in [0, 1]
    source_names: list


def _tokenize_header(data, count):
    """Pull `count` whitespace-separated tokens after the magic, skipping
    '#' comments.  Returns (tokens, offset past the single whitespace byte
    that terminates the last token)."""
    tokens = []
    pos = 2
    while len(tokens) < count:
        if pos >= len(data):
            raise PgmTruncatedError("header ended early")
        ch = data[pos:pos + 1]
        if ch in b" \t\r\n":
            pos += 1
        elif ch == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise PgmTruncatedError("unterminated comment")
            pos = nl + 1
        else:
            m = re.match(rb"[^\s#]+", data[pos:])
            tokens.append(m.group(0))
            pos += m.end()
    if pos >= len(data) or data[pos:pos + 1] not in b" \t\r\n":
        raise PgmTruncatedError("missing whitespace after header")
    return tokens, pos + 1


def load_pgm(path):
    """Decode a P2/P5 PGM file to a (height, width) float array in [0, 1]."""
    path = Path(path)
    data = path.read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmBadMagicError(f"{path.name}: bad magic {magic!r}, expected P2 or P5")
    tokens, payload_at = _tokenize_header(data, 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise PgmError(f"{path.name}: non-numeric header fields {tokens}") from None
    if width < 1 or height < 1:
        raise PgmError(f"{path.name}: bad dimensions {width}x{height}")
    if maxval == 0:
        raise PgmMaxvalError(f"{path.name}: maxval is 0")
    if maxval > 65535:
        raise PgmMaxvalError(f"{path.name}: maxval {maxval} exceeds 65535")
    count = width * height
    if magic == b"P5":
        payload = data[payload_at:]
        itemsize = 2 if maxval > 255 else 1
        if len(payload) < count * itemsize:
            raise PgmTruncatedError(
                f"{path.name}: expected {count * itemsize} payload bytes, "
                f"got {len(payload)}")
        dtype = ">u2" if itemsize == 2 else np.uint8
        raw = np.frombuffer(payload[:count * itemsize], dtype=dtype)
        values = raw.astype(np.float64)
    else:
        fields = data[payload_at - 1:].split()
        if len(fields) < count:
            raise PgmTruncatedError(
                f"{path.name}: expected {count} samples, got {len(fields)}")
        try:
            values = np.array([int(f) for f in fields[:count]], dtype=np.float64)
        except ValueError:
            raise PgmError(f"{path.name}: non-numeric sample data") from None
    if values.min() < 0 or values.max() > maxval:
        raise PgmError(f"{path.name}: sample out of range [0, {maxval}]")
    return (values / maxval).reshape((height, width))


def write_pgm(path, frame, maxval=255):
    """Write a (height, width) array of [0, 1] values as binary P5."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 2:
        raise ValueError("expected a 2-D frame")
    quant = np.rint(np.clip(frame, 0.0, 1.0) * maxval)
    height, width = frame.shape
    header = f"P5\n{width} {height}\n{maxval}\n".encode()
    dtype = ">u2" if maxval > 255 else np.uint8
    Path(path).write_bytes(header + quant.astype(dtype).tobytes())


def rgb_to_gray(r, g, b):
    """Standard luma combination 0.299 r + 0.587 g + 0.114 b.

    Out-of-range inputs are clamped to [0, 1]; every clamped sample bumps a
    module counter readable via clamp_count().
    """
    global _clamped
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out_of_range = 0
    for ch in (r, g, b):
        out_of_range += int(((ch < 0.0) | (ch > 1.0)).sum())
    if out_of_range:
        _clamped += out_of_range
        r = np.clip(r, 0.0, 1.0)
        g = np.clip(g, 0.0, 1.0)
        b = np.clip(b, 0.0, 1.0)
    wr, wg, wb = LUMA_WEIGHTS
    gray = wr * r + wg * g + wb * b
    return gray if gray.ndim else float(gray)


def clamp_count():
    return _clamped


def reset_clamp_count():
    global _clamped
    _clamped = 0


def downsample(frame, factor):
    """Non-overlapping factor x factor block averages of a 2-D frame."""
    frame = np.asarray(frame, dtype=np.float64)
    if factor < 1:
        raise ValueError(f"downsample factor must be >= 1, got {factor}")
    height, width = frame.shape
    if height % factor or width % factor:
        raise ValueError(
            f"factor {factor} does not divide frame dimensions {height}x{width}")
    return frame.reshape(height // factor, factor,
                         width // factor, factor).mean(axis=(1, 3))


def load_frame_dir(directory, downsample_factor=1):
    """Load every .pgm file in a directory (lexicographic order) as a sequence."""
    directory = Path(directory)
    paths = sorted(p for p in directory.iterdir() if p.suffix.lower() == ".pgm")
    if not paths:
        raise FileNotFoundError(f"no .pgm frames in {directory}")
    frames = []
    names = []
    width = height = None
    for p in paths:
        img = load_pgm(p)
        if downsample_factor > 1:
            img = downsample(img, downsample_factor)
        h, w = img.shape
        if width is None:
            width, height = w, h
        elif (w, h) != (width, height):
            raise ValueError(
                f"frame {p.name} has size {w}x{h}, expected {width}x{height}")
        frames.append(img.reshape(-1))
        names.append(p.name)
    return FrameSequence(width=width, height=height, frames=frames,
                         source_names=names)


def assemble(seq):
    """Stack a frame sequence into the p x n observation matrix (frame = column)."""
    if not seq.frames:
        raise ValueError("empty frame sequence")
    p = seq.width * seq.height
    for name, frame in zip(seq.source_names, seq.frames):
        if frame.shape != (p,):
            raise ValueError(
                f"frame {name} has {frame.shape[0]} pixels, expected {p}")
    return np.column_stack(seq.frames)

"""Binary PGM (P5) / PPM (P6) reading and writing, 8-bit samples only."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .files import atomic_write

MAX_DIM = 65535


class ImageFormatError(ValueError):
    """File is not an 8-bit binary PGM/PPM we can parse."""


@dataclass
class Image:
    """Row-major 8-bit image; data has shape (height, width, channels)."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.ndim == 2:
            a = a[:, :, None]
        if a.ndim != 3 or a.shape[2] not in (1, 3):
            raise ValueError(f"unsupported image shape {np.shape(self.data)}; need 1 or 3 channels")
        if a.shape[0] == 0 or a.shape[1] == 0:
            raise ValueError("empty image")
        if a.shape[0] > MAX_DIM or a.shape[1] > MAX_DIM:
            raise ValueError("image dimensions above 65535")
        if a.dtype != np.uint8:
            raise ValueError(f"image samples must be uint8, got {a.dtype}")
        self.data = np.ascontiguousarray(a)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]


def _tokens(buf: bytes, count: int) -> tuple[list[bytes], int]:
    """Read `count` whitespace-separated header tokens, skipping # comments."""
    out = []
    i = 0
    n = len(buf)
    while len(out) < count:
        while i < n and buf[i:i + 1].isspace():
            i += 1
        if i < n and buf[i:i + 1] == b"#":
            while i < n and buf[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not buf[i:i + 1].isspace() and buf[i:i + 1] != b"#":
            i += 1
        if start == i:
            raise ImageFormatError("truncated header")
        out.append(buf[start:i])
    return out, i


def decode(buf: bytes) -> Image:
    if buf[:2] not in (b"P5", b"P6"):
        raise ImageFormatError("not a binary PGM (P5) or PPM (P6) file")
    channels = 1 if buf[:2] == b"P5" else 3
    toks, pos = _tokens(buf[2:], 3)
    try:
        width, height, maxval = (int(t) for t in toks)
    except ValueError:
        raise ImageFormatError("non-numeric header field") from None
    if width < 1 or height < 1 or width > MAX_DIM or height > MAX_DIM:
        raise ImageFormatError(f"bad dimensions {width}x{height}")
    if not 0 < maxval < 256:
        raise ImageFormatError(f"maxval {maxval} unsupported (8-bit only)")
    # exactly one whitespace byte separates the header from the raster
    pos += 2 + 1
    need = width * height * channels
    raster = buf[pos:pos + need]
    if len(raster) != need:
        raise ImageFormatError(f"raster truncated: {len(raster)} of {need} bytes")
    data = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, channels).copy()
    if maxval != 255:
        # rescale to the full 8-bit range
        data = ((data.astype(np.uint32) * 255 + maxval // 2) // maxval).astype(np.uint8)
    return Image(data)


def encode(img: Image) -> bytes:
    magic = b"P5" if img.channels == 1 else b"P6"
    header = b"%s\n%d %d\n255\n" % (magic, img.width, img.height)
    return header + img.data.tobytes()


def read(path) -> Image:
    with open(path, "rb") as f:
        return decode(f.read())


def write(path, img: Image) -> None:
    atomic_write(path, encode(img))

"""Blurring images with the surround function.

Two convolution modes, both centred so that tap offset (dx, dy) weights the
pixel at (x + dx, y + dy), with offsets spanning the kernel's coordinate grid
(-128..127 for the default 256-tap kernel):

separable
    Horizontal then vertical pass with the real-valued 1D profile
    e^(-x^2 / 2 sigma^2). Each pass is a linear correlation evaluated through
    FFTs; after the horizontal transform only the frequency bins the profile
    does not annihilate (|G| >= 1e-7 |G(0)|) are carried through the vertical
    pass and the inverse. Float32 throughout, rounded to 8 bits at the end.

direct2d
    Full 2D correlation with the bit-model UQ8 tile, in exact integer
    arithmetic (float64 GEMM over integer-valued operands; every partial sum
    stays below 2^53). Meant for fidelity checks on crops.

Worker threads split the work into independent rows/blocks, so the result
does not depend on the thread count.
"""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft
from numpy.lib.stride_tricks import sliding_window_view

from .datapath import ScaleShift
from .generator import KernelSpec, KernelTile, generate_tile
from .netpbm import Image
from .oracle import gaussian_1d

BOUNDARIES = {"replicate": "edge", "reflect": "symmetric", "zero": "constant"}
MODES = ("separable", "direct2d")
THREADS_ENV = "GAUSS2D_THREADS"

_PRUNE = 1e-7
_BLOCK = 64


@dataclass(frozen=True)
class ConvConfig:
    sigma: int = 16
    boundary: str = "replicate"
    mode: str = "separable"
    normalize: bool = True
    size: int = 256

    def __post_init__(self):
        ScaleShift.from_sigma(self.sigma)
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {sorted(BOUNDARIES)}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.size < 1:
            raise ValueError("kernel size must be >= 1")

    @property
    def pad(self) -> tuple[int, int]:
        return self.size // 2, self.size - self.size // 2 - 1


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def profile_1d(cfg: ConvConfig) -> np.ndarray:
    """Real 1D taps on offsets -size//2 .. size - size//2 - 1."""
    offsets = np.arange(cfg.size) - cfg.size // 2
    g = gaussian_1d(offsets, cfg.sigma)
    if cfg.normalize:
        g = g / g.sum()
    return g


def kernel_tile(cfg: ConvConfig) -> KernelTile:
    return generate_tile(KernelSpec(cfg.size, cfg.size, (cfg.sigma,)), cfg.sigma)[0]


def _pad(a: np.ndarray, axis: int, cfg: ConvConfig) -> np.ndarray:
    widths = [(0, 0)] * a.ndim
    widths[axis] = cfg.pad
    return np.pad(a, widths, mode=BOUNDARIES[cfg.boundary])


def _pad_cols_f32(planes: np.ndarray, cfg: ConvConfig) -> np.ndarray:
    """float32 copy of `planes` padded along the last axis; np.pad is slow here."""
    before, after = cfg.pad
    if cfg.boundary == "reflect":
        return _pad(planes.astype(np.float32), 2, cfg)
    c, h, w = planes.shape
    out = np.empty((c, h, before + w + after), np.float32)
    out[:, :, before:before + w] = planes
    if cfg.boundary == "replicate":
        out[:, :, :before] = planes[:, :, :1]
        out[:, :, before + w:] = planes[:, :, -1:]
    else:
        out[:, :, :before] = 0
        out[:, :, before + w:] = 0
    return out


def _separable(planes: np.ndarray, g: np.ndarray, cfg: ConvConfig, threads: int) -> np.ndarray:
    c, h, w = planes.shape
    taps = g.size
    rev = g[::-1].astype(np.float32)

    nfx = sfft.next_fast_len(w + taps - 1, real=True)
    gx = sfft.rfft(rev, nfx)
    mag = np.abs(gx)
    keep = int(np.nonzero(mag >= _PRUNE * mag[0])[0][-1]) + 1
    spec = sfft.rfft(_pad_cols_f32(planes, cfg), nfx, axis=2, workers=threads)[:, :, :keep]
    spec *= gx[:keep].astype(np.complex64)

    # row padding commutes with the per-row horizontal transform
    spec = _pad(spec, 1, cfg)
    nfy = sfft.next_fast_len(h + taps - 1)
    gy = sfft.fft(rev, nfy).astype(np.complex64)
    col = sfft.fft(spec, nfy, axis=1, workers=threads)
    col *= gy[None, :, None]
    spec = sfft.ifft(col, axis=1, workers=threads)[:, taps - 1:taps - 1 + h, :]

    full = np.zeros((c, h, nfx // 2 + 1), np.complex64)
    full[:, :, :keep] = spec
    out = sfft.irfft(full, nfx, axis=2, workers=threads)[:, :, taps - 1:taps - 1 + w]
    # +0.5 then truncation is round-half-up once values are clipped non-negative
    np.add(out, 0.5, out=out)
    np.clip(out, 0, 255, out=out)
    return out.astype(np.uint8)


def _toeplitz(tile: np.ndarray, bw: int) -> np.ndarray:
    """H[i, j, x] = tile[i, j - x]: one row of taps applied to bw outputs."""
    kh, kw = tile.shape
    h = np.zeros((kh, bw + kw - 1, bw), np.float64)
    for x in range(bw):
        h[:, x:x + kw, x] = tile
    return h.reshape(kh * (bw + kw - 1), bw)


def _direct2d(planes: np.ndarray, tile: np.ndarray, cfg: ConvConfig, threads: int) -> np.ndarray:
    c, h, w = planes.shape
    kh, kw = tile.shape
    padded = _pad(_pad(planes, 1, cfg), 2, cfg).astype(np.float64)
    bw = min(_BLOCK, w)
    bh = min(_BLOCK, h)
    toe = _toeplitz(tile.astype(np.float64), bw)
    acc = np.empty((c, h, w), np.int64)

    def block(ch, y0, x0):
        y1 = min(y0 + bh, h)
        x1 = min(x0 + bw, w)
        # last column block may be narrower; pad it out to bw with dummy columns
        src = padded[ch, y0:y1 + kh - 1, x0:x0 + bw + kw - 1]
        if src.shape[1] < bw + kw - 1:
            src = np.pad(src, ((0, 0), (0, bw + kw - 1 - src.shape[1])))
        win = sliding_window_view(src, kh, axis=0)  # (rows, bw+kw-1, kh)
        lhs = np.ascontiguousarray(win.transpose(0, 2, 1)).reshape(y1 - y0, -1)
        acc[ch, y0:y1, x0:x1] = (lhs @ toe)[:, :x1 - x0].astype(np.int64)

    jobs = [(ch, y0, x0) for ch in range(c) for y0 in range(0, h, bh) for x0 in range(0, w, bw)]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(lambda j: block(*j), jobs))
    else:
        for j in jobs:
            block(*j)

    if cfg.normalize:
        k = normalize_tile_sum(tile)
        out = (2 * acc + k) // (2 * k)
    else:
        out = (acc + 128) >> 8
    return np.clip(out, 0, 255).astype(np.uint8)


def normalize_tile_sum(tile: np.ndarray) -> int:
    k = int(tile.sum(dtype=np.int64))
    if k <= 0:
        raise ValueError("degenerate kernel: all samples are zero")
    return k


def blur(img: Image, cfg: ConvConfig | None = None, kernel=None, threads: int | None = None) -> Image:
    """Blur every channel of `img` with the surround function of cfg.sigma.

    `kernel` overrides the generated one: a 1D profile for separable mode or a
    KernelTile / UQ8 array for direct2d.
    """
    cfg = cfg or ConvConfig()
    threads = threads or default_threads()
    planes = np.moveaxis(img.data, 2, 0)
    if cfg.mode == "separable":
        g = profile_1d(cfg) if kernel is None else np.asarray(kernel, dtype=np.float64)
        if g.shape != (cfg.size,):
            raise ValueError(f"profile must have {cfg.size} taps")
        out = _separable(planes, g, cfg, threads)
    else:
        if kernel is None:
            kernel = kernel_tile(cfg)
        tile = kernel.data if isinstance(kernel, KernelTile) else np.asarray(kernel)
        if tile.shape != (cfg.size, cfg.size):
            raise ValueError(f"tile must be {cfg.size}x{cfg.size}")
        out = _direct2d(planes, tile, cfg, threads)
    return Image(np.moveaxis(out, 0, 2))


@dataclass
class BenchResult:
    frames: int
    seconds: float
    samples_per_sec: float
    frames_per_sec: float
    digest: str


def synthetic_frame(width: int, height: int, channels: int, seed: int = 0) -> Image:
    rng = np.random.default_rng(seed)
    return Image(rng.integers(0, 256, (height, width, channels), dtype=np.uint8))


def benchmark(width: int, height: int, channels: int, cfg: ConvConfig | None = None,
              frames: int = 30, threads: int | None = None, seed: int = 0) -> BenchResult:
    """Sustained blur throughput over `frames` synthetic frames (after one warm-up)."""
    if frames < 1:
        raise ValueError("benchmark needs at least one frame")
    cfg = cfg or ConvConfig()
    img = synthetic_frame(width, height, channels, seed)
    kernel = profile_1d(cfg) if cfg.mode == "separable" else kernel_tile(cfg)
    blur(img, cfg, kernel, threads)
    t0 = time.perf_counter()
    for _ in range(frames):
        out = blur(img, cfg, kernel, threads)
    dt = time.perf_counter() - t0
    pixels = width * height * frames
    return BenchResult(frames, dt, pixels / dt, frames / dt, hashlib.sha256(out.data.tobytes()).hexdigest())


def generator_benchmark(frames: int = 200, spec: KernelSpec | None = None) -> BenchResult:
    """Raw gout streaming rate: raster positions per second, all scales produced."""
    from .generator import FrameStreamer

    if frames < 1:
        raise ValueError("benchmark needs at least one frame")
    streamer = FrameStreamer(spec)
    streamer.frame()
    t0 = time.perf_counter()
    for _ in range(frames):
        out = streamer.frame()
    dt = time.perf_counter() - t0
    n = streamer.spec.samples * frames
    return BenchResult(frames, dt, n / dt, frames / dt, hashlib.sha256(out.tobytes()).hexdigest())

"""The gauss2D machine: coordinate ROM -> squares -> sum -> per-scale shift -> exp LUT.

Two routes produce the same tiles:

* `generate_tile` / `generate_all_scales` evaluate each stage over the whole
  frame with numpy. This is the fast path.
* `simulate` clocks the machine one tick at a time through `PipeStage`
  registers, exactly as the hardware streams it, and can hand every tick's
  register contents to a callback (used for test-vector export).

Tiles are unnormalized UQ8 samples. The normalization constant is a second
pass over a finished tile (`normalize`).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .datapath import (
    DEFAULT_SCALES,
    ConfigError,
    ExpLut,
    Latencies,
    PipeStage,
    ScaleShift,
    default_lut,
    multiply,
    add_sq,
    scale_down,
    scale_down_array,
)
from .fxp import unsigned_width, UQ8_SCALE
from .rom import CoordRom


@dataclass(frozen=True)
class KernelSpec:
    rows: int = 256
    cols: int = 256
    scales: tuple = DEFAULT_SCALES

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ConfigError("kernel dimensions must be >= 1")
        if self.rows > 65536 or self.cols > 65536:
            raise ConfigError("kernel dimensions above 65536 are not supported")
        scales = tuple(ScaleShift.from_sigma(s) for s in self.scales)
        if not scales:
            raise ConfigError("at least one scale is required")
        object.__setattr__(self, "scales", scales)

    @property
    def x_rom(self) -> CoordRom:
        return _rom(self.cols)

    @property
    def y_rom(self) -> CoordRom:
        return _rom(self.rows)

    @property
    def samples(self) -> int:
        return self.rows * self.cols

    @property
    def center(self) -> tuple[int, int]:
        """(row, col) index of coordinate (0, 0)."""
        return self.rows // 2, self.cols // 2

    @property
    def coord_bits(self) -> int:
        return max(self.x_rom.word_bits, self.y_rom.word_bits)

    @property
    def mag_bits(self) -> int:
        return unsigned_width(max(self.rows // 2, self.cols // 2))

    @property
    def max_sum(self) -> int:
        return (self.cols // 2) ** 2 + (self.rows // 2) ** 2

    @property
    def prod_bits(self) -> int:
        return 2 * self.mag_bits

    @property
    def sum_bits(self) -> int:
        return self.prod_bits + 1

    def key(self) -> str:
        return f"{self.rows}x{self.cols}"


_ROMS: dict[int, CoordRom] = {}


def _rom(depth: int) -> CoordRom:
    if depth not in _ROMS:
        _ROMS[depth] = CoordRom(depth)
    return _ROMS[depth]


@dataclass
class CycleReport:
    total_ticks: int
    fill_latency: int
    samples: int

    @property
    def throughput_samples_per_tick(self) -> float:
        return self.samples / self.total_ticks if self.total_ticks else 0.0


@dataclass
class KernelTile:
    spec: KernelSpec
    scale: ScaleShift
    data: np.ndarray  # (rows, cols) uint8, raster order

    @property
    def sigma(self) -> int:
        return self.scale.sigma

    def at(self, x: int, y: int) -> int:
        r0, c0 = self.spec.center
        return int(self.data[y + r0, x + c0])

    def digest(self) -> str:
        return hashlib.sha256(self.data.tobytes()).hexdigest()


@dataclass
class NormConstant:
    sigma: int
    k_raw: int
    k_real: float = field(init=False)

    def __post_init__(self):
        if self.k_raw <= 0:
            raise ValueError("degenerate kernel: all samples are zero")
        self.k_real = UQ8_SCALE / self.k_raw

    def apply(self, data: np.ndarray) -> np.ndarray:
        """Unit-gain real weights for a UQ8 tile: word / k_raw."""
        return data.astype(np.float64) / self.k_raw


def frame_report(spec: KernelSpec, lat: Latencies) -> CycleReport:
    return CycleReport(spec.samples + lat.total, lat.total, spec.samples)


def square_sums(spec: KernelSpec) -> np.ndarray:
    """Shared front end: x^2 + y^2 for every raster position, computed once."""
    xm = np.abs(spec.x_rom.words)
    ym = np.abs(spec.y_rom.words)
    return (ym * ym)[:, None] + (xm * xm)[None, :]


def back_end(sums: np.ndarray, sc: ScaleShift, lut: ExpLut | None = None) -> np.ndarray:
    """Per-scale chain: shift, saturate, table lookup."""
    lut = lut or default_lut()
    return lut.lookup(scale_down_array(sums, sc, lut.frac_bits, lut.ceiling))


def generate_tile(spec: KernelSpec, sigma, latencies: Latencies | None = None,
                  lut: ExpLut | None = None) -> tuple[KernelTile, CycleReport]:
    sc = ScaleShift.from_sigma(sigma)
    lat = latencies or Latencies()
    data = back_end(square_sums(spec), sc, lut)
    return KernelTile(spec, sc, data), frame_report(spec, lat)


def generate_all_scales(spec: KernelSpec | None = None, latencies: Latencies | None = None,
                        lut: ExpLut | None = None, shared: bool = True):
    """Tiles for every scale of `spec` plus one frame report.

    With `shared` the squares and sums are computed once and fanned out to the
    per-scale chains; otherwise each scale runs its own front end.
    """
    spec = spec or KernelSpec()
    lat = latencies or Latencies()
    if shared:
        sums = square_sums(spec)
        tiles = [KernelTile(spec, sc, back_end(sums, sc, lut)) for sc in spec.scales]
    else:
        tiles = [generate_tile(spec, sc, lat, lut)[0] for sc in spec.scales]
    return tiles, frame_report(spec, lat)


def normalize(tile: KernelTile) -> NormConstant:
    return NormConstant(tile.sigma, int(tile.data.sum(dtype=np.int64)))


@dataclass
class TickState:
    """Register contents visible at the end of one clock tick (None = not valid)."""

    tick: int
    addr1: int | None
    addr2: int | None
    dout1: int | None
    dout2: int | None
    result_x2: int | None
    result_y2: int | None
    sum: int | None
    u: tuple
    gout: tuple


def simulate(spec: KernelSpec | None = None, latencies: Latencies | None = None,
             lut: ExpLut | None = None, on_tick=None):
    """Clock one frame through the pipelined machine.

    The counters issue one coordinate pair per tick for rows*cols ticks, then
    enable drops and the pipeline drains. Returns (tiles, CycleReport), where
    the report's fill latency is the tick of the first valid gout.
    """
    spec = spec or KernelSpec()
    lat = latencies or Latencies()
    lut = lut or default_lut()
    x_rom, y_rom = spec.x_rom, spec.y_rom
    bits = spec.mag_bits

    def square(m):
        return multiply(m, m, bits)

    mult_x = PipeStage(square, lat.mult, "mult_x")
    mult_y = PipeStage(square, lat.mult, "mult_y")
    adder = PipeStage(add_sq, lat.add, "add")
    scalers = [PipeStage(lambda s, sc=sc: scale_down(s, sc, lut.frac_bits, lut.ceiling),
                         lat.scale, f"scale{sc.sigma}") for sc in spec.scales]
    exps = [PipeStage(lut, lat.exp, f"exp{sc.sigma}") for sc in spec.scales]

    n = spec.samples
    outs = [np.zeros(n, dtype=np.uint8) for _ in spec.scales]
    written = 0
    first_valid = None
    addr1 = addr2 = 0
    tick = 0
    while written < n:
        issuing = tick < n
        if issuing:
            dout1, dout2 = x_rom[addr1], y_rom[addr2]
            a1, a2 = addr1, addr2
            m1, m2 = abs(dout1), abs(dout2)
            addr1 += 1
            if addr1 == x_rom.depth:
                addr1 = 0
                addr2 = (addr2 + 1) % y_rom.depth
        else:
            a1 = a2 = dout1 = dout2 = m1 = m2 = None
        x2 = mult_x.tick(m1)
        y2 = mult_y.tick(m2)
        s = adder.tick(x2, y2)
        us = tuple(st.tick(s) for st in scalers)
        gs = tuple(st.tick(u) for st, u in zip(exps, us))
        if gs[0] is not None:
            if first_valid is None:
                first_valid = tick
            for out, g in zip(outs, gs):
                out[written] = g
            written += 1
        if on_tick is not None:
            on_tick(TickState(tick, a1, a2, dout1, dout2, x2, y2, s, us, gs))
        tick += 1

    tiles = [KernelTile(spec, sc, out.reshape(spec.rows, spec.cols)) for sc, out in zip(spec.scales, outs)]
    return tiles, CycleReport(tick, first_valid, n)


class FrameStreamer:
    """Repeatedly emits whole frames of g-outputs for throughput measurement.

    Same arithmetic as `back_end`, arranged for speed: (s << F) >> shift is
    split into a single shift, and the table read clamps out-of-range codes to
    the last entry, which is the saturation rule.
    """

    def __init__(self, spec: KernelSpec | None = None, lut: ExpLut | None = None):
        self.spec = spec or KernelSpec()
        self.lut = lut or default_lut()
        xm = np.abs(self.spec.x_rom.words).astype(np.int32)
        ym = np.abs(self.spec.y_rom.words).astype(np.int32)
        self._x2 = (xm * xm)[None, :]
        self._y2 = (ym * ym)[:, None]
        shape = (self.spec.rows, self.spec.cols)
        self._sum = np.empty(shape, np.int32)
        self._code = np.empty(shape, np.int32)
        self.out = np.empty((len(self.spec.scales),) + shape, np.uint8)
        self._shifts = [sc.shift - self.lut.frac_bits for sc in self.spec.scales]

    def frame(self) -> np.ndarray:
        np.add(self._y2, self._x2, out=self._sum)
        for i, d in enumerate(self._shifts):
            if d >= 0:
                np.right_shift(self._sum, d, out=self._code)
            else:
                np.left_shift(self._sum, -d, out=self._code)
            np.take(self.lut.entries, self._code, out=self.out[i], mode="clip")
        return self.out

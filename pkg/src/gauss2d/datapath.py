"""Bit-accurate models of the arithmetic stages behind each gout word.

    |x|,|y| --mult--> x^2, y^2 --add--> x^2+y^2 --scale--> u --exp LUT--> gout

Each stage has a pure scalar form, a numpy form used by the fast tile
generator, and a declared latency consumed by the cycle model
(`PipeStage`). The exponent argument u is unsigned fixed point with
FRAC_BITS fraction bits and INT_BITS integer bits; codes past the top of
that range saturate to the last table entry.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from decimal import Decimal, getcontext, ROUND_FLOOR

import numpy as np

from .fxp import MAG_BITS, UQ8_MAX, UQ8_SCALE, check_unsigned

FRAC_BITS = 10
INT_BITS = 3
LUT_SIZE = 1 << (INT_BITS + FRAC_BITS)
ARG_CEILING = LUT_SIZE - 1

MULT_LATENCY = 5
MULT_LATENCY_RANGE = (5, 8)
ADD_LATENCY = 1
SCALE_LATENCY = 1
EXP_LATENCY = 1


class ConfigError(ValueError):
    """Unsupported datapath configuration (scale, latency, dimensions)."""


@dataclass(frozen=True)
class ScaleShift:
    """One Gaussian scale. Division by 2*sigma^2 is a right shift by `shift`."""

    sigma: int
    shift: int

    @classmethod
    def from_sigma(cls, sigma) -> "ScaleShift":
        if isinstance(sigma, ScaleShift):
            return sigma
        if isinstance(sigma, float) and sigma.is_integer():
            sigma = int(sigma)
        if not isinstance(sigma, (int, np.integer)) or isinstance(sigma, bool) or sigma < 1:
            raise ConfigError(f"sigma={sigma!r} is not a positive integer")
        denom = 2 * int(sigma) ** 2
        if denom & (denom - 1):
            raise ConfigError(
                f"sigma={sigma}: 2*sigma^2={denom} is not a power of two, "
                "so the scale-down unit cannot be a shift"
            )
        return cls(int(sigma), denom.bit_length() - 1)

    @property
    def denominator(self) -> int:
        return 1 << self.shift


DEFAULT_SIGMAS = (16, 64, 128)
DEFAULT_SCALES = tuple(ScaleShift.from_sigma(s) for s in DEFAULT_SIGMAS)


def multiply(n1: int, n2: int, bits: int = MAG_BITS) -> int:
    check_unsigned(n1, bits, "n1")
    check_unsigned(n2, bits, "n2")
    return n1 * n2


def mult8x8(n1: int, n2: int) -> int:
    """Exact unsigned 8x8 -> 16-bit product."""
    return multiply(n1, n2, MAG_BITS)


def add_sq(x2: int, y2: int) -> int:
    """Adder stage: x^2 + y^2, exact in a 17-bit container for 16-bit operands."""
    if x2 < 0 or y2 < 0:
        raise ValueError("adder operands are unsigned")
    return x2 + y2


def scale_down(s: int, sc: ScaleShift, frac_bits: int = FRAC_BITS, ceiling: int = ARG_CEILING) -> int:
    """(s << frac_bits) >> shift, saturated at `ceiling`. Returns the argument code."""
    if s < 0:
        raise ValueError("sum must be unsigned")
    return min((s << frac_bits) >> sc.shift, ceiling)


def scale_down_array(s: np.ndarray, sc: ScaleShift, frac_bits: int = FRAC_BITS,
                     ceiling: int = ARG_CEILING) -> np.ndarray:
    s = np.asarray(s, dtype=np.int64)
    return np.minimum((s << frac_bits) >> sc.shift, ceiling)


def code_to_real(code, frac_bits: int = FRAC_BITS):
    return code / (1 << frac_bits)


def quantize_argument(u: float, frac_bits: int = FRAC_BITS) -> int:
    """Truncate a real argument onto the fixed-point grid (same as the shifter)."""
    if u < 0:
        raise ValueError("exponent argument must be non-negative")
    return int(np.floor(u * (1 << frac_bits)))


def _exp_neg_uq8(code: int, frac_bits: int) -> int:
    # Decimal exp is correctly rounded at the context precision.
    arg = Decimal(code) / Decimal(1 << frac_bits)
    scaled = (-arg).exp() * UQ8_SCALE + Decimal("0.5")
    return min(int(scaled.to_integral_value(rounding=ROUND_FLOOR)), UQ8_MAX)


class ExpLut:
    """Table of e^(-u) in UQ8, indexed by the fixed-point argument code."""

    def __init__(self, frac_bits: int = FRAC_BITS, int_bits: int = INT_BITS):
        self.frac_bits = frac_bits
        self.int_bits = int_bits
        self.size = 1 << (frac_bits + int_bits)
        self.ceiling = self.size - 1
        getcontext().prec = 40
        entries = np.array([_exp_neg_uq8(i, frac_bits) for i in range(self.size)], dtype=np.uint8)
        entries.setflags(write=False)
        self.entries = entries

    def __len__(self) -> int:
        return self.size

    def __call__(self, code: int) -> int:
        if code < 0:
            raise ValueError("exponent argument must be non-negative")
        return int(self.entries[min(code, self.ceiling)])

    def lookup(self, codes: np.ndarray) -> np.ndarray:
        return self.entries[np.minimum(codes, self.ceiling)]

    def argument(self, index):
        return code_to_real(index, self.frac_bits)

    def checksum(self) -> str:
        return hashlib.sha256(self.entries.tobytes()).hexdigest()

    def csv_lines(self) -> list[str]:
        lines = ["index,argument,value"]
        for i, v in enumerate(self.entries):
            lines.append(f"{i},{i / (1 << self.frac_bits):.10f},{int(v)}")
        return lines


_DEFAULT_LUT: ExpLut | None = None


def default_lut() -> ExpLut:
    global _DEFAULT_LUT
    if _DEFAULT_LUT is None:
        _DEFAULT_LUT = ExpLut()
    return _DEFAULT_LUT


def exp_lut(code: int, lut: ExpLut | None = None) -> int:
    return (lut or default_lut())(code)


class PipeStage:
    """Fixed-latency pipeline around a pure function, initiation interval 1.

    `tick(x)` accepts one input (None is a bubble) and returns the result for
    the input presented `latency` ticks earlier, or None while filling.
    Latency 0 is a combinational pass-through.
    """

    def __init__(self, fn, latency: int, name: str = ""):
        if latency < 0:
            raise ConfigError("latency must be >= 0")
        self.fn = fn
        self.latency = latency
        self.name = name
        self._regs = deque([None] * latency, maxlen=latency) if latency else None

    def tick(self, *args):
        value = None if args[0] is None else self.fn(*args)
        if not self.latency:
            return value
        out = self._regs[0]
        self._regs.append(value)
        return out

    def occupancy(self) -> int:
        if not self.latency:
            return 0
        return sum(v is not None for v in self._regs)

    def flush(self) -> None:
        if self.latency:
            self._regs.extend([None] * self.latency)


@dataclass(frozen=True)
class Latencies:
    mult: int = MULT_LATENCY
    add: int = ADD_LATENCY
    scale: int = SCALE_LATENCY
    exp: int = EXP_LATENCY

    def __post_init__(self):
        lo, hi = MULT_LATENCY_RANGE
        if not lo <= self.mult <= hi:
            raise ConfigError(f"multiplier latency must be in {lo}..{hi}, got {self.mult}")
        if min(self.add, self.scale, self.exp) < 0:
            raise ConfigError("stage latencies must be non-negative")

    @property
    def total(self) -> int:
        return self.mult + self.add + self.scale + self.exp

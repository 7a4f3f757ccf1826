"""Fixed-point vocabulary shared by every datapath stage.

All words are plain Python ints (or numpy integer arrays for the vectorized
paths). The helpers here only check ranges and convert between bit patterns,
magnitudes and real values.

Word formats used by the 256x256 datapath:

    Coord8   signed 8-bit two's complement coordinate, [-128, 127]
    UMag8    unsigned 8-bit coordinate magnitude, [0, 128] in kernel use
    UProd16  unsigned 16-bit multiplier result
    USum17   unsigned 17-bit x^2 + y^2
    UQ8      unsigned 8-bit fraction, real value = word / 256
"""

from __future__ import annotations

import numpy as np

COORD_BITS = 8
COORD_MIN = -(1 << (COORD_BITS - 1))
COORD_MAX = (1 << (COORD_BITS - 1)) - 1

MAG_BITS = 8
PROD_BITS = 16
SUM_BITS = 17

UQ8_BITS = 8
UQ8_SCALE = 1 << UQ8_BITS
UQ8_MAX = UQ8_SCALE - 1


class FixedPointError(ValueError):
    """A value does not fit the word format it is being placed in."""


def signed_range(bits: int) -> tuple[int, int]:
    return -(1 << (bits - 1)), (1 << (bits - 1)) - 1


def signed_width(lo: int, hi: int) -> int:
    """Smallest two's-complement width holding every integer in [lo, hi]."""
    bits = 1
    while not (-(1 << (bits - 1)) <= lo and hi <= (1 << (bits - 1)) - 1):
        bits += 1
    return bits


def unsigned_width(hi: int) -> int:
    """Smallest unsigned width holding every integer in [0, hi]."""
    return max(1, int(hi).bit_length())


def check_unsigned(value: int, bits: int, name: str = "value") -> int:
    if not 0 <= value < (1 << bits):
        raise FixedPointError(f"{name}={value} does not fit unsigned {bits}-bit word")
    return value


def check_signed(value: int, bits: int, name: str = "value") -> int:
    lo, hi = signed_range(bits)
    if not lo <= value <= hi:
        raise FixedPointError(f"{name}={value} does not fit signed {bits}-bit word")
    return value


def coord_from_bits(pattern: int, bits: int = COORD_BITS) -> int:
    """Decode a two's-complement bit pattern into a signed coordinate."""
    check_unsigned(pattern, bits, "pattern")
    return pattern - (1 << bits) if pattern >> (bits - 1) else pattern


def coord_to_bits(coord: int, bits: int = COORD_BITS) -> int:
    """Encode a signed coordinate as its two's-complement bit pattern."""
    check_signed(coord, bits, "coord")
    return coord & ((1 << bits) - 1)


def coord_abs(coord: int) -> int:
    """Magnitude of a Coord8 as a UMag8.

    The multiplier only squares unsigned operands, so coordinates go through
    their magnitude first (x*x == |x|*|x|). -128 maps to 128, whose 8-bit
    unsigned pattern is 1000_0000.
    """
    check_signed(coord, COORD_BITS, "coord")
    return -coord if coord < 0 else coord


def round_half_up(x):
    """floor(x + 1/2), for scalars or arrays."""
    if isinstance(x, np.ndarray):
        return np.floor(x + 0.5)
    return int(np.floor(x + 0.5))


def uq8_encode(r: float) -> int:
    """Quantize a real in [0, 1] to a UQ8 word.

    Rounds half up at scale 1/256 and clamps 1.0 (and anything that rounds to
    256) to 255. Values outside [0, 1] are rejected.
    """
    if not 0.0 <= r <= 1.0:
        raise FixedPointError(f"UQ8 input {r!r} outside [0, 1]")
    return min(round_half_up(r * UQ8_SCALE), UQ8_MAX)


def uq8_encode_array(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=np.float64)
    if r.size and (r.min() < 0.0 or r.max() > 1.0 or np.isnan(r).any()):
        raise FixedPointError("UQ8 input outside [0, 1]")
    return np.minimum(round_half_up(r * UQ8_SCALE), UQ8_MAX).astype(np.uint8)


def uq8_decode(word):
    """Real value of a UQ8 word (scalar or array)."""
    if isinstance(word, np.ndarray):
        return word.astype(np.float64) / UQ8_SCALE
    check_unsigned(word, UQ8_BITS, "word")
    return word / UQ8_SCALE


def hex_digits(bits: int) -> int:
    """Hex digits needed to print a word of the given width (zero-padded)."""
    return (bits + 3) // 4

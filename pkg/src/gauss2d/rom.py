"""Coordinate ROM and the two-counter address generator.

Only the first row of the 'x' coordinate array is stored (256 signed words,
word[a] = a - 128). Both coordinate arrays of the 256x256 surround function
are rebuilt by addressing that one table from two ports: addr1 runs every
tick and addr2 steps once each time addr1 wraps, which walks the grid in
raster order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fxp import check_unsigned, coord_to_bits, signed_width

ROM_DEPTH = 256
ADDR_BITS = 8


class CoordRom:
    """Read-only table of `depth` signed coordinates, word[a] = a - depth // 2."""

    def __init__(self, depth: int = ROM_DEPTH):
        if depth < 1:
            raise ValueError("ROM depth must be positive")
        self.depth = depth
        self.offset = depth // 2
        self.addr_bits = max(1, (depth - 1).bit_length())
        self.word_bits = signed_width(-self.offset, depth - 1 - self.offset)
        words = np.arange(depth, dtype=np.int64) - self.offset
        words.setflags(write=False)
        self._words = words

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self.depth

    def __getitem__(self, addr: int) -> int:
        if not 0 <= addr < self.depth:
            raise IndexError(f"ROM address {addr} out of range")
        return int(self._words[addr])

    def read(self, addr1: int, addr2: int) -> tuple[int, int]:
        """Dual-port read: both words come out in the same tick."""
        return self[addr1], self[addr2]

    def nbytes(self) -> int:
        """Storage the table needs in its native word width."""
        return self.depth * ((self.word_bits + 7) // 8)

    def dump_lines(self) -> list[str]:
        """Address/data listing: binary address, then binary word and its signed value."""
        lines = []
        for a in range(self.depth):
            w = self[a]
            addr = format(a, f"0{self.addr_bits}b")
            data = format(coord_to_bits(w, self.word_bits), f"0{self.word_bits}b")
            lines.append(f"{addr}\t{data} ({w})")
        return lines


DEFAULT_ROM = CoordRom()


def rom_read(rom: CoordRom, addr1: int, addr2: int) -> tuple[int, int]:
    check_unsigned(addr1, rom.addr_bits, "addr1")
    check_unsigned(addr2, rom.addr_bits, "addr2")
    return rom.read(addr1, addr2)


@dataclass(frozen=True)
class AddressGen:
    """State of the column (addr1) and row (addr2) counters.

    `enable` is treated as a level: while it is low, stepping leaves the state
    untouched.
    """

    addr1: int = 0
    addr2: int = 0
    enable: bool = True
    cycle: int = 0
    cols: int = ROM_DEPTH
    rows: int = ROM_DEPTH

    def step(self) -> "AddressGen":
        if not self.enable:
            return self
        addr1 = (self.addr1 + 1) % self.cols
        addr2 = (self.addr2 + (self.addr1 == self.cols - 1)) % self.rows
        return replace(self, addr1=addr1, addr2=addr2, cycle=self.cycle + 1)


def addr_step(g: AddressGen) -> AddressGen:
    return g.step()


def coord_stream(rom: CoordRom, n_ticks: int, start: int = 0):
    """Yield (x, y) for ticks start .. start + n_ticks - 1 in raster order."""
    depth = rom.depth
    words = rom.words
    for k in range(start, start + n_ticks):
        yield int(words[k % depth]), int(words[(k // depth) % depth])


def coord_at(rom: CoordRom, k) -> tuple:
    """Raster element k (scalar or integer array), x varying fastest."""
    k = np.asarray(k, dtype=np.int64)
    depth = rom.depth
    x = rom.words[k % depth]
    y = rom.words[(k // depth) % depth]
    if x.ndim == 0:
        return int(x), int(y)
    return x, y


def coord_grid(x_rom: CoordRom, y_rom: CoordRom | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Full coordinate arrays (rows x cols), as streamed by the two ROM ports."""
    y_rom = x_rom if y_rom is None else y_rom
    xs = np.broadcast_to(x_rom.words[None, :], (y_rom.depth, x_rom.depth))
    ys = np.broadcast_to(y_rom.words[:, None], (y_rom.depth, x_rom.depth))
    return xs, ys

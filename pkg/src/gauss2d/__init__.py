"""Bit-accurate golden model of a pipelined 2D Gaussian surround function."""

from .datapath import DEFAULT_SCALES, ConfigError, ExpLut, Latencies, ScaleShift
from .generator import (
    CycleReport,
    KernelSpec,
    KernelTile,
    NormConstant,
    generate_all_scales,
    generate_tile,
    normalize,
    simulate,
)
from .oracle import error_report, oracle_tile
from .rom import DEFAULT_ROM, AddressGen, CoordRom

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SCALES", "ConfigError", "ExpLut", "Latencies", "ScaleShift",
    "CycleReport", "KernelSpec", "KernelTile", "NormConstant",
    "generate_all_scales", "generate_tile", "normalize", "simulate",
    "error_report", "oracle_tile",
    "DEFAULT_ROM", "AddressGen", "CoordRom",
]

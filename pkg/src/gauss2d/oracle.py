"""Double-precision reference for the surround function and fidelity metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fxp import UQ8_SCALE
from .generator import KernelSpec, KernelTile

# Ceilings on max |hw/256 - oracle| for the default 256x256 tile. 16 is the
# observed worst case (the clamp of e^0 to 255/256); 64 and 128 allow 2 LSB.
ERROR_BOUNDS = {16: 1 / 256, 64: 2 / 256, 128: 2 / 256}


def gaussian_1d(coords: np.ndarray, sigma: float) -> np.ndarray:
    """Unnormalized e^(-x^2 / 2 sigma^2) on integer coordinates."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    c = np.asarray(coords, dtype=np.float64)
    return np.exp(-(c * c) / (2.0 * float(sigma) ** 2))


def oracle_tile(spec: KernelSpec, sigma: float) -> tuple[np.ndarray, np.ndarray]:
    """(unnormalized, normalized) real tiles on the spec's coordinate grid.

    The normalized tile is the unnormalized one divided by its sum, so it
    sums to one.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    x = spec.x_rom.words.astype(np.float64)
    y = spec.y_rom.words.astype(np.float64)
    r2 = y[:, None] ** 2 + x[None, :] ** 2
    raw = np.exp(-r2 / (2.0 * float(sigma) ** 2))
    # fsum: the normalizing sum is correctly rounded
    total = math.fsum(raw.ravel().tolist())
    return raw, raw / total


@dataclass(frozen=True)
class ErrorReport:
    max_abs: float
    rmse: float
    argmax: tuple[int, int]  # (row, col) of the first worst sample

    def as_lsb(self) -> float:
        return self.max_abs * UQ8_SCALE


def error_report(hw, oracle: np.ndarray) -> ErrorReport:
    """Compare UQ8 hardware samples (tile or array) against real oracle values."""
    data = hw.data if isinstance(hw, KernelTile) else np.asarray(hw)
    oracle = np.asarray(oracle, dtype=np.float64)
    if data.shape != oracle.shape:
        raise ValueError(f"shape mismatch: hw {data.shape} vs oracle {oracle.shape}")
    diff = np.abs(data.astype(np.float64) / UQ8_SCALE - oracle)
    flat = int(np.argmax(diff))
    row, col = np.unravel_index(flat, diff.shape) if diff.ndim == 2 else (0, flat)
    return ErrorReport(float(diff.ravel()[flat]), float(np.sqrt(np.mean(diff * diff))), (int(row), int(col)))

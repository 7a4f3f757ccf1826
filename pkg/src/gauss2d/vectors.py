"""Per-tick stimulus/response vectors for cross-checking an HDL simulation.

One record per clock tick, tick 0 through the last drain tick, holding the
value on each datapath net at the end of that tick:

    tick addr1 addr2 dout1 dout2 result_x2 result_y2 sum u_<sigma>... gout_<sigma>...

Nets that carry nothing valid on a tick (pipeline filling or draining) are
None; the hex format prints them as x digits, the CSV format leaves them
empty.

Both formats open with a header naming each net and its width, e.g.
`dout1[s8]` (s marks two's complement). Hex lines are fixed width, space
separated and zero padded to each net's bit width, and the header is a //
comment, so `$readmemh`-style loaders can consume the file directly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .datapath import ExpLut, Latencies, default_lut
from .files import atomic_write, sha256_bytes
from .fxp import hex_digits
from .generator import KernelSpec, TickState, simulate

FORMATS = ("hex", "csv")
TICK_BITS = 32
MANIFEST = "manifest.tsv"


class ExportError(OSError):
    """A vector file or manifest could not be written."""


@dataclass(frozen=True)
class Column:
    name: str
    bits: int
    signed: bool = False

    @property
    def digits(self) -> int:
        return hex_digits(self.bits)

    def to_hex(self, v) -> str:
        if v is None:
            return "x" * self.digits
        if self.signed:
            v &= (1 << self.bits) - 1
        return format(v, f"0{self.digits}x")

    @property
    def label(self) -> str:
        return f"{self.name}[{'s' if self.signed else ''}{self.bits}]"

    @classmethod
    def from_label(cls, label: str) -> "Column":
        name, rest = label.rstrip("]").split("[")
        return cls(name, int(rest.lstrip("s")), rest.startswith("s"))

    def from_hex(self, s: str):
        if set(s) == {"x"}:
            return None
        v = int(s, 16)
        if self.signed and v >> (self.bits - 1):
            v -= 1 << self.bits
        return v


def columns_for(spec: KernelSpec, lut: ExpLut | None = None) -> list[Column]:
    lut = lut or default_lut()
    arg_bits = lut.frac_bits + lut.int_bits
    addr_bits = max(spec.x_rom.addr_bits, spec.y_rom.addr_bits)
    cols = [
        Column("tick", TICK_BITS),
        Column("addr1", addr_bits),
        Column("addr2", addr_bits),
        Column("dout1", spec.coord_bits, signed=True),
        Column("dout2", spec.coord_bits, signed=True),
        Column("result_x2", spec.prod_bits),
        Column("result_y2", spec.prod_bits),
        Column("sum", spec.sum_bits),
    ]
    cols += [Column(f"u_{sc.sigma}", arg_bits) for sc in spec.scales]
    cols += [Column(f"gout_{sc.sigma}", 8) for sc in spec.scales]
    return cols


@dataclass
class VectorSet:
    format: str
    columns: list[Column]
    records: list[tuple] = field(default_factory=list)

    def __eq__(self, other):
        return (isinstance(other, VectorSet) and self.columns == other.columns
                and self.records == other.records)

    def to_text(self) -> str:
        if self.format == "hex":
            head = "// " + " ".join(c.label for c in self.columns)
            body = (" ".join(c.to_hex(v) for c, v in zip(self.columns, r)) for r in self.records)
        elif self.format == "csv":
            head = ",".join(c.label for c in self.columns)
            body = (",".join("" if v is None else str(v) for v in r) for r in self.records)
        else:
            raise ValueError(f"unknown vector format {self.format!r}")
        return "\n".join([head, *body]) + "\n"


def _record(state: TickState) -> tuple:
    return (state.tick, state.addr1, state.addr2, state.dout1, state.dout2,
            state.result_x2, state.result_y2, state.sum, *state.u, *state.gout)


def build_vectors(spec: KernelSpec | None = None, latencies: Latencies | None = None,
                  fmt: str = "hex", lut: ExpLut | None = None) -> tuple[VectorSet, object]:
    """Run the cycle-accurate machine and capture every tick. Returns (vectors, CycleReport)."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    spec = spec or KernelSpec()
    records: list[tuple] = []
    _, report = simulate(spec, latencies, lut, on_tick=lambda st: records.append(_record(st)))
    return VectorSet(fmt, columns_for(spec, lut), records), report


def parse_vectors(text: str, fmt: str) -> VectorSet:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty vector file")
    if fmt == "csv":
        cols = [Column.from_label(t) for t in lines[0].split(",")]
        rows = [tuple(int(v) if v else None for v in ln.split(",")) for ln in lines[1:] if ln]
        return VectorSet("csv", cols, rows)
    if fmt == "hex":
        if not lines[0].startswith("//"):
            raise ValueError("hex vector file lacks its // header")
        cols = [Column.from_label(t) for t in lines[0][2:].split()]
        rows = [tuple(c.from_hex(v) for c, v in zip(cols, ln.split())) for ln in lines[1:] if ln]
        return VectorSet("hex", cols, rows)
    raise ValueError(f"unknown vector format {fmt!r}")


def vector_filename(spec: KernelSpec, latencies: Latencies, fmt: str) -> str:
    return f"gauss2d_{spec.key()}_lat{latencies.mult}.{fmt}"


@dataclass
class ExportSummary:
    files: dict  # filename -> sha256
    manifest: str
    records: int
    total_ticks: int


def export_vectors(spec: KernelSpec | None, out_dir, formats=("hex",),
                   latencies: Latencies | None = None) -> ExportSummary:
    """Write one vector file per format plus a `filename<TAB>sha256` manifest.

    Every file is written atomically; nothing is written outside `out_dir`.
    """
    spec = spec or KernelSpec()
    lat = latencies or Latencies()
    formats = (formats,) if isinstance(formats, str) else tuple(formats)
    for fmt in formats:
        if fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
    out_dir = os.fspath(out_dir)
    if not os.path.isdir(out_dir):
        raise ExportError(f"output directory {out_dir!r} does not exist")

    vs, report = build_vectors(spec, lat)
    hashes = {}
    try:
        for fmt in formats:
            vs.format = fmt
            payload = vs.to_text().encode("ascii")
            name = vector_filename(spec, lat, fmt)
            atomic_write(os.path.join(out_dir, name), payload)
            hashes[name] = sha256_bytes(payload)
        manifest = "".join(f"{n}\t{h}\n" for n, h in sorted(hashes.items()))
        atomic_write(os.path.join(out_dir, MANIFEST), manifest.encode("ascii"))
    except OSError as e:
        raise ExportError(f"cannot write vectors to {out_dir!r}: {e}") from e
    return ExportSummary(hashes, os.path.join(out_dir, MANIFEST), len(vs.records), report.total_ticks)

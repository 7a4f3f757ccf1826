"""Golden content hashes for regression checks.

    python -m gauss2d.golden            # print current hashes
    python -m gauss2d.golden --write    # refresh data/golden_hashes.json
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

from .blur import ConvConfig, blur, synthetic_frame
from .datapath import Latencies, default_lut
from .files import sha256_bytes
from .generator import KernelSpec, generate_all_scales
from .rom import DEFAULT_ROM
from .vectors import build_vectors

GOLDEN_PATH = Path(__file__).with_name("data") / "golden_hashes.json"
LATENCY_CONFIGS = (5, 8)
BLUR_CASE = dict(width=64, height=64, channels=1, seed=0)


def tile_key(spec: KernelSpec, sigma: int, mult_latency: int) -> str:
    return f"{spec.key()}/sigma={sigma}/lat={mult_latency}"


def blur_key(sigma: int, boundary: str) -> str:
    c = BLUR_CASE
    return f"direct2d/{c['width']}x{c['height']}x{c['channels']}/seed={c['seed']}/sigma={sigma}/{boundary}"


def compute(include_vectors: bool = True) -> dict:
    spec = KernelSpec()
    out = {
        "rom": sha256_bytes(DEFAULT_ROM.words.astype(np.int8).tobytes()),
        "explut": default_lut().checksum(),
        "tiles": {},
        "vectors": {},
        "blur": {},
    }
    for lat in LATENCY_CONFIGS:
        tiles, _ = generate_all_scales(spec, Latencies(mult=lat))
        for t in tiles:
            out["tiles"][tile_key(spec, t.sigma, lat)] = t.digest()
        if include_vectors:
            vs, _ = build_vectors(spec, Latencies(mult=lat), "hex")
            for fmt in ("hex", "csv"):
                vs.format = fmt
                out["vectors"][f"{spec.key()}/lat={lat}/{fmt}"] = sha256_bytes(vs.to_text().encode("ascii"))
    c = BLUR_CASE
    img = synthetic_frame(c["width"], c["height"], c["channels"], c["seed"])
    for sc in spec.scales:
        cfg = ConvConfig(sigma=sc.sigma, mode="direct2d")
        out["blur"][blur_key(sc.sigma, cfg.boundary)] = sha256_bytes(blur(img, cfg, threads=1).data.tobytes())
    return out


def load() -> dict:
    return json.loads(GOLDEN_PATH.read_text())


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m gauss2d.golden")
    ap.add_argument("--write", action="store_true", help="overwrite the committed golden file")
    args = ap.parse_args(argv)
    hashes = compute()
    text = json.dumps(hashes, indent=2, sort_keys=True) + "\n"
    if args.write:
        GOLDEN_PATH.write_text(text)
    else:
        print(text, end="")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

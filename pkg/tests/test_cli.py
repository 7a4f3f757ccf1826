import os

import numpy as np
import pytest

from gauss2d import netpbm
from gauss2d.cli import (
    EXIT_BAD_IMAGE,
    EXIT_CONFIG,
    EXIT_NO_INPUT,
    EXIT_OK,
    EXIT_OUTPUT,
    EXIT_USAGE,
    run,
)

SUBCOMMANDS = ["kernel", "rom-dump", "explut-dump", "blur", "error-report", "bench", "vectors"]


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_help(cmd, capsys):
    assert run([cmd, "--help"]) == EXIT_OK
    assert "usage:" in capsys.readouterr().out


def test_rom_dump_stdout(capsys):
    assert run(["rom-dump"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 256
    assert lines[0] == "00000000\t10000000 (-128)"
    assert lines[128] == "10000000\t00000000 (0)"


def test_dump_flags_match_subcommands(capsys):
    run(["rom-dump"])
    a = capsys.readouterr().out
    run(["--dump-rom"])
    assert capsys.readouterr().out == a
    run(["--dump-explut"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,argument,value" and len(lines) == 8193
    assert lines[1] == "0,0.0000000000,255"


def test_rom_dump_to_file(tmp_path, capsys):
    out = tmp_path / "rom.txt"
    assert run(["rom-dump", "--out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    golden = os.path.join(os.path.dirname(__file__), "golden", "rom_dump.txt")
    assert out.read_text() == open(golden).read()


def test_kernel_pgm(tmp_path, capsys):
    out = tmp_path / "k.pgm"
    assert run(["kernel", "--sigma", "64", "--out", str(out)]) == EXIT_OK
    img = netpbm.read(out)
    assert img.data.shape == (256, 256, 1)
    assert img.data[128, 128, 0] == 255
    assert "k_raw=6004358" in capsys.readouterr().out
    assert os.listdir(tmp_path) == ["k.pgm"]


def test_kernel_templates(tmp_path):
    assert run(["kernel", "--out", str(tmp_path / "k{sigma}.pgm"),
                "--csv", str(tmp_path / "k{sigma}.csv")]) == EXIT_OK
    assert sorted(os.listdir(tmp_path)) == sorted(
        f"k{s}.{e}" for s in (16, 64, 128) for e in ("pgm", "csv"))
    row = (tmp_path / "k16.csv").read_text().splitlines()[128].split(",")
    assert len(row) == 256 and row[128] == "255"


def test_kernel_many_sigmas_without_template(tmp_path):
    assert run(["kernel", "--out", str(tmp_path / "k.pgm")]) == EXIT_USAGE
    assert os.listdir(tmp_path) == []


def test_kernel_bad_sigma():
    assert run(["kernel", "--sigma", "20"]) == EXIT_CONFIG


def test_bad_latency():
    assert run(["kernel", "--latency", "9"]) == EXIT_USAGE


def test_no_command_and_two_commands():
    assert run([]) == EXIT_USAGE
    assert run(["--dump-rom", "rom-dump"]) == EXIT_USAGE
    assert run(["frobnicate"]) == EXIT_USAGE


def test_error_report(capsys):
    assert run(["error-report"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 3 and all(ln.endswith("PASS") for ln in out)
    assert "(1.000 LSB)" in out[0]


def test_blur_round_trip(tmp_path, capsys):
    src = tmp_path / "in.ppm"
    dst = tmp_path / "out.ppm"
    data = np.random.default_rng(0).integers(0, 256, (40, 30, 3), dtype=np.uint8)
    netpbm.write(src, netpbm.Image(data))
    assert run(["blur", "--in", str(src), "--out", str(dst), "--sigma", "16"]) == EXIT_OK
    assert netpbm.read(dst).data.shape == (40, 30, 3)
    assert sorted(os.listdir(tmp_path)) == ["in.ppm", "out.ppm"]
    assert run(["blur", "--in", str(src), "--out", str(dst), "--mode", "direct2d",
                "--boundary", "zero", "--no-normalize", "--threads", "2"]) == EXIT_OK


def test_blur_errors(tmp_path):
    dst = tmp_path / "out.pgm"
    assert run(["blur", "--in", str(tmp_path / "missing.pgm"), "--out", str(dst)]) == EXIT_NO_INPUT
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n4 4\n255\n\x00")
    assert run(["blur", "--in", str(bad), "--out", str(dst)]) == EXIT_BAD_IMAGE
    good = tmp_path / "good.pgm"
    netpbm.write(good, netpbm.Image(np.zeros((4, 4), np.uint8)))
    assert run(["blur", "--in", str(good), "--out", str(dst), "--sigma", "3"]) == EXIT_CONFIG
    assert run(["blur", "--in", str(good), "--out", str(tmp_path / "no" / "x.pgm")]) == EXIT_OUTPUT
    assert not dst.exists()


def test_bench(capsys):
    assert run(["bench", "--width", "64", "--height", "48", "--channels", "1", "--frames", "2"]) == EXIT_OK
    assert "frames_per_sec=" in capsys.readouterr().out
    assert run(["bench", "--generator", "--frames", "2"]) == EXIT_OK
    assert run(["bench", "--frames", "0"]) == EXIT_USAGE


def test_vectors(tmp_path, capsys):
    assert run(["vectors", "--out-dir", str(tmp_path), "--rows", "4", "--cols", "4",
                "--format", "hex", "--format", "csv"]) == EXIT_OK
    assert sorted(os.listdir(tmp_path)) == ["gauss2d_4x4_lat5.csv", "gauss2d_4x4_lat5.hex", "manifest.tsv"]
    assert "records=24" in capsys.readouterr().out
    assert run(["vectors", "--out-dir", str(tmp_path / "missing")]) == EXIT_OUTPUT

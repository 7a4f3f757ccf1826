import os

import pytest

from gauss2d.datapath import Latencies
from gauss2d.generator import KernelSpec
from gauss2d.vectors import (
    MANIFEST,
    Column,
    ExportError,
    build_vectors,
    columns_for,
    export_vectors,
    parse_vectors,
    vector_filename,
)


@pytest.fixture(scope="module")
def vs5():
    return build_vectors(KernelSpec(), Latencies(), "hex")


def test_record_count_and_first_tick(vs5):
    vs, report = vs5
    assert len(vs.records) == 65536 + 8 == report.total_ticks
    first = dict(zip((c.name for c in vs.columns), vs.records[0]))
    assert first["tick"] == 0 and first["addr1"] == 0 and first["addr2"] == 0
    assert first["dout1"] == -128 and first["dout2"] == -128
    assert first["gout_16"] is None


def test_first_valid_output(vs5):
    vs, _ = vs5
    names = [c.name for c in vs.columns]
    rec = dict(zip(names, vs.records[8]))
    # corner sample: x = y = -128
    assert (rec["gout_16"], rec["gout_64"], rec["gout_128"]) == (0, 5, 94)
    assert all(v is None for v in vs.records[7][-3:])


def test_hex_widths(vs5):
    vs, _ = vs5
    text = vs.to_text()
    lines = text.splitlines()
    assert lines[0].startswith("// tick[32] addr1[8] addr2[8] dout1[s8]")
    widths = [c.digits for c in vs.columns]
    for ln in (lines[1], lines[9], lines[-1]):
        assert [len(f) for f in ln.split()] == widths
    assert lines[1].split()[3] == "80"  # -128 in two's complement


@pytest.mark.parametrize("fmt", ["hex", "csv"])
def test_round_trip(vs5, fmt):
    vs, _ = vs5
    vs.format = fmt
    back = parse_vectors(vs.to_text(), fmt)
    assert back == vs


def test_latency_eight_adds_three_ticks():
    vs, report = build_vectors(KernelSpec(), Latencies(mult=8))
    assert len(vs.records) == 65547 == report.total_ticks


def test_column_layout():
    cols = columns_for(KernelSpec())
    assert [c.label for c in cols][-6:] == ["u_16[13]", "u_64[13]", "u_128[13]",
                                            "gout_16[8]", "gout_64[8]", "gout_128[8]"]
    c = Column("d", 8, True)
    assert c.to_hex(-1) == "ff" and c.from_hex("ff") == -1 and c.from_hex("xx") is None
    assert Column.from_label(c.label) == c


def test_bad_format():
    with pytest.raises(ValueError):
        build_vectors(KernelSpec(4, 4), fmt="bin")
    with pytest.raises(ValueError):
        parse_vectors("a", "bin")


def test_export_manifest_stable(tmp_path):
    spec = KernelSpec()
    a = export_vectors(spec, tmp_path, ["hex", "csv"])
    first = (tmp_path / MANIFEST).read_bytes()
    b = export_vectors(spec, tmp_path, ["hex", "csv"])
    assert (tmp_path / MANIFEST).read_bytes() == first
    assert a.files == b.files
    assert sorted(os.listdir(tmp_path)) == sorted([MANIFEST, vector_filename(spec, Latencies(), "hex"),
                                                   vector_filename(spec, Latencies(), "csv")])


def test_missing_dir_raises(tmp_path):
    with pytest.raises(ExportError):
        export_vectors(KernelSpec(4, 4), tmp_path / "nope")


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_dir_leaves_nothing(tmp_path):
    d = tmp_path / "ro"
    d.mkdir()
    d.chmod(0o500)
    try:
        with pytest.raises(ExportError):
            export_vectors(KernelSpec(4, 4), d)
        assert os.listdir(d) == []
    finally:
        d.chmod(0o700)


def test_failing_sink_leaves_no_partial_file(tmp_path, monkeypatch):
    import gauss2d.files as files

    real_replace = os.replace

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(files.os, "replace", boom)
    with pytest.raises(ExportError):
        export_vectors(KernelSpec(4, 4), tmp_path)
    monkeypatch.setattr(files.os, "replace", real_replace)
    assert os.listdir(tmp_path) == []

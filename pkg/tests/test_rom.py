from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gauss2d.rom import DEFAULT_ROM, AddressGen, CoordRom, addr_step, coord_at, coord_grid, coord_stream, rom_read

GOLDEN = Path(__file__).with_name("golden") / "rom_dump.txt"


@pytest.mark.parametrize("addr, word", [
    (0b00000000, -128),
    (0b00000001, -127),
    (0b00000010, -126),
    (0b00000011, -125),
    (0b11111110, 126),
    (0b11111111, 127),
])
def test_table_words(addr, word):
    assert rom_read(DEFAULT_ROM, addr, 0)[0] == word
    assert rom_read(DEFAULT_ROM, 0, addr)[1] == word


def test_rom_is_affine_and_256_words():
    assert len(DEFAULT_ROM) == 256
    assert DEFAULT_ROM.nbytes() == 256
    assert all(DEFAULT_ROM[a] == a - 128 for a in range(256))


def test_rom_dump_matches_golden_file():
    assert DEFAULT_ROM.dump_lines() == GOLDEN.read_text().splitlines()


def test_rom_is_read_only():
    with pytest.raises(ValueError):
        DEFAULT_ROM.words[0] = 5


def test_rom_rejects_bad_address():
    with pytest.raises(Exception):
        rom_read(DEFAULT_ROM, 256, 0)


@pytest.mark.parametrize("state, expect", [
    ((0, 0), (1, 0)),
    ((255, 0), (0, 1)),
    ((255, 255), (0, 0)),
    ((17, 3), (18, 3)),
])
def test_addr_step(state, expect):
    g = addr_step(AddressGen(*state))
    assert (g.addr1, g.addr2) == expect
    assert g.cycle == 1


def test_disabled_generator_is_frozen():
    g = AddressGen(7, 9, enable=False, cycle=3)
    assert addr_step(g) == g


def test_full_frame_wraps_to_origin():
    g = AddressGen()
    seen_carry = 0
    for _ in range(65536):
        prev = g
        g = g.step()
        seen_carry += g.addr2 != prev.addr2
    assert (g.addr1, g.addr2) == (0, 0)
    assert g.cycle == 65536
    assert seen_carry == 256


def _brute_force_arrays():
    # arrays of Figures 1-2 built directly: x varies along a row, y down a column
    xs = [[c - 128 for c in range(256)] for _ in range(256)]
    ys = [[r - 128 for _ in range(256)] for r in range(256)]
    return xs, ys


def test_coord_stream_examples():
    xs, ys = _brute_force_arrays()
    stream = list(coord_stream(DEFAULT_ROM, 257))
    assert stream[0] == (-128, -128)
    assert stream[255] == (xs[0][255], ys[0][255]) == (127, -128)
    assert stream[256] == (xs[1][0], ys[1][0]) == (-128, -127)


def test_stream_reconstructs_both_arrays():
    xs, ys = _brute_force_arrays()
    flat = np.array(list(coord_stream(DEFAULT_ROM, 65536)))
    x_arr = flat[:, 0].reshape(256, 256)
    y_arr = flat[:, 1].reshape(256, 256)
    assert (x_arr == np.array(xs)).all()
    assert (y_arr == np.array(ys)).all()
    # every row of x repeats the stored table; y is its transpose pattern
    assert (x_arr == DEFAULT_ROM.words[None, :]).all()
    assert (y_arr == x_arr.T).all()
    mx, my = np.meshgrid(np.arange(-128, 128), np.arange(-128, 128))
    gx, gy = coord_grid(DEFAULT_ROM)
    assert (gx == mx).all() and (gy == my).all()


@given(st.integers(0, 2**40))
def test_stream_is_periodic(k):
    assert coord_at(DEFAULT_ROM, k) == coord_at(DEFAULT_ROM, k + 65536)
    assert next(coord_stream(DEFAULT_ROM, 1, start=k)) == coord_at(DEFAULT_ROM, k)


def test_small_rom_generalizes():
    rom = CoordRom(8)
    assert rom.words.tolist() == [-4, -3, -2, -1, 0, 1, 2, 3]
    assert rom.word_bits == 3 and rom.addr_bits == 3

import numpy as np
import pytest

from gauss2d.netpbm import Image, ImageFormatError, decode, encode, read, write


@pytest.mark.parametrize("channels", [1, 3])
def test_round_trip(tmp_path, channels):
    data = np.random.default_rng(channels).integers(0, 256, (7, 11, channels), dtype=np.uint8)
    path = tmp_path / "img.pnm"
    write(path, Image(data))
    raw = path.read_bytes()
    assert raw.startswith(b"P5\n11 7\n255\n" if channels == 1 else b"P6\n11 7\n255\n")
    assert (read(path).data == data).all()


def test_header_comments_and_whitespace():
    buf = b"P6 # comment\n# another\n2\t1\n 255\n" + bytes([1, 2, 3, 4, 5, 6])
    img = decode(buf)
    assert img.data.tolist() == [[[1, 2, 3], [4, 5, 6]]]


def test_raster_byte_equal_to_whitespace():
    # a raster that starts with a whitespace byte must not be skipped
    img = decode(b"P5\n2 1\n255\n" + bytes([10, 32]))
    assert img.data.ravel().tolist() == [10, 32]


def test_low_maxval_is_rescaled():
    img = decode(b"P5\n3 1\n15\n" + bytes([0, 15, 7]))
    assert img.data.ravel().tolist() == [0, 255, 119]


@pytest.mark.parametrize("buf", [
    b"P2\n1 1\n255\n0",
    b"P5\n2 2\n255\n\x00\x00",
    b"P5\n2 2\n65535\n" + bytes(8),
    b"P5\nx 2\n255\n" + bytes(4),
    b"P5\n0 2\n255\n",
    b"P5\n2",
])
def test_malformed(buf):
    with pytest.raises(ImageFormatError):
        decode(buf)


def test_image_validation():
    with pytest.raises(ValueError):
        Image(np.zeros((0, 4), np.uint8))
    with pytest.raises(ValueError):
        Image(np.zeros((4, 4, 2), np.uint8))
    with pytest.raises(ValueError):
        Image(np.zeros((4, 4), np.float32))
    assert Image(np.zeros((4, 5), np.uint8)).channels == 1


def test_encode_is_deterministic():
    img = Image(np.arange(12, dtype=np.uint8).reshape(3, 4))
    assert encode(img) == encode(img)

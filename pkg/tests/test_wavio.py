import numpy as np
import pytest
from scipy.io import wavfile

from scanclean.errors import CorruptHeader, MultiChannel, UnsupportedFormat
from scanclean.wavio import read_wav, write_wav


def test_pcm16_round_trip(tmp_path, rng):
    codes = rng.integers(-32768, 32768, 1000)
    x = codes / 32768.0
    path = tmp_path / "a.wav"
    assert write_wav(path, x, 16000) == 0
    back = read_wav(path)
    assert back.sample_rate == 16000
    np.testing.assert_array_equal(back.samples, x)


def test_float32_zeros(tmp_path):
    path = tmp_path / "z.wav"
    wavfile.write(path, 8000, np.zeros(50, np.float32))
    back = read_wav(path)
    assert np.all(back.samples == 0.0) and back.samples.size == 50


def test_float32_round_trip(tmp_path, rng):
    x = rng.uniform(-1, 1, 100).astype(np.float32).astype(np.float64)
    path = tmp_path / "f.wav"
    write_wav(path, x, 16000, encoding="float32")
    np.testing.assert_array_equal(read_wav(path).samples, x)


def test_stereo_rejected(tmp_path):
    path = tmp_path / "s.wav"
    wavfile.write(path, 16000, np.zeros((10, 2), np.int16))
    with pytest.raises(MultiChannel):
        read_wav(path)


def test_corrupt(tmp_path):
    path = tmp_path / "bad.wav"
    path.write_bytes(b"RIFF\x00\x00\x00\x00WAVEjunk")
    with pytest.raises((CorruptHeader, UnsupportedFormat)):
        read_wav(path)


def test_not_a_wav(tmp_path):
    path = tmp_path / "text.wav"
    path.write_text("hello world, not audio")
    with pytest.raises(CorruptHeader):
        read_wav(path)


def test_unsupported_dtype(tmp_path):
    path = tmp_path / "i32.wav"
    wavfile.write(path, 16000, np.zeros(10, np.int32))
    with pytest.raises(UnsupportedFormat):
        read_wav(path)


def test_clipping_counted(tmp_path):
    n = write_wav(tmp_path / "c.wav", np.array([0.0, 1.5, -2.0, 0.5]), 16000)
    assert n == 2
    back = read_wav(tmp_path / "c.wav").samples
    assert back[1] == 32767 / 32768 and back[2] == -1.0

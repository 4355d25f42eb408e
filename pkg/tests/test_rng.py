import numpy as np
import pytest

from thickvc import derive_rng
from thickvc.rng import _fold


def test_same_path_same_stream():
    a = derive_rng(7, "pac", 3, 11)
    b = derive_rng(7, "pac", 3, 11)
    assert a.integers(0, 1 << 30, size=8).tolist() == b.integers(
        0, 1 << 30, size=8
    ).tolist()


def test_different_paths_differ():
    base = derive_rng(7).integers(0, 1 << 30, size=8).tolist()
    for path in [("pac",), ("pac", 0), ("pac", 1), ("ugc", 0), (0,), (1,)]:
        other = derive_rng(7, *path).integers(0, 1 << 30, size=8).tolist()
        assert other != base, path


def test_string_labels_are_stable_across_processes():
    # crc32 folding is a pure function of the bytes, no PYTHONHASHSEED
    assert _fold("pac") == _fold("pac")
    assert _fold("pac") != _fold("ugc")


def test_fold_rejects_bad_labels():
    with pytest.raises(TypeError):
        _fold(True)
    with pytest.raises(ValueError):
        _fold(-3)
    with pytest.raises(TypeError):
        _fold(1.5)


def test_generator_type():
    g = derive_rng(0)
    assert isinstance(g, np.random.Generator)
    assert type(g.bit_generator).__name__ == "Philox"

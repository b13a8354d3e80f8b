import hashlib
import struct

import pytest

from cubeshadow import spart
from cubeshadow.constructions import golden_ratio, majority, power, tribes
from cubeshadow.spart import CorruptFile

import oracle

MAJ5_CUBED_SHA256 = "ff4fecc394ff2f52068d9dda925c2d7ec0a71fa897392b2adc94b728f38dd405"


def test_majority3_bytes():
    data = spart.dumps(majority(3))
    assert data[:7] == b"SPART1\n"
    assert struct.unpack("<III", data[7:19]) == (3, 2, 2)
    assert list(data[19:]) == [1, 1, 1, 2, 1, 2, 2, 2]


def test_maj5_cubed_bytes_from_rule():
    maj = oracle.majority_rule
    f = oracle.product_rule(oracle.product_rule(maj, 5, 2, maj), 10, 2, maj)
    body = bytes(f(x) for x in oracle.cells(15, 2))
    expected = b"SPART1\n" + struct.pack("<III", 15, 2, 8) + body
    data = spart.dumps(power(majority(5), 3))
    assert data == expected
    assert hashlib.sha256(data).hexdigest() == MAJ5_CUBED_SHA256


@pytest.mark.parametrize("f", [majority(4), tribes(2, 2), golden_ratio(7)])
def test_round_trip(tmp_path, f):
    path = tmp_path / "p.spart"
    spart.write(f, path)
    g = spart.read(path)
    assert g == f
    assert spart.dumps(g) == path.read_bytes()


@pytest.mark.parametrize(
    "data",
    [
        b"SPART2\n" + struct.pack("<III", 1, 2, 2) + b"\x01\x02",
        b"SPART1\n" + struct.pack("<II", 1, 2),
        b"SPART1\n" + struct.pack("<III", 1, 2, 2) + b"\x01",
        b"SPART1\n" + struct.pack("<III", 1, 2, 2) + b"\x01\x03",
        b"SPART1\n" + struct.pack("<III", 1, 2, 2) + b"\x00\x01",
        b"SPART1\n" + struct.pack("<III", 0, 2, 2),
    ],
)
def test_corrupt_inputs(data):
    with pytest.raises(CorruptFile):
        spart.loads(data)

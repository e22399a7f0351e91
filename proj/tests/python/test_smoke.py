from fractions import Fraction

import pytest

import agdcas


def test_version():
    assert agdcas.__version__ == "0.1.0"


def test_w2_pencil():
    assert agdcas.bracket("w2", -1, -1, which="pencil") == "(2λ+∂)u + ½λ³ − 2cλ"


def test_v1():
    assert agdcas.bracket("v1", -1, -1) == "−λ"


def test_verify():
    assert agdcas.verify("w3") == {"skew": True, "jacobi": True}
    assert agdcas.verify("broken-demo", ["jacobi"]) == {"jacobi": False}


def test_kdv():
    assert "¼u‴" in agdcas.flow("w2", 3)
    assert agdcas.flow("w2", 3, format="latex").strip().endswith("\\frac14(u'''+6uu')")


def test_central_charges():
    assert agdcas.central_charge("w2") == Fraction(1, 2)
    assert agdcas.central_charge("w3") == 2
    assert agdcas.central_charge("w-mat(2,2)") == 1


def test_unknown_structure():
    with pytest.raises(ValueError):
        agdcas.bracket("nosuch", 1, 1)

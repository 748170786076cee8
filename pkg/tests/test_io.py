import numpy as np
import pytest

from slicecalc.algebra import clifford
from slicecalc.cliffordop import random_paravector_operator
from slicecalc.errors import DimensionMismatch, InputError, UnknownFunction
from slicecalc.io import load_operator, operator_from_dict, parse_function, parse_operator_text, save_operator
from slicecalc.qmatrix import QMatrix, random_qmatrix
from slicecalc.slicefn import INTRINSIC, LEFT, RIGHT


@pytest.mark.parametrize("suffix", [".yaml", ".json"])
def test_quaternion_roundtrip_is_bit_exact(tmp_path, rng, suffix):
    A = random_qmatrix(rng, 3)
    p = save_operator(A, tmp_path / f"a{suffix}")
    B = load_operator(p)
    assert isinstance(B, QMatrix)
    assert np.array_equal(A.entries, B.entries)


def test_paravector_roundtrip(tmp_path, rng):
    T = random_paravector_operator(rng, 3, 2)
    U = load_operator(save_operator(T, tmp_path / "t.yaml"))
    assert U.n == 3
    for a, b in zip(T.components, U.components):
        assert np.array_equal(a, b)


def test_malformed_yaml_reports_position():
    with pytest.raises(InputError, match=r"line 3, column 1"):
        parse_operator_text("kind: quaternion-matrix\nentries: [[[1,0,0,0]]\n")


def test_shape_validation():
    with pytest.raises(DimensionMismatch):
        operator_from_dict({"kind": "quaternion-matrix", "m": 2, "entries": [[[1, 0, 0, 0]]]})
    with pytest.raises(DimensionMismatch):
        operator_from_dict({"kind": "paravector", "n": 2, "entries": [[[1]], [[0]]]})
    with pytest.raises(InputError):
        operator_from_dict({"kind": "matrix", "entries": []})
    with pytest.raises(InputError):
        operator_from_dict({"kind": "paravector", "entries": [[[1]]]})


@pytest.mark.parametrize(
    "spec,side",
    [
        ("psi(2)", INTRINSIC),
        ("pow(3)", INTRINSIC),
        ("frac_pow(0.5)", INTRINSIC),
        ("exp_neg", INTRINSIC),
        ("rational([1,0,1],[2,0,1])", INTRINSIC),
        ("poly_left([[0,1,0,0],[1,0,0,0]])", LEFT),
        ("right:poly([[0,1,0,0],[1,0,0,0]])", RIGHT),
        ("left:rational([[0,1,0,0],[1,0,0,0]],[[2,0,0,0],[1,0,0,0]])", LEFT),
    ],
)
def test_function_specs(spec, side):
    assert parse_function(spec).side == side


def test_function_spec_errors():
    with pytest.raises(UnknownFunction):
        parse_function("sinh(1)")
    for bad in ("psi(", "PSI(1)", "rational([1j],[1])", "rational([[0,1,0,0]],[[1,0,0,0]])", "psi(1,2,3)"):
        with pytest.raises(InputError):
            parse_function(bad)


def test_clifford_function_spec():
    f = parse_function("poly_left([[0,1,0],[1,0,0]])", clifford(2))
    assert f.side == LEFT and f.poly.shape == (2, 4)

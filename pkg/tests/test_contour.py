import math

import numpy as np
import pytest

from slicecalc.algebra import E1, E2, H, Quaternion
from slicecalc.contour import build_circle, build_sector_path, check_path, integrate_left, integrate_right, \
    integrate_scalar, tail_bounds
from slicecalc.errors import InputError, PathHitsSpectrum
from slicecalc.qmatrix import QMatrix
from slicecalc.slicefn import LEFT, RIGHT, from_poly, psi


def test_circle_weights_reproduce_cauchy():
    C = build_circle(None, 2.0, 64, algebra=H)
    assert abs(integrate_scalar(C, lambda z: 1 / z) - 1) < 1e-14
    assert abs(integrate_scalar(C, lambda z: np.exp(z) / (z - 0.5)) - math.exp(0.5)) < 1e-13
    assert abs(integrate_scalar(C, lambda z: z ** 3)) < 1e-13


def test_sector_path_reproduces_cauchy_for_decaying_integrand():
    C = build_sector_path(None, math.pi / 3, algebra=H)
    g = lambda z: z / (1 + z) ** 2
    for lam in (0.5, 2.0, 7.0 + 3.0j):
        assert abs(integrate_scalar(C, lambda z: g(z) / (z - lam)) - g(lam)) < 1e-10


def test_sector_path_nodes_stay_on_boundary():
    th = 0.7
    C = build_sector_path(E1, th, eps=1e-3, R=1e3, algebra=H)
    z = C.nodes
    ang = np.abs(np.angle(z))
    on_rays = np.isclose(ang, th)
    on_arc = np.isclose(np.abs(z), 1e-3) & (ang <= th + 1e-12)
    assert np.all(on_rays | on_arc)
    assert np.abs(z).max() < 1e3 * (1 + 1e-12)


def test_reversed_contour_negates():
    C = build_circle(None, 1.0, 32, algebra=H)
    f = lambda z: 1 / z
    assert abs(integrate_scalar(C.reversed(), f) + integrate_scalar(C, f)) < 1e-14


def test_bad_parameters():
    with pytest.raises(InputError):
        build_sector_path(None, 4.0, algebra=H)
    with pytest.raises(InputError):
        build_circle(None, -1.0, algebra=H)
    with pytest.raises(InputError):
        build_circle(Quaternion(1.0, 1.0), 1.0)


def test_path_hitting_spectrum():
    T = QMatrix.diag([Quaternion(0.0, 0.0, 2.0, 0.0)])
    with pytest.raises(PathHitsSpectrum):
        check_path(build_circle(None, 2.0, 64, algebra=H), T)


def test_left_and_right_integrals_of_polynomials(rng):
    T = QMatrix(0.3 * rng.standard_normal((2, 2, 4)))
    c = rng.standard_normal((3, 4))
    C = build_circle(E2, 3.0, 128, algebra=H)
    fl = integrate_left(C, T, from_poly(c, LEFT))
    fr = integrate_right(C, T, from_poly(c, RIGHT))
    # sum_l T^l a_l  and  sum_l a_l T^l
    I = QMatrix.identity(2)
    exp_l = sum((T.power(l) @ I.lmul(Quaternion.from_array(c[l])) for l in range(3)), QMatrix.zeros(2))
    exp_r = sum((I.lmul(Quaternion.from_array(c[l])) @ T.power(l) for l in range(3)), QMatrix.zeros(2))
    assert fl.allclose(exp_l, 1e-11)
    assert fr.allclose(exp_r, 1e-11)


def test_tail_bounds_are_small_for_default_truncation():
    T = QMatrix.diag([1.0, 3.0])
    C = build_sector_path(None, math.pi / 4, algebra=H)
    tb = tail_bounds(C, T, psi(1))
    assert math.isclose(tb["alpha_fit"], 1.0, rel_tol=1e-2)
    assert tb["head"] < 1e-7 and tb["tail"] < 1e-7

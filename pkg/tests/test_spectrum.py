import math

import numpy as np
import pytest

from slicecalc.algebra import E1, E2, H, Quaternion
from slicecalc.errors import OnSpectrum, SphereCollision
from slicecalc.qmatrix import QMatrix, random_qmatrix
from slicecalc.slicefn import cauchy_kernel_left, cauchy_kernel_right
from slicecalc.spectrum import (
    classify_sector, hausdorff, pencil_sigma_min, pseudo_resolvent, resolvent_equation_residual, s_resolvent_left,
    s_resolvent_right, s_spectrum,
)


def test_real_diagonal_summary():
    assert s_spectrum(QMatrix.diag([2.0, 3.0])).summary() == "(2.0, 0.0) ×1; (3.0, 0.0) ×1; omega=0"


def test_imaginary_units_share_a_sphere():
    assert s_spectrum(QMatrix.diag([E1, E2])).summary() == "(0.0, 1.0) ×2; omega=1.5708"


def test_triangular_matrix_uses_diagonal_spheres(rng):
    E = np.zeros((3, 3, 4))
    diag = [Quaternion(1, 2, 0, 0), Quaternion(-1, 0, 0, 3), Quaternion(0.5)]
    for k, q in enumerate(diag):
        E[k, k] = q.as_array()
    E[0, 1] = rng.standard_normal(4)
    E[0, 2] = rng.standard_normal(4)
    E[1, 2] = rng.standard_normal(4)
    spec = s_spectrum(QMatrix(E))
    assert hausdorff(spec.points(), np.array([[1, 2], [-1, 3], [0.5, 0]])) < 1e-8


def test_spectrum_against_sigma_min_scan(rng):
    T = random_qmatrix(rng, 3)
    spec = s_spectrum(T)
    for s in spec:
        assert pencil_sigma_min(T, s.u, s.v) < 1e-8
    # points off the spectrum have a clearly invertible pencil
    assert pencil_sigma_min(T, spec.radius + 1.0, 0.0) > 1e-3


def test_resolvents_of_scalar_match_kernels(rng):
    for _ in range(5):
        q = Quaternion.from_array(rng.standard_normal(4))
        s = Quaternion.from_array(2 * rng.standard_normal(4))
        T = QMatrix.diag([q])
        L = s_resolvent_left(T, s).entries[0, 0]
        R = s_resolvent_right(T, s).entries[0, 0]
        assert np.allclose(L, cauchy_kernel_left(s, q).as_array(), atol=1e-12)
        assert np.allclose(R, cauchy_kernel_right(s, q).as_array(), atol=1e-12)


def test_left_resolvent_example():
    L = s_resolvent_left(QMatrix.diag([E1]), Quaternion(2.0))
    assert np.allclose(L.entries[0, 0], [0.4, 0.2, 0, 0])


def test_real_point_resolvents_are_ordinary_inverse(rng):
    T = random_qmatrix(rng, 3)
    s = 5.0 + s_spectrum(T).radius
    inv = np.linalg.inv(s * np.eye(T.rep.shape[0]) - T.rep)
    assert np.allclose(s_resolvent_left(T, s).rep, inv, atol=1e-12)
    assert np.allclose(s_resolvent_right(T, s).rep, inv, atol=1e-12)


def test_on_spectrum_raises():
    T = QMatrix.diag([E1, 2.0])
    with pytest.raises(OnSpectrum):
        pseudo_resolvent(T, E2)


def test_resolvent_equation_and_collision(rng):
    T = random_qmatrix(rng, 3, 0.3)
    s = Quaternion(2.0, 1.0, 0.5, 0.0)
    p = Quaternion(-1.5, 0.0, 2.0, 1.0)
    assert resolvent_equation_residual(T, s, p) < 1e-12
    with pytest.raises(SphereCollision):
        resolvent_equation_residual(T, s, Quaternion(2.0, 0.0, 0.0, math.hypot(1.0, 0.5)))


def test_sector_constant_for_positive_matrix():
    T = QMatrix.diag([1.0, 2.0, 5.0])
    prof = classify_sector(T, [0.5, 1.0])
    assert prof.omega == 0.0
    for smp in prof.samples:
        bound = 1 / math.sin(smp.theta)
        assert 0.9 * bound <= smp.C <= bound * (1 + 1e-9)


def test_omega_of_rotated_spectrum():
    z = Quaternion(math.cos(0.6), math.sin(0.6))
    spec = s_spectrum(QMatrix.diag([z, 2.0]))
    assert math.isclose(spec.omega, 0.6, rel_tol=1e-10)

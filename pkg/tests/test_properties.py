"""Randomised algebraic identities (hypothesis)."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from slicecalc.algebra import H, Quaternion, clifford
from slicecalc.calculus import apply
from slicecalc.qmatrix import AlgebraMatrix, QMatrix, op_norm
from slicecalc.slicefn import LEFT, RIGHT, add, cauchy_kernel_left, cauchy_kernel_right, from_poly, psi, star_mul, symmetrize
from slicecalc.spectrum import hausdorff, resolvent_equation_residual, s_spectrum

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
quat = arrays(np.float64, 4, elements=finite)
small_int = st.integers(-3, 3)
int_coeffs = st.lists(st.lists(small_int, min_size=4, max_size=4), min_size=1, max_size=4)

FAST = settings(max_examples=40, deadline=None)


@FAST
@given(quat, quat, quat)
def test_quaternion_associativity(a, b, c):
    assert np.allclose(H.mul(H.mul(a, b), c), H.mul(a, H.mul(b, c)), atol=1e-10)


@FAST
@given(quat, quat)
def test_conjugate_of_product(a, b):
    assert np.allclose(H.conj(H.mul(a, b)), H.mul(H.conj(b), H.conj(a)), atol=1e-12)


@FAST
@given(quat, quat)
def test_kernel_identity(s, q):
    sa, qa = Quaternion.from_array(s), Quaternion.from_array(q)
    u, v = s[0], np.linalg.norm(s[1:])
    if abs(u - q[0]) + abs(v - np.linalg.norm(q[1:])) < 1e-3:
        return
    a = cauchy_kernel_right(sa, qa).as_array()
    b = cauchy_kernel_left(qa, sa).as_array()
    assert np.allclose(a, -b, atol=1e-9 * max(1.0, np.abs(a).max()))


@FAST
@given(int_coeffs, int_coeffs, int_coeffs)
def test_star_product_associative_and_distributive(a, b, c):
    f, g, h = (from_poly(np.array(x, float), LEFT) for x in (a, b, c))
    assert np.array_equal(star_mul(star_mul(f, g), h).poly, star_mul(f, star_mul(g, h)).poly)
    lhs = star_mul(f, add(g, h)).poly
    rhs = add(star_mul(f, g), star_mul(f, h)).poly
    n = max(len(lhs), len(rhs))
    pad = lambda p: np.vstack([p, np.zeros((n - len(p), 4))])
    assert np.array_equal(pad(lhs), pad(rhs))


@FAST
@given(int_coeffs, int_coeffs)
def test_symmetrization_commutes(a, b):
    f, g = from_poly(np.array(a, float), LEFT), from_poly(np.array(b, float), LEFT)
    fs = symmetrize(f)
    x, y = star_mul(fs, g).poly, star_mul(g, fs).poly
    assert np.array_equal(x, y)


@FAST
@given(int_coeffs, quat)
def test_star_product_evaluation_formula(a, q):
    """(f * g)(q) = f(q) g(f(q)^{-1} q f(q)) for left functions with f(q) != 0."""
    f = from_poly(np.array(a, float), LEFT)
    g = from_poly(np.array([[0, 0, 1, 0], [1, 0, 0, 0]], float), LEFT)
    Q = Quaternion.from_array(q)
    fq = f(Q)
    if fq.norm() < 1e-3:
        return
    rhs = fq * g(fq.inv() * Q * fq)
    assert star_mul(f, g)(Q).isclose(rhs, 1e-8 * max(1.0, rhs.norm()))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_resolvent_equation_random(seed):
    rng = np.random.default_rng(seed)
    T = QMatrix(0.3 * rng.standard_normal((3, 3, 4)))
    s = Quaternion(3.0, *rng.standard_normal(3))
    p = Quaternion(-3.0, *rng.standard_normal(3))
    assert resolvent_equation_residual(T, s, p) < 1e-10


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_clifford_n2_instantiation_matches_quaternions(seed):
    """Quaternionic matrices read as R_2-valued matrices give the same spectra and calculus."""
    rng = np.random.default_rng(seed)
    E = rng.standard_normal((2, 2, 4))
    E[:, :, 0] += 3 * np.eye(2)
    Tq = QMatrix(E)
    Tc = AlgebraMatrix(E, clifford(2))
    sq, sc = s_spectrum(Tq), s_spectrum(Tc)
    assert hausdorff(sq.points(), sc.points()) < 1e-8
    assert [s.multiplicity for s in sq] == [s.multiplicity for s in sc]
    if sq.omega < math.pi / 2 - 1e-3:
        a = apply(psi(1), Tq, "rational").result
        b = apply(psi(1), Tc, "rational").result
        assert np.allclose(a.entries, b.entries, atol=1e-10)
    s, p = Quaternion(0.0, 5.0), Quaternion(-6.0, 0.0, 1.0)
    assert resolvent_equation_residual(Tc, s.as_array(), p.as_array()) < 1e-10

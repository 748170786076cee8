import math

import numpy as np
import pytest

from slicecalc.errors import InputError, NotPsiPlus
from slicecalc.qmatrix import QMatrix
from slicecalc.quadratic import closed_form, estimate_beta, hinf_bound_check, log_nodes, quadratic_integral
from slicecalc.slicefn import exp_neg, psi, rational


def test_log_nodes_integrate_dt_over_t():
    t, w = log_nodes(1e-3, 1e3)
    assert math.isclose(np.sum(w), math.log(1e6), rel_tol=1e-13)


@pytest.mark.parametrize("k,expected", [(1, 1 / 2), (2, 1 / 12), (3, 1 / 60), (4, 1 / 280)])
def test_closed_forms(k, expected):
    assert math.isclose(closed_form(k), expected, rel_tol=1e-14)
    assert abs(quadratic_integral(QMatrix.diag([1.0]), psi(k), [1.0]) - expected) < 1e-8


def test_dilation_invariance():
    vals = [quadratic_integral(QMatrix.diag([lam]), psi(2), [1.0]) for lam in (0.1, 1.0, 10.0)]
    assert max(vals) - min(vals) < 1e-10


def test_beta_for_self_adjoint_matrix():
    T = QMatrix.diag([1.0, 10.0])
    out = estimate_beta(T, psi(1), trials=6, adjoint=True)
    assert math.isclose(out["beta"], math.sqrt(0.5), rel_tol=1e-8)
    assert math.isclose(out["beta_adjoint"], out["beta"], rel_tol=1e-10)


def test_psi_must_be_positive():
    with pytest.raises(NotPsiPlus):
        quadratic_integral(QMatrix.diag([1.0]), rational([0, -1], [1, 0, 1]), [1.0])


def test_trials_validated():
    with pytest.raises(InputError):
        estimate_beta(QMatrix.diag([1.0]), psi(1), trials=0)


def test_bound_ratio_for_hermitian():
    out = hinf_bound_check(QMatrix.diag([0.5, 3.0]), exp_neg())
    assert out["ok"] and out["ratio"] <= 1.0
    assert math.isclose(out["norm_fT"], math.exp(-0.5), rel_tol=1e-9)

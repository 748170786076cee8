import pytest

from slicecalc.errors import InputError
from slicecalc.verify import SUITES, dirac_sphere_oracle, max_threads, run_suite


@pytest.mark.parametrize("name", ["resolvent-eq", "star-inverse", "clifford", "spectral-map"])
def test_fast_suites_pass(name):
    (res,) = run_suite(name, seed=1, trials=4)
    assert res.passed, res.witness


def test_order_is_by_trial_index(monkeypatch):
    monkeypatch.setenv("SLICE_CALC_THREADS", "3")
    (a,) = run_suite("resolvent-eq", seed=5, trials=9)
    monkeypatch.setenv("SLICE_CALC_THREADS", "1")
    (b,) = run_suite("resolvent-eq", seed=5, trials=9)
    assert [r["trial"] for r in a.trials] == list(range(9))
    assert a.trials == b.trials


def test_thread_env_validation(monkeypatch):
    monkeypatch.setenv("SLICE_CALC_THREADS", "lots")
    with pytest.raises(InputError):
        max_threads()


def test_bad_suite_and_trials():
    with pytest.raises(InputError):
        run_suite("nonsense")
    with pytest.raises(InputError):
        run_suite("clifford", trials=0)


def test_dirac_oracle():
    assert dirac_sphere_oracle(4).tolist() == [[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]


def test_all_suites_listed():
    assert len(SUITES) == 8

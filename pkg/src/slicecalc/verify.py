"""Property suites: deterministic given a seed, one record per trial."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import H, Quaternion
from .calculus import (
    convergence_check,
    omega_calculus,
    verify_product_rule,
    verify_regularizer_independence,
    verify_spectral_mapping,
    verify_sum_product_subset,
)
from .cliffordop import clifford_calculus, clifford_resolvent_residual, clifford_s_spectrum, dirac_demo, random_paravector_operator
from .errors import InputError, SliceCalcError
from .qmatrix import AlgebraMatrix, QMatrix, op_norm
from .slicefn import LEFT, exp_neg, frac_pow, from_poly, pow_fn, psi, rational, star_inv, star_mul, symmetrize
from .spectrum import hausdorff, pencil_sigma_min, resolvents_rep, resolvent_equation_residual, s_spectrum

SUITES = ("resolvent-eq", "slice-independence", "product-rule", "regularizer", "spectral-map",
          "star-inverse", "clifford", "convergence")

DEFAULT_TRIALS = {
    "resolvent-eq": 100,
    "slice-independence": 3,
    "product-rule": 10,
    "regularizer": 3,
    "spectral-map": 10,
    "star-inverse": 100,
    "clifford": 10,
    "convergence": 1,
}


@dataclass
class SuiteResult:
    name: str
    passed: bool
    metric: str
    value: float
    threshold: float
    trials: list = field(default_factory=list)
    witness: object = None

    def as_dict(self):
        return {
            "suite": self.name,
            "passed": self.passed,
            "metric": self.metric,
            "value": self.value,
            "threshold": self.threshold,
            "witness": self.witness,
            "trials": self.trials,
        }


def max_threads() -> int:
    raw = os.environ.get("SLICE_CALC_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InputError(f"SLICE_CALC_THREADS must be an integer, got {raw!r}") from None
    return min(4, os.cpu_count() or 1)


def _run(trial, n: int, seed: int, threads: int | None):
    """Run trial(i, rng) for i < n; output order is the trial index."""

    def one(i):
        rng = np.random.default_rng([seed, i])
        try:
            rec = trial(i, rng)
        except SliceCalcError as exc:
            rec = {"error": type(exc).__name__, "message": str(exc), "value": math.inf}
        rec["trial"] = i
        return rec

    workers = min(threads or max_threads(), n)
    if workers <= 1:
        return [one(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(n)))


def _summarise(name, metric, recs, threshold, key="value") -> SuiteResult:
    vals = [r.get(key, math.inf) for r in recs]
    worst = int(np.argmax(vals)) if vals else 0
    value = float(vals[worst]) if vals else 0.0
    ok = all(r.get("ok", v <= threshold) for r, v in zip(recs, vals))
    bad = next((r for r in recs if not r.get("ok", r.get(key, math.inf) <= threshold)), None)
    return SuiteResult(name, bool(ok), metric, value, threshold, recs, None if ok else bad)


# -- random operators --------------------------------------------------------------------


def random_quaternion_diag(rng, m, omega=math.pi / 4, rmin=0.5, rmax=4.0):
    r = np.exp(rng.uniform(math.log(rmin), math.log(rmax), m))
    phi = rng.uniform(0, omega, m)
    vals = []
    for rk, pk in zip(r, phi):
        u = H.random_unit(rng)
        vals.append(rk * (math.cos(pk) * H.one + math.sin(pk) * u))
    return QMatrix.diag(vals, H)


def random_sectorial(rng, m=3, omega=math.pi / 4, rmin=0.5, rmax=4.0, spread=0.2) -> QMatrix:
    """S D S^{-1} with D diagonal in the closed sector of angle omega."""
    D = random_quaternion_diag(rng, m, omega, rmin, rmax)
    S = QMatrix.identity(m) + QMatrix(spread / math.sqrt(m) * rng.standard_normal((m, m, 4)))
    R = S.rep @ D.rep @ np.linalg.inv(S.rep)
    return QMatrix.from_rep(R, H, check=False)


def random_unitary(rng, m) -> QMatrix:
    """Cayley transform of a skew-hermitian quaternionic matrix."""
    B = QMatrix(rng.standard_normal((m, m, 4)))
    K = B - B.adjoint()
    I = np.eye(K.rep.shape[0])
    U = (I - 0.5 * K.rep) @ np.linalg.inv(I + 0.5 * K.rep)
    return QMatrix.from_rep(U, H, check=False)


def random_normal(rng, m=3, omega=math.pi / 4, rmin=0.2, rmax=0.8) -> QMatrix:
    D = random_quaternion_diag(rng, m, omega, rmin, rmax)
    U = random_unitary(rng, m)
    return QMatrix.from_rep(U.rep @ D.rep @ U.rep.conj().T, H, check=False)


def random_hpd(rng, m=3, lo=0.2, hi=3.0) -> QMatrix:
    """Hermitian positive definite with eigenvalues in [lo, hi]."""
    U = random_unitary(rng, m)
    lam = rng.uniform(lo, hi, m)
    D = QMatrix.diag([float(x) for x in lam])
    A = QMatrix.from_rep(U.rep @ D.rep @ U.rep.conj().T, H, check=False)
    return 0.5 * (A + A.adjoint())


def _separated_point(rng, T: AlgebraMatrix, spec, others=(), sep=0.1, scale=2.0):
    alg = T.algebra
    for _ in range(200):
        s = alg.random_point(rng, scale)
        u, v = float(s[0]), float(np.linalg.norm(s[1:]))
        if spec.distance(np.array([u]), np.array([v]))[0] < sep:
            continue
        if any(math.hypot(u - a, v - b) < sep for a, b in others):
            continue
        return s, (u, v)
    raise InputError("could not sample a point away from the spectrum")


# -- suites ------------------------------------------------------------------------------------


def suite_resolvent_eq(seed=0, trials=None, threads=None) -> SuiteResult:
    n = trials or DEFAULT_TRIALS["resolvent-eq"]

    def trial(i, rng):
        T = QMatrix(rng.standard_normal((4, 4, 4)) / 2)
        spec = s_spectrum(T)
        s, su = _separated_point(rng, T, spec)
        p, _ = _separated_point(rng, T, spec, others=[su])
        v = rng.standard_normal((4, 4))
        v /= np.linalg.norm(v)
        res = resolvent_equation_residual(T, s, p, v)
        scale = max(1.0, np.linalg.norm(resolvents_rep(T, s, "right"), 2) * np.linalg.norm(resolvents_rep(T, p, "left"), 2))
        return {"value": res / scale, "residual": res, "scale": float(scale)}

    return _summarise("resolvent-eq", "max residual/scale", _run(trial, n, seed, threads), 1e-8)


def suite_slice_independence(seed=0, trials=None, threads=None, units: int = 5) -> SuiteResult:
    n = trials or DEFAULT_TRIALS["slice-independence"]

    def trial(i, rng):
        T = random_sectorial(rng, 3)
        spec = s_spectrum(T)
        f = psi(1 + i % 2)
        res = [omega_calculus(f, T, unit=H.random_unit(rng), spectrum=spec).result for _ in range(units)]
        d = max(op_norm(a - b) for k, a in enumerate(res) for b in res[k + 1:])
        return {"value": d, "function": f.name}

    return _summarise("slice-independence", "max pairwise deviation", _run(trial, n, seed, threads), 1e-8)


PRODUCT_FUNCTIONS = (lambda: psi(1), lambda: psi(2), lambda: rational([0, 1], [1, 2, 1]))


def suite_product_rule(seed=0, trials=None, threads=None) -> SuiteResult:
    n = trials or DEFAULT_TRIALS["product-rule"]
    pairs = [(a, b) for a in range(3) for b in range(3)]

    def trial(i, rng):
        T = random_sectorial(rng, 3)
        a, b = pairs[i % len(pairs)]
        f, g = PRODUCT_FUNCTIONS[a](), PRODUCT_FUNCTIONS[b]()
        out = verify_product_rule(f, g, T)
        return {"value": out["residual"], "pair": [f.name, g.name]}

    return _summarise("product-rule", "max residual", _run(trial, n, seed, threads), 1e-6)


REGULARIZED = (lambda: frac_pow(0.5), exp_neg, lambda: pow_fn(1))


def suite_regularizer(seed=0, trials=None, threads=None) -> SuiteResult:
    n = trials or DEFAULT_TRIALS["regularizer"]

    def trial(i, rng):
        T = random_sectorial(rng, 3, omega=math.pi / 4)
        worst, names, sp = 0.0, [], 0.0
        fs = [mk() for mk in REGULARIZED]
        for f in fs:
            k = max(1, math.ceil(f.growth.k - 1e-9))
            out = verify_regularizer_independence(f, T, k, k + 1)
            worst = max(worst, out["relative"])
            names.append(f.name)
        # sum and product of H-infinity functions
        sp_out = verify_sum_product_subset(fs[0], fs[1], T)
        sp = max(sp_out["sum_residual"], sp_out["product_residual"]) / sp_out["scale"]
        return {"value": worst, "functions": names, "sum_product": sp, "ok": worst <= 1e-6 and sp <= 1e-5}

    return _summarise("regularizer", "max relative k vs k+1 deviation", _run(trial, n, seed, threads), 1e-6)


MAPPED = (lambda: psi(1), lambda: pow_fn(2), lambda: rational([1, 0, 1], [2, 0, 1]), exp_neg, lambda: frac_pow(0.5))


def suite_spectral_map(seed=0, trials=None, threads=None) -> SuiteResult:
    n = trials or DEFAULT_TRIALS["spectral-map"]

    def trial(i, rng):
        T = random_sectorial(rng, 3, omega=math.pi / 4)
        f = MAPPED[i % len(MAPPED)]()
        out = verify_spectral_mapping(f, T)
        return {"value": out["distance"], "function": f.name, "method": out["method"]}

    return _summarise("spectral-map", "max Hausdorff distance", _run(trial, n, seed, threads), 1e-7)


def _left_conv_oracle(a, b):
    """Coefficients of (sum q^n a_n) * (sum q^m b_m) via quaternion products."""
    out = [Quaternion(0, 0, 0, 0)] * (len(a) + len(b) - 1)
    for n_, an in enumerate(a):
        for m_, bm in enumerate(b):
            out[n_ + m_] = out[n_ + m_] + Quaternion.from_array(an) * Quaternion.from_array(bm)
    return np.array([q.as_array() for q in out])


def suite_star_inverse(seed=0, trials=None, threads=None) -> SuiteResult:
    n = trials or DEFAULT_TRIALS["star-inverse"]

    def trial(i, rng):
        deg = 1 + i % 3
        c = rng.integers(-3, 4, (deg + 1, 4)).astype(float)
        c[-1] = H.one if not c[-1].any() else c[-1]
        f = from_poly(c, LEFT)
        g_c = rng.integers(-3, 4, (2, 4)).astype(float)
        g = from_poly(g_c, LEFT)
        conv_ok = bool(np.array_equal(star_mul(f, g).poly, _left_conv_oracle(c, g_c)))
        finv = star_inv(f)
        q = H.random_point(rng)
        fs = complex(symmetrize(f).scalar_stem(np.array([q[0] + 1j * np.linalg.norm(q[1:])]))[0])
        if abs(fs) < 1e-6 * (1 + np.sum(q * q) ** deg):
            return {"value": 0.0, "skipped": "near a zero of f^s", "convolution_exact": conv_ok, "ok": conv_ok}
        val = star_mul(finv, f)(q)
        err = float(np.linalg.norm(np.asarray(val.as_array() if hasattr(val, "as_array") else val) - H.one))
        return {"value": err, "convolution_exact": conv_ok, "ok": err <= 1e-10 and conv_ok}

    recs = _run(trial, n, seed, threads)
    f = from_poly(np.array([-H.e1, H.one]), LEFT)
    fs_ok = bool(np.array_equal(symmetrize(f).poly, np.array([H.one, 0 * H.one, H.one])))
    recs.append({"trial": "q-e1", "symmetrization_exact": fs_ok, "value": 0.0, "ok": fs_ok})
    return _summarise("star-inverse", "max |(f^-* * f)(q) - 1|", recs, 1e-10)


def dirac_sphere_oracle(N: int):
    """Real spectrum of e1 x (skew central difference): products (+-i)(i sin 2 pi k/N)."""
    vals = np.sin(2 * np.pi * np.arange(N) / N)
    pts = np.unique(np.round(np.concatenate([vals, -vals]), 12))
    return np.column_stack([pts, np.zeros_like(pts)])


def suite_clifford(seed=0, trials=None, threads=None) -> SuiteResult:
    n = trials or DEFAULT_TRIALS["clifford"]

    def trial(i, rng):
        nn = 2 + i % 2
        T = random_paravector_operator(rng, nn, 2, scale=0.5)
        M = T.matrix
        spec = clifford_s_spectrum(T)
        s, su = _separated_point(rng, M, spec)
        p, _ = _separated_point(rng, M, spec, others=[su])
        s, p = s[list(M.algebra.point_indices)], p[list(M.algebra.point_indices)]
        v = rng.standard_normal((2, M.algebra.dim))
        v /= np.linalg.norm(v)
        res = clifford_resolvent_residual(T, s, p, v)
        scale = max(1.0, np.linalg.norm(resolvents_rep(M, _full(M, s), "right"), 2)
                    * np.linalg.norm(resolvents_rep(M, _full(M, p), "left"), 2))
        return {"value": res / scale, "n": nn}

    recs = _run(trial, n, seed, threads)
    D = dirac_demo(1, 8, 2.0)
    dev = op_norm(clifford_calculus(frac_pow(0.5), D, "hinf").result - clifford_calculus(frac_pow(0.5), D, "oracle").result)
    recs.append({"trial": "dirac-massive", "value": 0.0, "hinf_vs_oracle": dev, "ok": dev <= 1e-6})
    D0 = dirac_demo(1, 4, 0.0)
    spec0 = clifford_s_spectrum(D0)
    oracle = dirac_sphere_oracle(4)
    dist = hausdorff(spec0.points(), oracle)
    smin = max(pencil_sigma_min(D0.matrix, u, v) for u, v in oracle)
    recs.append({"trial": "dirac-massless", "value": 0.0, "spheres": spec0.points().tolist(), "hausdorff": dist,
                 "sigma_min": smin, "ok": dist <= 1e-10 and smin <= 1e-10})
    return _summarise("clifford", "max resolvent-equation residual/scale", recs, 1e-8)


def _full(M, s):
    out = np.zeros(M.algebra.dim)
    out[list(M.algebra.point_indices)] = s
    return out


def convergence_operator() -> QMatrix:
    """Fixed small-norm sectorial matrix (spheres of modulus 0.02 to 0.05)."""
    rng = np.random.default_rng(2024)
    return random_sectorial(rng, 3, omega=math.pi / 6, rmin=0.02, rmax=0.05, spread=0.2)


def convergence_sequence(js):
    return [rational([0, 1], [1, 1 / j], name=f"s/(1+s/{j:g})") for j in js]


def suite_convergence(seed=0, trials=None, threads=None, js=(1, 10, 100, 1000, 10000)) -> SuiteResult:
    T = convergence_operator()
    seq = convergence_sequence(js)
    out = convergence_check(seq, pow_fn(1), T, M=None, seed=seed, method="hinf")
    ok = out["monotone"] and out["final"] <= 1e-6
    rec = {"value": out["final"], "errors": out["errors"], "monotone": out["monotone"], "j": list(js), "ok": ok}
    return _summarise("convergence", "final error", [rec], 1e-6)


RUNNERS = {
    "resolvent-eq": suite_resolvent_eq,
    "slice-independence": suite_slice_independence,
    "product-rule": suite_product_rule,
    "regularizer": suite_regularizer,
    "spectral-map": suite_spectral_map,
    "star-inverse": suite_star_inverse,
    "clifford": suite_clifford,
    "convergence": suite_convergence,
}


def run_suite(name: str, seed: int = 0, trials: int | None = None, threads: int | None = None):
    if trials is not None and trials < 1:
        raise InputError("--trials must be at least 1")
    if name == "all":
        return [RUNNERS[s](seed, trials, threads) for s in SUITES]
    if name not in RUNNERS:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return [RUNNERS[name](seed, trials, threads)]

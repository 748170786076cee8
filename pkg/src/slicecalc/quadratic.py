"""Quadratic estimates int_0^inf ||psi(tT)u||^2 dt/t and the H-infinity bound check."""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.legendre import leggauss

from .calculus import apply, hinf_calculus
from .errors import InputError, NotPsiPlus
from .qmatrix import AlgebraMatrix, as_vector, op_norm
from .slicefn import SliceFunction, classify, dilate

PANELS_PER_DECADE = 20
GL_ORDER = 8


def check_psi_plus(psi_fn: SliceFunction, grid=None):
    """psi must be intrinsic and strictly positive on (0, inf)."""
    if not psi_fn.is_intrinsic:
        raise NotPsiPlus(f"{psi_fn.name} is not intrinsic")
    t = np.logspace(-6, 6, 241) if grid is None else np.asarray(grid, dtype=float)
    vals = psi_fn.scalar_stem(t.astype(complex))
    bad = (np.abs(vals.imag) > 1e-12 * np.maximum(1.0, np.abs(vals))) | (vals.real <= 0)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise NotPsiPlus(f"{psi_fn.name} is not positive on (0, inf)", witness=float(t[k]))
    return True


def log_nodes(a: float, b: float, per_decade: int = PANELS_PER_DECADE, order: int = GL_ORDER):
    """Nodes t and weights for int_a^b g(t) dt/t (Gauss-Legendre in log t)."""
    npan = max(1, int(math.ceil(per_decade * math.log10(b / a))))
    x, w = leggauss(order)
    edges = np.linspace(math.log(a), math.log(b), npan + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    s = (0.5 * (hi - lo) * x + 0.5 * (hi + lo)).ravel()
    ws = (0.5 * (hi - lo) * w).ravel()
    return np.exp(s), ws


def _psi_tT_apply(T: AlgebraMatrix, psi_fn: SliceFunction, t, X):
    """psi(tT) applied to the columns of X (representation space), for every t."""
    R = T.rep
    N = R.shape[0]
    I = np.eye(N)
    X = np.asarray(X)
    if psi_fn.rational_power is not None:
        P0, Q0, k = psi_fn.rational_power
        Y = np.broadcast_to(X, (len(t),) + X.shape).astype(np.result_type(R, X, float))
        for _ in range(int(k)):
            num = _poly_apply(P0, R, t, Y)
            Y = np.linalg.solve(_poly_mats(Q0, R, t, I), num)
        return Y
    if psi_fn.rational is not None:
        P, Q = psi_fn.rational
        Y = np.broadcast_to(X, (len(t),) + X.shape).astype(np.result_type(R, X, float))
        return np.linalg.solve(_poly_mats(Q, R, t, I), _poly_apply(P, R, t, Y))
    out = []
    for tk in t:
        M = apply(dilate(psi_fn, float(tk)), T).rep
        out.append(M @ X)
    return np.array(out)


def _poly_mats(c, R, t, I):
    """Stack of sum_l c_l (t R)^l over t."""
    c = np.asarray(c, dtype=float)
    out = np.zeros((len(t),) + R.shape, dtype=np.result_type(R, float))
    P = np.broadcast_to(I, out.shape).astype(out.dtype)
    for l, a in enumerate(c):
        if l > 0:
            P = (t[:, None, None] * R[None]) @ P
        if a:
            out = out + a * P
    return out


def _poly_apply(c, R, t, Y):
    c = np.asarray(c, dtype=float)
    out = np.zeros_like(Y)
    P = Y
    for l, a in enumerate(c):
        if l > 0:
            P = t[:, None, None] * (R[None] @ P)
        if a:
            out = out + a * P
    return out


def _defaults(T, eps, R):
    nrm = op_norm(T) or 1.0
    return (1e-6 / nrm if eps is None else eps), (1e6 / nrm if R is None else R)


def quadratic_integrals(T: AlgebraMatrix, psi_fn: SliceFunction, U, eps=None, R=None,
                        per_decade: int = PANELS_PER_DECADE, order: int = GL_ORDER):
    """Integrals for a batch of vectors U (shape (trials, m, dim))."""
    check_psi_plus(psi_fn)
    psi_fn = psi_fn if psi_fn.algebra == T.algebra else psi_fn.to_algebra(T.algebra)
    eps, R = _defaults(T, eps, R)
    if not 0 < eps < R:
        raise InputError("need 0 < eps < R")
    t, w = log_nodes(eps, R, per_decade, order)
    emb = T.emb
    X = np.stack([emb.vector(u) for u in U], axis=1)  # (N, trials)
    Y = _psi_tT_apply(T, psi_fn, t, X)
    sq = np.sum(np.abs(Y) ** 2, axis=1)  # (len(t), trials)
    # the quaternion embedding preserves norms; Clifford flattening too
    return np.einsum("k,kj->j", w, sq)


def quadratic_integral(T: AlgebraMatrix, psi_fn: SliceFunction, u, eps=None, R=None,
                       nodes: tuple = (PANELS_PER_DECADE, GL_ORDER)) -> float:
    u = as_vector(u, T.algebra)
    if u.shape[0] != T.m:
        raise InputError("vector length does not match the operator")
    return float(quadratic_integrals(T, psi_fn, [u], eps, R, *nodes)[0])


def tail_estimates(T: AlgebraMatrix, psi_fn: SliceFunction, eps=None, R=None, unorm: float = 1.0) -> dict:
    """Rough head/tail sizes from the decay exponent at 0 and infinity."""
    eps, R = _defaults(T, eps, R)
    mu = min(psi_fn.sector, math.pi / 2)
    cls = classify(psi_fn, mu)
    if not cls.in_Psi:
        return {}
    a, c = cls.alpha, cls.c
    nrm = op_norm(T)
    try:
        inv = op_norm(T.from_rep(np.linalg.inv(T.rep), T.algebra, check=False))
    except np.linalg.LinAlgError:
        inv = math.inf
    head = c * c / (2 * a) * (eps * nrm) ** (2 * a) * unorm ** 2
    tail = c * c / (2 * a) * (inv / R) ** (2 * a) * unorm ** 2 if math.isfinite(inv) else math.inf
    return {"head": head, "tail": tail, "alpha": a, "c": c}


def random_unit_vectors(m: int, dim: int, trials: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((trials, m, dim))
    U /= np.linalg.norm(U.reshape(trials, -1), axis=1)[:, None, None]
    return U


def estimate_beta(T: AlgebraMatrix, psi_fn: SliceFunction, trials: int = 16, seed: int = 0,
                  adjoint: bool = False, eps=None, R=None) -> dict:
    if trials < 1:
        raise InputError("need at least one trial")
    U = random_unit_vectors(T.m, T.algebra.dim, trials, seed)
    vals = quadratic_integrals(T, psi_fn, U, eps, R)
    out = {"beta": float(math.sqrt(max(vals.max(), 0.0))), "values": vals.tolist()}
    if adjoint:
        Ts = T.adjoint()
        va = quadratic_integrals(Ts, psi_fn, U, eps, R)
        out["beta_adjoint"] = float(math.sqrt(max(va.max(), 0.0)))
        out["values_adjoint"] = va.tolist()
    return out


def hinf_bound_check(T: AlgebraMatrix, f: SliceFunction, C: float = 1.0, psi_fn: SliceFunction | None = None,
                     trials: int = 8, seed: int = 0, method: str = "hinf") -> dict:
    """Compare ||f(T)|| with C ||f||_inf (sampled on the sector of f)."""
    from .slicefn import psi as psi_cat
    from .spectrum import s_spectrum

    spec = s_spectrum(T)
    mu = min(f.sector, math.pi / 2) if method == "hinf" else f.sector
    cls = classify(f, mu)
    if method == "hinf":
        fT = hinf_calculus(f, T, spectrum=spec).result
    else:
        fT = apply(f, T, method).result
    nf = op_norm(fT)
    sup = cls.sup
    out = {"norm_fT": nf, "sup_f": sup, "ratio": nf / sup if sup > 0 else math.inf, "C": C,
           "ok": bool(nf <= C * sup * (1 + 1e-12) + 1e-12), "mu": mu, "omega": spec.omega}
    qpsi = psi_fn or psi_cat(1, T.algebra)
    beta = estimate_beta(T, qpsi, trials=trials, seed=seed, adjoint=True)
    out["beta"] = beta["beta"]
    out["beta_adjoint"] = beta["beta_adjoint"]
    return out


def closed_form(k: int) -> float:
    """int_0^inf (t/(1+t^2))^(2k) dt/t = Gamma(k)^2 / (2 Gamma(2k))."""
    return 0.5 * math.gamma(k) ** 2 / math.gamma(2 * k)

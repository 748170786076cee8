"""Quadrature paths in a slice plane C_i and operator-valued Cauchy integrals.

Nodes are complex numbers z = x + iy read in the plane C_i (the point is
x + y*i).  Weights already contain the factor -i of ds_i = -i ds, so the
S-functional calculus is (1/2pi) sum_k S_L^{-1}(s_k, T) w_k f(s_k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial.legendre import leggauss

from .algebra import Algebra, as_array
from .errors import InputError, PathHitsSpectrum
from .qmatrix import AlgebraMatrix, op_norm
from .spectrum import CHUNK, SSpectrum, pseudo_resolvent_rep, resolvents_rep, s_spectrum

GL_ORDER = 8
PANELS_PER_DECADE = 12
ARC_PANELS = 4
HIT_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class Contour:
    unit: np.ndarray
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    meta: dict = field(default_factory=dict)

    def points(self, algebra: Algebra) -> np.ndarray:
        return algebra.in_plane(self.nodes, self.unit)

    def reversed(self) -> "Contour":
        return replace(self, nodes=self.nodes[::-1].copy(), weights=-self.weights[::-1].copy())

    def __len__(self):
        return len(self.nodes)


def _unit_array(i, algebra: Algebra | None):
    if i is None:
        alg = algebra
        if alg is None:
            raise InputError("need a slice unit or an algebra")
        return alg.e1.copy(), alg
    arr, alg = as_array(i, algebra)
    arr = np.array(arr, dtype=float)
    if abs(arr[0]) > 1e-12 or abs(np.linalg.norm(arr) - 1) > 1e-10 or not alg.is_point(arr):
        raise InputError("slice unit must be purely imaginary with modulus 1")
    return arr, alg


def build_circle(i=None, r: float = 1.0, N: int = 256, algebra: Algebra | None = None, center: float = 0.0) -> Contour:
    """Trapezoidal rule on the circle |s - center| = r, positively oriented."""
    if r <= 0:
        raise InputError("radius must be positive")
    if N < 8:
        raise InputError("need at least 8 nodes")
    unit, _ = _unit_array(i, algebra)
    phi = 2 * math.pi * np.arange(N) / N
    e = np.exp(1j * phi)
    nodes = center + r * e
    # ds = i r e^{i phi} dphi; times -i gives r e^{i phi} dphi
    weights = (2 * math.pi / N) * r * e
    return Contour(unit, "circle", nodes, weights, {"radius": r, "N": N, "center": center})


def _log_panels(a: float, b: float, per_decade: int, order: int):
    """Gauss-Legendre nodes/weights for integrals over r in [a, b] taken in log r."""
    decades = math.log10(b / a)
    npan = max(1, int(math.ceil(per_decade * decades)))
    x, w = leggauss(order)
    edges = np.linspace(math.log(a), math.log(b), npan + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    t = (0.5 * (hi - lo) * x + 0.5 * (hi + lo)).ravel()
    wt = (0.5 * (hi - lo) * w).ravel()
    r = np.exp(t)
    return r, wt * r  # dr = r d(log r)


def build_sector_path(
    i=None,
    theta: float = math.pi / 4,
    eps: float = 1e-8,
    R: float = 1e12,
    panels: int = PANELS_PER_DECADE,
    order: int = GL_ORDER,
    algebra: Algebra | None = None,
) -> Contour:
    """Boundary of the truncated sector: in along arg = theta, a small arc through arg 0, out along -theta."""
    if not 0 < theta < math.pi:
        raise InputError("sector angle must lie in (0, pi)")
    if not 0 < eps < R:
        raise InputError("need 0 < eps < R")
    unit, _ = _unit_array(i, algebra)
    r, wr = _log_panels(eps, R, panels, order)
    up = np.exp(1j * theta)
    lo = np.exp(-1j * theta)
    # upper ray traversed inward
    n_up = (r * up)[::-1]
    w_up = (-up * wr)[::-1]
    # clockwise arc from theta to -theta
    x, w = leggauss(order)
    edges = np.linspace(theta, -theta, ARC_PANELS + 1)
    a, b = edges[:-1, None], edges[1:, None]
    phi = (0.5 * (b - a) * x + 0.5 * (b + a)).ravel()
    wphi = (0.5 * (b - a) * w).ravel()  # negative: phi decreases
    n_arc = eps * np.exp(1j * phi)
    w_arc = 1j * eps * np.exp(1j * phi) * wphi
    n_lo = r * lo
    w_lo = lo * wr
    nodes = np.concatenate([n_up, n_arc, n_lo])
    weights = -1j * np.concatenate([w_up, w_arc, w_lo])
    meta = {"theta": theta, "eps": eps, "R": R, "panels": panels, "order": order}
    return Contour(unit, "sector", nodes, weights, meta)


def check_path(C: Contour, T: AlgebraMatrix, spectrum: SSpectrum | None = None):
    spec = spectrum if spectrum is not None else s_spectrum(T)
    d = spec.distance(C.nodes.real, C.nodes.imag)
    tol = HIT_RTOL * max(1.0, op_norm(T))
    if np.any(d <= tol):
        k = int(np.argmin(d))
        raise PathHitsSpectrum("quadrature node on a spectral sphere", witness=(float(C.nodes[k].real), float(C.nodes[k].imag)))
    return spec


def _values(f, pts, alg):
    from .slicefn import SliceFunction, eval_fn

    if isinstance(f, SliceFunction):
        if f.algebra != alg:
            f = f.to_algebra(alg)
        return np.asarray(eval_fn(f, pts), dtype=float)
    vals = np.asarray(f(pts), dtype=float)
    if vals.shape != pts.shape:
        raise InputError("function values must match the node array shape")
    return vals


def _accumulate(T: AlgebraMatrix, pts, coeff_sets):
    """For each coefficient array x (K, dim) return sum_k x[k, C] Q_k, stacked over C."""
    N = T.rep.shape[0]
    dt = complex if np.iscomplexobj(T.rep) else float
    acc = [np.zeros((T.algebra.dim, N, N), dtype=dt) for _ in coeff_sets]
    for a in range(0, len(pts), CHUNK):
        Q = pseudo_resolvent_rep(T, pts[a:a + CHUNK], check=False)
        for out, x in zip(acc, coeff_sets):
            out += np.einsum("kc,kij->cij", x[a:a + CHUNK], Q)
    return acc


def integrate_rep(C: Contour, T: AlgebraMatrix, f, side: str = "left", check: bool = True, spectrum=None):
    alg = T.algebra
    pts = C.points(alg)
    if check:
        check_path(C, T, spectrum)
    fv = _values(f, pts, alg)
    w = alg.in_plane(C.weights, C.unit)
    sbar = alg.conj(pts)
    R = T.rep
    Rc = T.emb.basis_scalars
    if side == "left":
        c = alg.mul(w, fv)
        a = alg.mul(sbar, c)
        A, B = _accumulate(T, pts, [a, c])
        X = np.einsum("cij,cjk->ik", A, Rc) - R @ np.einsum("cij,cjk->ik", B, Rc)
    elif side == "right":
        d = alg.mul(fv, w)
        e = alg.mul(d, sbar)
        B, D = _accumulate(T, pts, [d, e])
        X = np.einsum("cij,cjk->ik", Rc, -(R[None] @ B) + D)
    else:
        raise InputError(f"unknown side {side!r}")
    return X / (2 * math.pi)


def integrate_left(C: Contour, T: AlgebraMatrix, f, check: bool = True) -> AlgebraMatrix:
    return T.from_rep(integrate_rep(C, T, f, "left", check), T.algebra, check=False)


def integrate_right(C: Contour, T: AlgebraMatrix, f, check: bool = True) -> AlgebraMatrix:
    return T.from_rep(integrate_rep(C, T, f, "right", check), T.algebra, check=False)


def integrate_scalar(C: Contour, g) -> complex:
    """(1/2pi) sum_k w_k g(z_k) for a complex-valued integrand on the plane."""
    return complex(np.sum(C.weights * g(C.nodes)) / (2 * math.pi))


def tail_bounds(C: Contour, T: AlgebraMatrix, f) -> dict:
    """Head/tail truncation estimates for a sector path and a decaying integrand."""
    if C.kind != "sector":
        return {}
    alg = T.algebra
    eps, R = C.meta["eps"], C.meta["R"]
    z = C.nodes
    r = np.abs(z)
    order = np.argsort(r)
    pick = np.concatenate([order[:2], order[-2:]])
    pts = alg.in_plane(z[pick], C.unit)
    K = resolvents_rep(T, pts, "left", check=False)
    Cres = float(np.max(np.linalg.norm(K, 2, axis=(1, 2)) * r[pick]))
    absf = np.linalg.norm(_values(f, C.points(alg), alg), axis=-1)
    ray = r > eps * (1 + 1e-9)
    lr = np.log(r[ray])
    lf = np.log(np.clip(absf[ray], 1e-300, None))
    # log-slopes over the first and last decade of the rays
    lo = lr <= lr.min() + math.log(10)
    hi = lr >= lr.max() - math.log(10)
    s0 = np.polyfit(lr[lo], lf[lo], 1)[0]
    sinf = np.polyfit(lr[hi], lf[hi], 1)[0]
    alpha = float(max(min(s0, -sinf), 1e-3))
    c = float(np.max(absf * (1 + r ** (2 * alpha)) / r ** alpha))
    pref = 2 * Cres * c / (2 * math.pi * alpha)
    head = pref * math.atan(eps ** alpha)
    tail = pref * (math.pi / 2 - math.atan(R ** alpha))
    return {"C_est": Cres, "alpha_fit": alpha, "c_fit": c, "head": head, "tail": tail}

"""Functional calculi: bounded (circle), sectorial (sector path), intrinsic
rational, H-infinity by regularisation, plus an eigen-decomposition oracle and
the identity checks built on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import contour as ct
from .errors import (
    ConvergenceError,
    DefectiveMatrix,
    DomainTooSmall,
    HypothesisFailed,
    InputError,
    NotInFClass,
    NotInPsiClass,
    NotTypeOmega,
    OutOfDomain,
    PoleOnSpectrum,
    RegularizerSingular,
    Singular,
)
from .qmatrix import AlgebraMatrix, op_norm
from .slicefn import (
    RIGHT,
    SliceFunction,
    add,
    classify,
    psi,
    star_mul,
)
from .spectrum import SSpectrum, hausdorff, s_spectrum

METHODS = ("contour", "sector", "rational", "hinf", "oracle")
DEFAULT_TOL = 1e-10
COND_FLAG = 1e8


@dataclass
class CalculusReport:
    result: AlgebraMatrix
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def rep(self):
        return self.result.rep


def _side(f: SliceFunction) -> str:
    return "right" if f.side == RIGHT else "left"


def _home(f: SliceFunction, T: AlgebraMatrix) -> SliceFunction:
    return f if f.algebra == T.algebra else f.to_algebra(T.algebra)


def _rel_change(a, b) -> float:
    return float(np.linalg.norm(a - b, 2) / max(1.0, np.linalg.norm(b, 2)))


# -- polynomial and rational evaluation ------------------------------------------------


def _real_poly_rep(c, R):
    """sum_l c_l R^l by Horner's rule."""
    N = R.shape[0]
    out = np.zeros_like(R, dtype=np.result_type(R, float))
    for a in np.asarray(c, dtype=float)[::-1]:
        out = out @ R + a * np.eye(N)
    return out


def poly_calculus(f: SliceFunction, T: AlgebraMatrix) -> AlgebraMatrix:
    """P(T) = sum_l T^l a_l for left, sum_l a_l T^l for right polynomials."""
    if f.poly is None:
        raise InputError(f"{f.name} is not a polynomial")
    f = _home(f, T)
    R = T.rep
    emb = T.emb
    N = R.shape[0]
    out = np.zeros_like(R)
    Tl = np.eye(N, dtype=R.dtype)
    for a in f.poly:
        S = emb.scalar(a)
        out = out + (S @ Tl if f.side == RIGHT else Tl @ S)
        Tl = Tl @ R
    return T.from_rep(out, T.algebra, check=False)


def _pole_check(Q, T: AlgebraMatrix, spec: SSpectrum, name: str):
    Q = np.trim_zeros(np.asarray(Q, dtype=float), "b")
    if len(Q) <= 1:
        return
    tol = 1e-8 * max(1.0, op_norm(T))
    for r in np.roots(Q[::-1]):
        if spec.contains(r.real, abs(r.imag), tol):
            raise PoleOnSpectrum(f"{name}: pole sphere ({r.real + 0.0:.6g}, {abs(r.imag):.6g}) meets the S-spectrum",
                                 witness=(float(r.real) + 0.0, float(abs(r.imag))))


def _solve_guarded(A, B, err=Singular, what="matrix"):
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= 1e-12 * s[0]:
        raise err(f"{what} is singular (sigma_min/sigma_max = {s[-1] / max(s[0], 1e-300):.3g})")
    return np.linalg.solve(A, B), float(s[0] / s[-1])


def rational_calculus(f: SliceFunction, T: AlgebraMatrix, spectrum: SSpectrum | None = None) -> CalculusReport:
    f = _home(f, T)
    if f.rational is None:
        if f.poly is not None:
            return CalculusReport(poly_calculus(f, T), "rational", {"kind": "polynomial"})
        raise InputError(f"{f.name} has no rational representation")
    if not f.is_intrinsic:
        raise InputError("the rational calculus needs an intrinsic function")
    spec = spectrum if spectrum is not None else s_spectrum(T)
    R = T.rep
    diag = {}
    if f.rational_power is not None:
        P0, Q0, k = f.rational_power
        try:
            _pole_check(Q0, T, spec, f.name)
        except PoleOnSpectrum as exc:
            raise RegularizerSingular(str(exc), witness=exc.witness) from None
        M, cnd = _solve_guarded(_real_poly_rep(Q0, R), _real_poly_rep(P0, R), PoleOnSpectrum, "denominator")
        X = np.linalg.matrix_power(M, int(k))
        diag.update(kind="power", base=(list(map(float, P0)), list(map(float, Q0))), k=int(k), cond_Q=cnd)
    else:
        P, Q = f.rational
        _pole_check(Q, T, spec, f.name)
        X, cnd = _solve_guarded(_real_poly_rep(Q, R), _real_poly_rep(P, R), PoleOnSpectrum, "denominator")
        diag.update(kind="quotient", cond_Q=cnd)
    return CalculusReport(T.from_rep(X, T.algebra, check=False), "rational", diag)


# -- eigen oracle ----------------------------------------------------------------------


def eigen_oracle(f: SliceFunction, T: AlgebraMatrix) -> CalculusReport:
    if not f.is_intrinsic:
        raise InputError("the eigen oracle applies to intrinsic functions only")
    R = T.rep
    lam, V = np.linalg.eig(R)
    c = float(np.linalg.cond(V))
    if not math.isfinite(c) or c > 1e8:
        raise DefectiveMatrix(f"eigenvector matrix has condition {c:.3g}")
    if not np.all(f.domain.contains_uv(lam.real, lam.imag)):
        raise OutOfDomain(f"{f.name}: spectrum leaves the domain")
    F = f.scalar_stem(lam)
    X = (V * F[None, :]) @ np.linalg.inv(V)
    if not np.iscomplexobj(R):
        X = X.real
    return CalculusReport(T.from_rep(X, T.algebra, check=False), "oracle", {"cond_V": c})


# -- bounded calculus on a circle ------------------------------------------------------


def bounded_calculus(f: SliceFunction, T: AlgebraMatrix, N: int = 256, radius: float | None = None,
                     unit=None, tol: float = DEFAULT_TOL, max_N: int = 1 << 16,
                     spectrum: SSpectrum | None = None) -> CalculusReport:
    f = _home(f, T)
    spec = spectrum if spectrum is not None else s_spectrum(T)
    rho = spec.radius
    B = f.domain.ball_radius
    if B <= rho * (1 + 1e-12):
        raise DomainTooSmall(f"{f.name}: ball of radius {B:.6g} does not contain the spectrum (radius {rho:.6g})")
    if radius is None:
        radius = min(2 * rho, 0.5 * (rho + B)) if rho > 0 else min(1.0, 0.5 * B)
    if radius <= rho or radius >= B:
        raise DomainTooSmall("circle radius must separate the spectrum from the domain boundary")
    side = _side(f)
    history = []
    prev = None
    n = N
    while True:
        C = ct.build_circle(unit, radius, n, algebra=T.algebra)
        X = ct.integrate_rep(C, T, f, side, spectrum=spec)
        if prev is not None:
            d = _rel_change(X, prev)
            history.append({"N": n, "change": d})
            if d <= tol:
                break
        prev = X
        n *= 2
        if n > max_N:
            raise ConvergenceError(f"circle quadrature did not settle by N={max_N}", witness=history)
    return CalculusReport(T.from_rep(X, T.algebra, check=False), "contour",
                          {"radius": radius, "N": n, "history": history, "spectral_radius": rho})


# -- sectorial calculus ---------------------------------------------------------------------


def omega_calculus(fn: SliceFunction, T: AlgebraMatrix, theta: float | None = None, mu: float | None = None,
                   unit=None, eps: float | None = None, R: float | None = None, tol: float = DEFAULT_TOL,
                   panels: int = ct.PANELS_PER_DECADE, max_panels: int = 96, check_psi: bool = True,
                   spectrum: SSpectrum | None = None) -> CalculusReport:
    fn = _home(fn, T)
    spec = spectrum if spectrum is not None else s_spectrum(T)
    omega = spec.omega
    mu = fn.sector if mu is None else min(mu, fn.sector)
    if omega >= mu:
        raise NotTypeOmega(f"spectrum angle {omega:.6g} is not below the sector {mu:.6g} of {fn.name}",
                           witness={"omega": omega, "mu": mu})
    cls = None
    if check_psi:
        cls = classify(fn, mu)
        if not cls.in_Psi:
            raise NotInPsiClass(f"{fn.name} does not decay at 0 and infinity on S_{mu:.4g}", witness=cls.witness)
    if theta is None:
        theta = 0.5 * (omega + mu)
    if not omega < theta < mu:
        raise NotTypeOmega(f"path angle {theta:.6g} must lie strictly between {omega:.6g} and {mu:.6g}")
    scale_ = op_norm(T) or 1.0
    eps = 1e-8 * scale_ if eps is None else eps
    R = 1e12 * scale_ if R is None else R
    side = _side(fn)
    history = []
    prev = None
    p = panels
    while True:
        C = ct.build_sector_path(unit, theta, eps, R, p, algebra=T.algebra)
        X = ct.integrate_rep(C, T, fn, side, spectrum=spec)
        if prev is not None:
            d = _rel_change(X, prev)
            history.append({"panels": p, "change": d})
            if d <= tol:
                break
        prev = X
        p *= 2
        if p > max_panels:
            raise ConvergenceError(f"sector quadrature did not settle by {max_panels} panels/decade", witness=history)
    diag = {"theta": theta, "mu": mu, "omega": omega, "eps": eps, "R": R, "panels": p,
            "nodes": len(C), "history": history}
    diag.update(ct.tail_bounds(C, T, fn))
    if cls is not None:
        diag["classification"] = cls.as_dict()
    return CalculusReport(T.from_rep(X, T.algebra, check=False), "sector", diag)


# -- H-infinity calculus -------------------------------------------------------------------


def regularizer_exponent(f: SliceFunction, mu: float) -> int:
    if f.growth is not None:
        k = f.growth.k
    else:
        cls = classify(f, mu)
        if not cls.in_F:
            raise NotInFClass(f"{f.name} has no polynomial growth bound on S_{mu:.4g}", witness=cls.witness)
        k = cls.k
    return max(1, int(math.ceil(k - 1e-9)))


def hinf_calculus(f: SliceFunction, T: AlgebraMatrix, k: int | None = None, theta: float | None = None,
                  tol: float = DEFAULT_TOL, spectrum: SSpectrum | None = None, unit=None) -> CalculusReport:
    f = _home(f, T)
    spec = spectrum if spectrum is not None else s_spectrum(T)
    tol_sp = 1e-8 * max(1.0, op_norm(T))
    if spec.contains(0.0, 0.0, tol_sp):
        raise RegularizerSingular("0 lies in the S-spectrum: T is not invertible", witness=(0.0, 0.0))
    if spec.contains(0.0, 1.0, tol_sp):
        raise RegularizerSingular("the sphere [i] meets the S-spectrum: psi(T) is singular", witness=(0.0, 1.0))
    mu = min(f.sector, math.pi / 2)
    if spec.omega >= mu:
        raise NotTypeOmega(f"spectrum angle {spec.omega:.6g} is not below {mu:.6g}", witness={"omega": spec.omega, "mu": mu})
    kmin = regularizer_exponent(f, mu)
    k = kmin if k is None else int(k)
    if k < kmin:
        raise NotInFClass(f"regularizer exponent {k} is below the growth exponent {kmin}")
    reg = psi(k + 1, T.algebra)
    pf = star_mul(reg, f)
    inner = omega_calculus(pf, T, theta=theta, mu=mu, tol=tol, spectrum=spec, unit=unit)
    outer = rational_calculus(reg, T, spectrum=spec)
    X, cnd = _solve_guarded(outer.rep, inner.rep, RegularizerSingular, "psi(T)")
    diag = {"k": k, "regularizer": reg.name, "cond_psi_T": cnd, "possibly_unbounded": bool(cnd > COND_FLAG),
            "sector": inner.diagnostics}
    return CalculusReport(T.from_rep(X, T.algebra, check=False), "hinf", diag)


# -- dispatch ----------------------------------------------------------------------------------


def applicable_methods(f: SliceFunction, T: AlgebraMatrix, spectrum: SSpectrum | None = None):
    spec = spectrum if spectrum is not None else s_spectrum(T)
    out = []
    if f.domain.ball_radius > spec.radius * (1 + 1e-12):
        out.append("contour")
    if spec.omega < f.sector:
        try:
            if classify(_home(f, T), f.sector).in_Psi:
                out.append("sector")
        except Exception:  # pragma: no cover - classification is best effort here
            pass
    if (f.rational is not None and f.is_intrinsic) or f.poly is not None:
        out.append("rational")
    if f.growth is not None and spec.omega < min(f.sector, math.pi / 2) and not spec.contains(0, 0, 1e-8) \
            and not spec.contains(0, 1, 1e-8):
        out.append("hinf")
    if f.is_intrinsic:
        out.append("oracle")
    return out


def apply(f: SliceFunction, T: AlgebraMatrix, method: str = "auto", **opts) -> CalculusReport:
    if method == "auto":
        meths = applicable_methods(f, T)
        for m in ("rational", "contour", "sector", "hinf", "oracle"):
            if m in meths:
                method = m
                break
        else:
            raise InputError(f"no calculus applies to {f.name}")
    if method == "contour":
        return bounded_calculus(f, T, **opts)
    if method == "sector":
        return omega_calculus(f, T, **opts)
    if method == "rational":
        return rational_calculus(f, T)
    if method == "hinf":
        return hinf_calculus(f, T, **opts)
    if method == "oracle":
        return eigen_oracle(f, T)
    raise InputError(f"unknown method {method!r}; choose from {', '.join(METHODS)} or all")


def apply_all(f: SliceFunction, T: AlgebraMatrix, methods=None):
    """Run every applicable method; returns (reports, skipped, max pairwise deviation)."""
    spec = s_spectrum(T)
    methods = methods or applicable_methods(f, T, spec)
    reports, skipped = {}, {}
    for m in methods:
        try:
            reports[m] = apply(f, T, m)
        except Exception as exc:  # noqa: BLE001 - recorded for the report
            skipped[m] = f"{type(exc).__name__}: {exc}"
    names = list(reports)
    dev = 0.0
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            dev = max(dev, op_norm(reports[names[a]].result - reports[names[b]].result))
    return reports, skipped, dev


# -- identity checks ----------------------------------------------------------------------------


def _psi_apply(fn, T, spec, **opts):
    """Sectorial calculus for Psi-class functions."""
    return omega_calculus(fn, T, spectrum=spec, **opts).result


def verify_product_rule(psi_fn: SliceFunction, phi_fn: SliceFunction, T: AlgebraMatrix, **opts) -> dict:
    if not psi_fn.is_intrinsic:
        raise InputError("the left factor must be intrinsic")
    spec = s_spectrum(T)
    prod = star_mul(psi_fn, phi_fn)
    A = _psi_apply(prod, T, spec, **opts)
    P = _psi_apply(psi_fn, T, spec, **opts)
    Q = _psi_apply(phi_fn, T, spec, **opts)
    res = op_norm(A - P @ Q)
    out = {"residual": res, "scale": max(1.0, op_norm(A))}
    if phi_fn.is_intrinsic:
        out["commutator"] = op_norm(P @ Q - Q @ P)
    return out


def verify_regularizer_independence(f: SliceFunction, T: AlgebraMatrix, k1: int, k2: int) -> dict:
    spec = s_spectrum(T)
    A = hinf_calculus(f, T, k=k1, spectrum=spec).result
    B = hinf_calculus(f, T, k=k2, spectrum=spec).result
    d = op_norm(A - B)
    out = {"residual": d, "relative": d / max(op_norm(A), 1e-300)}
    if f.is_intrinsic and (f.rational is not None or f.poly is not None):
        out["vs_rational"] = op_norm(A - rational_calculus(f, T, spec).result)
    return out


def verify_sum_product_subset(f: SliceFunction, g: SliceFunction, T: AlgebraMatrix) -> dict:
    spec = s_spectrum(T)
    F = hinf_calculus(f, T, spectrum=spec).result
    G = hinf_calculus(g, T, spectrum=spec).result
    S = hinf_calculus(add(f, g), T, spectrum=spec).result
    P = hinf_calculus(star_mul(f, g), T, spectrum=spec).result
    return {
        "sum_residual": op_norm(F + G - S),
        "product_residual": op_norm(F @ G - P),
        "scale": max(1.0, op_norm(P), op_norm(S)),
    }


def mapped_spheres(fn: SliceFunction, spec: SSpectrum):
    pts = []
    for s in spec:
        val = complex(fn.scalar_stem(np.array([s.u + 1j * s.v]))[0])
        pts.append((val.real, abs(val.imag)))
    return np.array(pts).reshape(-1, 2)


def verify_spectral_mapping(fn: SliceFunction, T: AlgebraMatrix, method: str = "auto") -> dict:
    if not fn.is_intrinsic:
        raise InputError("spectral mapping is checked for intrinsic functions")
    spec = s_spectrum(T)
    image = mapped_spheres(fn, spec)
    rep = apply(fn, T, method)
    spec2 = s_spectrum(rep.result)
    d = hausdorff(image, spec2.points())
    return {"distance": d, "mapped": image.tolist(), "spectrum": spec2.points().tolist(), "method": rep.method}


def convergence_check(f_seq, f: SliceFunction, T: AlgebraMatrix, u=None, M: float | None = None,
                      tol: float = 1e-6, seed: int = 0, annulus=None, method: str = "auto") -> dict:
    """Errors ||f_j(T)u - f(T)u|| along a sequence, with the hypotheses checked on samples."""
    spec = s_spectrum(T)
    rng = np.random.default_rng(seed)
    if u is None:
        u = rng.standard_normal((T.m, T.algebra.dim))
        u /= np.linalg.norm(u)
    u = np.asarray(u, dtype=float)
    target = apply(f, T, method).result
    tu = target.apply(u)
    norms, errs = [], []
    for fj in f_seq:
        Fj = apply(fj, T, method).result
        norms.append(op_norm(Fj))
        errs.append(float(np.linalg.norm(Fj.apply(u) - tu)))
    Mval = max(norms) if M is None else M
    if M is not None and max(norms) > M * (1 + tol):
        j = int(np.argmax(norms))
        raise HypothesisFailed(f"||f_{j}(T)|| = {norms[j]:.6g} exceeds the bound {M:.6g}", witness=j)
    # locally uniform convergence on an annulus of the sector containing the spectrum
    mods = [s.modulus for s in spec if s.modulus > 0]
    lo, hi = annulus if annulus is not None else ((min(mods) / 2, 2 * max(mods)) if mods else (0.5, 2.0))
    mu = min(f.sector, *(g.sector for g in f_seq))
    r = np.linspace(lo, hi, 12)
    th = np.linspace(-0.9 * mu, 0.9 * mu, 13) if mu < math.pi else np.linspace(-0.9 * math.pi, 0.9 * math.pi, 13)
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    fz = f.on_plane(z)
    sups = [float(np.max(np.linalg.norm(g.on_plane(z) - fz, axis=-1))) for g in f_seq]
    tail = sups[len(sups) // 2:]
    if len(sups) > 1 and sups[-1] > sups[0]:
        k = int(np.argmax(np.linalg.norm(f_seq[-1].on_plane(z) - fz, axis=-1)))
        raise HypothesisFailed("f_j does not approach f uniformly on the annulus", witness=complex(z[k]))
    monotone = all(b <= a * (1 + 1e-9) + 1e-15 for a, b in zip(errs, errs[1:]))
    return {
        "errors": errs,
        "norms": norms,
        "M": Mval,
        "target_norm": op_norm(target),
        "bound_ok": op_norm(target) <= Mval * (1 + tol) if M is not None else True,
        "annulus": [float(lo), float(hi)],
        "sup_errors": sups,
        "sup_tail_max": max(tail) if tail else 0.0,
        "monotone": monotone,
        "final": errs[-1] if errs else 0.0,
        "converged": bool(errs and errs[-1] <= tol),
    }


def linear_combination(fs, coeffs):
    out = None
    for f, a in zip(fs, coeffs):
        term = f * float(a)
        out = term if out is None else add(out, term)
    return out

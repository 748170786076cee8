"""S-spectrum, S-resolvents and sector classification for algebra matrices.

Spheres are stored by their representative (u, v) with v >= 0.  The
spectrum is read off the eigenvalues of the numeric representation; the
pencil T^2 - 2 Re(s) T + |s|^2 I is kept as the verification oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import as_array
from .errors import EigenFailure, OnSpectrum, SphereCollision
from .qmatrix import AlgebraMatrix, op_norm

CLUSTER_RTOL = 1e-6
ON_SPECTRUM_RTOL = 1e-12
CHUNK = 256


@dataclass(frozen=True)
class Sphere:
    u: float
    v: float
    multiplicity: float = 1

    @property
    def arg(self) -> float:
        return math.atan2(self.v, self.u)

    @property
    def modulus(self) -> float:
        return math.hypot(self.u, self.v)

    def as_tuple(self):
        return (self.u, self.v)


@dataclass
class SSpectrum:
    spheres: list
    norm: float = 0.0

    def __iter__(self):
        return iter(self.spheres)

    def __len__(self):
        return len(self.spheres)

    def points(self) -> np.ndarray:
        return np.array([[s.u, s.v] for s in self.spheres]).reshape(-1, 2)

    @property
    def radius(self) -> float:
        return max((s.modulus for s in self.spheres), default=0.0)

    @property
    def omega(self) -> float:
        """Smallest sector angle containing every nonzero sphere."""
        tol = 1e-12 * max(1.0, self.norm)
        return max((s.arg for s in self.spheres if s.modulus > tol), default=0.0)

    def contains_zero(self, tol: float = 1e-10) -> bool:
        return any(s.modulus <= tol * max(1.0, self.norm) for s in self.spheres)

    def distance(self, u, v):
        """Distance from (u, |v|) to the nearest sphere representative."""
        pts = self.points()
        u = np.asarray(u, dtype=float)
        v = np.abs(np.asarray(v, dtype=float))
        if len(pts) == 0:
            return np.full(np.broadcast(u, v).shape, np.inf)
        d = np.hypot(u[..., None] - pts[:, 0], v[..., None] - pts[:, 1])
        return d.min(axis=-1)

    def contains(self, u, v, tol: float = 1e-9) -> bool:
        return bool(np.any(self.distance(u, v) <= tol))

    def summary(self) -> str:
        parts = [f"({_fmt_coord(s.u)}, {_fmt_coord(s.v)}) ×{_fmt_mult(s.multiplicity)}" for s in self.spheres]
        parts.append(f"omega={_fmt(self.omega)}")
        return "; ".join(parts)


def _fmt(x: float) -> str:
    return f"{float(x) + 0.0:.6g}"


def _fmt_coord(x: float) -> str:
    t = _fmt(x)
    return t if any(ch in t for ch in ".einf") else t + ".0"


def _fmt_mult(m) -> str:
    return str(int(round(m))) if abs(m - round(m)) < 1e-9 else f"{m:.3g}"


def hausdorff(a, b) -> float:
    """Hausdorff distance between two finite point sets in the (u, v) half-plane."""
    A = np.asarray(a, dtype=float).reshape(-1, 2)
    B = np.asarray(b, dtype=float).reshape(-1, 2)
    if len(A) == 0 and len(B) == 0:
        return 0.0
    if len(A) == 0 or len(B) == 0:
        return math.inf
    D = np.hypot(A[:, None, 0] - B[None, :, 0], A[:, None, 1] - B[None, :, 1])
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def cluster_points(pts, tol: float):
    """Greedy clustering of (u, v) points; returns list of (mean, count)."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    used = np.zeros(len(pts), dtype=bool)
    out = []
    for i in order:
        if used[i]:
            continue
        d = np.hypot(pts[:, 0] - pts[i, 0], pts[:, 1] - pts[i, 1])
        members = (~used) & (d <= tol)
        used |= members
        out.append((pts[members].mean(axis=0), int(members.sum())))
    out.sort(key=lambda t: (round(t[0][0], 9), round(t[0][1], 9)))
    return out


# -- pencil and resolvents ------------------------------------------------------------


def pencil(T: AlgebraMatrix, u: float, v: float) -> np.ndarray:
    R = T.rep
    N = R.shape[0]
    return R @ R - 2 * u * R + (u * u + v * v) * np.eye(N)


def pencil_sigma_min(T: AlgebraMatrix, u: float, v: float) -> float:
    P = pencil(T, u, v)
    return float(np.linalg.svd(P, compute_uv=False)[-1]) if P.size else 0.0


def s_spectrum(T: AlgebraMatrix, verify: bool = True) -> SSpectrum:
    R = T.rep
    nrm = op_norm(T)
    if R.size == 0:
        return SSpectrum([], 0.0)
    try:
        lam = np.linalg.eigvals(R)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigenFailure(str(exc)) from exc
    if not np.all(np.isfinite(lam)):
        raise EigenFailure("non-finite eigenvalues")
    pts = np.stack([lam.real, np.abs(lam.imag)], axis=1)
    rho = float(np.max(np.abs(lam)))
    tol = CLUSTER_RTOL * max(1.0, rho)
    factor = T.emb.multiplicity_factor
    spheres = []
    for (u, v), count in cluster_points(pts, tol):
        snap = 1e-12 * max(1.0, rho)
        v = 0.0 if v < snap else v
        u = 0.0 if abs(u) < snap else u
        spheres.append(Sphere(float(u), float(v), count / factor))
    if verify:
        bound = 1e-8 * max(1.0, nrm) ** 2
        for s in spheres:
            sm = pencil_sigma_min(T, s.u, s.v)
            if sm > max(bound, 10 * tol * max(1.0, nrm)):
                raise EigenFailure(f"sphere ({s.u:.6g}, {s.v:.6g}) fails the pencil check (sigma_min={sm:.3g})")
    return SSpectrum(spheres, nrm)


def _as_point(s, T: AlgebraMatrix):
    arr, _ = as_array(s, T.algebra)
    return np.asarray(arr, dtype=float)


def _pencil_batch(R, s):
    """Stack of pencils for points s of shape (K, dim)."""
    N = R.shape[0]
    u = s[:, 0]
    n2 = np.sum(s * s, axis=1)
    R2 = R @ R
    return R2[None] - 2 * u[:, None, None] * R[None] + n2[:, None, None] * np.eye(N)[None]


def _check_on_spectrum(P, s):
    sv = np.linalg.svd(P, compute_uv=False)
    bad = sv[..., -1] <= ON_SPECTRUM_RTOL * np.maximum(sv[..., 0], 1e-300)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise OnSpectrum("point lies on the S-spectrum", witness=np.asarray(s)[k].tolist())


def pseudo_resolvent_rep(T: AlgebraMatrix, s, check: bool = True) -> np.ndarray:
    """Representation(s) of Q_s(T); s may be a single point or a stack (K, dim)."""
    s = np.asarray(s, dtype=float)
    single = s.ndim == 1
    S = s[None] if single else s
    P = _pencil_batch(T.rep, S)
    if check:
        _check_on_spectrum(P, S)
    Q = np.linalg.inv(P)
    return Q[0] if single else Q


def resolvents_rep(T: AlgebraMatrix, s, side: str = "left", check: bool = True):
    """Representations of S_L^{-1}(s, T) or S_R^{-1}(s, T) for a stack of points."""
    s = np.asarray(s, dtype=float)
    single = s.ndim == 1
    S = s[None] if single else s
    R = T.rep
    alg = T.algebra
    out = []
    for a in range(0, len(S), CHUNK):
        Sk = S[a:a + CHUNK]
        Q = pseudo_resolvent_rep(T, Sk, check=check)
        sbar = T.emb.scalar(alg.conj(Sk))
        if side == "left":
            out.append(Q @ sbar - R[None] @ Q)
        else:
            out.append(-(R[None] - sbar) @ Q)
    X = np.concatenate(out, axis=0)
    return X[0] if single else X


def pseudo_resolvent(T: AlgebraMatrix, s) -> AlgebraMatrix:
    Q = pseudo_resolvent_rep(T, _as_point(s, T))
    return T.from_rep(Q, T.algebra, check=False)


def s_resolvent_left(T: AlgebraMatrix, s) -> AlgebraMatrix:
    X = resolvents_rep(T, _as_point(s, T), "left")
    return T.from_rep(X, T.algebra, check=False)


def s_resolvent_right(T: AlgebraMatrix, s) -> AlgebraMatrix:
    X = resolvents_rep(T, _as_point(s, T), "right")
    return T.from_rep(X, T.algebra, check=False)


def resolvent_equation_residual(T: AlgebraMatrix, s, p, v=None) -> float:
    """|| (LHS - RHS) v || for the S-resolvent equation.

    LHS = S_R(s) S_L(p); RHS = [(S_R(s) - S_L(p)) p - sbar (S_R(s) - S_L(p))] (p^2 - 2 s0 p + |s|^2)^{-1},
    with scalars acting by left multiplication.  Without ``v`` the operator
    norm of the difference is returned.
    """
    alg = T.algebra
    sa = _as_point(s, T)
    pa = _as_point(p, T)
    su, sv_ = float(sa[0]), float(np.linalg.norm(sa[1:]))
    pu, pv = float(pa[0]), float(np.linalg.norm(pa[1:]))
    if abs(su - pu) <= 1e-9 and abs(sv_ - pv) <= 1e-9:
        raise SphereCollision("s and p lie on the same sphere")
    SR = resolvents_rep(T, sa, "right")
    SL = resolvents_rep(T, pa, "left")
    emb = T.emb
    c = alg.mul(pa, pa) - 2 * sa[0] * pa + alg.scalar(np.sum(sa * sa))
    cinv = alg.inv(c)
    D = SR - SL
    lhs = SR @ SL
    rhs = (D @ emb.scalar(pa) - emb.scalar(alg.conj(sa)) @ D) @ emb.scalar(cinv)
    diff = lhs - rhs
    if v is None:
        return float(np.linalg.norm(diff, 2))
    from .qmatrix import as_vector

    x = emb.vector(as_vector(v, alg))
    return float(np.linalg.norm(diff @ x))


# -- sector classification ----------------------------------------------------------------


@dataclass
class SectorSample:
    theta: float
    C: float
    witness: tuple | None = None


@dataclass
class SectorProfile:
    omega: float
    samples: list = field(default_factory=list)
    spectrum: SSpectrum | None = None

    def C(self, theta: float) -> float:
        for smp in self.samples:
            if abs(smp.theta - theta) < 1e-12:
                return smp.C
        raise KeyError(theta)

    def is_type(self, mu: float) -> bool:
        return self.omega < mu


def resolvent_norm_grid(T: AlgebraMatrix, theta: float, nr: int = 60, na: int = 24, unit=None):
    """Sample |s| * max(||S_L^{-1}(s,T)||, ||S_R^{-1}(s,T)||) for s outside S_theta."""
    alg = T.algebra
    nrm = max(op_norm(T), 1e-300)
    if nrm <= 1e-300:
        nrm = 1.0
    r = np.logspace(math.log10(1e-3 * nrm), math.log10(1e3 * nrm), nr)
    phi = np.linspace(theta, 2 * math.pi - theta, na)
    z = (r[:, None] * np.exp(1j * phi[None, :])).ravel()
    pts = alg.in_plane(z, unit)
    vals = np.empty(len(z))
    for a in range(0, len(z), CHUNK):
        chunk = pts[a:a + CHUNK]
        L = resolvents_rep(T, chunk, "left", check=False)
        Rr = resolvents_rep(T, chunk, "right", check=False)
        nl = np.linalg.norm(L, 2, axis=(1, 2))
        nr_ = np.linalg.norm(Rr, 2, axis=(1, 2))
        vals[a:a + CHUNK] = np.maximum(nl, nr_) * np.abs(z[a:a + CHUNK])
    return z, vals


def classify_sector(T: AlgebraMatrix, thetas=None, n_samples: tuple = (60, 24), spectrum: SSpectrum | None = None) -> SectorProfile:
    spec = spectrum if spectrum is not None else s_spectrum(T)
    omega = spec.omega
    if thetas is None:
        thetas = [omega + (math.pi - omega) * f for f in (0.25, 0.5, 0.75)]
    thetas = sorted(float(t) for t in thetas)
    raw = []
    for th in thetas:
        if th <= omega + 1e-12 or th >= math.pi:
            raw.append(SectorSample(th, math.inf, None))
            continue
        z, vals = resolvent_norm_grid(T, th, *n_samples)
        if not np.all(np.isfinite(vals)):
            k = int(np.argmax(~np.isfinite(vals)))
            raw.append(SectorSample(th, math.inf, (z[k].real, z[k].imag)))
            continue
        k = int(np.argmax(vals))
        raw.append(SectorSample(th, float(vals[k]), (float(z[k].real), float(z[k].imag))))
    # sup over a larger set can only grow: enforce monotonicity in theta
    running = 0.0
    for smp in reversed(raw):
        if smp.C < running:
            smp.C = running
        running = smp.C
    return SectorProfile(omega, raw, spec)

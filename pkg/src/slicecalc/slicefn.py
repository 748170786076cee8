"""Slice hyperholomorphic functions stored through their stems.

A left slice function on H or R_n is determined by its restriction to the
reference plane C_{e1}, where it reads f(z) = sum_A F_A(z) i_A with complex
holomorphic F_A and A ranging over subsets of {2..n} (for H the two stems F,
G with f = F + G e2).  Right functions read sum_A i_A F_A(z).  Values off the
reference plane come from the representation formula.

Stem callables take a complex ndarray and return an array with one extra
trailing axis of length ``algebra.nstem``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algebra import H, Algebra, as_array, decompose, wrap
from .errors import (
    ConditionViolated,
    InputError,
    OnSpectrumSphere,
    OutOfDomain,
    SideMismatch,
    UnknownFunction,
    ZeroDivisor,
)

LEFT, RIGHT, INTRINSIC = "left", "right", "intrinsic"
SIDES = (LEFT, RIGHT, INTRINSIC)
POLE_TOL = 1e-10


# -- domains and growth metadata -------------------------------------------------


@dataclass(frozen=True)
class SliceDomain:
    """Axially symmetric set {u + iv : r0 < |u+iv| < r1, |arg| < mu} minus pole spheres.

    ``mu=None`` means no angular restriction; with ``r0 == 0`` and no
    angular restriction the origin belongs to the domain.
    """

    mu: float | None = None
    r0: float = 0.0
    r1: float = math.inf
    poles: tuple = ()

    @classmethod
    def Ball(cls, r):
        return cls(None, 0.0, float(r))

    @classmethod
    def Annulus(cls, r0, r1):
        return cls(None, float(r0), float(r1))

    @classmethod
    def Sector(cls, mu):
        return cls(float(mu), 0.0, math.inf)

    @classmethod
    def SectorAnnulus(cls, mu, r0, r1):
        return cls(float(mu), float(r0), float(r1))

    @classmethod
    def Entire(cls):
        return cls()

    @property
    def kind(self) -> str:
        if self.mu is None:
            if self.r0 > 0:
                return "annulus"
            return "entire" if math.isinf(self.r1) else "ball"
        if self.r0 > 0 or not math.isinf(self.r1):
            return "sector_annulus"
        return "sector"

    def with_poles(self, poles):
        merged = list(self.poles)
        for p in poles:
            p = (float(p[0]), abs(float(p[1])))
            if not any(abs(p[0] - q[0]) + abs(p[1] - q[1]) < 1e-12 for q in merged):
                merged.append(p)
        return replace(self, poles=tuple(merged))

    def intersect(self, other: "SliceDomain") -> "SliceDomain":
        if self.mu is None:
            mu = other.mu
        elif other.mu is None:
            mu = self.mu
        else:
            mu = min(self.mu, other.mu)
        d = SliceDomain(mu, max(self.r0, other.r0), min(self.r1, other.r1), self.poles)
        return d.with_poles(other.poles)

    def dilate(self, t: float) -> "SliceDomain":
        """Domain of s -> f(t s)."""
        return SliceDomain(self.mu, self.r0 / t, self.r1 / t, tuple((u / t, v / t) for u, v in self.poles))

    def contains_uv(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.abs(np.asarray(v, dtype=float))
        r = np.hypot(u, v)
        ok = r < self.r1
        if self.r0 > 0:
            ok &= r > self.r0
        if self.mu is not None:
            ok &= (r > 0) & (np.arctan2(v, u) < self.mu)
        for pu, pv in self.poles:
            ok &= np.hypot(u - pu, v - pv) > POLE_TOL * max(1.0, math.hypot(pu, pv))
        return ok

    @property
    def ball_radius(self) -> float:
        """Largest R with the open ball |s| < R inside the domain (0 if none)."""
        if self.mu is not None or self.r0 > 0:
            return 0.0
        r = self.r1
        for pu, pv in self.poles:
            r = min(r, math.hypot(pu, pv))
        return r

    @property
    def sector_opening(self) -> float:
        """Largest mu with the open sector S_mu^0 inside the domain (ignoring radii)."""
        mu = math.pi if self.mu is None else self.mu
        if self.r0 > 0 or not math.isinf(self.r1):
            return 0.0
        for pu, pv in self.poles:
            if math.hypot(pu, pv) > 0:
                mu = min(mu, math.atan2(pv, pu))
        return mu


@dataclass(frozen=True)
class DecayBound:
    """|f(s)| <= c |s|^alpha / (1 + |s|^(2 alpha)); c=None means fit per sector."""

    alpha: float
    c: float | None = None

    def holds(self, r, absf, c=None) -> bool:
        c = self.c if c is None else c
        bound = c * r ** self.alpha / (1 + r ** (2 * self.alpha))
        return bool(np.all(absf <= bound * (1 + 1e-9)))


@dataclass(frozen=True)
class GrowthBound:
    """|f(s)| <= C (|s|^k + |s|^-k)."""

    k: float
    C: float = 1.0

    def holds(self, r, absf) -> bool:
        return bool(np.all(absf <= self.C * (r ** self.k + r ** -self.k) * (1 + 1e-9)))


# -- the function type ------------------------------------------------------------


def _real_sym_check(F, pts):
    a = F(pts)
    b = F(np.conj(pts))
    return float(np.max(np.abs(b - np.conj(a))))


@dataclass(frozen=True, eq=False)
class SliceFunction:
    side: str
    algebra: Algebra
    stems: Callable
    domain: SliceDomain = field(default_factory=SliceDomain)
    decay: DecayBound | None = None
    growth: GrowthBound | None = None
    name: str = "f"
    sector_limit: float = math.pi
    degree: int = 0
    poly: np.ndarray | None = None
    rational: tuple | None = None
    rational_power: tuple | None = None

    def __post_init__(self):
        if self.side not in SIDES:
            raise InputError(f"side must be one of {SIDES}")

    def __repr__(self):
        return f"SliceFunction({self.name}, {self.side}, {self.algebra.name})"

    @property
    def is_intrinsic(self) -> bool:
        return self.side == INTRINSIC

    @property
    def sector(self) -> float:
        """Opening of the largest sector on which the function is usable."""
        return min(self.domain.sector_opening, self.sector_limit)

    def scalar_stem(self, z):
        return self.stems(np.asarray(z, dtype=complex))[..., 0]

    def __call__(self, q, check: bool = True):
        return eval_fn(self, q, check=check)

    def on_plane(self, z):
        """Values on C_{e1} as coefficient arrays."""
        st = self.stems(np.asarray(z, dtype=complex))
        if self.side == RIGHT:
            return self.algebra.assemble_right(st)
        return self.algebra.assemble_left(st)

    def abs_on_plane(self, z):
        st = self.stems(np.asarray(z, dtype=complex))
        return np.sqrt(np.sum(np.abs(st) ** 2, axis=-1))

    def to_algebra(self, algebra: Algebra) -> "SliceFunction":
        """Re-home an intrinsic function on another scalar algebra."""
        if algebra == self.algebra:
            return self
        if not self.is_intrinsic:
            raise SideMismatch("only intrinsic functions can change algebra")
        F = self.stems
        ns = algebra.nstem

        def stems(z, F=F):
            out = np.zeros(np.shape(z) + (ns,), dtype=complex)
            out[..., 0] = F(z)[..., 0]
            return out

        poly = None
        if self.poly is not None:
            poly = np.zeros((self.poly.shape[0], algebra.dim))
            poly[:, 0] = self.poly[:, 0]
        return replace(self, algebra=algebra, stems=stems, poly=poly)

    # -- arithmetic --------------------------------------------------------------

    def _combine_side(self, other):
        if self.algebra != other.algebra:
            raise SideMismatch(f"algebras differ: {self.algebra.name} vs {other.algebra.name}")
        if self.side == INTRINSIC:
            return other.side
        if other.side == INTRINSIC or other.side == self.side:
            return self.side
        raise SideMismatch(f"cannot combine {self.side} and {other.side} functions")

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1.0))

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, a):
        if isinstance(a, (int, float, np.floating, np.integer)):
            return scale(self, float(a))
        if isinstance(a, SliceFunction):
            return star_mul(self, a)
        return NotImplemented

    __rmul__ = __mul__

    def validate(self, points=None, tol: float = 1e-6):
        """Check holomorphy of the stems (and intrinsic symmetry) at sample points."""
        if points is None:
            points = default_sample_points(self.domain)
        res = cauchy_riemann_residual(self, points)
        if res > tol:
            raise InputError(f"{self.name}: stems fail the Cauchy-Riemann test (residual {res:.3g})")
        if self.is_intrinsic:
            sym = _real_sym_check(self.scalar_stem, points)
            scale_ = max(1.0, float(np.max(self.abs_on_plane(points))))
            if sym > 1e-10 * scale_:
                raise InputError(f"{self.name}: intrinsic stem is not real-symmetric ({sym:.3g})")
            rest = self.stems(points)[..., 1:]
            if rest.size and np.max(np.abs(rest)) > 1e-12 * scale_:
                raise InputError(f"{self.name}: intrinsic function has non-scalar stems")
        return True


def default_sample_points(domain: SliceDomain, count: int = 12):
    rng = np.random.default_rng(12345)
    mu = domain.sector_opening if domain.mu is not None else math.pi
    lo = max(domain.r0 * 1.1, 1e-2)
    hi = min(domain.r1 * 0.9, 1e2) if domain.mu is not None else min(domain.r1 * 0.9, 3.0)
    if domain.mu is None and domain.ball_radius > 0:
        hi = min(hi, 0.9 * domain.ball_radius)
    if hi <= lo:
        hi = lo * 1.5
    r = np.exp(rng.uniform(math.log(lo), math.log(hi), count))
    th = rng.uniform(-0.9 * mu, 0.9 * mu, count)
    z = r * np.exp(1j * th)
    ok = domain.contains_uv(z.real, z.imag)
    return z[ok]


def cauchy_riemann_residual(f: SliceFunction, points, h: float | None = None) -> float:
    """max |dF/dzbar| / local scale via central differences, over all stems."""
    z = np.asarray(points, dtype=complex)
    hh = 1e-5 * np.maximum(1.0, np.abs(z)) if h is None else np.full(z.shape, float(h))
    d = (2 * hh)[..., None]
    fx = (f.stems(z + hh) - f.stems(z - hh)) / d
    fy = (f.stems(z + 1j * hh) - f.stems(z - 1j * hh)) / d
    dzbar = 0.5 * (fx + 1j * fy)
    scale_ = np.maximum(1.0, np.abs(fx))
    return float(np.max(np.abs(dzbar) / scale_)) if dzbar.size else 0.0


# -- evaluation ---------------------------------------------------------------------


def representation_formula(alpha, beta, unit, ref, side, algebra: Algebra):
    """Value at u + v*unit from alpha = f(u + v*ref), beta = f(u - v*ref)."""
    half_sum = 0.5 * (alpha + beta)
    diff = beta - alpha
    if side == RIGHT:
        return half_sum + 0.5 * algebra.mul(algebra.mul(diff, ref), unit)
    return half_sum + 0.5 * algebra.mul(unit, algebra.mul(ref, diff))


def eval_fn(f: SliceFunction, q, check: bool = True):
    """f(q) for a scalar or an array of points (last axis = coefficients)."""
    arr, alg = as_array(q, f.algebra)
    if alg != f.algebra:
        raise InputError(f"point lives in {alg.name}, function in {f.algebra.name}")
    if check and not alg.is_point(arr):
        raise InputError("evaluation point must be a quaternion or paravector")
    u, v, unit = decompose(arr, alg)
    if check:
        ok = f.domain.contains_uv(u, v)
        if not np.all(ok):
            bad = np.argwhere(~np.atleast_1d(ok))[0]
            raise OutOfDomain(f"{f.name}: point outside the domain", witness=np.atleast_2d(arr)[tuple(bad)].tolist() if arr.ndim > 1 else arr.tolist())
    z = u + 1j * v
    a = f.on_plane(z)
    b = f.on_plane(np.conj(z))
    res = representation_formula(a, b, unit, alg.e1, f.side, alg)
    return wrap(res, alg, like=q)


# -- algebraic operations ------------------------------------------------------------


def _poly_stems(coeffs, side, algebra):
    c = np.asarray(coeffs, dtype=float)
    cs = algebra.split_right(c) if side == RIGHT else algebra.split_left(c)

    def stems(z, cs=cs):
        z = np.asarray(z, dtype=complex)
        out = npoly.polyval(z, cs)  # shape (nstem,) + z.shape
        return np.moveaxis(np.atleast_1d(out), 0, -1) if out.ndim else out

    return stems


def _trim(c):
    c = np.asarray(c, dtype=float)
    while c.shape[0] > 1 and not np.any(c[-1]):
        c = c[:-1]
    return c


def from_poly(coeffs, side: str, algebra: Algebra = H, name: str | None = None) -> SliceFunction:
    """Polynomial sum_l q^l a_l (left) or sum_l a_l q^l (right)."""
    c = np.asarray(coeffs, dtype=float)
    if c.ndim == 1:
        c = c[:, None] * algebra.one
        intrinsic_ok = True
    else:
        if c.shape[1] != algebra.dim:
            raise InputError(f"coefficients need {algebra.dim} components, got {c.shape[1]}")
        intrinsic_ok = not np.any(c[:, 1:])
    c = _trim(c)
    if intrinsic_ok and side != INTRINSIC:
        pass
    if side == INTRINSIC and not intrinsic_ok:
        raise InputError("intrinsic polynomials need real coefficients")
    deg = c.shape[0] - 1
    Cg = float(np.sum(np.linalg.norm(c, axis=1)))
    return SliceFunction(
        side=side,
        algebra=algebra,
        stems=_poly_stems(c, side, algebra),
        name=name or f"poly{deg}",
        degree=deg,
        poly=c,
        growth=GrowthBound(k=float(max(deg, 1)), C=max(Cg, 1e-300)),
    )


def _sym_domain(f, g):
    return f.domain.intersect(g.domain)


def star_mul(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    side = f._combine_side(g)
    alg = f.algebra
    prods = alg.stem_products()
    par = alg.stem_parity
    ns = alg.nstem
    Fs, Gs = f.stems, g.stems
    use_right = side == RIGHT

    def stems(z, Fs=Fs, Gs=Gs):
        z = np.asarray(z, dtype=complex)
        Fz, Gz = Fs(z), Gs(z)
        zc = np.conj(z)
        if use_right:
            Fbar = np.conj(Fs(zc))
        else:
            Gbar = np.conj(Gs(zc))
        out = np.zeros(z.shape + (ns,), dtype=complex)
        for a in range(ns):
            for b in range(ns):
                sgn, c = prods[a][b]
                if use_right:
                    fa = Fbar[..., a] if par[b] else Fz[..., a]
                    out[..., c] += sgn * fa * Gz[..., b]
                else:
                    gb = Gbar[..., b] if par[a] else Gz[..., b]
                    out[..., c] += sgn * Fz[..., a] * gb
        return out

    out_side = INTRINSIC if (f.is_intrinsic and g.is_intrinsic) else side
    poly = None
    if f.poly is not None and g.poly is not None:
        pa, pb = f.poly, g.poly
        conv = np.zeros((pa.shape[0] + pb.shape[0] - 1, alg.dim))
        for i in range(pa.shape[0]):
            conv[i:i + pb.shape[0]] += alg.mul(pa[i], pb)
        poly = conv
    rational = None
    if f.rational is not None and g.rational is not None:
        rational = (npoly.polymul(f.rational[0], g.rational[0]), npoly.polymul(f.rational[1], g.rational[1]))
    growth = None
    if f.growth is not None and g.growth is not None:
        growth = GrowthBound(f.growth.k + g.growth.k, 2 * f.growth.C * g.growth.C)
    return SliceFunction(
        side=out_side,
        algebra=alg,
        stems=stems,
        domain=_sym_domain(f, g),
        name=f"({f.name}*{g.name})",
        sector_limit=min(f.sector_limit, g.sector_limit),
        degree=f.degree + g.degree,
        poly=poly,
        rational=rational,
        growth=growth,
    )


def add(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    side = f._combine_side(g)
    if f.is_intrinsic and g.is_intrinsic:
        side = INTRINSIC
    Fs, Gs = f.stems, g.stems
    alg = f.algebra
    # a right and a left representation of an intrinsic function coincide, so
    # stems may be added directly once the side is fixed
    poly = None
    if f.poly is not None and g.poly is not None:
        n = max(f.poly.shape[0], g.poly.shape[0])
        poly = np.zeros((n, alg.dim))
        poly[: f.poly.shape[0]] += f.poly
        poly[: g.poly.shape[0]] += g.poly
    rational = None
    if f.rational is not None and g.rational is not None:
        P = npoly.polyadd(npoly.polymul(f.rational[0], g.rational[1]), npoly.polymul(g.rational[0], f.rational[1]))
        rational = (P, npoly.polymul(f.rational[1], g.rational[1]))
    growth = None
    if f.growth is not None and g.growth is not None:
        k = max(f.growth.k, g.growth.k)
        growth = GrowthBound(k, 2 * (f.growth.C + g.growth.C))
    return SliceFunction(
        side=side,
        algebra=alg,
        stems=lambda z: Fs(z) + Gs(z),
        domain=_sym_domain(f, g),
        name=f"({f.name}+{g.name})",
        sector_limit=min(f.sector_limit, g.sector_limit),
        degree=max(f.degree, g.degree),
        poly=poly,
        rational=rational,
        growth=growth,
    )


def scale(f: SliceFunction, a: float) -> SliceFunction:
    Fs = f.stems
    decay = None if f.decay is None or f.decay.c is None else DecayBound(f.decay.alpha, abs(a) * f.decay.c)
    if f.decay is not None and f.decay.c is None:
        decay = f.decay
    return replace(
        f,
        stems=lambda z: a * Fs(z),
        name=f"{a:g}*{f.name}",
        poly=None if f.poly is None else a * f.poly,
        rational=None if f.rational is None else (a * np.asarray(f.rational[0]), f.rational[1]),
        rational_power=None,
        decay=decay,
        growth=None if f.growth is None else GrowthBound(f.growth.k, max(abs(a), 1e-300) * f.growth.C),
    )


def dilate(f: SliceFunction, t: float) -> SliceFunction:
    """s -> f(t s) for real t > 0."""
    if t <= 0:
        raise InputError("dilation factor must be positive")
    Fs = f.stems
    poly = None
    if f.poly is not None:
        poly = f.poly * (t ** np.arange(f.poly.shape[0]))[:, None]
    rational = None
    if f.rational is not None:
        P, Q = f.rational
        rational = (np.asarray(P) * t ** np.arange(len(P)), np.asarray(Q) * t ** np.arange(len(Q)))
    return replace(
        f,
        stems=lambda z: Fs(t * np.asarray(z, dtype=complex)),
        domain=f.domain.dilate(t),
        name=f"{f.name}(t*s)",
        poly=poly,
        rational=rational,
        rational_power=None,
    )


def conjugate(f: SliceFunction) -> SliceFunction:
    alg = f.algebra
    mod4 = np.array([bin(int(m)).count("1") % 4 for m in alg.stem_masks])
    Fs = f.stems

    def stems(z):
        z = np.asarray(z, dtype=complex)
        a = Fs(z)
        b = np.conj(Fs(np.conj(z)))
        out = np.empty_like(a)
        for j, r in enumerate(mod4):
            out[..., j] = (b[..., j], -a[..., j], -b[..., j], a[..., j])[r]
        return out

    poly = None
    if f.poly is not None:
        poly = alg.conj(f.poly)
    return replace(f, stems=stems, name=f"{f.name}^c", poly=poly, rational_power=None)


def star_square_conj(f: SliceFunction) -> SliceFunction:
    """f * f^c with all stems kept."""
    return star_mul(f, conjugate(f))


def symmetrize(f: SliceFunction) -> SliceFunction:
    """f^s: scalar stem of f * f^c, as an intrinsic function."""
    g = star_square_conj(f)
    Gs = g.stems
    ns = f.algebra.nstem

    def stems(z):
        full = Gs(np.asarray(z, dtype=complex))
        out = np.zeros_like(full)
        out[..., 0] = full[..., 0]
        return out

    poly = None
    if g.poly is not None:
        poly = np.zeros_like(g.poly)
        poly[:, 0] = g.poly[:, 0]
    return SliceFunction(
        side=INTRINSIC,
        algebra=f.algebra,
        stems=stems,
        domain=f.domain,
        name=f"{f.name}^s",
        sector_limit=f.sector_limit,
        degree=2 * f.degree,
        poly=poly,
        growth=None if f.growth is None else GrowthBound(2 * f.growth.k, 2 * f.growth.C ** 2),
    ) if ns else g


def check_condition_52(f: SliceFunction, points=None, tol: float = 1e-10):
    """Non-scalar stems of f * f^c must vanish (values stay in each slice)."""
    if f.is_intrinsic:
        return True
    if points is None:
        points = default_sample_points(f.domain, 24)
    full = star_square_conj(f).stems(np.asarray(points, dtype=complex))
    sc = max(1.0, float(np.max(np.abs(full[..., 0])))) if full.size else 1.0
    dev = float(np.max(np.abs(full[..., 1:]))) if full.shape[-1] > 1 and full.size else 0.0
    if dev > tol * sc:
        k = int(np.argmax(np.max(np.abs(full[..., 1:]), axis=-1)))
        raise ConditionViolated(
            f"{f.name}: f*f^c leaves the slice (deviation {dev:.3g})", witness=complex(points[k])
        )
    return True


def star_inv(f: SliceFunction) -> SliceFunction:
    alg = f.algebra
    if not alg.is_quaternion:
        check_condition_52(f)
    fs = symmetrize(f)
    fc = conjugate(f)
    Ss, Cs = fs.stems, fc.stems
    deg = max(f.degree, 0)

    def stems(z):
        z = np.asarray(z, dtype=complex)
        den = Ss(z)[..., 0]
        thresh = 1e-12 * (1 + np.abs(z) ** (2 * deg))
        small = np.abs(den) < thresh
        if np.any(small):
            zz = np.atleast_1d(z)[np.atleast_1d(small)][0]
            raise ZeroDivisor(f"{f.name}^s vanishes at the sphere of {zz}", witness=complex(zz))
        return Cs(z) / den[..., None]

    poles = []
    if fs.poly is not None:
        c = _trim(fs.poly[:, :1])[:, 0]
        if c.shape[0] > 1:
            for r in np.roots(c[::-1]):
                poles.append((r.real, abs(r.imag)))
    domain = f.domain.with_poles(poles)
    rational = None
    if f.is_intrinsic and f.rational is not None:
        rational = (f.rational[1], f.rational[0])
    elif f.is_intrinsic and f.poly is not None:
        rational = (np.array([1.0]), f.poly[:, 0].copy())
    return SliceFunction(
        side=f.side,
        algebra=alg,
        stems=stems,
        domain=domain,
        name=f"{f.name}^-*",
        sector_limit=f.sector_limit,
        degree=deg,
        rational=rational,
    )


# -- Cauchy kernels ----------------------------------------------------------------------


def _kernel_parts(s, q, algebra):
    sa, alg = as_array(s, algebra)
    qa, _ = as_array(q, alg)
    re_s = sa[..., 0]
    ns2 = alg.norm2(sa)
    q2 = alg.mul(qa, qa)
    delta = q2 - 2 * re_s[..., None] * qa + alg.scalar(ns2)
    scale_ = np.maximum(1.0, alg.norm2(qa) + ns2)
    if np.any(alg.norm(delta) <= 1e-14 * scale_):
        raise OnSpectrumSphere("q lies on the sphere of s", witness=np.asarray(qa).tolist())
    return sa, qa, alg, delta


def cauchy_kernel_left(s, q, algebra: Algebra | None = None):
    """S_L^{-1}(s, q) = -(q^2 - 2Re(s) q + |s|^2)^{-1} (q - conj s)."""
    sa, qa, alg, delta = _kernel_parts(s, q, algebra)
    val = -alg.mul(alg.inv(delta), qa - alg.conj(sa))
    return wrap(val, alg)


def cauchy_kernel_right(s, q, algebra: Algebra | None = None):
    """S_R^{-1}(s, q) = -(q - conj s)(q^2 - 2Re(s) q + |s|^2)^{-1}."""
    sa, qa, alg, delta = _kernel_parts(s, q, algebra)
    val = -alg.mul(qa - alg.conj(sa), alg.inv(delta))
    return wrap(val, alg)


# -- catalog ----------------------------------------------------------------------------


def _intrinsic(F, algebra, **kw) -> SliceFunction:
    ns = algebra.nstem

    def stems(z, F=F):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (ns,), dtype=complex)
        out[..., 0] = F(z)
        return out

    return SliceFunction(side=INTRINSIC, algebra=algebra, stems=stems, **kw)


def _real_poly_roots(Q):
    Q = np.trim_zeros(np.asarray(Q, dtype=float), "b")
    if len(Q) <= 1:
        return []
    return [(r.real, abs(r.imag)) for r in np.roots(Q[::-1])]


def rational(P, Q, algebra: Algebra = H, name: str | None = None) -> SliceFunction:
    """Intrinsic P(s)/Q(s) with real ascending coefficients."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if Q.size == 0 or not np.any(Q):
        raise InputError("denominator must be a nonzero polynomial")
    P = np.trim_zeros(P, "b") if np.any(P) else np.array([0.0])
    Q = np.trim_zeros(Q, "b")
    poles = _real_poly_roots(Q)
    dP, dQ = len(P) - 1, len(Q) - 1
    return _intrinsic(
        lambda z: npoly.polyval(z, P) / npoly.polyval(z, Q),
        algebra,
        domain=SliceDomain().with_poles(poles),
        name=name or f"rational({P.tolist()},{Q.tolist()})",
        degree=max(dP, dQ),
        rational=(P, Q),
        growth=GrowthBound(float(max(dP - dQ, 1)), 1.0) if dP >= dQ else None,
    )


def psi(k: int = 1, algebra: Algebra = H) -> SliceFunction:
    k = int(k)
    if k < 1:
        raise InputError("psi(k) needs k >= 1")
    P0 = np.array([0.0, 1.0])
    Q0 = np.array([1.0, 0.0, 1.0])
    P = npoly.polypow(P0, k)
    Q = npoly.polypow(Q0, k)
    f = _intrinsic(
        lambda z: (z / (1 + z * z)) ** k,
        algebra,
        domain=SliceDomain().with_poles([(0.0, 1.0)]),
        name=f"psi({k})",
        degree=2 * k,
        decay=DecayBound(alpha=float(k)),
        rational=(P, Q),
        rational_power=(P0, Q0, k),
    )
    return f


def pow_fn(m: int, algebra: Algebra = H) -> SliceFunction:
    m = int(m)
    if m >= 0:
        c = np.zeros(m + 1)
        c[m] = 1.0
        f = from_poly(c, INTRINSIC, algebra, name=f"pow({m})")
        return replace(f, growth=GrowthBound(float(max(m, 1)), 1.0))
    return _intrinsic(
        lambda z: z ** m,
        algebra,
        domain=SliceDomain().with_poles([(0.0, 0.0)]),
        name=f"pow({m})",
        degree=-m,
        rational=(np.array([1.0]), np.eye(1 - m)[-m]),
        growth=GrowthBound(float(-m), 1.0),
    )


def frac_pow(alpha: float, algebra: Algebra = H) -> SliceFunction:
    alpha = float(alpha)
    if alpha <= 0:
        raise InputError("frac_pow needs a positive exponent")
    return _intrinsic(
        lambda z: np.exp(alpha * np.log(np.where(z == 0, 1e-300, z))),
        algebra,
        domain=SliceDomain.Sector(math.pi),
        name=f"frac_pow({alpha:g})",
        growth=GrowthBound(alpha, 1.0),
    )


def exp_neg(algebra: Algebra = H) -> SliceFunction:
    return _intrinsic(
        lambda z: np.exp(-z),
        algebra,
        name="exp_neg",
        sector_limit=math.pi / 2,
        growth=GrowthBound(1.0, 1.0),
    )


def const(c=1.0, algebra: Algebra = H, side: str = LEFT) -> SliceFunction:
    arr, alg = as_array(c, algebra)
    if not np.any(arr[1:]):
        f = from_poly([arr[0]], INTRINSIC, alg, name=f"const({arr[0]:g})")
    else:
        f = from_poly(arr[None, :], side, alg, name="const")
    return replace(f, growth=GrowthBound(1.0, max(float(np.linalg.norm(arr)), 1e-300)))


CATALOG = ("psi", "pow", "frac_pow", "exp_neg", "rational", "poly", "poly_left", "poly_right", "const")


def catalog(name: str, *params, algebra: Algebra = H, side: str | None = None) -> SliceFunction:
    if name == "psi":
        return psi(*(params or (1,)), algebra=algebra)
    if name == "pow":
        return pow_fn(*params, algebra=algebra)
    if name == "frac_pow":
        return frac_pow(*params, algebra=algebra)
    if name == "exp_neg":
        if params:
            raise InputError("exp_neg takes no parameters")
        return exp_neg(algebra)
    if name == "rational":
        if len(params) != 2:
            raise InputError("rational needs numerator and denominator coefficient lists")
        return rational(params[0], params[1], algebra)
    if name in ("poly", "poly_left", "poly_right"):
        if len(params) != 1:
            raise InputError(f"{name} needs one coefficient list")
        c = np.asarray(params[0], dtype=float)
        s = {"poly_left": LEFT, "poly_right": RIGHT}.get(name, side)
        if c.ndim == 1:
            f = from_poly(c, INTRINSIC, algebra, name=f"poly({c.tolist()})")
            return f
        if c.ndim == 2 and c.shape[1] == algebra.dim:
            s = s or LEFT
            return from_poly(c, s, algebra, name=f"{name}")
        if c.ndim == 2 and c.shape[1] == algebra.n + 1 and not algebra.is_quaternion:
            full = np.zeros((c.shape[0], algebra.dim))
            full[:, list(algebra.point_indices)] = c
            return from_poly(full, s or LEFT, algebra, name=name)
        raise InputError(f"{name}: coefficient rows must have {algebra.dim} components")
    if name == "const":
        return const(*(params or (1.0,)), algebra=algebra, side=side or LEFT)
    raise UnknownFunction(f"unknown function {name!r}; known: {', '.join(CATALOG)}")


# -- growth classification ----------------------------------------------------------------


@dataclass
class Classification:
    mu: float
    in_Psi: bool
    alpha: float
    c: float
    in_SHinf: bool
    sup: float
    in_F: bool
    k: float
    C: float
    witness: complex | None = None

    def as_dict(self):
        return {
            "mu": self.mu,
            "in_Psi": self.in_Psi,
            "alpha": self.alpha,
            "c": self.c,
            "in_SHinf": self.in_SHinf,
            "sup": self.sup,
            "in_F": self.in_F,
            "k": self.k,
            "C": self.C,
        }


def classification_grid(mu: float, nr: int = 40, na: int = 33, rmin: float = 1e-4, rmax: float = 1e4):
    r = np.logspace(math.log10(rmin), math.log10(rmax), nr)
    th = np.linspace(-mu, mu, na + 2)[1:-1]
    return r, th


def classify(f: SliceFunction, mu: float, nr: int = 40, na: int = 33) -> Classification:
    """Empirical membership in Psi, SH^infty and F on the sector S_mu^0 (slice C_{e1})."""
    r, th = classification_grid(mu, nr, na)
    z = r[:, None] * np.exp(1j * th[None, :])
    ok = f.domain.contains_uv(z.real, z.imag)
    with np.errstate(all="ignore"):
        vals = np.full(z.shape, np.inf)
        try:
            vals[ok] = f.abs_on_plane(z[ok])
        except ZeroDivisor:
            vals[ok] = np.inf
        vals[~np.isfinite(vals)] = np.inf
    finite = bool(np.all(np.isfinite(vals)))
    logv = np.log(np.clip(vals, 1e-300, None))
    lr = np.log(r)
    slope0 = (logv[1] - logv[0]) / (lr[1] - lr[0])
    slope_inf = (logv[-1] - logv[-2]) / (lr[-1] - lr[-2])
    # underflow at an end means faster-than-polynomial decay there
    tiny = 1e-250
    slope0 = np.where(vals[0] < tiny, np.inf, slope0)
    slope_inf = np.where(vals[-1] < tiny, -np.inf, slope_inf)
    R = r[:, None] * np.ones_like(vals)
    witness = None

    # decay class
    alpha = float(min(np.min(slope0), np.min(-slope_inf))) if finite else -math.inf
    if f.decay is not None and finite:
        alpha = min(alpha, f.decay.alpha)
    in_psi = finite and alpha >= 0.125
    c = math.inf
    if in_psi:
        ratio = vals * (1 + R ** (2 * alpha)) / R ** alpha
        c = float(np.max(ratio))
        in_psi = math.isfinite(c)
    if not in_psi and finite:
        idx = np.unravel_index(int(np.argmax(vals * (1 + R)) if alpha < 0.125 else 0), vals.shape)
        witness = complex(z[idx])
    elif not finite:
        idx = np.unravel_index(int(np.argmax(~np.isfinite(vals))), vals.shape)
        witness = complex(z[idx])

    # bounded class
    sup = float(np.max(vals)) if finite else math.inf
    bounded = finite and np.all(slope_inf <= 1e-3) and np.all(slope0 >= -1e-3) and sup < 1e12

    # polynomial growth class
    k = float(max(np.max(slope_inf), np.max(-slope0), 0.0)) if finite else math.inf
    if math.isfinite(k) and abs(k - round(k)) < 1e-6:
        k = float(round(k))
    k = max(k, 1e-3) if math.isfinite(k) else k
    C = math.inf
    in_f = finite
    if finite:
        C = float(np.max(vals / (R ** k + R ** -k)))
        in_f = math.isfinite(C)
    return Classification(
        mu=mu,
        in_Psi=bool(in_psi),
        alpha=float(alpha),
        c=c,
        in_SHinf=bool(bounded),
        sup=sup,
        in_F=bool(in_f),
        k=k,
        C=C,
        witness=witness,
    )


def sup_norm(f: SliceFunction, mu: float) -> float:
    """Sampled sup of |f| over S_mu^0 on the reference slice."""
    return classify(f, mu).sup

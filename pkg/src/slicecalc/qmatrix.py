"""Matrices over the quaternions (and over R_n) acting right-linearly on columns.

Numerics go through a faithful matrix representation:

* quaternions use the complex adjoint over the plane C_{e1} with e2 as the
  perpendicular unit, A = A1 + A2 e2  ->  [[A1, A2], [-conj A2, conj A1]];
* Clifford-valued matrices use the real left-regular representation
  sum_A kron(L_{e_A}, A_A) acting on vectors flattened as index B*m + k.

Scalars act on the module by left multiplication, so the scalar operator
"c I" is represented by ``Embedding.scalar(c)``.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .algebra import H, Algebra, Quaternion, as_array, clifford, wrap
from .errors import DimensionMismatch, InputError, Singular

SINGULAR_RTOL = 1e-12
PATTERN_RTOL = 1e-8


class Embedding:
    """Representation of m x m algebra-valued matrices as N x N numeric matrices."""

    def __init__(self, algebra: Algebra, m: int):
        self.algebra = algebra
        self.m = m
        self.dim = algebra.dim
        if algebra.is_quaternion:
            self.N = 2 * m
            self.dtype = complex
        else:
            self.N = algebra.dim * m
            self.dtype = float
        self._eye = np.eye(m)

    def __eq__(self, other):
        return isinstance(other, Embedding) and (self.algebra, self.m) == (other.algebra, other.m)

    # -- matrices -----------------------------------------------------------

    def matrix(self, entries):
        E = np.asarray(entries, dtype=float)
        m = self.m
        if self.algebra.is_quaternion:
            A1 = E[..., 0] + 1j * E[..., 1]
            A2 = E[..., 2] + 1j * E[..., 3]
            return np.block([[A1, A2], [-A2.conj(), A1.conj()]])
        R = np.einsum("abc,ika->cibk", self.algebra._table, E)
        return R.reshape(self.dim * m, self.dim * m)

    def unmatrix(self, R, check: bool = True):
        R = np.asarray(R)
        m = self.m
        if R.shape != (self.N, self.N):
            raise DimensionMismatch(f"expected {self.N}x{self.N} representation, got {R.shape}")
        scale = max(1.0, float(np.max(np.abs(R)))) if R.size else 1.0
        if self.algebra.is_quaternion:
            TL, TR = R[:m, :m], R[:m, m:]
            BL, BR = R[m:, :m], R[m:, m:]
            if check:
                dev = max(np.max(np.abs(TL - BR.conj())), np.max(np.abs(TR + BL.conj())))
                if dev > PATTERN_RTOL * scale:
                    raise InputError(f"matrix lacks the symplectic pattern (deviation {dev:.3g})")
            A1 = (TL + BR.conj()) / 2
            A2 = (TR - BL.conj()) / 2
            return np.stack([A1.real, A1.imag, A2.real, A2.imag], axis=-1)
        if np.iscomplexobj(R):
            if check and np.max(np.abs(R.imag)) > PATTERN_RTOL * scale:
                raise InputError("real representation expected")
            R = R.real
        Rb = R.reshape(self.dim, m, self.dim, m)
        tab = self.algebra._table
        E = np.zeros((m, m, self.dim))
        for a in range(self.dim):
            acc = np.zeros((m, m))
            for b in range(self.dim):
                acc += tab[a, b, a ^ b] * Rb[a ^ b, :, b, :]
            E[:, :, a] = acc / self.dim
        if check:
            dev = np.max(np.abs(self.matrix(E) - R))
            if dev > PATTERN_RTOL * scale:
                raise InputError(f"matrix is not a left-module representation (deviation {dev:.3g})")
        return E

    def scalar(self, c):
        """Representation of c*I for coefficient arrays c of shape (..., dim)."""
        c = np.asarray(c, dtype=float)
        eye = self._eye
        if self.algebra.is_quaternion:
            c1 = c[..., 0] + 1j * c[..., 1]
            c2 = c[..., 2] + 1j * c[..., 3]
            top = np.concatenate([c1[..., None, None] * eye, c2[..., None, None] * eye], axis=-1)
            bot = np.concatenate([-c2.conj()[..., None, None] * eye, c1.conj()[..., None, None] * eye], axis=-1)
            return np.concatenate([top, bot], axis=-2)
        L = self.algebra.left_matrix(c)
        out = L[..., :, None, :, None] * eye[:, None, :]
        return out.reshape(c.shape[:-1] + (self.N, self.N))

    @cached_property
    def basis_scalars(self):
        """Stack of representations of the basis units e_C, shape (dim, N, N)."""
        return self.scalar(np.eye(self.dim))

    # -- vectors ------------------------------------------------------------

    def vector(self, v):
        v = np.asarray(v, dtype=float)
        if self.algebra.is_quaternion:
            v1 = v[..., 0] + 1j * v[..., 1]
            v2 = v[..., 2] + 1j * v[..., 3]
            return np.concatenate([v1, -v2.conj()], axis=-1)
        return np.swapaxes(v, -1, -2).reshape(v.shape[:-2] + (self.N,))

    def unvector(self, x):
        x = np.asarray(x)
        m = self.m
        if self.algebra.is_quaternion:
            v1 = x[..., :m]
            v2 = -x[..., m:].conj()
            return np.stack([v1.real, v1.imag, v2.real, v2.imag], axis=-1)
        return np.swapaxes(np.real(x).reshape(x.shape[:-1] + (self.dim, m)), -1, -2)

    @property
    def multiplicity_factor(self) -> float:
        """Eigenvalue count of the representation per unit of sphere multiplicity."""
        return self.N / self.m


def embedding(algebra: Algebra, m: int) -> Embedding:
    return _embedding_cache(algebra.n, algebra.imag, m)


_EMB = {}


def _embedding_cache(n, imag, m):
    key = (n, imag, m)
    if key not in _EMB:
        alg = H if (n == 2 and len(imag) == 3) else clifford(n)
        _EMB[key] = Embedding(alg, m)
    return _EMB[key]


class AlgebraMatrix:
    """Immutable m x m matrix with entries in a Clifford algebra (or H)."""

    def __init__(self, entries, algebra: Algebra = H):
        E = np.array(entries, dtype=float)
        if E.ndim == 2 and E.shape[0] == E.shape[1]:
            E = E[..., None] * algebra.one
        if E.ndim != 3 or E.shape[0] != E.shape[1] or E.shape[2] != algebra.dim:
            raise DimensionMismatch(f"entries must have shape (m, m, {algebra.dim}), got {E.shape}")
        E.setflags(write=False)
        self._entries = E
        self.algebra = algebra

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def m(self) -> int:
        return self._entries.shape[0]

    @property
    def shape(self):
        return (self.m, self.m)

    @property
    def emb(self) -> Embedding:
        return embedding(self.algebra, self.m)

    @cached_property
    def rep(self) -> np.ndarray:
        R = self.emb.matrix(self._entries)
        R.setflags(write=False)
        return R

    def __repr__(self):
        return f"{type(self).__name__}(m={self.m}, algebra={self.algebra.name})"

    # -- constructors -----------------------------------------------------------

    @classmethod
    def _make(cls, entries, algebra):
        if algebra.is_quaternion:
            return QMatrix(entries)
        return AlgebraMatrix(entries, algebra)

    @classmethod
    def from_rep(cls, R, algebra: Algebra = H, check: bool = True):
        m = R.shape[0] // (2 if algebra.is_quaternion else algebra.dim)
        return cls._make(embedding(algebra, m).unmatrix(R, check=check), algebra)

    @classmethod
    def identity(cls, m: int, algebra: Algebra = H):
        return cls._make(np.eye(m)[..., None] * algebra.one, algebra)

    @classmethod
    def zeros(cls, m: int, algebra: Algebra = H):
        return cls._make(np.zeros((m, m, algebra.dim)), algebra)

    @classmethod
    def diag(cls, values, algebra: Algebra | None = None):
        arrs = []
        alg = algebra
        for v in values:
            a, alg = as_array(v, alg)
            arrs.append(a)
        m = len(arrs)
        E = np.zeros((m, m, alg.dim))
        for k, a in enumerate(arrs):
            E[k, k] = a
        return cls._make(E, alg)

    @classmethod
    def scalar_identity(cls, c, m: int, algebra: Algebra | None = None):
        a, alg = as_array(c, algebra)
        return cls._make(np.eye(m)[..., None] * a, alg)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, AlgebraMatrix):
            raise TypeError("expected an algebra matrix")
        if other.algebra != self.algebra or other.m != self.m:
            raise DimensionMismatch(f"{self!r} vs {other!r}")

    def __matmul__(self, other):
        if isinstance(other, AlgebraMatrix):
            self._check(other)
            E = self.algebra.mul(self._entries[:, :, None, :], other._entries[None, :, :, :]).sum(axis=1)
            return self._make(E, self.algebra)
        v = np.asarray(other, dtype=float)
        return self.apply(v)

    def __add__(self, other):
        self._check(other)
        return self._make(self._entries + other._entries, self.algebra)

    def __sub__(self, other):
        self._check(other)
        return self._make(self._entries - other._entries, self.algebra)

    def __neg__(self):
        return self._make(-self._entries, self.algebra)

    def __mul__(self, r):
        if isinstance(r, (int, float, np.floating, np.integer)):
            return self._make(self._entries * float(r), self.algebra)
        return NotImplemented

    __rmul__ = __mul__

    def lmul(self, c):
        """(c I) A: every entry multiplied by c on the left."""
        a, _ = as_array(c, self.algebra)
        return self._make(self.algebra.mul(a, self._entries), self.algebra)

    def rmul(self, c):
        """A (c I)."""
        a, _ = as_array(c, self.algebra)
        return self._make(self.algebra.mul(self._entries, a), self.algebra)

    def adjoint(self):
        return self._make(np.swapaxes(self.algebra.conj(self._entries), 0, 1), self.algebra)

    def apply(self, v):
        v = as_vector(v, self.algebra)
        if v.shape[0] != self.m:
            raise DimensionMismatch(f"vector length {v.shape[0]} != {self.m}")
        return self.algebra.mul(self._entries, v[None, :, :]).sum(axis=1)

    def __getitem__(self, idx):
        i, k = idx
        return wrap(self._entries[i, k], self.algebra)

    def power(self, k: int):
        if k < 0:
            return qinv(self).power(-k)
        R = np.linalg.matrix_power(self.rep, k)
        return self.from_rep(R, self.algebra, check=False)

    # -- measurements ----------------------------------------------------------

    def norm(self) -> float:
        return op_norm(self)

    def max_abs_diff(self, other) -> float:
        self._check(other)
        return float(np.max(np.abs(self._entries - other._entries))) if self.m else 0.0

    def dist(self, other) -> float:
        """Operator-norm distance."""
        self._check(other)
        return op_norm(self - other)

    def allclose(self, other, tol: float = 1e-10) -> bool:
        return self.max_abs_diff(other) <= tol


class QMatrix(AlgebraMatrix):
    """m x m quaternion matrix; entries[i, k] = (w, x, y, z)."""

    def __init__(self, entries):
        super().__init__(entries, H)

    @classmethod
    def from_quaternions(cls, rows):
        return cls(np.array([[as_array(q, H)[0] for q in row] for row in rows], dtype=float))

    def to_quaternions(self):
        return [[Quaternion.from_array(self._entries[i, k]) for k in range(self.m)] for i in range(self.m)]


# -- free functions -------------------------------------------------------------


def as_vector(v, algebra: Algebra = H) -> np.ndarray:
    if isinstance(v, np.ndarray) and v.ndim == 2 and v.shape[1] == algebra.dim:
        return v.astype(float)
    rows = [as_array(x, algebra)[0] for x in v]
    return np.array(rows, dtype=float).reshape(len(rows), algebra.dim)


def embed(A: AlgebraMatrix) -> np.ndarray:
    return np.array(A.rep)


def unembed(R, algebra: Algebra = H) -> AlgebraMatrix:
    return AlgebraMatrix.from_rep(np.asarray(R), algebra)


def _guarded(R):
    s = np.linalg.svd(R, compute_uv=False)
    if s.size and (s[-1] <= SINGULAR_RTOL * s[0] or s[0] == 0):
        raise Singular(f"matrix is numerically singular (sigma_min/sigma_max = {s[-1] / max(s[0], 1e-300):.3g})")
    return s


def qinv(A: AlgebraMatrix) -> AlgebraMatrix:
    _guarded(A.rep)
    return A.from_rep(np.linalg.inv(A.rep), A.algebra, check=False)


def qsolve(A: AlgebraMatrix, b) -> np.ndarray:
    _guarded(A.rep)
    bv = as_vector(b, A.algebra)
    x = np.linalg.solve(A.rep, A.emb.vector(bv))
    return A.emb.unvector(x)


def solve_matrix(A: AlgebraMatrix, B: AlgebraMatrix) -> AlgebraMatrix:
    """A^{-1} B."""
    _guarded(A.rep)
    return A.from_rep(np.linalg.solve(A.rep, B.rep), A.algebra, check=False)


def op_norm(A) -> float:
    R = A.rep if isinstance(A, AlgebraMatrix) else np.asarray(A)
    if R.size == 0:
        return 0.0
    return float(np.linalg.norm(R, 2))


def cond(A: AlgebraMatrix) -> float:
    return float(np.linalg.cond(A.rep))


def inner(x, y, algebra: Algebra = H):
    """<x, y> = sum_k conj(y_k) x_k."""
    xv = as_vector(x, algebra)
    yv = as_vector(y, algebra)
    if xv.shape != yv.shape:
        raise DimensionMismatch(f"vector lengths differ: {xv.shape[0]} vs {yv.shape[0]}")
    val = algebra.mul(algebra.conj(yv), xv).sum(axis=0) if len(xv) else algebra.scalar(0.0)
    return wrap(val, algebra)


def norm(x, algebra: Algebra = H) -> float:
    xv = as_vector(x, algebra)
    return float(np.sqrt(np.sum(xv * xv)))


def random_qmatrix(rng, m: int, scale: float = 1.0) -> QMatrix:
    return QMatrix(scale * rng.standard_normal((m, m, 4)))

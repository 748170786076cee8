"""Quaternions, real Clifford algebras R_n and slice-plane decompositions.

Elements are stored as real coefficient arrays indexed by basis bitmask:
bit k-1 set means the generator e_k is present, so index 0 is the unit,
1 is e1, 2 is e2, 3 is e1e2 and so on.  For n = 2 this indexing coincides
with the quaternion basis (1, e1, e2, e3) because e3 = e1e2, which is why
the quaternions are handled as ``Algebra(2)`` with a wider set of
imaginary directions.

Vectorised routines take arrays whose last axis has length ``dim``; the
``Quaternion``, ``CliffordElement`` and ``Paravector`` classes are thin
immutable wrappers for single values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InputError

MAX_CLIFFORD_N = 5
SPHERE_TOL = 1e-9


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _reorder_sign(a: int, b: int) -> int:
    # number of transpositions needed to bring e_A e_B into increasing order
    swaps = 0
    a >>= 1
    while a:
        swaps += _popcount(a & b)
        a >>= 1
    return -1 if swaps % 2 else 1


def blade_sign(a: int, b: int) -> int:
    """Sign s with e_A e_B = s e_{A xor B} when every generator squares to -1."""
    s = _reorder_sign(a, b)
    if _popcount(a & b) % 2:
        s = -s
    return s


class Algebra:
    """Real Clifford algebra with n anticommuting units squaring to -1.

    ``imag`` lists the coefficient indices that make up the imaginary part of
    a point of the algebra: the generators e_1..e_n for paravectors, and
    additionally e1e2 for quaternions.
    """

    def __init__(self, n: int, name: str | None = None, imag: Sequence[int] | None = None):
        if not 1 <= n <= MAX_CLIFFORD_N:
            raise InputError(f"Clifford dimension must be in 1..{MAX_CLIFFORD_N}, got {n}")
        self.n = n
        self.dim = 2 ** n
        self.name = name or f"R{n}"
        self.imag = tuple(imag) if imag is not None else tuple(1 << k for k in range(n))
        self.point_indices = (0,) + self.imag
        table = np.zeros((self.dim, self.dim, self.dim))
        for a in range(self.dim):
            for b in range(self.dim):
                table[a, b, a ^ b] = blade_sign(a, b)
        self._table = table
        grades = np.array([_popcount(a) for a in range(self.dim)])
        self.grades = grades
        self._conj_sign = np.where((grades * (grades + 1) // 2) % 2 == 1, -1.0, 1.0)
        # stems: subsets A of {2..n} encoded as even bitmasks
        self.nstem = self.dim // 2
        self.stem_masks = np.array([j << 1 for j in range(self.nstem)])
        self.stem_parity = np.array([_popcount(int(m)) % 2 for m in self.stem_masks])
        stem_index = {int(m): j for j, m in enumerate(self.stem_masks)}
        self._stem_prod = [
            [(blade_sign(int(a), int(b)), stem_index[int(a) ^ int(b)]) for b in self.stem_masks]
            for a in self.stem_masks
        ]

    def __repr__(self):
        return f"Algebra({self.name})"

    def __eq__(self, other):
        return isinstance(other, Algebra) and (self.n, self.imag) == (other.n, other.imag)

    def __hash__(self):
        return hash((self.n, self.imag))

    @property
    def is_quaternion(self) -> bool:
        return self.n == 2 and len(self.imag) == 3

    # -- arithmetic on coefficient arrays ---------------------------------

    def mul(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.is_quaternion:
            return _hamilton(a, b)
        return np.einsum("...a,...b,abc->...c", a, b, self._table)

    def conj(self, a):
        return np.asarray(a, dtype=float) * self._conj_sign

    def norm2(self, a):
        a = np.asarray(a, dtype=float)
        return np.sum(a * a, axis=-1)

    def norm(self, a):
        return np.sqrt(self.norm2(a))

    def left_matrix(self, a):
        """Matrix of x -> a x acting on coefficient vectors."""
        a = np.asarray(a, dtype=float)
        return np.einsum("...a,abc->...cb", a, self._table)

    def inv(self, a):
        a = np.asarray(a, dtype=float)
        if self.dim <= 4 or self.is_point(a):
            n2 = self.norm2(a)
            if np.any(n2 == 0):
                raise ZeroDivisionError("inverse of zero element")
            return self.conj(a) / n2[..., None]
        L = self.left_matrix(a)
        one = np.zeros(a.shape[:-1] + (self.dim,))
        one[..., 0] = 1.0
        return np.linalg.solve(L, one[..., None])[..., 0]

    def is_point(self, a, tol: float = 1e-12) -> bool:
        a = np.asarray(a, dtype=float)
        mask = np.ones(self.dim, dtype=bool)
        mask[list(self.point_indices)] = False
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        return bool(np.all(np.abs(a[..., mask]) <= tol * scale))

    def basis(self, index: int):
        e = np.zeros(self.dim)
        e[index] = 1.0
        return e

    def scalar(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (self.dim,))
        out[..., 0] = x
        return out

    @property
    def one(self):
        return self.basis(0)

    @property
    def e1(self):
        return self.basis(1)

    def real(self, a):
        return np.asarray(a, dtype=float)[..., 0]

    def imag_part(self, a):
        a = np.array(a, dtype=float)
        a[..., 0] = 0.0
        return a

    # -- complex planes ---------------------------------------------------

    def in_plane(self, z, unit=None):
        """Map complex numbers x + iy to x + y*unit (unit defaults to e1)."""
        z = np.asarray(z, dtype=complex)
        if unit is None:
            out = np.zeros(z.shape + (self.dim,))
            out[..., 0] = z.real
            out[..., 1] = z.imag
            return out
        unit = np.asarray(unit, dtype=float)
        return self.scalar(z.real) + z.imag[..., None] * unit

    def assemble_left(self, stems):
        """Sum_A F_A i_A for complex stems F_A on the e1-plane, A a subset of {2..n}."""
        stems = np.asarray(stems, dtype=complex)
        out = np.zeros(stems.shape[:-1] + (self.dim,))
        for j, m in enumerate(self.stem_masks):
            out[..., m] = stems[..., j].real
            out[..., m | 1] = stems[..., j].imag
        return out

    def split_left(self, a):
        a = np.asarray(a, dtype=float)
        stems = np.zeros(a.shape[:-1] + (self.nstem,), dtype=complex)
        for j, m in enumerate(self.stem_masks):
            stems[..., j] = a[..., m] + 1j * a[..., m | 1]
        return stems

    def assemble_right(self, stems):
        """Sum_A i_A F_A; moving e1 across i_A costs (-1)^|A|."""
        stems = np.asarray(stems, dtype=complex)
        out = np.zeros(stems.shape[:-1] + (self.dim,))
        for j, m in enumerate(self.stem_masks):
            sgn = -1.0 if self.stem_parity[j] else 1.0
            out[..., m] = stems[..., j].real
            out[..., m | 1] = sgn * stems[..., j].imag
        return out

    def split_right(self, a):
        a = np.asarray(a, dtype=float)
        stems = np.zeros(a.shape[:-1] + (self.nstem,), dtype=complex)
        for j, m in enumerate(self.stem_masks):
            sgn = -1.0 if self.stem_parity[j] else 1.0
            stems[..., j] = a[..., m] + 1j * sgn * a[..., m | 1]
        return stems

    def stem_products(self):
        """Table of (sign, index) with i_A i_B = sign * i_C for stem indices."""
        return self._stem_prod

    def random_unit(self, rng):
        v = rng.standard_normal(len(self.imag))
        v /= np.linalg.norm(v)
        out = np.zeros(self.dim)
        out[list(self.imag)] = v
        return out

    def random_point(self, rng, scale=1.0):
        out = np.zeros(self.dim)
        out[list(self.point_indices)] = scale * rng.standard_normal(len(self.point_indices))
        return out


def _hamilton(a, b):
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


H = Algebra(2, name="H", imag=(1, 2, 3))


@lru_cache(maxsize=None)
def clifford(n: int) -> Algebra:
    return Algebra(n)


# -- value types ------------------------------------------------------------


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        return cls(*(float(c) for c in a))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    @property
    def algebra(self) -> Algebra:
        return H

    def _coerce(self, other):
        if isinstance(other, Quaternion):
            return other.as_array()
        if isinstance(other, (int, float, np.floating, np.integer)):
            return H.scalar(float(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(self.as_array() + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(self.as_array() - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(o - self.as_array())

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(H.mul(self.as_array(), o))

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(H.mul(o, self.as_array()))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(H.mul(self.as_array(), H.inv(o)))

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2))

    def inv(self) -> "Quaternion":
        return Quaternion.from_array(H.inv(self.as_array()))

    @property
    def real(self) -> float:
        return self.w

    def isclose(self, other, tol=1e-12) -> bool:
        o = self._coerce(other)
        return bool(np.max(np.abs(self.as_array() - o)) <= tol)


E0 = Quaternion(1.0)
E1 = Quaternion(0.0, 1.0)
E2 = Quaternion(0.0, 0.0, 1.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    return p * q


@dataclass(frozen=True)
class CliffordElement:
    n: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 2 ** self.n:
            raise DimensionMismatch(f"expected {2 ** self.n} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_array(cls, n: int, a) -> "CliffordElement":
        return cls(n, tuple(float(c) for c in np.asarray(a, dtype=float)))

    @classmethod
    def blade(cls, n: int, *generators: int, value: float = 1.0) -> "CliffordElement":
        """value * e_{g1} e_{g2} ... for 1-based generator indices."""
        alg = clifford(n)
        out = alg.scalar(value)
        for g in generators:
            out = alg.mul(out, alg.basis(1 << (g - 1)))
        return cls.from_array(n, out)

    @property
    def algebra(self) -> Algebra:
        return clifford(self.n)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def _coerce(self, other):
        if isinstance(other, CliffordElement):
            if other.n != self.n:
                raise DimensionMismatch(f"R{self.n} vs R{other.n}")
            return other.as_array()
        if isinstance(other, Paravector):
            return self._coerce(other.to_clifford())
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.algebra.scalar(float(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CliffordElement.from_array(self.n, self.as_array() + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CliffordElement.from_array(self.n, self.as_array() - o)

    def __neg__(self):
        return CliffordElement.from_array(self.n, -self.as_array())

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CliffordElement.from_array(self.n, self.algebra.mul(self.as_array(), o))

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CliffordElement.from_array(self.n, self.algebra.mul(o, self.as_array()))

    def conj(self) -> "CliffordElement":
        return CliffordElement.from_array(self.n, self.algebra.conj(self.as_array()))

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def isclose(self, other, tol=1e-12) -> bool:
        return bool(np.max(np.abs(self.as_array() - self._coerce(other))) <= tol)


def clifford_mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    if a.n != b.n:
        raise DimensionMismatch(f"cannot multiply R{a.n} by R{b.n}")
    return a * b


@dataclass(frozen=True)
class Paravector:
    x0: float
    xs: tuple

    @property
    def n(self) -> int:
        return len(self.xs)

    @classmethod
    def from_array(cls, n: int, a) -> "Paravector":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), tuple(float(a[1 << k]) for k in range(n)))

    def to_clifford(self) -> CliffordElement:
        return CliffordElement.from_array(self.n, self.as_array())

    def as_array(self) -> np.ndarray:
        out = np.zeros(2 ** self.n)
        out[0] = self.x0
        for k, c in enumerate(self.xs):
            out[1 << k] = c
        return out

    @property
    def algebra(self) -> Algebra:
        return clifford(self.n)

    def conj(self) -> "Paravector":
        return Paravector(self.x0, tuple(-c for c in self.xs))

    def norm(self) -> float:
        return float(math.sqrt(self.x0 ** 2 + sum(c * c for c in self.xs)))

    def __mul__(self, other):
        return self.to_clifford() * other


# -- conversions --------------------------------------------------------------


def as_array(value, algebra: Algebra | None = None):
    """Return (coefficient array, algebra) for any supported scalar value."""
    if isinstance(value, (Quaternion, CliffordElement, Paravector)):
        return value.as_array(), value.algebra
    if isinstance(value, (int, float, np.floating, np.integer)):
        alg = algebra or H
        return alg.scalar(float(value)), alg
    arr = np.asarray(value, dtype=float)
    alg = algebra
    if alg is None:
        if arr.shape[-1] == 4:
            alg = H
        else:
            n = int(round(math.log2(arr.shape[-1])))
            alg = clifford(n)
    npt = len(alg.point_indices)
    if arr.ndim >= 1 and arr.shape[-1] == npt and npt != alg.dim:
        # paravector coordinates (x0, x1, ..., xn)
        full = np.zeros(arr.shape[:-1] + (alg.dim,))
        full[..., list(alg.point_indices)] = arr
        return full, alg
    if arr.shape[-1] != alg.dim:
        raise DimensionMismatch(f"expected last axis {alg.dim}, got {arr.shape[-1]}")
    return arr, alg


def wrap(arr, algebra: Algebra, like=None):
    """Inverse of :func:`as_array` for single values."""
    arr = np.asarray(arr, dtype=float)
    if arr.ndim > 1:
        return arr
    if isinstance(like, Paravector):
        return Paravector.from_array(algebra.n, arr)
    if algebra.is_quaternion:
        return Quaternion.from_array(arr)
    return CliffordElement.from_array(algebra.n, arr)


# -- slice decomposition ----------------------------------------------------


@dataclass(frozen=True)
class SliceDecomposition:
    u: float
    v: float
    i: object

    def reassemble(self):
        arr, alg = as_array(self.i)
        return wrap(alg.scalar(self.u) + self.v * arr, alg, like=self.i)


def decompose(arr, algebra: Algebra):
    """Vectorised slice decomposition: returns (u, v, unit array).

    Real inputs get the unit e1.
    """
    arr = np.asarray(arr, dtype=float)
    u = arr[..., 0]
    im = algebra.imag_part(arr)
    v = np.sqrt(np.sum(im * im, axis=-1))
    safe = np.where(v > 0, v, 1.0)
    unit = im / safe[..., None]
    unit = np.where((v > 0)[..., None], unit, algebra.e1)
    return u, v, unit


def slice_decompose(q) -> SliceDecomposition:
    arr, alg = as_array(q)
    u, v, unit = decompose(arr, alg)
    return SliceDecomposition(float(u), float(v), wrap(unit, alg, like=q))


def arg(s) -> float:
    arr, alg = as_array(s)
    r = float(alg.norm(arr))
    if r == 0.0:
        raise InputError("arg is undefined at 0")
    return float(np.arccos(np.clip(arr[0] / r, -1.0, 1.0)))


def arg_uv(u, v):
    """Argument in [0, pi] of the sphere u + iv (v >= 0)."""
    return np.arctan2(np.abs(v), u)


def sphere_of(q) -> tuple[float, float]:
    arr, alg = as_array(q)
    u, v, _ = decompose(arr, alg)
    return float(u), float(v)


def sphere_contains(sphere: tuple[float, float], p, tol: float = SPHERE_TOL) -> bool:
    u, v = sphere_of(p)
    return abs(u - sphere[0]) <= tol and abs(v - sphere[1]) <= tol

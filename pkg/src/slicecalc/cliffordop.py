"""Paravector operators T = T_0 + e_1 T_1 + ... + e_n T_n on V tensor R_n.

The operator acts on Clifford-valued vectors by sum_{A,B} T_A(v_B) e_A e_B;
numerically it is the real matrix sum_A kron(L_{e_A}, T_A), see
:class:`slicecalc.qmatrix.Embedding`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import clifford
from .calculus import CalculusReport, apply
from .errors import DimensionMismatch, InputError
from .qmatrix import AlgebraMatrix, op_norm
from .slicefn import SliceFunction
from .spectrum import SSpectrum, resolvent_equation_residual, s_resolvent_left, s_resolvent_right, s_spectrum

MAX_N = 4
MAX_SIZE = 512


@dataclass(frozen=True, eq=False)
class ParavectorOperator:
    n: int
    components: tuple

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise InputError(f"Clifford dimension must be in 1..{MAX_N}")
        comps = tuple(np.array(c, dtype=float) for c in self.components)
        if len(comps) != self.n + 1:
            raise DimensionMismatch(f"need {self.n + 1} component matrices, got {len(comps)}")
        m = comps[0].shape[0]
        for c in comps:
            if c.shape != (m, m):
                raise DimensionMismatch("component matrices must be square and of equal size")
            c.setflags(write=False)
        if m * 2 ** self.n > MAX_SIZE:
            raise InputError(f"representation size {m * 2 ** self.n} exceeds {MAX_SIZE}")
        object.__setattr__(self, "components", comps)

    @property
    def m(self) -> int:
        return self.components[0].shape[0]

    @property
    def algebra(self):
        return clifford(self.n)

    @cached_property
    def matrix(self) -> AlgebraMatrix:
        alg = self.algebra
        E = np.zeros((self.m, self.m, alg.dim))
        E[:, :, 0] = self.components[0]
        for j in range(1, self.n + 1):
            E[:, :, 1 << (j - 1)] = self.components[j]
        return AlgebraMatrix(E, alg)

    @property
    def rep(self) -> np.ndarray:
        return self.matrix.rep

    def component_norm(self) -> float:
        """sum_A ||T_A||."""
        return float(sum(np.linalg.norm(c, 2) for c in self.components))

    def apply(self, v):
        return self.matrix.apply(v)

    def __add__(self, other):
        if other.n != self.n:
            raise DimensionMismatch("Clifford dimensions differ")
        return ParavectorOperator(self.n, tuple(a + b for a, b in zip(self.components, other.components)))

    @classmethod
    def from_matrix(cls, A: AlgebraMatrix) -> "ParavectorOperator":
        alg = A.algebra
        E = A.entries
        mask = np.ones(alg.dim, dtype=bool)
        mask[list(alg.point_indices)] = False
        if np.any(np.abs(E[:, :, mask]) > 1e-12 * max(1.0, float(np.abs(E).max()))):
            raise InputError("matrix has non-paravector components")
        return cls(alg.n, tuple(E[:, :, i].copy() for i in alg.point_indices))


def action(T: ParavectorOperator, v):
    """Direct evaluation of sum_{A,B} T_A(v_B) e_A e_B; v has shape (m, 2^n)."""
    alg = T.algebra
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    idx = [0] + [1 << (j - 1) for j in range(1, T.n + 1)]
    for A, TA in zip(idx, T.components):
        for B in range(alg.dim):
            sign = alg._table[A, B, A ^ B]
            out[:, A ^ B] += sign * (TA @ v[:, B])
    return out


def to_real_matrix(T: ParavectorOperator) -> np.ndarray:
    return np.array(T.rep)


def clifford_s_spectrum(T: ParavectorOperator) -> SSpectrum:
    return s_spectrum(T.matrix)


def clifford_resolvents(T: ParavectorOperator, s):
    M = T.matrix
    return s_resolvent_left(M, s), s_resolvent_right(M, s)


def clifford_resolvent_residual(T: ParavectorOperator, s, p, v=None) -> float:
    return resolvent_equation_residual(T.matrix, s, p, v)


def clifford_calculus(f: SliceFunction, T, method: str = "auto", **opts) -> CalculusReport:
    M = T.matrix if isinstance(T, ParavectorOperator) else T
    if f.algebra != M.algebra:
        f = f.to_algebra(M.algebra)
    return apply(f, M, method, **opts)


def _shift(N: int) -> np.ndarray:
    return np.roll(np.eye(N), 1, axis=0)


def dirac_demo(n: int = 1, N: int = 8, mass: float = 0.0) -> ParavectorOperator:
    """Central-difference Dirac operator on the N^n torus (unit spacing) plus mass * I."""
    if not 1 <= n <= 3:
        raise InputError("dirac_demo supports n = 1..3")
    if N < 4:
        raise InputError("need at least 4 grid points per direction")
    if N ** n * 2 ** n > MAX_SIZE:
        raise InputError("grid too large for the dense representation")
    S = _shift(N)
    D1 = 0.5 * (S - S.T)  # skew-symmetric circulant
    I = np.eye(N)
    comps = [mass * np.eye(N ** n)]
    for j in range(n):
        mats = [I] * n
        mats[j] = D1
        K = mats[0]
        for M in mats[1:]:
            K = np.kron(K, M)
        comps.append(K)
    return ParavectorOperator(n, tuple(comps))


def dirac_symbol_values(n: int, N: int):
    """Eigenvalues sin(2 pi k / N) of one skew circulant direction, up to the factor i."""
    return np.sin(2 * np.pi * np.arange(N) / N)


def random_paravector_operator(rng, n: int, m: int, scale: float = 1.0, shift: float = 0.0) -> ParavectorOperator:
    comps = [scale * rng.standard_normal((m, m)) + shift * np.eye(m)]
    comps += [scale * rng.standard_normal((m, m)) for _ in range(n)]
    return ParavectorOperator(n, tuple(comps))


def norm_triangle_gap(T: ParavectorOperator) -> float:
    """sum_A ||T_A|| - ||T|| (nonnegative by the triangle inequality)."""
    return T.component_norm() - op_norm(T.matrix)

"""Boundary-condition data model and the characteristic determinant.

A fastening of the ring membrane ``a <= r <= b`` is a real 2x4 matrix ``A``
acting on ``(y'(a), y(a), y'(b), y(b))``.  The fundamental system
``J0(lam r), Y0(lam r)`` evaluated the same way gives the 2x4 matrix
``B(lam)``, and natural frequencies are the positive zeros of
``det(A B^T)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, DomainError, ValidationError
from .special_functions import cylinder_functions

#: column pairs (0-based) in lexicographic order: 12, 13, 14, 23, 24, 34
MINOR_PAIRS = tuple(itertools.combinations(range(4), 2))
MINOR_LABELS = tuple(f"A{i + 1}{j + 1}" for i, j in MINOR_PAIRS)
RANK_TOL = 1e-10


@dataclass(frozen=True)
class Annulus:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (np.isfinite(a) and np.isfinite(b)) or not 0.0 < a < b:
            raise ValidationError(f"annulus needs 0 < a < b, got a={self.a!r}, b={self.b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a


@dataclass(frozen=True, eq=False)
class BoundaryConditions:
    """A rank-2 boundary matrix.  Stored read-only as a float array."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2, 4):
            raise ValidationError(f"boundary matrix must be 2x4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("boundary matrix has non-finite entries")
        s = np.linalg.svd(m, compute_uv=False)
        if s[0] == 0.0 or s[1] < RANK_TOL * s[0]:
            raise DegenerateError(f"boundary matrix must have rank 2 (singular values {s[0]:.3g}, {s[1]:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def separated(cls, k1: float, k2: float, k3: float, k4: float) -> "BoundaryConditions":
        """``k1 y'(a) - k2 y(a) = 0`` and ``k3 y'(b) + k4 y(b) = 0``."""
        return cls([[k1, -k2, 0.0, 0.0], [0.0, 0.0, k3, k4]])

    @property
    def is_separated(self) -> bool:
        m = self.matrix
        return bool(np.all(m[0, 2:] == 0.0) and np.all(m[1, :2] == 0.0))

    def __repr__(self):
        return f"BoundaryConditions({self.matrix.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, BoundaryConditions):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())


@dataclass(frozen=True)
class EvaluationVector:
    """``(y'(a), y(a), y'(b), y(b))`` for some function y."""

    values: tuple[float, float, float, float]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) != 4 or not all(np.isfinite(vals)):
            raise ValidationError("evaluation vector needs four finite entries")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[float, ...] = ()

    def __post_init__(self):
        vals = tuple(float(v) for v in self.eigenvalues)
        if any(not np.isfinite(v) or v <= 0.0 for v in vals):
            raise ValidationError("eigenvalues must be finite and positive")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValidationError("eigenvalues must be strictly increasing")
        object.__setattr__(self, "eigenvalues", vals)

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    def __getitem__(self, item):
        return self.eigenvalues[item]


def as_matrix(bc) -> np.ndarray:
    """Matrix of a :class:`BoundaryConditions`, or any array-like as-is (unvalidated)."""
    if isinstance(bc, BoundaryConditions):
        return bc.matrix
    return np.asarray(bc, dtype=float)


def _check_lambda(lam) -> np.ndarray:
    arr = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("spectral parameter must be finite and > 0")
    return arr


def basis_matrix(annulus: Annulus, lam):
    """``B(lam)`` with rows ``(J0', J0, J0', J0)`` and ``(Y0', Y0, Y0', Y0)`` at (a, a, b, b).

    Derivatives are taken in r, so ``J0'(lam a) = -lam J1(lam a)``.  Array
    ``lam`` gives shape ``lam.shape + (2, 4)``.
    """
    lam = _check_lambda(lam)
    j0a, j1a, y0a, y1a = cylinder_functions(lam * annulus.a)
    j0b, j1b, y0b, y1b = cylinder_functions(lam * annulus.b)
    row_j = np.stack(np.broadcast_arrays(-lam * j1a, j0a, -lam * j1b, j0b), axis=-1)
    row_y = np.stack(np.broadcast_arrays(-lam * y1a, y0a, -lam * y1b, y0b), axis=-1)
    return np.stack([row_j, row_y], axis=-2)


def _pair_minors(m: np.ndarray) -> np.ndarray:
    """All six 2x2 column minors of (..., 2, 4) arrays, last axis in MINOR_PAIRS order."""
    return np.stack([m[..., 0, i] * m[..., 1, j] - m[..., 0, j] * m[..., 1, i] for i, j in MINOR_PAIRS], axis=-1)


def basis_minors(annulus: Annulus, lam) -> np.ndarray:
    """``(B12, B13, B14, B23, B24, B34)`` at ``lam``."""
    return _pair_minors(basis_matrix(annulus, lam))


def basis_minor(annulus: Annulus, lam, i: int, j: int):
    """Minor of ``B(lam)`` on columns ``i < j`` (1-based)."""
    if not (isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer))):
        raise ValidationError("minor indices must be integers")
    if not 1 <= i < j <= 4:
        raise ValidationError(f"minor needs 1 <= i < j <= 4, got ({i}, {j})")
    m = basis_matrix(annulus, lam)
    i, j = i - 1, j - 1
    out = m[..., 0, i] * m[..., 1, j] - m[..., 0, j] * m[..., 1, i]
    return float(out) if np.ndim(out) == 0 else out


def matrix_minors(bc) -> np.ndarray:
    """The six raw 2x2 column minors ``(A12, A13, A14, A23, A24, A34)``."""
    return _pair_minors(as_matrix(bc))


def characteristic_determinant(bc, annulus: Annulus, lam):
    """``det(A B(lam)^T)``.

    Broadcasts: ``lam`` may be an array, and ``bc`` may be a stack of
    matrices of shape ``(..., 2, 4)`` matching ``lam``.
    """
    A = as_matrix(bc)
    B = basis_matrix(annulus, lam)
    P = np.einsum("...ik,...jk->...ij", A, B)
    out = P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0]
    return float(out) if np.ndim(out) == 0 else out


def binet_cauchy_sum(bc, annulus: Annulus, lam):
    """``sum_{i<j} A_ij B_ij(lam)``, the minor expansion of the determinant."""
    out = np.sum(basis_minors(annulus, lam) * matrix_minors(bc), axis=-1)
    return float(out) if np.ndim(out) == 0 else out

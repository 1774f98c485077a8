"""Plucker coordinates of 2x4 boundary matrices.

Coordinates are the six column minors ``(A12, A13, A14, A23, A24, A34)``.
Only their ratios matter.  In the symmetric coordinates

    x = (A12, A34, A13, -A24, A14, A23)

the Plucker relation reads ``x1 x2 + x3 x4 + x5 x6 = 0``.  It is the
quadratic form ``(x, x*) / 2``, where ``x*`` swaps each pair.  Projecting a
noisy 6-tuple onto that quadric uses the normal ``x*``:
``y = x + p x*``, so ``x = (y - p y*) / (1 - p^2)``, evaluated in a
cancellation-free form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, OffQuadricError, SingularProjectionError, UnsupportedError, ValidationError
from .spectral import BoundaryConditions, matrix_minors

# position of x1..x6 inside the minor tuple (A12, A13, A14, A23, A24, A34), and signs
_X_INDEX = np.array([0, 5, 1, 4, 2, 3])
_X_SIGN = np.array([1.0, 1.0, 1.0, -1.0, 1.0, 1.0])
_SWAP = np.array([1, 0, 3, 2, 5, 4])

FIXED_POINT_TOL = 1e-14
SINGULAR_TOL = 1e-12
ON_QUADRIC_TOL = 1e-9


def canonical(v) -> np.ndarray:
    """Unit norm, largest-magnitude entry positive (earliest index wins ties)."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0 or not np.isfinite(norm):
        raise DegenerateError("cannot normalise a zero or non-finite projective vector")
    v = v / norm
    if v[int(np.argmax(np.abs(v)))] < 0.0:
        v = -v
    return v + 0.0  # no negative zeros


@dataclass(frozen=True)
class QuadricResidual:
    value: float
    relative: float


@dataclass(frozen=True, eq=False)
class PluckerVector:
    """Six minors ``(A12, A13, A14, A23, A24, A34)``, not all zero."""

    minors: tuple

    def __post_init__(self):
        m = tuple(float(v) for v in np.asarray(self.minors, dtype=float).reshape(-1))
        if len(m) != 6:
            raise ValidationError(f"a Plucker vector has 6 entries, got {len(m)}")
        if not all(np.isfinite(m)):
            raise ValidationError("Plucker coordinates must be finite")
        if not any(m):
            raise DegenerateError("all Plucker coordinates vanish")
        object.__setattr__(self, "minors", m)

    @classmethod
    def from_x(cls, x) -> "PluckerVector":
        x = np.asarray(x, dtype=float)
        minors = np.empty(6)
        minors[_X_INDEX] = _X_SIGN * x
        return cls(minors)

    @classmethod
    def separated(cls, a13, a14, a23, a24) -> "PluckerVector":
        return cls((0.0, a13, a14, a23, a24, 0.0))

    def as_array(self) -> np.ndarray:
        return np.array(self.minors)

    @property
    def x(self) -> np.ndarray:
        return _X_SIGN * self.as_array()[_X_INDEX]

    def normalized(self) -> "PluckerVector":
        return PluckerVector(canonical(self.minors))

    def separated_part(self) -> np.ndarray:
        """``(A13, A14, A23, A24)``."""
        return self.as_array()[1:5]

    def __getitem__(self, label: str) -> float:
        return self.minors[_LABELS.index(label)]

    def __repr__(self):
        inner = ", ".join(f"{k}={v:.6g}" for k, v in zip(_LABELS, self.minors))
        return f"PluckerVector({inner})"


_LABELS = ("A12", "A13", "A14", "A23", "A24", "A34")


def minors_of(bc) -> PluckerVector:
    """Normalised Plucker coordinates of a boundary matrix."""
    raw = matrix_minors(bc)
    if not np.any(raw):
        raise DegenerateError("matrix has rank < 2: every 2x2 minor vanishes")
    return PluckerVector(canonical(raw))


def plucker_residual(v: PluckerVector) -> QuadricResidual:
    m = v.as_array()
    value = m[0] * m[5] - m[1] * m[4] + m[2] * m[3]
    return QuadricResidual(float(value), float(value / np.dot(m, m)))


def project_to_quadric(v: PluckerVector) -> PluckerVector:
    """Closest point on the Plucker quadric in the Euclidean metric of x.

    Points already on the quadric are returned unchanged.  Raises
    :class:`SingularProjectionError` when ``1 - p^2`` collapses: the input is
    then equidistant from several nearest points.
    """
    y = v.x
    yy = float(np.dot(y, y))
    ys = float(np.dot(y, y[_SWAP]))
    if abs(ys) <= FIXED_POINT_TOL * yy:
        return v
    # split y into swap-symmetric u and antisymmetric w: then
    # p = (|u| - |w|) / (|u| + |w|) and x = u / (1 + p) + w / (1 - p),
    # which avoids the cancellation in y - p y* when p is near +-1
    u = 0.5 * (y + y[_SWAP])
    w = 0.5 * (y - y[_SWAP])
    nu, nw = float(np.linalg.norm(u)), float(np.linalg.norm(w))
    total = nu + nw
    denom = 4.0 * nu * nw / (total * total)  # 1 - p^2
    if denom < SINGULAR_TOL:
        p = (nu - nw) / total
        raise SingularProjectionError(f"projection is singular (p={p:.17g})")
    return PluckerVector.from_x(u * (total / (2.0 * nu)) + w * (total / (2.0 * nw)))


def reconstruct_matrix(v: PluckerVector, pivot_ratio: float = 1e-2) -> BoundaryConditions:
    """Rebuild a separated boundary matrix from coordinates with ``A12 = A34 = 0``.

    For separated conditions ``[[A13, A14], [A23, A24]]`` is the outer
    product of the two row blocks.  A unit pivot is chosen in the order
    A13, A24, A14, A23, taking the first whose magnitude is at least
    ``pivot_ratio`` times the largest.
    """
    m = v.as_array()
    scale = np.linalg.norm(m)
    if max(abs(m[0]), abs(m[5])) > ON_QUADRIC_TOL * scale:
        raise UnsupportedError("reconstruction handles separated conditions only (A12 = A34 = 0)")
    res = plucker_residual(v)
    if abs(res.relative) > ON_QUADRIC_TOL:
        raise OffQuadricError(f"coordinates are off the Plucker quadric (relative residual {res.relative:.3g})")
    a13, a14, a23, a24 = m[1:5]
    biggest = max(abs(a13), abs(a14), abs(a23), abs(a24))
    if abs(a13) >= pivot_ratio * biggest:
        rows = [[1.0, a23 / a13, 0.0, 0.0], [0.0, 0.0, 1.0, a14 / a13]]
    elif abs(a24) >= pivot_ratio * biggest:
        rows = [[a14 / a24, 1.0, 0.0, 0.0], [0.0, 0.0, a23 / a24, 1.0]]
    elif abs(a14) >= pivot_ratio * biggest:
        rows = [[1.0, a24 / a14, 0.0, 0.0], [0.0, 0.0, a13 / a14, 1.0]]
    else:
        rows = [[a13 / a23, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, a24 / a23]]
    return BoundaryConditions(rows)


def plucker_distance(u: PluckerVector, v: PluckerVector) -> float:
    """Euclidean distance between canonical representatives, up to sign."""
    cu, cv = canonical(u.minors), canonical(v.minors)
    return float(min(np.linalg.norm(cu - cv), np.linalg.norm(cu + cv)))


def equivalent(bc1, bc2, tol: float = 1e-9) -> bool:
    """True when two rank-2 matrices have proportional minors (``A1 = S A2``)."""
    return plucker_distance(minors_of(bc1), minors_of(bc2)) <= tol

"""Forward problem: natural frequencies from a known fastening.

Eigenvalues are the positive sign changes of the characteristic
determinant.  A uniform scan brackets them and :func:`refine_root`
shrinks each bracket.  Roots of even multiplicity (tangencies) produce no
sign change and are not reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NoSignChangeError, NotEnoughRootsError, ValidationError
from .spectral import Annulus, Spectrum, characteristic_determinant

_CHUNK = 256


@dataclass(frozen=True)
class SearchConfig:
    """Scan and refinement settings.

    ``scan_step=None`` picks ``min(0.05, pi / (8 (b - a)))`` per annulus,
    which gives about eight samples per expected gap between roots.
    """

    lambda_min: float = 1e-3
    lambda_max: float = 500.0
    scan_step: Optional[float] = None
    root_tolerance: float = 1e-10
    max_roots: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.lambda_min < self.lambda_max) or not math.isfinite(self.lambda_max):
            raise ValidationError("search config needs 0 < lambda_min < lambda_max < inf")
        if self.scan_step is not None and not self.scan_step > 0.0:
            raise ValidationError("scan_step must be positive")
        if not self.root_tolerance > 0.0:
            raise ValidationError("root_tolerance must be positive")
        if int(self.max_roots) != self.max_roots or self.max_roots < 1:
            raise ValidationError("max_roots must be a positive integer")

    def step_for(self, annulus: Annulus) -> float:
        if self.scan_step is not None:
            return float(self.scan_step)
        return min(0.05, math.pi / (8.0 * annulus.width))


def refine_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                max_iter: int = 500) -> float:
    """Shrink a sign-change bracket ``[lo, hi]`` to width ``<= tol``.

    Uses an Illinois false-position step when it stays inside the bracket,
    and plain bisection whenever two steps fail to halve the width.  So
    convergence is never slower than bisection.  ``f`` is only evaluated
    inside ``[lo, hi]``.  Returns the midpoint of the final bracket.
    """
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise ValidationError(f"refine_root needs lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise ValidationError("tolerance must be positive")
    flo, fhi = float(f(lo)), float(f(hi))
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not flo * fhi < 0.0:
        raise NoSignChangeError(f"no sign change on [{lo}, {hi}]: f(lo)={flo:.3g}, f(hi)={fhi:.3g}")

    side = 0
    width_before = hi - lo
    for it in range(max_iter):
        width = hi - lo
        if width <= tol:
            break
        if it % 2 == 0:
            if it and width > 0.5 * width_before:
                x = 0.5 * (lo + hi)
            else:
                x = (lo * fhi - hi * flo) / (fhi - flo)
            width_before = width
        else:
            x = (lo * fhi - hi * flo) / (fhi - flo)
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
            if not lo < x < hi:
                break  # bracket is down to adjacent doubles
        fx = float(f(x))
        if fx == 0.0:
            return x
        if fx * fhi < 0.0:
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
    return 0.5 * (lo + hi)


def sign_change_brackets(func, lambda_min: float, lambda_max: float, step: float, count: int):
    """Scan ``func`` (vectorised) on a uniform grid; yield up to ``count`` brackets.

    Each item is ``(lo, hi, exact)`` where ``exact`` marks a grid point at
    which ``func`` vanished exactly.
    """
    found = 0
    n_total = int(math.floor((lambda_max - lambda_min) / step)) + 1
    prev_x = prev_v = None
    start = 0
    while start < n_total and found < count:
        idx = np.arange(start, min(start + _CHUNK, n_total))
        xs = lambda_min + idx * step
        vs = np.asarray(func(xs), dtype=float)
        if prev_x is not None:
            xs = np.concatenate([[prev_x], xs])
            vs = np.concatenate([[prev_v], vs])
        for i in range(len(xs) - 1):
            if vs[i + 1] == 0.0:
                yield xs[i + 1], xs[i + 1], True
                found += 1
            elif vs[i] != 0.0 and vs[i] * vs[i + 1] < 0.0:
                yield xs[i], xs[i + 1], False
                found += 1
            if found >= count:
                return
        prev_x, prev_v = xs[-1], vs[-1]
        start += _CHUNK


def find_eigenvalues(bc, annulus: Annulus, count: int, config: SearchConfig = SearchConfig()) -> Spectrum:
    """First ``count`` positive eigenvalues of the fastened ring membrane.

    Raises :class:`NotEnoughRootsError` if the scan reaches
    ``config.lambda_max`` before finding ``count`` sign changes.
    """
    if int(count) != count or count < 0:
        raise ValidationError(f"count must be a non-negative integer, got {count!r}")
    count = int(count)
    if count > config.max_roots:
        raise ValidationError(f"count={count} exceeds max_roots={config.max_roots}")
    if count == 0:
        return Spectrum(())

    def det(lam):
        return characteristic_determinant(bc, annulus, lam)

    roots = []
    brackets = sign_change_brackets(det, config.lambda_min, config.lambda_max, config.step_for(annulus), count)
    for lo, hi, exact in brackets:
        roots.append(lo if exact else refine_root(det, lo, hi, config.root_tolerance))
    if len(roots) < count:
        raise NotEnoughRootsError(count, len(roots), config.lambda_max)
    return Spectrum(tuple(roots))


def local_scale(func, lam: float, half_width: float, samples: int = 17) -> float:
    """Largest ``|func|`` on a small grid around ``lam``; a yardstick for root residuals."""
    lo = max(lam - half_width, 0.5 * lam)
    xs = np.linspace(lo, lam + half_width, samples)
    return float(np.max(np.abs(func(xs))))


def fit_outer_radius(bc, targets, a: float = 1.0, b_grid=None, config: SearchConfig = SearchConfig()):
    """Grid-search the outer radius so the first eigenvalues best match ``targets``.

    The misfit is the largest absolute eigenvalue deviation.  Returns a dict
    with ``a``, ``b``, ``eigenvalues`` and ``max_abs_error``.  Radii whose
    spectrum is too short are skipped.
    """
    targets = np.asarray(targets, dtype=float)
    if b_grid is None:
        b_grid = np.round(np.arange(1.5, 3.0 + 1e-9, 0.01), 10)
    best = None
    for b in b_grid:
        try:
            spectrum = find_eigenvalues(bc, Annulus(a, float(b)), len(targets), config)
        except NotEnoughRootsError:
            continue
        err = float(np.max(np.abs(np.asarray(spectrum.eigenvalues) - targets)))
        if best is None or err < best["max_abs_error"]:
            best = {"a": float(a), "b": float(b), "eigenvalues": spectrum.eigenvalues, "max_abs_error": err}
    return best

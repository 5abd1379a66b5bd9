"""Coefficient fields a(x), b(x), p(x), q(x) entering Phi-function families.

Three carriers: constants, closed-form expressions (exact moduli for the
counterexample probes), and multilinear interpolation of grid samples.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, InvariantError


class Coefficient:
    """Scalar field on a domain; callable on point arrays of shape (N, d)."""

    def __call__(self, points):
        raise NotImplementedError

    @property
    def is_constant(self):
        return False


@dataclass(frozen=True)
class Const(Coefficient):
    value: float

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.full(pts.shape[0], float(self.value))

    @property
    def is_constant(self):
        return True


@dataclass(frozen=True)
class Expr(Coefficient):
    """Closed-form field x -> fn(x); fn receives an (N, d) array."""

    fn: callable
    label: str = "expr"

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.asarray(self.fn(pts), dtype=float)
        return np.broadcast_to(out, (pts.shape[0],)).copy()


@dataclass(frozen=True)
class SpatialField(Coefficient):
    """Samples on a uniform grid with multilinear interpolation."""

    grid: object            # domain.Grid
    values: np.ndarray      # shape == grid.shape

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(self.grid.shape)
        if not np.all(np.isfinite(vals)):
            raise InvariantError("spatial field values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        g = self.grid
        lo, _ = g.domain.bounds
        # fractional index relative to cell centers; clamp to the sample hull
        t = (pts - lo) / g.spacing - 0.5
        out = None
        if g.d == 1:
            out = _interp_axis(t[:, 0], self.values)
        else:
            i, fi = _split_frac(t[:, 0], g.shape[0])
            j, fj = _split_frac(t[:, 1], g.shape[1])
            v = self.values
            out = ((1 - fi) * (1 - fj) * v[i, j] + fi * (1 - fj) * v[i + 1, j]
                   + (1 - fi) * fj * v[i, j + 1] + fi * fj * v[i + 1, j + 1])
        return out


def _split_frac(t, n):
    t = np.clip(t, 0.0, n - 1.0)
    i = np.minimum(t.astype(int), n - 2)
    return i, t - i


def _interp_axis(t, vals):
    n = len(vals)
    if n == 1:
        return np.full(t.shape, vals[0])
    i, f = _split_frac(t, n)
    return (1 - f) * vals[i] + f * vals[i + 1]


def as_coefficient(c):
    if c is None:
        return None
    if isinstance(c, Coefficient):
        return c
    if np.isscalar(c):
        return Const(float(c))
    if callable(c):
        return Expr(c)
    raise ArgumentError(f"cannot interpret {c!r} as a coefficient field")


def radial(center, fn, label="radial"):
    """Coefficient x -> fn(|x - center|)."""
    c = np.asarray(center, dtype=float)

    def _eval(pts):
        return fn(np.linalg.norm(pts - c, axis=-1))

    return Expr(_eval, label=label)

"""Domains (boxes and balls in d=1,2), grids, and deterministic ball lattices."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import config
from .errors import ArgumentError, DomainError

UNIT_BALL_MEASURE = {1: 2.0, 2: float(np.pi)}


def _as_point(x, d):
    p = np.asarray(x, dtype=float).reshape(-1)
    if p.size != d:
        raise ArgumentError(f"expected a point in R^{d}, got shape {np.shape(x)}")
    return p


@dataclass(frozen=True)
class Ball:
    """Open ball B_r(c) in R^d (an interval when d=1)."""

    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))
        if self.radius <= 0:
            raise ArgumentError("ball radius must be positive")
        if self.d not in (1, 2):
            raise ArgumentError("only d in {1,2} is supported")

    @property
    def d(self):
        return len(self.center)

    @property
    def diameter(self):
        return 2.0 * self.radius

    @property
    def measure(self):
        return UNIT_BALL_MEASURE[self.d] * self.radius ** self.d

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.norm(pts - np.asarray(self.center), axis=-1) <= self.radius

    def rescaled(self, eps, x0=None):
        """Image under y = x0 + eps (x - x0); defaults to scaling about the center."""
        c = np.asarray(self.center, dtype=float)
        if x0 is None:
            x0 = c
        x0 = _as_point(x0, self.d)
        return Ball(tuple(x0 + eps * (c - x0)), eps * self.radius)


@dataclass(frozen=True)
class Domain:
    """Bounded open domain: an axis box or a ball, in dimension 1 or 2."""

    kind: str                 # "box" | "ball"
    corner: tuple = None      # box: lower corner
    extent: tuple = None      # box: side lengths
    center: tuple = None      # ball
    radius: float = None      # ball

    def __post_init__(self):
        if self.kind == "box":
            if self.corner is None or self.extent is None:
                raise ArgumentError("box domain needs corner and extent")
            object.__setattr__(self, "corner", tuple(float(c) for c in np.atleast_1d(self.corner)))
            object.__setattr__(self, "extent", tuple(float(e) for e in np.atleast_1d(self.extent)))
            if len(self.corner) != len(self.extent):
                raise ArgumentError("corner and extent dimensions differ")
            if any(e <= 0 for e in self.extent):
                raise ArgumentError("box extent must be positive")
        elif self.kind == "ball":
            if self.center is None or self.radius is None:
                raise ArgumentError("ball domain needs center and radius")
            object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))
            if self.radius <= 0:
                raise ArgumentError("ball radius must be positive")
        else:
            raise ArgumentError(f"unknown domain kind {self.kind!r}")
        if self.d not in (1, 2):
            raise ArgumentError("only d in {1,2} is supported")

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def box(corner, extent):
        return Domain("box", corner=corner, extent=extent)

    @staticmethod
    def unit_box(d):
        return Domain.box((0.0,) * d, (1.0,) * d)

    @staticmethod
    def ball(center, radius):
        return Domain("ball", center=center, radius=radius)

    @staticmethod
    def unit_ball(d=2):
        return Domain.ball((0.0,) * d, 1.0)

    @staticmethod
    def interval(a, b):
        return Domain.box((a,), (b - a,))

    # -- geometry --------------------------------------------------------------

    @property
    def d(self):
        geom = self.corner if self.kind == "box" else self.center
        return len(geom)

    @property
    def bounds(self):
        """(lower, upper) corners of the bounding box."""
        if self.kind == "box":
            lo = np.asarray(self.corner)
            return lo, lo + np.asarray(self.extent)
        c = np.asarray(self.center)
        return c - self.radius, c + self.radius

    @property
    def measure(self):
        if self.kind == "box":
            return float(np.prod(self.extent))
        return UNIT_BALL_MEASURE[self.d] * self.radius ** self.d

    @property
    def diameter(self):
        if self.kind == "box":
            return float(np.linalg.norm(self.extent))
        return 2.0 * self.radius

    @property
    def midpoint(self):
        lo, hi = self.bounds
        return 0.5 * (lo + hi)

    def as_ball(self):
        if self.kind != "ball":
            raise ArgumentError("domain is not a ball")
        return Ball(self.center, self.radius)

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[-1] != self.d:
            raise ArgumentError(f"points have dimension {pts.shape[-1]}, domain has {self.d}")
        if self.kind == "box":
            lo, hi = self.bounds
            return np.all((pts >= lo) & (pts <= hi), axis=-1)
        return np.linalg.norm(pts - np.asarray(self.center), axis=-1) <= self.radius

    def require_inside(self, points, what="point"):
        ok = self.contains(points)
        if not np.all(ok):
            bad = np.atleast_2d(np.asarray(points, dtype=float))[~ok][0]
            raise DomainError(f"{what} {tuple(bad)} lies outside the domain")

    def grid(self, n):
        return Grid(self, _shape_tuple(n, self.d))


def _shape_tuple(n, d):
    if np.isscalar(n):
        return (int(n),) * d
    shape = tuple(int(k) for k in n)
    if len(shape) != d:
        raise ArgumentError("grid shape does not match domain dimension")
    return shape


@dataclass(frozen=True)
class Grid:
    """Uniform cell grid over the bounding box of a domain.

    Cells are addressed row-major with axis 0 outermost.  For ball domains
    the cells whose centers fall inside the ball are the active ones; all
    integrals run over active cells only.
    """

    domain: Domain
    shape: tuple

    def __post_init__(self):
        if any(k <= 0 for k in self.shape):
            raise ArgumentError("grid shape must be positive")

    @property
    def d(self):
        return self.domain.d

    @property
    def n_cells(self):
        return int(np.prod(self.shape))

    @cached_property
    def spacing(self):
        lo, hi = self.domain.bounds
        return (hi - lo) / np.asarray(self.shape)

    @property
    def cell_measure(self):
        return float(np.prod(self.spacing))

    @cached_property
    def axes(self):
        lo, _ = self.domain.bounds
        return tuple(lo[a] + (np.arange(self.shape[a]) + 0.5) * self.spacing[a]
                     for a in range(self.d))

    @cached_property
    def centers(self):
        """Cell centers, shape (n_cells, d), row-major."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @cached_property
    def active(self):
        """Mask of cells whose center lies in the domain."""
        if self.domain.kind == "box":
            return np.ones(self.n_cells, dtype=bool)
        return self.domain.contains(self.centers)

    @property
    def active_measure(self):
        """Discrete measure of the domain: number of active cells times h^d."""
        return float(np.count_nonzero(self.active)) * self.cell_measure

    def ravel_index(self, idx):
        return int(np.ravel_multi_index(tuple(idx), self.shape))

    def unravel_index(self, flat):
        return tuple(int(i) for i in np.unravel_index(flat, self.shape))

    def cell_of(self, x):
        """Flat index of the cell containing x."""
        x = _as_point(x, self.d)
        lo, _ = self.domain.bounds
        idx = np.floor((x - lo) / self.spacing).astype(int)
        idx = np.clip(idx, 0, np.asarray(self.shape) - 1)
        flat = self.ravel_index(idx)
        if not self.active[flat]:
            raise DomainError(f"point {tuple(x)} falls in an inactive cell")
        return flat

    def ball_mask(self, ball):
        """Active cells whose center lies in the given ball."""
        mask = self.active & ball.contains(self.centers)
        if not mask.any():
            raise DomainError("ball does not meet the grid")
        return mask


def ball_lattice(ball, domain=None, min_points=None):
    """Deterministic sample lattice on B `ball` intersected with `domain`.

    Returns at least ``min_points * d`` points (a regular grid over the
    bounding box filtered to the intersection) plus the ball center when it
    lies in the domain.  Used for the essinf/esssup approximations.
    """
    d = ball.d
    if min_points is None:
        min_points = config.LATTICE_MIN_POINTS
    target = min_points * d
    c = np.asarray(ball.center)
    if d == 1:
        n = 2 * target
        xs = np.linspace(c[0] - ball.radius, c[0] + ball.radius, n)[:, None]
        pts = xs
    else:
        # oversample the square so the disk keeps >= target points
        n = int(np.ceil(np.sqrt(target * 4 / np.pi))) + 2
        g = np.linspace(-ball.radius, ball.radius, n)
        xx, yy = np.meshgrid(g, g, indexing="ij")
        pts = np.stack([xx.ravel(), yy.ravel()], axis=-1) + c
        pts = pts[np.linalg.norm(pts - c, axis=1) <= ball.radius]
    if domain is not None:
        pts = pts[domain.contains(pts)]
    center_ok = domain is None or bool(domain.contains(c[None])[0])
    if center_ok:
        pts = np.concatenate([pts, c[None]], axis=0)
    if len(pts) == 0:
        raise DomainError("ball does not intersect the domain")
    return pts

"""Sampled verification of growth and continuity properties of Phi-functions.

Every check reports a ``PropertyReport``: a pass/fail flag, the fitted
constants when the property holds, and a concrete witness when it fails.
The checks are ratio statements sampled on a log-spaced t-grid spanning
several orders of magnitude, with spatial sampling on a deterministic
domain lattice.
"""

from dataclasses import dataclass, field

import numpy as np

from . import config
from .domain import Ball, ball_lattice
from .errors import ArgumentError, PreconditionError
from .phi import BallBounds

_REL_SLACK = 1e-9      # monotonicity comparisons up to relative rounding slack
_FIT_DRIFT = 1.2       # fitted almost-constants must be range-stable up to this factor


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of one property check."""

    property: str
    holds: bool
    constants: dict = field(default_factory=dict)
    witness: dict = None
    sampling: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.holds:
            if self.witness is None:
                raise ArgumentError("failed checks must carry a witness")
            if self.constants:
                raise ArgumentError("constants are reported only when the check holds")

    def constant(self, name):
        return self.constants[name]


def _sample_points(phi, cfg):
    lo, hi = phi.domain.bounds
    per_axis = max(2, int(round(cfg.x_samples ** (1.0 / phi.domain.d))))
    axes = [np.linspace(lo[a], hi[a], per_axis) for a in range(phi.domain.d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    pts = pts[phi.domain.contains(pts)]
    return np.concatenate([pts, np.atleast_2d(phi.domain.midpoint)], axis=0)


def _sampling_info(cfg, **extra):
    info = {"seed": cfg.seed, "t_min": cfg.t_min, "t_max": cfg.t_max,
            "t_samples": cfg.t_samples}
    info.update(extra)
    return info


def _trim(ts, lo_factor=10.0, hi_factor=10.0):
    return (ts >= ts[0] * lo_factor) & (ts <= ts[-1] / hi_factor)


# -- monotone growth ---------------------------------------------------------------


def _ratio_fit_increasing(g):
    """Smallest a >= 1 with g(s) <= a g(t) for s <= t, columnwise over t."""
    run_max = np.maximum.accumulate(g, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(g > 0, run_max / g, 1.0)
    return max(1.0, float(np.nanmax(ratios)))


def check_inc(phi, p, almost=False, cfg=None):
    """(Inc)_p / (aInc)_p: t -> phi(x,t)/t^p (almost) increasing."""
    if p <= 0:
        raise ArgumentError("growth exponent p must be positive")
    cfg = cfg or config.CheckConfig()
    ts = cfg.t_grid()
    pts = _sample_points(phi, cfg)
    g = phi.eval_grid(pts, ts) / ts[None, :] ** p
    name = f"aInc_{p:g}" if almost else f"Inc_{p:g}"
    info = _sampling_info(cfg, x_samples=len(pts))

    if not almost:
        ok = _nondecreasing_rows(g)
        if ok is True:
            return PropertyReport(name, True, {"a": 1.0}, sampling=info)
        i, j = ok
        return PropertyReport(name, False, witness=_t_witness(pts, ts, i, j, g),
                              sampling=info)

    a_full = _ratio_fit_increasing(g)
    inner = _trim(ts)
    a_inner = _ratio_fit_increasing(g[:, inner])
    if np.isfinite(a_full) and a_full <= _FIT_DRIFT * a_inner + _REL_SLACK:
        return PropertyReport(name, True, {"a": a_full}, sampling=info)
    run_max = np.maximum.accumulate(g, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        i, j = np.unravel_index(np.nanargmax(np.where(g > 0, run_max / g, 0.0)), g.shape)
    return PropertyReport(name, False, witness=_t_witness(pts, ts, i, j, g,
                                                          fitted=a_full),
                          sampling=info)


def check_dec(phi, q, almost=False, cfg=None):
    """(Dec)_q / (aDec)_q: t -> phi(x,t)/t^q (almost) decreasing."""
    if q <= 0:
        raise ArgumentError("growth exponent q must be positive")
    cfg = cfg or config.CheckConfig()
    ts = cfg.t_grid()
    pts = _sample_points(phi, cfg)
    g = phi.eval_grid(pts, ts) / ts[None, :] ** q
    name = f"aDec_{q:g}" if almost else f"Dec_{q:g}"
    info = _sampling_info(cfg, x_samples=len(pts))

    if not almost:
        ok = _nondecreasing_rows(-g)
        if ok is True:
            return PropertyReport(name, True, {"a": 1.0}, sampling=info)
        i, j = ok
        return PropertyReport(name, False, witness=_t_witness(pts, ts, i, j, g),
                              sampling=info)

    # smallest a with a g(s) >= g(t) for s <= t
    def fit(gg):
        run_min = np.minimum.accumulate(gg, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(run_min > 0, gg / run_min, 1.0)
        return max(1.0, float(np.nanmax(ratios)))

    a_full = fit(g)
    a_inner = fit(g[:, _trim(ts)])
    if np.isfinite(a_full) and a_full <= _FIT_DRIFT * a_inner + _REL_SLACK:
        return PropertyReport(name, True, {"a": a_full}, sampling=info)
    run_min = np.minimum.accumulate(g, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        i, j = np.unravel_index(np.nanargmax(np.where(run_min > 0, g / run_min, 0.0)),
                                g.shape)
    return PropertyReport(name, False, witness=_t_witness(pts, ts, i, j, g,
                                                          fitted=a_full),
                          sampling=info)


def _nondecreasing_rows(g):
    drops = g[:, 1:] - g[:, :-1]
    slack = _REL_SLACK * np.maximum(np.abs(g[:, 1:]), 1.0)
    bad = drops < -slack
    if not bad.any():
        return True
    i, j = np.argwhere(bad)[0]
    return int(i), int(j) + 1


def _t_witness(pts, ts, i, j, g, fitted=None):
    w = {"x": tuple(pts[i]), "t": float(ts[j]), "value": float(g[i, j])}
    if j > 0:
        w["s"] = float(ts[j - 1])
    if fitted is not None:
        w["fitted"] = float(fitted)
    return w


def doubling_constant(phi, cfg=None):
    """Fitted doubling constant K = sup phi(x,2t)/phi(x,t) over the samples.

    Holds when K is finite over the sampled range and the ratio has leveled
    off at the top of the range; an exponential-type function fails with the
    offending t as witness.
    """
    cfg = cfg or config.CheckConfig()
    ts = cfg.t_grid()
    pts = _sample_points(phi, cfg)
    num = phi.eval_grid(pts, 2.0 * ts)
    den = phi.eval_grid(pts, ts)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(den > 0, num / den, 1.0)
    info = _sampling_info(cfg, x_samples=len(pts))
    per_t = np.nanmax(r, axis=0)
    k = float(np.nanmax(per_t))
    i, j = np.unravel_index(int(np.nanargmax(np.nan_to_num(r, nan=-np.inf))), r.shape)
    witness = {"x": tuple(pts[i]), "t": float(ts[j]), "ratio": k}

    if not np.isfinite(k) or not np.all(np.isfinite(num)):
        return PropertyReport("doubling", False, witness=witness, sampling=info)
    # still climbing at the edge of the t-range => no doubling constant in sight
    edge, inner = per_t[-1], per_t[np.searchsorted(ts, ts[-1] / 10.0)]
    if edge > 1.05 * inner and j >= len(ts) - 2:
        return PropertyReport("doubling", False, witness=witness, sampling=info)
    return PropertyReport("doubling", True, {"K": max(k, 1.0)}, sampling=info)


# -- weight normalization (A0) -------------------------------------------------------


def check_a0(phi, cfg=None):
    """Two-sided unit normalization: phi(x, 1/sigma) <= 1 <= phi(x, sigma)."""
    cfg = cfg or config.CheckConfig()
    pts = _sample_points(phi, cfg)
    grid = np.geomspace(1.0, cfg.sigma_max, cfg.search_points)
    grid[0] = 1.0

    def feasible(sig):
        up = phi.eval_at(pts, 1.0 / sig)
        lo = phi.eval_at(pts, sig)
        return float(up.max()) <= 1.0 + _REL_SLACK and float(lo.min()) >= 1.0 - _REL_SLACK

    info = _sampling_info(cfg, x_samples=len(pts), sigma_max=cfg.sigma_max)
    hit = None
    for k, sig in enumerate(grid):
        if feasible(sig):
            hit = k
            break
    if hit is None:
        up = phi.eval_at(pts, 1.0 / grid[-1])
        lo = phi.eval_at(pts, grid[-1])
        bad = int(np.argmax(np.maximum(up - 1.0, 1.0 - lo)))
        witness = {"x": tuple(pts[bad]), "sigma": float(grid[-1]),
                   "phi_at_inv": float(up[bad]), "phi_at_sigma": float(lo[bad])}
        return PropertyReport("A0", False, witness=witness, sampling=info)
    sigma = grid[hit]
    if hit > 0:
        sigma = _bisect_feasible(feasible, grid[hit - 1], grid[hit])
    return PropertyReport("A0", True, {"sigma": float(sigma)}, sampling=info)


def _bisect_feasible(feasible, lo, hi, iters=40):
    """Smallest feasible value in (lo, hi]; feasibility is monotone."""
    for _ in range(iters):
        mid = np.sqrt(lo * hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-6 * hi:
            break
    return hi


def require_a0(phi, cfg=None):
    rep = check_a0(phi, cfg)
    if not rep.holds:
        raise PreconditionError("the unit-normalization check failed", payload=rep)
    return rep.constant("sigma")


# -- local continuity over balls ------------------------------------------------------


def check_ada1(phi, balls, sigma=None, cfg=None, threshold="diam"):
    """Adimensional local-continuity condition over a list of balls.

    For each ball with diameter <= 1, searches the largest beta in (0,1) with
    esssup_B phi(., beta t) <= essinf_B phi(., t) for all sampled
    t in [sigma, (phi_B^-)^{-1}(1/diam B)].  With threshold="measure" the
    upper end uses 1/|B| instead (the dimension-bound variant); only the
    adimensional form feeds the Poincare machinery.
    """
    cfg = cfg or config.CheckConfig()
    if sigma is None:
        sigma = require_a0(phi, cfg)
    name = "adA1" if threshold == "diam" else "A1"
    betas = np.geomspace(cfg.beta_floor, 1.0, cfg.search_points)[::-1]
    per_ball = []
    worst = None
    fail = None
    for ball in balls:
        cap = ball.diameter if threshold == "diam" else ball.measure
        if cap > 1.0 + 1e-12:
            raise ArgumentError(f"{name} requires balls with {threshold} <= 1")
        bounds = BallBounds(phi, ball)
        t_hi = bounds.lower_inverse(1.0 / cap)
        if t_hi <= sigma:
            per_ball.append({"radius": ball.radius, "beta": 1.0, "vacuous": True})
            continue
        ts = np.geomspace(sigma, t_hi, 64)
        lower = bounds.lower(ts)
        svals = np.outer(betas, ts).ravel()
        upper = bounds.upper(svals).reshape(len(betas), len(ts))
        ok = np.all(upper <= lower[None, :] * (1.0 + 1e-12), axis=1)
        if ok.any():
            beta = float(betas[np.argmax(ok)])
            per_ball.append({"radius": ball.radius, "beta": beta, "t_hi": float(t_hi)})
            if worst is None or beta < worst:
                worst = beta
        else:
            j = int(np.argmax(upper[-1] / lower))
            fail = {"ball_center": tuple(ball.center), "radius": float(ball.radius),
                    "scale": float(cap), "t": float(ts[j]),
                    "upper": float(upper[-1, j]), "lower": float(lower[j])}
            per_ball.append({"radius": ball.radius, "beta": None})
    info = _sampling_info(cfg, balls=per_ball, beta_floor=cfg.beta_floor,
                          sigma=float(sigma))
    if fail is not None:
        return PropertyReport(name, False, witness=fail, sampling=info)
    if worst is None:
        worst = 1.0  # every ball vacuous
    return PropertyReport(name, True, {"beta": worst, "sigma": float(sigma)},
                          sampling=info)


def check_a1(phi, balls, sigma=None, cfg=None):
    return check_ada1(phi, balls, sigma=sigma, cfg=cfg, threshold="measure")


def check_local_comparability(phi, x0, theta, sigma=None, cfg=None):
    """Shrinking-ball comparability of the two-sided envelopes at x0.

    Fits, over balls B_eps(x0) with eps decreasing geometrically, the smallest
    C with esssup_B phi(., t) <= C essinf_B phi(., t) for sampled t in
    [sigma, theta].  The fitted C is nonincreasing as the balls shrink by
    nesting; the check holds when its tail has stabilized and the stabilized
    value does not blow up when theta is enlarged (bounded coefficient jumps
    pass, genuinely mismatched growth exponents fail).
    """
    cfg = cfg or config.CheckConfig()
    if sigma is None:
        sigma = require_a0(phi, cfg)
    if theta <= sigma:
        raise ArgumentError("theta must exceed the normalization constant sigma")
    x0 = np.asarray(x0, dtype=float)
    phi.domain.require_inside(x0[None], "ball center")
    eps_list = [config.CMP_EPS_START * config.CMP_EPS_RATIO ** k
                for k in range(config.CMP_EPS_COUNT)]

    def stabilized_c(th):
        cs = []
        for eps in eps_list:
            bounds = BallBounds(phi, Ball(tuple(x0), eps))
            ts = np.geomspace(sigma, th, 64)
            ratio = bounds.upper(ts) / np.maximum(bounds.lower(ts), 1e-300)
            cs.append(float(ratio.max()))
        tail = cs[-3:]
        stable = max(tail) <= (1.0 + config.CMP_STABLE_RTOL) * min(tail)
        return cs, cs[-1], stable

    cs1, c1, stable1 = stabilized_c(theta)
    cs2, c2, stable2 = stabilized_c(config.CMP_THETA_FACTOR * theta)
    info = _sampling_info(cfg, eps=eps_list, C_of_eps=cs1, C_of_eps_wide=cs2,
                          sigma=float(sigma), theta=float(theta))
    robust = c2 <= config.CMP_THETA_GROWTH * c1 + 0.5
    if stable1 and stable2 and robust:
        return PropertyReport("local-comparability", True,
                              {"C": c1, "sigma": float(sigma)}, sampling=info)
    witness = {"x": tuple(x0), "eps": eps_list[-1], "C": c1, "C_wide_theta": c2,
               "stabilized": bool(stable1 and stable2)}
    return PropertyReport("local-comparability", False, witness=witness,
                          sampling=info)


# -- equivalence ----------------------------------------------------------------------


def check_equivalence(phi, psi, cfg=None):
    """Smallest L >= 1 with phi(x, t/L) <= psi(x, t) <= phi(x, L t) on samples."""
    cfg = cfg or config.CheckConfig()
    if phi.domain != psi.domain:
        raise ArgumentError("equivalence compares functions on the same domain")
    ts = cfg.t_grid()
    pts = _sample_points(phi, cfg)
    mid = psi.eval_grid(pts, ts)

    def feasible(L):
        lo = phi.eval_grid(pts, ts / L)
        hi = phi.eval_grid(pts, ts * L)
        slack = _REL_SLACK * np.maximum(mid, 1.0)
        return bool(np.all(lo <= mid + slack) and np.all(mid <= hi + slack))

    grid = np.geomspace(1.0, cfg.scale_max, cfg.search_points)
    grid[0] = 1.0
    info = _sampling_info(cfg, x_samples=len(pts), scale_max=cfg.scale_max)
    hit = None
    for k, L in enumerate(grid):
        if feasible(L):
            hit = k
            break
    if hit is None:
        L = grid[-1]
        lo = phi.eval_grid(pts, ts / L)
        hi = phi.eval_grid(pts, ts * L)
        viol = np.maximum(lo - mid, mid - hi)
        i, j = np.unravel_index(int(np.argmax(viol)), viol.shape)
        witness = {"x": tuple(pts[i]), "t": float(ts[j]), "L": float(L),
                   "gap": float(viol[i, j])}
        return PropertyReport("equivalence", False, witness=witness, sampling=info)
    L = grid[hit] if hit == 0 else _bisect_feasible(feasible, grid[hit - 1], grid[hit])
    return PropertyReport("equivalence", True, {"L": float(L)}, sampling=info)

"""Generalized Phi-functions: families, evaluation, inverses, ball bounds.

A generalized Phi-function is a map phi(x, t) >= 0, vanishing and continuous
at t = 0, nondecreasing and coercive in t, with measurable x-dependence.
Six named families cover the usual non-standard growth energies; arbitrary
rules go through the ``custom`` family.  Values are kept finite by
restricting to doubling-type families: the extended-real range is not
represented.
"""

from dataclasses import dataclass, field

import numpy as np

from . import config
from .domain import Ball, Domain, ball_lattice
from .errors import ArgumentError, DomainError, InvariantError
from .fields import Coefficient, Const, as_coefficient

FAMILIES = (
    "variable_exponent",            # t^p(x)
    "perturbed_orlicz",             # a(x) * base(t)
    "double_phase",                 # t^p + a(x) t^q
    "degenerate_double_phase",      # t^p + a(x) t^p log(e + t)
    "triple_phase",                 # t^p + a(x) t^q + b(x) t^r
    "variable_exponent_double_phase",  # t^p(x) + a(x) t^q(x)
    "custom",
)


def _pow(t, p):
    """t**p with the 0**0 corner pinned to 0 (Phi-prefunctions vanish at 0)."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(t > 0, t ** p, 0.0)
    return out


@dataclass(frozen=True)
class PhiFunction:
    """One generalized Phi-function on a domain.

    ``exponents`` holds the constant growth exponents (p, q, r) used by the
    family; ``coefficients`` maps names in {a, b, p, q} to spatial fields.
    ``custom_eval`` is the rule (X, T) -> values for the custom family, with
    X of shape (N, d) and T broadcastable against (N,).
    """

    family: str
    domain: Domain
    exponents: dict = field(default_factory=dict)
    coefficients: dict = field(default_factory=dict)
    custom_eval: callable = None
    base_eval: callable = None      # perturbed_orlicz base t -> base(t)
    label: str = ""
    validate: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ArgumentError(f"unknown family {self.family!r}")
        coeffs = {k: as_coefficient(v) for k, v in self.coefficients.items()}
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "exponents",
                           {k: float(v) for k, v in self.exponents.items()})
        self._check_parameters()
        if self.validate:
            self._sampled_invariants()

    # -- construction checks ----------------------------------------------------

    def _check_parameters(self):
        e, c = self.exponents, self.coefficients
        fam = self.family
        if fam == "variable_exponent":
            if "p" not in c:
                raise ArgumentError("variable_exponent needs a p(x) field")
        elif fam == "perturbed_orlicz":
            if "a" not in c:
                raise ArgumentError("perturbed_orlicz needs an a(x) field")
            if self.base_eval is None and "p" not in e:
                raise ArgumentError("perturbed_orlicz needs a base rule or exponent p")
        elif fam == "double_phase":
            if not {"p", "q"} <= e.keys() or "a" not in c:
                raise ArgumentError("double_phase needs exponents p, q and field a")
            if e["q"] < e["p"]:
                raise ArgumentError("double_phase requires p <= q")
        elif fam == "degenerate_double_phase":
            if "p" not in e or "a" not in c:
                raise ArgumentError("degenerate_double_phase needs exponent p and field a")
        elif fam == "triple_phase":
            if not {"p", "q", "r"} <= e.keys() or not {"a", "b"} <= c.keys():
                raise ArgumentError("triple_phase needs exponents p, q, r and fields a, b")
            if not (e["p"] <= e["q"] <= e["r"]):
                raise ArgumentError("triple_phase requires p <= q <= r")
        elif fam == "variable_exponent_double_phase":
            if not {"p", "q"} <= c.keys() or "a" not in c:
                raise ArgumentError("variable_exponent_double_phase needs fields p, q, a")
        elif fam == "custom":
            if self.custom_eval is None:
                raise ArgumentError("custom family needs an evaluation rule")

    def _sampled_invariants(self):
        """Light construction-time check: phi(.,0)=0, monotone, coercive, a,b >= 0."""
        pts = self._domain_samples(16)
        ts = np.geomspace(1e-3, 1e3, 32)
        vals = self.eval_grid(pts, ts)
        if not np.all(np.isfinite(vals)):
            raise InvariantError("phi takes non-finite values on the sample grid")
        if np.any(vals < 0):
            raise InvariantError("phi must be nonnegative")
        if np.any(np.diff(vals, axis=1) < -1e-12 * np.maximum(vals[:, 1:], 1.0)):
            raise InvariantError("phi must be nondecreasing in t")
        at0 = self.eval_at(pts, np.zeros(len(pts)))
        if np.any(at0 != 0):
            raise InvariantError("phi(x, 0) must vanish")
        if np.any(vals[:, -1] < 1.0):
            raise InvariantError("phi fails the sampled coercivity check")
        for name in ("a", "b"):
            f = self.coefficients.get(name)
            if f is not None and np.any(f(pts) < 0):
                raise InvariantError(f"coefficient {name}(x) must be nonnegative")

    def _domain_samples(self, per_axis):
        lo, hi = self.domain.bounds
        axes = [np.linspace(lo[a], hi[a], per_axis) for a in range(self.domain.d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        pts = pts[self.domain.contains(pts)]
        return np.concatenate([pts, np.atleast_2d(self.domain.midpoint)], axis=0)

    # -- evaluation ---------------------------------------------------------------

    @property
    def is_spatially_constant(self):
        if self.family == "custom":
            return bool(self.label.startswith("const:")) or self.domain is None
        return all(c.is_constant for c in self.coefficients.values())

    def _coef(self, name, pts):
        c = self.coefficients.get(name)
        return None if c is None else c(pts)

    def eval_at(self, points, t):
        """phi(x_i, t_i): points (N, d), t scalar or (N,) -> (N,)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        tv = np.broadcast_to(np.asarray(t, dtype=float), (pts.shape[0],))
        return self._eval(pts, tv)

    def eval_grid(self, points, ts):
        """phi(x_i, t_j): points (N, d), ts (M,) -> (N, M)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        tv = np.asarray(ts, dtype=float)[None, :]
        return self._eval(pts, tv)

    def _eval(self, pts, t):
        t = np.maximum(t, 0.0)
        fam = self.family
        if fam == "variable_exponent":
            p = self._coef("p", pts)
            return _pow(t, _col(p, t))
        if fam == "perturbed_orlicz":
            a = _col(self._coef("a", pts), t)
            if self.base_eval is not None:
                return a * np.asarray(self.base_eval(t), dtype=float)
            return a * _pow(t, self.exponents["p"])
        if fam == "double_phase":
            a = _col(self._coef("a", pts), t)
            return _pow(t, self.exponents["p"]) + a * _pow(t, self.exponents["q"])
        if fam == "degenerate_double_phase":
            a = _col(self._coef("a", pts), t)
            tp = _pow(t, self.exponents["p"])
            return tp + a * tp * np.log(np.e + t)
        if fam == "triple_phase":
            a = _col(self._coef("a", pts), t)
            b = _col(self._coef("b", pts), t)
            e = self.exponents
            return _pow(t, e["p"]) + a * _pow(t, e["q"]) + b * _pow(t, e["r"])
        if fam == "variable_exponent_double_phase":
            p = _col(self._coef("p", pts), t)
            q = _col(self._coef("q", pts), t)
            a = _col(self._coef("a", pts), t)
            return _pow(t, p) + a * _pow(t, q)
        return np.asarray(self.custom_eval(pts, t), dtype=float)

    # -- spec-level operations ------------------------------------------------------

    def evaluate(self, x, t):
        """phi at a single point and scalar argument."""
        if t < 0:
            raise ArgumentError("t must be nonnegative")
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if not np.all(self.domain.contains(x)):
            raise DomainError(f"point {tuple(x.ravel())} outside the domain closure")
        return float(self.eval_at(x, t)[0])

    def left_inverse(self, x, s, tol=config.TOL_INV):
        """inf{t >= 0 : phi(x, t) >= s} by monotone bisection."""
        if s < 0:
            raise ArgumentError("s must be nonnegative")
        if s == 0:
            return 0.0
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return _left_inverse_scalar(lambda t: float(self.eval_at(x, t)[0]), s, tol)


def _col(arr, t):
    """Lift a per-point vector to broadcast against a (N, M) t-array."""
    if arr is None:
        return None
    a = np.asarray(arr, dtype=float)
    if np.ndim(t) == 2:
        return a[:, None]
    return a


def _left_inverse_scalar(fn, s, tol=config.TOL_INV, t_seed=1.0):
    """inf{t >= 0 : fn(t) >= s} for nondecreasing coercive fn, fn(0) = 0."""
    hi = t_seed
    for _ in range(2100):
        if fn(hi) >= s:
            break
        hi *= 2.0
    else:
        raise ArgumentError("left inverse bracket exhausted; function not coercive?")
    lo = 0.0
    for _ in range(200):
        if hi - lo <= tol * max(hi, 1.0):
            break
        mid = 0.5 * (lo + hi)
        if fn(mid) >= s:
            hi = mid
        else:
            lo = mid
    return hi


# -- named constructors -------------------------------------------------------------


def power_phi(p, domain=None):
    """phi(t) = t^p (x-independent)."""
    domain = domain or Domain.unit_box(1)
    return PhiFunction("variable_exponent", domain, coefficients={"p": Const(p)},
                       label=f"t^{p}")


def double_phase(p, q, a, domain=None):
    domain = domain or Domain.unit_box(1)
    return PhiFunction("double_phase", domain, exponents={"p": p, "q": q},
                       coefficients={"a": a}, label=f"t^{p}+a(x)t^{q}")


def variable_exponent(p, domain=None):
    domain = domain or Domain.unit_box(1)
    return PhiFunction("variable_exponent", domain, coefficients={"p": p},
                       label="t^p(x)")


def perturbed_orlicz(a, base=None, p=None, domain=None):
    domain = domain or Domain.unit_box(1)
    kw = {}
    if base is not None:
        kw["base_eval"] = base
    if p is not None:
        kw["exponents"] = {"p": p}
    return PhiFunction("perturbed_orlicz", domain, coefficients={"a": a},
                       label="a(x)base(t)", **kw)


def degenerate_double_phase(p, a, domain=None):
    domain = domain or Domain.unit_box(1)
    return PhiFunction("degenerate_double_phase", domain, exponents={"p": p},
                       coefficients={"a": a}, label=f"t^{p}(1+a(x)log(e+t))")


def triple_phase(p, q, r, a, b, domain=None):
    domain = domain or Domain.unit_box(1)
    return PhiFunction("triple_phase", domain, exponents={"p": p, "q": q, "r": r},
                       coefficients={"a": a, "b": b})


def variable_exponent_double_phase(p, q, a, domain=None):
    domain = domain or Domain.unit_box(1)
    return PhiFunction("variable_exponent_double_phase", domain,
                       coefficients={"p": p, "q": q, "a": a})


def custom_phi(rule, domain=None, label="custom", validate=True):
    """Custom rule (X, T) -> values; X is (N, d), T broadcastable to (N,)."""
    domain = domain or Domain.unit_box(1)
    return PhiFunction("custom", domain, custom_eval=rule, label=label,
                       validate=validate)


def scalar_phi(fn, domain=None, label="scalar", validate=True):
    """Custom x-independent rule t -> fn(t)."""

    def rule(pts, t):
        vals = np.asarray(fn(np.maximum(t, 0.0)), dtype=float)
        if np.ndim(t) == 2 and vals.shape[0] != pts.shape[0]:
            vals = np.broadcast_to(vals, (pts.shape[0],) + vals.shape[1:])
        elif np.ndim(t) < 2:
            vals = np.broadcast_to(vals, (pts.shape[0],))
        return vals

    return custom_phi(rule, domain, label=f"const:{label}", validate=validate)


# -- ball bounds and the conjugate --------------------------------------------------


def phi_bounds_on_ball(phi, ball, t, domain=None, lattice=None):
    """Sampled (essinf, esssup) of x -> phi(x, t) over ball /\\ domain.

    A deterministic lattice (>= 256 d points plus the ball center) stands in
    for the essential bounds; adequate for the continuous coefficient fields
    used throughout, and documented as an approximation.
    """
    domain = domain or phi.domain
    if lattice is None:
        lattice = ball_lattice(ball, domain)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    vals = phi.eval_grid(lattice, ts)
    lower, upper = vals.min(axis=0), vals.max(axis=0)
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(lower[0]), float(upper[0])
    return lower, upper


class BallBounds:
    """Callable essinf/esssup envelopes of phi over one ball, with inverses."""

    def __init__(self, phi, ball, domain=None):
        self.phi = phi
        self.ball = ball
        self.lattice = ball_lattice(ball, domain or phi.domain)

    def lower(self, t):
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        return self.phi.eval_grid(self.lattice, ts).min(axis=0)

    def upper(self, t):
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        return self.phi.eval_grid(self.lattice, ts).max(axis=0)

    def lower_inverse(self, s):
        return _left_inverse_scalar(lambda t: float(self.lower(t)[0]), s)

    def upper_inverse(self, s):
        return _left_inverse_scalar(lambda t: float(self.upper(t)[0]), s)


def poincare_conjugate(phi, d):
    """The companion function phi(x,t)^(d/(d-1)) * t^(-1/(d-1)), 0 at t = 0."""
    if d < 2:
        raise ArgumentError("conjugate exponent is singular for d = 1")
    ex = d / (d - 1.0)
    negex = 1.0 / (d - 1.0)

    def rule(pts, t):
        base = np.asarray(phi._eval(pts, np.maximum(t, 0.0)), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.where(t > 0, base ** ex * np.maximum(t, 1e-300) ** (-negex), 0.0)
        return out

    label = ("const:conjugate" if phi.is_spatially_constant else "conjugate")
    return PhiFunction("custom", phi.domain, custom_eval=rule, label=label,
                       validate=False)

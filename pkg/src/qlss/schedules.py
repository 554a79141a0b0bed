"""Scheduling functions f(s) that steer the interpolated Hamiltonian.

Three kinds, all strictly increasing with f(0) = 0 and f(1) = 1:

* ``vanilla``      f(s) = s.
* ``power_p``      df/ds proportional to (1 - f + f/kappa)^p, i.e. the sweep
                   slows down in proportion to a power of the gap bound.
                   Closed forms: for 1 < p <= 2,
                   f(s) = kappa/(kappa-1) [1 - (1 + s (kappa^(p-1) - 1))^(1/(1-p))];
                   for p = 1, f(s) = kappa/(kappa-1) (1 - kappa^(-s)).
                   Any constant prefactor on the gap bound cancels against the
                   normalization constant c_p, so the same forms serve every
                   matrix class.
* ``exponential``  f'(s) proportional to the smooth bump exp(-1/(s(1-s))),
                   whose derivatives of every order vanish at both endpoints.

``ode_oracle`` integrates the defining ODE with classical RK4 and a
quadrature-computed c_p; it exists to cross-validate the closed forms and
stays independent of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidP, OutOfRange

VANILLA = "vanilla"
POWER_P = "power_p"
EXPONENTIAL = "exponential"

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def bump(s):
    """exp(-1/(s(1-s))) on (0, 1), defined as 0 at the endpoints."""
    arr = np.asarray(s, dtype=float)
    out = np.zeros_like(arr)
    inside = (arr > 0.0) & (arr < 1.0)
    si = arr[inside]
    out[inside] = np.exp(-1.0 / (si * (1.0 - si)))
    return out if arr.ndim else float(out)


def adaptive_simpson(func, a: float, b: float, tol: float, max_depth: int = 48) -> float:
    """Adaptive Simpson quadrature with absolute tolerance ``tol``."""

    def simpson(x0, f0, x2, f2):
        x1 = 0.5 * (x0 + x2)
        f1 = func(x1)
        return x1, f1, (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, f0, x2, f2, whole, x1, f1, eps, depth):
        lm, flm, left = simpson(x0, f0, x1, f1)
        rm, frm, right = simpson(x1, f1, x2, f2)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return (recurse(x0, f0, x1, f1, left, lm, flm, 0.5 * eps, depth - 1)
                + recurse(x1, f1, x2, f2, right, rm, frm, 0.5 * eps, depth - 1))

    if a == b:
        return 0.0
    fa, fb = func(a), func(b)
    x1, f1, whole = simpson(a, fa, b, fb)
    return recurse(a, fa, b, fb, whole, x1, f1, tol, max_depth)


@lru_cache(maxsize=None)
def _bump_normalization(tol: float = 1e-14) -> float:
    # symmetric about 1/2; one half-interval suffices
    return 2.0 * adaptive_simpson(bump, 0.0, 0.5, 0.5 * tol)


def _bump_fractions(m: int, panels_min: int = 1024) -> np.ndarray:
    """Normalized running integral of the bump at k/m for k = 1..m.

    Composite Gauss-Legendre on at least ``panels_min`` uniform panels. The
    first half accumulates from the left and the second half from the right,
    so the values stay accurate to an ulp near both endpoints where the
    running integral is within rounding of 0 or 1.
    """
    sub = max(1, -(-panels_min // m))
    total = m * sub
    vals = np.empty(total)
    half = 0.5 / total
    chunk = 65536
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        mids = (np.arange(start, stop) + 0.5) / total
        nodes = mids[:, None] + half * _GL_NODES[None, :]
        vals[start:stop] = (bump(nodes) * _GL_WEIGHTS[None, :]).sum(axis=1) * half
    ce = _bump_normalization()
    head = np.cumsum(vals)[sub - 1::sub] / ce
    tail = np.cumsum(vals[::-1])[::-1]  # tail[k] = integral over [k/total, 1]
    tail = np.concatenate([tail[sub::sub], [0.0]]) / ce
    out = np.where(np.arange(1, m + 1) <= m // 2, head, 1.0 - tail)
    out[-1] = 1.0
    return np.minimum(out, 1.0)


def _check_s(s: float) -> float:
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise OutOfRange(f"s = {s} outside [0, 1]")
    return s


def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not kappa > 1.0:
        raise OutOfRange(f"kappa must be > 1, got {kappa}")
    return kappa


def eval_vanilla(s: float) -> float:
    """f(s) = s."""
    return _check_s(s)


def eval_power_one(kappa: float, s: float) -> float:
    """Exact p = 1 schedule: f(s) = kappa/(kappa-1) (1 - kappa^(-s))."""
    s = _check_s(s)
    kappa = _check_kappa(kappa)
    return kappa / (kappa - 1.0) * (1.0 - kappa ** (-s))


def eval_power_p(sched: Schedule, s: float) -> float:
    """Closed-form power schedule for 1 < p <= 2 (p = 1 routes to the exact
    exponential-in-s form)."""
    s = _check_s(s)
    if sched.p is None or not 1.0 <= sched.p <= 2.0:
        raise InvalidP(f"p = {sched.p} outside [1, 2]")
    kappa = _check_kappa(sched.kappa)
    if sched.p == 1.0:
        return eval_power_one(kappa, s)
    p = sched.p
    return kappa / (kappa - 1.0) * (
        1.0 - (1.0 + s * (kappa ** (p - 1.0) - 1.0)) ** (1.0 / (1.0 - p)))


def eval_exponential(sched: Schedule, s: float) -> float:
    """Normalized running integral of the smooth bump, via adaptive Simpson
    with absolute tolerance ``sched.quadrature_tol``."""
    s = _check_s(s)
    if s == 0.0:
        return 0.0
    if s == 1.0:
        return 1.0
    ce = _bump_normalization()
    # tolerance applies to the returned f value, so scale it down before the
    # normalization divides it back up
    tol = sched.quadrature_tol * ce
    # integrate from the nearer endpoint: the bump is symmetric about 1/2
    if s <= 0.5:
        return adaptive_simpson(bump, 0.0, s, tol) / ce
    return 1.0 - adaptive_simpson(bump, 0.0, 1.0 - s, tol) / ce


@dataclass(frozen=True)
class Schedule:
    """A scheduling function with its parameters.

    Use the factories ``Schedule.vanilla()``, ``Schedule.power(p, kappa)``,
    and ``Schedule.exponential()``. Instances are immutable and safe to share;
    the bump normalization is computed once per process and cached.
    """

    kind: str
    p: float | None = None
    kappa: float | None = None
    quadrature_tol: float = 1e-12

    @staticmethod
    def vanilla() -> "Schedule":
        return Schedule(kind=VANILLA)

    @staticmethod
    def power(p: float, kappa: float) -> "Schedule":
        p = float(p)
        if not 1.0 <= p <= 2.0:
            raise InvalidP(f"p = {p} outside [1, 2]")
        return Schedule(kind=POWER_P, p=p, kappa=_check_kappa(kappa))

    @staticmethod
    def exponential(quadrature_tol: float = 1e-12) -> "Schedule":
        return Schedule(kind=EXPONENTIAL, quadrature_tol=quadrature_tol)

    @property
    def label(self) -> str:
        if self.kind == VANILLA:
            return "vanilla"
        if self.kind == POWER_P:
            return f"aqc-p{self.p:g}"
        return "aqc-exp"

    @property
    def c_p(self) -> float:
        """Normalization constant of the power-schedule ODE (prefactor-free
        gap bound): the integral of (1 - u + u/kappa)^(-p) over [0, 1]."""
        if self.kind != POWER_P:
            raise InvalidP(f"c_p undefined for kind {self.kind!r}")
        kappa, p = self.kappa, self.p
        if p == 1.0:
            return kappa * math.log(kappa) / (kappa - 1.0)
        return kappa / (kappa - 1.0) * (kappa ** (p - 1.0) - 1.0) / (p - 1.0)

    @property
    def c_e(self) -> float:
        """Normalization constant of the exponential schedule."""
        if self.kind != EXPONENTIAL:
            raise InvalidP(f"c_e undefined for kind {self.kind!r}")
        return _bump_normalization()

    def __call__(self, s: float) -> float:
        if self.kind == VANILLA:
            return eval_vanilla(s)
        if self.kind == POWER_P:
            return eval_power_p(self, s)
        return eval_exponential(self, s)

    def samples(self, m: int) -> np.ndarray:
        """f evaluated on the right-endpoint grid s_k = k/m, k = 1..m.

        The exponential kind uses a vectorized composite Gauss-Legendre
        cumulative integral (cross-checked against the adaptive-Simpson
        scalar path in the test suite); the others use their closed forms.
        """
        if m < 1:
            raise OutOfRange(f"m must be >= 1, got {m}")
        s = np.arange(1, m + 1) / m
        if self.kind == VANILLA:
            return s
        if self.kind == POWER_P:
            kappa, p = self.kappa, self.p
            if p == 1.0:
                return kappa / (kappa - 1.0) * (1.0 - kappa ** (-s))
            return kappa / (kappa - 1.0) * (
                1.0 - (1.0 + s * (kappa ** (p - 1.0) - 1.0)) ** (1.0 / (1.0 - p)))
        return _bump_fractions(m)


def ode_oracle(kappa: float, p: float, grid: int = 10_000) -> np.ndarray:
    """Tabulate the power schedule by integrating its defining ODE.

    Classical fourth-order Runge-Kutta on a uniform grid of at least 10^4
    points; the normalization constant is computed by quadrature of the
    inverse gap-bound power, independently of the closed forms. Returns an
    array of (s, f) rows with f(1) = 1 to ~1e-6 or better.
    """
    kappa = _check_kappa(kappa)
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise InvalidP(f"p = {p} outside [1, 2]")
    n = max(int(grid), 10_000)
    shrink = 1.0 - 1.0 / kappa
    c_p = adaptive_simpson(lambda u: (1.0 - shrink * u) ** (-p), 0.0, 1.0, 1e-12)

    def rhs(f):
        return c_p * max(1.0 - shrink * f, 0.0) ** p

    h = 1.0 / n
    out = np.empty((n + 1, 2))
    out[0] = (0.0, 0.0)
    f = 0.0
    for k in range(n):
        k1 = rhs(f)
        k2 = rhs(f + 0.5 * h * k1)
        k3 = rhs(f + 0.5 * h * k2)
        k4 = rhs(f + h * k3)
        f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = ((k + 1) * h, f)
    return out

"""Benchmark harness: runtime searches, condition-number and accuracy sweeps,
and log-log scaling fits.

Runtimes live on a lattice of multiples of the 0.2 Trotter step so every
candidate has an integral step count. ``min_runtime`` doubles the runtime
from its starting point until the fidelity target is met and then bisects
the bracket down to a relative tolerance; the returned runtime is the
smallest lattice point found to succeed (fidelity is not guaranteed globally
monotone in T, so the search documents lattice-relative semantics: the
returned point succeeds and the surviving lower bracket end fails).

Sweep points are independent; they run on a thread pool capped by the
QLSP_THREADS environment variable and are merged in grid order, so output
is deterministic.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateFit, InvalidConfig, TargetUnreachable
from .evolution import TROTTER_STEP, TrotterPropagator, plan_for_runtime
from .hamiltonians import build_embedding
from .problems import FAMILIES, GeneratorSpec, generate
from .qaoa import OptimizerConfig, optimize
from .schedules import Schedule

METHODS = ("vanilla", "aqc-p", "aqc-exp", "qaoa")

DEFAULT_KAPPA_GRID = (5.0, 10.0, 20.0, 40.0, 80.0)
DEFAULT_EPS_GRID = (0.3, 0.1, 0.03, 0.01, 0.003)

CSV_HEADER = ("method,family,kappa,target,runtime_T,steps_M,"
              "fidelity,density_error,qaoa_depth,qaoa_runtime_metric")


@dataclass(frozen=True)
class SearchParams:
    t_init: float = 1.0
    t_max: float = 1e6
    bisection_tol: float = 0.05


@dataclass(frozen=True)
class SweepConfig:
    method: str
    family: str = "pd_laplacian"
    n_dim: int = 64
    kappa_grid: tuple = DEFAULT_KAPPA_GRID
    target_fidelity: float | None = None
    target_eps: tuple | None = None
    p: float | None = None
    qaoa_depth: int | None = None
    search: SearchParams = field(default_factory=SearchParams)

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidConfig(f"method {self.method!r} not one of {METHODS}")
        if self.family not in FAMILIES:
            raise InvalidConfig(f"family {self.family!r} not one of {FAMILIES}")
        if self.method == "aqc-p" and (self.p is None or not 1.0 <= self.p <= 2.0):
            raise InvalidConfig(f"aqc-p needs p in [1, 2], got {self.p}")
        grid = tuple(float(k) for k in self.kappa_grid)
        if any(k <= 1.0 for k in grid) or list(grid) != sorted(set(grid)):
            raise InvalidConfig("kappa_grid must be strictly increasing with all > 1")
        object.__setattr__(self, "kappa_grid", grid)
        if self.target_fidelity is not None and not 0.0 < self.target_fidelity < 1.0:
            raise InvalidConfig(f"target_fidelity {self.target_fidelity} outside (0, 1)")
        if self.target_eps is not None:
            eps = tuple(float(e) for e in self.target_eps)
            if any(not 0.0 < e < 1.0 for e in eps):
                raise InvalidConfig("target_eps entries must lie in (0, 1)")
            object.__setattr__(self, "target_eps", eps)


@dataclass(frozen=True)
class SweepPoint:
    """One CSV row of a sweep."""

    method: str
    family: str
    kappa: float
    target: float
    runtime_T: float
    steps_M: int
    fidelity: float
    density_error: float
    qaoa_depth: int | None = None
    qaoa_runtime_metric: float | None = None


@dataclass(frozen=True, eq=False)
class ScalingFit:
    exponent: float
    intercept: float
    r_squared: float
    points: tuple


@dataclass(frozen=True, eq=False)
class SweepResult:
    rows: tuple
    fits: dict
    missing: tuple = ()


def fit_loglog(points) -> ScalingFit:
    """Ordinary least squares of log T against log x.

    ``points`` is a sequence of (x, T) pairs, all positive.
    """
    pts = tuple((float(x), float(t)) for x, t in points)
    if len(pts) < 2:
        raise DegenerateFit(f"need at least 2 points, got {len(pts)}")
    if any(x <= 0 or t <= 0 for x, t in pts):
        raise DegenerateFit("all points must be positive for a log-log fit")
    lx = np.log([x for x, _ in pts])
    ly = np.log([t for _, t in pts])
    vx = lx - lx.mean()
    denom = float((vx * vx).sum())
    if denom == 0.0:
        raise DegenerateFit("all x values equal")
    slope = float((vx * (ly - ly.mean())).sum() / denom)
    intercept = float(ly.mean() - slope * lx.mean())
    resid = ly - (slope * lx + intercept)
    total = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if total == 0.0 else 1.0 - float((resid ** 2).sum()) / total
    return ScalingFit(exponent=slope, intercept=intercept, r_squared=r2, points=pts)


def _lattice(t: float) -> float:
    return TROTTER_STEP * max(1, int(round(t / TROTTER_STEP)))


def _search_runtime(propagator: TrotterPropagator, schedule: Schedule,
                    target_fidelity: float, search: SearchParams):
    """Doubling-then-bisection search on the runtime lattice.

    Returns (runtime, evolution result at that runtime).
    """
    if not 0.0 < target_fidelity < 1.0:
        raise InvalidConfig(f"target_fidelity {target_fidelity} outside (0, 1)")

    results = {}

    def run(t):
        if t not in results:
            results[t] = propagator.evolve(plan_for_runtime(t, schedule))
        return results[t]

    t = _lattice(search.t_init)
    if run(t).fidelity >= target_fidelity:
        return t, results[t]
    lo = t
    while True:
        t = _lattice(2.0 * t)
        if t > search.t_max * (1.0 + 1e-12):
            raise TargetUnreachable(
                f"no runtime <= {search.t_max:g} reaches fidelity {target_fidelity}")
        if run(t).fidelity >= target_fidelity:
            hi = t
            break
        lo = t
    while (hi - lo) > search.bisection_tol * hi and (hi - lo) > TROTTER_STEP * 1.5:
        mid = _lattice(0.5 * (lo + hi))
        if mid <= lo or mid >= hi:
            break
        if run(mid).fidelity >= target_fidelity:
            hi = mid
        else:
            lo = mid
    return hi, results[hi]


def min_runtime(emb, schedule: Schedule, target_fidelity: float,
                search: SearchParams = SearchParams(),
                propagator: TrotterPropagator | None = None) -> float:
    """Smallest lattice runtime whose evolution reaches the fidelity target."""
    prop = propagator if propagator is not None else TrotterPropagator(emb)
    t, _ = _search_runtime(prop, schedule, target_fidelity, search)
    return t


def schedule_for_method(method: str, p: float | None, kappa: float) -> Schedule:
    if method == "vanilla":
        return Schedule.vanilla()
    if method == "aqc-p":
        return Schedule.power(p, kappa)
    if method == "aqc-exp":
        return Schedule.exponential()
    raise InvalidConfig(f"no schedule for method {method!r}")


def method_label(method: str, p: float | None = None) -> str:
    return f"aqc-p{p:g}" if method == "aqc-p" else method


def qaoa_depth_for_kappa(kappa: float) -> int:
    """Depth grows linearly from 8 at kappa = 5 to 60 at kappa = 80."""
    return max(1, int(round(8.0 + 52.0 * (kappa - 5.0) / 75.0)))


def worker_count(n_tasks: int) -> int:
    cap = os.environ.get("QLSP_THREADS")
    workers = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(workers, n_tasks))


def _qaoa_point(cfg: SweepConfig, kappa: float, target_fidelity: float,
                eps_stop: float, target_label: float) -> SweepPoint:
    """One QAOA sweep point: optimize, then report the lowest-error iterate.

    The optimization stops early once the fidelity target is crossed; the
    recorded pair is the best-fidelity iterate's (runtime metric, fidelity).
    """
    inst = generate(GeneratorSpec(n_dim=cfg.n_dim, kappa=kappa, family=cfg.family))
    emb = build_embedding(inst)
    depth = cfg.qaoa_depth if cfg.qaoa_depth is not None else qaoa_depth_for_kappa(kappa)
    report = optimize(emb, depth, eps_stop,
                      OptimizerConfig(early_stop_fidelity=target_fidelity))
    rows = list(report.history)
    rows.append((report.iterations + 1, report.objective, report.fidelity,
                 report.runtime_metric, 0.0))
    best = max(rows, key=lambda r: r[2])
    _, _, fid, metric, _ = best
    if fid < target_fidelity:
        raise TargetUnreachable(
            f"qaoa depth {depth} reached fidelity {fid:.6f} < {target_fidelity}")
    return SweepPoint(
        method="qaoa", family=cfg.family, kappa=kappa, target=target_label,
        runtime_T=metric, steps_M=2 * depth, fidelity=fid,
        density_error=float(np.sqrt(max(0.0, 1.0 - fid))),
        qaoa_depth=depth, qaoa_runtime_metric=metric)


def _aqc_point(cfg: SweepConfig, kappa: float, target_fidelity: float,
               target_label: float) -> SweepPoint:
    inst = generate(GeneratorSpec(n_dim=cfg.n_dim, kappa=kappa, family=cfg.family))
    emb = build_embedding(inst)
    schedule = schedule_for_method(cfg.method, cfg.p, kappa)
    prop = TrotterPropagator(emb)
    t, res = _search_runtime(prop, schedule, target_fidelity, cfg.search)
    return SweepPoint(
        method=method_label(cfg.method, cfg.p), family=cfg.family, kappa=kappa,
        target=target_label, runtime_T=t,
        steps_M=plan_for_runtime(t, schedule).step_count_M,
        fidelity=res.fidelity, density_error=res.density_error)


def _run_points(tasks):
    """Run point closures on a bounded thread pool, preserving order.

    Returns (rows, missing) where missing holds (kappa_or_eps, reason) pairs
    for points whose target was unreachable.
    """
    rows, missing = [], []
    with ThreadPoolExecutor(max_workers=worker_count(len(tasks))) as pool:
        futures = [pool.submit(fn) for _, fn in tasks]
        for (key, _), fut in zip(tasks, futures):
            try:
                rows.append(fut.result())
            except TargetUnreachable as exc:
                missing.append((key, str(exc)))
    return rows, missing


def sweep_kappa(cfg: SweepConfig) -> SweepResult:
    """Minimum runtime against condition number at a fixed fidelity target.

    Emits one row per kappa and fits log T against log kappa. Unreachable
    points are recorded as missing; the fit needs at least 4 surviving rows.
    """
    if cfg.target_fidelity is None:
        raise InvalidConfig("sweep_kappa needs target_fidelity")
    target = cfg.target_fidelity
    eps_stop = float(np.sqrt(1.0 - target))

    def make_task(kappa):
        if cfg.method == "qaoa":
            return lambda: _qaoa_point(cfg, kappa, target, eps_stop, target)
        return lambda: _aqc_point(cfg, kappa, target, target)

    tasks = [(kappa, make_task(kappa)) for kappa in cfg.kappa_grid]
    rows, missing = _run_points(tasks)
    fits = {}
    if len(rows) >= 4:
        fits["kappa"] = fit_loglog([(r.kappa, r.runtime_T) for r in rows])
    return SweepResult(rows=tuple(rows), fits=fits, missing=tuple(missing))


def sweep_epsilon(cfg: SweepConfig, kappa_fixed: float = 10.0) -> SweepResult:
    """Minimum runtime against the density-error target at fixed kappa.

    A density error of eps corresponds to fidelity 1 - eps^2. Fits log T
    against log(1/eps) always and against log(log(1/eps)) as well (the
    relevant axis for the exponential schedule and QAOA).
    """
    if cfg.target_eps is None:
        raise InvalidConfig("sweep_epsilon needs target_eps")

    def make_task(eps):
        fid_target = 1.0 - eps * eps
        if cfg.method == "qaoa":
            return lambda: _qaoa_point(cfg, kappa_fixed, fid_target, eps, eps)
        return lambda: _aqc_point(
            SweepConfig(method=cfg.method, family=cfg.family, n_dim=cfg.n_dim,
                        kappa_grid=(kappa_fixed,), target_fidelity=fid_target,
                        p=cfg.p, qaoa_depth=cfg.qaoa_depth, search=cfg.search),
            kappa_fixed, fid_target, eps)

    tasks = [(eps, make_task(eps)) for eps in cfg.target_eps]
    rows, missing = _run_points(tasks)
    fits = {}
    if len(rows) >= 4:
        fits["inv_eps"] = fit_loglog([(1.0 / r.target, r.runtime_T) for r in rows])
        fits["log_inv_eps"] = fit_loglog(
            [(np.log(1.0 / r.target), r.runtime_T) for r in rows])
    return SweepResult(rows=tuple(rows), fits=fits, missing=tuple(missing))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join(_cell(v) for v in (
            r.method, r.family, r.kappa, r.target, r.runtime_T, r.steps_M,
            r.fidelity, r.density_error, r.qaoa_depth, r.qaoa_runtime_metric)))
    return "\n".join(lines) + "\n"


def write_sweep_csv(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))


def sidecar_payload(cfg: SweepConfig, result: SweepResult, extra: dict | None = None) -> dict:
    fits = {name: {"exponent": f.exponent, "intercept": f.intercept,
                   "r_squared": f.r_squared, "points": list(f.points)}
            for name, f in result.fits.items()}
    payload = {"config": asdict(cfg), "fits": fits,
               "missing": [list(m) for m in result.missing]}
    if extra:
        payload.update(extra)
    return payload


def write_sidecar_json(path, cfg: SweepConfig, result: SweepResult,
                       extra: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(sidecar_payload(cfg, result, extra), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_sweep_csv(path):
    """Parse a sweep CSV back into (x-column candidates, runtime) rows."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise InvalidConfig(f"unexpected CSV header in {path}")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        out.append({"kappa": float(parts[2]), "target": float(parts[3]),
                    "runtime_T": float(parts[4])})
    return out

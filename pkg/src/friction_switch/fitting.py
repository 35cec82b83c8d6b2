"""Least-squares estimation of friction-switch parameters from a device curve.

The model is evaluated at the device-curve loads with both material branches
interpolated from the measured (or synthesized) characteristic curves. Free
parameters are any subset of ``f_thr`` (threshold force), ``width``
(transition range width) and ``w`` (blend weight).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np
from scipy import optimize

from . import kernels
from .errors import DomainError, InsufficientDataError, UnderdeterminedError
from .model import FrictionCurve, SwitchModelParams

__all__ = [
    "PARAMETER_NAMES",
    "DEFAULT_BOUNDS",
    "FitProblem",
    "FitResult",
    "residuals",
    "fit_switch_model",
    "fit_quality",
]

PARAMETER_NAMES = ("f_thr", "width", "w")
DEFAULT_BOUNDS = {"f_thr": (0.0, 60.0), "width": (0.1, 60.0), "w": (0.0, 0.5)}


def _get(params: SwitchModelParams, name: str) -> float:
    if name == "f_thr":
        return params.threshold_force
    if name == "width":
        return params.width
    return params.weight


@dataclass(frozen=True, eq=False)
class FitProblem:
    """Data and parameterization of one fit.

    ``fixed`` supplies every non-free parameter; when it is ``None`` the
    initial guess passed to :func:`fit_switch_model` is used instead.
    """

    device_curve: FrictionCurve
    low_curve: FrictionCurve
    high_curve: FrictionCurve
    free_parameters: tuple[str, ...] = PARAMETER_NAMES
    fixed: SwitchModelParams | None = None
    bounds: Mapping[str, tuple[float, float]] = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    weighted: bool = False
    _branches: tuple = field(init=False, repr=False)

    def __post_init__(self):
        free = tuple(self.free_parameters)
        unknown = set(free) - set(PARAMETER_NAMES)
        if unknown:
            raise DomainError(f"unknown free parameters {sorted(unknown)}; choose from {PARAMETER_NAMES}")
        if len(set(free)) != len(free):
            raise DomainError("duplicate free parameters")
        # canonical order keeps results independent of how the caller listed them
        object.__setattr__(self, "free_parameters", tuple(p for p in PARAMETER_NAMES if p in free))
        bounds = dict(DEFAULT_BOUNDS)
        bounds.update(self.bounds)
        for name, (lo, hi) in bounds.items():
            if not lo <= hi:
                raise DomainError(f"empty bound for {name}: [{lo}, {hi}]")
        w_lo, w_hi = bounds["w"]
        if w_lo < 0 or w_hi > 0.5:
            raise DomainError("w bounds must lie within [0, 0.5]")
        if bounds["width"][0] <= 0:
            raise DomainError("width bounds must be > 0")
        object.__setattr__(self, "bounds", bounds)
        loads = self.device_curve.loads
        f_low = self.low_curve.interpolate(loads)
        f_high = self.high_curve.interpolate(loads)
        object.__setattr__(self, "_branches", (f_low, f_high))

    @property
    def n_samples(self) -> int:
        return len(self.device_curve)

    def compose(self, base: SwitchModelParams, values: Sequence[float]) -> SwitchModelParams:
        """Parameters with the free entries of ``base`` replaced by ``values``."""
        named = dict(zip(self.free_parameters, (float(v) for v in values)))
        params = base
        if "f_thr" in named or "w" in named:
            params = replace(
                params,
                threshold_force=named.get("f_thr", params.threshold_force),
                weight=named.get("w", params.weight),
            )
        if "width" in named:
            params = params.with_width(named["width"])
        return params

    def model(self, params: SwitchModelParams) -> np.ndarray:
        f_low, f_high = self._branches
        return kernels.switch_blend(
            self.device_curve.loads, f_low, f_high, params.weight, params.threshold_force, params.scale
        )


@dataclass(frozen=True)
class FitResult:
    params: SwitchModelParams
    rmse: float
    r_squared: float
    iterations: int
    converged: bool
    history: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        p = self.params
        return {
            "params": {
                "mu_low": p.mu_low,
                "mu_high": p.mu_high,
                "w": p.weight,
                "f_thr_N": p.threshold_force,
                "f_r_width_N": p.width,
                "alpha_rad": p.wrap_angle,
            },
            "rmse_N": self.rmse,
            "r_squared": self.r_squared,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FitResult":
        return cls(
            params=params_from_dict(data["params"]),
            rmse=float(data["rmse_N"]),
            r_squared=float(data["r_squared"]),
            iterations=int(data["iterations"]),
            converged=bool(data["converged"]),
        )


def params_from_dict(d: Mapping) -> SwitchModelParams:
    base = SwitchModelParams(
        mu_low=float(d["mu_low"]),
        mu_high=float(d["mu_high"]),
        weight=float(d["w"]),
        threshold_force=float(d["f_thr_N"]),
        wrap_angle=float(d["alpha_rad"]),
    )
    return base.with_width(float(d["f_r_width_N"]))


def residuals(params: SwitchModelParams, problem: FitProblem) -> np.ndarray:
    """Model minus measured friction at each device load.

    Divided by the per-sample sigma when ``problem.weighted`` and every sigma
    is positive.
    """
    r = problem.model(params) - problem.device_curve.friction
    sigma = problem.device_curve.sigma
    if problem.weighted and np.all(sigma > 0):
        r = r / sigma
    return r


def fit_quality(result: FitResult | SwitchModelParams, problem: FitProblem) -> tuple[float, float]:
    """(rmse, r_squared) of the unweighted fit over the device samples.

    ``r_squared`` is NaN when the device curve has zero variance.
    """
    params = result.params if isinstance(result, FitResult) else result
    y = problem.device_curve.friction
    if y.size < 2:
        raise InsufficientDataError("r_squared needs at least 2 device samples")
    res = problem.model(params) - y
    ss_res = float(np.dot(res, res))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    rmse = math.sqrt(ss_res / y.size)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else float("nan")
    return rmse, r2


def _finish(params, problem, iterations, converged, history=()):
    rmse, r2 = fit_quality(params, problem)
    return FitResult(params, rmse, r2, int(iterations), bool(converged), tuple(history))


def fit_switch_model(
    problem: FitProblem,
    initial: SwitchModelParams | None = None,
    max_iterations: int = 5000,
    tolerance: float = 1e-12,
    method: str = "nelder-mead",
) -> FitResult:
    """Minimize the squared residuals over the free parameters within bounds.

    Parameters
    ----------
    problem : FitProblem
    initial : SwitchModelParams, optional
        Starting point; defaults to ``problem.fixed`` or the reference
        parameters. Values are clipped into the bounds.
    max_iterations : int
        Iteration budget. Exhausting it yields ``converged=False``.
    tolerance : float
        Termination tolerance on parameters (as a fraction of each bound
        width) and on the objective (relative to its starting value).
    method : {"nelder-mead", "trf"}
        Bounded simplex search, or scipy's trust-region reflective
        least squares with finite-difference Jacobian.

    Returns
    -------
    FitResult
        ``history`` holds the best objective after every simplex iteration
        (empty for ``"trf"``).
    """
    initial = initial if initial is not None else (problem.fixed or SwitchModelParams())
    base = problem.fixed or initial
    free = problem.free_parameters
    need = max(3, len(free) + 1)
    if problem.n_samples < need:
        raise UnderdeterminedError(
            f"{problem.n_samples} device samples cannot determine {len(free)} free parameters (need {need})"
        )
    if not free:
        return _finish(base, problem, 0, True)

    lo = np.array([problem.bounds[p][0] for p in free])
    hi = np.array([problem.bounds[p][1] for p in free])
    span = np.where(hi > lo, hi - lo, 1.0)
    x0 = np.clip([_get(initial, p) for p in free], lo, hi)
    u0 = (x0 - lo) / span

    def unpack(u):
        return problem.compose(base, np.clip(lo + np.asarray(u) * span, lo, hi))

    if method == "trf":
        fun = lambda u: residuals(unpack(u), problem)
        res = optimize.least_squares(
            fun,
            u0,
            bounds=(np.zeros_like(u0), np.ones_like(u0)),
            method="trf",
            x_scale=1.0,
            ftol=tolerance,
            xtol=tolerance,
            gtol=tolerance,
            max_nfev=max_iterations,
        )
        return _finish(unpack(res.x), problem, res.nfev, res.status > 0)
    if method != "nelder-mead":
        raise ValueError(f"unknown method {method!r}")

    def objective(u):
        r = residuals(unpack(u), problem)
        return float(np.dot(r, r))

    f0 = objective(u0)
    simplex = [u0]
    for i in range(len(free)):
        v = u0.copy()
        v[i] = v[i] + 0.05 if v[i] + 0.05 <= 1.0 else v[i] - 0.05
        simplex.append(v)
    history = []

    def record(intermediate_result):
        history.append(float(intermediate_result.fun))

    res = optimize.minimize(
        objective,
        u0,
        method="Nelder-Mead",
        bounds=[(0.0, 1.0)] * len(free),
        callback=record,
        options={
            "initial_simplex": np.array(simplex),
            "xatol": tolerance,
            "fatol": tolerance * max(f0, np.finfo(float).tiny),
            "maxiter": max_iterations,
            "maxfev": 4 * max_iterations,
            "adaptive": False,
        },
    )
    return _finish(unpack(res.x), problem, res.nit, res.status == 0, history)

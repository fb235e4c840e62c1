"""
Fit polar traces to triangular spirals and baseline spirals.

A trace is a sequence of :class:`PolarSample` with strictly increasing,
unwrapped ``theta`` (radians) and positive ``r``. All residuals are radial:
``r_observed - r_model`` along each sample's own ray.

The triangular fit enumerates candidate mods. For a fixed mod and phase
the chord polyline is linear in the seed, so the seed is profiled out in
closed form and only the phase is searched (coarse grid, then a bounded
derivative-free refinement).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .baselines import HlsParams, LogSpiralParams, golden_growth, hls_radius, log_spiral_radius
from .core import SpiralSpec, _polyline_unit, spec_from_mod

__all__ = [
    "PolarSample",
    "FitResult",
    "Classification",
    "DegenerateTraceError",
    "MOD_LIMITS",
    "DEFAULT_MOD_RANGE",
    "as_arrays",
    "unwrap_angles",
    "sample_polyline",
    "fit_log_spiral",
    "fit_golden_spiral",
    "fit_hls",
    "phi0_from_growth",
    "fit_triangular",
    "classify_mod",
    "candidate_mods",
]

MOD_LIMITS = (6, 220)
DEFAULT_MOD_RANGE = (6, 40)
# growth per radian below which a trace is treated as a circle
_MIN_GROWTH = 1e-9


class PolarSample(NamedTuple):
    theta: float
    r: float


class DegenerateTraceError(ValueError):
    """The trace has no usable radial growth (e.g. a circle)."""


@dataclass
class FitResult:
    """Outcome of fitting one model family to a trace.

    ``kind`` is one of ``"triangular"``, ``"log"``, ``"golden"`` or
    ``"hls"``; ``params`` is the matching :class:`SpiralSpec`,
    :class:`LogSpiralParams` or :class:`HlsParams`. For triangular fits
    ``candidate_scores`` maps every tried mod to its best rms and
    ``classified_mod`` is their argmin (smaller mod on ties).
    """

    kind: str
    params: object
    theta: np.ndarray
    r: np.ndarray
    model_r: np.ndarray
    residuals: np.ndarray
    rms_error: float
    classified_mod: int | None = None
    candidate_scores: dict = field(default_factory=dict)


class Classification(NamedTuple):
    mod: int
    confidence: float
    continuous_mod: float
    fit: FitResult


def unwrap_angles(theta):
    """Unwrap raw angles in [-pi, pi], assuming consecutive samples differ by less than half a turn."""
    return np.unwrap(np.asarray(theta, dtype=float))


def as_arrays(samples, min_count=1):
    """Validate a trace and return ``(theta, r)`` float arrays."""
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ValueError("trace is empty")
    arr = arr.reshape(-1, 2)
    theta, r = arr[:, 0].copy(), arr[:, 1].copy()
    if len(theta) < min_count:
        raise ValueError(f"need at least {min_count} samples, got {len(theta)}")
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(r))):
        raise ValueError("trace contains non-finite values")
    if np.any(r <= 0):
        raise ValueError(f"all radii must be positive (sample {int(np.argmin(r))})")
    if np.any(np.diff(theta) <= 0):
        raise ValueError("theta must be strictly increasing; unwrap it first")
    return theta, r


def _result(kind, params, theta, r, model_r, **extra):
    resid = r - model_r
    return FitResult(
        kind=kind,
        params=params,
        theta=theta,
        r=r,
        model_r=model_r,
        residuals=resid,
        rms_error=float(np.sqrt(np.mean(resid**2))),
        **extra,
    )


def sample_polyline(spec: SpiralSpec, turns=3.0, per_triangle=8, offset=0.0,
                    noise=0.0, rng=None) -> list[PolarSample]:
    """Synthetic trace along a spiral's chord polyline.

    Samples sit at ``phase + (k + offset) * phi0 / per_triangle``;
    ``offset=0`` hits every vertex, ``per_triangle=1, offset=0.5`` gives
    mid-chord samples. ``noise`` is the relative standard deviation of a
    multiplicative gaussian radial error drawn from ``rng``.
    """
    count = int(round(turns * spec.mod * per_triangle))
    local = (np.arange(count) + offset) * spec.phi0 / per_triangle
    r = spec.seed * _polyline_unit(local, spec.phi0)
    if noise:
        rng = np.random.default_rng(rng)
        r = r * (1.0 + noise * rng.standard_normal(count))
    return [PolarSample(float(t), float(x)) for t, x in zip(local + spec.phase, r)]


def _linfit(x, y):
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = np.dot(dx, dx)
    slope = np.dot(dx, y - ym) / sxx if sxx > 0 else 0.0
    return ym - slope * xm, slope


def fit_log_spiral(samples) -> FitResult:
    """Least squares of ``ln r`` against ``theta``."""
    theta, r = as_arrays(samples, min_count=3)
    intercept, slope = _linfit(theta, np.log(r))
    params = LogSpiralParams(float(np.exp(intercept)), float(slope))
    return _result("log", params, theta, r, log_spiral_radius(params, theta))


def fit_golden_spiral(samples) -> FitResult:
    """Log spiral with the growth pinned to the golden quarter-turn ratio; only the scale is fitted."""
    theta, r = as_arrays(samples, min_count=1)
    b = golden_growth()
    params = LogSpiralParams(float(np.exp(np.mean(np.log(r) - b * theta))), b)
    return _result("golden", params, theta, r, log_spiral_radius(params, theta))


def _hls_inner(theta, r, r0):
    a_l, b_l = _linfit(theta, np.log(r - r0))
    model = r0 + np.exp(a_l + b_l * theta)
    return a_l, b_l, float(np.sum((r - model) ** 2))


def fit_hls(samples, grid=200) -> FitResult:
    """Fit ``ln(r - r0) = A_l + B_l theta``.

    ``r0`` is searched over ``[0, min(r))`` (grid, then bounded Brent) with
    an inner linear regression for ``A_l`` and ``B_l``.
    """
    theta, r = as_arrays(samples, min_count=4)
    rmin = float(r.min())
    top = rmin * (1.0 - 1e-9)
    cands = np.linspace(0.0, top, grid)
    sse = np.array([_hls_inner(theta, r, c)[2] for c in cands])
    sse = np.where(np.isfinite(sse), sse, np.inf)
    i = int(np.argmin(sse))
    lo, hi = cands[max(i - 1, 0)], cands[min(i + 1, grid - 1)]
    best_r0, best_sse = cands[i], sse[i]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda c: _hls_inner(theta, r, c)[2],
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-12 * max(rmin, 1.0)},
        )
        if np.isfinite(res.fun) and res.fun < best_sse:
            best_r0, best_sse = float(res.x), res.fun
    a_l, b_l, _ = _hls_inner(theta, r, best_r0)
    params = HlsParams(float(best_r0), float(a_l), float(b_l))
    return _result("hls", params, theta, r, hls_radius(params, theta))


def _growth(phi):
    # ln(sec phi) / phi, accurate for small phi
    s = math.sin(phi / 2.0)
    return -math.log1p(-2.0 * s * s) / phi


def phi0_from_growth(b: float, tol=1e-12) -> float:
    """Apex angle whose envelope grows by ``b`` per radian.

    Solves ``ln(sec phi0) / phi0 = b`` on ``(0, pi/2)`` by bisection; the
    left side increases monotonically from 0 to infinity.
    """
    if not b > 0:
        raise ValueError(f"growth must be positive, got {b}")
    lo, hi = 0.0, float(np.nextafter(math.pi / 2, 0.0))
    if b >= _growth(hi):
        raise ValueError(f"growth {b} exceeds the largest representable value {_growth(hi)}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _growth(mid) < b:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def candidate_mods(mod_range=DEFAULT_MOD_RANGE, mods=None) -> list[int]:
    """Resolve the candidate mod list from an inclusive interval or an explicit set."""
    if mods is None:
        lo, hi = mod_range
        if lo % 2 or hi % 2:
            raise ValueError(f"mod range bounds must be even, got {mod_range}")
        mods = range(int(lo), int(hi) + 1, 2)
    out = sorted({int(m) for m in mods})
    if not out:
        raise ValueError("mod range is empty")
    bad = [m for m in out if m % 2 or not MOD_LIMITS[0] <= m <= MOD_LIMITS[1]]
    if bad:
        raise ValueError(
            f"candidate mods must be even and within {list(MOD_LIMITS)}, got {bad}"
        )
    return out


def _profile(theta, r, phi0, delta):
    """SSE with the seed solved in closed form, for an array of phases."""
    delta = np.atleast_1d(delta)
    g = _polyline_unit(theta[None, :] - delta[:, None], phi0)
    a = (g @ r) / np.einsum("ij,ij->i", g, g)
    sse = np.sum((r[None, :] - a[:, None] * g) ** 2, axis=1)
    return a, sse


def _dsse_dphase(theta, r, phi0, delta):
    local = theta - delta
    g = _polyline_unit(local, phi0)
    psi = local - phi0 * np.floor(local / phi0)
    a = np.dot(g, r) / np.dot(g, g)
    # seed is profiled, so only the explicit phase dependence contributes
    return 2.0 * a * np.sum((r - a * g) * g * np.tan(psi))


def _polish_phase(theta, r, phi0, delta, step):
    # Brent on the SSE stalls near sqrt(eps); the stationarity condition
    # resolves the phase to working precision.
    h = 1e-3 * step
    lo, hi = delta - h, delta + h
    try:
        flo, fhi = _dsse_dphase(theta, r, phi0, lo), _dsse_dphase(theta, r, phi0, hi)
        if not (np.isfinite(flo) and np.isfinite(fhi)) or flo * fhi > 0:
            return delta
        cand = optimize.brentq(lambda d: _dsse_dphase(theta, r, phi0, d), lo, hi,
                               xtol=1e-300, rtol=4 * np.finfo(float).eps)
    except (ValueError, RuntimeError):
        return delta
    if _profile(theta, r, phi0, cand)[1][0] <= _profile(theta, r, phi0, delta)[1][0]:
        return cand
    return delta


def _fit_one_mod(theta, r, mod, grid):
    phi0 = 2.0 * math.pi / mod
    deltas = np.linspace(0.0, phi0, grid, endpoint=False)
    _, sse = _profile(theta, r, phi0, deltas)
    i = int(np.argmin(sse))
    step = phi0 / grid
    best_d, best_sse = deltas[i], sse[i]
    res = optimize.minimize_scalar(
        lambda d: _profile(theta, r, phi0, d)[1][0],
        bounds=(best_d - step, best_d + step),
        method="bounded",
        options={"xatol": 1e-14},
    )
    if res.fun <= best_sse:
        best_d = float(res.x)
    best_d = _polish_phase(theta, r, phi0, best_d, step)
    # canonical phase in [0, phi0); shifting by whole triangles rescales the seed
    best_d -= math.floor(best_d / phi0) * phi0
    if best_d >= phi0 * (1.0 - 1e-12):
        best_d = 0.0
    a, sse = _profile(theta, r, phi0, best_d)
    return float(a[0]), best_d, float(sse[0])


def fit_triangular(samples, mod_range=DEFAULT_MOD_RANGE, *, mods=None, grid=64,
                   n_jobs=1) -> FitResult:
    """Best triangular spiral for a trace.

    For each candidate mod the seed and phase (in ``[0, 2*pi/mod)``) that
    minimise the radial squared error to the chord polyline are found; the
    winning mod has the smallest rms, ties going to the smaller mod.

    Parameters
    ----------
    samples : sequence of PolarSample or (N, 2) array_like
    mod_range : (int, int)
        Inclusive interval of even mods to try.
    mods : iterable of int, optional
        Explicit candidate set; overrides ``mod_range``.
    grid : int
        Coarse phase grid size per mod before refinement.
    n_jobs : int
        Threads used to evaluate candidates. Output does not depend on it.
    """
    theta, r = as_arrays(samples, min_count=2)
    cands = candidate_mods(mod_range, mods)

    def work(m):
        return _fit_one_mod(theta, r, m, grid)

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as ex:
            fits = list(ex.map(work, cands))
    else:
        fits = [work(m) for m in cands]

    n = len(r)
    scores = {m: math.sqrt(sse / n) for m, (_, _, sse) in zip(cands, fits)}
    best = min(cands, key=lambda m: (scores[m], m))
    seed, phase, _ = fits[cands.index(best)]
    spec = spec_from_mod(best, seed=seed, phase=phase)
    model = seed * _polyline_unit(theta - phase, spec.phi0)
    return _result("triangular", spec, theta, r, model,
                   classified_mod=best, candidate_scores=scores)


def classify_mod(samples, mod_range=DEFAULT_MOD_RANGE, *, mods=None, n_jobs=1) -> Classification:
    """Best-matching mod with a confidence in ``[0, 1)``.

    Confidence is the relative rms gap between the runner-up and the
    winner. ``continuous_mod`` is ``2*pi / phi0`` for the apex angle whose
    envelope matches the free log-spiral growth of the trace.

    Raises
    ------
    DegenerateTraceError
        If the trace shows no radial growth.
    """
    growth = fit_log_spiral(samples).params.growth
    if growth <= _MIN_GROWTH:
        raise DegenerateTraceError(
            f"trace has no radial growth (log-spiral growth {growth:.3g} per radian)"
        )
    fit = fit_triangular(samples, mod_range, mods=mods, n_jobs=n_jobs)
    ranked = sorted(fit.candidate_scores.items(), key=lambda kv: (kv[1], kv[0]))
    confidence = 0.0
    if len(ranked) > 1 and ranked[1][1] > 0:
        confidence = (ranked[1][1] - ranked[0][1]) / ranked[1][1]
    continuous = 2.0 * math.pi / phi0_from_growth(growth)
    return Classification(fit.classified_mod, float(confidence), continuous, fit)

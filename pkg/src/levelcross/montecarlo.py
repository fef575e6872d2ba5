"""
levelcross.montecarlo
=====================

Independent oracles for the closed-form crossing statistics:

* exact-discretization path simulation for the two linear SDE systems
  (damped oscillator, OU-driven mean reversion) and circulant-embedding
  sampling for arbitrary kernels, with vectorized crossing counting and a
  reproducible per-trial substream RNG scheme;
* brute-force numerical integration of the pre-closed-form definitions:
  the 2D velocity integrals of the excess integrands, the canonical
  wedge/plane integrals behind the closed forms, and the finite-horizon
  variance assembled from the brute-force integrand.

The brute-force integrand computes the density difference f_Q - f_P f_P
pointwise via expm1 rather than subtracting the two integrals afterwards;
at strongly decorrelated lags the difference is dozens of orders of
magnitude below either term, and only the pointwise form keeps it to full
relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.integrate import dblquad, nquad, quad
from scipy.linalg import expm, solve_lyapunov
from scipy.special import erfcx as _erfcx

from .crossings import CrossingMode, DegenerateLagError, _mode
from .kernels import Kernel
from .special import erf, erfc, owens_t

__all__ = [
    "SimConfig",
    "SimEstimate",
    "SimulationConfigError",
    "simulate_sdho_paths",
    "simulate_ou_system_paths",
    "simulate_kernel_paths",
    "count_crossings",
    "estimate_stats",
    "bruteforce_integrand_up",
    "bruteforce_integrand_total",
    "bruteforce_theorem_integrals",
    "theorem_up_closed_form",
    "theorem_total_closed_form",
    "bruteforce_variance",
    "LEMMA_CHECKS",
    "lemma_residuals",
]

_SQRT_PI = math.sqrt(math.pi)


class SimulationConfigError(ValueError):
    """Invalid simulation configuration or failed transition-matrix setup."""


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo experiment: system, window, step, trials, seed, level."""

    system: str                       # "sdho" | "ou" | "kernel"
    params: dict = field(default_factory=dict)
    kernel: Kernel | None = None      # required for system="kernel"
    T: float = 100.0
    dt: float = 0.01
    trials: int = 1000
    seed: int = 0
    u: float = 0.0
    mode: CrossingMode = CrossingMode.UP

    def __post_init__(self):
        if self.dt <= 0.0 or self.T <= 0.0:
            raise SimulationConfigError("T and dt must be > 0")
        if self.trials < 2:
            raise SimulationConfigError("need at least 2 trials")
        tau_fast = self._tau_fast()
        if self.dt > 0.05 * tau_fast:
            raise SimulationConfigError(
                f"dt={self.dt} too coarse: must be <= 0.05 * tau_fast = {0.05 * tau_fast}"
            )

    def _tau_fast(self) -> float:
        if self.system == "sdho":
            return 1.0 / self.params["omega0"]
        if self.system == "ou":
            return min(self.params["tau_f"], self.params["tau_e"])
        if self.system == "kernel":
            if self.kernel is None:
                raise SimulationConfigError("system='kernel' requires a kernel")
            return self.kernel.tau_fast
        raise SimulationConfigError(f"unknown system {self.system!r}")

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))


@dataclass(frozen=True)
class SimEstimate:
    mean: float
    variance: float
    fano: float
    se_mean: float
    se_variance: float
    se_fano: float
    trials: int
    total_crossings: int


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-style substream: trial i is identical regardless of scheduling."""
    return np.random.Generator(np.random.Philox(key=np.random.SeedSequence(
        entropy=seed, spawn_key=(trial,)
    ).generate_state(2, np.uint64)))


def _linear_system(config: SimConfig):
    """Drift matrix, diffusion outer product, stationary covariance."""
    if config.system == "sdho":
        w = config.params["omega0"]
        z = config.params["zeta"]
        th = config.params["theta"]
        if w <= 0 or th <= 0 or z <= 0:
            raise SimulationConfigError("omega0, zeta, theta must be > 0")
        drift = np.array([[0.0, 1.0], [-w * w, -2.0 * z * w]])
        noise2 = 4.0 * z * w * th
        diffusion = np.array([[0.0, 0.0], [0.0, noise2]])
        stationary = np.diag([th / w**2, th])
        return drift, diffusion, stationary
    if config.system == "ou":
        sig = config.params["sigma"]
        tf = config.params["tau_f"]
        te = config.params["tau_e"]
        if sig <= 0 or tf <= 0 or te <= 0:
            raise SimulationConfigError("sigma, tau_f, tau_e must be > 0")
        drift = np.array([[-1.0 / tf, 0.0], [1.0 / te, -1.0 / te]])
        diffusion = np.array([[2.0 * sig * sig / tf, 0.0], [0.0, 0.0]])
        stationary = solve_lyapunov(drift, -diffusion)
        return drift, diffusion, stationary
    raise SimulationConfigError(f"no linear system for {config.system!r}")


def _transition(config: SimConfig):
    """Exact one-step propagator and conditional-noise Cholesky factor."""
    drift, _, stationary = _linear_system(config)
    prop = expm(drift * config.dt)
    cond_cov = stationary - prop @ stationary @ prop.T
    cond_cov = 0.5 * (cond_cov + cond_cov.T)
    try:
        chol_station = np.linalg.cholesky(stationary)
        chol_cond = np.linalg.cholesky(cond_cov)
    except np.linalg.LinAlgError as exc:
        raise SimulationConfigError(
            f"transition covariance not positive definite (extreme parameters): {exc}"
        ) from exc
    return prop, chol_cond, chol_station


_CHUNK = 256


def _linear_chunks(config: SimConfig, observe_row: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (first_trial_index, block) with block shape (n_steps+1, chunk)."""
    prop, chol_cond, chol_station = _transition(config)
    n = config.n_steps
    for start in range(0, config.trials, _CHUNK):
        stop = min(start + _CHUNK, config.trials)
        width = stop - start
        noise = np.empty((width, n + 1, 2))
        for j in range(width):
            noise[j] = _trial_rng(config.seed, start + j).standard_normal((n + 1, 2))
        init = chol_station @ noise[:, 0, :].T       # (2, width)
        block = np.empty((n + 1, width))
        state = init
        block[0] = state[observe_row]
        step_noise = chol_cond @ noise[:, 1:, :].transpose(2, 1, 0).reshape(2, -1)
        step_noise = step_noise.reshape(2, n, width)
        for i in range(n):
            state = prop @ state + step_noise[:, i, :]
            block[i + 1] = state[observe_row]
        yield start, block


def _paths_from_chunks(chunks) -> Iterator[np.ndarray]:
    for _, block in chunks:
        for j in range(block.shape[1]):
            yield np.ascontiguousarray(block[:, j])


def simulate_sdho_paths(config: SimConfig) -> Iterator[np.ndarray]:
    """Stationary oscillator position paths via the exact Gaussian transition."""
    if config.system != "sdho":
        raise SimulationConfigError("config.system must be 'sdho'")
    return _paths_from_chunks(_linear_chunks(config, observe_row=0))


def simulate_ou_system_paths(config: SimConfig) -> Iterator[np.ndarray]:
    """Stationary mean-reverting observable paths (the y component)."""
    if config.system != "ou":
        raise SimulationConfigError("config.system must be 'ou'")
    return _paths_from_chunks(_linear_chunks(config, observe_row=1))


def _circulant_spectrum(kernel: Kernel, n: int, dt: float) -> np.ndarray:
    """Eigenvalues of a non-negative-definite circulant embedding of r(k dt)."""
    m = n - 1
    for _ in range(12):
        cov = np.array([kernel.eval(k * dt).r for k in range(m + 1)])
        ring = np.concatenate([cov, cov[-2:0:-1]])
        eig = np.fft.rfft(ring).real
        if eig.min() >= -1e-12 * eig.max():
            return np.clip(eig, 0.0, None), m
        m *= 2
    raise SimulationConfigError("circulant embedding failed to become non-negative definite")


def _kernel_chunks(kernel: Kernel, config: SimConfig) -> Iterator[tuple[int, np.ndarray]]:
    n = config.n_steps + 1
    eig, m = _circulant_spectrum(kernel, n, config.dt)
    ring = 2 * m
    scale = np.sqrt(eig / ring)
    for start in range(0, config.trials, _CHUNK):
        stop = min(start + _CHUNK, config.trials)
        block = np.empty((n, stop - start))
        for j in range(stop - start):
            rng = _trial_rng(config.seed, start + j)
            z = rng.standard_normal(ring)
            spec = np.fft.rfft(z) * scale * math.sqrt(ring)
            path = np.fft.irfft(spec, n=ring)
            block[:, j] = path[:n]
        yield start, block


def simulate_kernel_paths(kernel: Kernel, config: SimConfig) -> Iterator[np.ndarray]:
    """Stationary Gaussian paths with covariance r(|i-j| dt), circulant embedding."""
    return _paths_from_chunks(_kernel_chunks(kernel, config))


def count_crossings(path: np.ndarray, u: float, mode=CrossingMode.UP) -> int:
    """Crossings of level u under the half-open convention x_i < u <= x_{i+1}."""
    mode = _mode(mode)
    x = np.asarray(path)
    if x.size < 2:
        raise ValueError("path needs at least 2 samples")
    below = x[:-1] < u
    above_next = x[1:] >= u
    up = int(np.count_nonzero(below & above_next))
    if mode is CrossingMode.UP:
        return up
    down = int(np.count_nonzero(~below & ~above_next))
    if mode is CrossingMode.DOWN:
        return down
    return up + down


def _chunks_for(config: SimConfig):
    if config.system == "sdho":
        return _linear_chunks(config, observe_row=0)
    if config.system == "ou":
        return _linear_chunks(config, observe_row=1)
    if config.system == "kernel":
        if config.kernel is None:
            raise SimulationConfigError("system='kernel' requires a kernel")
        return _kernel_chunks(config.kernel, config)
    raise SimulationConfigError(f"unknown system {config.system!r}")


def estimate_stats(config: SimConfig, bootstrap: int = 1000) -> SimEstimate:
    """Counts over all trials, with bootstrap standard errors for var and Fano."""
    mode = _mode(config.mode)
    counts = np.empty(config.trials)
    u = config.u
    for start, block in _chunks_for(config):
        below = block[:-1] < u
        above_next = block[1:] >= u
        up = np.count_nonzero(below & above_next, axis=0)
        if mode is CrossingMode.UP:
            c = up
        elif mode is CrossingMode.DOWN:
            c = np.count_nonzero(~below & ~above_next, axis=0)
        else:
            c = up + np.count_nonzero(~below & ~above_next, axis=0)
        counts[start:start + block.shape[1]] = c
    n = config.trials
    mean = float(np.mean(counts))
    var = float(np.var(counts, ddof=1))
    fano_est = var / mean if mean > 0 else math.nan
    se_mean = math.sqrt(var / n)
    rng = np.random.Generator(np.random.Philox(key=np.random.SeedSequence(
        entropy=config.seed, spawn_key=(0xB00, 0x757)
    ).generate_state(2, np.uint64)))
    idx = rng.integers(0, n, size=(bootstrap, n))
    resampled = counts[idx]
    boot_mean = resampled.mean(axis=1)
    boot_var = resampled.var(axis=1, ddof=1)
    se_var = float(np.std(boot_var, ddof=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        boot_fano = np.where(boot_mean > 0, boot_var / boot_mean, np.nan)
    se_fano = float(np.nanstd(boot_fano, ddof=1))
    return SimEstimate(
        mean=mean, variance=var, fano=fano_est,
        se_mean=se_mean, se_variance=se_var, se_fano=se_fano,
        trials=n, total_crossings=int(np.sum(counts)),
    )


# -- brute-force integrals ----------------------------------------------------

def _joint_quadratics(kernel: Kernel, t: float):
    """Pointwise machinery for f_Q - f_P f_P at (u, u, y1, y2).

    Returns (eta(u, y1, y2), log-det correction) pieces: the 4x4 joint
    covariance of (X_0, X_t, Xdot_0, Xdot_t) is inverted once; eta is the
    exponent difference against the independent product density, and the
    density difference is f_P f_P * expm1(eta).
    """
    d = kernel.eval(t)
    r0, q0 = kernel.r0, kernel.q0
    r, p, q = d.r, d.p, d.q
    cov = np.array([
        [r0, r, 0.0, p],
        [r, r0, -p, 0.0],
        [0.0, -p, q0, q],
        [p, 0.0, q, q0],
    ])
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise DegenerateLagError(f"joint covariance not positive definite at t={t}") from exc
    inv = np.linalg.inv(cov)
    # eta = s_joint - s_product + log-normalization difference.  Both pieces
    # are differences of O(1) quantities that would cancel catastrophically
    # when the lag-t correlations (r, p, q) are tiny, so form them directly
    # from the correlation block E = cov - D (D = block-diagonal part):
    #   inv - D^{-1} = -inv E D^{-1}        (exact, no cancellation)
    #   log det(cov) - log det(D) = sum log1p(eig(D^{-1} E))
    d_inv = np.diag([1.0 / r0, 1.0 / r0, 1.0 / q0, 1.0 / q0])
    corr = cov - np.diag([r0, r0, q0, q0])
    delta = -(inv @ corr) @ d_inv
    delta = 0.5 * (delta + delta.T)
    # Eigenvalues of D^-1 E via the similar symmetric matrix
    # D^-1/2 E D^-1/2: the symmetric solver keeps them accurate even when
    # the joint covariance is nearly singular at short lags.
    d_isqrt = np.sqrt(np.diag(d_inv))
    lam = np.linalg.eigvalsh(corr * np.outer(d_isqrt, d_isqrt))
    log_norm_diff = -0.5 * float(np.sum(np.log1p(lam)))
    product_norm = 1.0 / (4.0 * math.pi**2 * r0 * q0)

    def difference(u: float, y1: float, y2: float) -> float:
        v = np.array([u, u, y1, y2])
        s_product = -u * u / r0 - 0.5 * (y1 * y1 + y2 * y2) / q0
        eta = -0.5 * float(v @ delta @ v) + log_norm_diff
        return product_norm * math.exp(s_product) * math.expm1(eta)

    return difference


def _conditional_spike(kernel: Kernel, u: float, t: float):
    """Location and widths of the velocity distribution conditioned on
    X_0 = X_t = u.

    At small lags the conditional density of (Xdot_0, Xdot_t) collapses to
    a narrow ridge that an adaptive quadrature rule can miss entirely, so
    the quadrature below is told where it lives: returns the conditional
    mean (m1, m2), the sd of y1, the regression slope of y2 on y1, and the
    residual sd of y2 given y1.
    """
    d = kernel.eval(t)
    r0, q0 = kernel.r0, kernel.q0
    a = np.array([[r0, d.r], [d.r, r0]])
    b = np.array([[0.0, d.p], [-d.p, 0.0]])
    c = np.array([[q0, d.q], [d.q, q0]])
    bta = b.T @ np.linalg.inv(a)
    m = bta @ np.array([u, u])
    s = c - bta @ b
    w1 = math.sqrt(max(s[0, 0], 1e-300))
    slope = s[0, 1] / s[0, 0]
    w2 = math.sqrt(max(s[1, 1] - s[0, 1] ** 2 / s[0, 0], 1e-300))
    return float(m[0]), float(m[1]), w1, slope, w2


_QUAD_OPTS = {"limit": 400, "epsabs": 0.0, "epsrel": 1e-11}


def _quadrant_integral(diff, weight, spike, s1: float, s2: float, u: float,
                       cut: float) -> float:
    """Integrate weight(y1, y2) * diff over one velocity quadrant.

    s1, s2 in {+1, -1} select the quadrant; break points along the
    conditional ridge keep the adaptive rule from skipping the narrow
    spike of the joint density at short lags.
    """
    m1, m2, w1, slope, w2 = spike
    pts1 = sorted({min(max(s1 * (m1 + k * w1), 0.0), cut) for k in (-6, -3, 0, 3, 6)})

    def inner_opts(y1):
        mu = s2 * (m2 + slope * (s1 * y1 - m1))
        pts2 = sorted({min(max(mu + k * w2, 0.0), cut) for k in (-6, -3, 0, 3, 6)})
        return dict(_QUAD_OPTS, points=pts2)

    val, _ = nquad(
        lambda y2, y1: weight(y1, y2) * diff(u, s1 * y1, s2 * y2),
        [(0.0, cut), (0.0, cut)],
        opts=[inner_opts, dict(_QUAD_OPTS, points=pts1)],
    )
    return val


def bruteforce_integrand_up(kernel: Kernel, u: float, t: float) -> float:
    """2D velocity-integral definition of the upcrossing excess integrand."""
    diff = _joint_quadratics(kernel, t)
    spike = _conditional_spike(kernel, u, t)
    cut = 12.0 * math.sqrt(kernel.q0)
    return _quadrant_integral(diff, lambda y1, y2: y1 * y2, spike, 1.0, 1.0, u, cut)


def bruteforce_integrand_total(kernel: Kernel, u: float, t: float) -> float:
    """2D velocity-integral definition of the total-crossing excess integrand.

    Integrates |y1 y2| (f_Q - f_P f_P) over the plane, one quadrant at a
    time so the integrand handed to the adaptive rule is smooth.
    """
    diff = _joint_quadratics(kernel, t)
    spike = _conditional_spike(kernel, u, t)
    cut = 12.0 * math.sqrt(kernel.q0)
    weight = lambda y1, y2: abs(y1 * y2)
    return sum(
        _quadrant_integral(diff, weight, spike, s1, s2, u, cut)
        for s1 in (1.0, -1.0)
        for s2 in (1.0, -1.0)
    )


def theorem_up_closed_form(alpha: float, beta: float, gamma: float) -> float:
    """Closed form of the wedge integral int_{|x|<y} (y^2-x^2) e^{-a(x-g)^2-b y^2}."""
    apb = alpha + beta
    ab = alpha * beta
    h = gamma * math.sqrt(2.0 * ab / apb)
    first = (
        math.exp(-alpha * gamma * gamma)
        + _SQRT_PI * gamma * math.sqrt(apb) * math.exp(-0.5 * h * h)
        * erf(alpha * gamma / math.sqrt(apb))
    ) / (2.0 * ab)
    second = (
        math.pi * (alpha - beta - 2.0 * ab * gamma * gamma) / ab**1.5
        * owens_t(h, math.sqrt(alpha / beta))
    )
    return first + second


def theorem_total_closed_form(alpha: float, beta: float, gamma: float) -> float:
    """Closed form of the full-plane integral with |y^2-x^2| weight."""
    apb = alpha + beta
    ab = alpha * beta
    h = gamma * math.sqrt(2.0 * ab / apb)
    first = 2.0 * (
        math.exp(-alpha * gamma * gamma)
        + _SQRT_PI * gamma * math.sqrt(apb) * math.exp(-0.5 * h * h)
        * erf(alpha * gamma / math.sqrt(apb))
    ) / ab
    second = (
        4.0 * math.pi * (alpha - beta - 2.0 * ab * gamma * gamma) / ab**1.5
        * (owens_t(h, math.sqrt(alpha / beta)) - 0.125)
    )
    return first + second


def bruteforce_theorem_integrals(alpha: float, beta: float, gamma: float) -> tuple[float, float]:
    """Direct 2D quadrature of the wedge and full-plane canonical integrals.

    For |gamma| large the wedge integral is exponentially small relative to
    the unconstrained Gaussian mass, so the quadrature runs on the integrand
    scaled by the exponent's maximum over the wedge (attained on y = |x| at
    x = alpha gamma / (alpha+beta)); the exact factor is restored afterwards.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be > 0")
    apb = alpha + beta
    g_star = alpha * beta * gamma * gamma / apb  # min of the exponent on the wedge

    def scaled(x: float, y: float) -> float:
        return math.exp(g_star - alpha * (x - gamma) ** 2 - beta * y * y)

    # Keep only the region where the scaled exponent is above -80.
    wx = math.sqrt((g_star + 80.0) / alpha)
    y_hi = math.sqrt((g_star + 80.0) / beta) + 1.0
    wedge, _ = dblquad(
        lambda y, x: (y * y - x * x) * scaled(x, y),
        gamma - wx, gamma + wx, lambda x: abs(x), y_hi, epsabs=1e-13, epsrel=1e-11,
    )
    wedge *= math.exp(-g_star)
    # Complement region |y| < |x| (folded by evenness in y); its exponent
    # maximum is 0 at (gamma, 0), so no scaling is needed.
    wxc = math.sqrt(80.0 / alpha)
    inner, _ = dblquad(
        lambda y, x: (x * x - y * y) * math.exp(-alpha * (x - gamma) ** 2 - beta * y * y),
        gamma - wxc, gamma + wxc, 0.0, lambda x: abs(x), epsabs=1e-13, epsrel=1e-11,
    )
    total = 2.0 * wedge + 2.0 * inner
    return wedge, total


def bruteforce_variance(kernel: Kernel, u: float, T: float, mode=CrossingMode.UP) -> float:
    """Finite-horizon variance from the brute-force integrand (small T only)."""
    from .crossings import mean_count

    mode = _mode(mode)
    if mode is CrossingMode.TOTAL:
        integrand = lambda t: bruteforce_integrand_total(kernel, u, t)  # noqa: E731
    else:
        integrand = lambda t: bruteforce_integrand_up(kernel, u, t)  # noqa: E731
    lag, _ = quad(
        lambda t: (1.0 - t / T) * integrand(t),
        1e-7 * kernel.tau_slow, T, epsabs=1e-12, epsrel=1e-8, limit=200,
    )
    return mean_count(kernel, u, T, mode) + 2.0 * T * lag


# -- identity checks behind the closed forms ----------------------------------

def _lemma_inner(draw):
    """Inner y-integral over the wedge at fixed x, vs its erfc closed form.

    Both sides are divided by the common positive factor
    exp(-alpha (x-gamma)^2 - beta x^2) (and y shifted to |x| + w) so the
    comparison runs at O(1) scale: the raw values can sit below 1e-30,
    where neither quadrature nor erfc carries relative precision.
    """
    beta, x = draw["beta"], draw["x"]
    ax = abs(x)
    lhs, _ = quad(
        lambda w: (2.0 * ax * w + w * w) * math.exp(-beta * w * (2.0 * ax + w)),
        0.0, 40.0 / math.sqrt(beta), epsabs=1e-15, epsrel=1e-13, limit=200,
    )
    rhs = ax / (2.0 * beta) - _SQRT_PI / (4.0 * beta**1.5) * (
        2.0 * beta * x * x - 1.0
    ) * _erfcx(math.sqrt(beta) * ax)
    return lhs, rhs


def _lemma_abs_gaussian(draw):
    """Integral of |x| against a product of two shifted Gaussians.

    Both sides are divided by the peak value exp(-alpha beta gamma^2 / apb)
    and x shifted to the peak, so the comparison runs at O(1) scale.
    """
    alpha, beta, gamma = draw["alpha"], draw["beta"], draw["gamma"]
    apb = alpha + beta
    peak = alpha * gamma / apb
    root = math.sqrt(apb)
    lhs, _ = quad(
        lambda s: abs(peak + s / root) * math.exp(-s * s) / root,
        -40.0, 40.0, points=[-peak * root, 0.0],
        epsabs=1e-15, epsrel=1e-13, limit=200,
    )
    rhs = (
        root * math.exp(-((alpha * gamma) ** 2) / apb)
        + _SQRT_PI * alpha * gamma * erf(alpha * gamma / root)
    ) / apb**1.5
    return lhs, rhs


def _lemma_quadratic_gaussian(draw):
    """Gaussian moment of the quadratic 2x^2 - 1."""
    alpha, beta, gamma = draw["alpha"], draw["beta"], draw["gamma"]
    lhs, _ = quad(
        lambda x: (2.0 * x * x - 1.0)
        * math.exp(-(alpha / beta) * (x - gamma * math.sqrt(beta)) ** 2),
        -math.inf, math.inf, epsabs=1e-14, epsrel=1e-12,
    )
    rhs = _SQRT_PI * math.sqrt(beta / alpha) * (beta / alpha + 2.0 * beta * gamma**2 - 1.0)
    return lhs, rhs


def _lemma_four_term(draw):
    """The four-term exponential integral appearing in the wedge reduction."""
    alpha, beta, gamma = draw["alpha"], draw["beta"], draw["gamma"]
    ra = alpha / beta
    gs = gamma * math.sqrt(beta)

    def f(x: float) -> float:
        # The middle term's growing exponential is absorbed into the Gaussian:
        # -ra (x+gs)^2 + 4 ra gs x = -ra (x-gs)^2 exactly, avoiding overflow.
        return (gs - x) * math.exp(-ra * (x + gs) ** 2 - x * x) - (
            x + gs
        ) * math.exp(-ra * (x - gs) ** 2 - x * x)

    # Second term peaks near x = ra*gs/(1+ra); split there and cap the range.
    hi = abs(gs) + 40.0 / math.sqrt(1.0 + min(ra, 1.0))
    lhs, _ = quad(
        f, 0.0, hi, points=[abs(gs), ra * abs(gs) / (1.0 + ra)],
        epsabs=1e-15, epsrel=1e-13, limit=200,
    )
    apb = alpha + beta
    rhs = -beta * math.exp(-alpha * gamma * gamma) / apb**1.5 * (
        math.sqrt(apb)
        + _SQRT_PI * gamma * (2.0 * alpha + beta) * math.exp(alpha**2 * gamma**2 / apb)
        * erf(alpha * gamma / math.sqrt(apb))
    )
    return lhs, rhs


def _lemma_erf_pair(draw):
    """The paired-erf Gaussian integral that produces the Owen's-T term.

    The erf pair is even in the shift, so it is rewritten as a difference
    of erfc values at positive arguments: at large shifts the two erf
    terms cancel to below 1e-16 absolute while the true value can be
    ~1e-18, and only the erfc form keeps relative precision there.
    """
    alpha, beta, gamma = draw["alpha"], draw["beta"], draw["gamma"]
    ra = math.sqrt(alpha / beta)
    ra2 = ra * ra
    gs = abs(gamma) * math.sqrt(beta)
    h2_half = alpha * beta * gamma * gamma / (alpha + beta)
    x_peak = gs * ra2 / (1.0 + ra2)

    def g(x: float) -> float:
        # Both erfcx exponents are completed squares around the saddle, so
        # every factor stays O(1) even when the raw integral is ~1e-18.
        if x <= gs:
            return math.exp(-(1.0 + ra2) * (x - x_peak) ** 2) * _erfcx(
                ra * (gs - x)
            ) - math.exp(-(1.0 + ra2) * (x + x_peak) ** 2) * _erfcx(ra * (x + gs))
        return math.exp(h2_half - x * x) * (
            erfc(ra * (gs - x)) - erfc(ra * (x + gs))
        )

    lhs, _ = quad(
        g, 0.0, gs + 40.0, points=[x_peak, gs],
        epsabs=1e-15, epsrel=1e-13, limit=200,
    )
    rhs = 4.0 * _SQRT_PI * math.exp(h2_half) * owens_t(
        math.sqrt(2.0 * alpha * beta / (alpha + beta)) * gamma, ra
    )
    return lhs, rhs


def _lemma_full_plane(draw):
    """Signed full-plane integral of (y^2 - x^2) against the shifted Gaussian."""
    alpha, beta, gamma = draw["alpha"], draw["beta"], draw["gamma"]
    span = 9.0 / math.sqrt(min(alpha, beta)) + abs(gamma)
    lhs, _ = dblquad(
        lambda y, x: (y * y - x * x) * math.exp(-alpha * (x - gamma) ** 2 - beta * y * y),
        -span, span, -span, span, epsabs=1e-13, epsrel=1e-11,
    )
    rhs = 0.5 * math.pi * (alpha - beta - 2.0 * alpha * beta * gamma**2) / (alpha * beta) ** 1.5
    return lhs, rhs


def _draw(rng, with_x=False) -> dict:
    d = {
        "alpha": rng.uniform(0.1, 10.0),
        "beta": rng.uniform(0.1, 10.0),
        "gamma": rng.uniform(-3.0, 3.0),
    }
    if with_x:
        d["x"] = rng.uniform(-3.0, 3.0)
    return d


LEMMA_CHECKS = (
    ("wedge inner integral", _lemma_inner, True),
    ("abs-x Gaussian integral", _lemma_abs_gaussian, False),
    ("quadratic Gaussian moment", _lemma_quadratic_gaussian, False),
    ("four-term exponential integral", _lemma_four_term, False),
    ("paired-erf Owen's-T integral", _lemma_erf_pair, False),
    ("full-plane signed integral", _lemma_full_plane, False),
)


def lemma_residuals(seed: int = 0, draws: int = 50) -> dict:
    """Worst relative residual per identity over random parameter draws."""
    results = {}
    for name, fn, with_x in LEMMA_CHECKS:
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(draws):
            lhs, rhs = fn(_draw(rng, with_x))
            scale = max(abs(lhs), abs(rhs), 1e-30)
            worst = max(worst, abs(lhs - rhs) / scale)
        results[name] = worst
    return results

"""Noisy range and bearing measurement simulation.

Distances are gamma distributed with the true distance as mean and a
configurable standard deviation sigma. Bearings (angle of arrival) are
von Mises distributed around the true edge direction with concentration
rho; all sensors share one global reference direction (the world x-axis),
so a measured angle is directly the argument of the complex edge.

Bearing accuracy can alternatively be stated as the half-width zeta of
the interval around the true angle that captures 90 percent of the
probability mass; `zeta_to_rho` and `rho_to_zeta` convert between the
two parameterizations.

Anchor-anchor measurements are always exact (anchor positions are
known), anchor-target always noisy, target-target exact by default with
an optional noisy mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.stats import vonmises as _vonmises_dist

from .edges import PairIndex, build_pair_index
from .errors import ConfigurationError, DegenerateGeometryError
from .geometry import Scene

ZETA_MAX = 0.9 * np.pi


def wrap_angle(theta):
    """Wrap angles to the interval [-pi, pi)."""
    return (np.asarray(theta) + np.pi) % (2.0 * np.pi) - np.pi


def _percentile_mass(zeta: float, rho: float) -> float:
    """Probability mass of a centered von Mises within [-zeta, zeta]."""
    if rho == 0.0:
        return zeta / np.pi
    return float(_vonmises_dist.cdf(zeta, rho) - _vonmises_dist.cdf(-zeta, rho))


def zeta_to_rho(zeta: float) -> float:
    """Concentration rho whose 90th centered percentile half-width is zeta.

    Parameters
    ----------
    zeta : float
        Half-width in radians, in (0, 0.9*pi]. The upper end maps to
        rho = 0 (the uniform limit holds exactly 90 percent of its mass
        within +-0.9*pi).

    Returns
    -------
    float
        rho >= 0 such that the von Mises mass on [-zeta, zeta] is 0.9.
    """
    zeta = float(zeta)
    if not (0.0 < zeta <= ZETA_MAX + 1e-12):
        raise ValueError("zeta must lie in (0, 0.9*pi]")
    if _percentile_mass(zeta, 0.0) >= 0.9:
        return 0.0
    # normal approximation rho ~ (z_0.95 / zeta)^2 seeds the bracket
    hi = max(4.0, 2.0 * (1.6449 / zeta) ** 2)
    while _percentile_mass(zeta, hi) < 0.9:
        hi *= 4.0
        if hi > 1e14:
            raise ValueError("no concentration satisfies the requested zeta")
    return float(brentq(lambda r: _percentile_mass(zeta, r) - 0.9,
                        0.0, hi, xtol=1e-12, rtol=1e-14))


def rho_to_zeta(rho: float) -> float:
    """Half-width of the 90th centered percentile for concentration rho."""
    rho = float(rho)
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    if rho == 0.0:
        return ZETA_MAX
    if np.isinf(rho):
        return 0.0
    return float(brentq(lambda z: _percentile_mass(z, rho) - 0.9,
                        1e-12, np.pi, xtol=1e-14, rtol=1e-14))


@dataclass(frozen=True)
class NoiseConfig:
    """Measurement noise levels.

    Exactly one of `rho` and `zeta_theta` is required; if only the
    half-width is given, the concentration is derived from it. When both
    are set (as happens when a config is copied with a new sigma), `rho`
    is the operative value.

    Attributes
    ----------
    sigma : float
        Distance noise standard deviation in meters; 0 disables it.
    rho : float
        Bearing concentration; 0 is uniform, inf disables bearing noise.
    zeta_theta : float or None
        Bearing 90th-percentile half-width in radians, if specified.
    tt_noisy : bool
        Apply noise to target-target pairs too (default: exact).
    """

    sigma: float
    rho: float | None = None
    zeta_theta: float | None = None
    tt_noisy: bool = False

    def __post_init__(self):
        sigma = float(self.sigma)
        if not np.isfinite(sigma) or sigma < 0:
            raise ConfigurationError("sigma must be finite and nonnegative")
        object.__setattr__(self, "sigma", sigma)
        if self.rho is None and self.zeta_theta is None:
            raise ConfigurationError("specify bearing noise via rho or zeta_theta")
        if self.zeta_theta is not None:
            zeta = float(self.zeta_theta)
            if not (0.0 < zeta <= ZETA_MAX + 1e-12):
                raise ConfigurationError("zeta_theta must lie in (0, 0.9*pi]")
            object.__setattr__(self, "zeta_theta", zeta)
        if self.rho is None:
            object.__setattr__(self, "rho", zeta_to_rho(self.zeta_theta))
        else:
            rho = float(self.rho)
            if np.isnan(rho) or rho < 0:
                raise ConfigurationError("rho must be nonnegative")
            object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class MeasurementSet:
    """Measured distance and angle for every node pair, canonical order.

    The pair class (AA, AT, TT) of each entry follows from `index`;
    `tt_exact` records whether the TT block carries exact values.
    """

    index: PairIndex
    distances: np.ndarray
    angles: np.ndarray
    tt_exact: bool = True

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float).copy()
        th = wrap_angle(np.asarray(self.angles, dtype=float)).copy()
        p = self.index.n_pairs
        if d.shape != (p,) or th.shape != (p,):
            raise ValueError("measurement arrays must have one entry per pair")
        if np.any(d <= 0) or not np.all(np.isfinite(d)):
            raise ValueError("distances must be finite and positive")
        d.flags.writeable = False
        th.flags.writeable = False
        object.__setattr__(self, "distances", d)
        object.__setattr__(self, "angles", th)


def sample_distance(true_d, sigma: float, rng: np.random.Generator):
    """Draw gamma distance samples with mean true_d and std sigma.

    Shape and scale follow from the stated moments: k = (d/sigma)^2,
    scale = sigma^2/d. Works elementwise on arrays; sigma = 0 returns
    the true values unchanged.
    """
    d = np.asarray(true_d, dtype=float)
    if np.any(d <= 0) or not np.all(np.isfinite(d)):
        raise ValueError("true distance must be finite and positive")
    if sigma < 0 or not np.isfinite(sigma):
        raise ValueError("sigma must be finite and nonnegative")
    if sigma == 0.0:
        return d.copy() if d.ndim else float(d)
    shape = (d / sigma) ** 2
    scale = sigma ** 2 / d
    out = rng.gamma(shape, scale)
    return out if d.ndim else float(out)


def sample_angle(true_theta, rho: float, rng: np.random.Generator):
    """Draw von Mises bearing samples centered at true_theta, in [-pi, pi).

    rho = 0 gives uniform bearings; rho = inf returns the true angles.
    """
    th = np.asarray(true_theta, dtype=float)
    if rho < 0 or np.isnan(rho):
        raise ValueError("rho must be nonnegative")
    if np.isinf(rho):
        out = wrap_angle(th)
    else:
        out = wrap_angle(rng.vonmises(th, rho))
    return out if th.ndim else float(out)


def generate_measurements(scene: Scene, noise: NoiseConfig,
                          rng) -> MeasurementSet:
    """Simulate one measurement of every node pair in a scene.

    AA pairs are exact, AT pairs noisy, TT pairs exact unless
    `noise.tt_noisy`. Draw order is fixed (AT distances, AT angles, then
    TT if noisy), so a given generator state yields reproducible output.

    Parameters
    ----------
    scene : Scene
    noise : NoiseConfig
    rng : int, seed sequence, or numpy.random.Generator
    """
    rng = np.random.default_rng(rng)
    index = build_pair_index(scene.n_anchors, scene.n_landmarks)
    x = scene.complex_positions()
    v = x[index.second] - x[index.first]
    if np.any(np.abs(v) == 0.0):
        raise DegenerateGeometryError("scene contains coincident nodes")
    d = np.abs(v)
    theta = wrap_angle(np.angle(v))

    d_out = d.copy()
    th_out = theta.copy()
    at = index.at
    d_out[at] = sample_distance(d[at], noise.sigma, rng)
    th_out[at] = sample_angle(theta[at], noise.rho, rng)
    if noise.tt_noisy and index.n_tt:
        tt = index.tt
        d_out[tt] = sample_distance(d[tt], noise.sigma, rng)
        th_out[tt] = sample_angle(theta[tt], noise.rho, rng)
    return MeasurementSet(index, d_out, th_out, tt_exact=not noise.tt_noisy)

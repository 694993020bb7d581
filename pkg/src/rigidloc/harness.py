"""Monte Carlo benchmark harness.

Sweeps the range noise level over a grid, runs K independent trials per
grid point, and reports per-method translation and rotation MSE next to
the matching Cramer-Rao bounds.

Every trial k of grid point g draws its randomness from an independent
stream seeded by (master_seed, g, k), so results are bit-identical for
a given seed no matter how trials are distributed over workers. Within
a trial, all methods see the same scene and the same measurements.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .crlb import compute_fim
from .errors import ConfigurationError, DegenerateGeometryError, NumericalFailureError
from .geometry import Scene, SceneConfig, random_scene
from .measurements import NoiseConfig, generate_measurements, zeta_to_rho
from .procrustes import estimate_pose, rotation_mse
from .solvers import METHODS, SolverConfig, solve_landmarks

log = logging.getLogger(__name__)

DEFAULT_SIGMA_GRID = tuple(float(s) for s in np.geomspace(0.1, 2.0, 8))
DEFAULT_ZETA_THETA = float(np.deg2rad(8.0))

CSV_HEADER = "method,sigma,mse_t,rmse_t,mse_Q,conv_rate,crlb_t,crlb_Q,trials"

# spawn key reserved for the fixed-pose reference scene; grid indices
# used as spawn keys stay far below it
_SCENE_STREAM_KEY = 0xFFFFFFFF


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one benchmark run."""

    scene: SceneConfig = SceneConfig()
    sigma_grid: tuple = DEFAULT_SIGMA_GRID
    zeta_theta: float = DEFAULT_ZETA_THETA
    rho: float | None = None
    tt_noisy: bool = False
    trials: int = 1000
    methods: tuple = METHODS
    master_seed: int = 12345
    fixed_pose: bool = False
    workers: int = 1
    output_path: str | None = None

    def __post_init__(self):
        grid = tuple(float(s) for s in self.sigma_grid)
        if not grid or any(s <= 0 or not np.isfinite(s) for s in grid):
            raise ConfigurationError("sigma grid entries must be positive and finite")
        object.__setattr__(self, "sigma_grid", grid)
        methods = tuple(self.methods)
        if not methods or any(m not in METHODS for m in methods):
            raise ConfigurationError(f"methods must be a subset of {METHODS}")
        object.__setattr__(self, "methods", methods)
        if self.trials < 1:
            raise ConfigurationError("need at least one trial")
        if self.workers < 1:
            raise ConfigurationError("need at least one worker")
        if self.rho is None and self.zeta_theta is None:
            raise ConfigurationError("specify bearing noise via zeta_theta or rho")

    def resolve_rho(self) -> float:
        return float(self.rho) if self.rho is not None else zeta_to_rho(self.zeta_theta)


@dataclass(frozen=True)
class ResultRow:
    """Aggregated metrics for one (method, sigma) grid point.

    `warning` flags a grid point where more than half the trials failed;
    failed trials are excluded from the error averages but show up in
    `conv_rate`. The optional trial arrays are populated only when the
    experiment is run with `keep_trial_errors`.
    """

    method: str
    sigma: float
    mse_t: float
    rmse_t: float
    mse_q: float
    conv_rate: float
    crlb_t: float
    crlb_q: float
    trials: int
    warning: bool = False
    trial_err_t: np.ndarray | None = field(default=None, repr=False, compare=False)
    trial_err_q: np.ndarray | None = field(default=None, repr=False, compare=False)
    trial_ok: np.ndarray | None = field(default=None, repr=False, compare=False)


def reference_scene(config: ExperimentConfig) -> Scene:
    """The deterministic scene used by fixed-pose runs and bound curves."""
    seq = np.random.SeedSequence(config.master_seed, spawn_key=(_SCENE_STREAM_KEY,))
    return random_scene(config.scene, np.random.default_rng(seq))


def _trial_block(config: ExperimentConfig, g: int, sigma: float, rho: float,
                 start: int, stop: int):
    """Run trials [start, stop) of grid point g; returns per-trial arrays."""
    noise = NoiseConfig(sigma=sigma, rho=rho, tt_noisy=config.tt_noisy)
    n = stop - start
    n_methods = len(config.methods)
    err_t = np.full((n_methods, n), np.nan)
    err_q = np.full((n_methods, n), np.nan)
    ok = np.zeros((n_methods, n), dtype=bool)
    crlb_t = np.empty(n)
    crlb_q = np.empty(n)
    solver_cfgs = [SolverConfig(method=m) for m in config.methods]
    fixed = reference_scene(config) if config.fixed_pose else None

    for k in range(start, stop):
        seq = np.random.SeedSequence(config.master_seed, spawn_key=(g, k))
        rng = np.random.default_rng(seq)
        scene = fixed if fixed is not None else random_scene(config.scene, rng)
        meas = generate_measurements(scene, noise, rng)
        fim = compute_fim(scene, noise)
        i = k - start
        crlb_t[i] = fim.crlb_t
        crlb_q[i] = fim.crlb_q
        for j, cfg in enumerate(solver_cfgs):
            try:
                est = solve_landmarks(meas, scene.anchors, scene.conformation, cfg)
                if not est.converged:
                    continue
                pose = estimate_pose(est.coordinates, scene.conformation)
            except (DegenerateGeometryError, NumericalFailureError):
                continue
            dt = pose.translation - scene.pose.translation
            err_t[j, i] = dt @ dt
            err_q[j, i] = rotation_mse(pose.rotation, scene.pose.rotation)
            ok[j, i] = True
    return err_t, err_q, ok, crlb_t, crlb_q


def _collect_grid_point(config: ExperimentConfig, g: int, sigma: float, rho: float):
    k = config.trials
    workers = min(config.workers, k)
    if workers == 1:
        return _trial_block(config, g, sigma, rho, 0, k)
    bounds = np.linspace(0, k, workers + 1).astype(int)
    spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_trial_block,
                              *zip(*((config, g, sigma, rho, a, b) for a, b in spans))))
    # concatenation in span order keeps trial k at index k
    return tuple(np.concatenate([p[i] for p in parts], axis=-1) for i in range(5))


def run_experiment(config: ExperimentConfig,
                   keep_trial_errors: bool = False) -> list[ResultRow]:
    """Run the full sweep and aggregate one ResultRow per (method, sigma).

    Parameters
    ----------
    config : ExperimentConfig
    keep_trial_errors : bool
        Attach the raw per-trial squared errors to each row (memory
        permitting); used for standard-error analysis.

    Returns
    -------
    list of ResultRow
        Grouped by grid point, methods in configured order.
    """
    rho = config.resolve_rho()
    rows: list[ResultRow] = []
    for g, sigma in enumerate(config.sigma_grid):
        err_t, err_q, ok, crlb_t, crlb_q = _collect_grid_point(config, g, sigma, rho)
        mean_crlb_t = float(np.mean(crlb_t))
        mean_crlb_q = float(np.mean(crlb_q))
        for j, method in enumerate(config.methods):
            sel = ok[j]
            n_ok = int(sel.sum())
            if n_ok:
                mse_t = float(np.mean(err_t[j, sel]))
                mse_q = float(np.mean(err_q[j, sel]))
            else:
                mse_t = mse_q = float("nan")
            conv = n_ok / config.trials
            warning = conv < 0.5
            if warning:
                log.warning("method %s at sigma=%g: only %d/%d trials succeeded",
                            method, sigma, n_ok, config.trials)
            rows.append(ResultRow(
                method=method, sigma=float(sigma),
                mse_t=mse_t, rmse_t=float(np.sqrt(mse_t)), mse_q=mse_q,
                conv_rate=conv, crlb_t=mean_crlb_t, crlb_q=mean_crlb_q,
                trials=config.trials, warning=warning,
                trial_err_t=err_t[j].copy() if keep_trial_errors else None,
                trial_err_q=err_q[j].copy() if keep_trial_errors else None,
                trial_ok=sel.copy() if keep_trial_errors else None,
            ))
    return rows


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def format_results(rows: list[ResultRow]) -> str:
    """Render rows as CSV text with the fixed header and 9-digit floats."""
    if not rows:
        raise ValueError("no result rows to write")
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r.method, _fmt(r.sigma), _fmt(r.mse_t), _fmt(r.rmse_t),
            _fmt(r.mse_q), _fmt(r.conv_rate), _fmt(r.crlb_t), _fmt(r.crlb_q),
            str(r.trials),
        ]))
    return "\n".join(lines) + "\n"


def write_results(rows: list[ResultRow], path) -> None:
    """Write rows to `path` as CSV. Refuses an empty row list."""
    text = format_results(rows)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)

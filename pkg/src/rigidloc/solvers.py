"""Landmark coordinate estimators.

Three methods are provided behind one dispatch function:

``mds``
    Classic multidimensional scaling on the measured distances, aligned
    to the known anchors. Ignores bearing measurements entirely.
``smds_full``
    Edge-kernel estimator using both distances and bearings. The
    anchor-target (AT) edge block is refined by a maximum-ratio style
    fixed-point iteration over the kernel minor, then landmark positions
    follow from the anchored least squares of the AT edges.
``smds_distance_only``
    Bootstrap for bearing-free operation: run MDS first, reconstruct
    edge angles from the embedded coordinates, and feed those synthetic
    bearings through the ``smds_full`` path.

All routines are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .edges import (EdgeSet, KernelBlocks, MinorBlocks, PairIndex,
                    build_kernel, edges_from_measurements, extract_minor)
from .errors import (ConfigurationError, DegenerateGeometryError,
                     NumericalFailureError)
from .geometry import AnchorSet, Conformation
from .procrustes import fit_alignment

METHODS = ("mds", "smds_full", "smds_distance_only")

_DIVERGENCE_FACTOR = 1e6


@dataclass(frozen=True)
class SolverConfig:
    """Method selection and iteration control for `solve_landmarks`."""

    method: str = "smds_full"
    max_iterations: int = 100
    rel_tolerance: float = 1e-9

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(
                f"unknown method {self.method!r}, expected one of {METHODS}")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be at least 1")
        if not (self.rel_tolerance > 0):
            raise ConfigurationError("rel_tolerance must be positive")


@dataclass(frozen=True)
class LandmarkEstimate:
    """Estimated landmark coordinates with solver diagnostics."""

    coordinates: np.ndarray
    iterations_used: int
    converged: bool
    residual: float
    method: str

    def __post_init__(self):
        coords = np.asarray(self.coordinates, dtype=float)
        if not np.all(np.isfinite(coords)):
            raise NumericalFailureError("landmark estimate is not finite")
        coords = coords.copy()
        coords.flags.writeable = False
        object.__setattr__(self, "coordinates", coords)


@dataclass(frozen=True)
class TurboResult:
    """Outcome of the fixed-point refinement of the AT edge block."""

    v_at: np.ndarray
    iterations: int
    converged: bool
    residual: float


def rank1_truncate(kernel: np.ndarray, v_aa: np.ndarray | None = None):
    """Recover the generating edge vector of a rank-1 edge kernel.

    The kernel K = conj(v) v^T has dominant eigenvector proportional to
    conj(v) with eigenvalue ||v||^2, so the estimate is the conjugated,
    eigenvalue-scaled dominant eigenvector. The remaining unit phase is
    unobservable from K alone; when the exact anchor-anchor edges are
    supplied, it is fixed by least-squares alignment of the AA block.

    Parameters
    ----------
    kernel : ndarray
        Square complex matrix (Hermitian for true edge kernels).
    v_aa : ndarray, optional
        Exact AA edge values matching the leading entries of v.

    Returns
    -------
    (v_hat, eigenvalue) : (ndarray, float)
    """
    k = np.asarray(kernel, dtype=complex)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ValueError("kernel must be a square matrix")
    scale = np.linalg.norm(k)
    if scale == 0.0:
        raise DegenerateGeometryError("kernel is identically zero")
    if np.allclose(k, k.conj().T, rtol=1e-8, atol=1e-12 * scale):
        lam_all, vec_all = np.linalg.eigh(k)
        lam, u = lam_all[-1], vec_all[:, -1]
    else:
        lam_all, vec_all = np.linalg.eig(k)
        pick = int(np.argmax(np.abs(lam_all)))
        lam, u = np.real(lam_all[pick]), vec_all[:, pick]
    if lam <= 0:
        raise DegenerateGeometryError("kernel has no positive dominant eigenvalue")
    v_hat = np.conj(np.sqrt(lam) * u)
    if v_aa is not None:
        v_aa = np.asarray(v_aa, dtype=complex)
        z = np.vdot(v_hat[: v_aa.size], v_aa)
        if np.abs(z) == 0.0:
            raise DegenerateGeometryError("AA block too weak to fix the phase")
        v_hat = v_hat * np.exp(1j * np.angle(z))
    return v_hat, float(lam)


def coordinates_from_edges(v_at: np.ndarray, anchors, index: PairIndex) -> np.ndarray:
    """Solve for landmark positions from anchor-target edges.

    Each AT edge gives one linear equation x_n = a_m + v_(m,n); with the
    anchors known, the least-squares solution decouples per target into
    the average over anchors.

    Parameters
    ----------
    v_at : ndarray of complex, length M*N
        AT edges in canonical (anchor-major) order.
    anchors : AnchorSet or ndarray (2, M)
    index : PairIndex

    Returns
    -------
    ndarray, shape (2, N)
    """
    pos = anchors.positions if isinstance(anchors, AnchorSet) else np.asarray(anchors, dtype=float)
    m, n = index.n_anchors, index.n_targets
    if m == 0:
        raise ValueError("no anchors: target positions are underdetermined")
    if pos.shape != (2, m):
        raise ValueError("anchor matrix shape does not match the pair index")
    v_at = np.asarray(v_at, dtype=complex)
    if v_at.shape != (m * n,):
        raise ValueError("expected one AT edge per anchor-target pair")
    a = pos[0] + 1j * pos[1]
    x_hat = (a[:, None] + v_at.reshape(m, n)).mean(axis=0)
    return np.vstack([x_hat.real, x_hat.imag])


def turbo_init(k1: np.ndarray, k4: np.ndarray, v_aa: np.ndarray,
               v_tt: np.ndarray) -> np.ndarray:
    """Initial AT edge estimate combining the AA and TT kernel blocks.

    Both terms contribute the true v_AT scaled by the squared norm of
    the exact block in the noiseless case, so their ratio-combined sum
    reproduces v_AT exactly. The k4 block enters conjugated; its raw
    form would contribute a conjugated edge and break that property.
    """
    v_aa = np.asarray(v_aa, dtype=complex)
    v_tt = np.asarray(v_tt, dtype=complex)
    den = np.vdot(v_aa, v_aa).real + np.vdot(v_tt, v_tt).real
    if den <= 0.0:
        raise DegenerateGeometryError("no anchor or target edges to combine")
    num = k1.T @ v_aa
    if v_tt.size:
        num = num + np.conj(k4) @ v_tt
    return num / den


def turbo_iterate(minor: MinorBlocks, v_aa: np.ndarray, v_tt: np.ndarray,
                  v_at_init: np.ndarray, config: SolverConfig | None = None) -> TurboResult:
    """Fixed-point refinement of the AT edges over the kernel minor.

    Iterates a ratio-combined update of the three minor blocks until the
    relative change drops below `config.rel_tolerance` or the iteration
    budget is spent.

    Raises
    ------
    NumericalFailureError
        If the iterate norm grows beyond 1e6 times the initial norm or
        becomes non-finite.
    """
    cfg = config or SolverConfig()
    v_aa = np.asarray(v_aa, dtype=complex)
    v_tt = np.asarray(v_tt, dtype=complex)
    v = np.asarray(v_at_init, dtype=complex).copy()
    naa = np.vdot(v_aa, v_aa).real
    ntt = np.vdot(v_tt, v_tt).real
    base = minor.k1.T @ v_aa
    if v_tt.size:
        base = base + np.conj(minor.k4) @ v_tt
    norm0 = max(np.linalg.norm(v), np.finfo(float).tiny)
    limit = _DIVERGENCE_FACTOR * norm0
    residual = np.inf
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        vnorm2 = np.vdot(v, v).real
        den = naa + vnorm2 + ntt
        if den <= 0.0:
            raise DegenerateGeometryError("zero combining denominator")
        v_new = (base + minor.k3.T @ v) / den
        if not np.all(np.isfinite(v_new.view(float))):
            raise NumericalFailureError("turbo iteration produced non-finite values")
        step = np.linalg.norm(v_new - v)
        residual = step / max(np.sqrt(vnorm2), np.finfo(float).tiny)
        v = v_new
        if np.linalg.norm(v) > limit:
            raise NumericalFailureError("turbo iteration diverged")
        if residual < cfg.rel_tolerance:
            converged = True
            break
    return TurboResult(v, iterations, converged, float(residual))


def embed_distances(dist_matrix: np.ndarray) -> np.ndarray:
    """Classic MDS embedding of a full symmetric distance matrix.

    Double-centers the squared distances and keeps the two dominant
    nonnegative eigenpairs. A rank-1 Gram matrix (collinear nodes)
    yields a zero second coordinate.

    Returns
    -------
    ndarray, shape (2, T)
        Embedded coordinates, centered but in an arbitrary orientation.

    Raises
    ------
    DegenerateGeometryError
        If fewer than two dominant eigenvalues are nonnegative (up to
        a small tolerance for roundoff).
    """
    d = np.asarray(dist_matrix, dtype=float)
    t = d.shape[0]
    if d.shape != (t, t):
        raise ValueError("distance matrix must be square")
    h = np.eye(t) - np.full((t, t), 1.0 / t)
    b = -0.5 * h @ (d * d) @ h
    b = 0.5 * (b + b.T)
    w, u = np.linalg.eigh(b)
    lam1, lam2 = w[-1], w[-2]
    if lam1 <= 0.0:
        raise DegenerateGeometryError("distance data admit no planar embedding")
    if lam2 < -1e-9 * lam1:
        raise DegenerateGeometryError(
            "second Gram eigenvalue is negative: no planar embedding")
    lam2 = max(lam2, 0.0)
    y = u[:, [-1, -2]] * np.sqrt([lam1, lam2])
    return y.T


def classic_mds(distances: np.ndarray, anchors: AnchorSet,
                index: PairIndex) -> np.ndarray:
    """Estimate target positions from pair distances alone.

    Runs classic MDS on the full distance set, then aligns the embedded
    anchor subset onto the known anchor positions with a similarity
    transform (reflection allowed, since MDS chirality is arbitrary).

    Returns
    -------
    ndarray, shape (2, N)
        Aligned target coordinates.
    """
    distances = np.asarray(distances, dtype=float)
    if distances.shape != (index.n_pairs,):
        raise ValueError("expected one distance per pair")
    t = index.n_nodes
    dmat = np.zeros((t, t))
    dmat[index.first, index.second] = distances
    dmat = dmat + dmat.T
    coords = embed_distances(dmat)
    m = index.n_anchors
    rot, shift = fit_alignment(coords[:, :m], anchors.positions,
                               allow_reflection=True)
    aligned = rot @ coords + shift[:, None]
    return aligned[:, m:]


def reconstruct_angles(coords: np.ndarray, index: PairIndex) -> np.ndarray:
    """Edge angles implied by node coordinates, in canonical pair order.

    With exact anchors in the leading columns, the AA block of the
    result is automatically exact.

    Parameters
    ----------
    coords : ndarray
        Either complex positions (length T) or a real (2, T) matrix.
    index : PairIndex
    """
    coords = np.asarray(coords)
    if coords.ndim == 2:
        coords = coords[0] + 1j * coords[1]
    if coords.shape != (index.n_nodes,):
        raise ValueError("coordinate count does not match the pair index")
    v = coords[index.second] - coords[index.first]
    if np.any(np.abs(v) == 0.0):
        raise DegenerateGeometryError("coincident nodes have no edge direction")
    return np.angle(v)


def _smds_from_polar(distances: np.ndarray, angles: np.ndarray,
                     anchors: AnchorSet, index: PairIndex,
                     config: SolverConfig):
    """Kernel minor pipeline from per-pair polar edge data."""
    edge_set = EdgeSet(index, np.asarray(distances) * np.exp(1j * np.asarray(angles)))
    minor = extract_minor(build_kernel(edge_set))
    v_aa, v_tt = edge_set.aa, edge_set.tt
    init = turbo_init(minor.k1, minor.k4, v_aa, v_tt)
    result = turbo_iterate(minor, v_aa, v_tt, init, config)
    coords = coordinates_from_edges(result.v_at, anchors, index)
    return coords, result


def solve_landmarks(meas, anchors: AnchorSet | np.ndarray,
                    conformation: Conformation | None = None,
                    config: SolverConfig | None = None) -> LandmarkEstimate:
    """Estimate landmark world coordinates from one measurement set.

    Parameters
    ----------
    meas : MeasurementSet
    anchors : AnchorSet or ndarray (2, M)
        Known anchor positions; a raw array is validated and wrapped.
    conformation : Conformation, optional
        Known body shape; used only to cross-check the target count.
    config : SolverConfig, optional
        Defaults to the full estimator with standard iteration control.

    Returns
    -------
    LandmarkEstimate
    """
    cfg = config or SolverConfig()
    index = meas.index
    if not isinstance(anchors, AnchorSet):
        anchors = AnchorSet(anchors)
    if anchors.n_anchors != index.n_anchors:
        raise ValueError("anchor count does not match the measurement index")
    if conformation is not None and conformation.n_points != index.n_targets:
        raise ValueError("conformation size does not match the measurement index")

    if cfg.method == "mds":
        coords = classic_mds(meas.distances, anchors, index)
        return LandmarkEstimate(coords, 0, True, 0.0, cfg.method)

    if cfg.method == "smds_full":
        coords, result = _smds_from_polar(meas.distances, meas.angles,
                                          anchors, index, cfg)
        return LandmarkEstimate(coords, result.iterations, result.converged,
                                result.residual, cfg.method)

    # distance only: bootstrap bearings from an MDS embedding
    targets = classic_mds(meas.distances, anchors, index)
    all_coords = np.hstack([anchors.positions, targets])
    angles = reconstruct_angles(all_coords, index)
    angles[index.aa] = meas.angles[index.aa]
    if meas.tt_exact:
        angles[index.tt] = meas.angles[index.tt]
    coords, result = _smds_from_polar(meas.distances, angles, anchors, index, cfg)
    return LandmarkEstimate(coords, result.iterations, result.converged,
                            result.residual, cfg.method)

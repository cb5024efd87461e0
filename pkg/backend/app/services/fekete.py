"""Generalised Vandermonde matrices and discrete (weighted) Fekete search.

The scalar engine orthogonalises the mesh Vandermonde, picks a first subset by
QR with column pivoting and then refines it by single-row exchanges driven by
the coefficient matrix C = Q H^{-1}: |C[p, i]| is the factor by which |det|
changes when selected row i is replaced by candidate p.
"""
import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, lgamma
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.linalg as la
from loguru import logger

from ..config import VERSION, get_settings
from ..datasources.base import Mesh
from ..errors import (
    BudgetExceededError,
    DimensionError,
    InvalidWeightError,
    MeshTooSmallError,
    SingularConfigurationError,
)
from .currents import Current, DiscreteVectorMeasure, PointMassCurrent, as_measure, write_currents_csv
from .indexing import SpaceDims
from .polyspace import (
    Family,
    WeightVector,
    as_points,
    default_family,
    family_log_scale,
    pairing_matrix,
    scalar_basis_matrix,
    weight_descriptor,
)

PIVOT_FLOOR = 1e-300
EXCHANGE_TOL = 1e-12
MAX_SWEEPS = 100

VandermondeMatrix = np.ndarray


@dataclass(frozen=True)
class LogDet:
    value: float
    sign: complex
    singular: bool

    @classmethod
    def singular_value(cls) -> "LogDet":
        return cls(value=-np.inf, sign=0j, singular=True)


def log_abs_det(M: np.ndarray) -> LogDet:
    """log|det M| from a partially pivoted LU; singular when a pivot falls below 1e-300."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"log_abs_det needs a square matrix, got {M.shape}")
    if M.shape[0] == 0:
        return LogDet(value=0.0, sign=1.0 + 0j, singular=False)
    if not np.all(np.isfinite(M)):
        return LogDet.singular_value()
    lu, piv = la.lu_factor(M, check_finite=False)
    diag = np.diag(lu)
    if np.any(np.abs(diag) < PIVOT_FLOOR):
        return LogDet.singular_value()
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    phase = np.prod(diag / np.abs(diag)) * (-1) ** swaps
    return LogDet(value=float(np.sum(np.log(np.abs(diag)))), sign=complex(phase), singular=False)


def assemble_vandermonde(
    currents: Sequence[Current | DiscreteVectorMeasure],
    w: WeightVector,
    d: SpaceDims,
    family: Family = "monomial",
) -> VandermondeMatrix:
    """V[i, j] = T_i(q_j w^r) for N currents, rows in the given order."""
    if len(currents) != d.N:
        raise DimensionError(f"need exactly N={d.N} currents, got {len(currents)}")
    rows = []
    for T in currents:
        mu = as_measure(T)
        E = pairing_matrix(mu.points, mu.directions, w, d, family)
        rows.append(mu.masses @ E)
    return np.array(rows)


# ------------------------------------------------------------ results


def mean_log_diameter(component_log_dets: Sequence[float], ell_r: int) -> float:
    if ell_r == 0:
        return 0.0
    return float(np.mean([L / ell_r for L in component_log_dets]))


@dataclass
class FeketeConfiguration:
    """N point-mass currents; rows are (points[i], directions[i])."""

    points: np.ndarray
    directions: np.ndarray
    dims: SpaceDims
    log_abs_det: float
    component_log_dets: Optional[tuple[float, ...]] = None
    iterations: int = 0
    exchanges: int = 0
    weight: dict = field(default_factory=dict)

    @property
    def log_rth_diameter(self) -> float:
        if self.component_log_dets is not None:
            return mean_log_diameter(self.component_log_dets, self.dims.ell_r)
        if self.dims.weighted_degree == 0:
            return 0.0
        return self.log_abs_det / self.dims.weighted_degree

    @property
    def rth_diameter(self) -> float:
        return float(np.exp(self.log_rth_diameter))

    @property
    def currents(self) -> list[PointMassCurrent]:
        return [PointMassCurrent(x, v) for x, v in zip(self.points, self.directions)]

    @property
    def components(self) -> Optional[np.ndarray]:
        """0-based frame component per row, or None when a direction leaves the frame."""
        mags = np.abs(self.directions)
        labels = np.argmax(mags, axis=1)
        if np.any(np.abs(mags[np.arange(len(labels)), labels] - 1.0) > 1e-12):
            return None
        return labels

    def component_points(self, l: int) -> np.ndarray:
        labels = self.components
        if labels is None:
            raise DimensionError("configuration is not frame-directed")
        return self.points[labels == l]

    def as_measure(self, mass: float | None = None) -> DiscreteVectorMeasure:
        masses = np.full(self.dims.N, 1.0 / self.dims.N if mass is None else mass)
        return DiscreteVectorMeasure(self.points, self.directions, masses)

    def summary(self) -> dict:
        d = self.dims
        return {
            "dims": {"n": d.n, "r": d.r, "s": d.s, "m_r": d.m_r, "N": d.N, "ell_r": d.ell_r},
            "log_abs_det": self.log_abs_det,
            "rth_diameter": self.rth_diameter,
            "component_log_dets": list(self.component_log_dets) if self.component_log_dets else None,
            "iterations": self.iterations,
            "exchanges": self.exchanges,
            "weight": self.weight,
            "version": VERSION,
        }


@dataclass(frozen=True)
class ScalarFeketeResult:
    indices: np.ndarray
    points: np.ndarray
    log_abs_det: float
    sweeps: int
    exchanges: int


# ------------------------------------------------------------ scalar engine


def _mesh_points(mesh: Mesh | np.ndarray) -> np.ndarray:
    return mesh.points if isinstance(mesh, Mesh) else as_points(mesh)


def _scalar_weight_values(w_l, pts: np.ndarray) -> np.ndarray:
    if isinstance(w_l, WeightVector):
        if w_l.s != 1:
            raise DimensionError("scalar Fekete search needs a single weight component")
        return w_l.evaluate(pts)[:, 0]
    values = np.asarray(w_l(pts), dtype=float).reshape(-1)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise InvalidWeightError("scalar weight is not strictly positive and finite on the mesh")
    return values


def scalar_fekete(
    mesh: Mesh | np.ndarray,
    w_l,
    d: SpaceDims,
    exclude: Optional[Iterable[int]] = None,
    family: Optional[Family] = None,
    max_sweeps: int = MAX_SWEEPS,
) -> ScalarFeketeResult:
    """Weighted Fekete points of degree r among the mesh points (m_r of them)."""
    pts = _mesh_points(mesh)
    fam = family or default_family(pts)
    excluded = set(exclude or ())
    candidates = np.array([i for i in range(pts.shape[0]) if i not in excluded], dtype=int)
    m = d.m_r
    if len(candidates) < m:
        raise MeshTooSmallError(f"{len(candidates)} candidate points for m_r={m}", field="mesh_density")

    cand = pts[candidates]
    A = scalar_basis_matrix(cand, d, fam) * (_scalar_weight_values(w_l, cand) ** d.r)[:, None]
    Q, R = np.linalg.qr(A)
    rdiag = np.abs(np.diag(R))
    if rdiag.max() == 0.0 or np.any(rdiag <= 10 * max(A.shape) * np.finfo(float).eps * rdiag.max()):
        raise SingularConfigurationError(f"mesh of {len(cand)} points is not unisolvent for degree {d.r}")

    _, piv = la.qr(Q.conj().T, mode="r", pivoting=True)
    S = [int(p) for p in piv[:m]]
    C = np.linalg.solve(Q[S].T, Q.T).T

    sweeps, exchanges = 0, 0
    while sweeps < max_sweeps:
        sweeps += 1
        improved = False
        for i in range(m):
            ratios = np.abs(C[:, i])
            ratios[S] = 0.0
            p = int(np.argmax(ratios))
            if ratios[p] > 1.0 + EXCHANGE_TOL:
                col = C[:, i].copy()
                row = C[p].copy()
                row[i] -= 1.0
                C -= np.outer(col, row) / col[p]
                S[i] = p
                exchanges += 1
                improved = True
        C = np.linalg.solve(Q[S].T, Q.T).T
        logger.debug(f"[fekete] sweep {sweeps} exchanges so far {exchanges}")
        if not improved:
            break
    else:
        logger.warning(f"[fekete] exchange stopped after {max_sweeps} sweeps without settling")

    S.sort()
    ld = log_abs_det(Q[S])
    if ld.singular:
        raise SingularConfigurationError("selected subset is singular")
    value = ld.value + float(np.sum(np.log(rdiag))) - family_log_scale(d, fam)
    idx = candidates[S]
    return ScalarFeketeResult(indices=idx, points=pts[idx], log_abs_det=value, sweeps=sweeps, exchanges=exchanges)


def block_log_det(points: np.ndarray, w_l, d: SpaceDims, family: Optional[Family] = None) -> LogDet:
    """log|det| of the scalar weighted Vandermonde on m_r given points (monomial normalisation)."""
    pts = as_points(points)
    fam = family or default_family(pts)
    A = scalar_basis_matrix(pts, d, fam) * (_scalar_weight_values(w_l, pts) ** d.r)[:, None]
    ld = log_abs_det(A)
    if ld.singular:
        return ld
    return LogDet(value=ld.value - family_log_scale(d, fam), sign=ld.sign, singular=False)


# ------------------------------------------------------------ vector engine


def _interleave(blocks: list[np.ndarray], d: SpaceDims) -> tuple[np.ndarray, np.ndarray]:
    """Row h*s + l carries point h of component l with direction u_l."""
    n = blocks[0].shape[1]
    points = np.empty((d.N, n), dtype=complex)
    directions = np.zeros((d.N, d.s), dtype=complex)
    for l, block in enumerate(blocks):
        points[l::d.s] = block
        directions[l::d.s, l] = 1.0
    return points, directions


def vector_fekete(
    mesh: Mesh | np.ndarray,
    w: WeightVector,
    d: SpaceDims,
    disjoint_components: bool = False,
    joint_exchange: bool = False,
    family: Optional[Family] = None,
) -> FeketeConfiguration:
    """Frame-directed configuration: component l holds the w_l-Fekete points with direction u_l."""
    if w.s != d.s:
        raise DimensionError(f"weight has {w.s} components, space has s={d.s}", field="weight")
    pts = _mesh_points(mesh)
    used: set[int] = set()
    blocks, logs, sweeps, exchanges = [], [], 0, 0
    for l in range(d.s):
        res = scalar_fekete(pts, w.component(l), d, exclude=used if disjoint_components else None, family=family)
        if disjoint_components:
            used.update(int(i) for i in res.indices)
        blocks.append(res.points)
        logs.append(res.log_abs_det)
        sweeps += res.sweeps
        exchanges += res.exchanges

    if joint_exchange and d.s > 1:
        blocks, logs, extra = _joint_exchange(blocks, logs, w, d, family)
        exchanges += extra

    points, directions = _interleave(blocks, d)
    config = FeketeConfiguration(
        points=points,
        directions=directions,
        dims=d,
        log_abs_det=float(np.sum(logs)),
        component_log_dets=tuple(float(v) for v in logs),
        iterations=sweeps,
        exchanges=exchanges,
        weight=weight_descriptor(w),
    )
    logger.info(f"[fekete] n={d.n} r={d.r} s={d.s} N={d.N} log|det|={config.log_abs_det:.6f} delta={config.rth_diameter:.6f}")
    return config


def _joint_exchange(blocks, logs, w: WeightVector, d: SpaceDims, family, max_sweeps: int = MAX_SWEEPS):
    """Swap frame directions between two rows of different components while the total log|det| grows."""
    blocks = [b.copy() for b in blocks]
    logs = list(logs)
    accepted = 0
    for _ in range(max_sweeps):
        improved = False
        for l in range(d.s):
            for k in range(l + 1, d.s):
                for h in range(d.m_r):
                    for g in range(d.m_r):
                        bl, bk = blocks[l].copy(), blocks[k].copy()
                        bl[h], bk[g] = blocks[k][g], blocks[l][h]
                        new_l = block_log_det(bl, w.component(l), d, family)
                        new_k = block_log_det(bk, w.component(k), d, family)
                        if new_l.singular or new_k.singular:
                            continue
                        if new_l.value + new_k.value > logs[l] + logs[k] + EXCHANGE_TOL:
                            blocks[l], blocks[k] = bl, bk
                            logs[l], logs[k] = new_l.value, new_k.value
                            accepted += 1
                            improved = True
        if not improved:
            break
    logger.debug(f"[fekete] joint exchange accepted {accepted} direction swaps")
    return blocks, logs, accepted


def brute_force_fekete(
    mesh: Mesh | np.ndarray,
    w: WeightVector,
    d: SpaceDims,
    budget: Optional[int] = None,
    chunk: int = 4096,
) -> FeketeConfiguration:
    """Exact maximiser of |det| over all N-subsets of mesh x {u_1..u_s}."""
    budget = budget or get_settings().brute_force_budget
    pts = _mesh_points(mesh)
    M = pts.shape[0]
    total = comb(M * d.s, d.N)
    if total > budget:
        raise BudgetExceededError(f"{total} subsets exceed the enumeration budget {budget}")
    fam = default_family(pts)
    cand_pts = np.repeat(pts, d.s, axis=0)
    cand_dirs = np.tile(np.eye(d.s, dtype=complex), (M, 1))
    E = pairing_matrix(cand_pts, cand_dirs, w, d, fam)

    best_val, best_rows = -np.inf, None
    it = combinations(range(M * d.s), d.N)
    while True:
        batch = [c for _, c in zip(range(chunk), it)]
        if not batch:
            break
        idx = np.array(batch)
        _, logabs = np.linalg.slogdet(E[idx])
        j = int(np.argmax(logabs))
        if logabs[j] > best_val:
            best_val, best_rows = float(logabs[j]), idx[j]
    if best_rows is None or not np.isfinite(best_val):
        raise SingularConfigurationError("every candidate subset is singular")
    logger.debug(f"[fekete] brute force scanned {total} subsets")
    return FeketeConfiguration(
        points=cand_pts[best_rows],
        directions=cand_dirs[best_rows],
        dims=d,
        log_abs_det=best_val - d.s * family_log_scale(d, fam),
        weight=weight_descriptor(w),
    )


# ------------------------------------------------------ direction search


def _row_blocks(points: np.ndarray, w: WeightVector, d: SpaceDims, family: Family) -> np.ndarray:
    """(N, s, N): B[i, c, :] is the row current i produces with direction e_c."""
    B = np.empty((points.shape[0], d.s, d.N), dtype=complex)
    for c in range(d.s):
        dirs = np.zeros((points.shape[0], d.s), dtype=complex)
        dirs[:, c] = 1.0
        B[:, c, :] = pairing_matrix(points, dirs, w, d, family)
    return B


def _ascend(B: np.ndarray, directions: np.ndarray, max_sweeps: int, tol: float) -> tuple[np.ndarray, float, int]:
    dirs = directions.copy()
    V = np.einsum("ic,icj->ij", np.conj(dirs), B)
    current = log_abs_det(V)
    if current.singular:
        return dirs, -np.inf, 0
    value = current.value
    for sweep in range(1, max_sweeps + 1):
        start = value
        for i in range(V.shape[0]):
            e = np.zeros(V.shape[0])
            e[i] = 1.0
            g = B[i] @ np.linalg.solve(V, e)
            gain = np.linalg.norm(g)
            if gain <= 1.0 + EXCHANGE_TOL:
                continue
            dirs[i] = g / gain
            V[i] = np.conj(dirs[i]) @ B[i]
            value += float(np.log(gain))
        if value - start < tol:
            return dirs, value, sweep
    return dirs, value, max_sweeps


def continuous_direction_ascent(
    config: FeketeConfiguration,
    w: WeightVector,
    d: SpaceDims,
    restarts: int = 4,
    seed: int = 0,
    max_sweeps: int = 200,
    tol: float = 1e-12,
) -> FeketeConfiguration:
    """Maximise |det| over unit directions with the points held fixed.

    Each row update is the largest-singular-direction step v_i <- g/|g| with
    g = B_i V^{-1} e_i, which never decreases |det|. The frame start is kept
    among the candidates so the result is never below the frame value.
    """
    fam = default_family(config.points)
    B = _row_blocks(config.points, w, d, fam)
    shift = d.s * family_log_scale(d, fam)
    best_dirs, best_val, best_iters = config.directions, config.log_abs_det + shift, 0
    rng = np.random.default_rng(seed)
    starts = [config.directions]
    for _ in range(restarts):
        z = rng.standard_normal((d.N, d.s)) + 1j * rng.standard_normal((d.N, d.s))
        starts.append(z / np.linalg.norm(z, axis=1, keepdims=True))
    for k, start in enumerate(starts):
        dirs, value, iters = _ascend(B, start, max_sweeps, tol)
        logger.debug(f"[fekete] direction restart {k}: log|det|={value:.6f} after {iters} sweeps")
        if value > best_val + EXCHANGE_TOL:
            best_dirs, best_val, best_iters = dirs, value, iters
    return FeketeConfiguration(
        points=config.points,
        directions=best_dirs,
        dims=d,
        log_abs_det=float(best_val - shift),
        component_log_dets=config.component_log_dets if best_dirs is config.directions else None,
        iterations=best_iters,
        exchanges=config.exchanges,
        weight=config.weight,
    )


def log_factorial(N: int) -> float:
    return lgamma(N + 1)


def write_configuration(config: FeketeConfiguration, out_dir: Path, stem: str, header: dict | None = None) -> list[Path]:
    """Currents CSV plus a JSON sidecar with the determinant, diameter, dims and weight."""
    out_dir = Path(out_dir)
    csv_path = write_currents_csv(config.as_measure(mass=1.0), out_dir / f"{stem}.csv", header=header)
    sidecar = out_dir / f"{stem}.json"
    sidecar.write_text(json.dumps(config.summary(), indent=2, default=str), encoding="utf-8")
    return [csv_path, sidecar]

"""r-th weighted diameters, the product formula and limit extrapolation."""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from ..datasources.base import Mesh
from .fekete import (
    FeketeConfiguration,
    continuous_direction_ascent,
    log_factorial,
    mean_log_diameter,
    scalar_fekete,
    vector_fekete,
)
from .indexing import SpaceDims
from .polyspace import WeightVector

MESH_TOLERANCE = 1e-12


def log_rth_diameter_scalar(mesh: Mesh | np.ndarray, w_l, d: SpaceDims) -> float:
    if d.ell_r == 0:
        return 0.0
    return scalar_fekete(mesh, w_l, d).log_abs_det / d.ell_r


def rth_diameter_scalar(mesh: Mesh | np.ndarray, w_l, d: SpaceDims) -> float:
    return float(np.exp(log_rth_diameter_scalar(mesh, w_l, d)))


def rth_diameter_vector(mesh: Mesh | np.ndarray, w: WeightVector, d: SpaceDims) -> float:
    return vector_fekete(mesh, w, d).rth_diameter


@dataclass(frozen=True)
class ProductFormulaReport:
    lhs: float
    rhs: float
    gap: float
    bound: float

    @property
    def passed(self) -> bool:
        return abs(self.gap) <= self.bound


def product_formula_check(
    mesh: Mesh | np.ndarray,
    w: WeightVector,
    d: SpaceDims,
    continuous_directions: bool = False,
    restarts: int = 4,
    seed: int = 0,
    config: Optional[FeketeConfiguration] = None,
) -> ProductFormulaReport:
    """Compare log delta(K, U) with the mean of the scalar log delta_l(K).

    The admissible gap is log(N!)/(2 s ell_r) plus a rounding tolerance.
    """
    config = config or vector_fekete(mesh, w, d)
    scalar_logs = [scalar_fekete(mesh, w.component(l), d).log_abs_det for l in range(d.s)]
    rhs = mean_log_diameter(scalar_logs, d.ell_r)
    if continuous_directions:
        config = continuous_direction_ascent(config, w, d, restarts=restarts, seed=seed)
    lhs = config.log_rth_diameter
    slack = log_factorial(d.N) / (2 * d.weighted_degree) if d.weighted_degree else 0.0
    report = ProductFormulaReport(lhs=lhs, rhs=rhs, gap=lhs - rhs, bound=slack + MESH_TOLERANCE)
    logger.debug(f"[diameter] r={d.r} gap={report.gap:.3e} bound={report.bound:.3e}")
    return report


@dataclass(frozen=True)
class Extrapolation:
    limit: float
    coefficients: tuple[float, ...]
    residual: float


def extrapolate_limit(rs: Sequence[int], values: Sequence[float], r_min: int = 4) -> Extrapolation:
    """Fit log delta_r = L + a log(r)/r + b/r + c/r^2 by least squares; returns exp(L)."""
    rs = np.asarray(rs, dtype=float)
    logs = np.log(np.asarray(values, dtype=float))
    keep = rs >= r_min
    rs, logs = rs[keep], logs[keep]
    if rs.size < 4:
        raise ValueError(f"need at least 4 degrees >= {r_min} to extrapolate, got {rs.size}")
    design = np.stack([np.ones_like(rs), np.log(rs) / rs, 1.0 / rs, 1.0 / rs**2], axis=1)
    coef, *_ = np.linalg.lstsq(design, logs, rcond=None)
    residual = float(np.max(np.abs(design @ coef - logs)))
    return Extrapolation(limit=float(np.exp(coef[0])), coefficients=tuple(float(c) for c in coef), residual=residual)


def is_non_increasing(values: Sequence[float], tol: float = 0.0) -> bool:
    return all(b <= a * (1 + tol) for a, b in zip(values, values[1:]))

r"""Weighted Gram matrices, free energy, Bernstein-Markov constants and the Gram sandwich.

G[i, j] = sum_a m_a conj((v_a, q_i w^r(x_a))_U) (v_a, q_j w^r(x_a))_U.

The factorisation is taken from a Householder QR of sqrt(M) E rather than a
Cholesky of the formed product, so R^H R = G and R^H is the Cholesky factor.
"""
from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np
import scipy.linalg as la
from loguru import logger

from ..config import get_settings
from ..datasources.base import Mesh
from ..errors import BudgetExceededError, DimensionError, NotDeterminingError
from .currents import DiscreteVectorMeasure, fekete_bm_measure
from .fekete import FeketeConfiguration, log_factorial
from .indexing import SpaceDims
from .polyspace import (
    Family,
    WeightVector,
    as_points,
    change_of_basis,
    default_family,
    eval_weighted_basis_matrix,
    family_log_scale,
    pairing_matrix,
    scalar_basis_matrix,
)


@dataclass(frozen=True)
class GramSystem:
    gram: np.ndarray
    cholesky: np.ndarray
    coefficients: np.ndarray
    log_det: float
    family: Family
    dims: SpaceDims
    weight: WeightVector
    measure: DiscreteVectorMeasure

    def basis_at(self, points) -> np.ndarray:
        """(M, s, N): the orthonormal fields b_h w^r evaluated at each point."""
        B = eval_weighted_basis_matrix(points, self.weight, self.dims, self.family)
        return np.einsum("mjc,jh->mch", B, self.coefficients)

    def monomial_coefficients(self) -> np.ndarray:
        """Coefficients of b_h in the monomial basis q_j."""
        U = change_of_basis(self.dims, self.family)
        return np.kron(U, np.eye(self.dims.s)) @ self.coefficients

    def pairings(self, omega=None, omega_power: int = 0) -> np.ndarray:
        """(A, N) matrix (v_a, b_h w^r omega^k (x_a))_U."""
        mu = self.measure
        E = pairing_matrix(mu.points, mu.directions, self.weight, self.dims, self.family, omega_power, omega)
        return E @ self.coefficients


def gram_system(
    mu: DiscreteVectorMeasure,
    w: WeightVector,
    d: SpaceDims,
    family: Optional[Family] = None,
) -> GramSystem:
    if mu.s != d.s:
        raise DimensionError(f"measure directions have s={mu.s}, space has s={d.s}")
    fam = family or default_family(mu.points)
    E = pairing_matrix(mu.points, mu.directions, w, d, fam)
    if E.shape[0] < d.N:
        raise NotDeterminingError(f"{E.shape[0]} atoms cannot determine a space of dimension {d.N}")
    Q, R = np.linalg.qr(np.sqrt(mu.masses)[:, None] * E)
    rdiag = np.abs(np.diag(R))
    if rdiag.max() == 0.0 or np.any(rdiag <= 10 * max(E.shape) * np.finfo(float).eps * rdiag.max()):
        raise NotDeterminingError(f"Gram matrix of {mu.size} atoms is not positive definite at N={d.N}")
    phase = np.diag(R) / rdiag
    R = np.conj(phase)[:, None] * R
    coefficients = la.solve_triangular(R, np.eye(d.N), lower=False)
    gram = E.conj().T @ (mu.masses[:, None] * E)
    log_det = 2.0 * float(np.sum(np.log(rdiag))) - 2.0 * d.s * family_log_scale(d, fam)
    logger.debug(f"[gram] N={d.N} atoms={mu.size} log det G={log_det:.6f}")
    return GramSystem(
        gram=0.5 * (gram + gram.conj().T),
        cholesky=R.conj().T,
        coefficients=coefficients,
        log_det=log_det,
        family=fam,
        dims=d,
        weight=w,
        measure=mu,
    )


# ---------------------------------------------------------- free energy


def log_free_energy(mu: DiscreteVectorMeasure, w: WeightVector, d: SpaceDims) -> float:
    """log Z = log N! + log det G."""
    return log_factorial(d.N) + gram_system(mu, w, d).log_det


def free_energy(mu: DiscreteVectorMeasure, w: WeightVector, d: SpaceDims) -> float:
    return float(np.exp(log_free_energy(mu, w, d)))


def brute_force_free_energy(
    mu: DiscreteVectorMeasure,
    w: WeightVector,
    d: SpaceDims,
    budget: Optional[int] = None,
    chunk: int = 4096,
) -> float:
    """Sum of prod m_{a_i} |det W(a_1..a_N)|^2 over every N-tuple of atoms."""
    budget = budget or get_settings().free_energy_budget
    total = mu.size**d.N
    if total > budget:
        raise BudgetExceededError(f"{total} atom tuples exceed the free-energy budget {budget}")
    E = pairing_matrix(mu.points, mu.directions, w, d, "monomial")
    acc = 0.0
    it = product(range(mu.size), repeat=d.N)
    while True:
        batch = [t for _, t in zip(range(chunk), it)]
        if not batch:
            break
        idx = np.array(batch)
        dets = np.linalg.det(E[idx])
        acc += float(np.sum(np.prod(mu.masses[idx], axis=1) * np.abs(dets) ** 2))
    return acc


# ---------------------------------------------------- Bernstein-Markov


@dataclass(frozen=True)
class KernelMaximum:
    value: float
    point: np.ndarray
    direction: np.ndarray


def kernel_maximum(gs: GramSystem, points, chunk: int = 2048) -> KernelMaximum:
    """max over points of sqrt(lambda_max(Phi(x) Phi(x)^H)), Phi(x) the (s, N) basis values."""
    pts = as_points(points)
    best = KernelMaximum(value=-np.inf, point=pts[0], direction=np.zeros(gs.dims.s, dtype=complex))
    for start in range(0, pts.shape[0], chunk):
        block = pts[start:start + chunk]
        phi = gs.basis_at(block)
        K = np.einsum("mch,mdh->mcd", phi, np.conj(phi))
        vals, vecs = np.linalg.eigh(K)
        top = vals[:, -1]
        i = int(np.argmax(top))
        if top[i] > best.value:
            best = KernelMaximum(value=float(top[i]), point=block[i], direction=vecs[i, :, -1])
    return KernelMaximum(value=float(np.sqrt(max(best.value, 0.0))), point=best.point, direction=best.direction)


def bm_constant(
    mu: DiscreteVectorMeasure,
    w: WeightVector,
    d: SpaceDims,
    mesh: Mesh | np.ndarray,
    gram: Optional[GramSystem] = None,
) -> float:
    gs = gram or gram_system(mu, w, d)
    pts = mesh.points if isinstance(mesh, Mesh) else mesh
    return kernel_maximum(gs, pts).value


@dataclass(frozen=True)
class TensorBMReport:
    t: int
    bm_constant: float
    min_slack: float
    tight_slack: float

    @property
    def passed(self) -> bool:
        return self.min_slack >= -1e-10 and self.tight_slack >= -1e-10


def _sup_norms(gs: GramSystem, points: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    phi = gs.basis_at(points)
    values = np.einsum("mch,kh->kmc", phi, coeffs)
    return np.max(np.linalg.norm(values, axis=2), axis=1)


def tensor_bm_check(
    mu: DiscreteVectorMeasure,
    w: WeightVector,
    d: SpaceDims,
    t: int,
    mesh: Mesh | np.ndarray,
    samples: int = 8,
    seed: int = 0,
) -> TensorBMReport:
    """Check max prod ||omega_i(x_i)|| <= M_r^t prod ||omega_i||_{v,mu} on random tuples.

    Fields are drawn in orthonormal coordinates, where ||omega||_{v,mu} is the
    Euclidean norm of the coefficient vector. The sup over mesh tuples of the
    product splits into the product of per-factor sups.
    """
    if not 1 <= t <= 3:
        raise DimensionError(f"tensor factor count must be 1..3, got {t}")
    gs = gram_system(mu, w, d)
    pts = mesh.points if isinstance(mesh, Mesh) else as_points(mesh)
    peak = kernel_maximum(gs, pts)
    log_M = np.log(peak.value)
    rng = np.random.default_rng(seed)

    slacks = []
    for _ in range(samples):
        coeffs = rng.standard_normal((t, d.N)) + 1j * rng.standard_normal((t, d.N))
        sups = _sup_norms(gs, pts, coeffs)
        lhs = float(np.sum(np.log(sups)))
        rhs = t * log_M + float(np.sum(np.log(np.linalg.norm(coeffs, axis=1))))
        slacks.append(rhs - lhs)

    phi_star = gs.basis_at(peak.point[None, :])[0]
    a_star = np.conj(phi_star).T @ peak.direction
    tight = np.tile(a_star, (t, 1))
    sups = _sup_norms(gs, pts, tight)
    tight_slack = t * log_M + t * float(np.log(np.linalg.norm(a_star))) - float(np.sum(np.log(sups)))
    return TensorBMReport(t=t, bm_constant=peak.value, min_slack=float(min(slacks)), tight_slack=tight_slack)


def weighted_lebesgue_factor(
    config: FeketeConfiguration,
    w: WeightVector,
    d: SpaceDims,
    mesh: Mesh | np.ndarray,
) -> list[float]:
    """Per component, max over the mesh of sum_h |l_h(x)| w_l^r(x) / w_l^r(x_h)."""
    pts = mesh.points if isinstance(mesh, Mesh) else as_points(mesh)
    fam = default_family(pts)
    factors = []
    for l in range(d.s):
        nodes = config.component_points(l)
        wl = w.component(l)
        A_nodes = scalar_basis_matrix(nodes, d, fam) * (wl(nodes) ** d.r)[:, None]
        A_mesh = scalar_basis_matrix(pts, d, fam) * (wl(pts) ** d.r)[:, None]
        L = np.linalg.solve(A_nodes.T, A_mesh.T).T
        factors.append(float(np.max(np.sum(np.abs(L), axis=1))))
    return factors


# --------------------------------------------------------------- sandwich


@dataclass(frozen=True)
class SandwichReport:
    log_lower: float
    log_diameter: float
    log_upper: float
    bm_constant: float
    log_det_gram: float

    @property
    def passed(self) -> bool:
        return self.log_lower <= self.log_diameter + 1e-9 and self.log_diameter <= self.log_upper + 1e-9


def sandwich_bounds(
    config: FeketeConfiguration,
    w: WeightVector,
    d: SpaceDims,
    mesh: Mesh | np.ndarray,
) -> SandwichReport:
    """Gram sandwich around the computed diameter for the measure built on config's components.

    lower = mu(K)^{-(n+1)/(2nr)} (N! det G)^{(n+1)/(2nrN)}
    upper = M_r^{(n+1)/(nr)} (N! det G)^{(n+1)/(2nrN)}
    """
    if d.r < 1:
        raise DimensionError("the Gram sandwich needs r >= 1", field="r")
    mu, _ = fekete_bm_measure([config.component_points(l) for l in range(d.s)], d)
    gs = gram_system(mu, w, d)
    pts = mesh.points if isinstance(mesh, Mesh) else mesh
    M_r = kernel_maximum(gs, pts).value
    e = (d.n + 1) / (2 * d.n * d.r * d.N)
    log_z = log_factorial(d.N) + gs.log_det
    report = SandwichReport(
        log_lower=-(d.n + 1) / (2 * d.n * d.r) * np.log(mu.total) + e * log_z,
        log_diameter=config.log_rth_diameter,
        log_upper=(d.n + 1) / (d.n * d.r) * np.log(M_r) + e * log_z,
        bm_constant=M_r,
        log_det_gram=gs.log_det,
    )
    logger.debug(f"[gram] sandwich r={d.r}: {report.log_lower:.6f} <= {report.log_diameter:.6f} <= {report.log_upper:.6f}")
    return report

r"""The energy function f_r(t) = -(n+1)/(2nrN) log det G(t) and its derivatives.

G(t) is the Gram matrix for the weight w_l(x) exp(-t omega_l(x)). Three routes
compute f'_r and f''_r:

  closed  from the orthonormal basis at t: with P, Q and R the pairings of
          b_h w^r, b_h w^r omega and b_h w^r omega^2 against the atoms,
          X = P^H M Q, and
            f'  = (n+1)/(nN) Re tr X
            f'' = (n+1) r/(nN) [Re tr X^2 + |X|_F^2 - Re tr P^H M R - tr Q^H M Q]
  trace   Jacobi's formula on Cholesky solves of the explicit G, G', G''
  fd      central differences of f_r with step h
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as la
from loguru import logger

from ..errors import DimensionError, NotDeterminingError
from .currents import DiscreteVectorMeasure, random_measure
from .gram import gram_system
from .indexing import SpaceDims, dims
from .polyspace import (
    FieldWeight,
    OmegaField,
    PolynomialOmegaField,
    WeightComponent,
    WeightVector,
    default_family,
    pairing_matrix,
    perturbed,
)

FD_STEP = 1e-4
ROUTES = ("closed", "trace", "fd")


@dataclass
class EnergyCurve:
    t: np.ndarray
    f: np.ndarray
    first: dict[str, np.ndarray] = field(default_factory=dict)
    second: dict[str, np.ndarray] = field(default_factory=dict)

    def relative_gap(self, a: str, b: str, order: int = 1, atol: float = 1e-12) -> float:
        x, y = (self.first[a], self.first[b]) if order == 1 else (self.second[a], self.second[b])
        scale = np.maximum(np.maximum(np.abs(x), np.abs(y)), atol)
        return float(np.max(np.abs(x - y) / scale))


def _prefactor(d: SpaceDims) -> float:
    return (d.n + 1) / (2 * d.n * d.r * d.N)


def energy_value(mu: DiscreteVectorMeasure, w: WeightVector, omega: OmegaField, d: SpaceDims, t: float) -> float:
    return -_prefactor(d) * gram_system(mu, perturbed(w, omega, t), d).log_det


def closed_form_derivatives(mu, w, omega, d: SpaceDims, t: float) -> tuple[float, float, float]:
    gs = gram_system(mu, perturbed(w, omega, t), d)
    m = mu.masses[:, None]
    P = gs.pairings()
    Q = gs.pairings(omega, 1)
    R = gs.pairings(omega, 2)
    X = P.conj().T @ (m * Q)
    tr_y = np.sum(m * np.conj(P) * R).real
    z = float(np.sum(m * np.abs(Q) ** 2))
    scale = (d.n + 1) / (d.n * d.N)
    first = scale * float(np.trace(X).real)
    second = scale * d.r * (float(np.trace(X @ X).real) + float(np.sum(np.abs(X) ** 2)) - tr_y - z)
    return -_prefactor(d) * gs.log_det, first, second


def trace_route_derivatives(mu, w, omega, d: SpaceDims, t: float) -> tuple[float, float]:
    wt = perturbed(w, omega, t)
    fam = default_family(mu.points)
    m = mu.masses[:, None]
    E0 = pairing_matrix(mu.points, mu.directions, wt, d, fam)
    E1 = pairing_matrix(mu.points, mu.directions, wt, d, fam, 1, omega)
    E2 = pairing_matrix(mu.points, mu.directions, wt, d, fam, 2, omega)
    H = lambda A, B: A.conj().T @ (m * B)
    G = H(E0, E0)
    G1 = -d.r * (H(E0, E1) + H(E1, E0))
    G2 = d.r**2 * (H(E0, E2) + 2 * H(E1, E1) + H(E2, E0))
    try:
        factor = la.cho_factor(G, lower=True)
    except la.LinAlgError as exc:
        raise NotDeterminingError(f"Gram matrix not positive definite at t={t}") from exc
    A1 = la.cho_solve(factor, G1)
    A2 = la.cho_solve(factor, G2)
    c = _prefactor(d)
    first = -c * float(np.trace(A1).real)
    second = c * float((np.trace(A1 @ A1) - np.trace(A2)).real)
    return first, second


def finite_difference_derivatives(mu, w, omega, d: SpaceDims, t: float, h: float = FD_STEP) -> tuple[float, float]:
    fm, f0, fp = (energy_value(mu, w, omega, d, t + k * h) for k in (-1, 0, 1))
    return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / h**2


def _point(mu, w, omega, d, t, routes, h):
    f, d1, d2 = closed_form_derivatives(mu, w, omega, d, t)
    out = {"f": f, "closed": (d1, d2)}
    if "trace" in routes:
        out["trace"] = trace_route_derivatives(mu, w, omega, d, t)
    if "fd" in routes:
        out["fd"] = finite_difference_derivatives(mu, w, omega, d, t, h)
    return out


def energy_curve(
    mu: DiscreteVectorMeasure,
    w: WeightVector,
    omega: OmegaField,
    d: SpaceDims,
    t_values: Sequence[float],
    routes: Sequence[str] = ROUTES,
    h: float = FD_STEP,
    workers: int = 1,
) -> EnergyCurve:
    if d.r < 1:
        raise DimensionError("the energy function is defined for r >= 1", field="r")
    ts = np.asarray(t_values, dtype=float)
    job = lambda t: _point(mu, w, omega, d, float(t), routes, h)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(job, ts))
    else:
        points = [job(t) for t in ts]
    curve = EnergyCurve(t=ts, f=np.array([p["f"] for p in points]))
    for route in ("closed", *[r for r in routes if r != "closed"]):
        curve.first[route] = np.array([p[route][0] for p in points])
        curve.second[route] = np.array([p[route][1] for p in points])
    logger.debug(f"[energy] r={d.r} N={d.N} evaluated {len(ts)} parameters over routes {tuple(curve.first)}")
    return curve


def random_instance(
    rng: np.random.Generator, n: int = 1, r_max: int = 6, s_max: int = 3
) -> tuple[DiscreteVectorMeasure, FieldWeight, PolynomialOmegaField, SpaceDims]:
    """A determining random measure with a random weight and test field on [-1, 1]^n."""
    r = int(rng.integers(1, r_max + 1))
    s = int(rng.integers(1, s_max + 1))
    d = dims(n, r, s)
    mu = random_measure(rng, 2 * d.N + 4, s, n, complex_directions=False)
    components = [
        WeightComponent("constant", float(rng.uniform(0.5, 2.0)))
        if rng.random() < 0.5
        else WeightComponent("gaussian", float(rng.uniform(0.0, 1.0)))
        for _ in range(s)
    ]
    omega = PolynomialOmegaField.random(rng, n, s, degree=2)
    return mu, FieldWeight(components), omega, d

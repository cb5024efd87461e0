"""Equilibrium-measure oracles for the model sets, Fekete empirical currents and Bergman densities."""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DimensionError
from .currents import DiscreteVectorMeasure
from .fekete import FeketeConfiguration
from .gram import GramSystem, gram_system
from .indexing import SpaceDims
from .polyspace import WeightVector

CAPACITY = {"interval": 0.5, "circle": 1.0}


@dataclass(frozen=True)
class EquilibriumOracle:
    """Arcsine law on [-1, 1] or normalised arc length on the unit circle.

    Moments come from K-point Gauss-Chebyshev (interval) or equispaced (circle)
    rules, exact for every m < 2K resp. m < K.
    """

    descriptor: str
    nodes: int = 256

    def __post_init__(self):
        if self.descriptor not in CAPACITY:
            raise DimensionError(f"no equilibrium oracle for {self.descriptor!r}", field="set")

    @property
    def capacity(self) -> float:
        return CAPACITY[self.descriptor]

    def moment(self, m: int) -> complex:
        if m < 0:
            raise DimensionError(f"moment order must be >= 0, got {m}")
        K = self.nodes
        if self.descriptor == "interval":
            if m >= 2 * K:
                raise DimensionError(f"moment {m} beyond the exactness of a {K}-node rule")
            theta = (2 * np.arange(1, K + 1) - 1) * np.pi / (2 * K)
            return complex(np.mean(np.cos(theta) ** m))
        if m >= K:
            raise DimensionError(f"moment {m} beyond the exactness of a {K}-node rule")
        z = np.exp(2j * np.pi * np.arange(K) / K)
        return complex(np.mean(z**m))


def fekete_empirical_current(config: FeketeConfiguration) -> DiscreteVectorMeasure:
    """T = (1/N) sum of the configuration's point masses."""
    return config.as_measure()


@dataclass(frozen=True)
class MomentRow:
    component: int
    m: int
    value: complex
    expected: complex

    @property
    def gap(self) -> float:
        return float(abs(self.value - self.expected))


def current_moment(current: DiscreteVectorMeasure, m: int, l: int) -> complex:
    """T(x^m u_l) for a measure on a one-dimensional set."""
    if current.points.shape[1] != 1:
        raise DimensionError("moments are defined for one-dimensional sets")
    x = current.points[:, 0]
    return complex(np.sum(current.masses * np.conj(current.directions[:, l]) * x**m))


def moment_test(current: DiscreteVectorMeasure, oracle: EquilibriumOracle, ms: Sequence[int] = (1, 2, 3, 4)) -> list[MomentRow]:
    """Compare component moments of T against (1/s) times the equilibrium moments."""
    s = current.s
    return [
        MomentRow(component=l, m=m, value=current_moment(current, m, l), expected=oracle.moment(m) / s)
        for l in range(s)
        for m in ms
    ]


@dataclass(frozen=True)
class BergmanDensity:
    value: float
    factors: np.ndarray


def bergman_density_current(
    mu: DiscreteVectorMeasure,
    w: WeightVector,
    d: SpaceDims,
    omega,
    gram: GramSystem | None = None,
) -> BergmanDensity:
    """sum_a m_a Re(omega(x_a), k_a conj(v_a))_U with k_a = (1/N) sum_h conj((b_h w^r, v_a)) b_h w^r (x_a).

    `factors` holds sum_h |(v_a, b_h w^r(x_a))|^2 / N per atom; it is 1 at every
    atom of a Fekete point-mass measure.
    """
    gs = gram or gram_system(mu, w, d)
    P = gs.pairings()
    phi = gs.basis_at(mu.points)
    k = np.einsum("ah,ach->ac", P, phi) / d.N
    values = np.asarray(omega(mu.points), dtype=complex)
    if values.shape != mu.directions.shape:
        raise DimensionError(f"test field returned {values.shape}, expected {mu.directions.shape}")
    integrand = np.sum(np.conj(values) * k * np.conj(mu.directions), axis=1).real
    factors = np.sum(np.abs(P) ** 2, axis=1) / d.N
    return BergmanDensity(value=float(np.sum(mu.masses * integrand)), factors=factors)

r"""Scalar and vector monomial bases, weight vectors and the Hadamard product.

Two evaluation families span the same space P_r:

  * ``monomial``  x^beta, the reporting basis of every determinant;
  * ``chebyshev`` prod_i T_{beta_i}(x_i), used internally on real sets where
    high-degree monomials are numerically collinear.

The change of basis is upper triangular in graded order, so determinants
computed in one family convert to the other by the constant returned from
``family_log_scale``.
"""
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from loguru import logger

from ..errors import DimensionError, InvalidWeightError
from .indexing import SpaceDims, dims, basis_components, basis_monomials, enumerate_multiindices

Family = Literal["monomial", "chebyshev"]
Point = np.ndarray
UVector = np.ndarray


def as_points(x) -> np.ndarray:
    """Coerce a point or a stack of points to a complex (M, n) array."""
    pts = np.asarray(x, dtype=complex)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise DimensionError(f"points must be (M, n), got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DimensionError("points must be finite")
    return pts


def default_family(points: np.ndarray) -> Family:
    pts = as_points(points)
    return "chebyshev" if np.all(pts.imag == 0.0) else "monomial"


def _power_table(pts: np.ndarray, r: int, family: Family) -> np.ndarray:
    """(M, n, r+1) table of per-coordinate univariate basis values."""
    M, n = pts.shape
    if family == "chebyshev":
        return npcheb.chebvander(pts, r)
    table = np.ones((M, n, r + 1), dtype=complex)
    for k in range(1, r + 1):
        table[:, :, k] = table[:, :, k - 1] * pts
    return table


def scalar_basis_matrix(points, d: SpaceDims, family: Family = "monomial") -> np.ndarray:
    """(M, m_r) values of the scalar basis at every point, graded order."""
    pts = as_points(points)
    if pts.shape[1] != d.n:
        raise DimensionError(f"point dimension {pts.shape[1]} != n={d.n}")
    alphas = enumerate_multiindices(d.n, d.r)
    table = _power_table(pts, d.r, family)
    out = np.ones((pts.shape[0], len(alphas)), dtype=complex)
    for i in range(d.n):
        out *= table[:, i, alphas[:, i]]
    return out


def eval_scalar_basis(x, d: SpaceDims) -> np.ndarray:
    return scalar_basis_matrix(x, d)[0]


def _lead(k: int) -> float:
    return 1.0 if k == 0 else 2.0 ** (k - 1)


def family_log_scale(d: SpaceDims, family: Family) -> float:
    """log|det U| for one scalar block, where family = monomial @ U."""
    if family == "monomial":
        return 0.0
    alphas = enumerate_multiindices(d.n, d.r)
    return float(sum(np.log(_lead(int(k))) for alpha in alphas for k in alpha))


def change_of_basis(d: SpaceDims, family: Family) -> np.ndarray:
    """Matrix U (m_r x m_r) with family_basis = monomial_basis @ U."""
    alphas = enumerate_multiindices(d.n, d.r)
    m = len(alphas)
    if family == "monomial":
        return np.eye(m)
    univariate = [npcheb.cheb2poly(np.eye(d.r + 1)[k]) for k in range(d.r + 1)]
    U = np.zeros((m, m))
    for col, beta in enumerate(alphas):
        for row, alpha in enumerate(alphas):
            if np.any(alpha > beta):
                continue
            coef = 1.0
            for i in range(d.n):
                poly = univariate[beta[i]]
                coef *= poly[alpha[i]] if alpha[i] < len(poly) else 0.0
            U[row, col] = coef
    return U


# ---------------------------------------------------------------- weights


@dataclass(frozen=True)
class WeightComponent:
    """One scalar weight field: constant c, or gaussian exp(-c|x|^2)."""

    kind: Literal["constant", "gaussian"]
    c: float = 1.0

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        if self.kind == "constant":
            return np.full(pts.shape[0], float(self.c))
        return np.exp(-self.c * np.sum(np.abs(pts) ** 2, axis=1))

    def describe(self) -> dict:
        return {"kind": self.kind, "c": self.c}


class WeightVector:
    """s strictly positive scalar fields on K; evaluate(points) -> (M, s)."""

    kind = "abstract"

    @property
    def s(self) -> int:
        raise NotImplementedError

    def _raw(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def evaluate(self, points) -> np.ndarray:
        pts = as_points(points)
        values = np.asarray(self._raw(pts), dtype=float)
        if values.shape != (pts.shape[0], self.s):
            raise InvalidWeightError(f"weight returned shape {values.shape}, expected {(pts.shape[0], self.s)}")
        if not np.all(np.isfinite(values)) or np.any(values <= 0.0):
            raise InvalidWeightError(f"{self.kind} weight is not strictly positive and finite on the given points")
        return values

    def power(self, points, r: int) -> np.ndarray:
        return self.evaluate(points) ** r

    def component(self, l: int) -> "ComponentView":
        if not 0 <= l < self.s:
            raise DimensionError(f"weight component {l} out of range for s={self.s}")
        return ComponentView(self, l)


@dataclass(frozen=True)
class ComponentView:
    """Scalar weight w_l seen as a 1-component WeightVector-like field."""

    parent: WeightVector
    index: int

    def __call__(self, points) -> np.ndarray:
        return self.parent.evaluate(points)[:, self.index]

    def describe(self) -> dict:
        return {"component": self.index, "of": self.parent.describe()}


class FieldWeight(WeightVector):
    kind = "field"

    def __init__(self, components: Sequence[WeightComponent]):
        if not components:
            raise InvalidWeightError("a weight needs at least one component")
        for comp in components:
            if comp.kind == "constant" and not comp.c > 0:
                raise InvalidWeightError(f"constant weight must be positive, got {comp.c}")
            if comp.kind == "gaussian" and not np.isfinite(comp.c):
                raise InvalidWeightError(f"gaussian rate must be finite, got {comp.c}")
        self.components = tuple(components)

    @property
    def s(self) -> int:
        return len(self.components)

    def _raw(self, pts):
        return np.stack([comp(pts) for comp in self.components], axis=1)

    def describe(self) -> dict:
        return {"kind": "field", "components": [c.describe() for c in self.components]}


class TabulatedWeight(WeightVector):
    """Values given on mesh points; lookup by nearest tabulated point."""

    kind = "tabulated"

    def __init__(self, points, values):
        self.points = as_points(points)
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim == 1:
            self.values = self.values[:, None]
        if self.values.shape[0] != self.points.shape[0]:
            raise InvalidWeightError("one weight row per tabulated point is required")

    @property
    def s(self) -> int:
        return self.values.shape[1]

    def _raw(self, pts):
        dist = np.linalg.norm(pts[:, None, :] - self.points[None, :, :], axis=2)
        return self.values[np.argmin(dist, axis=1)]

    def describe(self) -> dict:
        return {"kind": "tabulated", "points": int(self.points.shape[0]), "s": self.s}


OmegaField = Callable[[np.ndarray], np.ndarray]


@dataclass
class PolynomialOmegaField:
    """Real test components omega_l(x) = Re sum_beta c[beta, l] x^beta."""

    coefficients: np.ndarray
    n: int = 1
    degree: int = field(init=False)

    def __post_init__(self):
        self.coefficients = np.atleast_2d(np.asarray(self.coefficients, dtype=float))
        m = self.coefficients.shape[0]
        deg = 0
        while len(enumerate_multiindices(self.n, deg)) < m:
            deg += 1
        if len(enumerate_multiindices(self.n, deg)) != m:
            raise DimensionError(f"{m} coefficients do not fill a total-degree space in n={self.n}")
        self.degree = deg

    @property
    def s(self) -> int:
        return self.coefficients.shape[1]

    def __call__(self, points) -> np.ndarray:
        pts = as_points(points)
        mono = scalar_basis_matrix(pts, dims(self.n, self.degree, 1))
        return np.real(mono @ self.coefficients)

    def describe(self) -> dict:
        return {"kind": "polynomial", "n": self.n, "coefficients": self.coefficients.tolist()}

    @classmethod
    def constant(cls, values: Sequence[float], n: int = 1) -> "PolynomialOmegaField":
        return cls(np.asarray(values, dtype=float)[None, :], n=n)

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, s: int, degree: int = 2, scale: float = 1.0) -> "PolynomialOmegaField":
        m = len(enumerate_multiindices(n, degree))
        return cls(scale * rng.uniform(-1.0, 1.0, size=(m, s)), n=n)


class PerturbedWeight(WeightVector):
    """w_l(x) exp(-t omega_l(x)), the one-parameter family of the energy curve."""

    kind = "perturbed"

    def __init__(self, base: WeightVector, omega: OmegaField, t: float):
        self.base = base
        self.omega = omega
        self.t = float(t)

    @property
    def s(self) -> int:
        return self.base.s

    def _raw(self, pts):
        om = np.asarray(self.omega(pts), dtype=float)
        if om.shape != (pts.shape[0], self.s):
            raise DimensionError(f"test field returned shape {om.shape}, expected {(pts.shape[0], self.s)}")
        return self.base.evaluate(pts) * np.exp(-self.t * om)

    def describe(self) -> dict:
        om = self.omega.describe() if hasattr(self.omega, "describe") else {"kind": "callable"}
        return {"kind": "perturbed", "t": self.t, "base": self.base.describe(), "omega": om}


def constant(c: float = 1.0, s: int = 1) -> FieldWeight:
    return FieldWeight([WeightComponent("constant", c)] * s)


def gaussian(c: float = 1.0, s: int = 1) -> FieldWeight:
    return FieldWeight([WeightComponent("gaussian", c)] * s)


def tabulated(mesh, values) -> TabulatedWeight:
    return TabulatedWeight(getattr(mesh, "points", mesh), values)


def perturbed(base: WeightVector, omega: OmegaField, t: float) -> PerturbedWeight:
    return PerturbedWeight(base, omega, t)


def weight_from_spec(specs: Sequence[dict]) -> FieldWeight:
    return FieldWeight([WeightComponent(spec["kind"], float(spec.get("c", 1.0))) for spec in specs])


def weight_descriptor(w: WeightVector) -> dict:
    return w.describe()


# ---------------------------------------------------------- vector basis


def eval_weighted_basis_matrix(points, w: WeightVector, d: SpaceDims, family: Family = "monomial") -> np.ndarray:
    """(M, N, s): entry [a, j, :] is q_j(x_a) w^r(x_a), one nonzero component per j."""
    pts = as_points(points)
    if w.s != d.s:
        raise DimensionError(f"weight has {w.s} components, space has s={d.s}")
    mono = scalar_basis_matrix(pts, d, family)
    wr = w.power(pts, d.r)
    comp, beta = basis_components(d), basis_monomials(d)
    out = np.zeros((pts.shape[0], d.N, d.s), dtype=complex)
    j = np.arange(d.N)
    out[:, j, comp] = mono[:, beta] * wr[:, comp]
    return out


def eval_weighted_vector_basis(x, w: WeightVector, d: SpaceDims) -> np.ndarray:
    """(N, s) array; row j is x^beta(j) w_s(j)(x)^r e_s(j)."""
    return eval_weighted_basis_matrix(x, w, d)[0]


def pairing_matrix(
    points,
    directions: np.ndarray,
    w: WeightVector,
    d: SpaceDims,
    family: Family = "monomial",
    omega_power: int = 0,
    omega: Optional[OmegaField] = None,
) -> np.ndarray:
    """(A, N) matrix E[a, j] = (v_a, q_j w^r (x_a))_U, optionally times omega_s(j)(x_a)^k.

    The inner product is conjugate-linear in its first slot.
    """
    pts = as_points(points)
    dirs = np.asarray(directions, dtype=complex)
    if dirs.shape != (pts.shape[0], d.s):
        raise DimensionError(f"directions shape {dirs.shape} does not match {(pts.shape[0], d.s)}")
    mono = scalar_basis_matrix(pts, d, family)
    wr = w.power(pts, d.r)
    comp, beta = basis_components(d), basis_monomials(d)
    factor = np.conj(dirs) * wr
    if omega_power:
        factor = factor * np.asarray(omega(pts), dtype=float) ** omega_power
    return mono[:, beta] * factor[:, comp]


def hadamard(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"hadamard needs equal lengths, got {a.shape} and {b.shape}")
    return a * b


def log_weights_summary(w: WeightVector, points) -> None:
    values = w.evaluate(points)
    logger.info(f"[weight] {w.describe()} min={values.min():.3e} max={values.max():.3e} on {values.shape[0]} points")

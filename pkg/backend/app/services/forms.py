r"""Polynomial differential forms: U = Lambda^k with frame dx^alpha, |alpha| = k.

The weight is identically one here, so the Vandermonde of a current set is
V[i, j] = T_i(q_j) and the Lagrangian forms omega_i = sum_j L[j, i] q_j come from
L = V^{-1}.
"""
import csv
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
from loguru import logger

from ..datasources.base import Mesh
from ..errors import DimensionError, NotUnisolventError, SingularConfigurationError
from .currents import Current, SegmentCurrent, apply_current
from .equilibrium import EquilibriumOracle, MomentRow
from .fekete import assemble_vandermonde, log_abs_det, vector_fekete
from .indexing import SpaceDims, dims, enumerate_multiindices, graded_position
from .polyspace import as_points, constant, eval_weighted_basis_matrix, scalar_basis_matrix

MAX_CONDITION = 1e13
MIN_SEGMENT_LENGTH = 1e-9


@dataclass(frozen=True)
class FormBasis:
    n: int
    k: int
    indices: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.indices)

    def labels(self) -> list[str]:
        return ["1" if not alpha else "dx^" + "".join(str(i) for i in alpha) for alpha in self.indices]

    def space(self, r: int) -> SpaceDims:
        return dims(self.n, r, self.s)


def lambda_basis(n: int, k: int) -> FormBasis:
    if n < 1 or not 0 <= k <= n:
        raise DimensionError(f"form degree k={k} out of range for n={n}", field="forms.k")
    indices = tuple(combinations(range(1, n + 1), k))
    return FormBasis(n=n, k=k, indices=indices)


def lagrange_basis(currents: Sequence[Current], d: SpaceDims) -> np.ndarray:
    """Columns are the monomial coefficients of the Lagrangian forms; raises when not unisolvent."""
    V = assemble_vandermonde(currents, constant(1.0, s=d.s), d)
    if log_abs_det(V).singular or np.linalg.cond(V) > MAX_CONDITION:
        raise NotUnisolventError(f"{len(currents)} currents are not unisolvent for degree {d.r}")
    return np.linalg.inv(V)


def form_values(coefficients: np.ndarray, points, d: SpaceDims) -> np.ndarray:
    """(M, s) values of the form sum_{beta, alpha} c[beta, alpha] x^beta dx^alpha."""
    return scalar_basis_matrix(points, d) @ coefficients


@dataclass
class FormInterpolant:
    """Pi(theta) = sum_i T_i(theta) omega_i; `coefficients` is (m_r, s) in the monomial basis."""

    coefficients: np.ndarray
    currents: list
    lagrange: np.ndarray
    dims: SpaceDims
    basis: Optional[FormBasis] = None
    samples: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __call__(self, points) -> np.ndarray:
        return form_values(self.coefficients, as_points(points), self.dims)


def interpolate(
    currents: Sequence[Current],
    theta: Callable[[np.ndarray], np.ndarray],
    d: SpaceDims,
    basis: Optional[FormBasis] = None,
    lagrange: Optional[np.ndarray] = None,
) -> FormInterpolant:
    if basis is not None and basis.s != d.s:
        raise DimensionError(f"form basis has s={basis.s}, space has s={d.s}")
    L = lagrange if lagrange is not None else lagrange_basis(currents, d)
    samples = np.array([apply_current(T, theta) for T in currents])
    coefficients = (L @ samples).reshape(d.m_r, d.s)
    return FormInterpolant(coefficients=coefficients, currents=list(currents), lagrange=L, dims=d, basis=basis, samples=samples)


def lagrange_values(interp: FormInterpolant, x) -> np.ndarray:
    """(N, s): omega_i(x) for every Lagrangian form."""
    B = eval_weighted_basis_matrix(x, constant(1.0, s=interp.dims.s), interp.dims)[0]
    return interp.lagrange.T @ B


def lebesgue_estimate(
    currents: Sequence[Current],
    mesh: Mesh | np.ndarray,
    d: SpaceDims,
    lagrange: Optional[np.ndarray] = None,
    chunk: int = 2048,
) -> float:
    """Max over the mesh of the Lebesgue function sum_i ||omega_i(x)||.

    The Lebesgue function bounds the norm of the interpolation operator pointwise;
    its mesh maximum approaches the sup over K from below as the mesh refines.
    """
    L = lagrange if lagrange is not None else lagrange_basis(currents, d)
    pts = mesh.points if isinstance(mesh, Mesh) else as_points(mesh)
    w = constant(1.0, s=d.s)
    best = 0.0
    for start in range(0, pts.shape[0], chunk):
        B = eval_weighted_basis_matrix(pts[start:start + chunk], w, d)
        W = np.einsum("mjc,ji->mic", B, L)
        best = max(best, float(np.max(np.sum(np.linalg.norm(W, axis=2), axis=1))))
    return best


def fekete_currents(mesh: Mesh | np.ndarray, d: SpaceDims) -> list:
    return vector_fekete(mesh, constant(1.0, s=d.s), d).currents


def form_moment_test(currents: Sequence[Current], oracle: EquilibriumOracle, s: int, ms: Sequence[int] = (1, 2, 3, 4)) -> list[MomentRow]:
    """Moments of (1/N) sum_i T_i against x^m dx^alpha, through the current actions."""
    rows = []
    for l in range(s):
        for m in ms:

            def field_(pts, m=m, l=l):
                out = np.zeros((pts.shape[0], s), dtype=complex)
                out[:, l] = pts[:, 0] ** m
                return out

            value = np.mean([apply_current(T, field_) for T in currents])
            rows.append(MomentRow(component=l, m=m, value=complex(value), expected=oracle.moment(m) / s))
    return rows


def random_form(rng: np.random.Generator, d: SpaceDims) -> np.ndarray:
    return rng.standard_normal((d.m_r, d.s)) + 1j * rng.standard_normal((d.m_r, d.s))


def interpolant_to_csv(interp: FormInterpolant, path: Path, header: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labels = interp.basis.labels() if interp.basis else [f"u{l + 1}" for l in range(interp.dims.s)]
    with path.open("w", newline="", encoding="utf-8") as fh:
        for key, value in (header or {}).items():
            fh.write(f"# {key}: {value}\n")
        writer = csv.writer(fh)
        writer.writerow(["beta", "position"] + [f"{lab}_{part}" for lab in labels for part in ("re", "im")])
        for beta, row in zip(enumerate_multiindices(interp.dims.n, interp.dims.r), interp.coefficients):
            tag = "(" + ",".join(str(int(b)) for b in beta) + ")"
            writer.writerow([tag, graded_position(beta)] + [f"{v:.17g}" for c in row for v in (c.real, c.imag)])
    return path


# ----------------------------------------------------- segment experiment


@dataclass(frozen=True)
class SegmentTraceRow:
    step: int
    log_abs_det: float
    total_length: float
    step_size: float


@dataclass
class SegmentTrace:
    rows: list[SegmentTraceRow]
    segments: list[SegmentCurrent]

    def is_monotone(self) -> bool:
        values = [row.log_abs_det for row in self.rows]
        return all(b >= a for a, b in zip(values, values[1:]))


def _segments_log_det(segments: Sequence[SegmentCurrent], d: SpaceDims) -> float:
    V = assemble_vandermonde(segments, constant(1.0, s=d.s), d)
    ld = log_abs_det(V)
    return -np.inf if ld.singular else ld.value


def segment_shrinkage_experiment(
    segments: Sequence[SegmentCurrent],
    d: SpaceDims,
    steps: int = 50,
    step0: float = 0.25,
    box: float = 1.0,
) -> SegmentTrace:
    """Coordinate ascent on segment endpoints inside [-box, box]^n.

    Every sweep tries, for each segment endpoint and each signed coordinate
    direction, a move of the current step size and keeps it iff log|det|
    strictly increases. A sweep with no accepted move halves the step.
    """
    if len(segments) != d.N:
        raise DimensionError(f"need N={d.N} segments, got {len(segments)}")
    q = max(2, d.r // 2 + 2)
    current = [SegmentCurrent(seg.a, seg.b, q=q) for seg in segments]
    value = _segments_log_det(current, d)
    if not np.isfinite(value):
        raise SingularConfigurationError("initial segment configuration is singular")
    n = current[0].a.shape[0]
    moves = [sign * np.eye(n)[i] for i in range(n) for sign in (1.0, -1.0)]
    h = step0
    rows = [SegmentTraceRow(0, value, float(sum(seg.length for seg in current)), h)]
    for step in range(1, steps + 1):
        accepted = 0
        for i in range(len(current)):
            for end in ("a", "b"):
                for move in moves:
                    seg = current[i]
                    a, b = seg.a.copy(), seg.b.copy()
                    target = a if end == "a" else b
                    target += h * move
                    np.clip(target, -box, box, out=target)
                    if np.linalg.norm(b - a) < MIN_SEGMENT_LENGTH:
                        continue
                    trial = list(current)
                    trial[i] = SegmentCurrent(a, b, q=q)
                    candidate = _segments_log_det(trial, d)
                    if candidate > value:
                        current, value = trial, candidate
                        accepted += 1
        if not accepted:
            h *= 0.5
        rows.append(SegmentTraceRow(step, value, float(sum(seg.length for seg in current)), h))
        logger.debug(f"[forms] segment sweep {step}: log|det|={value:.6f} accepted={accepted} h={h:.3e}")
        if h < MIN_SEGMENT_LENGTH:
            break
    return SegmentTrace(rows=rows, segments=current)


def initial_segments(d: SpaceDims, rng: np.random.Generator, length: float = 0.5) -> list[SegmentCurrent]:
    """N random segments in [-1, 1]^n whose Vandermonde is nonsingular."""
    for _ in range(100):
        centers = rng.uniform(-0.5, 0.5, size=(d.N, d.n))
        tangents = rng.standard_normal((d.N, d.n))
        tangents /= np.linalg.norm(tangents, axis=1, keepdims=True)
        segs = [SegmentCurrent(c - 0.5 * length * t, c + 0.5 * length * t) for c, t in zip(centers, tangents)]
        if np.isfinite(_segments_log_det(segs, d)):
            return segs
    raise SingularConfigurationError("could not draw a nonsingular segment configuration")

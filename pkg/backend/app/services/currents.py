"""Finite-rank elements of M(K, U): vector point masses, discrete vector measures and segment currents.

Directions are expressed in the fixed orthonormal frame u_1..u_s and the
pairing (v, w)_U is conjugate-linear in v.
"""
import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence, Union

import numpy as np
from loguru import logger
from scipy.special import roots_legendre

from ..errors import DimensionError, OverlapError
from .indexing import SpaceDims
from .polyspace import as_points

UNIT_TOL = 1e-12
MIN_SEGMENT_LENGTH = 1e-9

OmegaFn = Callable[[np.ndarray], np.ndarray]


def _unit(v, s: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if s is not None and v.shape[0] != s:
        raise DimensionError(f"direction has {v.shape[0]} entries, expected {s}")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise DimensionError(f"direction must be a unit vector, |v| = {np.linalg.norm(v)!r}")
    return v


def frame_vector(l: int, s: int) -> np.ndarray:
    e = np.zeros(s, dtype=complex)
    e[l] = 1.0
    return e


@dataclass(frozen=True)
class PointMassCurrent:
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", as_points(self.x)[0])
        object.__setattr__(self, "v", _unit(self.v))

    def as_measure(self) -> "DiscreteVectorMeasure":
        return DiscreteVectorMeasure(self.x[None, :], self.v[None, :], np.ones(1))


@dataclass(frozen=True)
class DiscreteVectorMeasure:
    """Atoms (x_a, v_a, m_a); points (A, n), directions (A, s), masses (A,)."""

    points: np.ndarray
    directions: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        pts = as_points(self.points)
        dirs = np.asarray(self.directions, dtype=complex)
        masses = np.asarray(self.masses, dtype=float).reshape(-1)
        if pts.shape[0] == 0:
            raise DimensionError("a vector measure needs at least one atom")
        if dirs.ndim != 2 or dirs.shape[0] != pts.shape[0] or masses.shape[0] != pts.shape[0]:
            raise DimensionError(f"atom arrays disagree: {pts.shape}, {dirs.shape}, {masses.shape}")
        if np.any(masses <= 0) or not np.all(np.isfinite(masses)):
            raise DimensionError("atom masses must be positive and finite")
        if np.any(np.abs(np.linalg.norm(dirs, axis=1) - 1.0) > UNIT_TOL):
            raise DimensionError("atom directions must be unit vectors")
        keys = {(tuple(np.round(p, 14)), tuple(np.round(v, 14))) for p, v in zip(pts, dirs)}
        if len(keys) != len(pts):
            raise DimensionError("atoms sharing a point must carry distinct directions")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "masses", masses)

    @property
    def size(self) -> int:
        return int(self.masses.shape[0])

    @property
    def s(self) -> int:
        return int(self.directions.shape[1])

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    def scaled(self, c: float) -> "DiscreteVectorMeasure":
        return DiscreteVectorMeasure(self.points, self.directions, self.masses * c)

    def with_phases(self, phases: np.ndarray) -> "DiscreteVectorMeasure":
        return DiscreteVectorMeasure(self.points, self.directions * np.exp(1j * np.asarray(phases))[:, None], self.masses)


@dataclass(frozen=True)
class SegmentCurrent:
    """Normalised integration over the straight segment [a, b] against 1-forms (k=1)."""

    a: np.ndarray
    b: np.ndarray
    q: int = 8

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).reshape(-1)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if a.shape != b.shape:
            raise DimensionError("segment endpoints live in different dimensions")
        if np.linalg.norm(b - a) < MIN_SEGMENT_LENGTH:
            raise DimensionError(f"degenerate segment of length {np.linalg.norm(b - a):.3e}")
        if self.q < 1:
            raise DimensionError(f"quadrature order must be >= 1, got {self.q}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))

    @property
    def tangent(self) -> np.ndarray:
        return (self.b - self.a) / self.length

    @cached_property
    def _rule(self) -> tuple[np.ndarray, np.ndarray]:
        nodes, weights = roots_legendre(self.q)
        t = 0.5 * (nodes + 1.0)
        return t, 0.5 * weights


Current = Union[PointMassCurrent, SegmentCurrent]


def segment_as_measure(segment: SegmentCurrent) -> DiscreteVectorMeasure:
    """Gauss-Legendre atoms carrying the unit tangent; exact on degree <= 2q-1 coefficients."""
    t, weights = segment._rule
    pts = segment.a[None, :] + t[:, None] * (segment.b - segment.a)[None, :]
    dirs = np.tile(segment.tangent.astype(complex), (segment.q, 1))
    return DiscreteVectorMeasure(pts.astype(complex), dirs, weights)


def as_measure(current: Current | DiscreteVectorMeasure) -> DiscreteVectorMeasure:
    if isinstance(current, DiscreteVectorMeasure):
        return current
    if isinstance(current, SegmentCurrent):
        return segment_as_measure(current)
    return current.as_measure()


def measure_pairing(mu: DiscreteVectorMeasure, omega: OmegaFn) -> complex:
    values = np.asarray(omega(mu.points), dtype=complex)
    if values.shape != mu.directions.shape:
        raise DimensionError(f"form returned {values.shape}, expected {mu.directions.shape}")
    return complex(np.sum(mu.masses * np.sum(np.conj(mu.directions) * values, axis=1)))


def apply_current(T: Current, omega: OmegaFn) -> complex:
    """(v, omega(x))_U for a point mass; (1/|S|) int_S omega for a segment."""
    return measure_pairing(as_measure(T), omega)


def fekete_bm_measure(
    arrays: Sequence[np.ndarray], d: SpaceDims
) -> tuple[DiscreteVectorMeasure, np.ndarray]:
    """Uniform measure on per-component Fekete arrays with v = u_l on array l.

    Returns the measure and the direction field as the 0-based component of
    every atom.
    """
    if len(arrays) != d.s:
        raise DimensionError(f"need {d.s} component arrays, got {len(arrays)}")
    arrays = [as_points(arr) for arr in arrays]
    for l, arr in enumerate(arrays):
        if arr.shape[0] != d.m_r:
            raise DimensionError(f"component {l} has {arr.shape[0]} points, expected m_r={d.m_r}")
    seen: dict[tuple, int] = {}
    for l, arr in enumerate(arrays):
        for p in arr:
            key = tuple(np.round(p, 14))
            if key in seen and seen[key] != l:
                raise OverlapError(f"point {p} used by components {seen[key]} and {l}")
            seen[key] = l
    points = np.concatenate(arrays)
    labels = np.repeat(np.arange(d.s), d.m_r)
    directions = np.eye(d.s, dtype=complex)[labels]
    masses = np.full(points.shape[0], 1.0 / (d.s * d.m_r))
    logger.debug(f"[currents] BM measure with {points.shape[0]} atoms over s={d.s}")
    return DiscreteVectorMeasure(points, directions, masses), labels


def random_measure(
    rng: np.random.Generator, atoms: int, s: int, n: int = 1, complex_directions: bool = True
) -> DiscreteVectorMeasure:
    """Probability measure with atoms uniform in [-1, 1]^n and random unit directions."""
    directions = rng.standard_normal((atoms, s)).astype(complex)
    if complex_directions:
        directions += 1j * rng.standard_normal((atoms, s))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    points = rng.uniform(-1.0, 1.0, size=(atoms, n))
    masses = rng.uniform(0.2, 1.0, size=atoms)
    return DiscreteVectorMeasure(points, directions, masses / masses.sum())


def mesh_measure(points, s: int = 1) -> DiscreteVectorMeasure:
    """Normalised counting measure on the mesh, one atom per point and frame direction."""
    pts = as_points(points)
    labels = np.tile(np.arange(s), pts.shape[0])
    return DiscreteVectorMeasure(
        np.repeat(pts, s, axis=0), np.eye(s, dtype=complex)[labels], np.full(pts.shape[0] * s, 1.0 / (pts.shape[0] * s))
    )


# ----------------------------------------------------------------- CSV


def write_currents_csv(mu: DiscreteVectorMeasure, path: Path, header: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n, s = mu.points.shape[1], mu.s
    columns = [f"x{part}_{i + 1}" for i in range(n) for part in ("re", "im")]
    columns += [f"v{part}_{l + 1}" for l in range(s) for part in ("re", "im")]
    columns.append("mass")
    with path.open("w", newline="", encoding="utf-8") as fh:
        for key, value in (header or {}).items():
            fh.write(f"# {key}: {value}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for x, v, m in zip(mu.points, mu.directions, mu.masses):
            row = [z for c in x for z in (c.real, c.imag)] + [z for c in v for z in (c.real, c.imag)] + [m]
            writer.writerow([f"{val:.17g}" for val in row])
    return path


def read_currents_csv(path: Path) -> DiscreteVectorMeasure:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
    header, body = rows[0], np.array([[float(v) for v in row] for row in rows[1:]])
    n = sum(1 for c in header if c.startswith("xre_"))
    s = sum(1 for c in header if c.startswith("vre_"))
    if len(header) != 2 * n + 2 * s + 1:
        raise DimensionError(f"{path}: unexpected column layout {header}")
    points = body[:, 0:2 * n:2] + 1j * body[:, 1:2 * n:2]
    directions = body[:, 2 * n:2 * n + 2 * s:2] + 1j * body[:, 2 * n + 1:2 * n + 2 * s:2]
    return DiscreteVectorMeasure(points, directions, body[:, -1])

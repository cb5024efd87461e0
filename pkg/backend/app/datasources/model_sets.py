"""Deterministic meshes on the model compact sets."""
from itertools import product
from typing import Literal

import numpy as np
from loguru import logger

from ..errors import DimensionError
from .base import Mesh

Descriptor = Literal["interval", "circle", "square", "cube", "disk"]
DESCRIPTORS = ("interval", "circle", "square", "cube", "disk")
AMBIENT_DIMENSION = {"interval": 1, "circle": 1, "disk": 1, "square": 2, "cube": 3}


def chebyshev_extended_nodes(M: int) -> np.ndarray:
    """M Chebyshev-Lobatto nodes on [-1, 1], ascending; both endpoints and, for odd M, 0 exactly."""
    k = np.arange(M)
    return np.sin(0.5 * np.pi * (2 * k - (M - 1)) / (M - 1))


def density_for_degree(r: int) -> int:
    return max(4 * r + 1, 3)


def _in_set(descriptor: str, pts: np.ndarray, tol: float = 1e-12) -> bool:
    if descriptor in ("interval", "square", "cube"):
        return bool(np.all(np.abs(pts.imag) <= tol) and np.all(np.abs(pts.real) <= 1 + tol))
    if descriptor == "circle":
        return bool(np.all(np.abs(np.abs(pts[:, 0]) - 1) <= tol))
    return bool(np.all(np.abs(pts[:, 0]) <= 1 + tol))


class ModelSetSource:
    def __init__(self, descriptor: str, density: int):
        if descriptor not in DESCRIPTORS:
            raise DimensionError(f"unsupported descriptor {descriptor!r}", field="set")
        if density < 2:
            raise DimensionError(f"mesh density must be >= 2, got {density}", field="mesh_density")
        self.descriptor = descriptor
        self.density = density

    def load(self) -> Mesh:
        M = self.density
        if self.descriptor == "interval":
            pts = chebyshev_extended_nodes(M)[:, None].astype(complex)
        elif self.descriptor == "circle":
            theta = 2 * np.pi * np.arange(M) / M
            pts = np.exp(1j * theta)[:, None]
            pts[0, 0] = 1.0
        elif self.descriptor in ("square", "cube"):
            nodes = chebyshev_extended_nodes(M)
            dim = AMBIENT_DIMENSION[self.descriptor]
            pts = np.array(list(product(nodes, repeat=dim)), dtype=complex)
        else:
            rings = [np.zeros(1, dtype=complex)]
            for j in range(1, M):
                count = 4 * j
                theta = 2 * np.pi * np.arange(count) / count
                rings.append((j / (M - 1)) * np.exp(1j * theta))
            pts = np.concatenate(rings)[:, None]
        if not _in_set(self.descriptor, pts):
            raise DimensionError(f"generated points leave the {self.descriptor} set")
        logger.debug(f"[mesh] {self.descriptor} density={M} -> {pts.shape[0]} points")
        return Mesh(points=pts, descriptor=self.descriptor, density=M)


def make_mesh(descriptor: str, M: int) -> Mesh:
    return ModelSetSource(descriptor, M).load()

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np


@dataclass(frozen=True)
class Mesh:
    """Finite candidate set discretising a compact K; points are complex, one per row."""

    points: np.ndarray
    descriptor: str
    density: int
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @property
    def n(self) -> int:
        return int(self.points.shape[1])

    def describe(self) -> dict:
        return {"descriptor": self.descriptor, "density": self.density, "size": self.size, "n": self.n}


class MeshSource(Protocol):
    def load(self) -> Mesh:
        ...

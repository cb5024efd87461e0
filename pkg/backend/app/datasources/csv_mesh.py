import csv
from pathlib import Path

import numpy as np

from ..errors import ConfigError, DimensionError
from .base import Mesh


def write_mesh_csv(mesh: Mesh, path: Path) -> Path:
    """One point per row, real and imaginary parts interleaved per coordinate."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = [f"{part}_{i + 1}" for i in range(mesh.n) for part in ("re", "im")]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in mesh.points:
            writer.writerow([f"{v:.17g}" for z in row for v in (z.real, z.imag)])
    return path


class CsvMeshSource:
    def __init__(self, path: Path, descriptor: str = "tabulated"):
        self.path = Path(path)
        self.descriptor = descriptor

    def load(self) -> Mesh:
        try:
            with self.path.open(newline="", encoding="utf-8") as fh:
                rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
            if len(rows) < 2 or len(rows[0]) % 2:
                raise ConfigError(f"{self.path}: expected a header and re/im column pairs", field="mesh_csv")
            data = np.array([[float(v) for v in row] for row in rows[1:]])
        except OSError as exc:
            raise ConfigError(f"cannot read mesh {self.path}: {exc.strerror or exc}", field="mesh_csv") from exc
        except ValueError as exc:
            raise ConfigError(f"{self.path}: {exc}", field="mesh_csv") from exc
        if data.ndim != 2 or data.shape[1] != len(rows[0]) or not np.all(np.isfinite(data)):
            raise ConfigError(f"{self.path}: every row needs {len(rows[0])} finite values", field="mesh_csv")
        pts = data[:, 0::2] + 1j * data[:, 1::2]
        if len({tuple(p) for p in np.round(pts, 15)}) != len(pts):
            raise DimensionError(f"{self.path}: duplicate mesh points", field="mesh_csv")
        return Mesh(points=pts, descriptor=self.descriptor, density=len(pts))

from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .datasources.model_sets import AMBIENT_DIMENSION

COMMANDS = ("fekete", "diameter", "gram", "energy", "bergman", "forms", "selftest")
SetName = Literal["interval", "circle", "square", "cube", "disk"]


class WeightSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["constant", "gaussian"] = "constant"
    c: float = 1.0

    @model_validator(mode="after")
    def _positive(self):
        if self.kind == "constant" and self.c <= 0:
            raise ValueError("a constant weight needs c > 0")
        if self.kind == "gaussian" and self.c < 0:
            raise ValueError("a gaussian weight needs c >= 0")
        return self


class FormSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(2, ge=1, le=4)
    k: int = Field(1, ge=0)

    @model_validator(mode="after")
    def _degree(self):
        if self.k > self.n:
            raise ValueError(f"form degree k={self.k} exceeds n={self.n}")
        return self


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    greedy_ratio: float = Field(0.98, gt=0, le=1)
    free_energy_rel: float = Field(1e-10, gt=0)
    closed_vs_trace: float = Field(1e-8, gt=0)
    closed_vs_fd: float = Field(1e-5, gt=0)
    concavity: float = Field(1e-10, ge=0)
    moment_gap: float = Field(0.05, gt=0)
    capacity_rel: float = Field(0.02, gt=0)
    reproduction: float = Field(1e-10, gt=0)
    bm_rate: float = Field(1.25, gt=1)


class ExperimentConfig(BaseModel):
    """One experiment; unknown keys are errors so a typo never silently changes a run."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    set_name: SetName = Field("interval", alias="set")
    weight: List[WeightSpec] = Field(default_factory=lambda: [WeightSpec()], min_length=1)
    r: Optional[int] = Field(None, ge=0, le=60)
    r_range: Optional[Tuple[int, int]] = None
    s: Optional[int] = Field(None, ge=1, le=8)
    forms: Optional[FormSpec] = None
    mesh_density: Optional[int] = Field(None, ge=2)
    mesh_csv: Optional[Path] = None
    seed: int = Field(0, ge=0, le=2**64 - 1)
    out: Optional[Path] = None
    workers: int = Field(1, ge=1, le=64)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    continuous_directions: bool = False
    disjoint_components: bool = False
    restarts: int = Field(4, ge=0, le=64)
    t_values: List[float] = Field(default_factory=lambda: [round(-1 + 0.2 * i, 10) for i in range(11)], min_length=1)
    instances: int = Field(20, ge=1, le=1000)
    steps: int = Field(50, ge=1, le=10_000)

    @field_validator("r_range")
    @classmethod
    def _ordered(cls, v):
        if v is not None and not 0 <= v[0] <= v[1] <= 60:
            raise ValueError("r_range must satisfy 0 <= lo <= hi <= 60")
        return v

    @model_validator(mode="after")
    def _consistent(self):
        if self.s is not None and len(self.weight) not in (1, self.s):
            raise ValueError(f"weight lists {len(self.weight)} components but s={self.s}")
        if self.forms is not None and self.mesh_csv is None and AMBIENT_DIMENSION[self.set_name] != self.forms.n:
            raise ValueError(f"forms.n={self.forms.n} does not match the {self.set_name} set")
        return self

    @property
    def n(self) -> int:
        return AMBIENT_DIMENSION[self.set_name]

    @property
    def components(self) -> int:
        return self.s or len(self.weight)

    def weight_specs(self) -> list[dict]:
        specs = [w.model_dump() for w in self.weight]
        return specs * self.components if len(specs) == 1 else specs

    def degrees(self, default: Tuple[int, int]) -> list[int]:
        if self.r_range is not None:
            return list(range(self.r_range[0], self.r_range[1] + 1))
        if self.r is not None:
            return [self.r]
        return list(range(default[0], default[1] + 1))

    def header(self) -> dict:
        return {
            "set": self.set_name,
            "weight": self.weight_specs(),
            "mesh_density": self.mesh_density or "4r+1",
            "seed": self.seed,
        }


class ResultRow(BaseModel):
    r: int
    quantity: str
    value: float
    reference: Optional[float] = None
    gap: Optional[float] = None


class CheckResult(BaseModel):
    name: str
    value: float
    bound: float
    passed: bool


class RunReport(BaseModel):
    command: str
    passed: bool
    checks: List[CheckResult]
    files: List[str]
    version: str


class ErrorBody(BaseModel):
    error: str
    field: Optional[str] = None
    detail: str

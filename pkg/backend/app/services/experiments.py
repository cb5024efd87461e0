"""Experiment runners behind the CLI and the HTTP surface.

Every runner is a generator of ResultRow and CheckResult events. ``stream``
adds the CSV and JSON emission around it and ``execute`` drains it into a
RunReport.
"""
import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence, Union

import numpy as np
from loguru import logger

from ..config import VERSION
from ..datasources.base import Mesh, MeshSource
from ..datasources.csv_mesh import CsvMeshSource
from ..datasources.model_sets import ModelSetSource, density_for_degree, make_mesh
from ..errors import DimensionError
from ..schemas import CheckResult, ExperimentConfig, FormSpec, ResultRow, RunReport
from .currents import fekete_bm_measure, measure_pairing, mesh_measure, random_measure, write_currents_csv
from .diameter import extrapolate_limit, product_formula_check
from .energy import closed_form_derivatives, energy_curve, random_instance
from .equilibrium import CAPACITY, EquilibriumOracle, bergman_density_current, fekete_empirical_current, moment_test
from .fekete import (
    brute_force_fekete,
    continuous_direction_ascent,
    vector_fekete,
    write_configuration,
)
from .forms import (
    fekete_currents,
    form_moment_test,
    form_values,
    initial_segments,
    interpolant_to_csv,
    interpolate,
    lagrange_basis,
    lambda_basis,
    lebesgue_estimate,
    random_form,
    segment_shrinkage_experiment,
)
from .gram import (
    bm_constant,
    brute_force_free_energy,
    free_energy,
    sandwich_bounds,
    tensor_bm_check,
    weighted_lebesgue_factor,
)
from .indexing import SpaceDims, dims
from .polyspace import FieldWeight, PolynomialOmegaField, WeightComponent, log_weights_summary, weight_from_spec

Event = Union[ResultRow, CheckResult]
ROUNDOFF = 1e-9
# (r, s) pairs with N <= 5 for the exhaustive free-energy oracle
FREE_ENERGY_CASES = ((1, 1), (2, 1), (3, 1), (4, 1), (1, 2))
FORM_MOMENT_DEGREE = 20


def check(name: str, value: float, bound: float, at_least: bool = False) -> CheckResult:
    value = float(value)
    passed = (value >= bound if at_least else value <= bound) and math.isfinite(value)
    return CheckResult(name=name, value=value, bound=float(bound), passed=bool(passed))


@dataclass
class RunContext:
    command: str
    config: ExperimentConfig
    out_dir: Optional[Path] = None
    files: list[Path] = field(default_factory=list)
    space: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.config.seed)

    def mesh(self, r: int) -> Mesh:
        cfg = self.config
        source: MeshSource
        if cfg.mesh_csv is not None:
            source = CsvMeshSource(cfg.mesh_csv, descriptor=cfg.set_name)
        else:
            source = ModelSetSource(cfg.set_name, cfg.mesh_density or density_for_degree(r))
        return source.load()

    def disjoint_mesh(self, mesh: Mesh, d: SpaceDims) -> Mesh:
        """Generated mesh with room for s pairwise disjoint sets of m_r points plus slack for exchanges."""
        need = (d.s + 1) * d.m_r
        if mesh.size >= need or self.config.mesh_csv is not None:
            return mesh
        density = mesh.density
        while mesh.size < need:
            density += 1
            mesh = ModelSetSource(self.config.set_name, density).load()
        logger.info(f"[run] r={d.r} s={d.s}: disjoint sets use density {density} ({mesh.size} points)")
        return mesh

    def weight(self) -> FieldWeight:
        return weight_from_spec(self.config.weight_specs())

    def dims(self, r: int, mesh: Mesh) -> SpaceDims:
        return self.note_space(dims(mesh.n, r, self.config.components))

    def note_space(self, d: SpaceDims) -> SpaceDims:
        self.space = {"n": d.n, "s": d.s}
        return d

    def unweighted(self) -> bool:
        return all(spec["kind"] == "constant" and spec["c"] == 1.0 for spec in self.config.weight_specs())

    def header(self, **extra) -> dict:
        return {"command": self.command, **self.config.header(), **extra, "version": VERSION}

    def map(self, fn: Callable, items: Sequence) -> list:
        if self.config.workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                return list(pool.map(fn, items))
        return [fn(item) for item in items]


def _dims_header(d: SpaceDims) -> dict:
    return {"n": d.n, "r": d.r, "s": d.s, "N": d.N}


def _run_dims(ctx: RunContext, rows: Sequence[ResultRow]) -> dict:
    space = ctx.space or {"n": ctx.config.n, "s": ctx.config.components}
    rs = sorted({row.r for row in rows})
    return {**space, "r": f"{rs[0]}..{rs[-1]}" if rs else "-"}


# ------------------------------------------------------------------ runners


def run_fekete(ctx: RunContext) -> Iterator[Event]:
    cfg, w = ctx.config, ctx.weight()
    for r in cfg.degrees((6, 6)):
        mesh = ctx.mesh(r)
        d = ctx.dims(r, mesh)
        log_weights_summary(w, mesh.points)
        config = vector_fekete(mesh, w, d, disjoint_components=cfg.disjoint_components)
        if cfg.continuous_directions:
            config = continuous_direction_ascent(config, w, d, restarts=cfg.restarts, seed=cfg.seed)
        yield ResultRow(r=r, quantity="log_abs_det", value=config.log_abs_det)
        yield ResultRow(r=r, quantity="rth_diameter", value=config.rth_diameter)
        if ctx.out_dir is not None:
            header = ctx.header(**_dims_header(d), mesh_size=mesh.size)
            ctx.files += write_configuration(config, ctx.out_dir, f"fekete_r{r}", header=header)
        if mesh.size <= 8 and d.N <= 6 and d.weighted_degree:
            oracle = brute_force_fekete(mesh, w, d)
            ratio = float(np.exp((config.log_abs_det - oracle.log_abs_det) / d.weighted_degree))
            yield ResultRow(r=r, quantity="greedy_ratio", value=ratio, reference=1.0, gap=1.0 - ratio)
            yield check(f"greedy_ratio_r{r}", ratio, cfg.tolerances.greedy_ratio, at_least=True)


def run_diameter(ctx: RunContext) -> Iterator[Event]:
    cfg, w = ctx.config, ctx.weight()
    rs = cfg.degrees((2, 20))
    capacity = CAPACITY.get(cfg.set_name) if ctx.unweighted() and cfg.mesh_csv is None else None

    def job(r: int):
        mesh = ctx.mesh(r)
        d = ctx.dims(r, mesh)
        frame = vector_fekete(mesh, w, d)
        report = product_formula_check(
            mesh, w, d, continuous_directions=cfg.continuous_directions, restarts=cfg.restarts, seed=cfg.seed, config=frame
        )
        sandwich = None
        if 1 <= r <= 12:
            if d.s == 1:
                sandwich = sandwich_bounds(frame, w, d, mesh)
            else:
                roomy = ctx.disjoint_mesh(mesh, d)
                sandwich = sandwich_bounds(vector_fekete(roomy, w, d, disjoint_components=True), w, d, roomy)
        return r, frame, report, sandwich

    values = []
    for r, frame, report, sandwich in ctx.map(job, rs):
        delta = frame.rth_diameter
        values.append(delta)
        yield ResultRow(r=r, quantity="rth_diameter", value=delta, reference=capacity, gap=None if capacity is None else delta - capacity)
        yield ResultRow(r=r, quantity="product_formula_gap", value=report.gap, reference=0.0, gap=abs(report.gap))
        yield check(f"product_formula_r{r}", abs(report.gap), report.bound)
        if sandwich is not None:
            computed = float(np.exp(sandwich.log_diameter))
            yield ResultRow(r=r, quantity="sandwich_lower", value=float(np.exp(sandwich.log_lower)), reference=computed)
            yield ResultRow(r=r, quantity="sandwich_upper", value=float(np.exp(sandwich.log_upper)), reference=computed)
            overshoot = max(sandwich.log_lower - sandwich.log_diameter, sandwich.log_diameter - sandwich.log_upper)
            yield check(f"sandwich_r{r}", overshoot, ROUNDOFF)

    if capacity is None:
        return
    if cfg.set_name == "interval" and len(values) > 1:
        rise = max(b / a - 1.0 for a, b in zip(values, values[1:]))
        yield check("diameter_non_increasing", rise, 1e-12)
    if sum(r >= 4 for r in rs) >= 4:
        fit = extrapolate_limit(rs, values)
        logger.info(f"[diameter] extrapolated limit {fit.limit:.6f} (capacity {capacity}) residual {fit.residual:.2e}")
        yield ResultRow(r=max(rs), quantity="extrapolated_limit", value=fit.limit, reference=capacity, gap=fit.limit - capacity)
        yield check("capacity_extrapolation", abs(fit.limit / capacity - 1.0), cfg.tolerances.capacity_rel)


def run_gram(ctx: RunContext) -> Iterator[Event]:
    cfg = ctx.config
    worst = 0.0
    for i in range(cfg.instances):
        r, s = FREE_ENERGY_CASES[i % len(FREE_ENERGY_CASES)]
        d = dims(1, r, s)
        mu = random_measure(ctx.rng, int(ctx.rng.integers(d.N, 7)), s)
        kind = "gaussian" if i % 2 else "constant"
        w = FieldWeight([WeightComponent(kind, float(ctx.rng.uniform(0.5, 1.5)))] * s)
        z, oracle = free_energy(mu, w, d), brute_force_free_energy(mu, w, d)
        rel = abs(z - oracle) / oracle
        worst = max(worst, rel)
        yield ResultRow(r=r, quantity=f"free_energy[{i}]", value=z, reference=oracle, gap=rel)
        if i == 0 and ctx.out_dir is not None:
            ctx.files.append(write_currents_csv(mu, ctx.out_dir / "gram_instance0.csv", header=ctx.header(**_dims_header(d))))
    yield check("free_energy_identity", worst, cfg.tolerances.free_energy_rel)

    w = ctx.weight()
    rs = [r for r in cfg.degrees((2, 20)) if r >= 1]
    rates = []
    for r in rs:
        mesh = ctx.mesh(r)
        d = ctx.dims(r, mesh)
        mu = mesh_measure(mesh.points, d.s)
        M_r = bm_constant(mu, w, d, mesh)
        rates.append(M_r ** (1.0 / r))
        yield ResultRow(r=r, quantity="bm_constant", value=M_r, reference=float(np.sqrt(d.N)))
        yield ResultRow(r=r, quantity="bm_rate", value=rates[-1])
        if r == rs[0]:
            for t in (1, 2, 3):
                report = tensor_bm_check(mu, w, d, t, mesh, seed=cfg.seed + t)
                yield check(f"tensor_bm_t{t}", -min(report.min_slack, report.tight_slack), 1e-10)
        if r <= 12:
            roomy = ctx.disjoint_mesh(mesh, d)
            config = vector_fekete(roomy, w, d, disjoint_components=True)
            bm_mu, _ = fekete_bm_measure([config.component_points(l) for l in range(d.s)], d)
            M_f = bm_constant(bm_mu, w, d, roomy)
            ceiling = float(np.sqrt(d.s * d.N) * max(weighted_lebesgue_factor(config, w, d, roomy)))
            yield ResultRow(r=r, quantity="bm_fekete", value=M_f, reference=ceiling, gap=ceiling - M_f)
            yield check(f"bm_ceiling_r{r}", M_f / ceiling, 1.0 + ROUNDOFF)
            yield check(f"bm_floor_r{r}", M_f / np.sqrt(d.N), 1.0 - ROUNDOFF, at_least=True)
    if ctx.unweighted() and cfg.set_name == "interval" and len(rates) > 1:
        yield check("bm_rate_decreasing", max(b - a for a, b in zip(rates, rates[1:])), 0.0)
        if rs[-1] >= 20:
            yield check(f"bm_rate_r{rs[-1]}", rates[-1], cfg.tolerances.bm_rate)


def run_energy(ctx: RunContext) -> Iterator[Event]:
    cfg = ctx.config
    gap_trace = gap_fd = 0.0
    for i in range(cfg.instances):
        mu, w, omega, d = random_instance(np.random.default_rng([cfg.seed, i]), n=1, r_max=6, s_max=3)
        curve = energy_curve(mu, w, omega, d, [-0.2, 0.0, 0.2], workers=cfg.workers)
        gap_trace = max(
            gap_trace,
            curve.relative_gap("closed", "trace", order=1, atol=1e-6),
            curve.relative_gap("closed", "trace", order=2, atol=1e-6),
        )
        fd = curve.relative_gap("closed", "fd", order=1, atol=1e-3)
        gap_fd = max(gap_fd, fd)
        yield ResultRow(r=d.r, quantity=f"f_prime[{i}]", value=curve.first["closed"][1], reference=curve.first["fd"][1], gap=fd)
    yield check("closed_vs_trace", gap_trace, cfg.tolerances.closed_vs_trace)
    yield check("closed_vs_fd", gap_fd, cfg.tolerances.closed_vs_fd)

    w = ctx.weight()
    r = cfg.r if cfg.r is not None else 6
    mesh = ctx.mesh(r)
    d = ctx.dims(r, mesh)
    mu = vector_fekete(mesh, w, d).as_measure()
    # |r t omega| <= 3 keeps the perturbed rows within a few orders of magnitude
    omega = PolynomialOmegaField.random(ctx.rng, d.n, d.s, scale=1.0 / r)
    curve = energy_curve(mu, w, omega, d, cfg.t_values, routes=("closed", "trace"), workers=cfg.workers)
    for i, t in enumerate(curve.t):
        yield ResultRow(r=r, quantity=f"f(t={t:g})", value=curve.f[i])
        yield ResultRow(r=r, quantity=f"f_prime(t={t:g})", value=curve.first["closed"][i], reference=curve.first["trace"][i])
        yield ResultRow(r=r, quantity=f"f_second(t={t:g})", value=curve.second["closed"][i], reference=curve.second["trace"][i])
    yield check("concavity", float(np.max(curve.second["closed"])), cfg.tolerances.concavity)

    c = 0.5
    _, slope, _ = closed_form_derivatives(mu, w, PolynomialOmegaField.constant([c] * d.s, n=d.n), d, 0.0)
    expected = (d.n + 1) * c / d.n
    yield ResultRow(r=r, quantity="constant_field_slope", value=slope, reference=expected, gap=slope - expected)
    yield check("constant_field_slope", abs(slope / expected - 1.0), ROUNDOFF)


def run_bergman(ctx: RunContext) -> Iterator[Event]:
    cfg, w = ctx.config, ctx.weight()
    r = cfg.r if cfg.r is not None else 20
    mesh = ctx.mesh(r)
    d = ctx.dims(r, mesh)
    config = vector_fekete(mesh, w, d)
    mu = config.as_measure()
    omega = PolynomialOmegaField.random(ctx.rng, d.n, d.s, degree=3)
    density = bergman_density_current(mu, w, d, omega)
    empirical = measure_pairing(mu, omega).real
    yield ResultRow(r=r, quantity="bergman_density", value=density.value, reference=empirical, gap=density.value - empirical)
    yield check("bergman_factors", float(np.max(np.abs(density.factors - 1.0))), 1e-8)
    yield check("bergman_reduction", abs(density.value - empirical), ROUNDOFF)

    explore = random_measure(ctx.rng, 2 * d.N + 4, d.s, d.n)
    sample = bergman_density_current(explore, w, d, omega)
    yield ResultRow(r=r, quantity="bergman_density_random", value=sample.value, reference=measure_pairing(explore, omega).real)
    yield ResultRow(r=r, quantity="bergman_factor_min", value=float(sample.factors.min()))
    yield ResultRow(r=r, quantity="bergman_factor_max", value=float(sample.factors.max()))

    if cfg.set_name in CAPACITY and cfg.mesh_csv is None:
        rows = moment_test(fekete_empirical_current(config), EquilibriumOracle(cfg.set_name))
        for row in rows:
            yield ResultRow(r=r, quantity=f"moment[{row.component + 1},{row.m}]", value=row.value.real, reference=row.expected.real, gap=row.gap)
        if ctx.unweighted():
            yield check("fekete_moments", max(row.gap for row in rows), cfg.tolerances.moment_gap)


def run_forms(ctx: RunContext) -> Iterator[Event]:
    cfg = ctx.config
    spec = cfg.forms or FormSpec(n=cfg.n, k=min(1, cfg.n))
    basis = lambda_basis(spec.n, spec.k)
    rs = cfg.degrees((0, 4))
    for r in rs:
        mesh = ctx.mesh(r)
        d = ctx.note_space(basis.space(r))
        currents = fekete_currents(mesh, d)
        L = lagrange_basis(currents, d)
        c = random_form(ctx.rng, d)
        interp = interpolate(currents, lambda pts, c=c, d=d: form_values(c, pts, d), d, basis=basis, lagrange=L)
        err = float(np.max(np.abs(interp.coefficients - c)))
        leb = lebesgue_estimate(currents, mesh, d, lagrange=L)
        yield ResultRow(r=r, quantity="reproduction_error", value=err, reference=0.0, gap=err)
        yield ResultRow(r=r, quantity="lebesgue_estimate", value=leb, reference=float(d.N), gap=d.N - leb)
        yield check(f"reproduction_r{r}", err, cfg.tolerances.reproduction)
        yield check(f"lebesgue_r{r}", leb, d.N + ROUNDOFF)
        if ctx.out_dir is not None:
            header = ctx.header(**_dims_header(d), k=spec.k)
            ctx.files.append(interpolant_to_csv(interp, ctx.out_dir / f"forms_pi_r{r}.csv", header=header))

    if cfg.set_name == "interval" and cfg.mesh_csv is None and spec.n == 1:
        d = basis.space(FORM_MOMENT_DEGREE)
        currents = fekete_currents(make_mesh("interval", density_for_degree(d.r)), d)
        rows = form_moment_test(currents, EquilibriumOracle("interval"), basis.s)
        yield check("form_moments", max(row.gap for row in rows), cfg.tolerances.moment_gap)

    if spec.n == 2 and spec.k == 1:
        d = basis.space(cfg.r if cfg.r is not None else 1)
        trace = segment_shrinkage_experiment(initial_segments(d, ctx.rng), d, steps=cfg.steps)
        last = trace.rows[-1]
        yield ResultRow(r=d.r, quantity="segment_log_abs_det", value=last.log_abs_det, reference=trace.rows[0].log_abs_det)
        yield ResultRow(r=d.r, quantity="segment_total_length", value=last.total_length, reference=trace.rows[0].total_length)
        drops = sum(b.log_abs_det < a.log_abs_det for a, b in zip(trace.rows, trace.rows[1:]))
        yield check("segment_monotone", drops, 0)
        if ctx.out_dir is not None:
            ctx.files.append(_write_trace(trace, ctx.out_dir / "forms_segments.csv", ctx.header(**_dims_header(d))))


SELFTEST_PLAN: tuple[tuple[str, dict], ...] = (
    ("fekete", {"set": "interval", "mesh_density": 7, "r_range": (1, 5)}),
    ("fekete", {"set": "interval", "mesh_density": 7, "r_range": (1, 2), "weight": [{"kind": "constant"}, {"kind": "gaussian", "c": 0.5}]}),
    ("diameter", {"set": "interval", "r_range": (1, 8), "weight": [{"kind": "constant"}, {"kind": "gaussian", "c": 0.5}]}),
    ("diameter", {"set": "interval", "r_range": (2, 6), "weight": [{"kind": "constant"}, {"kind": "gaussian", "c": 0.5}], "continuous_directions": True, "restarts": 2}),
    ("gram", {"set": "interval", "r_range": (2, 8)}),
    ("energy", {"set": "interval", "r": 4, "weight": [{"kind": "constant"}, {"kind": "gaussian", "c": 0.5}]}),
    ("bergman", {"set": "interval", "r": 20}),
    ("bergman", {"set": "circle", "r": 7, "mesh_density": 8}),
    ("forms", {"set": "square", "forms": {"n": 2, "k": 1}, "r_range": (0, 3), "steps": 10}),
    ("forms", {"set": "interval", "forms": {"n": 1, "k": 0}, "r_range": (0, 4)}),
)


def _identity_check() -> CheckResult:
    failures = 0
    for n in range(1, 5):
        for r in range(0, 11):
            for s in range(1, 7):
                d = dims(n, r, s)
                failures += d.s * d.ell_r * (d.n + 1) != d.n * d.r * d.N
    return check("dimension_identity", failures, 0)


def run_selftest(ctx: RunContext) -> Iterator[Event]:
    yield _identity_check()
    for k, (command, overrides) in enumerate(SELFTEST_PLAN):
        sub = ExperimentConfig.model_validate({**overrides, "seed": ctx.config.seed + k, "workers": ctx.config.workers})
        logger.info(f"[selftest] {command} #{k}")
        for event in RUNNERS[command](RunContext(command=command, config=sub)):
            if isinstance(event, CheckResult):
                yield event.model_copy(update={"name": f"{command}#{k}:{event.name}"})
            else:
                yield event.model_copy(update={"quantity": f"{command}#{k}:{event.quantity}"})


RUNNERS: dict[str, Callable[[RunContext], Iterator[Event]]] = {
    "fekete": run_fekete,
    "diameter": run_diameter,
    "gram": run_gram,
    "energy": run_energy,
    "bergman": run_bergman,
    "forms": run_forms,
    "selftest": run_selftest,
}


# ------------------------------------------------------------------ output


def _fmt(v) -> str:
    return "" if v is None else f"{v:.17g}"


def _write_header(fh, header: dict) -> None:
    for key, value in header.items():
        text = value if isinstance(value, str) else json.dumps(value, default=str)
        fh.write(f"# {key}: {text}\n")


def write_rows_csv(rows: Sequence[ResultRow], path: Path, header: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        _write_header(fh, header)
        writer = csv.writer(fh)
        writer.writerow(["r", "quantity", "value", "reference", "gap"])
        for row in rows:
            writer.writerow([row.r, row.quantity, _fmt(row.value), _fmt(row.reference), _fmt(row.gap)])
    return path


def _write_trace(trace, path: Path, header: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        _write_header(fh, header)
        writer = csv.writer(fh)
        writer.writerow(["step", "log_abs_det", "total_length", "step_size"])
        for row in trace.rows:
            writer.writerow([row.step, _fmt(row.log_abs_det), _fmt(row.total_length), _fmt(row.step_size)])
    return path


def stream(command: str, config: ExperimentConfig, out_dir: Optional[Path] = None) -> Iterator[tuple[str, dict]]:
    """Run `command`, yielding ("row" | "check" | "done", payload); "done" carries the RunReport."""
    if command not in RUNNERS:
        raise DimensionError(f"unknown command {command!r}", field="command")
    ctx = RunContext(command=command, config=config, out_dir=Path(out_dir) if out_dir else None)
    rows: list[ResultRow] = []
    checks: list[CheckResult] = []
    logger.info(f"[run] {command} started seed={config.seed} workers={config.workers}")
    for event in RUNNERS[command](ctx):
        if isinstance(event, ResultRow):
            rows.append(event)
            yield "row", event.model_dump()
        else:
            checks.append(event)
            if not event.passed:
                logger.warning(f"[run] check {event.name} failed: {event.value:.3e} vs bound {event.bound:.3e}")
            yield "check", event.model_dump()

    if ctx.out_dir is not None:
        ctx.files.append(write_rows_csv(rows, ctx.out_dir / f"{command}.csv", ctx.header(**_run_dims(ctx, rows))))
        ctx.files.append(ctx.out_dir / f"{command}_summary.json")
    report = RunReport(
        command=command,
        passed=all(c.passed for c in checks),
        checks=checks,
        files=[str(p) for p in ctx.files],
        version=VERSION,
    )
    if ctx.out_dir is not None:
        summary = {**report.model_dump(mode="json"), "config": config.model_dump(mode="json", by_alias=True)}
        (ctx.out_dir / f"{command}_summary.json").write_text(json.dumps(summary, indent=2), encoding="utf-8")
    logger.info(f"[run] {command} finished: {sum(c.passed for c in checks)}/{len(checks)} checks passed")
    yield "done", report.model_dump(mode="json")


def execute(command: str, config: ExperimentConfig, out_dir: Optional[Path] = None) -> RunReport:
    payload: dict = {}
    for _, payload in stream(command, config, out_dir):
        pass
    return RunReport.model_validate(payload)

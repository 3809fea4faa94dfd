"""Timing study over the full pipeline: parse, resolve, layout, scene.

Each size group gets a deterministic generated model; the timed unit is
the headless pipeline from XML text to a complete SceneGraph (no file or
GPU work).  Groups run strictly sequentially on one thread, with one
warm-up run excluded from statistics, and report the mean and the
coefficient of variation over their runs.
"""

from __future__ import annotations

import platform
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .generator import GenSpec, generate
from .layout import layout
from .mapping import MappingConfig, MappingKind, MappingTuple, Style, resolve, swim_lanes
from .parser import parse, serialize
from .scene import build_scene

DEFAULT_LADDER: tuple[tuple[int, int], ...] = tuple(
    (2 ** i, 2 ** (i - 1)) for i in range(1, 11)
)
DEFAULT_RUNS = 10
DEFAULT_ARGS = 5
DEFAULT_SEED = 1

STAGES = ("parse", "resolve", "layout", "build_scene")


@dataclass(frozen=True)
class BenchGroup:
    nodes: int
    cf_elements: int
    runs: int
    mean_ms: float
    cov_pct: float
    raw_ms: tuple[float, ...]
    stage_means: Mapping[str, float]
    failures: tuple[str, ...] = ()


@dataclass(frozen=True)
class BenchReport:
    groups: tuple[BenchGroup, ...]
    hardware_note: str
    pipeline_stages: Mapping[str, float]
    runs_requested: int
    args: int
    seed: int


def bench_config(arg_count: int) -> MappingConfig:
    """The standard multi-attribute config used for timing.

    Generated attributes alternate numeric/text by index, so even indices
    take relative scaling and odd ones discrete positioning; five
    arguments fill all five position/scale styles.
    """
    styles = (Style.SCALE_X, Style.POSITION_Y, Style.SCALE_Y,
              Style.POSITION_Z, Style.SCALE_Z)
    tuples = tuple(
        MappingTuple(
            style=styles[i],
            attribute=f"attr{i}",
            mapping=MappingKind.RELATIVE if i % 2 == 0 else MappingKind.DISCRETE,
        )
        for i in range(min(arg_count, len(styles)))
    )
    return MappingConfig(tuples=tuples)


def _timed_pipeline(xml_text: str, config: MappingConfig) -> dict[str, float]:
    """One full run; returns per-stage wall-clock milliseconds."""
    t0 = time.perf_counter()
    model, _ = parse(xml_text)
    t1 = time.perf_counter()
    resolved = resolve(model, config)
    lanes = swim_lanes(model, config)
    t2 = time.perf_counter()
    placements, connectors, lanes_out = layout(model, resolved, lanes)
    t3 = time.perf_counter()
    build_scene(model, placements, connectors, lanes_out, config)
    t4 = time.perf_counter()
    return {
        "parse": (t1 - t0) * 1000.0,
        "resolve": (t2 - t1) * 1000.0,
        "layout": (t3 - t2) * 1000.0,
        "build_scene": (t4 - t3) * 1000.0,
    }


def run_benchmark(
    sizes: Sequence[tuple[int, int]] | None = None,
    runs: int = DEFAULT_RUNS,
    args: int = DEFAULT_ARGS,
    seed: int = DEFAULT_SEED,
    progress: Callable[[str], None] | None = None,
) -> BenchReport:
    """Time every size group; runs must be at least 2 so variation is defined."""
    if runs < 2:
        raise ValueError(f"need at least 2 runs per group, got {runs}")
    if sizes is None:
        sizes = DEFAULT_LADDER
    config = bench_config(args)
    groups = []
    all_stage_samples: dict[str, list[float]] = {s: [] for s in STAGES}
    for nodes, cf in sizes:
        spec = GenSpec(nodes=nodes, control_flow_elements=cf,
                       arguments=args, seed=seed)
        xml_text = serialize(generate(spec))
        if progress:
            progress(f"group {nodes}N/{cf}C: warm-up")
        _timed_pipeline(xml_text, config)  # warm-up, excluded
        raw: list[float] = []
        failures: list[str] = []
        stage_samples: dict[str, list[float]] = {s: [] for s in STAGES}
        for i in range(runs):
            try:
                stages = _timed_pipeline(xml_text, config)
            except Exception as exc:  # noqa: BLE001 - recorded, not fatal
                failures.append(f"run {i + 1}: {type(exc).__name__}: {exc}")
                continue
            raw.append(sum(stages.values()))
            for name, ms in stages.items():
                stage_samples[name].append(ms)
                all_stage_samples[name].append(ms)
        mean = statistics.fmean(raw) if raw else 0.0
        if len(raw) >= 2 and mean > 0:
            cov = 100.0 * statistics.stdev(raw) / mean
        else:
            cov = 0.0
        groups.append(BenchGroup(
            nodes=nodes,
            cf_elements=cf,
            runs=len(raw),
            mean_ms=mean,
            cov_pct=cov,
            raw_ms=tuple(raw),
            stage_means={s: statistics.fmean(v) if v else 0.0
                         for s, v in stage_samples.items()},
            failures=tuple(failures),
        ))
        if progress:
            progress(f"group {nodes}N/{cf}C: mean {mean:.2f} ms, cov {cov:.2f}%")
    return BenchReport(
        groups=tuple(groups),
        hardware_note=(f"{platform.platform()}; python {platform.python_version()}; "
                       f"{platform.processor() or platform.machine()}"),
        pipeline_stages={s: statistics.fmean(v) if v else 0.0
                         for s, v in all_stage_samples.items()},
        runs_requested=runs,
        args=args,
        seed=seed,
    )


def linear_fit(report: BenchReport) -> tuple[float, float, float]:
    """Least-squares fit of group mean vs node count: (slope, intercept, r_squared)."""
    xs = [float(g.nodes) for g in report.groups]
    ys = [g.mean_ms for g in report.groups]
    if len(xs) < 2 or len(set(xs)) < 2:
        raise ValueError("need at least two distinct group sizes to fit")
    fit = statistics.linear_regression(xs, ys)
    if statistics.pstdev(ys) == 0:
        r2 = 1.0
    else:
        r2 = statistics.correlation(xs, ys) ** 2
    return fit.slope, fit.intercept, r2


def report_text(report: BenchReport) -> str:
    lines = [
        "pipeline benchmark: parse -> resolve -> layout -> build_scene",
        f"hardware: {report.hardware_note}",
        f"runs per group: {report.runs_requested} (one warm-up excluded); "
        f"arguments: {report.args}; seed: {report.seed}",
        "",
        f"{'nodes':>6} {'cf':>5} {'mean_ms':>10} {'cov_pct':>8}",
    ]
    for g in report.groups:
        lines.append(f"{g.nodes:>6} {g.cf_elements:>5} {g.mean_ms:>10.3f} {g.cov_pct:>8.2f}")
        for failure in g.failures:
            lines.append(f"       ! {failure}")
    lines.append("")
    stages = ", ".join(f"{s} {report.pipeline_stages[s]:.3f}"
                       for s in STAGES)
    lines.append(f"stage means across all runs (ms): {stages}")
    try:
        slope, intercept, r2 = linear_fit(report)
    except ValueError:
        pass
    else:
        lines.append(
            f"linear fit of mean_ms vs nodes: slope {slope:.4f} ms/node, "
            f"intercept {intercept:.3f} ms, R^2 {r2:.4f}"
        )
    return "\n".join(lines) + "\n"


def write_report(report: BenchReport, path: str | Path) -> None:
    Path(path).write_text(report_text(report), encoding="utf-8")

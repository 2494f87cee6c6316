"""Benchmark harness: run engines over a DIMACS corpus and report.

Each (instance, engine, seed) job produces a suite file and a stats JSON;
the report aggregates per-run rows into medians/IQRs per instance+engine
and size/time ratios per instance+seed where both engines ran.
"""

from __future__ import annotations

import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .baseline import BaselineConfig, run_baseline
from .cnf import parse_dimacs_file
from .engine import RunConfig, run

ENGINES = ("snap", "baseline")

ROW_FIELDS = [
    "instance",
    "num_vars",
    "num_clauses",
    "engine",
    "seed",
    "wall_time_s",
    "suite_size",
    "ncd",
    "validity_rate",
    "generate_calls",
    "verify_calls",
    "repair_calls",
    "error",
]


@dataclass
class BenchReport:
    rows: list[dict] = field(default_factory=list)
    summary: list[dict] = field(default_factory=list)  # per (instance, engine)
    ratios: list[dict] = field(default_factory=list)  # per (instance, seed)
    aggregate: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _iqr(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    qs = statistics.quantiles(values, n=4, method="inclusive")
    return qs[2] - qs[0]


def run_one(
    instance_path: str,
    engine: str,
    seed: int,
    time_budget_s: float,
    n_init: int,
    out_dir: str | None = None,
    k: int = 5,
    mutations_per_centroid: int | None = None,
    solver: str = "internal",
) -> dict:
    """One bench job; returns a report row (module-level for process pools)."""
    path = Path(instance_path)
    f = parse_dimacs_file(path)
    row = {
        "instance": path.stem,
        "num_vars": f.num_vars,
        "num_clauses": f.num_clauses,
        "engine": engine,
        "seed": seed,
        "error": "",
    }
    try:
        if engine == "snap":
            cfg = RunConfig(
                n_init=n_init,
                k=k,
                mutations_per_centroid=mutations_per_centroid,
                seed=seed,
                time_budget_s=time_budget_s,
                solver=solver,
            )
            suite, stats = run(f, cfg)
        elif engine == "baseline":
            bcfg = BaselineConfig(
                n_init=n_init, seed=seed, time_budget_s=time_budget_s, solver=solver
            )
            suite, stats = run_baseline(f, bcfg)
        else:
            raise ValueError(f"unknown engine {engine!r}")
    except Exception as e:  # per-instance failures recorded, run continues
        row.update(
            wall_time_s=0.0,
            suite_size=0,
            ncd=float("nan"),
            validity_rate=float("nan"),
            generate_calls=0,
            verify_calls=0,
            repair_calls=0,
            error=f"{type(e).__name__}: {e}",
        )
        return row

    invalid = suite.validate(f)
    row.update(
        wall_time_s=stats.wall_time_s,
        suite_size=len(suite),
        ncd=stats.ncd_history[-1] if stats.ncd_history else float("nan"),
        validity_rate=(len(suite) - len(invalid)) / len(suite) if len(suite) else 0.0,
        generate_calls=stats.generate_calls,
        verify_calls=stats.verify_calls,
        repair_calls=stats.repair_calls,
    )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{path.stem}__{engine}__seed{seed}"
        (out / f"{stem}.suite").write_text(suite.to_text(seed))
        (out / f"{stem}.stats.json").write_text(stats.to_json())
    return row


def bench(
    instances: list[str],
    seeds: list[int],
    engines: list[str] = list(ENGINES),
    time_budget_s: float = 60.0,
    n_init: int = 100,
    out_dir: str | None = None,
    jobs: int = 1,
    k: int = 5,
    mutations_per_centroid: int | None = None,
    solver: str = "internal",
) -> BenchReport:
    """Run engines x instances x seeds and aggregate."""
    tasks = [
        (str(inst), engine, seed, time_budget_s, n_init, out_dir, k,
         mutations_per_centroid, solver)
        for inst in instances
        for engine in engines
        for seed in seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one_star, tasks))
    else:
        rows = [_run_one_star(t) for t in tasks]
    rows.sort(key=lambda r: (r["instance"], r["engine"], r["seed"]))
    return _aggregate(rows)


def _run_one_star(args) -> dict:
    return run_one(*args)


def _aggregate(rows: list[dict]) -> BenchReport:
    report = BenchReport(rows=rows)
    ok = [r for r in rows if not r["error"]]

    groups: dict[tuple[str, str], list[dict]] = {}
    for r in ok:
        groups.setdefault((r["instance"], r["engine"]), []).append(r)
    for (instance, engine), rs in sorted(groups.items()):
        entry = {"instance": instance, "engine": engine, "runs": len(rs)}
        for key in ("wall_time_s", "suite_size", "ncd", "validity_rate"):
            vals = [r[key] for r in rs if r[key] == r[key]]  # drop NaN
            entry[f"{key}_median"] = statistics.median(vals) if vals else float("nan")
            entry[f"{key}_iqr"] = _iqr(vals) if vals else float("nan")
        report.summary.append(entry)

    by_run = {(r["instance"], r["engine"], r["seed"]): r for r in ok}
    for (instance, engine, seed), r in sorted(by_run.items()):
        if engine != "snap":
            continue
        other = by_run.get((instance, "baseline", seed))
        if other is None or not r["suite_size"]:
            continue
        report.ratios.append(
            {
                "instance": instance,
                "seed": seed,
                "size_ratio": other["suite_size"] / r["suite_size"],
                "time_ratio": (
                    other["wall_time_s"] / r["wall_time_s"]
                    if r["wall_time_s"] > 0
                    else float("nan")
                ),
                "ncd_ratio": (
                    r["ncd"] / other["ncd"] if other["ncd"] else float("nan")
                ),
            }
        )

    if report.ratios:
        size_ratios = [x["size_ratio"] for x in report.ratios]
        time_ratios = [x["time_ratio"] for x in report.ratios if x["time_ratio"] == x["time_ratio"]]
        ncd_ratios = [x["ncd_ratio"] for x in report.ratios if x["ncd_ratio"] == x["ncd_ratio"]]
        report.aggregate = {
            "size_ratio_median": statistics.median(size_ratios),
            "time_ratio_median": statistics.median(time_ratios) if time_ratios else float("nan"),
            "ncd_ratio_median": statistics.median(ncd_ratios) if ncd_ratios else float("nan"),
            "runs": len(ok),
            "failures": len(rows) - len(ok),
        }
    else:
        report.aggregate = {"runs": len(ok), "failures": len(rows) - len(ok)}
    return report


def write_report(report: BenchReport, out_dir: str, figures: bool = True) -> list[Path]:
    """Write report.csv, summary.csv, report.json, and figures; returns paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []

    csv_path = out / "report.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=ROW_FIELDS)
        writer.writeheader()
        for row in report.rows:
            writer.writerow(row)
    paths.append(csv_path)

    if report.summary:
        summary_path = out / "summary.csv"
        with open(summary_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(report.summary[0].keys()))
            writer.writeheader()
            for row in report.summary:
                writer.writerow(row)
        paths.append(summary_path)

    json_path = out / "report.json"
    json_path.write_text(report.to_json())
    paths.append(json_path)

    if figures and report.summary:
        from . import plots

        paths.extend(plots.render_report_figures(report, out))
    return paths

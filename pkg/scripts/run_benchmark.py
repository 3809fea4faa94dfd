"""Run the pipeline timing ladder and report the scaling fit.

Writes the plain-text report (and optionally a JSON dump of the raw
groups) so runs on different machines can be compared.  The default
ladder doubles from 2 nodes / 1 control-flow element to 1024 / 512.

    python3 scripts/run_benchmark.py
    python3 scripts/run_benchmark.py --runs 20 -o bench_report.txt --json bench.json
"""
import argparse
import dataclasses
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pm3d.bench import linear_fit, report_text, run_benchmark


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--args", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("-o", "--output", default="-", help="report path, or - for stdout")
    ap.add_argument("--json", default=None, help="also dump raw groups as JSON")
    opts = ap.parse_args(argv)

    report = run_benchmark(
        runs=opts.runs, args=opts.args, seed=opts.seed,
        progress=lambda tag: print(f"  {tag}", file=sys.stderr),
    )
    text = report_text(report)
    if opts.output == "-":
        sys.stdout.write(text)
    else:
        Path(opts.output).write_text(text, encoding="utf-8")
        print(f"report written to {opts.output}")

    slope, intercept, r2 = linear_fit(report)
    print(f"fit: mean_ms = {slope:.4f} * nodes + {intercept:.4f}  (R^2 {r2:.4f})",
          file=sys.stderr)

    if opts.json:
        payload = {
            "groups": [dataclasses.asdict(g) for g in report.groups],
            "fit": {"slope_ms_per_node": slope, "intercept_ms": intercept, "r2": r2},
        }
        Path(opts.json).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"raw groups written to {opts.json}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line entry point.

Exit status: 0 on success, 1 when ``verify`` finds a failing suite, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import code5, codesearch, noise, verify

SUBCOMMANDS = ("verify", "table", "fidelity", "search", "bound")
FORMATS = ("text", "csv", "json")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: int = 0
    format: str = "text"
    theta_grid: tuple[float, ...] = field(default_factory=lambda: tuple(noise.default_theta_grid()))
    trials: int = 100
    output_path: str | None = None
    generator: str = "isotropic"
    max_n: int = 10

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.subcommand == "fidelity":
            grid = list(self.theta_grid)
            if not grid or any(t < 0 for t in grid) or grid != sorted(grid):
                raise ValueError("theta grid must be nonempty, nonnegative and sorted")


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _verify(cfg: RunConfig) -> tuple[int, str, str]:
    results = verify.run_all(cfg.trials, cfg.seed)
    failed = next((r for r in results if not r.passed), None)
    if cfg.format == "json":
        body = json.dumps(
            {"seed": cfg.seed, "trials": cfg.trials, "suites": [r.__dict__ for r in results]}, indent=2
        ) + "\n"
    elif cfg.format == "csv":
        body = _csv([("suite", "passed", "detail")] + [(r.name, r.passed, r.detail) for r in results])
    else:
        lines = [f"verify seed={cfg.seed} trials={cfg.trials}"] + [r.line() for r in results]
        lines.append("ALL PASS" if failed is None else f"FAILED: {failed.name}")
        body = "\n".join(lines) + "\n"
    err = "" if failed is None else f"verification failed: {failed.name}\n"
    return (0 if failed is None else 1), body, err


def _table(cfg: RunConfig) -> tuple[int, str, str]:
    table = code5.default_table()
    rows = code5.syndrome_table(table)
    if cfg.format == "json":
        return 0, table.to_json() + "\n", ""
    if cfg.format == "csv":
        full = [(e, s, table.by_error(e).transform, st) for e, s, st in rows]
        return 0, _csv([("error", "syndrome", "transform", "resulting_state")] + full), ""
    return 0, "".join(f"{e} {s} {st}\n" for e, s, st in rows), ""


def _fidelity(cfg: RunConfig) -> tuple[int, str, str]:
    result = noise.fidelity_sweep(cfg.theta_grid, cfg.generator, seed=cfg.seed)
    fit = result.fit
    if cfg.format == "json":
        return 0, result.to_json() + "\n", ""
    summary = []
    if fit is None:
        summary.append("fit: fewer than two points with p in [1e-4, 1e-2]")
    else:
        summary += [
            f"slope_corrected={fit.slope_corrected:.6f}",
            f"slope_unencoded={fit.slope_unencoded:.6f}",
            f"c={fit.c:.6g}",
            f"p_star={fit.p_star:.6g}",
            "crossover_p=" + ("none" if fit.crossover_p is None else f"{fit.crossover_p:.6g}"),
            f"fit_points={fit.points}",
        ]
    if cfg.format == "csv":
        # Keep the CSV machine-readable; the fit goes to stderr.
        return 0, result.to_csv(), "".join(s + "\n" for s in summary)
    lines = ["theta p f_unencoded f_corrected"]
    lines += [" ".join(f"{x:.12g}" for x in (r.theta, r.p, r.f_unencoded, r.f_corrected)) for r in result.records]
    return 0, "\n".join(lines + summary) + "\n", ""


def _search(cfg: RunConfig) -> tuple[int, str, str]:
    ref = codesearch.reference_candidate()
    found = codesearch.search_signs(ref.support0, ref.support1)
    if cfg.format == "json":
        return 0, codesearch.search_to_json(found) + "\n", ""
    if cfg.format == "csv":
        rows = [("signs0", "signs1", "negatives0", "negatives1")]
        for c in found:
            n0, n1 = c.negative_counts()
            rows.append((" ".join(map(str, c.signs0)), " ".join(map(str, c.signs1)), n0, n1))
        return 0, _csv(rows), ""
    sgn = lambda signs: "".join("+" if s > 0 else "-" for s in signs)
    lines = [
        f"support0={list(ref.support0)}",
        f"support1={list(ref.support1)}",
        f"count={len(found)}",
    ]
    for c in found:
        n0, n1 = c.negative_counts()
        mark = " reference" if c == ref.canonical() else ""
        lines.append(f"{sgn(c.signs0)} {sgn(c.signs1)} negatives={n0},{n1}{mark}")
    return 0, "\n".join(lines) + "\n", ""


def _bound(cfg: RunConfig) -> tuple[int, str, str]:
    rows = codesearch.min_code_length(cfg.max_n)
    best = codesearch.smallest_feasible(rows)
    if cfg.format == "json":
        payload = {"rows": [r._asdict() for r in rows], "smallest_feasible": None if best is None else best.n}
        return 0, json.dumps(payload, indent=2) + "\n", ""
    if cfg.format == "csv":
        return 0, _csv([("n", "subspaces_needed", "dimension", "feasible", "saturates")] + [tuple(r) for r in rows]), ""
    lines = [r.render() for r in rows]
    if best is not None:
        lines.append(f"smallest feasible n={best.n}" + (" (saturates)" if best.saturates else ""))
    return 0, "\n".join(lines) + "\n", ""


_HANDLERS = {"verify": _verify, "table": _table, "fidelity": _fidelity, "search": _search, "bound": _bound}


def run(config: RunConfig) -> tuple[int, str, str]:
    """Execute one subcommand; returns ``(exit status, report, diagnostics)``."""
    return _HANDLERS[config.subcommand](config)


def _theta_grid(text: str) -> tuple[float, ...]:
    try:
        grid = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad theta grid {text!r}") from exc
    if not grid or any(t < 0 for t in grid) or list(grid) != sorted(grid):
        raise argparse.ArgumentTypeError("theta grid must be nonempty, nonnegative and sorted")
    return grid


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", dest="output_path", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="fivequbit", description="Five-qubit perfect code toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("verify", parents=[common], help="run every invariant suite")
    p.add_argument("--trials", type=_positive_int, default=100)
    sub.add_parser("table", parents=[common], help="print the 16-row syndrome table")
    p = sub.add_parser("fidelity", parents=[common], help="corrected vs bare fidelity sweep")
    p.add_argument("--theta-grid", type=_theta_grid, default=None)
    p.add_argument("--generator", choices=("isotropic", "random"), default="isotropic")
    sub.add_parser("search", parents=[common], help="exhaustive sign search on the code support")
    p = sub.add_parser("bound", parents=[common], help="2(3n+1) <= 2^n feasibility table")
    p.add_argument("--max-n", type=_positive_int, default=10)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    if args.get("theta_grid") is None:
        args.pop("theta_grid", None)
    config = RunConfig(**args)
    status, report, diag = run(config)
    if config.output_path:
        Path(config.output_path).write_text(report, encoding="utf-8")
    else:
        sys.stdout.write(report)
    if diag:
        sys.stderr.write(diag)
    return status


if __name__ == "__main__":
    raise SystemExit(main())

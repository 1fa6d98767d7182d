"""Command-line entry point.

Subcommands: perturb (materialize a corpus), evaluate (run an adapter),
score (accuracy table -> score table), compare (two scored classifiers),
surface (grid emission), report (rendered score table). All randomness comes
from the explicit --seed flag. Exit codes: 0 success, 1 validation error,
2 I/O error.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import harness, metrics, registry, surface
from .errors import BenchmarkError
from .image import read_netpbm

EXIT_VALIDATION = 1
EXIT_IO = 2


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn):
    """Map toolkit and I/O errors to the documented exit codes."""
    import functools

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (BenchmarkError, ValueError) as exc:
            _fail(EXIT_VALIDATION, str(exc))
        except OSError as exc:
            _fail(EXIT_IO, str(exc))

    return wrapper


def _load_registry(path: str | None, group_size: int | None) -> registry.ConditionRegistry:
    size = group_size or registry.DEFAULT_GROUP_SIZE
    if path is None:
        return registry.default_registry(group_size=size)
    return registry.load_registry_file(path, group_size=size)


def _read_clean_corpus(corpus_dir: Path, limit: int | None):
    """Read PGM/PPM images plus labels.csv (filename,label) from a directory."""
    labels_path = corpus_dir / "labels.csv"
    if not corpus_dir.is_dir():
        _fail(EXIT_VALIDATION, f"clean corpus directory not found: {corpus_dir}")
    if not labels_path.is_file():
        _fail(EXIT_VALIDATION, f"labels file not found: {labels_path}")
    with open(labels_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["filename", "label"]:
            _fail(EXIT_VALIDATION, f"{labels_path}: header must be 'filename,label'")
        rows = list(reader)
    if limit is not None:
        rows = rows[:limit]
    clean = []
    for row in rows:
        path = corpus_dir / row["filename"]
        if not path.is_file():
            _fail(EXIT_VALIDATION, f"clean image not found: {path}")
        clean.append((row["filename"], row["label"], read_netpbm(path)))
    return clean


def _write_run_record(out_dir: Path, config: dict) -> None:
    (out_dir / "run.json").write_text(
        json.dumps(config, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )


@click.group()
def main():
    """Robustness benchmarking: perturbed test sets and accuracy-stability scores."""


@main.command("perturb")
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(path_type=Path),
              help="Clean corpus directory (PGM/PPM images + labels.csv).")
@click.option("--registry", "registry_path", type=click.Path(path_type=Path), default=None,
              help="Registry document; defaults to the built-in 69-condition catalog.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--group-size", type=int, default=None,
              help="Use at most N clean images per group.")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker cap; output bytes are scheduling-independent.")
@_guard
def cmd_perturb(corpus_dir, registry_path, seed, group_size, out_dir, jobs):
    """Materialize one image group per registry condition."""
    reg = _load_registry(str(registry_path) if registry_path else None, group_size)
    clean = _read_clean_corpus(corpus_dir, group_size)
    entries = registry.materialize(clean, reg, seed, out_dir)
    _write_run_record(out_dir, {
        "command": "perturb",
        "corpus": str(corpus_dir),
        "registry": str(registry_path) if registry_path else "builtin",
        "seed": seed,
        "group_size": len(clean),
        "jobs": jobs,
    })
    click.echo(f"wrote {len(entries)} images in {len(reg.conditions)} groups to {out_dir}")


@main.command("evaluate")
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(path_type=Path),
              help="Materialized corpus directory (with manifest.csv).")
@click.option("--adapter", "adapter_spec", default="toy", show_default=True,
              help="toy | subprocess:CMD | file:PATH")
@click.option("--classifier-id", default="classifier", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--jobs", type=int, default=1, show_default=True)
@_guard
def cmd_evaluate(corpus_dir, adapter_spec, classifier_id, out_path, jobs):
    """Run a classifier adapter over a corpus; write an accuracy table."""
    adapter = harness.make_adapter(adapter_spec, corpus_dir=corpus_dir)
    try:
        series = harness.evaluate(adapter, corpus_dir, classifier_id=classifier_id)
    finally:
        adapter.close()
    harness.save_accuracy_table([series], out_path)
    click.echo(f"wrote accuracy table for {classifier_id} ({len(series.entries)} conditions)")


def _score_rows(series_list):
    rows = []
    for series in sorted(series_list, key=lambda s: s.classifier_id):
        s = metrics.score(series)
        rows.append(s)
    return rows


def _write_score_table(rows, out):
    out.write("classifier,cv,mean,asi\n")
    for s in rows:
        out.write(
            f"{s.classifier_id},{s.cv_percent:.3f},{s.mean_accuracy_percent:.3f},{s.asi:.3f}\n"
        )


@main.command("score")
@click.option("--table", "table_path", required=True, type=click.Path(path_type=Path),
              help="Accuracy table CSV (classifier,condition,accuracy).")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="Score table destination; stdout if omitted.")
@_guard
def cmd_score(table_path, out_path):
    """Score each classifier in an accuracy table (mean, CV, index)."""
    series_list = harness.load_accuracy_table_file(table_path)
    rows = _score_rows(series_list)
    if out_path is None:
        _write_score_table(rows, sys.stdout)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            _write_score_table(rows, fh)
        click.echo(f"wrote {len(rows)} score rows to {out_path}")


def _read_score_table(path: Path) -> dict[str, metrics.BenchmarkScore]:
    scores = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["classifier", "cv", "mean", "asi"]:
            _fail(EXIT_VALIDATION, f"{path}: header must be 'classifier,cv,mean,asi'")
        for row in reader:
            scores[row["classifier"]] = metrics.BenchmarkScore(
                classifier_id=row["classifier"],
                mean_accuracy_percent=float(row["mean"]),
                cv_percent=float(row["cv"]),
                asi=float(row["asi"]),
                n_conditions=0,
            )
    return scores


def _fixture_scores() -> dict[str, metrics.BenchmarkScore]:
    return {
        f"R{row.row_id}": metrics.BenchmarkScore(
            classifier_id=f"R{row.row_id}",
            mean_accuracy_percent=row.mean,
            cv_percent=row.cv,
            asi=metrics.asi(row.mean, row.cv),
            n_conditions=0,
        )
        for row in metrics.load_reference_scores()
    }


@main.command("compare")
@click.argument("baseline")
@click.argument("other")
@click.option("--scores", "scores_path", type=click.Path(path_type=Path), default=None,
              help="Score table from `asibench score`.")
@click.option("--reference", is_flag=True,
              help="Compare rows of the shipped published score table (ids R1..R75).")
@_guard
def cmd_compare(baseline, other, scores_path, reference):
    """Relative CV/mean deltas of OTHER versus BASELINE, plus the index verdict."""
    if reference == (scores_path is not None):
        _fail(EXIT_VALIDATION, "give exactly one of --scores PATH or --reference")
    scores = _fixture_scores() if reference else _read_score_table(scores_path)
    for cid in (baseline, other):
        if cid not in scores:
            _fail(EXIT_VALIDATION, f"unknown classifier id {cid!r}")
    a, b = scores[baseline], scores[other]
    delta = metrics.compare(a, b)
    click.echo(f"cv delta:   {delta.cv_delta_percent:+.3f}%")
    click.echo(f"mean delta: {delta.mean_delta_percent:+.3f}%")
    if delta.asi_ordering == "tie":
        click.echo(f"verdict: tie (both ASI {a.asi:.3f})")
    else:
        winner, w = (baseline, a) if delta.asi_ordering == "a" else (other, b)
        loser, l = (other, b) if delta.asi_ordering == "a" else (baseline, a)
        click.echo(f"verdict: {winner} preferred (ASI {w.asi:.3f} > {l.asi:.3f})")


@main.command("surface")
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--mean-range", nargs=2, type=float, default=surface.DEFAULT_MEAN_RANGE,
              show_default=True)
@click.option("--cv-range", nargs=2, type=float, default=surface.DEFAULT_CV_RANGE,
              show_default=True)
@click.option("--resolution", type=int, default=surface.DEFAULT_RESOLUTION, show_default=True)
@click.option("--plot-script", "script_path", type=click.Path(path_type=Path), default=None,
              help="Also emit a matplotlib script referencing the CSV.")
@_guard
def cmd_surface(out_path, fmt, mean_range, cv_range, resolution, script_path):
    """Sample the index over the (mean, CV) plane and emit grid data."""
    grid = surface.surface_grid(tuple(mean_range), tuple(cv_range), resolution)
    surface.emit_grid(grid, fmt, out_path)
    if script_path is not None:
        if fmt != "csv":
            _fail(EXIT_VALIDATION, "--plot-script requires --format csv")
        surface.write_plot_script(out_path, script_path)
    click.echo(f"wrote {resolution}x{resolution} grid to {out_path}")


@main.command("report")
@click.option("--scores", "scores_path", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
@_guard
def cmd_report(scores_path, out_path):
    """Render a score table as an aligned text report."""
    scores = _read_score_table(scores_path)
    lines = [f"{'Classifier':<28} {'CV (%)':>8} {'Mean (%)':>9} {'ASI':>7}"]
    lines.append("-" * len(lines[0]))
    for cid in sorted(scores):
        s = scores[cid]
        lines.append(
            f"{cid:<28} {s.cv_percent:>8.3f} {s.mean_accuracy_percent:>9.3f} {s.asi:>7.3f}"
        )
    text = "\n".join(lines) + "\n"
    if out_path is None:
        click.echo(text, nl=False)
    else:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"wrote report to {out_path}")


if __name__ == "__main__":
    main()

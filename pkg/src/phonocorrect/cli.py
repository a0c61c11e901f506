"""Command-line front end: correct, evaluate, grid, recover.

Data goes to stdout (or --output); logs and summaries go to stderr.
Exit codes: 0 success, 2 configuration error, 3 backend failure.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import evaluation
from .config import ConfigError, build_config
from .corrector import (CorrectionError, CorrectionTrace, PsiConfig,
                        StrategyKind, correct)
from .detector import DetectionResult, HTTPDetector, model_detect
from .evaluation import EvalRecord, GridAborted
from .phonetics import TableError, default_table, load_table
from .providers import HTTPProvider, MockProvider, ProviderError

EXIT_CONFIG = 2
EXIT_BACKEND = 3


def _fail_config(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_CONFIG)


def _fail_backend(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_BACKEND)


def _make_table(cfg):
    try:
        return load_table(cfg.table) if cfg.table else default_table()
    except TableError as exc:
        _fail_config(str(exc))


def _make_provider(cfg):
    spec = cfg.provider
    if not spec:
        _fail_config("no candidate provider configured "
                     "(--provider mock:PATH or --provider http://HOST)")
    if spec.startswith("mock:"):
        try:
            return MockProvider.from_fixture(spec[len("mock:"):])
        except ProviderError as exc:
            _fail_config(str(exc))
    if spec.startswith(("http://", "https://")):
        return HTTPProvider(spec)
    if spec.startswith("http:"):
        return HTTPProvider(spec[len("http:"):])
    _fail_config(f"unrecognized provider spec {spec!r}")


def _make_detections(record: EvalRecord, cfg, detector_client):
    if record.detections is not None:
        return DetectionResult(record.detections)
    if cfg.detector == "oracle":
        if record.reference is None:
            raise ValueError("oracle detector needs a 'ref' field")
        return evaluation.aligned_oracle_detections(
            record.hypothesis, record.reference)
    return model_detect(record.hypothesis, cfg.threshold, detector_client)


def _make_detector_client(cfg):
    if cfg.detector == "oracle":
        return None
    spec = cfg.detector
    if spec.startswith(("http://", "https://")):
        return HTTPDetector(spec)
    if spec.startswith("http:"):
        return HTTPDetector(spec[len("http:"):])
    _fail_config(f"unrecognized detector spec {spec!r} (use 'oracle' or a URL)")


def _read_records(input_path: str, cfg, need_ref: bool):
    """Parse JSONL records; malformed lines are skipped (fatal in --strict)."""
    stream = sys.stdin if input_path == "-" else open(input_path, encoding="utf-8")
    records, skipped = [], 0
    try:
        for lineno, line in enumerate(stream, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                rec = EvalRecord(
                    id=str(obj.get("id", lineno)),
                    hypothesis=tuple(obj["asr"]),
                    reference=tuple(obj["ref"]) if "ref" in obj else None,
                    detections=tuple(obj["detections"])
                    if "detections" in obj else None,
                )
                if need_ref and rec.reference is None:
                    raise KeyError("ref")
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                if cfg.strict:
                    click.echo(f"error: line {lineno}: {exc}", err=True)
                    sys.exit(1)
                click.echo(f"warning: skipping line {lineno}: {exc}", err=True)
                skipped += 1
                continue
            records.append(rec)
    finally:
        if stream is not sys.stdin:
            stream.close()
    if skipped:
        click.echo(f"warning: skipped {skipped} malformed line(s)", err=True)
    return records


def _open_output(cfg):
    if cfg.output:
        return open(cfg.output, "w", encoding="utf-8")
    return sys.stdout


def _round(v, nd=4):
    return None if v is None else round(v, nd)


def trace_to_dict(trace: CorrectionTrace) -> dict:
    return {
        "input": "".join(trace.input),
        "detections": list(trace.detections.positions),
        "iterations": [
            {
                "masked_positions": list(step.masked_positions),
                "candidates": {
                    str(pos): [
                        {"token": c.token, "p": _round(c.prob),
                         "s": _round(c.distance), "psi": _round(c.psi)}
                        for c in cands
                    ]
                    for pos, cands in step.scored.items()
                },
                "replacements": {str(p): t for p, t in step.replacements.items()},
            }
            for step in trace.iterations
        ],
        "output": "".join(trace.output),
    }


def common_options(fn):
    opts = [
        click.option("--config", "config_file", type=click.Path(), default=None,
                     help="YAML or JSON config file."),
        click.option("--table", default=None,
                     help="Phonetic table bundle directory (default: packaged)."),
        click.option("--provider", default=None,
                     help="mock:FIXTURE_PATH or an http(s) URL."),
        click.option("--detector", default=None,
                     help="'oracle' or an http(s) URL."),
        click.option("--strategy", default=None,
                     help="mask-all-replace-all | mask-one-replace-one | "
                          "mask-all-replace-one"),
        click.option("--alpha", type=float, default=None,
                     help="Phonetic trade-off weight (0 disables phonetics)."),
        click.option("--top-k", "top_k", type=int, default=None),
        click.option("--threshold", type=float, default=None,
                     help="Detector score threshold."),
        click.option("--trace/--no-trace", "trace", default=None,
                     help="Include the full correction trace in output."),
        click.option("--strict/--no-strict", "strict", default=None),
        click.option("--output", default=None, help="Output path (default stdout)."),
        click.option("--jobs", type=int, default=None,
                     help="Sentence-level parallelism."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _setup(config_file, kwargs):
    try:
        cfg = build_config(config_file, kwargs)
        strategy = StrategyKind.parse(cfg.strategy)
    except (ConfigError, ValueError) as exc:
        _fail_config(str(exc))
    psi = PsiConfig(alpha=cfg.alpha, top_k=cfg.top_k)
    return cfg, strategy, psi


@click.group()
@click.version_option(package_name="phonocorrect")
def main():
    """Phonetic post-correction for Chinese ASR output."""


@main.command("correct")
@click.argument("input_path", metavar="INPUT", default="-")
@common_options
def cmd_correct(input_path, config_file, **kwargs):
    """Correct sentences from a JSONL file ({"id", "asr", "ref"?, "detections"?})."""
    cfg, strategy, psi = _setup(config_file, kwargs)
    table = _make_table(cfg)
    provider = _make_provider(cfg)
    detector_client = _make_detector_client(cfg)
    records = _read_records(input_path, cfg, need_ref=False)

    out = _open_output(cfg)

    def process(rec: EvalRecord):
        detections = _make_detections(rec, cfg, detector_client)
        trace = correct(rec.hypothesis, detections, strategy, psi,
                        provider, table)
        result = {"id": rec.id, "input": "".join(rec.hypothesis),
                  "output": "".join(trace.output)}
        if cfg.trace:
            result["trace"] = trace_to_dict(trace)
        return result

    try:
        if cfg.jobs > 1:
            with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
                for result in pool.map(process, records):
                    out.write(json.dumps(result, ensure_ascii=False) + "\n")
        else:
            for rec in records:
                out.write(json.dumps(process(rec), ensure_ascii=False) + "\n")
    except (ProviderError, CorrectionError) as exc:
        out.flush()
        _fail_backend(str(exc))
    except ValueError as exc:
        _fail_config(str(exc))
    finally:
        if out is not sys.stdout:
            out.close()


@main.command("evaluate")
@click.argument("input_path", metavar="INPUT", default="-")
@common_options
def cmd_evaluate(input_path, config_file, **kwargs):
    """Run the correction pipeline on a labeled JSONL dataset and report
    CER and correction precision/recall/F1."""
    cfg, strategy, psi = _setup(config_file, kwargs)
    table = _make_table(cfg)
    provider = _make_provider(cfg)
    detector_client = _make_detector_client(cfg)
    records = _read_records(input_path, cfg, need_ref=True)
    if not records:
        _fail_config("no usable records in input")

    def process(rec: EvalRecord):
        detections = _make_detections(rec, cfg, detector_client)
        trace = correct(rec.hypothesis, detections, strategy, psi,
                        provider, table)
        return evaluation.EvalPair(rec.id, rec.hypothesis, rec.reference,
                                   trace.output)

    try:
        if cfg.jobs > 1:
            with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
                pairs = list(pool.map(process, records))
        else:
            pairs = [process(rec) for rec in records]
    except (ProviderError, CorrectionError) as exc:
        _fail_backend(str(exc))

    report = evaluation.evaluate(pairs)
    out = _open_output(cfg)
    out.write(json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n")
    if out is not sys.stdout:
        out.close()
    click.echo(
        f"P={report.precision:.4f} R={report.recall:.4f} F1={report.f1:.4f} "
        f"CER(macro)={report.cer_macro:.4f} CER(micro)={report.cer_micro:.4f}",
        err=True)


@main.command("grid")
@click.argument("input_path", metavar="INPUT", default="-")
@click.option("--alphas", default=None,
              help="Comma-separated alpha values (default: {1,2,5,7}x10^-6..4).")
@common_options
def cmd_grid(input_path, alphas, config_file, **kwargs):
    """Sweep alpha over the correction+evaluation pipeline; emit a TSV table."""
    cfg, strategy, psi = _setup(config_file, kwargs)
    table = _make_table(cfg)
    provider = _make_provider(cfg)
    records = _read_records(input_path, cfg, need_ref=True)
    if not records:
        _fail_config("no usable records in input")

    if alphas:
        try:
            grid = [float(a) for a in alphas.split(",") if a.strip()]
        except ValueError as exc:
            _fail_config(f"bad --alphas: {exc}")
    else:
        grid = evaluation.default_alpha_grid()

    base = PsiConfig(alpha=0.0, top_k=psi.top_k, phonetics_enabled=True)
    try:
        result = evaluation.grid_search_alpha(records, grid, strategy, base,
                                              provider, table)
    except GridAborted as exc:
        for alpha, f1, cer_macro in exc.partial_rows:
            click.echo(f"{alpha:g}\t{f1:.6f}\t{cer_macro:.6f}", err=True)
        _fail_backend(str(exc))
    except ValueError as exc:
        _fail_config(str(exc))

    out = _open_output(cfg)
    out.write(result.to_tsv())
    if out is not sys.stdout:
        out.close()
    click.echo(f"best alpha: {result.best_alpha:g} (F1={result.best_f1:.4f})",
               err=True)


@main.command("recover")
@click.argument("input_path", metavar="INPUT", default="-")
@common_options
def cmd_recover(input_path, config_file, **kwargs):
    """Classify detected errors as recoverable/unrecoverable and report how
    many recoverable ones the corrector fixed."""
    cfg, strategy, psi = _setup(config_file, kwargs)
    table = _make_table(cfg)
    provider = _make_provider(cfg)
    records = _read_records(input_path, cfg, need_ref=True)
    if not records:
        _fail_config("no usable records in input")

    try:
        report = evaluation.recoverability_report(records, strategy, psi,
                                                  provider, table)
    except (ProviderError, CorrectionError) as exc:
        _fail_backend(str(exc))

    out = _open_output(cfg)
    out.write(json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n")
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()

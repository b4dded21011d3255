"""Command line interface.

Subcommands: synth, ingest-check, binarize, fitness, aggregate,
regress, report, run. Each stage command reads and writes only
documented CSV artifacts, so stages are independently testable.

Exit codes: 0 success, 2 config error, 3 data error, 4 stage failure.
ECOMPLEX_LOG controls verbosity (DEBUG/INFO/WARNING).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import ingest, pipeline, synthdata
from .ingest import IngestError
from .pipeline import ConfigError, DataError, StageFailure

log = logging.getLogger("ecomplex")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_STAGE = 4


def _setup_logging():
    level = os.environ.get("ECOMPLEX_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _add_config_arg(p):
    p.add_argument("--config", required=True, help="pipeline TOML config")
    p.add_argument("--out", default=None, help="output directory override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecomplex",
        description="Hidden and revealed economic complexity pipeline",
    )
    parser.add_argument(
        "--print-schema", action="store_true", help="print the config schema and exit"
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("synth", help="generate a deterministic synthetic world")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--skills", type=int, default=68)
    p.add_argument("--jobs", type=int, default=400)
    p.add_argument("--industries", type=int, default=220)
    p.add_argument("--counties", type=int, default=500)
    p.add_argument("--countries", type=int, default=25)
    p.add_argument("--products", type=int, default=80)

    for name, help_text in (
        ("ingest-check", "validate all configured inputs"),
        ("binarize", "quotient matrices and binary networks"),
        ("fitness", "solver runs on the binarized networks"),
        ("aggregate", "cross-layer complexity and fitness measures"),
        ("regress", "the regression model battery"),
        ("report", "scatter, distribution, and choropleth outputs"),
        ("run", "full pipeline"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_config_arg(p)
        if name in ("regress", "run"):
            p.add_argument(
                "--models", default=None,
                help="comma-separated model ids (default: all with inputs)",
            )
        if name == "run":
            p.add_argument(
                "--strict", action="store_true", help="fail on any coverage gap"
            )
    return parser


def _load_cfg(args) -> pipeline.PipelineConfig:
    models = None
    if getattr(args, "models", None):
        models = [m.strip() for m in args.models.split(",") if m.strip()]
    return pipeline.load_config(args.config, out_dir=args.out, models=models)


def cmd_synth(args) -> int:
    sizes = synthdata.Sizes(
        n_skills=args.skills,
        n_jobs=args.jobs,
        n_industries=args.industries,
        n_counties=args.counties,
        n_countries=args.countries,
        n_products=args.products,
    )
    world = synthdata.generate_quadripartite(args.seed, sizes)
    synthdata.write_fixtures(world, args.out)
    print(f"synthetic world (seed {args.seed}) written to {args.out}")
    return EXIT_OK


def cmd_ingest_check(args) -> int:
    cfg = _load_cfg(args)
    data = pipeline.load_inputs(cfg)
    print(f"skills: {len(data['skills'].table.cells)} rated pairs")
    print(f"wages job-industry [{cfg.base_year}]: {len(data['wages_ji'].cells)} cells")
    print(f"employment [{cfg.base_year}]: {len(data['employment'].cells)} cells")
    print(f"county wages [{cfg.base_year}]: {len(data['county_wages'].cells)} cells")
    matched, unmatched = ingest.match_report(
        data["employment"].cols.ids, data["industry_panel"]
    )
    print(f"industries matched to panel: {len(matched)}, unmatched: {len(unmatched)}")
    if unmatched:
        print("unmatched:", ", ".join(unmatched[:20]))
    if "exports" in data:
        years = sorted(data["exports"])
        print(f"export years: {years[0]}-{years[-1]} ({len(years)} matrices)")
    return EXIT_OK


def _staged(args, upto: str) -> int:
    cfg = _load_cfg(args)
    out_dir = Path(cfg.out_dir)
    counts: dict[str, int] = {}
    data = pipeline.load_inputs(cfg)
    nets = pipeline.binarize_stage(cfg, data, out_dir, counts)
    if upto == "binarize":
        _report_counts(counts)
        return EXIT_OK
    fits = pipeline.fitness_stage(cfg, nets, out_dir, counts)
    if upto == "fitness":
        _report_counts(counts)
        return EXIT_OK
    aggs = pipeline.aggregate_stage(cfg, data, nets, fits, out_dir, counts)
    if upto == "aggregate":
        _report_counts(counts)
        return EXIT_OK
    model_data = pipeline.model_data_from(cfg, data, aggs)
    if upto == "regress":
        pipeline.regress_stage(cfg, model_data, out_dir, counts)
        _report_counts(counts)
        return EXIT_OK
    pipeline.report_stage(cfg, aggs, out_dir, counts)
    _report_counts(counts)
    return EXIT_OK


def _report_counts(counts):
    for name in sorted(counts):
        print(f"{name}: {counts[name]} rows")


def cmd_run(args) -> int:
    cfg = _load_cfg(args)
    manifest = pipeline.run_pipeline(cfg, strict=getattr(args, "strict", False))
    print(f"pipeline complete; {len(manifest['artifacts'])} artifacts in {cfg.out_dir}")
    for m in manifest["models_run"]:
        print(f"  model {m}")
    return EXIT_OK


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_schema:
        print(pipeline.CONFIG_SCHEMA, end="")
        return EXIT_OK
    if not args.command:
        parser.print_help()
        return EXIT_CONFIG
    try:
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "ingest-check":
            return cmd_ingest_check(args)
        if args.command == "run":
            return cmd_run(args)
        if args.command in ("binarize", "fitness", "aggregate", "regress", "report"):
            return _staged(args, args.command)
        parser.error(f"unknown command {args.command}")
    except ConfigError as exc:
        log.error("config error: %s", exc)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IngestError, DataError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except StageFailure as exc:
        if isinstance(exc.cause, (IngestError, DataError)):
            print(f"data error in stage {exc.stage!r}: {exc.cause}", file=sys.stderr)
            return EXIT_DATA
        print(str(exc), file=sys.stderr)
        return EXIT_STAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

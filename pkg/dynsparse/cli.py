"""
Command-line front end

    dynsparse sparsify STREAM [flags]   edge list `u v p q` (weight p/q) on stdout
    dynsparse stats STREAM [flags]      JSON report of sketch and sparsifier statistics
    dynsparse verify STREAM [flags]     JSON cut-error report against the exact graph

Exit codes: 0 ok, 2 invalid stream, 3 pipeline or configuration error,
4 verification failure. Logs go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from typing import Any

from pydantic import BaseModel, Field

from .errors import SparsifierError, StreamViolation, VerificationFailure
from .logging_config import get_logger, setup_logging
from .oracle import DEFAULT_MAX_VERTICES, ShadowGraph, all_cuts_error
from .sparsifier.bank import SketchBank
from .sparsifier.extract import Sparsifier, sparsify
from .sparsifier.weighted import WeightedSketchBank, sparsify_weighted
from .stream_io import StreamReader
from .utils.config import ProfileConfig, RunConfig, SketchParameters
from .utils.report_storage import ReportStorage

logger = get_logger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_STREAM = 2
EXIT_PIPELINE = 3
EXIT_VERIFY = 4


class StatsReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    n: int
    m: int
    updates: int
    epsilon: float
    seed: int
    profile: str
    sparsifier_size: int
    level_counts: dict[int, int] = Field(default_factory=dict)
    touched_cells_histogram: dict[int, int] = Field(default_factory=dict)
    mean_touched_cells: float = 0.0
    memory_words: int = 0
    size_constant: float = 0.0
    max_controlled: int = 0
    duplicates: int = 0
    warnings: list[str] = Field(default_factory=list)


class VerifyReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    n: int
    m: int
    epsilon: float
    seed: int
    sparsifier_size: int
    max_error: float
    mean_error: float
    cuts: int
    exhaustive: bool
    passed: bool


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynsparse",
        description="Cut sparsifiers of dynamic graph streams from linear sketches.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("stream", help="stream file, or '-' for standard input")
    common.add_argument("--epsilon", type=float, help="cut tolerance in (0, 1)")
    common.add_argument("--seed", type=int, help="master seed in [0, 2^64)")
    common.add_argument(
        "--profile",
        help=f"constant profile ({', '.join(ProfileConfig.BUILTIN_PROFILES)})",
    )
    common.add_argument("--checked", action="store_true", default=None, help="validate the stream")
    common.add_argument(
        "--best-effort",
        action="store_true",
        default=None,
        help="downgrade sketch failures to warnings",
    )
    common.add_argument("--gamma", type=float)
    common.add_argument("--alpha", type=float)
    common.add_argument("--kappa", type=float)
    common.add_argument("--copies", type=int, help="connectivity / recovery copies per exponent")
    common.add_argument("--weighted-bits", type=int, help="weight bits (W = 2^bits - 1)")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="package log level (stderr)",
    )
    common.add_argument("--save-report", metavar="DIR", help="also save the report as JSON")

    sub.add_parser("sparsify", parents=[common], help="print the sparsifier edge list")
    sub.add_parser("stats", parents=[common], help="print sketch and sparsifier statistics")
    sub.add_parser("verify", parents=[common], help="compare every cut with the exact graph")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig.from_env(
        epsilon=args.epsilon,
        seed=args.seed,
        profile=args.profile,
        checked=args.checked,
        best_effort=args.best_effort,
        gamma=args.gamma,
        alpha=args.alpha,
        kappa=args.kappa,
        copies=args.copies,
        weighted_bits=args.weighted_bits,
    )


def _run(
    args: argparse.Namespace, config: RunConfig
) -> tuple[SketchBank | WeightedSketchBank, Sparsifier, ShadowGraph | None]:
    """Single pass over the stream, then extraction."""
    with StreamReader.open(args.stream) as reader:
        header = reader.header
        bank: SketchBank | WeightedSketchBank
        if header.weighted or config.weighted_bits is not None:
            bank = WeightedSketchBank(header.n, config, max_weight=header.max_weight)
        else:
            bank = SketchBank(header.n, config)
        shadow = None
        if args.command == "verify":
            if header.n > DEFAULT_MAX_VERTICES:
                raise SparsifierError(
                    f"verify supports n <= {DEFAULT_MAX_VERTICES}, got n={header.n}"
                )
            shadow = ShadowGraph(header.n)
        logger.info(f"📥 Reading {reader.source}: n={header.n}")
        for upd in reader:
            bank.ingest(upd)
            if shadow is not None:
                shadow.apply(upd)

    if isinstance(bank, WeightedSketchBank):
        sp = sparsify_weighted(bank)
    else:
        sp = sparsify(bank)
    return bank, sp, shadow


def _stats_report(
    bank: SketchBank | WeightedSketchBank, sp: Sparsifier, config: RunConfig
) -> StatsReport:
    subs = bank.banks if isinstance(bank, WeightedSketchBank) else [bank]
    histogram: Counter[int] = Counter()
    for sub in subs:
        histogram.update(sub.touched_histogram)
    updates = sum(histogram.values())
    mean = sum(cells * count for cells, count in histogram.items()) / updates if updates else 0.0
    params = SketchParameters.derive(bank.n, config)
    return StatsReport(
        n=bank.n,
        m=bank.m,
        updates=sum(sub.updates for sub in subs),
        epsilon=config.epsilon,
        seed=config.seed,
        profile=config.profile,
        sparsifier_size=sp.edge_count,
        level_counts=dict(sorted(sp.level_counts.items())),
        touched_cells_histogram=dict(sorted(histogram.items())),
        mean_touched_cells=mean,
        memory_words=sum(sub.memory_words() for sub in subs),
        size_constant=sp.edge_count / params.size_budget(),
        max_controlled=sp.max_controlled(),
        duplicates=sp.duplicates,
        warnings=sp.warnings,
    )


def _save(args: argparse.Namespace, config: RunConfig, report: BaseModel | dict[str, Any]) -> None:
    if args.save_report:
        ReportStorage(args.save_report).save_report(
            config.seed, args.command, report, metadata={"stream": args.stream}
        )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(logging.getLevelName(args.log_level) if args.log_level else None)

    try:
        config = _config_from_args(args)
        bank, sp, shadow = _run(args, config)

        if args.command == "sparsify":
            lines = sp.lines()
            for line in lines:
                print(line)
            _save(args, config, {"edges": lines, "level_counts": sp.level_counts})
            return EXIT_OK

        if args.command == "stats":
            stats = _stats_report(bank, sp, config)
            print(stats.model_dump_json(indent=2))
            _save(args, config, stats)
            return EXIT_OK

        assert shadow is not None
        cut_report = all_cuts_error(shadow, sp, seed=config.seed)
        verdict = VerifyReport(
            n=shadow.n,
            m=shadow.m,
            epsilon=config.epsilon,
            seed=config.seed,
            sparsifier_size=sp.edge_count,
            max_error=cut_report.max_error,
            mean_error=cut_report.mean_error,
            cuts=cut_report.cuts,
            exhaustive=cut_report.exhaustive,
            passed=cut_report.passes(config.epsilon),
        )
        print(verdict.model_dump_json(indent=2))
        _save(args, config, verdict)
        if not verdict.passed:
            raise VerificationFailure(verdict.max_error, config.epsilon)
        logger.info("🎯 Verification passed")
        return EXIT_OK

    except VerificationFailure as e:
        logger.error(f"❌ {e}")
        return EXIT_VERIFY
    except StreamViolation as e:
        logger.error(f"❌ Invalid stream: {e}")
        return EXIT_STREAM
    except OSError as e:
        logger.error(f"❌ Cannot read stream: {e}")
        return EXIT_STREAM
    except SparsifierError as e:
        logger.error(f"❌ {e}")
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())

"""Model soup toolkit CLI."""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

# Add project root to Python path
project_root = str(Path(__file__).parent.parent)
sys.path.insert(0, project_root)

from dotenv import load_dotenv

from src.app_config import AppConfig, SoupSettings
from src.bench import (
    BenchEvaluator,
    evaluate_ood,
    load_bundle,
    load_grid,
    load_task_config,
    make_task,
    reseed_grid,
    reseed_task,
    save_bundle,
    train_pool,
)
from src.exceptions import (
    ConfigurationError,
    NumericError,
    OptimizationError,
    SoupAbortedError,
    SoupKitError,
)
from src.models.enums import PartitionStrategy, ReportFormat, SolverKind, SoupMethod
from src.partition import auto_partition, load_partition, parse_auto_partition
from src.pipeline import ExperimentContext, ExperimentOrchestrator
from src.reporting import ReportGenerator, pick_best_models
from src.soups import soup_registry, soup_seed
from src.tensor_store import load_checkpoint
from src.utils.logging_utils import SoupLogger, configure_logging
from src.utils.pipeline_persistence import (
    load_eval_result,
    load_pool,
    save_eval_result,
    save_pool,
    save_soup,
)
from src.utils.progress_indicators import ProgressIndicator

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

logger = SoupLogger("cli")


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the usage code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        ProgressIndicator.step_error(f"{self.prog}: {message}")
        sys.exit(EXIT_USAGE)


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the stable exit-code contract."""
    if isinstance(error, SoupAbortedError) and error.__cause__ is not None:
        return exit_code_for(error.__cause__)
    if isinstance(error, ConfigurationError):
        return EXIT_USAGE
    if isinstance(error, (NumericError, OptimizationError)):
        return EXIT_NUMERIC
    return EXIT_DATA


# ===== Subcommands =====


def cmd_make_task(args: argparse.Namespace) -> int:
    """Generate a dataset bundle and print its descriptor path."""
    ProgressIndicator.section_header("Make task")
    task = load_task_config(args.config)
    if args.seed is not None:
        task = reseed_task(task, args.seed)

    ProgressIndicator.step_start(f"Generating {task.generator.value} task (seed {task.seed})...")
    bundle = make_task(task)
    descriptor = save_bundle(bundle, args.out)
    ProgressIndicator.step_complete(
        f"{len(bundle.splits)} splits written ({len(bundle.shift_ids)} shifted test sets)"
    )
    ProgressIndicator.print_message(descriptor)
    return EXIT_OK


def cmd_train_pool(args: argparse.Namespace) -> int:
    """Train one model per grid config; fails only if every config fails."""
    ProgressIndicator.section_header("Train pool")
    bundle = load_bundle(args.task)
    grid = load_grid(args.grid)
    if not grid:
        raise ConfigurationError(f"training grid {args.grid} is empty")
    if args.seed is not None:
        grid = reseed_grid(grid, args.seed)

    pool = train_pool(bundle, grid, show_progress=not args.quiet)
    for failure in pool.failures:
        ProgressIndicator.step_warning(f"{failure['config_id']}: {failure['error']}")
    if len(pool) == 0:
        ProgressIndicator.step_error("every training config failed")
        return EXIT_NUMERIC

    manifest = save_pool(pool, args.out)
    for member in pool:
        ProgressIndicator.bullet_item(f"{member.id}: val_acc={member.val_acc:.4f}")
    ProgressIndicator.step_complete(f"{len(pool)}/{len(grid)} models trained")
    ProgressIndicator.print_message(manifest)
    return EXIT_OK


def _soup_options(args: argparse.Namespace, settings: SoupSettings, pool) -> dict:
    method = SoupMethod(args.method)
    tau = settings.tau if args.tau is None else args.tau
    budget = settings.budget if args.budget is None else args.budget
    solver = settings.solver if args.solver is None else args.solver

    if method is not SoupMethod.MANIFOLD:
        ignored = [
            flag
            for flag, value in (
                ("--tau", args.tau),
                ("--budget", args.budget),
                ("--solver", args.solver),
                ("--partition", args.partition),
                ("--auto", args.auto),
            )
            if value is not None
        ]
        if ignored:
            message = f"{', '.join(ignored)} ignored by the {method.value} soup"
            logger.warning(message)
            ProgressIndicator.step_warning(message)
        return {}

    if args.partition:
        spec = load_partition(args.partition)
    elif args.auto:
        m, strategy = parse_auto_partition(args.auto)
        spec = auto_partition([name for name, _ in pool.schema], m, strategy)
    else:
        raise ConfigurationError("--method manifold requires --partition FILE or --auto M:STRATEGY")
    return {
        "partition": spec,
        "tau": tau,
        "budget": budget,
        "seed": soup_seed(args.seed),
        "solver": solver,
        "initial_radius": settings.initial_radius,
        "final_radius": settings.final_radius,
    }


def cmd_soup(args: argparse.Namespace) -> int:
    """Fuse a pool and write the fused checkpoint plus its SoupReport."""
    ProgressIndicator.section_header(f"{args.method.title()} soup")
    settings = SoupSettings.from_env()
    pool = load_pool(args.pool)
    options = _soup_options(args, settings, pool)

    evaluator = None
    if args.task:
        evaluator = BenchEvaluator(load_bundle(args.task))
    elif args.method != SoupMethod.UNIFORM.value:
        raise ConfigurationError(f"--method {args.method} needs --task for validation accuracy")

    soup = soup_registry.create(args.method, evaluator=evaluator, **options)
    ProgressIndicator.step_start(f"Mixing {len(pool)} models...")
    fused, report = soup.run(pool)
    report_path = save_soup(fused, report, args.out)

    for record in report.candidates:
        ProgressIndicator.candidate_result(record.id, record.accepted, record.acc_before, record.acc_after)
    val = "n/a" if report.val_acc is None else f"{report.val_acc:.4f}"
    ProgressIndicator.step_complete(
        f"k={report.k} val_acc={val} evaluations={report.total_evaluations}"
    )
    ProgressIndicator.print_message(report_path)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    """Evaluate one checkpoint on the clean and shifted test sets."""
    checkpoint = load_checkpoint(args.checkpoint)
    bundle = load_bundle(args.task)
    label = args.label or Path(args.checkpoint).stem
    result = evaluate_ood(checkpoint.params, bundle, label=label)
    result.kind = checkpoint.metadata.get("method", "model")

    ProgressIndicator.section_header(f"Evaluation: {label}")
    ProgressIndicator.accuracy_item("val", result.val_acc)
    ProgressIndicator.accuracy_item("clean", result.clean_acc)
    for shift_id, acc in result.shift_accs.items():
        ProgressIndicator.accuracy_item(shift_id, acc)
    if result.shift_accs:
        ProgressIndicator.accuracy_item("avg_ood", result.avg_ood)

    if args.out:
        ProgressIndicator.print_message(save_eval_result(result, args.out))
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    """Aggregate evaluation results into the comparison table."""
    missing = [path for path in args.results if not Path(path).is_file()]
    if missing:
        for path in missing:
            ProgressIndicator.step_error(f"missing input: {path}")
        return EXIT_DATA

    results = [load_eval_result(path) for path in args.results]
    for path, result in zip(args.results, results):
        if result.label is None:
            result.label = Path(path).stem
    reference = args.reference
    if reference is None:
        models = pick_best_models(results)
        reference = models[0].label if models else None

    try:
        generator = ReportGenerator(results, reference_label=reference)
    except ValueError as e:
        raise ConfigurationError(str(e)) from e

    report_format = ReportFormat(args.format)
    if args.out:
        ProgressIndicator.print_message(generator.save(Path(args.out), report_format))
    elif report_format is ReportFormat.JSON:
        ProgressIndicator.print_message(generator.to_json())
    else:
        ProgressIndicator.print_message(generator.render_markdown())

    if args.chart:
        chart = Path(args.chart)
        if generator.save_chart(chart.parent, chart.name) is None:
            ProgressIndicator.step_warning("no shifted test sets, chart skipped")
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    """Run the staged experiment end to end."""
    ProgressIndicator.section_header("Soup experiment")
    settings = SoupSettings.from_env()
    task = load_task_config(args.task_config)
    grid = load_grid(args.grid)
    if not grid:
        raise ConfigurationError(f"training grid {args.grid} is empty")
    try:
        variants = [int(m) for m in args.variants.split(",") if m.strip()]
    except ValueError as e:
        raise ConfigurationError(f"--variants expects comma-separated integers: {e}") from e

    context = ExperimentContext(
        task=task,
        grid=grid,
        out_dir=Path(args.out),
        tau=settings.tau if args.tau is None else args.tau,
        budget=settings.budget if args.budget is None else args.budget,
        seed=args.seed,
        solver=settings.solver if args.solver is None else args.solver,
        manifold_variants=variants,
        partition_strategy=PartitionStrategy(args.strategy),
        show_progress=not args.quiet,
    )
    result = ExperimentOrchestrator().run_experiment(context)

    ProgressIndicator.step_complete(
        f"Stages completed: {result.stages_completed}/{result.total_stages} "
        f"in {result.total_duration:.2f}s"
    )
    report = context.stage_results.get("report")
    if report and report.data.get("report_content"):
        ProgressIndicator.print_message(report.data["report_content"])

    failure = result.first_error
    if failure is not None:
        ProgressIndicator.step_error(f"{failure.stage_name} stage {failure.status.value}: {failure.error}")
        return exit_code_for(failure.exception) if failure.exception else EXIT_DATA
    return EXIT_OK


# ===== Parser =====


def _gate_tolerance(value: str) -> float:
    try:
        tau = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid float value: {value!r}") from None
    if not 0.0 <= tau <= 1.0:
        raise argparse.ArgumentTypeError(f"tau must lie in [0, 1], got {value}")
    return tau


def _evaluation_budget(value: str) -> int:
    try:
        budget = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {value!r}") from None
    if budget < 1:
        raise argparse.ArgumentTypeError(f"budget must be >= 1, got {value}")
    return budget


def _add_soup_flags(
    parser: argparse.ArgumentParser,
    seed_default: Optional[int] = AppConfig.SOUP_DEFAULT_SEED,
    seed_help: str = "soup seed; optimizer seeds are derived from it",
) -> None:
    parser.add_argument(
        "--tau", type=_gate_tolerance, default=None, help="gate tolerance in [0, 1] (default 0.998)"
    )
    parser.add_argument(
        "--budget",
        type=_evaluation_budget,
        default=None,
        help="objective evaluations per optimizer call (default 250)",
    )
    parser.add_argument(
        "--solver",
        choices=[s.value for s in SolverKind],
        default=None,
        help="derivative-free solver (default cobyla)",
    )
    parser.add_argument("--seed", type=int, default=seed_default, help=seed_help)


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(
        prog="soupkit",
        description="Model soups by manifold mixing: build, fuse and evaluate model pools",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""Examples:
  python src/main.py make-task --out data/task
  python src/main.py train-pool --task data/task --out data/pool
  python src/main.py soup --pool data/pool --task data/task --method manifold --auto 8:contiguous-blocks --out data/soup
  python src/main.py eval data/soup/fused.ckpt --task data/task --out data/eval/manifold.json
  python src/main.py report data/eval/*.json --format md
  python src/main.py experiment --out data/experiment""",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)

    p = sub.add_parser("make-task", help="generate a synthetic dataset bundle")
    p.add_argument("--config", default=str(AppConfig.BENCH_TASK_CONFIG), help="task config JSON")
    p.add_argument("--seed", type=int, default=None, help="override the task seed")
    p.add_argument("--out", required=True, help="bundle directory")
    p.set_defaults(handler=cmd_make_task)

    p = sub.add_parser("train-pool", help="finetune a pool of models from a shared init")
    p.add_argument("--task", required=True, help="bundle directory or bundle.json")
    p.add_argument("--grid", default=str(AppConfig.BENCH_GRID_CONFIG), help="grid config JSON")
    p.add_argument("--seed", type=int, default=None, help="re-derive every config seed from this seed")
    p.add_argument("--out", required=True, help="pool directory")
    p.add_argument("--quiet", action="store_true", help="hide the progress bar")
    p.set_defaults(handler=cmd_train_pool)

    p = sub.add_parser("soup", help="fuse a pool into one model")
    p.add_argument("--pool", required=True, help="pool directory or pool.json")
    p.add_argument("--task", default=None, help="bundle providing the validation split")
    p.add_argument("--method", required=True, choices=[m.value for m in SoupMethod])
    source = p.add_mutually_exclusive_group()
    source.add_argument("--partition", default=None, help="partition JSON file")
    source.add_argument("--auto", default=None, metavar="M:STRATEGY", help="automatic partition")
    _add_soup_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=cmd_soup)

    p = sub.add_parser("eval", help="evaluate a checkpoint on clean and shifted test sets")
    p.add_argument("checkpoint", help="checkpoint file")
    p.add_argument("--task", required=True, help="bundle directory or bundle.json")
    p.add_argument("--label", default=None, help="row label (default: checkpoint file stem)")
    p.add_argument("--out", default=None, help="write the EvalResult JSON here")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("report", help="aggregate evaluation results into a table")
    p.add_argument("results", nargs="+", help="EvalResult JSON files written by 'eval --out'")
    p.add_argument("--format", choices=[f.value for f in ReportFormat], default=ReportFormat.MARKDOWN.value)
    p.add_argument("--reference", default=None, help="row label the Avg OOD deltas are taken against")
    p.add_argument("--out", default=None, help="output directory (default: print to stdout)")
    p.add_argument("--chart", default=None, metavar="PNG", help="also render the ID-vs-OOD scatter")
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("experiment", help="task, pool, soups, evaluation and report in one run")
    p.add_argument("--task-config", default=str(AppConfig.BENCH_TASK_CONFIG))
    p.add_argument("--grid", default=str(AppConfig.BENCH_GRID_CONFIG))
    p.add_argument(
        "--variants",
        default=",".join(str(m) for m in AppConfig.BENCH_MANIFOLD_VARIANTS),
        help="component counts of the manifold soups (default 2,4,8)",
    )
    p.add_argument(
        "--strategy",
        choices=[s.value for s in PartitionStrategy],
        default=PartitionStrategy.CONTIGUOUS_BLOCKS.value,
    )
    _add_soup_flags(
        p,
        seed_default=None,
        seed_help="re-derive the task, config and soup seeds from this seed "
        "(default: seeds in the config files)",
    )
    p.add_argument("--out", required=True, help="experiment directory")
    p.add_argument("--quiet", action="store_true", help="hide the progress bar")
    p.set_defaults(handler=cmd_experiment)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the soup toolkit CLI."""
    load_dotenv()
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (SoupKitError, OSError, ValueError) as e:
        ProgressIndicator.step_error(f"{args.command} failed: {e}")
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())

"""The ``quitunnel`` command line: ``sweep``, ``plot``, ``validate`` and ``point``."""

import argparse
import logging
import sys

from .consts import QT_LOG_FORMAT, QT_LOGGER
from .errors import (
    BarrierSpecError,
    EmptyTableError,
    MomentumDomainError,
    PacketSpecError,
    ScenarioSpecError,
    SweepConfigError,
    ValidationFailedError,
)
from .plot import render_plot
from .state_ops import StateForm, Statistics
from .sweep import (
    FigurePreset,
    SweepConfig,
    SweepTable,
    load_config,
    point_reports,
    run_sweep,
    separation_metrics,
    write_atomic,
)
from .validate import validate

qtl = logging.getLogger(QT_LOGGER)
"""Our logger instance with the appropriate tag."""

_CONFIG_ERRORS = (SweepConfigError, BarrierSpecError, MomentumDomainError, PacketSpecError, ScenarioSpecError)


def _series(raw: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in raw.split(",") if item.strip())


def _add_config_flags(parser: argparse.ArgumentParser):
    """Flags shared by every subcommand that builds a :class:`SweepConfig`; ``None`` means not given."""
    parser.add_argument("--config", help="flat key = value config file; flags override it")
    parser.add_argument(
        "--preset", type=FigurePreset, choices=list(FigurePreset), metavar="PRESET", help="fig1 to fig4"
    )
    parser.add_argument("--q-min", dest="q_min", type=float, help="sweep start in m.u.")
    parser.add_argument("--q-max", dest="q_max", type=float, help="sweep end in m.u.")
    parser.add_argument("--steps", type=int, help="grid intervals between q-min and q-max")
    parser.add_argument("--a", type=float, help="coefficient of term a")
    parser.add_argument("--b-phase", dest="b_phase", type=float, help="relative phase of b in radians")
    parser.add_argument("--p", type=float, help="central momentum of psi in m.u.")
    parser.add_argument("--pbar", type=float, help="central momentum of varphi in m.u.")
    parser.add_argument("--qbar", type=float, help="central momentum of chi in m.u.")
    parser.add_argument("--bigP", dest="big_p", type=float, help="packet width P in m.u.")
    parser.add_argument("--d", type=float, help="barrier width in l.u.")
    parser.add_argument(
        "--statistics", type=Statistics, choices=list(Statistics), metavar="STATISTICS", help="particle statistics"
    )
    parser.add_argument("--form", type=StateForm, choices=list(StateForm), metavar="FORM", help="state form")
    parser.add_argument("--series", type=_series, help="comma separated series names, overrides the preset")
    parser.add_argument("--workers", type=int, help="threads evaluating sweep rows")
    parser.add_argument("--out", help="output file; stdout when omitted")


def build_parser() -> argparse.ArgumentParser:
    """
    The argument parser of the command line.

    Returns:
        (argparse.ArgumentParser): The parser.
    """
    parser = argparse.ArgumentParser(prog="quitunnel", description="Two-particle tunnelling through a barrier.")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="sweep q and write a CSV table")
    _add_config_flags(sweep)
    sweep.add_argument("--summary", action="store_true", help="print separation metrics to stderr")

    plot = commands.add_parser("plot", help="render a CSV table as an SVG line chart")
    plot.add_argument("csv", help="the CSV table")
    plot.add_argument("--out", help="output SVG; stdout when omitted")
    plot.add_argument("--title", help="chart title")

    check = commands.add_parser("validate", help="check the model against the numerical oracles")
    _add_config_flags(check)

    point = commands.add_parser("point", help="evaluate every probability at one q")
    _add_config_flags(point)
    point.add_argument("--q", type=float, required=True, help="central momentum of phi in m.u.")
    return parser


def _config(args: argparse.Namespace) -> SweepConfig:
    overrides = {
        name: getattr(args, name)
        for name in (
            "preset",
            "q_min",
            "q_max",
            "steps",
            "a",
            "b_phase",
            "p",
            "pbar",
            "qbar",
            "big_p",
            "d",
            "statistics",
            "form",
            "series",
            "workers",
            "out",
        )
    }
    return load_config(args.config, **overrides)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)
        qtl.info("Wrote %s", out)


def _enable_console_logging():
    logger = logging.getLogger(QT_LOGGER)
    if not any(isinstance(h, logging.StreamHandler) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(QT_LOG_FORMAT)
        logger.addHandler(handler)
    logger.setLevel(logging.INFO)


def _sweep(args: argparse.Namespace):
    cfg = _config(args)
    table = run_sweep(cfg)
    _emit(table.to_csv(), cfg.out)
    if args.summary:
        metrics = separation_metrics(table)
        for name, value in (
            ("sup_mix", metrics.sup_mix),
            ("ide_dis_ratio", metrics.ide_dis_ratio),
            ("ratio_q", metrics.ratio_q),
        ):
            print(f"{name} = {'undefined' if value is None else f'{value:.6g}'}", file=sys.stderr)


def _plot(args: argparse.Namespace):
    try:
        with open(args.csv, "r", encoding="utf8") as csv_file:
            text = csv_file.read()
    except OSError as err:
        raise EmptyTableError(f"Cannot read {args.csv}: {err}") from err
    _emit(render_plot(SweepTable.from_csv(text), title=args.title), args.out)


def _validate(args: argparse.Namespace):
    report = validate(_config(args))
    for line in report.lines():
        print(line)
    if not report.passed:
        raise ValidationFailedError("One or more validation checks failed")


def _point(args: argparse.Namespace):
    cfg = _config(args)
    names = cfg.columns() if (cfg.series or cfg.preset or cfg.statistics or cfg.form) else None
    lines = [f"q = {args.q:.12g}"]
    for name, report in point_reports(cfg, args.q, names).items():
        value = f"{report.value:.12g}" if report.defined else f"undefined ({report.reason})"
        lines.append(f"{name} = {value}")
        for key, item in report.diagnostics.items():
            lines.append(f"    {key} = {item}")
    _emit("\n".join(lines) + "\n", cfg.out)


def main(argv: list[str] | None = None) -> int:
    """
    Entry point of the ``quitunnel`` command.

    Args:
        argv (list[str] | None): Arguments without the program name; ``sys.argv`` when omitted.

    Returns:
        (int): The exit code: 0 on success, 1 for failed validation or unusable tables, 2 for bad configuration.
    """
    args = build_parser().parse_args(argv)
    if args.verbose:
        _enable_console_logging()
    handlers = {"sweep": _sweep, "plot": _plot, "validate": _validate, "point": _point}
    try:
        handlers[args.command](args)
    except _CONFIG_ERRORS as err:
        print(f"quitunnel: {err}", file=sys.stderr)
        return 2
    except (EmptyTableError, ValidationFailedError) as err:
        print(f"quitunnel: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end binding the toolkit to graph and DFA files."""
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple

from pydantic import ValidationError

from quota_trees.cli.models import (
    CliArguments,
    Command,
    CountOutput,
    DfaDocument,
    EquivalenceOutput,
    GraphDocument,
    MqfOutput,
)
from quota_trees.cli.utils.arguments import parse_args
from quota_trees.cli.utils.documents import load_dfa_document, load_graph_document, render, render_lines  # noqa: E501
from quota_trees.cli.utils.log import LoggingClass
from quota_trees.counting import count_forests
from quota_trees.dfa import dfa_equivalent, expand_dfa, minimize_dfa
from quota_trees.exceptions import (
    EnumerationBoundError,
    InfeasibleError,
    InputFormatError,
    InvalidInventoryError,
    QuotaSpecError,
    SamplingError,
)
from quota_trees.feasibility import feasibility_report
from quota_trees.models import Mode, MultiGraph, SearchConfig, Vector
from quota_trees.mqf import inventory_to_forest, min_quota_inventory
from quota_trees.oracle import enumerate_forests
from quota_trees.sampling import sample_batch
from quota_trees.search import canonicalize, k_lightest_paths, quota_search
from quota_trees.settings import settings

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

Outcome = Tuple[str, int]

logger = logging.getLogger(settings.logger_name)


def _instance(arguments: CliArguments) -> Tuple[GraphDocument, MultiGraph, Vector, Vector]:  # noqa: E501
    document = load_graph_document(arguments.input_path)
    graph = document.to_graph()
    quota = arguments.quota or document.quota
    portfolio = arguments.portfolio or document.portfolio
    if quota is None:
        raise InputFormatError(str(arguments.input_path), "quota", "no quota in the file or on the command line")  # noqa: E501
    if portfolio is None:
        raise InputFormatError(str(arguments.input_path), "portfolio", "no portfolio in the file or on the command line")  # noqa: E501
    return (
        document,
        graph,
        graph.check_vector(quota, "quota"),
        graph.check_vector(portfolio, "portfolio"),
    )


def _seed(arguments: CliArguments) -> int:
    if arguments.seed is None:
        raise InputFormatError(str(arguments.input_path), "seed", f"{arguments.command.value} requires --seed")  # noqa: E501
    return arguments.seed


def run_check(arguments: CliArguments) -> Outcome:
    """
    Feasibility report, negative when the chosen mode is not achievable.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    _, graph, quota, portfolio = _instance(arguments)
    report = feasibility_report(graph, quota, portfolio)
    if arguments.mode is Mode.EXACT:
        feasible = report.achievable_exact
    else:
        feasible = report.achievable_at_most
    return render(report, arguments.json_output), EXIT_OK if feasible else EXIT_NEGATIVE


def run_count(arguments: CliArguments) -> Outcome:
    """
    Forest count, negative when it is zero.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    _, graph, quota, portfolio = _instance(arguments)
    count = count_forests(graph, quota, portfolio, arguments.mode, arguments.method)
    text = render(CountOutput(count=count), True) if arguments.json_output else str(count)  # noqa: E501
    return text, EXIT_OK if count else EXIT_NEGATIVE


def run_sample(arguments: CliArguments) -> Outcome:
    """
    Uniform samples, one forest JSON per line.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    _, graph, quota, portfolio = _instance(arguments)
    forests = sample_batch(
        graph,
        quota,
        portfolio,
        arguments.samples,
        _seed(arguments),
        fast=not arguments.slow,
    )
    return render_lines(canonicalize(forest) for forest in forests), EXIT_OK


def run_search(arguments: CliArguments) -> Outcome:
    """
    Quota search report, negative when quota is left over.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    document, graph, quota, portfolio = _instance(arguments)
    config = SearchConfig(
        discipline=arguments.discipline,
        seed=arguments.seed,
        mode=arguments.mode,
        relaxation=arguments.relaxation,
    )
    report = quota_search(graph, quota, portfolio, config, document.to_weights())
    report = report.model_copy(update={"forest": canonicalize(report.forest)})
    return render(report, arguments.json_output), EXIT_OK if report.succeeded else EXIT_NEGATIVE  # noqa: E501


def run_klp(arguments: CliArguments) -> Outcome:
    """
    The k lightest paths from the portfolio vertices.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    document, graph, _, portfolio = _instance(arguments)
    paths = k_lightest_paths(graph, portfolio, arguments.k, document.to_weights())
    return render(paths, arguments.json_output), EXIT_OK


def run_mqf(arguments: CliArguments) -> Outcome:
    """
    Minimum quota forest inventory and weight.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    document, graph, quota, portfolio = _instance(arguments)
    result = min_quota_inventory(graph, quota, portfolio, document.to_weights())
    forest = None
    if arguments.with_forest:
        forest = inventory_to_forest(graph, quota, portfolio, result.inventory)
    return render(MqfOutput.from_result(result, forest), arguments.json_output), EXIT_OK


def run_enumerate(arguments: CliArguments) -> Outcome:
    """
    Every forest, one JSON per line, negative when there is none.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    _, graph, quota, portfolio = _instance(arguments)
    forests = enumerate_forests(graph, quota, portfolio, arguments.mode, arguments.force)  # noqa: E501
    return render_lines(forests), EXIT_OK if forests else EXIT_NEGATIVE


def run_dfa_expand(arguments: CliArguments) -> Outcome:
    """
    Random expansion of a minimal DFA.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    dfa = load_dfa_document(arguments.input_path).to_dfa()
    expanded = expand_dfa(dfa, arguments.sizes or (), _seed(arguments))
    return render(DfaDocument.from_dfa(expanded), arguments.json_output), EXIT_OK


def run_dfa_min(arguments: CliArguments) -> Outcome:
    """
    Minimal DFA.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    dfa = load_dfa_document(arguments.input_path).to_dfa()
    return render(DfaDocument.from_dfa(minimize_dfa(dfa)), arguments.json_output), EXIT_OK  # noqa: E501


def run_dfa_eq(arguments: CliArguments) -> Outcome:
    """
    Language equivalence, negative when the languages differ.

    :param arguments: parsed arguments.
    :return: output text and exit code.
    """
    first = load_dfa_document(arguments.input_path).to_dfa()
    second = load_dfa_document(arguments.other_path or Path()).to_dfa()
    equivalent = dfa_equivalent(first, second)
    if arguments.json_output:
        text = render(EquivalenceOutput(equivalent=equivalent), True)
    else:
        text = "true" if equivalent else "false"
    return text, EXIT_OK if equivalent else EXIT_NEGATIVE


HANDLERS: Dict[Command, Callable[[CliArguments], Outcome]] = {
    Command.CHECK: run_check,
    Command.COUNT: run_count,
    Command.SAMPLE: run_sample,
    Command.SEARCH: run_search,
    Command.KLP: run_klp,
    Command.MQF: run_mqf,
    Command.ENUMERATE: run_enumerate,
    Command.DFA_EXPAND: run_dfa_expand,
    Command.DFA_MIN: run_dfa_min,
    Command.DFA_EQ: run_dfa_eq,
}


def _emit(text: str, output_path: Optional[Path]) -> None:
    if not text:
        return
    if output_path is None:
        sys.stdout.write(f"{text}\n")
        return
    with open(output_path, "w", encoding="utf-8") as output_file:
        output_file.write(f"{text}\n")


def run(argv: Optional[Sequence[str]] = None) -> int:  # noqa: WPS212
    """
    Parse arguments, run one subcommand and write its output.

    :param argv: arguments without the program name, sys.argv when omitted.
    :return: 0 on success, 1 for an infeasible or negative result, 2 for usage and input errors.
    """  # noqa: E501
    LoggingClass(name=settings.logger_name, level=settings.log_level.value).create_logger()  # noqa: E501
    try:
        arguments = parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    except ValidationError as exc:
        logger.error(f"invalid arguments: {exc.errors()[0]['msg']}")
        return EXIT_USAGE

    logger.info(f"running {arguments.command.value} on {arguments.input_path}")
    try:
        text, code = HANDLERS[arguments.command](arguments)
    except (InputFormatError, QuotaSpecError, EnumerationBoundError, SamplingError, ValidationError) as exc:  # noqa: E501
        logger.error(str(exc))
        return EXIT_USAGE
    except (InfeasibleError, InvalidInventoryError) as exc:
        logger.error(str(exc))
        return EXIT_NEGATIVE
    _emit(text, arguments.output_path)
    return code

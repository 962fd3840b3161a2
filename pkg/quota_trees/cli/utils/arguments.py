import argparse
from typing import Dict, Optional, Sequence

from quota_trees.cli.models import CliArguments, Command
from quota_trees.counting import CountMethod
from quota_trees.models import Discipline

GRAPH_COMMANDS = (
    Command.CHECK,
    Command.COUNT,
    Command.SAMPLE,
    Command.SEARCH,
    Command.KLP,
    Command.MQF,
    Command.ENUMERATE,
)

HELP: Dict[Command, str] = {
    Command.CHECK: "Report connectivity and enough-arrows conditions.",
    Command.COUNT: "Count quota forests.",
    Command.SAMPLE: "Draw uniform random quota forests.",
    Command.SEARCH: "Run quota search with a queue discipline.",
    Command.KLP: "List the k lightest paths to every vertex.",
    Command.MQF: "Compute a minimum-weight quota forest inventory.",
    Command.ENUMERATE: "List every quota forest of a small instance.",
    Command.DFA_EXPAND: "Expand a minimal DFA to given class sizes.",
    Command.DFA_MIN: "Minimize a DFA.",
    Command.DFA_EQ: "Decide whether two DFAs accept the same language.",
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--input",
        required=True,
        help="Graph or DFA file, JSON or YAML.",
        dest="input_path",
    )
    common.add_argument(
        "--output",
        default=None,
        help="Write the result here instead of stdout.",
        dest="output_path",
    )
    common.add_argument(
        "--json",
        action="store_true",
        help="Emit JSON instead of YAML text.",
        dest="json_output",
    )
    return common


def _graph_parser() -> argparse.ArgumentParser:
    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("--quota", default=None, help="Quota override, e.g. 3,2,3.")
    graph.add_argument("--portfolio", default=None, help="Portfolio override, e.g. 1,0,0.")  # noqa: E501
    graph.add_argument(
        "--mode",
        default="exact",
        help="Portfolio semantics: exact or atmost.",
    )
    return graph


def build_parser() -> argparse.ArgumentParser:
    """
    Parser with one subparser per command.

    :return: argparse parser.
    """
    parser = argparse.ArgumentParser(
        prog="quota_trees",
        description="Count, sample, search and optimize quota trees.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()
    graph = _graph_parser()

    parsers = {
        command: subparsers.add_parser(
            command.value,
            parents=[common, graph] if command in GRAPH_COMMANDS else [common],
            help=HELP[command],
        )
        for command in Command
    }

    parsers[Command.COUNT].add_argument(
        "--method",
        default=CountMethod.DET.value,
        choices=[method.value for method in CountMethod],
        help="Determinant, recurrence or brute-force enumeration.",
    )
    for command in (Command.SAMPLE, Command.SEARCH, Command.DFA_EXPAND):
        parsers[command].add_argument("--seed", type=int, default=None, help="Random seed.")  # noqa: E501
    parsers[Command.SAMPLE].add_argument(
        "--n",
        type=int,
        default=1,
        help="Number of samples.",
        dest="samples",
    )
    parsers[Command.SAMPLE].add_argument(
        "--slow",
        action="store_true",
        help="Recompute every count instead of updating the inverse.",
    )
    parsers[Command.SEARCH].add_argument(
        "--discipline",
        default=Discipline.FIFO.value,
        choices=[discipline.value for discipline in Discipline],
        help="Queue extraction rule.",
    )
    parsers[Command.SEARCH].add_argument(
        "--relaxation",
        action="store_true",
        help="Keep only the q(v) best candidates per vertex.",
    )
    parsers[Command.KLP].add_argument("--k", type=int, default=1, help="Paths per vertex.")  # noqa: E501
    parsers[Command.MQF].add_argument(
        "--forest",
        action="store_true",
        help="Also emit a forest realizing the inventory.",
        dest="with_forest",
    )
    parsers[Command.ENUMERATE].add_argument(
        "--force",
        action="store_true",
        help="Enumerate beyond the total quota cap.",
    )
    parsers[Command.DFA_EXPAND].add_argument(
        "--sizes",
        default=None,
        help="Class sizes, e.g. 3,2,3.",
    )
    parsers[Command.DFA_EQ].add_argument(
        "--other",
        default=None,
        help="Second DFA file.",
        dest="other_path",
    )
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> CliArguments:
    """
    Return CliArguments model with parsed cli args.

    :param argv: arguments without the program name, sys.argv when omitted.
    :return: validated CliArguments.
    """
    args = build_parser().parse_args(None if argv is None else list(argv))
    values = {key: value for key, value in vars(args).items() if value is not None}
    return CliArguments(**values)


from pathlib import Path
from typing import Any, Iterable, Type, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from quota_trees.cli.models import DfaDocument, GraphDocument
from quota_trees.cli.utils.yaml import load_yaml_file
from quota_trees.exceptions import InputFormatError

DocumentT = TypeVar("DocumentT", bound=BaseModel)


def validate_document(path: Path, raw: Any, model: Type[DocumentT]) -> DocumentT:
    """
    Validate a loaded document, reporting the first problem by field path.

    :param path: file the document came from.
    :param raw: loaded python object.
    :param model: document model.
    :raises InputFormatError: when validation fails.
    :return: validated document.
    """
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        error = exc.errors()[0]
        position = ".".join(str(part) for part in error["loc"]) or "document"
        raise InputFormatError(str(path), position, error["msg"])


def load_graph_document(path: Path) -> GraphDocument:
    """
    Read a graph file.

    :param path: JSON or YAML graph file.
    :return: validated GraphDocument.
    """
    return validate_document(path, load_yaml_file(path), GraphDocument)


def load_dfa_document(path: Path) -> DfaDocument:
    """
    Read a DFA file.

    :param path: JSON or YAML DFA file.
    :return: validated DfaDocument.
    """
    return validate_document(path, load_yaml_file(path), DfaDocument)


def render(model: BaseModel, json_output: bool) -> str:
    """
    Serialize a result in field order.

    :param model: result model.
    :param json_output: compact JSON instead of block YAML.
    :return: text ending without a newline.
    """
    if json_output:
        return model.model_dump_json()
    return yaml.safe_dump(
        model.model_dump(mode="json"),
        sort_keys=False,
        default_flow_style=None,
    ).rstrip("\n")


def render_lines(models: Iterable[BaseModel]) -> str:
    """
    One compact JSON document per line.

    :param models: result models.
    :return: JSON lines joined by newlines.
    """
    return "\n".join(model.model_dump_json() for model in models)

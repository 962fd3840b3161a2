from pathlib import Path
from typing import Any

import yaml

from quota_trees.exceptions import InputFormatError


def load_yaml_file(yaml_file_path: Path) -> Any:
    """
    Loads a YAML (or JSON) document.

    JSON documents are valid YAML, so graph and DFA files are read here too.

    :param yaml_file_path: absolute path to the document.
    :raises InputFormatError: when the file is missing or not well formed.
    :return: python object with loaded document.
    """
    try:
        with open(yaml_file_path, "r", encoding="utf-8") as yaml_file:
            return yaml.safe_load(yaml_file)
    except OSError as exc:
        raise InputFormatError(str(yaml_file_path), "0:0", exc.strerror or str(exc))
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        position = "0:0"
        if mark is not None:
            position = f"{mark.line + 1}:{mark.column + 1}"
        problem = getattr(exc, "problem", None) or str(exc)
        raise InputFormatError(str(yaml_file_path), position, problem)

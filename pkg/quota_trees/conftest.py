from os.path import dirname
from pathlib import Path
from typing import Any, Dict

import pytest

from quota_trees.cli.models import GraphDocument
from quota_trees.cli.utils.documents import load_dfa_document, load_graph_document
from quota_trees.cli.utils.yaml import load_yaml_file
from quota_trees.models import Dfa


@pytest.fixture(scope="session")
def anyio_backend() -> str:
    """
    Backend for anyio pytest plugin.

    :return: backend name.
    """
    return "asyncio"


@pytest.fixture(scope="session")
def resources_path() -> Path:
    """
    Directory of the shipped example corpus.

    :return: path to tests/resources.
    """
    project_root = dirname(__file__)
    return Path(f"{project_root}/tests/resources")


@pytest.fixture(scope="session")
def fibonacci_document(resources_path: Path) -> GraphDocument:
    """
    Loads the Fibonacci DFA graph file.

    :param resources_path: corpus directory.
    :return: validated graph document.
    """
    return load_graph_document(resources_path / "fibonacci.json")


@pytest.fixture(scope="session")
def fibonacci_dfa(resources_path: Path) -> Dfa:
    """
    Loads the minimal Fibonacci DFA.

    :param resources_path: corpus directory.
    :return: Dfa.
    """
    return load_dfa_document(resources_path / "fibonacci-dfa.json").to_dfa()


@pytest.fixture(scope="session")
def k2loop_document(resources_path: Path) -> GraphDocument:
    """
    Loads the looped K2 file.

    :param resources_path: corpus directory.
    :return: validated graph document.
    """
    return load_graph_document(resources_path / "k2loop.json")


@pytest.fixture(scope="session")
def rose2_document(resources_path: Path) -> GraphDocument:
    """
    Loads the two-loop rose file.

    :param resources_path: corpus directory.
    :return: validated graph document.
    """
    return load_graph_document(resources_path / "rose2.json")


@pytest.fixture(scope="session")
def mqf_document(resources_path: Path) -> GraphDocument:
    """
    Loads the weighted minimum quota forest example.

    :param resources_path: corpus directory.
    :return: validated graph document.
    """
    return load_graph_document(resources_path / "mqf-example.json")


@pytest.fixture(scope="session")
def triangle_document(resources_path: Path) -> GraphDocument:
    """
    Loads the weighted triangle used by the path tests.

    :param resources_path: corpus directory.
    :return: validated graph document.
    """
    return load_graph_document(resources_path / "triangle.json")


@pytest.fixture(scope="session")
def narayana_table(resources_path: Path) -> Dict[str, Any]:
    """
    Loads the at-most count table of looped K2.

    :param resources_path: corpus directory.
    :return: python object with loaded YAML file.
    """
    return load_yaml_file(resources_path / "narayana.yaml")


@pytest.fixture(scope="session")
def closed_forms(resources_path: Path) -> Dict[str, Any]:
    """
    Loads the closed-form count table.

    :param resources_path: corpus directory.
    :return: python object with loaded YAML file.
    """
    return load_yaml_file(resources_path / "closed_forms.yaml")

"""
Utility functions for YAML parsing and generation.
This module provides a consistent interface for handling YAML data throughout the toolkit
(state files, settings files and the machine-readable analysis report).
"""

import logging
import re
from typing import Any, Dict, List, Type, Union

import yaml

from .exceptions import QuantonError, StateFileError

logger = logging.getLogger(__name__)


class QuantonLoader(yaml.SafeLoader):
    """SafeLoader that also reads exponent-only numbers such as ``1e-05`` as floats, as JSON does."""


QuantonLoader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(
        r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
        |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
        |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
        |[-+]?\.(?:inf|Inf|INF)
        |\.(?:nan|NaN|NAN))$""",
        re.X,
    ),
    list("-+0123456789."),
)


def load_yaml(yaml_str: str, error_cls: Type[QuantonError] = StateFileError) -> Union[Dict, List, None]:
    """
    Parse a YAML string into a Python object.

    JSON documents are accepted as well, including exponent-only numbers
    (``1e-05``) that plain YAML 1.1 would read as strings.

    Args:
        yaml_str (str): The YAML string to parse.
        error_cls (Type[QuantonError]): Exception raised on malformed input.

    Returns:
        Union[Dict, List, None]: The parsed YAML data as Python objects (None for an empty document).

    Raises:
        QuantonError: An ``error_cls`` instance if the text is not valid YAML.
    """
    try:
        return yaml.load(yaml_str, Loader=QuantonLoader)
    except yaml.YAMLError as e:
        raise error_cls(f"Error parsing YAML: {e}") from e


def dump_yaml(data: Any) -> str:
    """
    Convert a Python object to a YAML string, preserving key order.

    Args:
        data (Any): The Python object to convert to YAML.

    Returns:
        str: The YAML string representation of the data.
    """
    return yaml.safe_dump(data, default_flow_style=False, sort_keys=False)


def load_yaml_file(file_path: str, error_cls: Type[QuantonError] = StateFileError) -> Union[Dict, List, None]:
    """
    Loads and parses a YAML file.

    Args:
        file_path (str): The path to the YAML file to load.
        error_cls (Type[QuantonError]): Exception raised on malformed content.

    Returns:
        Union[Dict, List, None]: The parsed content, or None if the file is empty.

    Raises:
        OSError: If the file cannot be read.
        QuantonError: An ``error_cls`` instance if the content is not valid YAML.
    """
    with open(file_path, 'r', encoding='utf-8') as f:
        yaml_content = f.read()

    if not yaml_content.strip():
        logger.warning("YAML file %s is empty.", file_path)
        return None
    return load_yaml(yaml_content, error_cls=error_cls)


def save_yaml_file(data: Any, file_path: str) -> None:
    """
    Writes ``data`` to ``file_path`` as YAML (UTF-8, LF line endings).

    Args:
        data (Any): The Python object to serialize.
        file_path (str): Destination path; overwritten if it exists.
    """
    with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dump_yaml(data))

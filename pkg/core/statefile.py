# core/statefile.py

"""
Reading and writing state files.

A state file is a YAML (or JSON) mapping::

    label: bell            # optional
    amplitudes:            # exactly 4 [re, im] pairs, basis order
      - [0.7071067811865476, 0.0]   # path0 ⊗ pol0
      - [0.0, 0.0]                  # path0 ⊗ pol1
      - [0.0, 0.0]                  # path1 ⊗ pol0
      - [0.7071067811865476, 0.0]   # path1 ⊗ pol1

See docs/state_file_format.md.
"""

import logging
from dataclasses import dataclass
from numbers import Real
from typing import Optional

from .exceptions import QuantonError, StateFileError
from .quanton import DEFAULT_TOL_NORM, StateVector4
from .utils import complex_to_pairs, pairs_to_complex
from .yaml_utils import load_yaml, load_yaml_file, save_yaml_file

logger = logging.getLogger(__name__)

DEFAULT_TOL_STATEFILE = 1e-9


@dataclass(frozen=True)
class StateFile:
    state: StateVector4
    label: Optional[str] = None


def parse_state_document(data, source: str = "<input>", tol: float = DEFAULT_TOL_STATEFILE) -> StateFile:
    """
    Validates a parsed state document and turns it into a normalized state.

    A squared norm off by more than ``tol`` is rejected; anything off by more
    than 1e-12 but within ``tol`` is renormalized with a warning.

    Raises:
        StateFileError: On a missing or malformed field, or a norm outside ``tol``.
    """
    if not isinstance(data, dict):
        raise StateFileError(f"{source}: expected a mapping with 'amplitudes', got {type(data).__name__}")
    unknown = sorted(set(data) - {"label", "amplitudes"})
    if unknown:
        raise StateFileError(f"{source}: unknown fields {', '.join(unknown)}")

    label = data.get("label")
    if label is not None and not isinstance(label, str):
        label = str(label)

    pairs = data.get("amplitudes")
    if not isinstance(pairs, list) or len(pairs) != 4:
        raise StateFileError(f"{source}: 'amplitudes' must be a list of 4 [re, im] pairs")
    for i, pair in enumerate(pairs):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, Real) and not isinstance(x, bool) for x in pair)
        ):
            raise StateFileError(f"{source}: amplitude {i} must be a [re, im] pair of numbers, got {pair!r}")

    try:
        state = StateVector4(pairs_to_complex(pairs))
    except QuantonError as e:
        raise StateFileError(f"{source}: {e}") from e

    deviation = abs(state.norm_squared - 1.0)
    if deviation > tol:
        raise StateFileError(f"{source}: state norm deviates from 1 by {deviation:.3g} (tolerance {tol:g})")
    if deviation > DEFAULT_TOL_NORM:
        logger.warning("%s: renormalizing state (norm deviation %.3g)", source, deviation)
        state = state.normalized()
    return StateFile(state, label)


def load_state_file(file_path: str, tol: float = DEFAULT_TOL_STATEFILE) -> StateFile:
    """
    Loads a state file from disk.

    Raises:
        OSError: If the file cannot be read.
        StateFileError: If it does not describe a normalized state.
    """
    data = load_yaml_file(file_path, error_cls=StateFileError)
    if data is None:
        raise StateFileError(f"{file_path}: empty state file")
    return parse_state_document(data, source=file_path, tol=tol)


def loads_state(text: str, tol: float = DEFAULT_TOL_STATEFILE) -> StateFile:
    return parse_state_document(load_yaml(text), tol=tol)


def save_state_file(state_file: StateFile, file_path: str) -> None:
    """Writes a state file; the label is omitted when unset."""
    data = {}
    if state_file.label is not None:
        data["label"] = state_file.label
    data["amplitudes"] = complex_to_pairs(state_file.state.amp)
    save_yaml_file(data, file_path)
    logger.debug("Wrote state file %s (norm² = %.15g)", file_path, state_file.state.norm_squared)

import math
from typing import List, Sequence

import numpy as np

from .exceptions import RangeError

TWO_PI = 2.0 * math.pi


# --- NUMBER FORMATTING ---

def format_number(value: float, digits: int = 12) -> str:
    """
    Formats a real number with ``digits`` significant digits.

    Used for every number written to CSV files and text reports so that a
    residual check survives a write/read round trip.

    Args:
        value (float): The number to format.
        digits (int): Significant digits. Defaults to 12.

    Returns:
        str: e.g. ``format_number(2 ** 0.5)`` -> ``"1.41421356237"``.
    """
    text = f"{float(value):.{digits}g}"
    # avoid "-0" in files that are compared byte-for-byte
    return "0" if text in ("-0", "-0.0") else text


def wrap_phase(angle: float) -> float:
    """Maps an angle onto [0, 2π)."""
    wrapped = math.fmod(float(angle), TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod can return exactly 2π after the shift for tiny negative inputs
    return 0.0 if wrapped >= TWO_PI else wrapped


def phase_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, π]."""
    d = wrap_phase(a - b)
    return min(d, TWO_PI - d)


# --- COMPLEX <-> [re, im] PAIRS ---

def complex_to_pairs(values: Sequence[complex]) -> List[List[float]]:
    """Converts complex amplitudes to the ``[re, im]`` pairs used by state files."""
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


def pairs_to_complex(pairs: Sequence[Sequence[float]]) -> np.ndarray:
    """Inverse of :func:`complex_to_pairs`."""
    return np.array([complex(float(re), float(im)) for re, im in pairs], dtype=np.complex128)


# --- CLI ARGUMENT PARSING ---

def parse_float_list(text: str) -> List[float]:
    """
    Parses a comma separated list of floats, e.g. ``"0,0.5,1"``.

    Raises:
        RangeError: If the list is empty or an entry is not a finite number.
    """
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise RangeError(f"Empty number list: {text!r}")
    values = []
    for item in items:
        try:
            value = float(item)
        except ValueError as e:
            raise RangeError(f"Not a number: {item!r}") from e
        if not math.isfinite(value):
            raise RangeError(f"Not a finite number: {item!r}")
        values.append(value)
    return values


def parse_grid(text: str) -> np.ndarray:
    """
    Parses a ``start:stop:step`` grid (stop inclusive).

    The number of points is rounded so that ``"0:1:0.01"`` yields exactly 101
    points, and the values are computed as ``start + k * step`` to avoid
    accumulating rounding error.

    Raises:
        RangeError: If the text is malformed, the step is not positive, or stop < start.
    """
    parts = text.split(':')
    if len(parts) != 3:
        raise RangeError(f"Grid must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as e:
        raise RangeError(f"Grid entries must be numbers, got {text!r}") from e
    if step <= 0.0:
        raise RangeError(f"Grid step must be positive, got {step}")
    if stop < start:
        raise RangeError(f"Grid stop {stop} is below start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    points = start + step * np.arange(count, dtype=float)
    # pin the last point to stop when the grid lands on it
    if abs(points[-1] - stop) < 1e-9 * max(1.0, abs(stop)):
        points[-1] = stop
    return points

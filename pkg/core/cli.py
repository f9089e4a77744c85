# core/cli.py

"""
Command-line front end.

Commands:

* ``analyze FILE``: parameters, measures and nearest particle of a state file;
* ``sweep-particle-distance``: particle distance over a (γ, D̄) grid;
* ``verify-equidistance``: measured vs predicted particle distance on random
  states of fixed D̄;
* ``pwe-triangle``: pairwise distances of the particle, wave and entanglon;
* ``vdc-sphere``: Haar-sampled (V, D, C) points with their particle distance;
* ``compare-references``: distance spread from each exemplar to states of
  fixed D̄.

CSV files start with ``#`` comment lines recording the tool version, the
command line and the seed, followed by a header row. Options that do not
change the data (``--out``, ``--workers``, ``--log-level``, ``-v``) are left out
of the recorded command line, so reruns reproduce files byte for byte.

Exit codes: 0 success, 1 verification failed, 2 usage or input error.
"""

import argparse
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np
import pandas as pd

from . import __version__
from .exceptions import QuantonError, RangeError
from .geometry import (
    bures_distance,
    distance_spread,
    grid_min_particle_distance,
    min_particle_distance,
    particle_distance,
    relative_overlap_params,
)
from .quanton import (
    DEFAULT_TOL_NORM,
    StateVector4,
    canonical_states,
    conditional_basis,
    extract_params,
    standard_basis,
    swap_paths,
    triality_residual,
)
from .sampler import SampleSeed, haar_random_state, random_state_fixed_D
from .settings import load_settings
from .statefile import load_state_file
from .utils import complex_to_pairs, format_number, parse_float_list, parse_grid

logger = logging.getLogger(__name__)

T = TypeVar("T")

PROG = "quanton-geometry"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# column order of every CSV the tool writes
CSV_COLUMNS: Dict[str, List[str]] = {
    "sweep-particle-distance": ["gamma", "dbar", "distance"],
    "verify-equidistance": ["sample", "gamma", "dbar", "distance", "predicted", "residual"],
    "pwe-triangle": ["first", "second", "distance"],
    "vdc-sphere": ["sample", "V", "D", "C", "alpha", "beta", "gamma", "distance", "predicted"],
    "compare-references": ["reference", "sample", "dbar", "distance"],
}

# options that only steer execution; dropped from the recorded command line
_UNRECORDED_OPTIONS = {"--out": True, "--workers": True, "--log-level": True, "-v": False, "--verbose": False}

_PARTICLE = StateVector4([1.0, 0.0, 0.0, 0.0])


# --- OUTPUT HELPERS ---

def recorded_command(argv: Sequence[str]) -> str:
    """The command line as written into file headers."""
    kept = []
    skip_next = False
    for token in argv:
        if skip_next:
            skip_next = False
            continue
        name = token.split("=", 1)[0]
        if name in _UNRECORDED_OPTIONS:
            skip_next = _UNRECORDED_OPTIONS[name] and "=" not in token
            continue
        kept.append(token)
    return " ".join([PROG] + kept)


def format_table(rows: List[Dict[str, Any]], columns: List[str], digits: int) -> pd.DataFrame:
    """Rows as a DataFrame of preformatted strings; floats get ``digits`` significant digits."""
    def cell(value):
        if isinstance(value, (float, np.floating)):
            return format_number(value, digits)
        return str(value)

    return pd.DataFrame([[cell(row[c]) for c in columns] for row in rows], columns=columns)


def render_csv(table: pd.DataFrame, header: Dict[str, Any]) -> str:
    """``# key: value`` comment lines followed by the CSV body (LF line endings)."""
    buf = io.StringIO()
    for key, value in header.items():
        buf.write(f"# {key}: {value}\n")
    table.to_csv(buf, index=False, lineterminator="\n")
    return buf.getvalue()


def write_output(text: str, out: Optional[str]) -> None:
    """Writes to ``out``, or to stdout when no path (or ``-``) is given."""
    if out and out != "-":
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.info("Wrote %s", out)
    else:
        sys.stdout.write(text)


def _report_stream(out: Optional[str]):
    # stdout carries the CSV when no --out is given
    return sys.stdout if out and out != "-" else sys.stderr


def map_samples(fn: Callable[[int], T], count: int, workers: int) -> List[T]:
    """``[fn(0), ..., fn(count − 1)]``, optionally on a thread pool; order is preserved."""
    if workers <= 1 or count <= 1:
        return [fn(k) for k in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def _file_header(args, seed: Any) -> Dict[str, Any]:
    return {PROG: __version__, "command": args.recorded_command, "seed": seed}


# --- ROW BUILDERS ---

def equidistance_row(dbar: float, seed: int, k: int, tol_norm: float = DEFAULT_TOL_NORM) -> Dict[str, Any]:
    """One sample of ``verify-equidistance``: γ, brute-force distance, prediction, residual."""
    state = random_state_fixed_D(dbar, SampleSeed(seed, k))
    gamma = relative_overlap_params(standard_basis(), conditional_basis(state, 0)).gamma
    distance = bures_distance(_PARTICLE, state, tol_norm)
    predicted = particle_distance(gamma, dbar)
    return {
        "sample": k,
        "gamma": gamma,
        "dbar": dbar,
        "distance": distance,
        "predicted": predicted,
        "residual": abs(distance - predicted),
    }


def vdc_row(seed: int, k: int, tol_norm: float = DEFAULT_TOL_NORM) -> Dict[str, Any]:
    """
    One Haar sample of ``vdc-sphere``. Paths are relabeled so that path 0
    dominates before the distance to |0⟩⊗(1, 0) is measured.
    """
    state = haar_random_state(SampleSeed(seed, k))
    result = extract_params(state, tol_norm)
    if result.paths_swapped:
        state = swap_paths(state)
    p = result.params
    gamma = relative_overlap_params(standard_basis(), result.basis).gamma
    return {
        "sample": k,
        "V": p.V,
        "D": p.D,
        "C": p.C,
        "alpha": p.alpha,
        "beta": p.beta,
        "gamma": gamma,
        "distance": bures_distance(_PARTICLE, state, tol_norm),
        "predicted": particle_distance(gamma, p.D),
    }


# --- COMMANDS ---

def cmd_analyze(args, settings: Dict[str, Any]) -> int:
    """
    Prints D, V, C, α, β, P, the triality residual and the nearest particle of
    a state file. ``--grid-check`` adds the brute-force grid minimum next to the
    analytic one. A report written to ``--out`` starts with the usual header.
    """
    tol = args.tol if args.tol is not None else settings["tol_statefile"]
    tol_norm = settings["tol_norm"]
    state_file = load_state_file(args.input, tol=tol)
    state = state_file.state
    result = extract_params(state, tol_norm)
    witness = min_particle_distance(state, tol_norm)
    residual = float(triality_residual(state, tol_norm))
    p = result.params

    report = {
        "label": state_file.label,
        "D": p.D,
        "V": p.V,
        "C": p.C,
        "alpha": p.alpha,
        "beta": p.beta,
        "P": result.predictability,
        "paths_swapped": result.paths_swapped,
        "triality_residual": residual,
        "triality_ok": bool(residual <= settings["tol_triality"]),
        "min_particle_distance": witness.distance,
        "witness_path": witness.path,
        "witness_polarization": complex_to_pairs(witness.polarization),
    }
    if not report["triality_ok"]:
        logger.warning("Triality residual %.3g exceeds %g", residual, settings["tol_triality"])
    if args.grid_check:
        grid = grid_min_particle_distance(state, settings["grid_polar"], settings["grid_azimuthal"], tol_norm)
        report["grid_min_particle_distance"] = float(grid.distance)
        report["grid_gap"] = float(grid.distance - witness.distance)

    digits = settings["float_digits"]
    header = _file_header(args, "none") if args.out and args.out != "-" else {}

    if args.json:
        payload = _round_floats(report, digits)
        if header:
            payload = {"header": header, **payload}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"# {key}: {value}" for key, value in header.items()]
        for key, value in report.items():
            if key == "witness_polarization":
                value = " ".join(f"{format_number(re, digits)}{'+' if im >= 0 else '-'}{format_number(abs(im), digits)}j" for re, im in value)
            elif isinstance(value, float):
                value = format_number(value, digits)
            lines.append(f"{key}: {value}")
        text = "\n".join(lines) + "\n"
    write_output(text, args.out)
    return EXIT_OK


def _round_floats(value, digits: int):
    if isinstance(value, float):
        return float(format_number(value, digits))
    if isinstance(value, list):
        return [_round_floats(v, digits) for v in value]
    if isinstance(value, dict):
        return {k: _round_floats(v, digits) for k, v in value.items()}
    return value


def cmd_sweep_particle_distance(args, settings: Dict[str, Any]) -> int:
    """CSV of particle_distance(γ, D̄) for every γ in the list and D̄ on the grid."""
    gammas = parse_float_list(args.gamma_list) if args.gamma_list else list(settings["default_gamma_list"])
    grid = parse_grid(args.grid or settings["default_grid"])
    for g in gammas:
        if not 0.0 <= g <= 1.0:
            raise RangeError(f"gamma must lie in [0, 1], got {g}")
    if grid[0] < 0.0 or grid[-1] > 1.0:
        raise RangeError(f"dbar grid must lie in [0, 1], got [{grid[0]}, {grid[-1]}]")

    rows = [
        {"gamma": float(g), "dbar": float(d), "distance": particle_distance(g, float(d))}
        for g in gammas
        for d in grid
    ]
    logger.info("Swept %d gamma values × %d grid points", len(gammas), len(grid))
    table = format_table(rows, CSV_COLUMNS[args.command], settings["float_digits"])
    write_output(render_csv(table, _file_header(args, "none")), args.out)
    return EXIT_OK


def cmd_verify_equidistance(args, settings: Dict[str, Any]) -> int:
    """
    Samples states at fixed D̄ and checks the brute-force distance to the
    particle |0⟩⊗(1, 0) against particle_distance(γ, D̄). Exit code 1 when the
    largest residual reaches the tolerance.
    """
    dbar = _required_dbar(args)
    samples, seed = _samples_and_seed(args, settings)
    tol = args.tol if args.tol is not None else settings["tol_equidistance"]

    rows = map_samples(lambda k: equidistance_row(dbar, seed, k, settings["tol_norm"]), samples, _workers(args, settings))
    max_residual = max(row["residual"] for row in rows)
    passed = max_residual < tol

    table = format_table(rows, CSV_COLUMNS[args.command], settings["float_digits"])
    write_output(render_csv(table, _file_header(args, seed)), args.out)

    summary = {"dbar": dbar, "samples": samples, "seed": seed, "max_residual": max_residual, "tol": tol, "passed": passed}
    _print_summary(summary, args)
    if not passed:
        logger.error("Equidistance check failed: max residual %.3g ≥ %g", max_residual, tol)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_pwe_triangle(args, settings: Dict[str, Any]) -> int:
    """Pairwise Bures distances between the particle, wave and entanglon exemplars."""
    states = canonical_states()
    pairs = [("particle", "wave"), ("particle", "entanglon"), ("entanglon", "wave")]
    rows = [{"first": a, "second": b, "distance": bures_distance(states[a], states[b])} for a, b in pairs]
    digits = settings["float_digits"]

    if args.out:
        table = format_table(rows, CSV_COLUMNS[args.command], digits)
        write_output(render_csv(table, _file_header(args, "none")), args.out)
    if args.json:
        print(json.dumps({f"d({r['first']},{r['second']})": float(format_number(r["distance"], digits)) for r in rows}, indent=2))
    else:
        for r in rows:
            print(f"d({r['first']}, {r['second']}) = {format_number(r['distance'], digits)}")
    return EXIT_OK


def cmd_vdc_sphere(args, settings: Dict[str, Any]) -> int:
    """CSV of Haar-sampled (V, D, C, α, β) with the measured and predicted particle distance."""
    samples, seed = _samples_and_seed(args, settings)
    rows = map_samples(lambda k: vdc_row(seed, k, settings["tol_norm"]), samples, _workers(args, settings))
    table = format_table(rows, CSV_COLUMNS[args.command], settings["float_digits"])
    write_output(render_csv(table, _file_header(args, seed)), args.out)
    return EXIT_OK


def cmd_compare_references(args, settings: Dict[str, Any]) -> int:
    """
    For each exemplar (particle, wave, entanglon) samples states at fixed D̄
    whose path-0 polarization is the exemplar's (1, 0), and reports the spread
    of their distances to it. Only the particle sees every such state at the
    same distance; exit code 1 when its spread reaches the tolerance.
    """
    dbar = _required_dbar(args)
    samples, seed = _samples_and_seed(args, settings)
    tol = args.tol if args.tol is not None else settings["tol_equidistance"]
    basis = standard_basis()

    aligned = map_samples(
        lambda k: random_state_fixed_D(dbar, SampleSeed(seed, k), basis=basis),
        samples,
        _workers(args, settings),
    )

    rows = []
    spreads = {}
    for name, reference in canonical_states().items():
        for k, state in enumerate(aligned):
            rows.append({"reference": name, "sample": k, "dbar": dbar, "distance": bures_distance(reference, state, settings["tol_norm"])})
        low, high = distance_spread(reference, aligned)
        spreads[name] = {"min": low, "max": high, "spread": high - low}

    table = format_table(rows, CSV_COLUMNS[args.command], settings["float_digits"])
    write_output(render_csv(table, _file_header(args, seed)), args.out)

    passed = spreads["particle"]["spread"] < tol
    _print_summary({"dbar": dbar, "samples": samples, "seed": seed, "spreads": spreads, "tol": tol, "passed": passed}, args)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def _print_summary(summary: Dict[str, Any], args) -> None:
    stream = _report_stream(args.out)
    if args.json:
        stream.write(json.dumps(summary, indent=2) + "\n")
        return
    for key, value in summary.items():
        if isinstance(value, dict):
            for name, stats in value.items():
                text = " ".join(f"{k}={format_number(v)}" for k, v in stats.items())
                stream.write(f"{key}.{name}: {text}\n")
        else:
            stream.write(f"{key}: {format_number(value) if isinstance(value, float) else value}\n")


def _required_dbar(args) -> float:
    if args.dbar is None:
        raise RangeError("--dbar is required for this command")
    if not 0.0 <= args.dbar <= 1.0:
        raise RangeError(f"dbar must lie in [0, 1], got {args.dbar}")
    return args.dbar


def _samples_and_seed(args, settings: Dict[str, Any]):
    samples = args.samples if args.samples is not None else settings["default_samples"]
    seed = args.seed if args.seed is not None else settings["default_seed"]
    if samples < 1:
        raise RangeError(f"samples must be at least 1, got {samples}")
    if not 0 <= seed < 2 ** 64:
        raise RangeError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return samples, seed


def _workers(args, settings: Dict[str, Any]) -> int:
    workers = args.workers if args.workers is not None else settings["workers"]
    return max(1, int(workers))


COMMANDS = {
    "analyze": cmd_analyze,
    "sweep-particle-distance": cmd_sweep_particle_distance,
    "verify-equidistance": cmd_verify_equidistance,
    "pwe-triangle": cmd_pwe_triangle,
    "vdc-sphere": cmd_vdc_sphere,
    "compare-references": cmd_compare_references,
}


# --- ARGUMENT PARSING ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Output path (default: stdout)")
    common.add_argument("--json", action="store_true", help="Machine-readable report")
    common.add_argument("--config", help="YAML settings file")
    common.add_argument("--workers", type=int, help="Worker threads (CLI > env:QUANTON_WORKERS > settings)")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("-v", "--verbose", action="store_true", help="Shortcut for --log-level INFO")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--seed", type=int, help="Seed (CLI > env:QUANTON_SEED > settings)")
    sampling.add_argument("--samples", type=int, help="Number of samples (CLI > env:QUANTON_SAMPLES > settings)")

    parser = argparse.ArgumentParser(prog=PROG, description="Distances between single-photon quanton states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="Analyze a state file")
    p.add_argument("input", help="State file (YAML or JSON)")
    p.add_argument("--tol", type=float, help="Accepted norm deviation of the file")
    p.add_argument("--grid-check", action="store_true", help="Also run the Bloch-grid search for the nearest particle")

    p = sub.add_parser("sweep-particle-distance", parents=[common], help="Particle distance over a (γ, D̄) grid")
    p.add_argument("--gamma-list", help="Comma separated γ values, e.g. 0,0.5,1")
    p.add_argument("--grid", help="D̄ grid start:stop:step (stop inclusive)")

    p = sub.add_parser("verify-equidistance", parents=[common, sampling], help="Check the particle distance on random states")
    p.add_argument("--dbar", type=float, required=True)
    p.add_argument("--tol", type=float, help="Largest accepted residual")

    sub.add_parser("pwe-triangle", parents=[common], help="Distances between particle, wave and entanglon")

    sub.add_parser("vdc-sphere", parents=[common, sampling], help="Sample the (V, D, C) sphere")

    p = sub.add_parser("compare-references", parents=[common, sampling], help="Distance spread per exemplar")
    p.add_argument("--dbar", type=float, required=True)
    p.add_argument("--tol", type=float, help="Largest accepted particle spread")

    return parser


def configure_logging(level: str) -> None:
    """Installs one stderr handler on the root logger (once) and sets its level."""
    root = logging.getLogger()
    handler = next((h for h in root.handlers if getattr(h, "_quanton_cli", False)), None)
    if handler is None:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._quanton_cli = True
        root.addHandler(handler)
    else:
        # sys.stderr may have been swapped since the handler was installed
        handler.stream = sys.stderr
    root.setLevel(getattr(logging, level))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parses ``argv`` and runs one command.

    Returns:
        int: The process exit code.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    configure_logging(args.log_level or ("INFO" if args.verbose else "WARNING"))
    args.recorded_command = recorded_command(argv)

    try:
        settings = load_settings(args.config)
        return COMMANDS[args.command](args, settings)
    except (QuantonError, OSError) as e:
        logger.error("%s", e)
        return EXIT_USAGE

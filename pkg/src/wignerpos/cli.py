"""Command-line front end: ``wignerpos <subcommand> ...``.

Exit codes: 0 success, 1 a well-formed input that fails the command's
contract (invalid state, negative certificate, positive input to
``decompose``), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fock
from .exceptions import DimensionError, WignerPosError
from .geometry import affine_generator_decomposition, boundary_state, classify_segment
from .positivity import EPS_ZERO, GRID, NEGATIVE, is_wigner_positive
from .scenarios import ConeSpec3D, boundary_curve_2d, cone_sweep_3d
from .wigner import wigner_polynomial

GRID_RANGE = (101, 4001)
SAMPLES_RANGE = (2, 10000)

DEFAULTS = {
    "grid": GRID,
    "eps_zero": EPS_ZERO,
    "search_radius": "auto",
    "tol_herm": fock.TOL_HERM,
    "tol_trace": fock.TOL_TRACE,
    "tol_psd": fock.TOL_PSD,
    "eps_rank": fock.EPS_RANK,
    "samples": 101,
    "steps": 200,
    "threads": "WIGNER_THREADS (0 = auto)",
}


class InputError(Exception):
    """Unreadable or malformed input file (exit code 2)."""


class Failure(Exception):
    """Command ran but the input failed its contract (exit code 1)."""


def _fmt(v: float) -> str:
    return "%.17g" % v


def _grid_arg(text: str) -> int:
    n = int(text)
    lo, hi = GRID_RANGE
    if not lo <= n <= hi or n % 2 == 0:
        raise argparse.ArgumentTypeError(f"grid must be odd and in [{lo}, {hi}], got {n}")
    return n


def _samples_arg(text: str) -> int:
    n = int(text)
    lo, hi = SAMPLES_RANGE
    if not lo <= n <= hi:
        raise argparse.ArgumentTypeError(f"samples must be in [{lo}, {hi}], got {n}")
    return n


def _positive_int(text: str) -> int:
    n = int(text)
    if not 1 <= n <= SAMPLES_RANGE[1]:
        raise argparse.ArgumentTypeError(f"expected an integer in [1, {SAMPLES_RANGE[1]}], got {n}")
    return n


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _raw_state(path: str) -> np.ndarray:
    try:
        return fock.load_state(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg})") from None
    except DimensionError as exc:
        raise InputError(f"{path}: {exc}") from None


def _state(path: str) -> np.ndarray:
    M = _raw_state(path)
    try:
        return fock.density_matrix(M)
    except WignerPosError as exc:
        raise Failure(f"{path}: not a valid density matrix: {exc}") from None


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_validate(args) -> tuple[str, int]:
    report = fock.validate(_raw_state(args.state))
    return _json(report.to_dict()), 0 if report.valid else 1


def cmd_wigner_grid(args) -> tuple[str, int]:
    Q = wigner_polynomial(_state(args.state))
    xs = np.linspace(args.xmin, args.xmax, args.n)
    W = Q.grid(xs, xs) * np.exp(-(xs[:, None] ** 2 + xs[None, :] ** 2)) / np.pi
    lines = ["x,xi,w"]
    for i, x in enumerate(xs):
        for j, xi in enumerate(xs):
            lines.append(f"{_fmt(x)},{_fmt(xi)},{_fmt(W[i, j])}")
    return "\n".join(lines) + "\n", 0


def cmd_positivity(args) -> tuple[str, int]:
    cert = is_wigner_positive(_state(args.state), args.grid, args.eps_zero, args.radius)
    return _json(cert.to_dict()), 1 if cert.verdict == NEGATIVE else 0


def cmd_boundary(args) -> tuple[str, int]:
    rho1 = _state(args.state)
    rho0 = _state(args.reference) if args.reference else None
    res = boundary_state(rho1, rho0, args.grid, args.eps_zero)
    return _json(res.to_dict()), 0


def cmd_segment(args) -> tuple[str, int]:
    rho0, rho1 = _state(args.rho0), _state(args.rho1)
    ts = np.arange(args.steps + 1) / args.steps
    seg = classify_segment(rho0, rho1, ts, args.grid, args.eps_zero)
    lines = ["t,label,min_value,crossing_t"]
    for t, lab, m in zip(seg.t_values, seg.labels, seg.min_values):
        lines.append(f"{_fmt(t)},{lab},{_fmt(m)},{_fmt(seg.crossing_t)}")
    return "\n".join(lines) + "\n", 0


def cmd_sweep2d(args) -> tuple[str, int]:
    return boundary_curve_2d(args.n, args.samples, args.grid, args.eps_zero).to_csv(), 0


def cmd_sweep3d(args) -> tuple[str, int]:
    try:
        cone = ConeSpec3D.parse(args.cone)
    except ValueError as exc:
        raise InputError(f"--cone: {exc}") from None
    return cone_sweep_3d(cone, args.samples, args.grid, args.eps_zero).to_csv(), 0


def cmd_decompose(args) -> tuple[str, int]:
    rho = _state(args.state)
    rho0 = _state(args.reference) if args.reference else None
    return _json(affine_generator_decomposition(rho, rho0, args.grid, args.eps_zero).to_dict()), 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wignerpos",
        description="Wigner functions, positivity certificates and boundary states "
                    "of Fock-truncated density matrices.")
    parser.add_argument("--show-config", action="store_true",
                        help="print default settings as JSON and exit")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, fn, help_text, state=True, numeric=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        if state:
            p.add_argument("state", help="density-matrix JSON file")
        p.add_argument("-o", "--output", help="write output here instead of stdout")
        if numeric:
            p.add_argument("--grid", type=_grid_arg, default=GRID,
                           help=f"scan grid per axis (odd, default {GRID})")
            p.add_argument("--eps-zero", type=_positive_float, default=EPS_ZERO,
                           help=f"relative nodal band half-width (default {EPS_ZERO:g})")
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "check Hermiticity, unit trace and PSD", numeric=False)

    p = add("wigner-grid", cmd_wigner_grid, "tabulate the Wigner function on a square grid",
            numeric=False)
    p.add_argument("--xmin", type=float, default=-3.0)
    p.add_argument("--xmax", type=float, default=3.0)
    p.add_argument("--n", type=_positive_int, default=61, help="nodes per axis")

    p = add("positivity", cmd_positivity, "certify Wigner positivity")
    p.add_argument("--radius", type=_positive_float, default=None,
                   help="search radius (default: certified automatic bound)")

    p = add("boundary", cmd_boundary, "boundary state on the segment from the reference")
    p.add_argument("--reference", help="strictly Wigner-positive reference (default vacuum)")

    p = add("segment", cmd_segment, "classify states along a segment", state=False)
    p.add_argument("rho0", help="strictly Wigner-positive start state")
    p.add_argument("rho1", help="end state")
    p.add_argument("--steps", type=_positive_int, default=200, help="number of t intervals")

    p = add("sweep2d", cmd_sweep2d, "boundary curve of the two-level family", state=False)
    p.add_argument("--n", type=_positive_int, required=True, help="excited Fock level")
    p.add_argument("--samples", type=_samples_arg, default=101)

    p = add("sweep3d", cmd_sweep3d, "crossing parameter along the base of a three-level cone",
            state=False)
    p.add_argument("--cone", required=True, help="a,b,c,d with b, d nonzero")
    p.add_argument("--samples", type=_samples_arg, default=101)

    p = add("decompose", cmd_decompose, "write a state as (1+s) rho_plus - s rho0")
    p.add_argument("--reference", help="strictly Wigner-positive reference (default vacuum)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.show_config:
        sys.stdout.write(_json(DEFAULTS))
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write("wignerpos: error: a subcommand is required\n")
        return 2
    try:
        text, code = args.func(args)
    except InputError as exc:
        sys.stderr.write(f"wignerpos: error: {exc}\n")
        return 2
    except (Failure, WignerPosError) as exc:
        sys.stderr.write(f"wignerpos: {args.command}: {exc}\n")
        return 1
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

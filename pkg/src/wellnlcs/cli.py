"""Command-line front end.

Subcommands: ``zeros``, ``state``, ``squeeze``, ``darkstate``, ``selfcheck``.
Output is comma-separated with ``#``-prefixed metadata lines.  Option
values resolve as command line > ``NLCS_*`` environment variable > default.

Exit codes: 0 ok, 1 self-check failure, 2 usage, 3 singular deformation,
4 non-convergence.
"""

import argparse
import csv
import datetime
import os
import sys

import numpy as np

from . import __version__
from .algebra import Undeformed, WellDeformation
from .errors import NoConvergenceError, SingularDeformationError, TruncationError
from .nlcs import DriveDeformation, DriveParams, build_state, eigen_residual
from .specfun import bessel_zeros, spherical_bessel_j

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_SINGULAR = 3
EXIT_NOCONV = 4

ENV_PREFIX = "NLCS_"
DARK_EXIT_TOL = 1e-6

DEFAULTS = {
    "l": "0",
    "kappa": "0.3",
    "ratios": "0.5",
    "phi": "0",
    "n_max": "200",
    "tail_tol": "1e-12",
}


def parse_grid(text):
    """``"x"`` -> [x]; ``"start:stop:steps"`` -> linspace(start, stop, steps)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            grid = [float(parts[0])]
        elif len(parts) == 3:
            steps = int(parts[2])
            if steps < 1:
                raise ValueError
            grid = [float(x) for x in np.linspace(float(parts[0]), float(parts[1]), steps)]
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid spec {text!r}; use X or START:STOP:STEPS")
    if any(r <= 0 for r in grid):
        raise argparse.ArgumentTypeError("grid values must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise argparse.ArgumentTypeError("grid must be strictly ascending")
    return grid


def parse_ratios(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ratio list {text!r}")
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("ratios must be a non-empty list of positive numbers")
    return vals


def non_negative_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _env_default(name, fallback):
    return os.environ.get(ENV_PREFIX + name.upper(), fallback)


def _add_physics(p, r_default):
    p.add_argument("--l", type=non_negative_int, default=_env_default("l", DEFAULTS["l"]),
                   help="angular momentum of the well states (default 0)")
    p.add_argument("--r", dest="r_grid", type=parse_grid, default=_env_default("r", r_default),
                   help="R/a_B value or START:STOP:STEPS grid")
    p.add_argument("--kappa", type=positive_float, default=_env_default("kappa", DEFAULTS["kappa"]))
    p.add_argument("--ratios", "--ratio", dest="ratios", type=parse_ratios,
                   default=_env_default("ratios", DEFAULTS["ratios"]),
                   help="Omega0/Omega1, single value or comma list")
    p.add_argument("--phi", type=float, default=_env_default("phi", DEFAULTS["phi"]),
                   help="quadrature phase")
    p.add_argument("--n-max", dest="n_max", type=positive_int,
                   default=_env_default("n_max", DEFAULTS["n_max"]))
    p.add_argument("--tail-tol", dest="tail_tol", type=positive_float,
                   default=_env_default("tail_tol", DEFAULTS["tail_tol"]))
    _add_output(p)


def _add_output(p):
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.add_argument("--reproducible", action="store_true",
                   help="omit the timestamp metadata line")
    p.add_argument("--format", choices=["csv"], default="csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wellnlcs",
        description="Nonlinear coherent states of a confined exciton: zeros, states, squeezing.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeros", help="positive zeros of the spherical Bessel function j_l")
    p.add_argument("--l", type=non_negative_int, default=_env_default("l", DEFAULTS["l"]))
    p.add_argument("--count", type=positive_int, default=10)
    _add_output(p)

    p = sub.add_parser("state", help="Fock coefficients of the nonlinear coherent state")
    _add_physics(p, "1.0")
    p.add_argument("--undeformed", action="store_true",
                   help="force f(n) = 1, giving a Glauber coherent state")

    p = sub.add_parser("squeeze", help="squeezing parameters over an R/a_B grid")
    _add_physics(p, "0.2:5:50")
    p.add_argument("--quadratures", choices=["well", "drive", "bare"], default="well",
                   help="deformation of the measured quadratures (default: the well's own)")
    p.add_argument("--workers", type=positive_int, default=1)
    p.add_argument("--plot", default=None, help="also render s1 vs R/a_B to this image file")

    p = sub.add_parser("darkstate", help="residual of H_I acting on |e>|psi>")
    _add_physics(p, "1.0")
    p.add_argument("--undeformed", action="store_true",
                   help="harmonic confinement f1(n) = 1 (trapped-ion limit)")

    sub.add_parser("selfcheck", help="run the invariant suites")
    return parser


class _Writer:
    def __init__(self, args):
        self.path = getattr(args, "out", None)
        self.handle = open(self.path, "w", newline="") if self.path else sys.stdout
        self.csv = csv.writer(self.handle, lineterminator="\n")
        self.reproducible = getattr(args, "reproducible", False)

    def meta(self, key, value):
        self.handle.write(f"# {key}={_fmt(value)}\n")

    def header(self, command):
        self.meta("generator", f"wellnlcs {__version__}")
        self.meta("command", command)
        if not self.reproducible:
            stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
            self.meta("timestamp", stamp)

    def row(self, values):
        self.csv.writerow([_fmt(v) for v in values])

    def close(self):
        if self.path:
            self.handle.close()
        else:
            self.handle.flush()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (np.floating,)):
        return repr(float(v))
    if isinstance(v, complex):
        sign = "+" if v.imag >= 0 else "-"
        return f"{v.real!r}{sign}{abs(v.imag)!r}j"
    return str(v)


def _single(args, what):
    if len(args.r_grid) != 1:
        raise argparse.ArgumentTypeError(f"{what} takes a single --r value")
    if len(args.ratios) != 1:
        raise argparse.ArgumentTypeError(f"{what} takes a single --ratio value")
    return args.r_grid[0], args.ratios[0]


def cmd_zeros(args):
    table = bessel_zeros(args.l, args.count)
    out = _Writer(args)
    out.header("zeros")
    out.meta("l", args.l)
    out.row(["k", "alpha", "residual"])
    for k, alpha in enumerate(table.zeros):
        out.row([k, alpha, abs(spherical_bessel_j(args.l, alpha))])
    out.close()
    return EXIT_OK


def cmd_state(args):
    r, ratio = _single(args, "state")
    drive = DriveParams(args.kappa, ratio, args.phi)
    wd = WellDeformation(args.l, r)
    f = Undeformed() if args.undeformed else DriveDeformation(wd, drive.kappa)
    state = build_state(wd, drive, args.n_max, args.tail_tol, deformation=f)
    out = _Writer(args)
    out.header("state")
    for key, val in [
        ("l", args.l), ("r_over_ab", r), ("kappa", args.kappa), ("omega_ratio", ratio),
        ("undeformed", args.undeformed), ("chi", drive.chi), ("chi_abs", abs(drive.chi)),
        ("N", state.trunc), ("tail", state.tail_bound), ("tail_tol", args.tail_tol),
    ]:
        out.meta(key, val)
    out.row(["n", "prob", "re", "im"])
    for n, c in enumerate(state.coeffs):
        out.row([n, float(abs(c) ** 2), float(c.real), float(c.imag)])
    out.close()
    return EXIT_OK


def cmd_squeeze(args):
    from .observables import squeezing_sweep

    rows = []
    for ratio in args.ratios:
        drive = DriveParams(args.kappa, ratio, args.phi)
        rows.extend(
            squeezing_sweep(args.l, drive, args.r_grid, args.phi, args.n_max, args.tail_tol,
                            quadratures=args.quadratures, workers=args.workers)
        )
    out = _Writer(args)
    out.header("squeeze")
    for key, val in [
        ("l", args.l), ("kappa", args.kappa), ("phi", args.phi), ("quadratures", args.quadratures),
        ("n_max", args.n_max), ("tail_tol", args.tail_tol),
    ]:
        out.meta(key, val)
    out.row(["omega_ratio", "r_over_ab", "s1", "s2", "var_x1", "var_x2", "g_expect",
             "mandel_q", "N", "status"])
    n_ok = 0
    for row in rows:
        status = row.status
        if row.ok:
            n_ok += 1
            if row.var_x1 * row.var_x2 < row.g_expect**2 / 16 - 1e-10:
                status = "heisenberg_violation"
        out.row([row.omega_ratio, row.r_over_ab, row.s1, row.s2, row.var_x1, row.var_x2,
                 row.g_expect, row.mandel_q, row.trunc, status])
    out.close()
    if args.plot:
        from .plotting import plot_squeezing

        plot_squeezing(rows, args.plot, title=rf"$\kappa={args.kappa:g}$, $\phi={args.phi:g}$")
    if n_ok:
        return EXIT_OK
    if all(r.status.startswith("singular") for r in rows):
        return EXIT_SINGULAR
    return EXIT_NOCONV


def cmd_darkstate(args):
    from .dynamics import CompositeState, build_interaction_hamiltonian, dark_state_residual

    r, ratio = _single(args, "darkstate")
    drive = DriveParams(args.kappa, ratio, args.phi)
    wd = Undeformed() if args.undeformed else WellDeformation(args.l, r)
    f = DriveDeformation(wd, drive.kappa)
    state = build_state(wd, drive, args.n_max, args.tail_tol, deformation=f)
    H = build_interaction_hamiltonian(wd, drive, state.trunc, structure=f)
    resid = dark_state_residual(H, CompositeState.excited(state))
    out = _Writer(args)
    out.header("darkstate")
    for key, val in [
        ("l", args.l), ("r_over_ab", r), ("kappa", args.kappa), ("omega_ratio", ratio),
        ("undeformed", args.undeformed), ("N", state.trunc), ("tail", state.tail_bound),
    ]:
        out.meta(key, val)
    out.row(["dark_residual", "eigen_residual", "tail", "N", "status"])
    ok = resid <= DARK_EXIT_TOL
    out.row([resid, eigen_residual(state, f, drive.chi), state.tail_bound, state.trunc,
             "dark" if ok else "not_dark"])
    out.close()
    return EXIT_OK if ok else EXIT_CHECK


def cmd_selfcheck(args):
    from .checks import run_all

    results = run_all()
    for c in results:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.3e} (tol {c.tol:.0e})")
    failed = [c for c in results if not c.passed]
    if failed:
        print(f"selfcheck failed: {failed[0].name}", file=sys.stderr)
        return EXIT_CHECK
    print(f"selfcheck passed ({len(results)} checks)")
    return EXIT_OK


COMMANDS = {
    "zeros": cmd_zeros,
    "state": cmd_state,
    "squeeze": cmd_squeeze,
    "darkstate": cmd_darkstate,
    "selfcheck": cmd_selfcheck,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except SingularDeformationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (NoConvergenceError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV


if __name__ == "__main__":
    sys.exit(main())

"""Deformed quadratures, squeezing parameters and number statistics."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .algebra import WellDeformation, ladder_matrices
from .errors import NLCSError, TruncationError
from .nlcs import DriveDeformation, build_state

__all__ = [
    "QuadratureReport",
    "SweepRow",
    "quadrature_report",
    "mandel_q",
    "squeezing_sweep",
    "EDGE_WEIGHT_LIMIT",
]

EDGE_WEIGHT_LIMIT = 1e-8


@dataclass(frozen=True)
class QuadratureReport:
    phi: float
    var_x1: float
    var_x2: float
    g_expect: float
    s1: float
    s2: float
    uncertainty_product: float
    mandel_q: float

    @property
    def heisenberg_floor(self):
        return self.g_expect**2 / 16.0


def mandel_q(state):
    """(<n^2> - <n>^2 - <n>) / <n>; zero for the vacuum."""
    p = state.probabilities
    n = np.arange(len(p))
    mean = float(p @ n)
    if mean == 0.0:
        return 0.0
    return float((p @ n**2 - mean**2 - mean) / mean)


def quadrature_report(state, f, phi=0.0):
    """Variances of X1 = (A e^{i phi} + A^dag e^{-i phi})/2 and
    X2 = (A e^{i phi} - A^dag e^{-i phi})/(2i), with A = a f(n).

    The state is embedded in a basis two levels larger than its support,
    so every product that reaches it is exact; this needs f up to N+2.
    Squeezing parameters are s_i = 4 Var(X_i) - <[A, A^dag]>, negative when
    squeezed.
    """
    c = state.coeffs
    N = state.trunc
    p = state.probabilities
    edge = p[-2:].max() if N >= 1 else 0.0
    if N >= 1 and edge > EDGE_WEIGHT_LIMIT:
        raise TruncationError(
            f"edge weight {edge:.3e} exceeds {EDGE_WEIGHT_LIMIT:.0e}; enlarge the basis"
        )
    v = np.zeros(N + 3, dtype=complex)
    v[: N + 1] = c
    A, Ad = ladder_matrices(f, N + 2)
    rot = complex(math.cos(phi), math.sin(phi))
    X1 = 0.5 * (A * rot + Ad * rot.conjugate())
    X2 = (A * rot - Ad * rot.conjugate()) / 2j

    def variance(X):
        Xv = X @ v
        mean = np.vdot(v, Xv)
        return float((np.vdot(Xv, Xv) - mean * mean).real)

    var1, var2 = variance(X1), variance(X2)
    fsq = np.array([f(n) ** 2 if n > 0 else 0.0 for n in range(N + 2)])
    n = np.arange(N + 1)
    g = float(p @ ((n + 1) * fsq[1 : N + 2] - n * fsq[: N + 1]))
    return QuadratureReport(
        phi=phi,
        var_x1=var1,
        var_x2=var2,
        g_expect=g,
        s1=4.0 * var1 - g,
        s2=4.0 * var2 - g,
        uncertainty_product=var1 * var2,
        mandel_q=mandel_q(state),
    )


@dataclass(frozen=True)
class SweepRow:
    r_over_ab: float
    omega_ratio: float
    s1: float = math.nan
    s2: float = math.nan
    var_x1: float = math.nan
    var_x2: float = math.nan
    g_expect: float = math.nan
    mandel_q: float = math.nan
    trunc: int = -1
    status: str = "ok"

    @property
    def ok(self):
        return self.status == "ok"


QUADRATURES = ("well", "drive", "bare")


def _quadrature_deformation(kind, wd, drive_def):
    if kind == "well":
        return wd
    if kind == "drive":
        return drive_def
    if kind == "bare":
        return lambda n: 1.0
    raise ValueError(f"quadrature deformation must be one of {QUADRATURES}, got {kind!r}")


def _sweep_point(l, drive, r, phi, n_max, tail_tol, quadratures):
    try:
        wd = WellDeformation(l, r)
        f = DriveDeformation(wd, drive.kappa)
        state = build_state(wd, drive, n_max, tail_tol, deformation=f)
        rep = quadrature_report(state, _quadrature_deformation(quadratures, wd, f), phi)
    except NLCSError as exc:
        return SweepRow(r, drive.omega_ratio, status=_status(exc))
    return SweepRow(
        r_over_ab=r,
        omega_ratio=drive.omega_ratio,
        s1=rep.s1,
        s2=rep.s2,
        var_x1=rep.var_x1,
        var_x2=rep.var_x2,
        g_expect=rep.g_expect,
        mandel_q=rep.mandel_q,
        trunc=state.trunc,
    )


def _status(exc):
    name = type(exc).__name__.replace("Error", "")
    out = "".join("_" + ch.lower() if ch.isupper() else ch for ch in name).lstrip("_")
    n = getattr(exc, "n", None)
    return f"{out}:n={n}" if n is not None else out


def squeezing_sweep(
    l,
    drive,
    r_grid,
    phi=0.0,
    n_max=200,
    tail_tol=1e-12,
    quadratures="well",
    workers=1,
):
    """One :class:`SweepRow` per R/a_B grid point, in grid order.

    Points whose state cannot be built are kept as rows with a non-"ok"
    status (``singular_deformation:n=..``, ``no_convergence``, ...).
    ``quadratures`` picks the deformation of the measured quadratures:
    the well's own ladder operators (default), the drive-induced f, or
    the bare boson operators.  The eigenstate property makes the "drive"
    choice give s1 = s2 = 0 identically.
    """
    grid = [float(r) for r in r_grid]
    if not grid:
        raise ValueError("r_grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("r_grid must be strictly ascending")
    _quadrature_deformation(quadratures, None, None)
    args = [(l, drive, r, phi, n_max, tail_tol, quadratures) for r in grid]
    if workers <= 1:
        return [_sweep_point(*a) for a in args]
    # processes, not threads: mpmath precision is global state
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_point, *zip(*args)))

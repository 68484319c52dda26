"""Drive-induced structure functions and the nonlinear coherent state they select.

The carrier (i = 0) and red-sideband (i = 1) structure functions are

    F_i(n, k) = exp(-(k^2/2) [(n+1+i) f1^2(n+1+i) - (n+i) f1^2(n+i)])
                * sum_{l=0..n} (-k^2)^l / (l! (l+i)!) * n!/(n-l)!
                  * f1(n)! f1(n+i)! / [f1(n-l)!]^2

with f-factorials ``f(m)! = f(1) f(2) ... f(m)`` and ``f(0)! = 1``.  The
alternating sum cancels catastrophically once k f1 is not small (up to
sixteen digits on the default sweep grid), so it is evaluated with
mpmath at a working precision chosen from the size of its largest term.
"""

from dataclasses import dataclass, field
import math

import mpmath
import numpy as np

from .algebra import ladder_matrices
from .errors import NoConvergenceError, SingularDeformationError

__all__ = [
    "DriveParams",
    "FockState",
    "DriveDeformation",
    "deformed_laguerre",
    "structure_function_F",
    "deformation_function",
    "build_state",
    "coherent_state",
    "eigen_residual",
    "SINGULAR_THRESHOLD",
]

SINGULAR_THRESHOLD = 1e-12
_GUARD_DIGITS = 30


@dataclass(frozen=True)
class DriveParams:
    """Two-laser drive: ``kappa`` and the Rabi-frequency ratio Omega0/Omega1."""

    kappa: float = 0.3
    omega_ratio: float = 0.5
    phi: float = 0.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa!r}")
        if not self.omega_ratio > 0:
            raise ValueError(f"omega_ratio must be positive, got {self.omega_ratio!r}")

    @property
    def chi(self):
        return 1j * self.omega_ratio / self.kappa


@dataclass(frozen=True)
class FockState:
    """Normalized coefficients c_0..c_N on a truncated number basis."""

    coeffs: np.ndarray = field(repr=False)
    tail_bound: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def trunc(self):
        return len(self.coeffs) - 1

    @property
    def probabilities(self):
        return np.abs(self.coeffs) ** 2

    @property
    def norm(self):
        return float(np.linalg.norm(self.coeffs))


def _mpf_squares(f, upto):
    return [mpmath.mpf(f.f_squared(m)) for m in range(upto + 1)]


def _laguerre_like(f2, i, n, k2):
    """Sum of F_i normalized to a unit l = 0 term, at adaptive precision.

    Consecutive terms differ by r_l = -k^2 (n-l) f1^2(n-l) / ((l+1)(l+1+i)).
    """
    ratios = [(n - l) * float(f2[n - l]) / ((l + 1) * (l + 1 + i)) for l in range(n)]
    log_k2 = math.log10(float(k2))
    peak = 0.0
    acc = 0.0
    for r in ratios:
        acc += log_k2 + math.log10(r)
        peak = max(peak, acc)
    with mpmath.workdps(_GUARD_DIGITS + int(math.ceil(peak))):
        total = mpmath.mpf(1)
        for l in range(n - 1, -1, -1):
            total = 1 - k2 * (n - l) * f2[n - l] / ((l + 1) * (l + 1 + i)) * total
        return +total


def _structure_parts(f2, i, n, k2):
    """Return (envelope, prefactor, laguerre_like) with F_i = product of all three."""
    top = (n + 1 + i) * f2[n + 1 + i]
    bottom = (n + i) * f2[n + i] if n + i > 0 else 0
    envelope = mpmath.exp(-k2 / 2 * (top - bottom))
    prefactor = mpmath.sqrt(f2[n + 1]) if i == 1 else mpmath.mpf(1)
    return envelope, prefactor, _laguerre_like(f2, i, n, k2)


def structure_function_F(wd, i, n, kappa):
    """F_i(n, kappa) for i in {0, 1}, as a float (may underflow to 0)."""
    if i not in (0, 1):
        raise ValueError(f"structure index must be 0 or 1, got {i!r}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n!r}")
    f2 = _mpf_squares(wd, n + 1 + i)
    envelope, prefactor, lag = _structure_parts(f2, i, n, mpmath.mpf(kappa) ** 2)
    return float(envelope * prefactor * lag)


def deformed_laguerre(wd, i, n, x):
    """L^i_{f,n}(x) = sum_l (n+i)! (-x)^l / ([f1(n-l)!]^2 (n-l)! l! (l+i)!)."""
    with mpmath.workdps(60 + 2 * n):
        x = mpmath.mpf(x)
        ffact = [mpmath.mpf(1)]
        for m in range(1, n + 1):
            ffact.append(ffact[-1] * mpmath.sqrt(mpmath.mpf(wd.f_squared(m))))
        fac = mpmath.factorial
        total = mpmath.fsum(
            fac(n + i) / (fac(n - l) * fac(l) * fac(l + i)) * (-x) ** l / ffact[n - l] ** 2
            for l in range(n + 1)
        )
        return float(total)


class DriveDeformation:
    """f(n) = F1(n-1, kappa) / F0(n-1, kappa), memoized per instance.

    The ratio is formed in extended precision, so the exponential
    envelopes cancel before anything is rounded to a float.
    """

    def __init__(self, wd, kappa, threshold=SINGULAR_THRESHOLD):
        self.wd = wd
        self.kappa = float(kappa)
        self.threshold = threshold
        self._k2 = mpmath.mpf(self.kappa) ** 2
        self._f2 = []
        self._parts = {}
        self._values = {}

    def __repr__(self):
        return f"DriveDeformation({self.wd!r}, kappa={self.kappa!r})"

    def _squares(self, upto):
        while len(self._f2) <= upto:
            self._f2.append(mpmath.mpf(self.wd.f_squared(len(self._f2))))
        return self._f2

    def parts(self, i, n):
        key = (i, n)
        if key not in self._parts:
            f2 = self._squares(n + 1 + i)
            self._parts[key] = _structure_parts(f2, i, n, self._k2)
        return self._parts[key]

    def F(self, i, n):
        envelope, prefactor, lag = self.parts(i, n)
        return envelope * prefactor * lag

    def __call__(self, n):
        if n < 1:
            raise ValueError(f"drive deformation is defined for n >= 1, got {n!r}")
        if n not in self._values:
            lag0 = self.parts(0, n - 1)[2]
            if abs(lag0) < self.threshold:
                raise SingularDeformationError(n, float(lag0))
            self._values[n] = float(self.F(1, n - 1) / self.F(0, n - 1))
        return self._values[n]

    def f_squared(self, n):
        return self(n) ** 2


def deformation_function(wd, drive, n):
    """f(n) = F1(n-1)/F0(n-1); raises SingularDeformationError at zeros of F0."""
    return DriveDeformation(wd, drive.kappa)(n)


def build_state(wd, drive, n_max=200, tail_tol=1e-12, deformation=None):
    """Build the normalized NLCS c_n ~ chi^n / (sqrt(n!) f(n)!).

    Coefficients come from the recursion c_{n+1} = c_n chi / (sqrt(n+1) f(n+1)),
    carried as log-magnitude and phase.  The basis is cut at the smallest N
    after which every computed amplitude |c_n| stays below ``tail_tol``;
    the eigenvalue residual is |chi c_N|, so ``tail_tol`` bounds it directly.

    ``deformation`` overrides the drive-induced f, e.g. ``Undeformed()``
    yields a Glauber coherent state.
    """
    if not 0 < tail_tol <= 1e-6:
        raise ValueError(f"tail_tol must lie in (0, 1e-6], got {tail_tol!r}")
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max!r}")
    f = deformation if deformation is not None else DriveDeformation(wd, drive.kappa)
    chi = drive.chi
    log_chi = math.log(abs(chi))
    unit_chi = chi / abs(chi)

    log_amp = [0.0]
    phase = [1.0 + 0j]
    log_tail = math.log(tail_tol)
    settle = log_tail - math.log(1e6)
    falling = 0
    for n in range(n_max):
        fn = f(n + 1)
        if fn == 0.0:
            raise NoConvergenceError(f"deformation f({n + 1}) vanishes; expansion diverges")
        log_amp.append(log_amp[-1] + log_chi - 0.5 * math.log(n + 1) - math.log(abs(fn)))
        phase.append(phase[-1] * unit_chi * (1 if fn > 0 else -1))
        falling = falling + 1 if log_amp[-1] < log_amp[-2] else 0
        # early exit once far below tolerance and steadily decaying
        log_norm = 0.5 * _logsumexp2(log_amp)
        if falling >= 8 and log_amp[-1] - log_norm < settle:
            break

    amps = np.asarray(log_amp)
    amps = amps - 0.5 * _logsumexp2(log_amp)
    above = np.nonzero(amps >= log_tail)[0]
    last = above[-1] if len(above) else -1
    if last == len(amps) - 1 or amps[-1] >= amps[-2]:
        raise NoConvergenceError(
            f"Fock expansion not converged by n_max={n_max}: "
            f"|c_{len(amps) - 1}| = {math.exp(amps[-1]):.3e}, tail_tol={tail_tol:.1e}"
        )
    N = max(int(last) + 1, 1)
    coeffs = np.exp(amps[: N + 1]) * np.asarray(phase[: N + 1])
    coeffs /= np.linalg.norm(coeffs)
    return FockState(coeffs=coeffs, tail_bound=float(abs(coeffs[N]) ** 2))


def _logsumexp2(log_amp):
    a = 2.0 * np.asarray(log_amp)
    m = a.max()
    return float(m + math.log(np.exp(a - m).sum()))


def coherent_state(alpha, n_max=200, tail_tol=1e-12):
    """Glauber coherent state |alpha>, truncated like :func:`build_state`."""
    from .algebra import Undeformed

    if alpha == 0:
        return FockState(coeffs=np.array([1.0]), tail_bound=0.0)
    drive = DriveParams(kappa=1.0, omega_ratio=abs(alpha))
    state = build_state(None, drive, n_max, tail_tol, deformation=Undeformed())
    # rotate from chi = i|alpha| onto alpha
    turn = (alpha / abs(alpha)) / 1j
    n = np.arange(len(state.coeffs))
    return FockState(coeffs=state.coeffs * turn**n, tail_bound=state.tail_bound)


def eigen_residual(state, f, chi):
    """|| f(n+1) sqrt(n+1) c_{n+1} - chi c_n ||, i.e. (F1/F0) a |psi> - chi |psi>."""
    lower, _ = ladder_matrices(f, state.trunc)
    v = state.coeffs
    return float(np.linalg.norm(lower @ v - chi * v))

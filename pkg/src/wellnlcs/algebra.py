"""f-deformed oscillator algebra of a particle in an infinite spherical well.

Units: hbar = 1 and M a_B**2 = 1, so hbar**2/(M R**2) reduces to the
dimensionless ``epsilon = (a_B/R)**2``.  The well spectrum is then
``E_n = (epsilon/2) * alpha_{n,l}**2``.

The deformation function satisfies ``f1(n)**2 = epsilon * S(n)`` with

    S(n) = ((-1)**n / n) * sum_{i=1..n} (-1)**i * alpha_{i-1,l}**2,

which is built cumulatively from ``n S(n) = alpha_{n-1,l}**2 - (n-1) S(n-1)``.
By convention ``f1(0) = 1``; it never enters a ladder matrix element.
"""

import math

import numpy as np

from .errors import TableExhaustedError
from .specfun import bessel_zeros

__all__ = [
    "WellDeformation",
    "Undeformed",
    "deformation_f1",
    "energy",
    "ladder_matrices",
    "commutator_check",
    "transition_frequency",
]

DEFAULT_CAPACITY = 260


class WellDeformation:
    """Deformation f1(n) of the spherical well with fixed angular momentum ``l``.

    Instances are callable, ``wd(n) == f1(n)``, and expose ``f_squared`` so
    they can stand in wherever a deformation function is expected.
    """

    def __init__(self, l=0, r_over_ab=1.0, capacity=DEFAULT_CAPACITY, tol=1e-12):
        if r_over_ab <= 0:
            raise ValueError(f"r_over_ab must be positive, got {r_over_ab!r}")
        self.l = int(l)
        self.r_over_ab = float(r_over_ab)
        self.epsilon = 1.0 / self.r_over_ab**2
        self.zeros = bessel_zeros(self.l, capacity, tol)
        # _nS[n] = n * S(n); index 0 holds 0 * S(0) = 0
        ns = [0.0]
        for alpha in self.zeros.zeros:
            ns.append(alpha * alpha - ns[-1])
        self._nS = tuple(ns)

    @classmethod
    def from_epsilon(cls, l, epsilon, **kw):
        return cls(l, 1.0 / math.sqrt(epsilon), **kw)

    def __repr__(self):
        return f"WellDeformation(l={self.l}, r_over_ab={self.r_over_ab!r})"

    @property
    def n_max(self):
        """Largest n for which f1(n) is available."""
        return len(self.zeros)

    def alpha(self, n):
        if not 0 <= n < len(self.zeros):
            raise TableExhaustedError(
                f"zero alpha_{{{n},{self.l}}} requested; table holds {len(self.zeros)}"
            )
        return self.zeros[n]

    def s_value(self, n):
        if n < 1:
            raise ValueError("S(n) is defined for n >= 1")
        if n > self.n_max:
            raise TableExhaustedError(
                f"S({n}) needs alpha_{{{n - 1},{self.l}}}; table holds {len(self.zeros)}"
            )
        return self._nS[n] / n

    def f_squared(self, n):
        if n == 0:
            return 1.0
        return self.epsilon * self.s_value(n)

    def __call__(self, n):
        return math.sqrt(self.f_squared(n))


class Undeformed:
    """The trivial deformation f(n) = 1 (harmonic confinement)."""

    epsilon = 1.0

    def f_squared(self, n):
        return 1.0

    def __call__(self, n):
        return 1.0

    def __repr__(self):
        return "Undeformed()"


def deformation_f1(wd, n):
    return wd(n)


def energy(wd, n):
    """E_n = [(n+1) f1^2(n+1) + n f1^2(n)] / 2, the factorized well spectrum."""
    upper = (n + 1) * wd.f_squared(n + 1)
    lower = n * wd.f_squared(n) if n > 0 else 0.0
    return 0.5 * (upper + lower)


def transition_frequency(wd, n):
    """omega_n = E_{n+1} - E_n, using squared deformation factors."""
    return 0.5 * wd.epsilon * (wd.alpha(n + 1) ** 2 - wd.alpha(n) ** 2)


def ladder_matrices(f, N):
    """Dense lowering/raising matrices on the basis |0>..|N>.

    ``f`` is any deformation callable; ``A[n-1, n] = sqrt(n) f(n)``.
    """
    if N < 1:
        raise ValueError(f"truncation must be >= 1, got {N!r}")
    lower = np.zeros((N + 1, N + 1), dtype=complex)
    for n in range(1, N + 1):
        lower[n - 1, n] = math.sqrt(n) * f(n)
    return lower, lower.conj().T


def commutator_check(wd, N):
    """Max deviation of diag [A, A^dag] from epsilon alpha_n^2 - 2 n f1^2(n).

    Only rows n <= N-2 are compared; the last rows of a truncated product
    are always wrong.
    """
    if N < 2:
        raise ValueError(f"truncation must be >= 2, got {N!r}")
    A, Ad = ladder_matrices(wd, N)
    diag = np.diag(A @ Ad - Ad @ A).real
    worst = 0.0
    for n in range(N - 1):
        expected = wd.epsilon * wd.alpha(n) ** 2 - 2 * n * wd.f_squared(n) * (n > 0)
        worst = max(worst, abs(diag[n] - expected))
    return worst

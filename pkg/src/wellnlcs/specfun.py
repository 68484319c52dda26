"""Spherical Bessel functions of the first kind and their positive zeros.

Zeros are indexed from 0: ``zeros[0]`` is the smallest positive root of
``j_l``.  This is the indexing under which the well spectrum
``E_n ~ alpha_{n,l}**2`` starts at the ground state ``n = 0``.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

from .errors import BracketingError

__all__ = ["BesselZeroTable", "spherical_bessel_j", "bessel_zeros"]

_SERIES_CUTOFF = 1.0
_RESCALE = 1e200


def _series(l, x):
    # j_l(x) = x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    lead = 1.0
    for k in range(1, l + 1):
        lead *= x / (2 * k + 1)
    term = 1.0
    total = 1.0
    y = -0.5 * x * x
    k = 0
    while abs(term) > 1e-17 * abs(total):
        k += 1
        term *= y / (k * (2 * l + 2 * k + 1))
        total += term
    return lead * total


def _closed_form(l, x):
    s, c = math.sin(x), math.cos(x)
    if l == 0:
        return s / x
    if l == 1:
        return s / (x * x) - c / x
    return (3.0 / x**3 - 1.0 / x) * s - 3.0 * c / (x * x)


def _upward(l, x):
    jm, j = math.sin(x) / x, math.sin(x) / (x * x) - math.cos(x) / x
    for k in range(1, l):
        jm, j = j, (2 * k + 1) / x * j - jm
    return j


def _miller(l, x):
    """Downward recurrence from far above ``l``, normalized on j_0 or j_1."""
    start = l + 20 + int(math.sqrt(40.0 * (l + 1))) + int(x)
    j_above, j = 0.0, 1e-30
    stored = 0.0
    for k in range(start, 0, -1):
        j_above, j = j, (2 * k + 1) / x * j - j_above
        if k - 1 == l:
            stored = j
        if abs(j) > _RESCALE:
            j /= _RESCALE
            j_above /= _RESCALE
            stored /= _RESCALE
    # j now holds the unnormalized j_0, j_above the unnormalized j_1
    true0 = math.sin(x) / x
    true1 = math.sin(x) / (x * x) - math.cos(x) / x
    if abs(true0) >= abs(true1):
        return stored * (true0 / j)
    return stored * (true1 / j_above)


def spherical_bessel_j(l, x):
    """Spherical Bessel function of the first kind, ``j_l(x)``, for x > 0.

    Uses the power series below x = 1, closed trigonometric forms for
    l <= 2, upward recurrence where it is stable (x > l) and Miller's
    downward recurrence otherwise.
    """
    if l < 0 or int(l) != l:
        raise ValueError(f"order must be a non-negative integer, got {l!r}")
    if not x > 0:
        raise ValueError(f"argument must be positive, got {x!r}")
    l = int(l)
    x = float(x)
    if x < _SERIES_CUTOFF:
        return _series(l, x)
    if l <= 2:
        return _closed_form(l, x)
    if x > l:
        return _upward(l, x)
    return _miller(l, x)


@dataclass(frozen=True)
class BesselZeroTable:
    """First ``len(zeros)`` positive zeros of ``j_l``, ascending."""

    l: int
    zeros: tuple
    tol: float

    def __len__(self):
        return len(self.zeros)

    def __getitem__(self, k):
        return self.zeros[k]


def _bisect(l, lo, hi, flo):
    while True:
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-14 or mid <= lo or mid >= hi:
            break
        fmid = spherical_bessel_j(l, mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    fhi = spherical_bessel_j(l, hi)
    return lo if abs(flo) <= abs(fhi) else hi


@lru_cache(maxsize=None)
def _scan_zeros(l, count):
    step = math.pi / 4
    a = float(max(l, 1))
    fa = spherical_bessel_j(l, a)
    found = []
    # j_l has no zeros below l and its zeros are more than pi apart,
    # so a quarter-period step cannot jump over a root.
    limit = a + (count + l + 4) * math.pi
    while len(found) < count:
        b = a + step
        if b > limit:
            raise BracketingError(
                f"only {len(found)} of {count} zeros of j_{l} found below x={limit:.3f}"
            )
        fb = spherical_bessel_j(l, b)
        if fb == 0.0:
            found.append(b)
        elif fa != 0.0 and (fa > 0) != (fb > 0):
            found.append(_bisect(l, a, b, fa))
        a, fa = b, fb
    return tuple(found)


def bessel_zeros(l, count, tol=1e-12):
    """Return the first ``count`` positive zeros of ``j_l`` as a table.

    Every zero is checked against ``|j_l(alpha)| <= tol``; a failed check
    raises :class:`BracketingError`.
    """
    if l < 0 or int(l) != l:
        raise ValueError(f"order must be a non-negative integer, got {l!r}")
    if count < 1:
        raise ValueError(f"count must be positive, got {count!r}")
    if not 0 < tol <= 1e-6:
        raise ValueError(f"tol must lie in (0, 1e-6], got {tol!r}")
    zeros = _scan_zeros(int(l), int(count))
    for k, alpha in enumerate(zeros):
        resid = abs(spherical_bessel_j(l, alpha))
        if resid > tol:
            raise BracketingError(
                f"zero {k} of j_{l} at {alpha!r} has residual {resid:.3e} > {tol:.1e}"
            )
    return BesselZeroTable(l=int(l), zeros=zeros, tol=tol)

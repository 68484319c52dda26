"""Invariant suites behind the ``selfcheck`` command.

Each check returns a :class:`Check` holding the measured worst-case value
and the tolerance it must not exceed.  Grids and seeds are fixed.
"""

from dataclasses import dataclass
import math

import numpy as np

from .algebra import Undeformed, WellDeformation, commutator_check, energy
from .dynamics import CompositeState, build_interaction_hamiltonian, dark_state_residual
from .nlcs import (
    DriveDeformation,
    DriveParams,
    build_state,
    coherent_state,
    deformed_laguerre,
    eigen_residual,
    structure_function_F,
)
from .observables import mandel_q, quadrature_report
from .specfun import bessel_zeros, spherical_bessel_j


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self):
        return self.value <= self.tol


def classical_laguerre(n, alpha, x):
    """L_n^alpha(x) by the three-term recurrence."""
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def check_bessel_zeros():
    worst = 0.0
    for l in range(11):
        for alpha in bessel_zeros(l, 41).zeros:
            worst = max(worst, abs(spherical_bessel_j(l, alpha)))
    return Check("bessel zero residual |j_l(alpha)|, l<=10, k<=40", worst, 1e-12)


def check_l0_zeros():
    z = bessel_zeros(0, 41).zeros
    worst = max(abs(a - (k + 1) * math.pi) for k, a in enumerate(z))
    return Check("alpha_k0 = (k+1) pi, k<=40", worst, 1e-12)


def check_recurrence():
    rng = np.random.default_rng(1234)
    worst = 0.0
    for x in rng.uniform(1.0, 100.0, 100):
        for l in range(1, 11):
            lhs = spherical_bessel_j(l + 1, x)
            rhs = (2 * l + 1) / x * spherical_bessel_j(l, x) - spherical_bessel_j(l - 1, x)
            worst = max(worst, abs(lhs - rhs))
    return Check("three-term recurrence of j_l", worst, 1e-10)


def check_spectrum_closure():
    worst = 0.0
    for l in (0, 1, 2):
        wd = WellDeformation(l, 1.0)
        for n in range(31):
            worst = max(worst, abs(energy(wd, n) - 0.5 * wd.epsilon * wd.alpha(n) ** 2))
    return Check("telescoping spectrum closure, l<=2, n<=30", worst, 1e-10)


def check_commutator():
    worst = max(commutator_check(WellDeformation(l, r), 30) for l in (0, 1, 2) for r in (0.5, 1.0, 3.0))
    return Check("diag [A, A^dag] = eps alpha_n^2 - 2 n f1^2(n)", worst, 1e-9)


def check_harmonic_limit():
    worst = 0.0
    flat = Undeformed()
    for kappa in (0.1, 0.3, 0.5):
        k2 = kappa * kappa
        env = math.exp(-k2 / 2)
        for n in range(21):
            worst = max(
                worst,
                abs(structure_function_F(flat, 0, n, kappa) - env * classical_laguerre(n, 0, k2)),
                abs(structure_function_F(flat, 1, n, kappa) - env * classical_laguerre(n, 1, k2) / (n + 1)),
            )
    return Check("harmonic-limit F_i vs classical Laguerre", worst, 1e-12)


def check_laguerre_bridge():
    """Direct sum vs. envelope * n!/(n+i)! * f1(n)! f1(n+i)! * L^i_{f,n}."""
    worst = 0.0
    wd = WellDeformation(0, 2.0)
    kappa = 0.3
    for i in (0, 1):
        for n in range(11):
            ffact = math.prod(wd(m) for m in range(1, n + 1))
            top = ffact * (wd(n + 1) if i else 1.0)
            bottom = (n + 1 + i) * wd.f_squared(n + 1 + i) - (n + i) * (wd.f_squared(n + i) if n + i else 0.0)
            bridge = (
                math.exp(-kappa**2 / 2 * bottom)
                * math.factorial(n) / math.factorial(n + i)
                * ffact * top
                * deformed_laguerre(wd, i, n, kappa**2)
            )
            direct = structure_function_F(wd, i, n, kappa)
            worst = max(worst, abs(direct - bridge) / abs(direct))
    return Check("direct F_i sum vs deformed-Laguerre form (rel)", worst, 1e-10)


_GRID = [(0.5, 1.0), (0.5, 2.0), (0.5, 5.0), (0.2, 1.0), (0.2, 2.0), (0.2, 5.0)]


def _built_states():
    for ratio, r in _GRID:
        wd = WellDeformation(0, r)
        drive = DriveParams(0.3, ratio)
        f = DriveDeformation(wd, drive.kappa)
        yield wd, drive, f, build_state(wd, drive, deformation=f)


def check_eigen_and_dark():
    eig = dark = 0.0
    for wd, drive, f, state in _built_states():
        eig = max(eig, eigen_residual(state, f, drive.chi))
        H = build_interaction_hamiltonian(wd, drive, state.trunc, structure=f)
        dark = max(dark, dark_state_residual(H, CompositeState.excited(state)))
    return [
        Check("NLCS eigenvalue residual", eig, 1e-8),
        Check("dark-state residual ||H|e,psi>||/Omega1", dark, 1e-8),
    ]


def check_uncertainty():
    worst = 0.0
    for wd, drive, f, state in _built_states():
        for quad in (wd, f, Undeformed()):
            for phi in (0.0, 0.7, math.pi / 2):
                rep = quadrature_report(state, quad, phi)
                worst = max(worst, rep.heisenberg_floor - rep.uncertainty_product)
    return Check("Heisenberg floor deficit g^2/16 - Var1 Var2", worst, 1e-10)


def check_glauber():
    worst = 0.0
    for alpha in (0.5, 1.0, 1.0 + 1.5j, 3.0):
        state = coherent_state(alpha)
        rep = quadrature_report(state, Undeformed(), 0.3)
        worst = max(worst, abs(rep.s1), abs(rep.s2), abs(mandel_q(state)))
    return Check("Glauber benchmarks s1 = s2 = Q = 0", worst, 1e-10)


def run_all():
    out = [
        check_bessel_zeros(),
        check_l0_zeros(),
        check_recurrence(),
        check_spectrum_closure(),
        check_commutator(),
        check_harmonic_limit(),
        check_laguerre_bridge(),
    ]
    out.extend(check_eigen_and_dark())
    out.append(check_uncertainty())
    out.append(check_glauber())
    return out

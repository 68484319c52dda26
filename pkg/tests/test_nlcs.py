import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm
from scipy.special import eval_genlaguerre

from wellnlcs import nlcs
from wellnlcs.algebra import Undeformed, WellDeformation
from wellnlcs.errors import NoConvergenceError, SingularDeformationError
from wellnlcs.nlcs import (
    DriveDeformation,
    DriveParams,
    FockState,
    build_state,
    coherent_state,
    deformation_function,
    deformed_laguerre,
    eigen_residual,
    structure_function_F,
)


def displacement_elements(f, kappa, M=90):
    """<n| exp(i kappa (A + A^dag)) |n+i> with A = a f(n), by matrix exponential."""
    A = np.zeros((M, M))
    for k in range(1, M):
        A[k - 1, k] = math.sqrt(k) * f(k)
    return expm(1j * kappa * (A + A.T))


def expm_oracle(U, i, n, kappa):
    if i == 0:
        return U[n, n].real
    return (U[n, n + 1] / (1j * kappa * math.sqrt(n + 1))).real


# structure functions -------------------------------------------------------


@pytest.mark.parametrize("kappa", [0.1, 0.3, 0.7])
def test_harmonic_limit_matches_scipy_laguerre(kappa):
    flat = Undeformed()
    env = math.exp(-kappa**2 / 2)
    for n in range(21):
        assert structure_function_F(flat, 0, n, kappa) == pytest.approx(
            env * eval_genlaguerre(n, 0, kappa**2), abs=1e-12
        )
        assert structure_function_F(flat, 1, n, kappa) == pytest.approx(
            env * eval_genlaguerre(n, 1, kappa**2) / (n + 1), abs=1e-12
        )


def test_l1_of_one_is_one():
    # L_1^1(x) = 2 - x, so L_1^1(1) = 1
    assert eval_genlaguerre(1, 1, 1.0) == pytest.approx(1.0)
    F = structure_function_F(Undeformed(), 1, 1, 1.0)
    assert F == pytest.approx(math.exp(-0.5) * 1.0 / 2, rel=1e-14)


@pytest.mark.parametrize("kappa", [0.3, 1.0])
def test_undeformed_matches_matrix_exponential(kappa):
    U = displacement_elements(lambda n: 1.0, kappa)
    for n in range(12):
        for i in (0, 1):
            assert structure_function_F(Undeformed(), i, n, kappa) == pytest.approx(
                expm_oracle(U, i, n, kappa), abs=1e-12
            )


def test_deformed_agrees_with_exponential_to_leading_order():
    # the normal-ordered product agrees with exp(i k (A + A^dag)) up to O(k^2)
    wd = WellDeformation.from_epsilon(0, 0.04)
    errs = []
    for kappa in (0.3, 0.15, 0.075):
        U = displacement_elements(wd, kappa, M=60)
        worst = 0.0
        for n in range(6):
            for i in (0, 1):
                ref = expm_oracle(U, i, n, kappa)
                worst = max(worst, abs(structure_function_F(wd, i, n, kappa) - ref) / abs(ref))
        errs.append(worst)
    assert errs[0] < 0.05
    for a, b in zip(errs, errs[1:]):
        assert b / a == pytest.approx(0.25, abs=0.05)


@pytest.mark.parametrize("n", [0, 5, 20, 40])
def test_adaptive_precision_matches_high_fixed_precision(n):
    wd = WellDeformation(0, 0.5)
    k2 = mpmath.mpf(0.3) ** 2
    for i in (0, 1):
        got = float(nlcs._laguerre_like(nlcs._mpf_squares(wd, n + 2), i, n, k2))
        with mpmath.workdps(150):
            f2 = nlcs._mpf_squares(wd, n + 2)
            k2h = mpmath.mpf(0.3) ** 2
            total = mpmath.mpf(1)
            for l in range(n - 1, -1, -1):
                total = 1 - k2h * (n - l) * f2[n - l] / ((l + 1) * (l + 1 + i)) * total
            ref = float(total)
        assert got == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_deformed_laguerre_bridge():
    wd = WellDeformation(1, 1.5)
    kappa = 0.2
    for i in (0, 1):
        for n in range(9):
            ffact = math.prod(wd(m) for m in range(1, n + 1))
            top = ffact * (wd(n + 1) if i else 1.0)
            bottom = (n + 1 + i) * wd.f_squared(n + 1 + i) - (n + i) * (wd.f_squared(n + i) if n + i else 0.0)
            bridge = (
                math.exp(-kappa**2 / 2 * bottom)
                * math.factorial(n) / math.factorial(n + i)
                * ffact * top
                * deformed_laguerre(wd, i, n, kappa**2)
            )
            assert structure_function_F(wd, i, n, kappa) == pytest.approx(bridge, rel=1e-10)


def test_deformed_laguerre_reduces_to_classical():
    for i in (0, 1):
        for n in range(10):
            assert deformed_laguerre(Undeformed(), i, n, 0.8) == pytest.approx(
                eval_genlaguerre(n, i, 0.8), rel=1e-12, abs=1e-14
            )


def test_structure_function_validation():
    with pytest.raises(ValueError):
        structure_function_F(Undeformed(), 2, 0, 0.3)
    with pytest.raises(ValueError):
        structure_function_F(Undeformed(), 0, -1, 0.3)


# drive deformation ---------------------------------------------------------


def test_harmonic_ratio_of_laguerres():
    f = DriveDeformation(Undeformed(), 0.4)
    x = 0.16
    for n in range(1, 15):
        expect = eval_genlaguerre(n - 1, 1, x) / (n * eval_genlaguerre(n - 1, 0, x))
        assert f(n) == pytest.approx(expect, rel=1e-12)


def test_singular_deformation_names_n():
    # L_1(1) = 0, so F0(1, kappa=1) vanishes and f(2) is undefined
    f = DriveDeformation(Undeformed(), 1.0)
    assert f(1) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(SingularDeformationError) as info:
        f(2)
    assert info.value.n == 2
    assert "n=2" in str(info.value)


def test_deformation_function_wrapper():
    wd = WellDeformation(0, 2.0)
    drive = DriveParams(0.3, 0.2)
    assert deformation_function(wd, drive, 3) == DriveDeformation(wd, 0.3)(3)
    with pytest.raises(ValueError):
        DriveDeformation(wd, 0.3)(0)


def test_drive_params_validation():
    assert DriveParams().chi == pytest.approx(1j * 0.5 / 0.3)
    for bad in ({"kappa": 0.0}, {"omega_ratio": -1.0}):
        with pytest.raises(ValueError):
            DriveParams(**bad)


# states --------------------------------------------------------------------


@pytest.fixture(scope="module")
def default_state():
    wd = WellDeformation(0, 1.0)
    drive = DriveParams()
    f = DriveDeformation(wd, drive.kappa)
    return wd, drive, f, build_state(wd, drive, deformation=f)


def test_state_normalized_and_truncated(default_state):
    _, _, _, state = default_state
    assert state.norm == pytest.approx(1.0, abs=1e-14)
    assert abs(state.coeffs[-1]) < 1e-12
    assert np.all(np.abs(state.coeffs[:-1]) >= 0) and state.trunc >= 1
    with pytest.raises(ValueError):
        state.coeffs[0] = 0


def test_state_is_eigenstate(default_state):
    _, drive, f, state = default_state
    assert eigen_residual(state, f, drive.chi) <= 1e-8


def test_truncation_is_smallest_cut(default_state):
    wd, drive, f, state = default_state
    c = state.coeffs
    assert abs(c[state.trunc - 1]) >= 1e-12 * 0.999


def test_coefficients_follow_recursion(default_state):
    _, drive, f, state = default_state
    c = state.coeffs
    for n in range(state.trunc):
        assert c[n + 1] == pytest.approx(c[n] * drive.chi / (math.sqrt(n + 1) * f(n + 1)), rel=1e-12)


def test_non_normalizable_point_raises():
    wd = WellDeformation(0, 0.5)
    with pytest.raises(NoConvergenceError):
        build_state(wd, DriveParams(0.3, 0.5), n_max=200)


def test_build_state_validation():
    wd = WellDeformation(0, 1.0)
    with pytest.raises(ValueError):
        build_state(wd, DriveParams(), tail_tol=1e-3)
    with pytest.raises(ValueError):
        build_state(wd, DriveParams(), n_max=0)


@pytest.mark.parametrize("alpha", [0.5, 2.0, 1 - 1j, -3.0])
def test_coherent_state_poisson(alpha):
    state = coherent_state(alpha)
    n = np.arange(state.trunc + 1)
    ref = np.array([math.exp(-abs(alpha) ** 2 / 2) * alpha**k / math.sqrt(math.factorial(k)) for k in n])
    np.testing.assert_allclose(state.coeffs, ref, atol=1e-12)


def test_coherent_vacuum():
    state = coherent_state(0)
    assert state.probabilities[0] == 1.0


def test_fock_state_properties():
    s = FockState(coeffs=[0.6, 0.8j])
    assert s.trunc == 1
    np.testing.assert_allclose(s.probabilities, [0.36, 0.64])


@settings(max_examples=15, deadline=None)
@given(st.floats(0.8, 6.0), st.sampled_from([0.1, 0.2, 0.3]), st.integers(0, 2))
def test_eigen_property_holds_wherever_state_exists(r, ratio, l):
    wd = WellDeformation(l, r)
    drive = DriveParams(0.3, ratio)
    f = DriveDeformation(wd, drive.kappa)
    state = build_state(wd, drive, deformation=f)
    assert eigen_residual(state, f, drive.chi) <= 1e-8
    assert state.norm == pytest.approx(1.0, abs=1e-12)

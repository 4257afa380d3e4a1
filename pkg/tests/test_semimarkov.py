"""Waiting-time distributions, coherence factors, rates, maps, evolution."""

import cmath

import numpy as np
import pytest
from scipy.linalg import expm

from qsemimarkov import (
    DeltaKernel,
    DephasingSemiMarkov,
    DomainError,
    ExpConvolutionWTD,
    ExponentialKernel,
    ExponentialWTD,
    GridError,
    InvalidState,
    NonUnitalSemiMarkov,
    REGIME_DIVISIBLE,
    REGIME_INDIVISIBLE,
    REGIME_SEMIGROUP,
    Singularity,
    SingularityOnGrid,
    TanhSechWTD,
    UnsupportedVariant,
    adaptive_quad,
    apply_superop,
    coherence_zeros,
    eta,
    evolve_timelocal,
    gamma_dephasing,
    gamma_nonunital,
    jump_superop,
    kernel_closed_form,
    map_at,
    q_derivative,
    q_of_t,
    solve_volterra,
    superop_at,
    superop_of_kraus,
)

Z = np.diag([1.0, -1.0])


# ----------------------------------------------------- waiting-time classes

@pytest.mark.parametrize("wtd", [
    ExponentialWTD(rate=1.3),
    ExpConvolutionWTD(rate1=1.0, rate2=2.5),
    ExpConvolutionWTD(rate1=0.8, rate2=0.8),
    TanhSechWTD(rate=0.9),
])
def test_wtd_density_survival_consistency(wtd):
    # survival complements the integrated density: int_0^T f = 1 - g(T)
    for T in (0.5, 2.0, 6.0):
        integral = adaptive_quad(lambda t: float(wtd.density(t)), 0.0, T).value
        assert integral == pytest.approx(1.0 - float(wtd.survival(T)), abs=1e-9)
    # density is -dg/dt
    ts = np.array([0.3, 1.1, 2.7])
    h = 1e-6
    fd = -(np.asarray(wtd.survival(ts + h)) - np.asarray(wtd.survival(ts - h))) / (2 * h)
    assert np.abs(fd - np.asarray(wtd.density(ts))).max() < 1e-8


def test_wtd_is_normalized():
    for wtd in (ExponentialWTD(1.0), ExpConvolutionWTD(1.0, 2.0), TanhSechWTD(1.0)):
        assert float(wtd.survival(60.0)) < 1e-20  # proper distribution


@pytest.mark.parametrize("wtd", [ExponentialWTD(rate=2.0), TanhSechWTD(rate=0.7)])
def test_inverse_cdf_round_trip(wtd):
    u = np.linspace(0.0, 0.999, 64)
    t = wtd.inverse_cdf(u)
    assert np.abs((1.0 - np.asarray(wtd.survival(t))) - u).max() < 1e-12
    with pytest.raises(DomainError):
        wtd.inverse_cdf(1.0)


def test_expconv_has_no_single_argument_inverse_cdf():
    with pytest.raises(UnsupportedVariant):
        ExpConvolutionWTD(1.0, 2.0).inverse_cdf(0.5)


def test_expconv_stable_near_equal_rates():
    # the expm1 form must not lose accuracy when the rates nearly coincide
    near = ExpConvolutionWTD(rate1=1.0, rate2=1.0 + 1e-9)
    equal = ExpConvolutionWTD(rate1=1.0, rate2=1.0)
    ts = np.array([0.1, 1.0, 5.0])
    assert np.abs(near.density(ts) - equal.density(ts)).max() < 1e-8
    assert np.abs(near.survival(ts) - equal.survival(ts)).max() < 1e-8


def test_expconv_rate_aggregates():
    wtd = ExpConvolutionWTD(rate1=1.0, rate2=2.0)
    assert wtd.total_rate == 3.0
    assert wtd.rate_product == 2.0


def test_wtd_validation():
    with pytest.raises(DomainError):
        ExponentialWTD(rate=0.0)
    with pytest.raises(DomainError):
        ExpConvolutionWTD(rate1=1.0, rate2=-2.0)
    with pytest.raises(DomainError):
        TanhSechWTD(rate=np.inf)


# -------------------------------------------------------------- kernels

def test_kernel_closed_form():
    assert kernel_closed_form(ExponentialWTD(rate=1.7)) == DeltaKernel(rate=1.7)
    k = kernel_closed_form(ExpConvolutionWTD(rate1=1.0, rate2=2.0))
    assert k == ExponentialKernel(amplitude=2.0, decay=3.0)
    assert float(k(0.0)) == 2.0
    assert float(k(1.0)) == pytest.approx(2.0 * np.exp(-3.0))
    with pytest.raises(UnsupportedVariant):
        kernel_closed_form(TanhSechWTD(rate=1.0))


def test_delta_kernel_limit_is_a_semigroup():
    # exponential waits: the memory kernel is delta-correlated and the map
    # is exp(t lambda (J - 1)); off-diagonals decay as exp(-2 lambda t)
    lam = kernel_closed_form(ExponentialWTD(rate=0.8)).rate
    G = lam * (superop_of_kraus([Z]).real - np.eye(4))
    for t in (0.3, 1.0, 2.5):
        S = expm(t * G)
        expected = np.diag([1.0, np.exp(-2 * lam * t), np.exp(-2 * lam * t), 1.0])
        assert np.abs(S - expected).max() < 1e-12


# ---------------------------------------------------------------- q(t), eta

def test_eta_branches():
    assert eta(1.0, 0.0) == 1.0
    assert eta(1.0, 0.1) == pytest.approx(np.sqrt(0.2))
    assert eta(1.0, 3.0) == pytest.approx(1j * np.sqrt(23.0))
    assert eta(2.0, 0.5) == 0.0
    with pytest.raises(DomainError):
        eta(0.0, 1.0)


def q_reference(s, p, t):
    """Direct complex-arithmetic evaluation of the defining formula."""
    e = cmath.sqrt(1.0 - 8.0 * p / s**2)
    if e == 0:
        return float(np.exp(-s * t / 2) * (1.0 + s * t / 2))
    z = e * s * t / 2.0
    return (cmath.exp(-s * t / 2) * (cmath.cosh(z) + cmath.sinh(z) / e)).real


@pytest.mark.parametrize("s,p", [(1.0, 0.05), (1.0, 0.125), (1.0, 3.0),
                                 (2.0, 0.5), (3.0, 0.3), (0.7, 5.0)])
def test_q_matches_defining_formula(s, p):
    proc = DephasingSemiMarkov(s=s, p=p)
    for t in (0.0, 0.2, 1.0, 3.7, 10.0):
        assert float(q_of_t(proc, t)) == pytest.approx(
            q_reference(s, p, t), abs=1e-12
        )


def test_q_initial_value_and_large_time():
    for p in (0.0, 0.05, 0.125, 2.0):
        proc = DephasingSemiMarkov(s=1.0, p=p)
        assert float(q_of_t(proc, 0.0)) == 1.0
    # stable form must not overflow at large times in the real branch
    q = float(q_of_t(DephasingSemiMarkov(s=1.0, p=0.1), 500.0))
    assert 0.0 < q < 1e-40


def test_q_branch_continuity():
    # crossing the eta = 0 boundary changes branch but not the value
    eps = 1e-7
    lo = float(q_of_t(DephasingSemiMarkov(s=1.0, p=0.125 * (1 - eps)), 2.0))
    mid = float(q_of_t(DephasingSemiMarkov(s=1.0, p=0.125), 2.0))
    hi = float(q_of_t(DephasingSemiMarkov(s=1.0, p=0.125 * (1 + eps)), 2.0))
    assert abs(lo - mid) < 1e-6
    assert abs(hi - mid) < 1e-6


def test_same_wtd_convolution_identity():
    # rates lambda, lambda: q = exp(-lambda t)(cos lambda t + sin lambda t)
    lam = 0.8
    proc = DephasingSemiMarkov.from_rates(lam, lam)
    ts = np.linspace(0.0, 5.0, 21)
    expected = np.exp(-lam * ts) * (np.cos(lam * ts) + np.sin(lam * ts))
    assert np.abs(np.asarray(q_of_t(proc, ts)) - expected).max() < 1e-12


def test_q_derivative_matches_finite_difference():
    rng = np.random.default_rng(31)
    for _ in range(8):
        s = float(rng.uniform(0.5, 3.0))
        p = float(rng.uniform(0.0, 4.0))
        t = float(rng.uniform(0.1, 4.0))
        proc = DephasingSemiMarkov(s=s, p=p)
        h = 1e-6
        fd = (float(q_of_t(proc, t + h)) - float(q_of_t(proc, t - h))) / (2 * h)
        assert float(q_derivative(proc, t)) == pytest.approx(fd, abs=1e-8)


# ------------------------------------------------------------------- gamma

def gamma_reference(s, p, t):
    """2p / (s eta coth(s t eta / 2) + s), evaluated in complex arithmetic."""
    e = cmath.sqrt(1.0 - 8.0 * p / s**2)
    z = s * t * e / 2.0
    coth = cmath.cosh(z) / cmath.sinh(z)
    return (2.0 * p / (s * e * coth + s)).real


@pytest.mark.parametrize("s,p,t", [
    (1.0, 0.1, 0.7), (1.0, 3.0, 0.3), (2.0, 0.3, 1.2), (1.0, 0.12, 5.0),
])
def test_gamma_matches_coth_closed_form(s, p, t):
    proc = DephasingSemiMarkov(s=s, p=p)
    assert gamma_dephasing(proc, t) == pytest.approx(
        gamma_reference(s, p, t), rel=1e-10
    )


def test_gamma_limits():
    proc = DephasingSemiMarkov(s=1.0, p=0.1)
    assert gamma_dephasing(proc, 0.0) == 0.0
    assert gamma_dephasing(DephasingSemiMarkov(s=1.0, p=0.0), 3.0) == 0.0
    # long-time limit 2p / (s (1 + eta)) in the CP-divisible branch
    e = np.sqrt(1.0 - 0.8)
    assert gamma_dephasing(proc, 60.0) == pytest.approx(
        0.2 / (1.0 + e), rel=1e-10
    )
    with pytest.raises(DomainError):
        gamma_dephasing(proc, -1.0)


def test_gamma_raises_at_poles():
    proc = DephasingSemiMarkov(s=1.0, p=3.0)
    t_star = float(coherence_zeros(proc, 1.0)[0])
    with pytest.raises(Singularity):
        gamma_dephasing(proc, t_star)
    # finite (large) just outside the pole
    assert abs(gamma_dephasing(proc, t_star - 1e-6)) > 1e3


def test_gamma_nonunital():
    proc = NonUnitalSemiMarkov(rate=1.3)
    ts = np.linspace(0.0, 4.0, 9)
    assert np.abs(
        np.asarray(gamma_nonunital(proc, ts)) - 1.3 * np.tanh(1.3 * ts)
    ).max() < 1e-14
    # gamma = -d ln g / dt
    h = 1e-6
    fd = -(np.log(np.asarray(proc.survival(2.0 + h)))
           - np.log(np.asarray(proc.survival(2.0 - h)))) / (2 * h)
    assert float(gamma_nonunital(proc, 2.0)) == pytest.approx(float(fd), abs=1e-8)


# ------------------------------------------------------------- zeros, regime

def test_coherence_zeros():
    proc = DephasingSemiMarkov(s=1.0, p=3.0)
    zs = coherence_zeros(proc, 10.0)
    assert zs.size == 8
    for t_k in zs:
        assert abs(float(q_of_t(proc, t_k))) < 1e-12
        assert abs(float(q_derivative(proc, t_k))) > 1e-3  # simple zeros
    assert np.all(np.diff(zs) > 0)
    assert coherence_zeros(DephasingSemiMarkov(s=1.0, p=0.1), 100.0).size == 0
    assert coherence_zeros(DephasingSemiMarkov(s=2.0, p=0.5), 100.0).size == 0


def test_regime_classification():
    assert DephasingSemiMarkov(s=1.0, p=0.0).regime() == REGIME_SEMIGROUP
    assert DephasingSemiMarkov(s=1.0, p=0.125).regime() == REGIME_DIVISIBLE
    assert DephasingSemiMarkov(s=1.0, p=0.125 + 1e-13).regime() == REGIME_INDIVISIBLE
    assert DephasingSemiMarkov(s=1.0, p=3.0).regime() == REGIME_INDIVISIBLE


def test_from_rates():
    proc = DephasingSemiMarkov.from_rates(1.0, 2.0)
    assert proc.s == 3.0 and proc.p == 2.0
    with pytest.raises(DomainError):
        DephasingSemiMarkov.from_rates(1.0, 0.0)
    with pytest.raises(DomainError):
        DephasingSemiMarkov(s=1.0, p=-0.1)
    with pytest.raises(DomainError):
        NonUnitalSemiMarkov(rate=-1.0)


# ------------------------------------------------------------ maps, superops

def test_dephasing_map_and_superop():
    proc = DephasingSemiMarkov(s=1.0, p=0.3)
    t = 1.4
    q = float(q_of_t(proc, t))
    S = superop_at(proc, t)
    assert np.abs(S - np.diag([1.0, q, q, 1.0])).max() < 1e-12
    rho = np.array([[0.7, 0.1 + 0.2j], [0.1 - 0.2j, 0.3]])
    out = apply_superop(S, rho)
    assert out[0, 1] == pytest.approx(q * rho[0, 1])
    assert out[0, 0] == pytest.approx(rho[0, 0])


def test_jump_superops():
    deph = DephasingSemiMarkov(s=1.0, p=0.3)
    assert np.abs(jump_superop(deph) - np.kron(Z, Z)).max() == 0.0
    nonu = NonUnitalSemiMarkov(rate=1.0)
    J = jump_superop(nonu)
    rho = np.array([[0.3, 0.5], [0.2, 0.7]], dtype=complex)
    out = apply_superop(J, rho)
    expected = np.zeros((2, 2), dtype=complex)
    expected[0, 0] = rho.trace()
    assert np.abs(out - expected).max() < 1e-14


def test_map_at_rejects_negative_time():
    with pytest.raises(DomainError):
        map_at(DephasingSemiMarkov(s=1.0, p=0.3), -0.5)


# ------------------------------------------------------- time-local evolution

def test_evolve_timelocal_dephasing_matches_q():
    proc = DephasingSemiMarkov(s=1.0, p=0.1)
    rho0 = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    ts = np.linspace(0.0, 5.0, 11)
    states = evolve_timelocal(proc, rho0, ts)
    qs = np.asarray(q_of_t(proc, ts))
    for i in range(ts.size):
        assert states[i][0, 1] == pytest.approx(0.5 * qs[i], abs=1e-9)
        assert states[i][0, 0] == pytest.approx(0.5, abs=1e-12)


def test_evolve_timelocal_nonunital_matches_affine_form():
    proc = NonUnitalSemiMarkov(rate=1.0)
    rho0 = np.array([[0.2, 0.1j], [-0.1j, 0.8]], dtype=complex)
    ts = np.linspace(0.0, 3.0, 7)
    states = evolve_timelocal(proc, rho0, ts)
    for i, t in enumerate(ts):
        g = float(proc.survival(t))
        expected = g * rho0 + (1 - g) * np.diag([1.0, 0.0])
        assert np.abs(states[i] - expected).max() < 1e-9


def test_evolve_timelocal_guards():
    proc = DephasingSemiMarkov(s=1.0, p=3.0)
    rho0 = np.eye(2, dtype=complex) / 2
    with pytest.raises(SingularityOnGrid):
        evolve_timelocal(proc, rho0, [0.0, 1.0])  # pole at ~0.74
    with pytest.raises(GridError):
        evolve_timelocal(proc, rho0, [0.5, 1.0])  # must start at 0
    with pytest.raises(GridError):
        evolve_timelocal(proc, rho0, [0.0, 0.4, 0.2])
    with pytest.raises(InvalidState):
        evolve_timelocal(proc, np.diag([0.9, 0.9]), [0.0, 0.1])


# ----------------------------------------------- memory-kernel consistency

def test_volterra_reproduces_q():
    # the time-nonlocal equation with k(t) = p e^{-st} and the sigma_z
    # conjugation bracket must reproduce the closed-form coherence factor
    proc = DephasingSemiMarkov(s=1.0, p=0.1)
    G = superop_of_kraus([Z]).real - np.eye(4)
    sol = solve_volterra(ExponentialKernel(amplitude=0.1, decay=1.0), G, 3.0, 2e-3)
    dev = np.abs(sol.maps[:, 1, 1].real
                 - np.asarray(q_of_t(proc, sol.times))).max()
    assert dev < 1e-6
    # populations untouched: the (0,0) superoperator entry stays 1
    assert np.abs(sol.maps[:, 0, 0] - 1.0).max() < 1e-10

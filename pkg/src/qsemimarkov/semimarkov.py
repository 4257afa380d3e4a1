"""Waiting-time distributions and the two quantum semi-Markov families.

The renewal picture: jumps occur at epochs separated by i.i.d. waits drawn
from a waiting-time distribution f(t) with survival g(t) = 1 - int_0^t f.
Each jump applies a fixed channel. Two families are implemented:

- Dephasing (qubit): the jump conjugates by sigma_z and the waits are the
  convolution of two exponentials with rates l1, l2, parametrized by
  s = l1 + l2 and p = l1 l2. The coherence factor is

      q(t) = exp(-st/2) (cosh(eta s t / 2) + sinh(eta s t / 2) / eta),
      eta = sqrt(1 - 8 p / s^2),

  the time-local rate is gamma(t) = -(1/2) d ln q / dt, and the memory
  kernel of the time-nonlocal equation is k(t) = p exp(-st).

- Non-unital (qubit): the jump is the projection rho -> |0><0| tr(rho), the
  survival is g(t) = sech(lambda t), and the rate is lambda tanh(lambda t).
  The map is the affine mixture Phi(t) = g(t) id + (1 - g(t)) P.

q(t) and its derivative are evaluated in exponential-partial-fraction form so
they stay finite and accurate for large t in every branch of eta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DomainError,
    GridError,
    Singularity,
    SingularityOnGrid,
    UnsupportedVariant,
)
from .quantum import check_density_matrix, kraus_from_choi

__all__ = [
    "ExponentialWTD",
    "ExpConvolutionWTD",
    "TanhSechWTD",
    "DeltaKernel",
    "ExponentialKernel",
    "kernel_closed_form",
    "eta",
    "REGIME_SEMIGROUP",
    "REGIME_DIVISIBLE",
    "REGIME_INDIVISIBLE",
    "DephasingSemiMarkov",
    "NonUnitalSemiMarkov",
    "q_of_t",
    "q_derivative",
    "gamma_dephasing",
    "gamma_nonunital",
    "coherence_zeros",
    "map_at",
    "superop_at",
    "jump_superop",
    "evolve_timelocal",
    "ClassicalSimResult",
    "classical_jump_simulate",
]

_PAULI_Z = np.diag([1.0, -1.0])
_BRANCH_TOL = 1e-9          # |1 - 8p/s^2| below this selects the eta -> 0 limit
_COHERENCE_FLOOR = 1e-12    # |q| below this counts as a rate pole


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ExponentialWTD:
    """f(t) = rate * exp(-rate t); the memoryless (semigroup) case."""

    rate: float

    def __post_init__(self) -> None:
        _require_positive("rate", self.rate)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        return self.rate * np.exp(-self.rate * t)

    def survival(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-self.rate * t)

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 0.0) or np.any(u >= 1.0):
            raise DomainError("inverse CDF argument must lie in [0, 1)")
        return -np.log1p(-u) / self.rate

    def sample_waits(self, gen: np.random.Generator, n: int) -> np.ndarray:
        return self.inverse_cdf(gen.random(n))


@dataclass(frozen=True)
class ExpConvolutionWTD:
    """Convolution of two exponentials, f = f_1 * f_2 (a two-stage wait).

    For rate1 == rate2 == r the density is the Erlang-2 limit r^2 t e^{-rt};
    otherwise the difference of exponentials is evaluated via expm1 so nearly
    equal rates do not lose precision to cancellation.
    """

    rate1: float
    rate2: float

    def __post_init__(self) -> None:
        _require_positive("rate1", self.rate1)
        _require_positive("rate2", self.rate2)

    @property
    def total_rate(self) -> float:
        """s = rate1 + rate2."""
        return self.rate1 + self.rate2

    @property
    def rate_product(self) -> float:
        """p = rate1 * rate2."""
        return self.rate1 * self.rate2

    def density(self, t):
        t = np.asarray(t, dtype=float)
        diff = self.rate2 - self.rate1
        if diff == 0.0:
            return self.rate1**2 * t * np.exp(-self.rate1 * t)
        return (self.rate_product / diff) * np.exp(-self.rate1 * t) * (
            -np.expm1(-diff * t)
        )

    def survival(self, t):
        t = np.asarray(t, dtype=float)
        diff = self.rate2 - self.rate1
        if diff == 0.0:
            return (1.0 + self.rate1 * t) * np.exp(-self.rate1 * t)
        return np.exp(-self.rate1 * t) * (
            1.0 + (self.rate1 / diff) * (-np.expm1(-diff * t))
        )

    def inverse_cdf(self, u):
        raise UnsupportedVariant(
            "the two-exponential convolution has no single-argument closed-form "
            "inverse CDF; sample_waits composes the two stages instead"
        )

    def sample_waits(self, gen: np.random.Generator, n: int) -> np.ndarray:
        u = gen.random((int(n), 2))
        return (-np.log1p(-u[:, 0]) / self.rate1
                - np.log1p(-u[:, 1]) / self.rate2)


@dataclass(frozen=True)
class TanhSechWTD:
    """f(t) = rate * tanh(rate t) sech(rate t), survival g(t) = sech(rate t)."""

    rate: float

    def __post_init__(self) -> None:
        _require_positive("rate", self.rate)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        x = self.rate * t
        return self.rate * np.tanh(x) / np.cosh(x)

    def survival(self, t):
        t = np.asarray(t, dtype=float)
        return 1.0 / np.cosh(self.rate * t)

    def inverse_cdf(self, u):
        # g = sech(rate t) = 1 - u  =>  t = asech(1 - u) / rate
        u = np.asarray(u, dtype=float)
        if np.any(u < 0.0) or np.any(u >= 1.0):
            raise DomainError("inverse CDF argument must lie in [0, 1)")
        return np.arccosh(1.0 / (1.0 - u)) / self.rate

    def sample_waits(self, gen: np.random.Generator, n: int) -> np.ndarray:
        return self.inverse_cdf(gen.random(n))


@dataclass(frozen=True)
class DeltaKernel:
    """Marker for k(t) = rate * delta(t): the dynamics is a semigroup."""

    rate: float


@dataclass(frozen=True)
class ExponentialKernel:
    """k(t) = amplitude * exp(-decay * t)."""

    amplitude: float
    decay: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.exp(-self.decay * t)


def kernel_closed_form(wtd):
    """Memory kernel k(t) with Laplace transform u f~ / (1 - f~).

    Exponential waits give the delta-correlated kernel (returned as a
    ``DeltaKernel`` marker); the two-exponential convolution gives
    k(t) = p exp(-s t) with s the rate sum and p the rate product.

    :raises UnsupportedVariant: for the tanh-sech distribution, whose kernel
        has no elementary inverse Laplace transform.
    """
    if isinstance(wtd, ExponentialWTD):
        return DeltaKernel(rate=wtd.rate)
    if isinstance(wtd, ExpConvolutionWTD):
        return ExponentialKernel(amplitude=wtd.rate_product, decay=wtd.total_rate)
    if isinstance(wtd, TanhSechWTD):
        raise UnsupportedVariant(
            "no closed-form memory kernel for the tanh-sech distribution"
        )
    raise UnsupportedVariant(f"unknown waiting-time distribution {type(wtd)!r}")


REGIME_SEMIGROUP = "semigroup-limit"
REGIME_DIVISIBLE = "cp-divisible"
REGIME_INDIVISIBLE = "cp-indivisible"


def eta(s: float, p: float) -> complex:
    """eta = sqrt(1 - 8p/s^2), purely real or purely imaginary."""
    _require_positive("s", s)
    disc = 1.0 - 8.0 * p / s**2
    if disc >= 0.0:
        return complex(np.sqrt(disc), 0.0)
    return complex(0.0, np.sqrt(-disc))


def _branch(s: float, p: float) -> tuple[str, float]:
    """Branch tag and the real magnitude of eta for stable evaluation."""
    disc = 1.0 - 8.0 * p / s**2
    if abs(disc) < _BRANCH_TOL:
        return "boundary", 0.0
    if disc > 0.0:
        return "real", float(np.sqrt(disc))
    return "imag", float(np.sqrt(-disc))


@dataclass(frozen=True)
class DephasingSemiMarkov:
    """Qubit dephasing renewal process with s = l1 + l2, p = l1 l2."""

    s: float
    p: float

    def __post_init__(self) -> None:
        _require_positive("s", self.s)
        if not np.isfinite(self.p) or self.p < 0.0:
            raise DomainError(f"p must be non-negative and finite, got {self.p!r}")

    @classmethod
    def from_rates(cls, rate1: float, rate2: float) -> "DephasingSemiMarkov":
        _require_positive("rate1", rate1)
        _require_positive("rate2", rate2)
        return cls(s=rate1 + rate2, p=rate1 * rate2)

    def regime(self) -> str:
        """Exact classification against the boundary p = s^2 / 8."""
        if self.p == 0.0:
            return REGIME_SEMIGROUP
        if self.p > self.s**2 / 8.0:
            return REGIME_INDIVISIBLE
        return REGIME_DIVISIBLE

    @property
    def dim(self) -> int:
        return 2


def q_of_t(proc: DephasingSemiMarkov, t):
    """Coherence factor q(t); vectorized over t >= 0."""
    t = np.asarray(t, dtype=float)
    s, p = proc.s, proc.p
    tag, w = _branch(s, p)
    if tag == "boundary":
        return np.exp(-s * t / 2) * (1.0 + s * t / 2)
    if tag == "real":
        # partial fractions: no growing exponentials, safe for large t
        return ((1.0 + w) * np.exp(-s * (1.0 - w) * t / 2)
                + (w - 1.0) * np.exp(-s * (1.0 + w) * t / 2)) / (2.0 * w)
    x = s * t * w / 2
    return np.exp(-s * t / 2) * (np.cos(x) + np.sin(x) / w)


def q_derivative(proc: DephasingSemiMarkov, t):
    """dq/dt; vectorized over t >= 0."""
    t = np.asarray(t, dtype=float)
    s, p = proc.s, proc.p
    tag, w = _branch(s, p)
    if tag == "boundary":
        return -np.exp(-s * t / 2) * (s**2 * t / 4)
    if tag == "real":
        return -(2.0 * p / (s * w)) * (np.exp(-s * (1.0 - w) * t / 2)
                                       - np.exp(-s * (1.0 + w) * t / 2))
    x = s * t * w / 2
    return -(4.0 * p / (s * w)) * np.exp(-s * t / 2) * np.sin(x)


def gamma_dephasing(proc: DephasingSemiMarkov, t: float) -> float:
    """Time-local dephasing rate gamma(t) = -(1/2) d ln q / dt.

    Algebraically equal to the closed form 2p / (s eta coth(s t eta / 2) + s)
    on every branch, but evaluated through q and dq/dt so extrema of q give
    an exact zero instead of an inf/inf form.

    :raises Singularity: when |q(t)| < 1e-12 (t is at a pole of the rate).
    """
    t = float(t)
    if t < 0.0:
        raise DomainError(f"t must be non-negative, got {t!r}")
    if proc.p == 0.0 or t == 0.0:
        return 0.0
    q = float(q_of_t(proc, t))
    if abs(q) < _COHERENCE_FLOOR:
        raise Singularity(f"rate pole: |q({t:g})| = {abs(q):.3e}")
    return -0.5 * float(q_derivative(proc, t)) / q


def coherence_zeros(proc: DephasingSemiMarkov, t_max: float) -> np.ndarray:
    """Zeros of q on (0, t_max], empty unless p > s^2/8.

    In the oscillatory branch the zeros solve tan(w s t / 2) = -w with
    w = |eta|, i.e. t_k = 2 (k pi - arctan w) / (s w), k = 1, 2, ...
    """
    if t_max < 0.0:
        raise DomainError(f"t_max must be non-negative, got {t_max!r}")
    tag, w = _branch(proc.s, proc.p)
    if tag != "imag":
        return np.array([])
    offset = np.arctan(w)
    k_max = int(np.floor((proc.s * t_max * w / 2 + offset) / np.pi))
    ks = np.arange(1, k_max + 1)
    return 2.0 * (ks * np.pi - offset) / (proc.s * w)


@dataclass(frozen=True)
class NonUnitalSemiMarkov:
    """Qubit renewal process whose jump projects onto |0><0|.

    Waits follow the tanh-sech distribution, so the survival is
    g(t) = sech(rate t) and the map is Phi(t) = g id + (1 - g) P.
    """

    rate: float

    def __post_init__(self) -> None:
        _require_positive("rate", self.rate)

    def survival(self, t):
        return TanhSechWTD(self.rate).survival(t)

    @property
    def dim(self) -> int:
        return 2


def gamma_nonunital(proc: NonUnitalSemiMarkov, t):
    """gamma(t) = rate * tanh(rate t) = -d ln g / dt; vectorized, no poles."""
    t = np.asarray(t, dtype=float)
    return proc.rate * np.tanh(proc.rate * t)


def map_at(proc, t: float) -> list[np.ndarray]:
    """Kraus operators of the dynamical map Phi(t).

    Dephasing: {sqrt((1+q)/2) I, sqrt((1-q)/2) Z}. Non-unital: derived from
    the Choi matrix of g id + (1-g) P by spectral decomposition.
    """
    t = float(t)
    if t < 0.0:
        raise DomainError(f"t must be non-negative, got {t!r}")
    if isinstance(proc, DephasingSemiMarkov):
        q = float(q_of_t(proc, t))
        return [np.sqrt((1.0 + q) / 2.0) * np.eye(2),
                np.sqrt((1.0 - q) / 2.0) * _PAULI_Z]
    if isinstance(proc, NonUnitalSemiMarkov):
        g = float(proc.survival(t))
        # Choi of g id + (1-g) P: g |Psi><Psi| + (1-g) |0><0| (x) I
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1.0
        chi = g * np.outer(psi, psi.conj())
        chi[0, 0] += 1.0 - g
        chi[1, 1] += 1.0 - g
        return kraus_from_choi(chi)
    raise DomainError(f"unknown process type {type(proc)!r}")


def jump_superop(proc) -> np.ndarray:
    """Column-stacking superoperator of the per-jump channel.

    Dephasing: conjugation by sigma_z. Non-unital: rho -> |0><0| tr(rho).
    """
    if isinstance(proc, DephasingSemiMarkov):
        return np.kron(_PAULI_Z, _PAULI_Z).astype(float)
    if isinstance(proc, NonUnitalSemiMarkov):
        S = np.zeros((4, 4))
        S[0, 0] = S[0, 3] = 1.0  # vec(E00) and vec(E11) both map to vec(E00)
        return S
    raise DomainError(f"unknown process type {type(proc)!r}")


def superop_at(proc, t: float) -> np.ndarray:
    """Superoperator form of Phi(t), built from its Kraus set."""
    from .quantum import superop_of_kraus

    return superop_of_kraus(map_at(proc, t))


def _jump_apply(proc):
    if isinstance(proc, DephasingSemiMarkov):
        return lambda rho: _PAULI_Z @ rho @ _PAULI_Z
    if isinstance(proc, NonUnitalSemiMarkov):
        def project(rho):
            out = np.zeros_like(rho)
            out[0, 0] = rho.trace()
            return out
        return project
    raise DomainError(f"unknown process type {type(proc)!r}")


def _rate_function(proc):
    if isinstance(proc, DephasingSemiMarkov):
        return lambda t: gamma_dephasing(proc, t)
    if isinstance(proc, NonUnitalSemiMarkov):
        return lambda t: float(gamma_nonunital(proc, t))
    raise DomainError(f"unknown process type {type(proc)!r}")


def evolve_timelocal(proc, rho0: np.ndarray, times: Sequence[float], *,
                     max_step: float | None = None) -> np.ndarray:
    """Integrate drho/dt = gamma(t) (J[rho] - rho) through the output grid.

    Classic fixed-step RK4 between consecutive output times, with substeps
    no larger than ``max_step`` (default min(1e-3, span/1000)).

    :param times: increasing grid starting at 0.
    :raises SingularityOnGrid: for a dephasing process whose q has a zero
        inside the span (the time-local rate diverges there).
    :raises GridError: if the grid is malformed.
    :return: array of states, shape (len(times), d, d); the first entry is
        rho0 itself.
    """
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or ts.size < 1 or ts[0] != 0.0 or np.any(np.diff(ts) <= 0.0):
        raise GridError("times must be a 1-D increasing grid starting at 0")
    rho = check_density_matrix(rho0)
    if isinstance(proc, DephasingSemiMarkov):
        zeros = coherence_zeros(proc, float(ts[-1]))
        if zeros.size:
            raise SingularityOnGrid(
                f"rate pole at t = {zeros[0]:.6g} inside the integration span"
            )
    span = float(ts[-1] - ts[0])
    if max_step is None:
        max_step = min(1e-3, span / 1000.0) if span > 0.0 else 1e-3
    gamma = _rate_function(proc)
    jump = _jump_apply(proc)

    def rhs(t: float, r: np.ndarray) -> np.ndarray:
        return gamma(t) * (jump(r) - r)

    out = np.empty((ts.size, *rho.shape), dtype=complex)
    out[0] = rho
    for i in range(ts.size - 1):
        t, t_end = float(ts[i]), float(ts[i + 1])
        n_sub = max(1, int(np.ceil((t_end - t) / max_step)))
        h = (t_end - t) / n_sub
        for _ in range(n_sub):
            k1 = rhs(t, rho)
            k2 = rhs(t + h / 2, rho + h / 2 * k1)
            k3 = rhs(t + h / 2, rho + h / 2 * k2)
            k4 = rhs(t + h, rho + h * k3)
            rho = rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        out[i + 1] = rho
    return out


@dataclass(frozen=True)
class ClassicalSimResult:
    """Empirical curves from the classical renewal simulation."""

    times: np.ndarray           # shape (n_times,)
    survival: np.ndarray        # P(no jump by t), shape (n_times,)
    survival_se: np.ndarray
    occupation: np.ndarray      # site occupation frequencies, shape (2, n_times)
    occupation_se: np.ndarray
    n_paths: int
    seed: int


_SIM_BLOCK = 16  # renewal steps drawn per RNG call; fixed for reproducibility


def _waits_from_uniforms(wtd, u: np.ndarray) -> np.ndarray:
    """Map a (m, k) block of uniforms to m waits via the inverse CDF."""
    if isinstance(wtd, ExpConvolutionWTD):
        return (-np.log1p(-u[:, 0]) / wtd.rate1
                - np.log1p(-u[:, 1]) / wtd.rate2)
    return wtd.inverse_cdf(u[:, 0])


def classical_jump_simulate(wtd, jump_prob: float, t_max: float,
                            n_paths: int, *, seed: int,
                            n_times: int = 41) -> ClassicalSimResult:
    """Monte Carlo renewal simulation of a two-site classical jump process.

    Paths start in site 0; at each renewal epoch the walker hops to the
    other site with probability ``jump_prob``. Waits come from the inverse
    CDF of ``wtd``. Path i consumes its own counter-based stream
    ``Philox(key=(seed, i))`` in blocks of renewal steps, each step using
    its uniforms in a fixed order (wait draws, then the hop draw), so
    results are bit-reproducible and independent of evaluation order.

    :param seed: required 64-bit seed (0 <= seed < 2**64).
    :return: ``ClassicalSimResult`` on a uniform grid of ``n_times`` points
        spanning [0, t_max], with binomial standard errors.
    """
    if not 0.0 <= jump_prob <= 1.0:
        raise DomainError(f"jump probability {jump_prob!r} outside [0, 1]")
    _require_positive("t_max", t_max)
    if n_paths < 1:
        raise DomainError(f"n_paths must be >= 1, got {n_paths!r}")
    if n_times < 2:
        raise DomainError(f"n_times must be >= 2, got {n_times!r}")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise DomainError("seed must fit in an unsigned 64-bit integer")

    t_max = float(t_max)
    per_step = 3 if isinstance(wtd, ExpConvolutionWTD) else 2
    times = np.linspace(0.0, t_max, int(n_times))
    survived = np.zeros(times.size)
    occ0 = np.zeros(times.size)
    for i in range(int(n_paths)):
        key = np.array([seed, i], dtype=np.uint64)
        gen = np.random.Generator(np.random.Philox(key=key))
        wait_blocks, hop_blocks, total = [], [], 0.0
        while total < t_max:
            u = gen.random((_SIM_BLOCK, per_step))
            w = _waits_from_uniforms(wtd, u)
            wait_blocks.append(w)
            hop_blocks.append(u[:, -1])
            total += float(w.sum())
        epochs = np.cumsum(np.concatenate(wait_blocks))
        n_jumps = int(np.searchsorted(epochs, t_max, side="left"))
        first_jump = epochs[0] if n_jumps >= 1 else np.inf
        survived += times < first_jump
        hops = np.concatenate(hop_blocks)[:n_jumps] < jump_prob
        # site after each realized epoch, prefixed by the initial site 0
        sites = np.concatenate([[0], np.cumsum(hops) & 1])
        idx = np.searchsorted(np.concatenate([[0.0], epochs[:n_jumps]]),
                              times, side="right") - 1
        occ0 += sites[idx] == 0

    survival = survived / n_paths
    occ0 /= n_paths
    occupation = np.vstack([occ0, 1.0 - occ0])
    survival_se = np.sqrt(survival * (1.0 - survival) / n_paths)
    occupation_se = np.sqrt(occupation * (1.0 - occupation) / n_paths)
    return ClassicalSimResult(
        times=times,
        survival=survival,
        survival_se=survival_se,
        occupation=occupation,
        occupation_se=occupation_se,
        n_paths=int(n_paths),
        seed=seed,
    )

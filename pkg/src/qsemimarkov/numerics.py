"""Dense small-matrix linear algebra, quadrature, and scalar search.

Everything here operates on plain numpy arrays and Python callables. Matrix
routines are thin, contract-enforcing wrappers over LAPACK (via numpy);
quadrature wraps QUADPACK (via scipy) and adds excision of flagged singular
points; the Volterra solver and the golden-section search are implemented
directly because no library routine matches their required form.
"""

from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import (
    DomainError,
    GridError,
    InvalidState,
    NoConvergence,
    NonHermitianInput,
    NoSignChange,
    NumericalError,
    ToleranceNotMet,
)

__all__ = [
    "Spectrum",
    "QuadratureResult",
    "VolterraSolution",
    "hermitian_eig",
    "trace_norm",
    "von_neumann_entropy",
    "binary_entropy",
    "adaptive_quad",
    "solve_volterra",
    "minimize_scalar",
    "find_root",
]


class Spectrum(NamedTuple):
    """Eigendecomposition with eigenvalues sorted in descending order."""

    eigenvalues: np.ndarray   # real, shape (d,)
    eigenvectors: np.ndarray  # columns match eigenvalues, shape (d, d)


class QuadratureResult(NamedTuple):
    value: float
    error_estimate: float
    evaluations: int


class VolterraSolution(NamedTuple):
    times: np.ndarray  # shape (n+1,), uniform grid from 0
    maps: np.ndarray   # shape (n+1, D, D) superoperator trajectory


def hermitian_eig(matrix: np.ndarray, *, tol: float = 1e-12) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    :param matrix: square complex matrix, Hermitian within ``tol`` relative
        to its largest-magnitude entry.
    :param tol: relative Hermiticity tolerance.
    :raises NonHermitianInput: if the Hermiticity check fails.
    :raises NoConvergence: if the underlying LAPACK driver does not converge.
    :return: ``Spectrum(eigenvalues, eigenvectors)`` with real eigenvalues in
        descending order and matching eigenvector columns.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    scale = max(np.abs(m).max(), 1.0)
    defect = np.abs(m - m.conj().T).max()
    if defect > tol * scale:
        raise NonHermitianInput(
            f"matrix deviates from Hermiticity by {defect:.3e} "
            f"(allowed {tol * scale:.3e})"
        )
    try:
        evals, evecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(evals)[::-1]
    return Spectrum(evals[order], evecs[:, order])


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input this is sum |eigenvalues|."""
    m = np.asarray(matrix)
    if m.ndim != 2:
        raise DomainError(f"expected a matrix, got shape {m.shape}")
    try:
        return float(np.linalg.svd(m, compute_uv=False).sum())
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def von_neumann_entropy(rho: np.ndarray, *, trace_tol: float = 1e-8,
                        negativity_tol: float = 1e-10) -> float:
    """Von Neumann entropy in bits, -sum(lambda log2 lambda).

    :raises InvalidState: if ``rho`` is non-Hermitian, its trace deviates
        from 1 by more than ``trace_tol``, or an eigenvalue is below
        ``-negativity_tol``.
    """
    try:
        evals = hermitian_eig(np.asarray(rho, dtype=complex)).eigenvalues
    except NonHermitianInput as exc:
        raise InvalidState(str(exc)) from exc
    trace_defect = abs(evals.sum() - 1.0)
    if trace_defect > trace_tol:
        raise InvalidState(f"trace deviates from 1 by {trace_defect:.3e}")
    if evals.min() < -negativity_tol:
        raise InvalidState(f"negative eigenvalue {evals.min():.3e}")
    lam = np.clip(evals, 0.0, None)
    lam = lam[lam > 0.0]
    return float(-(lam * np.log2(lam)).sum())


def binary_entropy(x: float) -> float:
    """H2(x) = -x log2 x - (1-x) log2(1-x) in bits; H2(0) = H2(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def _excised_pieces(a: float, b: float, singular_points: Sequence[float],
                    excision: float) -> tuple[list[tuple[float, float]],
                                              list[tuple[float, float]]]:
    """Split [a, b] into subintervals excluding excision-neighborhoods.

    Returns (pieces, excised) where excised lists the removed intervals
    clipped to [a, b]. Overlapping neighborhoods are merged.
    """
    holes: list[tuple[float, float]] = []
    for x in sorted(singular_points):
        lo, hi = max(a, x - excision), min(b, x + excision)
        if hi <= a or lo >= b or hi <= lo:
            continue
        if holes and lo <= holes[-1][1]:
            holes[-1] = (holes[-1][0], max(holes[-1][1], hi))
        else:
            holes.append((lo, hi))
    pieces: list[tuple[float, float]] = []
    cursor = a
    for lo, hi in holes:
        if lo > cursor:
            pieces.append((cursor, lo))
        cursor = hi
    if cursor < b:
        pieces.append((cursor, b))
    return pieces, holes


def adaptive_quad(f: Callable[[float], float], a: float, b: float, *,
                  abs_tol: float = 1e-10, rel_tol: float = 1e-8,
                  singular_points: Sequence[float] = (),
                  excision: float = 1e-6,
                  breakpoints: Sequence[float] = (),
                  limit: int = 200) -> QuadratureResult:
    """Adaptive quadrature of f over [a, b] with singular-point excision.

    :param f: scalar integrand, finite on [a, b] away from ``singular_points``.
    :param singular_points: pole locations; an ``excision``-neighborhood
        around each is removed from the integration range.
    :param breakpoints: known non-smooth interior points (kinks); passed to
        the adaptive subdivider as forced split locations.
    :param limit: subdivision budget per piece.
    :raises ToleranceNotMet: if the subdivider exhausts its budget or
        otherwise reports non-convergence.
    :return: ``QuadratureResult(value, error_estimate, evaluations)`` summed
        over the retained subintervals.
    """
    if not np.isfinite(a) or not np.isfinite(b) or b < a:
        raise DomainError(f"bad integration range [{a}, {b}]")
    if b == a:
        return QuadratureResult(0.0, 0.0, 0)
    pieces, _ = _excised_pieces(a, b, singular_points, excision)
    total = 0.0
    err = 0.0
    neval = 0
    for lo, hi in pieces:
        pts = sorted(x for x in breakpoints if lo < x < hi) or None
        out = integrate.quad(f, lo, hi, points=pts, epsabs=abs_tol,
                             epsrel=rel_tol, limit=limit, full_output=1)
        if len(out) > 3:  # QUADPACK appended a failure message
            raise ToleranceNotMet(f"quadrature on [{lo:g}, {hi:g}]: {out[3]}")
        value, abserr, info = out
        total += value
        err += abserr
        neval += int(info["neval"])
    return QuadratureResult(total, err, neval)


def solve_volterra(kernel: Callable[[np.ndarray], np.ndarray],
                   generator: np.ndarray, t_max: float,
                   dt: float) -> VolterraSolution:
    """Integrate dPhi/dt = G . int_0^t k(t-tau) Phi(tau) dtau, Phi(0) = 1.

    Fixed-step predictor-corrector (Heun) with a trapezoidal memory sum;
    global error is O(dt^2). The kernel is evaluated once on the offset grid.

    :param kernel: scalar memory kernel k(t), vectorized over an array of
        non-negative times.
    :param generator: constant superoperator G multiplying the memory
        integral (for a jump channel J this is the bracket J - 1).
    :param t_max: final time; the grid is uniform on [0, t_max].
    :param dt: step size; t_max is rounded to an integer number of steps.
    :raises GridError: if dt or t_max is non-positive or t_max < dt.
    :return: ``VolterraSolution(times, maps)`` with maps[0] the identity.
    """
    if not (np.isfinite(dt) and dt > 0.0) or not np.isfinite(t_max):
        raise GridError(f"bad step dt={dt!r}")
    if t_max < dt:
        raise GridError(f"t_max={t_max!r} smaller than dt={dt!r}")
    G = np.asarray(generator)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise DomainError(f"generator must be square, got shape {G.shape}")
    n = int(round(t_max / dt))
    dim = G.shape[0]
    times = dt * np.arange(n + 1)
    kvals = np.asarray(kernel(times), dtype=float)
    if kvals.shape != times.shape or not np.all(np.isfinite(kvals)):
        raise NumericalError("kernel must return finite values on the grid")
    maps = np.empty((n + 1, dim, dim), dtype=np.result_type(G, float))
    maps[0] = np.eye(dim)
    for m in range(n):
        # trapezoidal memory sum at t_m over history tau_0..tau_m
        w = kvals[m::-1].copy()
        w[0] *= 0.5
        w[-1] *= 0.5
        if m == 0:
            mem = np.zeros((dim, dim), dtype=maps.dtype)
        else:
            mem = np.einsum("n,nij->ij", w * dt, maps[: m + 1])
        rhs = G @ mem
        predicted = maps[m] + dt * rhs
        # corrector: memory sum at t_{m+1} with the predicted endpoint
        w1 = kvals[m + 1:: -1].copy()
        w1[0] *= 0.5
        w1[-1] *= 0.5
        mem1 = np.einsum("n,nij->ij", w1[: m + 1] * dt, maps[: m + 1])
        mem1 += dt * w1[m + 1] * predicted
        maps[m + 1] = maps[m] + 0.5 * dt * (rhs + G @ mem1)
    return VolterraSolution(times, maps)


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def minimize_scalar(f: Callable[[float], float], lo: float, hi: float, *,
                    tol: float = 1e-8,
                    max_iter: int = 200) -> tuple[float, float]:
    """Golden-section minimum of a unimodal f on [lo, hi].

    :return: ``(argmin, f(argmin))`` with ``|argmin - true|`` bounded by the
        final bracket width (at most ``tol`` unless ``max_iter`` hits first).
    :raises NumericalError: if f returns a non-finite value.
    """
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
        raise DomainError(f"bad search interval [{lo}, {hi}]")

    def probe(x: float) -> float:
        y = float(f(x))
        if not np.isfinite(y):
            raise NumericalError(f"objective returned {y!r} at x={x!r}")
        return y

    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = probe(c), probe(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = probe(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = probe(d)
    x = 0.5 * (a + b)
    return x, probe(x)


def find_root(f: Callable[[float], float], lo: float, hi: float, *,
              tol: float = 1e-12) -> float:
    """Bracketed root of f on [lo, hi] via Brent's method.

    :raises NoSignChange: if f(lo) and f(hi) have the same (nonzero) sign.
    """
    flo, fhi = float(f(lo)), float(f(hi))
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChange(
            f"f({lo:g}) = {flo:.3e} and f({hi:g}) = {fhi:.3e} "
            "have the same sign"
        )
    return float(optimize.brentq(f, lo, hi, xtol=tol, rtol=8.9e-16))

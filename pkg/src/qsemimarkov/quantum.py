"""States, channels, and Choi-matrix machinery for small dense systems.

Conventions used throughout:

- vec/unvec are column-stacking, so a Kraus operator K acts on vec(rho) as
  the superoperator kron(conj(K), K).
- The Choi matrix of a map Phi is (Phi (x) 1)|Psi><Psi| with the unnormalized
  maximally entangled vector |Psi> = sum_j |j,j>; the FIRST tensor factor
  carries the map output, so tracing it out leaves the identity for any
  trace-preserving map. Under this convention the Choi matrix of a Kraus set
  is sum_m |w_m><w_m| with w_m the row-major flattening of K_m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, InvalidState, SingularMap
from .numerics import hermitian_eig

__all__ = [
    "weyl_z",
    "check_density_matrix",
    "apply_kraus",
    "kraus_trace_defect",
    "superop_of_kraus",
    "apply_superop",
    "choi_of_map",
    "choi_of_superop",
    "kraus_from_choi",
    "CPTPReport",
    "is_cptp",
    "intermediate_map",
    "DephasingGenerator",
    "ProjectorGenerator",
    "choi_of_generator",
]


def weyl_z(d: int) -> np.ndarray:
    """Clock matrix diag(1, w, ..., w^(d-1)) with w = exp(2 pi i / d)."""
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    omega = np.exp(2j * np.pi / d)
    return np.diag(omega ** np.arange(d))


def check_density_matrix(rho: np.ndarray, *, atol: float = 1e-10) -> np.ndarray:
    """Validate Hermiticity, unit trace, and positivity of a state.

    :raises InvalidState: on any violation beyond ``atol``.
    :return: the input as a complex array.
    """
    m = np.asarray(rho, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidState(f"state must be a square matrix, got {m.shape}")
    herm = np.abs(m - m.conj().T).max()
    if herm > atol:
        raise InvalidState(f"state deviates from Hermiticity by {herm:.3e}")
    tr = abs(m.trace() - 1.0)
    if tr > atol:
        raise InvalidState(f"state trace deviates from 1 by {tr:.3e}")
    min_eig = float(np.linalg.eigvalsh(m).min())
    if min_eig < -atol:
        raise InvalidState(f"state has negative eigenvalue {min_eig:.3e}")
    return m


def _check_kraus_dims(kraus_ops: Sequence[np.ndarray]) -> int:
    if not kraus_ops:
        raise DimensionMismatch("empty Kraus set")
    d = np.asarray(kraus_ops[0]).shape
    if len(d) != 2 or d[0] != d[1]:
        raise DimensionMismatch(f"Kraus operators must be square, got {d}")
    for K in kraus_ops:
        if np.asarray(K).shape != d:
            raise DimensionMismatch("Kraus operators have mixed shapes")
    return d[0]


def apply_kraus(kraus_ops: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    """sum_m K_m rho K_m^dag."""
    d = _check_kraus_dims(kraus_ops)
    r = np.asarray(rho, dtype=complex)
    if r.shape != (d, d):
        raise DimensionMismatch(
            f"state shape {r.shape} does not match Kraus dimension {d}"
        )
    out = np.zeros_like(r)
    for K in kraus_ops:
        out += K @ r @ np.asarray(K).conj().T
    return out


def kraus_trace_defect(kraus_ops: Sequence[np.ndarray]) -> float:
    """max-entry deviation of sum K^dag K from the identity."""
    d = _check_kraus_dims(kraus_ops)
    acc = np.zeros((d, d), dtype=complex)
    for K in kraus_ops:
        acc += np.asarray(K).conj().T @ K
    return float(np.abs(acc - np.eye(d)).max())


def superop_of_kraus(kraus_ops: Sequence[np.ndarray]) -> np.ndarray:
    """Column-stacking superoperator sum_m kron(conj(K_m), K_m)."""
    d = _check_kraus_dims(kraus_ops)
    S = np.zeros((d * d, d * d), dtype=complex)
    for K in kraus_ops:
        K = np.asarray(K, dtype=complex)
        S += np.kron(K.conj(), K)
    return S


def apply_superop(superop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply a column-stacking superoperator to a matrix."""
    S = np.asarray(superop)
    d = int(round(np.sqrt(S.shape[0])))
    if S.shape != (d * d, d * d):
        raise DimensionMismatch(f"superoperator shape {S.shape} is not d^2 x d^2")
    r = np.asarray(rho, dtype=complex)
    if r.shape != (d, d):
        raise DimensionMismatch(
            f"state shape {r.shape} does not match superoperator dimension {d}"
        )
    return (S @ r.flatten(order="F")).reshape((d, d), order="F")


def choi_of_map(kraus_ops: Sequence[np.ndarray]) -> np.ndarray:
    """Choi matrix (Phi (x) 1)|Psi><Psi| of a Kraus set, |Psi> unnormalized."""
    _check_kraus_dims(kraus_ops)
    chi = None
    for K in kraus_ops:
        w = np.asarray(K, dtype=complex).flatten()  # row-major: (K (x) 1)|Psi>
        term = np.outer(w, w.conj())
        chi = term if chi is None else chi + term
    return chi


def choi_of_superop(superop: np.ndarray) -> np.ndarray:
    """Choi matrix of a map given as a column-stacking superoperator."""
    S = np.asarray(superop, dtype=complex)
    d = int(round(np.sqrt(S.shape[0])))
    if S.shape != (d * d, d * d):
        raise DimensionMismatch(f"superoperator shape {S.shape} is not d^2 x d^2")
    chi = np.zeros((d * d, d * d), dtype=complex)
    basis = np.eye(d, dtype=complex)
    for i in range(d):
        for j in range(d):
            E = np.outer(basis[:, i], basis[:, j])
            out = (S @ E.flatten(order="F")).reshape((d, d), order="F")
            chi += np.kron(out, E)
    return chi


def kraus_from_choi(choi: np.ndarray, *, tol: float = 1e-12) -> list[np.ndarray]:
    """Kraus operators from the spectral decomposition of a Choi matrix.

    Eigenvalues below ``tol`` (relative to the largest) are dropped; each
    retained operator's global phase is fixed so its largest-magnitude entry
    is real and positive.

    :raises InvalidState: if the Choi matrix has a significantly negative
        eigenvalue (the map is not completely positive).
    """
    chi = np.asarray(choi, dtype=complex)
    d = int(round(np.sqrt(chi.shape[0])))
    if chi.shape != (d * d, d * d):
        raise DimensionMismatch(f"Choi shape {chi.shape} is not d^2 x d^2")
    evals, evecs = hermitian_eig(chi)
    scale = max(float(evals.max()), 0.0) or 1.0
    if float(evals.min()) < -1e-8 * scale:
        raise InvalidState(
            f"Choi matrix is not positive semidefinite (min eig {evals.min():.3e})"
        )
    ops: list[np.ndarray] = []
    for lam, vec in zip(evals, evecs.T):
        if lam <= tol * scale:
            continue
        K = np.sqrt(lam) * vec.reshape(d, d)  # row-major, matching choi_of_map
        idx = np.unravel_index(np.argmax(np.abs(K)), K.shape)
        phase = K[idx] / abs(K[idx])
        ops.append(K / phase)
    return ops


@dataclass(frozen=True)
class CPTPReport:
    """Outcome of a complete-positivity / trace-preservation check."""

    ok: bool
    min_eigenvalue: float
    trace_defect: float
    tol: float

    def __bool__(self) -> bool:
        return self.ok


def is_cptp(choi: np.ndarray, *, tol: float = 1e-8) -> CPTPReport:
    """Check CPTP-ness of a map from its Choi matrix.

    CP requires the minimum eigenvalue >= -tol; TP requires the partial
    trace over the output (first) factor to equal the identity within tol.
    """
    chi = np.asarray(choi, dtype=complex)
    d = int(round(np.sqrt(chi.shape[0])))
    if chi.shape != (d * d, d * d):
        raise DimensionMismatch(f"Choi shape {chi.shape} is not d^2 x d^2")
    min_eig = float(hermitian_eig(chi, tol=1e-9).eigenvalues.min())
    reduced = np.einsum("abae->be", chi.reshape(d, d, d, d))
    trace_defect = float(np.abs(reduced - np.eye(d)).max())
    return CPTPReport(
        ok=(min_eig >= -tol and trace_defect <= tol),
        min_eigenvalue=min_eig,
        trace_defect=trace_defect,
        tol=tol,
    )


def intermediate_map(superop_late: np.ndarray, superop_early: np.ndarray, *,
                     cond_max: float = 1e12) -> np.ndarray:
    """Propagator V with V . Phi(t1) = Phi(t2), as a superoperator.

    :raises SingularMap: if the early map's condition number exceeds
        ``cond_max`` (the inverse is numerically meaningless).
    """
    S2 = np.asarray(superop_late, dtype=complex)
    S1 = np.asarray(superop_early, dtype=complex)
    if S1.shape != S2.shape or S1.ndim != 2 or S1.shape[0] != S1.shape[1]:
        raise DimensionMismatch(
            f"superoperator shapes {S2.shape} and {S1.shape} are incompatible"
        )
    cond = float(np.linalg.cond(S1))
    if not np.isfinite(cond) or cond > cond_max:
        raise SingularMap(f"early map condition number {cond:.3e} > {cond_max:.0e}")
    # V = S2 @ inv(S1), computed as a linear solve on the transpose pair
    return np.linalg.solve(S1.T, S2.T).T


@dataclass(frozen=True)
class DephasingGenerator:
    """Snapshot gamma * c * (Z rho Z^dag - rho) of the dephasing generator.

    ``normalized`` selects the qudit convention c = 1/d (under which the
    Choi-difference family constant is dimension-independent); with
    ``normalized=False`` the bare qubit form gamma (Z rho Z - rho) results.
    """

    rate: float
    dim: int = 2
    normalized: bool = True

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise DomainError(f"dimension must be >= 2, got {self.dim}")

    def apply(self, rho: np.ndarray) -> np.ndarray:
        r = np.asarray(rho, dtype=complex)
        if r.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"state shape {r.shape} does not match dimension {self.dim}"
            )
        Z = weyl_z(self.dim)
        scale = self.rate / self.dim if self.normalized else self.rate
        return scale * (Z @ r @ Z.conj().T - r)


@dataclass(frozen=True)
class ProjectorGenerator:
    """Snapshot gamma * (P[rho] - rho) with P[rho] = |0><0| tr(rho)."""

    rate: float
    dim: int = 2

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise DomainError(f"dimension must be >= 2, got {self.dim}")

    def apply(self, rho: np.ndarray) -> np.ndarray:
        r = np.asarray(rho, dtype=complex)
        if r.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"state shape {r.shape} does not match dimension {self.dim}"
            )
        out = -r.copy()
        out[0, 0] += r.trace()
        return self.rate * out


def choi_of_generator(generator) -> np.ndarray:
    """Choi matrix (L (x) 1)|Psi><Psi| of a generator snapshot.

    Works for any object with ``dim`` and a linear ``apply``; the result is
    Hermitian and traceless for a trace-annihilating generator.
    """
    d = generator.dim
    chi = np.zeros((d * d, d * d), dtype=complex)
    basis = np.eye(d, dtype=complex)
    for i in range(d):
        for j in range(d):
            E = np.outer(basis[:, i], basis[:, j])
            chi += np.kron(generator.apply(E), E)
    return chi

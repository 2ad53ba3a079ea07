"""Dense complex linear algebra kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; every
public function validates its input through :func:`as_matrix` and never
mutates it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    InvalidInput,
    NotHermitian,
    NotPSD,
    ShapeError,
    SingularOperator,
)

TOL_ENV_VAR = "FRAMEFORGE_TOL"


@dataclass(frozen=True)
class TolerancePolicy:
    """Absolute tolerance for identities and a relative cutoff for rank decisions.

    ``rank_rel`` is multiplied by the operator norm of whatever is being tested,
    so ``rank_tol(norm)`` is the effective rank threshold.
    """

    identity_tol: float = 1e-10
    rank_rel: float = 1e-12

    def __post_init__(self):
        if not (self.identity_tol > 0 and self.rank_rel > 0):
            raise InvalidInput("tolerances must be strictly positive")

    def rank_tol(self, norm: float) -> float:
        return self.rank_rel * norm

    @classmethod
    def from_env(cls) -> "TolerancePolicy":
        raw = os.environ.get(TOL_ENV_VAR)
        if raw is None or raw.strip() == "":
            return cls()
        try:
            value = float(raw)
        except ValueError:
            raise InvalidInput(f"{TOL_ENV_VAR}={raw!r} is not a number") from None
        return cls(identity_tol=value)


def resolve_tol(tol: TolerancePolicy | None) -> TolerancePolicy:
    return TolerancePolicy.from_env() if tol is None else tol


class SpectralFactorization(NamedTuple):
    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        k = len(self.singular_values)
        return (self.left[:, :k] * self.singular_values) @ self.right[:, :k].conj().T


def as_matrix(T, name: str = "matrix") -> np.ndarray:
    a = np.asarray(T, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be two-dimensional, got shape {a.shape}")
    if a.size == 0:
        raise InvalidInput(f"{name} is empty")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def as_vector(x, name: str = "vector") -> np.ndarray:
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def _require_square(a: np.ndarray, name: str = "matrix"):
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")


def adjoint(T) -> np.ndarray:
    return np.asarray(T).conj().T


def svd(T) -> SpectralFactorization:
    """Full SVD with ``left @ diag(s) @ right^*`` equal to ``T``."""
    a = as_matrix(T)
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    return SpectralFactorization(u, s, vh.conj().T)


def operator_norm(T) -> float:
    a = as_matrix(T)
    return float(np.linalg.svd(a, compute_uv=False)[0])


def invertibility_margin(T) -> float:
    """Smallest singular value of a square matrix."""
    a = as_matrix(T)
    _require_square(a)
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def hermitian_defect(T) -> float:
    a = as_matrix(T)
    _require_square(a)
    return float(np.linalg.norm(a - a.conj().T, 2))


def unitary_defect(U) -> float:
    """``||U^* U - I||`` in operator norm."""
    a = as_matrix(U)
    return float(np.linalg.norm(a.conj().T @ a - np.eye(a.shape[1]), 2))


def polar_decompose(T) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(W, P)`` with ``T = W P``, ``W`` unitary and ``P = (T^*T)^{1/2}``.

    Computed from the full SVD ``T = L diag(s) R^*`` as ``W = L R^*`` and
    ``P = R diag(s) R^*``. For rank-deficient ``T`` the full SVD pairs the left
    and right null spaces, so ``W`` is still unitary.
    """
    a = as_matrix(T)
    _require_square(a)
    left, s, right = svd(a)
    W = left @ right.conj().T
    P = (right * s) @ right.conj().T
    P = 0.5 * (P + P.conj().T)
    return W, P


def _hermitian_eigh(P, tol: TolerancePolicy):
    a = as_matrix(P)
    _require_square(a)
    scale = max(1.0, float(np.linalg.norm(a, 2)))
    defect = float(np.linalg.norm(a - a.conj().T, 2))
    if defect > tol.identity_tol * scale:
        raise NotHermitian(f"Hermitian defect {defect:.3e} exceeds tolerance")
    return np.linalg.eigh(0.5 * (a + a.conj().T)), scale


def psd_sqrt(P, tol: TolerancePolicy | None = None) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in ``[-identity_tol, 0)`` are clamped to 0."""
    tol = resolve_tol(tol)
    (w, v), scale = _hermitian_eigh(P, tol)
    if w.size and w[0] < -tol.identity_tol * scale:
        raise NotPSD(f"eigenvalue {w[0]:.3e} is negative beyond tolerance")
    root = np.sqrt(np.clip(w, 0.0, None))
    R = (v * root) @ v.conj().T
    return 0.5 * (R + R.conj().T)


def pd_inv_sqrt(S, tol: TolerancePolicy | None = None) -> np.ndarray:
    """``S^{-1/2}`` for Hermitian positive definite ``S``."""
    tol = resolve_tol(tol)
    (w, v), _ = _hermitian_eigh(S, tol)
    top = float(np.max(np.abs(w))) if w.size else 0.0
    if w[0] <= tol.rank_tol(top) or w[0] <= 0.0:
        raise SingularOperator(f"smallest eigenvalue {w[0]:.3e} is not positive")
    R = (v / np.sqrt(w)) @ v.conj().T
    return 0.5 * (R + R.conj().T)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary via QR of a complex Ginibre matrix."""
    if n < 1:
        raise InvalidInput("unitary size must be positive")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def orthonormal_complement(Q) -> np.ndarray:
    """Columns spanning the orthogonal complement of the column span of ``Q``.

    ``Q`` must be ``n x k`` with linearly independent columns; the result is
    ``n x (n - k)`` with orthonormal columns.
    """
    a = as_matrix(Q)
    n, k = a.shape
    if k > n:
        raise ShapeError(f"{k} columns cannot be independent in dimension {n}")
    full, _ = np.linalg.qr(a, mode="complete")
    return full[:, k:]

"""Frames and Riesz bases in C^d.

A :class:`Frame` is an ordered family of ``N`` vectors of length ``d``. Nothing
about the constructor assumes the family actually is a frame; that is what
:func:`frame_bounds` and :func:`is_riesz_basis` decide.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    InvalidInput,
    InvalidSubspace,
    NotAFrame,
    NotParseval,
    NotRieszBasis,
    NotRieszSequence,
    ShapeError,
)
from .linalg import (
    TolerancePolicy,
    as_matrix,
    as_vector,
    invertibility_margin,
    orthonormal_complement,
    resolve_tol,
)


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered family of vectors; ``vectors[n]`` is the n-th element (shape ``(N, dim)``)."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128)
        if v.ndim != 2:
            raise ShapeError(f"frame vectors must form an (N, dim) array, got shape {v.shape}")
        if v.shape[1] == 0:
            raise InvalidInput("frame dimension must be positive")
        if not np.all(np.isfinite(v)):
            raise InvalidInput("frame vectors have non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @classmethod
    def from_columns(cls, matrix) -> "Frame":
        """Frame whose n-th vector is column n of ``matrix``."""
        return cls(np.asarray(matrix).T)

    @classmethod
    def standard_basis(cls, dim: int) -> "Frame":
        return cls(np.eye(dim))

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    def __len__(self):
        return self.count

    def __getitem__(self, n):
        return self.vectors[n]

    def __iter__(self):
        return iter(self.vectors)

    def __repr__(self):
        return f"Frame(dim={self.dim}, count={self.count})"

    def to_manifest(self) -> dict:
        return {
            "dim": self.dim,
            "vectors": [[[float(z.real), float(z.imag)] for z in vec] for vec in self.vectors],
        }

    @classmethod
    def from_manifest(cls, doc: dict) -> "Frame":
        try:
            dim = int(doc["dim"])
            raw = doc["vectors"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed frame manifest: {exc}") from None
        if len(raw) == 0:
            return cls(np.zeros((0, dim)))
        arr = np.asarray(raw, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[1] != dim:
            raise ShapeError(f"manifest vectors have shape {arr.shape}, expected (N, {dim}, 2)")
        return cls(arr[..., 0] + 1j * arr[..., 1])

    def dumps(self) -> str:
        return json.dumps(self.to_manifest())

    @classmethod
    def loads(cls, text: str) -> "Frame":
        return cls.from_manifest(json.loads(text))


class FrameBounds(NamedTuple):
    lower: float
    upper: float


class DilationResult(NamedTuple):
    ambient_dim: int
    basis: Frame
    embedding_dim: int


def _as_frame(F) -> Frame:
    return F if isinstance(F, Frame) else Frame(F)


def synthesis_matrix(F: Frame) -> np.ndarray:
    """``dim x N`` matrix whose columns are the frame vectors."""
    F = _as_frame(F)
    if F.count == 0:
        raise InvalidInput("frame is empty")
    return F.vectors.T.copy()


def frame_operator(F: Frame) -> np.ndarray:
    phi = synthesis_matrix(F)
    S = phi @ phi.conj().T
    return 0.5 * (S + S.conj().T)


def _singular_values(F: Frame) -> np.ndarray:
    phi = synthesis_matrix(F)
    return np.linalg.svd(phi, compute_uv=False)


def frame_bounds(F: Frame, tol: TolerancePolicy | None = None) -> FrameBounds:
    """Optimal frame bounds: extreme eigenvalues of the frame operator.

    The eigenvalues are taken as squared singular values of the synthesis
    matrix, which keeps the small end accurate.
    """
    tol = resolve_tol(tol)
    F = _as_frame(F)
    s = _singular_values(F)
    if F.count < F.dim:
        raise NotAFrame(f"{F.count} vectors cannot span dimension {F.dim}")
    upper = float(s[0] ** 2)
    lower = float(s[F.dim - 1] ** 2)
    if lower <= tol.rank_tol(upper) or lower <= 0.0:
        raise NotAFrame(f"frame operator is singular (smallest eigenvalue {lower:.3e})")
    return FrameBounds(lower, upper)


def _thin_svd(F: Frame, tol: TolerancePolicy):
    frame_bounds(F, tol)
    phi = synthesis_matrix(F)
    return np.linalg.svd(phi, full_matrices=False)


def canonical_dual(F: Frame, tol: TolerancePolicy | None = None) -> Frame:
    """``{S^{-1} x_n}``, computed as ``U diag(1/s) V^*`` from the thin SVD of the synthesis matrix."""
    tol = resolve_tol(tol)
    u, s, vh = _thin_svd(_as_frame(F), tol)
    return Frame.from_columns((u / s) @ vh)


def parseval_normalize(F: Frame, tol: TolerancePolicy | None = None) -> Frame:
    """``{S^{-1/2} x_n}``; with ``phi = U diag(s) V^*`` this is simply ``U V^*``."""
    tol = resolve_tol(tol)
    u, _, vh = _thin_svd(_as_frame(F), tol)
    return Frame.from_columns(u @ vh)


def reconstruct(F: Frame, D: Frame, x) -> np.ndarray:
    """``sum_n <x, d_n> x_n``."""
    F, D = _as_frame(F), _as_frame(D)
    x = as_vector(x, "x")
    if F.dim != D.dim or F.count != D.count:
        raise ShapeError("frames must share dimension and count")
    if x.shape[0] != F.dim:
        raise ShapeError(f"x has length {x.shape[0]}, expected {F.dim}")
    coeffs = D.vectors.conj() @ x
    return F.vectors.T @ coeffs


def is_riesz_basis(F: Frame, tol: TolerancePolicy | None = None) -> tuple[bool, float]:
    """Return ``(verdict, margin)`` where margin is the smallest singular value of the synthesis matrix."""
    tol = resolve_tol(tol)
    F = _as_frame(F)
    if F.count != F.dim or F.count == 0:
        return False, 0.0
    s = _singular_values(F)
    margin = float(s[-1])
    return bool(margin > tol.rank_tol(float(s[0])) and margin > 0.0), margin


def dual_basis(E: Frame, tol: TolerancePolicy | None = None) -> Frame:
    """Biorthogonal basis: columns of the inverse adjoint of the synthesis matrix."""
    tol = resolve_tol(tol)
    E = _as_frame(E)
    ok, margin = is_riesz_basis(E, tol)
    if not ok:
        raise NotRieszBasis(f"not a Riesz basis (margin {margin:.3e})")
    phi = synthesis_matrix(E)
    return Frame.from_columns(np.linalg.inv(phi).conj().T)


def cross_gram(X: Frame, Y: Frame) -> np.ndarray:
    """Matrix ``G[m, n] = <x_m, y_n>`` (inner product linear in the first slot)."""
    X, Y = _as_frame(X), _as_frame(Y)
    return X.vectors @ Y.vectors.conj().T


def naimark_dilate(F: Frame, tol: TolerancePolicy | None = None) -> DilationResult:
    """Orthonormal basis of C^N whose first ``dim`` coordinates reproduce a Parseval frame.

    The analysis matrix ``C = phi^*`` (N x d) has orthonormal columns; completing
    it to a unitary ``[C | C_perp]`` and reading off conjugated rows gives basis
    vectors ``e_n`` with ``e_n[:d] = x_n``.
    """
    tol = resolve_tol(tol)
    F = _as_frame(F)
    if F.count < F.dim:
        raise NotParseval(f"{F.count} vectors cannot form a Parseval frame in dimension {F.dim}")
    defect = float(np.linalg.norm(frame_operator(F) - np.eye(F.dim), 2))
    if defect > tol.identity_tol:
        raise NotParseval(f"||S - I|| = {defect:.3e}; normalize the frame first")
    analysis = F.vectors.conj()
    completion = orthonormal_complement(analysis)
    full = np.hstack([analysis, completion])
    return DilationResult(F.count, Frame(full.conj()), F.dim)


def frame_from_operator(T, E: Frame) -> Frame:
    """``{T e_n}``."""
    E = _as_frame(E)
    T = as_matrix(T, "T")
    if T.shape != (E.dim, E.dim):
        raise ShapeError(f"operator shape {T.shape} does not act on dimension {E.dim}")
    return Frame(E.vectors @ T.T)


def riesz_perturbation_check(E: Frame, X: Frame, tol: TolerancePolicy | None = None) -> bool:
    """True when ``sum ||e_n - x_n||^2`` is below the lower Riesz bound of ``E``.

    A true result guarantees that ``X`` is a Riesz basis; false is inconclusive.
    """
    tol = resolve_tol(tol)
    E, X = _as_frame(E), _as_frame(X)
    if E.vectors.shape != X.vectors.shape:
        raise ShapeError("E and X must have the same shape")
    A = frame_bounds(E, tol).lower
    distance = float(np.sum(np.abs(E.vectors - X.vectors) ** 2))
    return distance < A


def _orthonormal_columns(S, tol: TolerancePolicy, dim: int) -> np.ndarray:
    Q = np.asarray(S, dtype=np.complex128)
    if Q.ndim == 1:
        Q = Q[None, :]
    if Q.ndim != 2 or Q.shape[1] != dim:
        raise ShapeError(f"subspace vectors must have length {dim}")
    Q = Q.T
    if Q.shape[1] == 0:
        return Q
    defect = float(np.linalg.norm(Q.conj().T @ Q - np.eye(Q.shape[1]), 2))
    if defect > tol.identity_tol:
        raise InvalidSubspace(f"spanning vectors are not orthonormal (defect {defect:.3e})")
    return Q


def projected_energy_bound(F: Frame, S, tol: TolerancePolicy | None = None) -> tuple[float, float]:
    """``(sum_n ||P_S x_n||^2, B * dim S)`` for an orthonormal spanning list ``S``."""
    tol = resolve_tol(tol)
    F = _as_frame(F)
    Q = _orthonormal_columns(S, tol, F.dim)
    B = frame_bounds(F, tol).upper
    coords = Q.conj().T @ F.vectors.T
    energy = float(np.sum(np.abs(coords) ** 2))
    return energy, B * Q.shape[1]


def extend_riesz_sequence(Z: Frame, tol: TolerancePolicy | None = None) -> Frame:
    """Complete a Riesz sequence to a Riesz basis.

    The result lists an orthonormal basis of ``span(Z)^perp`` first and then
    the vectors of ``Z`` unchanged.
    """
    tol = resolve_tol(tol)
    Z = _as_frame(Z)
    m, d = Z.count, Z.dim
    if m == 0:
        return Frame.standard_basis(d)
    if m >= d:
        raise NotRieszSequence(f"{m} vectors do not span a proper subspace of dimension {d}")
    gram = Z.vectors.conj() @ Z.vectors.T
    g_norm = float(np.linalg.norm(gram, 2))
    margin = invertibility_margin(gram)
    if margin <= tol.rank_tol(g_norm) or margin <= 0.0:
        raise NotRieszSequence(f"vectors are linearly dependent (Gram margin {margin:.3e})")
    complement = orthonormal_complement(Z.vectors.T)
    return Frame(np.vstack([complement.T, Z.vectors]))

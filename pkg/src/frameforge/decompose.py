"""Operator decompositions into unitaries and topological isomorphisms.

* :func:`unitary_split` writes a contractive isomorphism as the average of two
  unitaries.
* :func:`casazza_decompose` writes an arbitrary square ``T`` as ``a (U + S)``
  with ``U`` unitary and ``S`` invertible.
* :func:`bessel_to_riesz_pair` applies the latter to a synthesis operator to
  split a Bessel family into two Riesz bases.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidEpsilon, NormTooLarge, NotIsomorphism, ShapeError
from .frames import Frame, synthesis_matrix
from .linalg import (
    TolerancePolicy,
    as_matrix,
    operator_norm,
    polar_decompose,
    psd_sqrt,
    resolve_tol,
)

DEFAULT_EPSILON = 0.5


class UnitarySplit(NamedTuple):
    U: np.ndarray
    V: np.ndarray


class CasazzaDecomposition(NamedTuple):
    a: float
    U: np.ndarray
    S: np.ndarray
    epsilon: float

    def operator(self) -> np.ndarray:
        return self.a * (self.U + self.S)


class RieszPair(NamedTuple):
    Y: Frame
    Z: Frame
    decomposition: CasazzaDecomposition


def unitary_split(T, tol: TolerancePolicy | None = None) -> UnitarySplit:
    """Unitaries ``U, V`` with ``T = (U + V) / 2`` for an isomorphism with ``||T|| <= 1``.

    Steps: polar ``T = W P``; ``Q = (I - P^2)^{1/2}``; ``V' = P + iQ``;
    return ``(W V', W V'^*)``. Norms in ``(1, 1 + identity_tol]`` are treated as
    rounding and rescaled to exactly 1.
    """
    tol = resolve_tol(tol)
    T = as_matrix(T, "T")
    if T.shape[0] != T.shape[1]:
        raise ShapeError(f"T must be square, got shape {T.shape}")
    norm = operator_norm(T)
    if norm > 1.0 + tol.identity_tol:
        raise NormTooLarge(f"||T|| = {norm!r} exceeds 1")
    if norm > 1.0:
        T = T / norm
    W, P = polar_decompose(T)
    smallest = float(np.linalg.eigvalsh(P)[0])
    if smallest <= tol.rank_tol(max(norm, 1.0)) or smallest <= 0.0:
        raise NotIsomorphism(f"T is singular (margin {smallest:.3e})")
    eye = np.eye(T.shape[0])
    Q = psd_sqrt(eye - P @ P, tol)
    Vp = P + 1j * Q
    return UnitarySplit(W @ Vp, W @ Vp.conj().T)


def casazza_decompose(T, epsilon: float = DEFAULT_EPSILON,
                      tol: TolerancePolicy | None = None) -> CasazzaDecomposition:
    """Write ``T = a (U + S)`` with ``a >= 0``, ``U`` unitary and ``S`` invertible.

    With ``W = 3/4 I + (1 - eps)/4 * T/||T||`` split as ``(U + V)/2``, the result
    is ``a = 2||T||/(1 - eps)`` and ``S = V - 3/2 I``. ``T = 0`` returns
    ``a = 0, U = S = I``.
    """
    tol = resolve_tol(tol)
    if not (0.0 < epsilon < 1.0):
        raise InvalidEpsilon(f"epsilon must lie in (0, 1), got {epsilon!r}")
    T = as_matrix(T, "T")
    if T.shape[0] != T.shape[1]:
        raise ShapeError(f"T must be square, got shape {T.shape}")
    eye = np.eye(T.shape[0], dtype=np.complex128)
    norm = operator_norm(T)
    if norm == 0.0:
        return CasazzaDecomposition(0.0, eye, eye.copy(), epsilon)
    W = 0.75 * eye + ((1.0 - epsilon) / 4.0) * (T / norm)
    U, V = unitary_split(W, tol)
    a = 2.0 * norm / (1.0 - epsilon)
    return CasazzaDecomposition(a, U, V - 1.5 * eye, epsilon)


def bessel_to_riesz_pair(F: Frame, epsilon: float = DEFAULT_EPSILON,
                         tol: TolerancePolicy | None = None) -> RieszPair:
    """Split a square family ``{x_n}`` into Riesz bases with ``x_n = y_n + z_n``.

    Uses the standard basis, so ``T`` is the synthesis matrix and
    ``y_n = a U e_n``, ``z_n = a S e_n``. An all-zero family gets
    ``a = 1/2, U = I, S = -I``.
    """
    if not isinstance(F, Frame):
        F = Frame(F)
    if F.count != F.dim:
        raise ShapeError(f"need as many vectors as the dimension, got {F.count} in dimension {F.dim}")
    T = synthesis_matrix(F)
    if not np.any(T):
        eye = np.eye(F.dim, dtype=np.complex128)
        dec = CasazzaDecomposition(0.5, eye, -eye, epsilon)
    else:
        dec = casazza_decompose(T, epsilon, tol)
    Y = Frame.from_columns(dec.a * dec.U)
    Z = Frame.from_columns(dec.a * dec.S)
    return RieszPair(Y, Z, dec)

"""Generators for the explicit frame and vector families, truncated to finite budgets.

Every generator returns a :class:`TruncatedFamily` carrying the frame, the
parameters that produced it, and the identities that hold exactly at that
truncation (each already checked).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple

import numpy as np
from scipy.special import zeta

from .decompose import DEFAULT_EPSILON, bessel_to_riesz_pair
from .ell1 import Ell1Report, ell1_norms, ell1_partial_sums
from .errors import BudgetTooLarge, InvalidInput, InvalidP, InvalidSubspace, ShapeError, ZeroVector
from .frames import Frame, frame_bounds, frame_operator, is_riesz_basis
from .linalg import (
    TolerancePolicy,
    as_vector,
    haar_unitary,
    orthonormal_complement,
    resolve_tol,
)

#: sqrt(6)/pi, so that sum_j (HARMONIC_SCALE / j)^2 = 1
HARMONIC_SCALE = math.sqrt(6.0) / math.pi

MAX_P_CONVERGENT_VECTORS = 10**7
MAX_SQUARE_MODEL = 2000

FAMILIES = ("empty_hf", "nbb_empty_hf", "p_convergent", "harmonic_vector",
            "divergent_basis", "intersection_pair")


class IdentityCheck(NamedTuple):
    measured: float
    bound: float
    passed: bool
    relation: str = "<="


@dataclass
class FrameFamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInput(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, doc: dict) -> "FrameFamilySpec":
        try:
            return cls(doc["family"], dict(doc.get("params", {})), int(doc.get("seed", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed family spec: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "FrameFamilySpec":
        return cls.from_dict(json.loads(text))


@dataclass(eq=False)
class TruncatedFamily:
    frame: Frame
    family_meta: FrameFamilySpec
    exact_identities: dict[str, IdentityCheck] = field(default_factory=dict)
    stream: Callable[[], Iterator[float]] | None = None
    extras: dict = field(default_factory=dict)

    @property
    def all_identities_hold(self) -> bool:
        return all(c.passed for c in self.exact_identities.values())


def _leq(measured: float, bound: float) -> IdentityCheck:
    return IdentityCheck(float(measured), float(bound), bool(measured <= bound))


def harmonic_coefficients(count: int, scale: float = 1.0) -> np.ndarray:
    """``scale * sqrt(6)/pi / j`` for ``j = 1..count``."""
    return scale * HARMONIC_SCALE / np.arange(1, count + 1, dtype=float)


def harmonic_stream(scale: float = 1.0) -> Iterator[float]:
    """Infinite stream ``scale * sqrt(6)/pi / n``."""
    c = scale * HARMONIC_SCALE
    return (c / n for n in itertools.count(1))


def select_k(p: float) -> int:
    """Least integer strictly greater than ``(2 - p) / (4 (p - 1))``."""
    if not (1.0 < p < 2.0):
        raise InvalidP(f"p must lie in (1, 2), got {p!r}")
    return math.floor((2.0 - p) / (4.0 * (p - 1.0))) + 1


def p_convergence_exponent(p: float, k: int) -> float:
    return k * 4.0 * (p - 1.0) / (2.0 - p)


def p_convergence_bound(p: float, k: int) -> float:
    """``zeta(4k(p-1)/(2-p))^{(2-p)/2}``: bound on ``sum ||<x,x_n> x_n||^p`` for unit ``x``."""
    s = p_convergence_exponent(p, k)
    if s <= 1.0:
        return math.inf
    return float(zeta(s, 1)) ** ((2.0 - p) / 2.0)


def p_term_sum(F: Frame, x, p: float) -> float:
    """``sum_n ||<x, x_n> x_n||^p``."""
    x = as_vector(x, "x")
    coeffs = np.abs(F.vectors.conj() @ x)
    norms = np.linalg.norm(F.vectors, axis=1)
    return float(np.sum((coeffs * norms) ** p))


def p_convergent_frame(p: float, n_max: int, k: int | None = None,
                       tol: TolerancePolicy | None = None) -> TruncatedFamily:
    """Blocks of ``n^{2k}`` copies of ``n^{-k} e_n`` for ``n <= n_max``; Parseval in ``C^{n_max}``."""
    tol = resolve_tol(tol)
    if not (1.0 < p < 2.0):
        raise InvalidP(f"p must lie in (1, 2), got {p!r}")
    if k is None:
        k = select_k(p)
    if k < 1 or k <= (2.0 - p) / (4.0 * (p - 1.0)):
        raise InvalidP(f"k = {k} is too small for p = {p}")
    if n_max < 1:
        raise InvalidInput("n_max must be at least 1")
    reps = [n ** (2 * k) for n in range(1, n_max + 1)]
    total = sum(reps)
    if total > MAX_P_CONVERGENT_VECTORS:
        raise BudgetTooLarge(f"{total} vectors exceed the limit of {MAX_P_CONVERGENT_VECTORS}")

    index = np.repeat(np.arange(n_max), reps)
    vectors = np.zeros((total, n_max), dtype=np.complex128)
    vectors[np.arange(total), index] = (index + 1.0) ** (-k)
    frame = Frame(vectors)

    n = np.arange(1, n_max + 1, dtype=float)
    norms = np.linalg.norm(frame.vectors, axis=1)
    identities = {
        "parseval": _leq(np.linalg.norm(frame_operator(frame) - np.eye(n_max), 2), tol.identity_tol),
        "trace": _leq(abs(float(np.sum(norms**2)) - n_max), tol.identity_tol),
        "p_sum_bound": _leq(abs(float(np.sum(norms ** (2 * p))) - float(np.sum(n ** (-2 * k * (p - 1))))),
                            tol.identity_tol),
    }
    spec = FrameFamilySpec("p_convergent", {"p": p, "n_max": n_max, "k": k})
    return TruncatedFamily(frame, spec, identities,
                           extras={"k": k, "bound": p_convergence_bound(p, k)})


def tight_constant(j_max: int) -> float:
    """``(6/pi^2) * sum_{j <= j_max} j^{-2}``."""
    return float(np.sum(harmonic_coefficients(j_max) ** 2))


def _empty_hf_vectors(n_max: int, j_max: int) -> np.ndarray:
    coeffs = harmonic_coefficients(j_max)
    vectors = np.zeros((n_max * j_max, n_max), dtype=np.complex128)
    for n in range(n_max):
        vectors[n * j_max:(n + 1) * j_max, n] = coeffs
    return vectors


def empty_hf_frame(n_max: int, j_max: int, tol: TolerancePolicy | None = None) -> TruncatedFamily:
    """Vectors ``a_j e_n`` with ``a_j = sqrt(6)/pi / j``, enumerated by ``n`` then ``j``.

    The truncation is a tight frame with constant :func:`tight_constant`; the
    stream attached is ``|<e_n, a_j e_n>| = a_j``, the same for every ``n``.
    """
    tol = resolve_tol(tol)
    if n_max < 1 or j_max < 1:
        raise InvalidInput("budgets must be at least 1")
    frame = Frame(_empty_hf_vectors(n_max, j_max))
    c = tight_constant(j_max)
    defect = float(np.linalg.norm(frame_operator(frame) - c * np.eye(n_max), 2))
    identities = {"tight_frame(c)": _leq(defect, tol.identity_tol)}
    spec = FrameFamilySpec("empty_hf", {"n_max": n_max, "j_max": j_max})
    return TruncatedFamily(frame, spec, identities, stream=harmonic_stream,
                           extras={"tight_constant": c})


def square_model(F: Frame) -> Frame:
    """Pad an ``N``-vector family in ``C^d`` (``N >= d``) with zeros to live in ``C^N``."""
    if F.count < F.dim:
        raise ShapeError("square model needs at least as many vectors as the dimension")
    pad = np.zeros((F.count, F.count - F.dim), dtype=np.complex128)
    return Frame(np.hstack([F.vectors, pad]))


def _empty_hf_pair(n_max: int, j_max: int, epsilon: float, tol: TolerancePolicy):
    total = n_max * j_max
    if total > MAX_SQUARE_MODEL:
        raise BudgetTooLarge(f"square model of size {total} exceeds {MAX_SQUARE_MODEL}")
    base = empty_hf_frame(n_max, j_max, tol)
    model = square_model(base.frame)
    return base, model, bessel_to_riesz_pair(model, epsilon, tol)


def _unit_probes(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def nbb_empty_hf_frame(n_max: int, j_max: int, seed: int = 0, n_probes: int = 50,
                       epsilon: float = DEFAULT_EPSILON,
                       tol: TolerancePolicy | None = None) -> TruncatedFamily:
    """Union ``{y_n} u {z_n}`` of the Riesz pair splitting the square model of :func:`empty_hf_frame`."""
    tol = resolve_tol(tol)
    _, model, pair = _empty_hf_pair(n_max, j_max, epsilon, tol)
    union = Frame(np.vstack([pair.Y.vectors, pair.Z.vectors]))
    min_norm = float(np.linalg.norm(union.vectors, axis=1).min())
    lower = frame_bounds(union, tol).lower

    probes = _unit_probes(np.random.default_rng(seed), n_probes, model.dim)
    lhs = ell1_norms(probes, model)
    rhs = ell1_norms(probes, union)
    identities = {
        "norm_bounded_below": IdentityCheck(min_norm, 0.0, min_norm > 0.0, ">"),
        "union_frame": IdentityCheck(lower, 0.0, lower > 0.0, ">"),
        "triangle": _leq(float(np.max(lhs - rhs)), tol.identity_tol),
    }
    spec = FrameFamilySpec("nbb_empty_hf", {"n_max": n_max, "j_max": j_max, "epsilon": epsilon}, seed)
    return TruncatedFamily(union, spec, identities,
                           extras={"pair": pair, "model": model, "min_norm": min_norm})


def harmonic_vector(n_max: int) -> np.ndarray:
    """Truncation of ``y0 = sqrt(6)/pi * sum_n e_n / n`` to ``C^{n_max}``."""
    if n_max < 1:
        raise InvalidInput("n_max must be at least 1")
    return harmonic_coefficients(n_max).astype(np.complex128)


def adapted_orthonormal_basis(y) -> Frame:
    """Orthonormal basis whose first vector is ``y / ||y||``."""
    y = as_vector(y, "y")
    norm = float(np.linalg.norm(y))
    if norm == 0.0:
        raise ZeroVector("cannot adapt a basis to the zero vector")
    u = y / norm
    rest = orthonormal_complement(u[:, None])
    return Frame(np.vstack([u[None, :], rest.T]))


def divergent_basis_for_vector(x, budget: int, tol: TolerancePolicy | None = None) -> TruncatedFamily:
    """Riesz basis ``{L e_n}`` of ``C^budget`` with ``|<x, L e_n>| = ||x|| sqrt(6)/pi / n``.

    ``{a_n}`` (``a_n = sqrt(6)/pi / n``) is a frame for ``span{x}`` in the
    coordinate ``c -> c * x/||x||``. Completing the column ``a`` with an
    orthonormal basis of its complement gives an invertible matrix whose rows
    ``e_n`` satisfy ``e_n[0] = a_n``; ``L`` sends the first coordinate axis to
    ``x/||x||`` and the rest to an orthonormal basis of ``x^perp``, so it is
    unitary and maps the coordinate image of ``x`` back to ``x``.
    """
    tol = resolve_tol(tol)
    x = as_vector(x, "x")
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        raise ZeroVector("x must be nonzero")
    if budget < x.shape[0]:
        raise ShapeError(f"budget {budget} is smaller than the length of x ({x.shape[0]})")
    padded = np.zeros(budget, dtype=np.complex128)
    padded[: x.shape[0]] = x

    a = harmonic_coefficients(budget).astype(np.complex128)
    cols = np.hstack([a[:, None], orthonormal_complement(a[:, None])])
    coordinate_basis = cols.conj()  # rows e_n; e_n[0] = a_n
    L = adapted_orthonormal_basis(padded).vectors.T
    basis = Frame(coordinate_basis @ L.T)

    embedded = np.zeros(budget, dtype=np.complex128)
    embedded[0] = norm
    fix_defect = float(np.linalg.norm(L @ embedded - padded))
    ok, margin = is_riesz_basis(basis, tol)
    stream_defect = float(np.max(np.abs(np.abs(basis.vectors.conj() @ padded) - norm * a.real)))
    identities = {
        "riesz_basis": IdentityCheck(margin, tol.rank_tol(1.0), ok, ">"),
        "fixes_x": _leq(fix_defect, tol.identity_tol),
        "coefficient_stream": _leq(stream_defect, 1e-12 * max(1.0, norm)),
    }
    spec = FrameFamilySpec("divergent_basis", {"budget": budget})
    return TruncatedFamily(basis, spec, identities,
                           stream=lambda: harmonic_stream(norm),
                           extras={"L": L, "x": padded, "embedded_x": embedded})


class IntersectionPair(NamedTuple):
    E: Frame
    R: Frame
    diagnostics: dict


def _diagnostic_budgets(limit: int) -> list[int]:
    lo = min(10, limit)
    ladder = np.unique(np.round(np.geomspace(lo, limit, 6)).astype(int))
    return [int(b) for b in ladder]


def intersection_trivial_pair(n_max: int, j_max: int, seed: int = 0, n_probes: int = 50,
                              epsilon: float = DEFAULT_EPSILON,
                              tol: TolerancePolicy | None = None) -> IntersectionPair:
    """Riesz bases ``E, R`` of the square model with ``e_n + r_n = x_n`` for the empty_hf family.

    Diagnostics hold the triangle display ``||x||_{1,F} <= ||x||_{1,E} + ||x||_{1,R}``
    on random unit probes and, for ``x = e_1``, the growth reports of the three
    coefficient streams and of the combined ``E + R`` stream.
    """
    tol = resolve_tol(tol)
    _, model, pair = _empty_hf_pair(n_max, j_max, epsilon, tol)
    E, R = pair.Y, pair.Z
    sum_defect = float(np.max(np.linalg.norm(E.vectors + R.vectors - model.vectors, axis=1)))

    probes = _unit_probes(np.random.default_rng(seed), n_probes, model.dim)
    lhs = ell1_norms(probes, model)
    rhs = ell1_norms(probes, E) + ell1_norms(probes, R)

    e1 = np.zeros(model.dim, dtype=np.complex128)
    e1[0] = 1.0
    budgets = _diagnostic_budgets(j_max)
    streams = {
        "F": np.abs(model.vectors.conj() @ e1),
        "E": np.abs(E.vectors.conj() @ e1),
        "R": np.abs(R.vectors.conj() @ e1),
    }
    streams["E+R"] = streams["E"] + streams["R"]
    reports: dict[str, Ell1Report] = {k: ell1_partial_sums(v, budgets) for k, v in streams.items()}
    dominated = all(
        f <= s + tol.identity_tol
        for f, s in zip(reports["F"].partial_sums, reports["E+R"].partial_sums)
    )
    diagnostics = {
        "sum_defect": sum_defect,
        "triangle_worst_slack": float(np.min(rhs - lhs)),
        "triangle_holds": bool(np.all(lhs <= rhs + tol.identity_tol)),
        "reports": reports,
        "partial_sums_dominated": dominated,
        "riesz": {"E": is_riesz_basis(E, tol), "R": is_riesz_basis(R, tol)},
        "pair": pair,
    }
    return IntersectionPair(E, R, diagnostics)


def fixing_unitary(S_basis, dim_total: int, seed: int = 0,
                   tol: TolerancePolicy | None = None) -> np.ndarray:
    """Unitary that is the identity on ``span(S_basis)`` and Haar-random on its complement."""
    tol = resolve_tol(tol)
    S = np.asarray(S_basis, dtype=np.complex128)
    if S.ndim == 1:
        S = S[None, :]
    if S.shape[1] != dim_total:
        raise ShapeError(f"subspace vectors must have length {dim_total}")
    Q = S.T
    k = Q.shape[1]
    if k > dim_total:
        raise InvalidSubspace("more spanning vectors than the dimension")
    defect = float(np.linalg.norm(Q.conj().T @ Q - np.eye(k), 2)) if k else 0.0
    if defect > tol.identity_tol:
        raise InvalidSubspace(f"spanning vectors are not orthonormal (defect {defect:.3e})")
    T = Q @ Q.conj().T
    if k < dim_total:
        C = orthonormal_complement(Q) if k else np.eye(dim_total, dtype=np.complex128)
        U = haar_unitary(dim_total - k, np.random.default_rng(seed))
        T = T + C @ U @ C.conj().T
    return T


def build_family(spec: FrameFamilySpec, tol: TolerancePolicy | None = None):
    """Dispatch a :class:`FrameFamilySpec` to its generator."""
    p = spec.params
    try:
        if spec.family == "p_convergent":
            return p_convergent_frame(float(p["p"]), int(p["n_max"]),
                                      None if p.get("k") is None else int(p["k"]), tol)
        if spec.family == "empty_hf":
            return empty_hf_frame(int(p["n_max"]), int(p["j_max"]), tol)
        if spec.family == "nbb_empty_hf":
            return nbb_empty_hf_frame(int(p["n_max"]), int(p["j_max"]), seed=spec.seed,
                                      epsilon=float(p.get("epsilon", DEFAULT_EPSILON)), tol=tol)
        if spec.family == "harmonic_vector":
            return harmonic_vector(int(p["n_max"]))
        if spec.family == "divergent_basis":
            budget = int(p["budget"])
            if "x" in p:
                arr = np.asarray(p["x"], dtype=float)
                if arr.ndim == 2 and arr.shape[1] == 2:
                    x = arr[:, 0] + 1j * arr[:, 1]
                elif arr.ndim == 1:
                    x = arr
                else:
                    raise InvalidInput("x must be a list of numbers or [re, im] pairs")
            else:
                x = np.zeros(budget)
                x[0] = 1.0
            return divergent_basis_for_vector(x, budget, tol)
        if spec.family == "intersection_pair":
            return intersection_trivial_pair(int(p["n_max"]), int(p["j_max"]), seed=spec.seed,
                                             epsilon=float(p.get("epsilon", DEFAULT_EPSILON)), tol=tol)
    except KeyError as exc:
        raise InvalidInput(f"family {spec.family!r} is missing parameter {exc}") from None
    raise InvalidInput(f"unknown family {spec.family!r}")

"""l1-norms with respect to frames, boundedness certificates, and growth diagnostics.

The l1-norm of ``x`` with respect to a family ``{f_n}`` is ``sum_n |<x, f_n>|``.
Divergence of such sums can only be observed through partial sums, so
:func:`ell1_partial_sums` classifies the growth of a coefficient stream instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable, NamedTuple

import numpy as np

from .errors import InvalidBudgets, NotRieszBasis, ShapeError
from .frames import Frame, dual_basis, frame_bounds, is_riesz_basis
from .linalg import TolerancePolicy, as_vector, resolve_tol

DEFAULT_BUDGETS = (10**2, 10**3, 10**4, 10**5, 10**6)

# classification thresholds
LOG_ALPHA_MIN = 0.05
POWER_SLOPE_MIN = 0.1
R2_MIN = 0.98
BOUNDED_REL_INCREMENT = 1e-6
GEOMETRIC_RATIO_MAX = 0.5

BOUNDED = "bounded"
LOG_DIVERGENT = "log-divergent"
POWER_DIVERGENT = "power-divergent"
INCONCLUSIVE = "inconclusive"


@dataclass(eq=False)
class PointSet:
    """Finite set of points in C^dim, stored as rows."""

    points: np.ndarray
    dim: int = field(default=-1)

    def __post_init__(self):
        p = np.asarray(self.points, dtype=np.complex128)
        if p.ndim == 1:
            p = p[None, :] if p.size else p.reshape(0, max(self.dim, 0))
        if p.ndim != 2:
            raise ShapeError(f"points must form an (m, dim) array, got shape {p.shape}")
        if self.dim < 0:
            self.dim = p.shape[1]
        elif p.shape[1] != self.dim:
            raise ShapeError(f"points have length {p.shape[1]}, expected {self.dim}")
        if not np.all(np.isfinite(p)):
            raise ShapeError("points have non-finite entries")
        self.points = p

    def __len__(self):
        return self.points.shape[0]


def _as_points(M, dim: int) -> np.ndarray:
    pts = M.points if isinstance(M, PointSet) else np.asarray(M, dtype=np.complex128)
    if pts.size == 0:
        return np.zeros((0, dim), dtype=np.complex128)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[1] != dim:
        raise ShapeError(f"points have length {pts.shape[1]}, expected {dim}")
    return pts


def _as_frame(F) -> Frame:
    return F if isinstance(F, Frame) else Frame(F)


def ell1_norm(x, F: Frame) -> float:
    F = _as_frame(F)
    x = as_vector(x, "x")
    if x.shape[0] != F.dim:
        raise ShapeError(f"x has length {x.shape[0]}, expected {F.dim}")
    return float(np.sum(np.abs(F.vectors.conj() @ x)))


def ell1_norms(M, F: Frame) -> np.ndarray:
    """Row-wise :func:`ell1_norm` for every point of ``M``."""
    F = _as_frame(F)
    pts = _as_points(M, F.dim)
    return np.sum(np.abs(pts @ F.vectors.conj().T), axis=1)


def set_ell1_bound(M, F: Frame) -> float:
    """Max l1-norm over the points of ``M``; 0 for an empty set.

    For a sample of an infinite set this is only a lower bound of the true sup.
    """
    norms = ell1_norms(M, F)
    return float(norms.max()) if norms.size else 0.0


def norm_bound_necessity(M, F: Frame, tol: TolerancePolicy | None = None) -> tuple[float, float]:
    """Check ``sqrt(A) ||x|| <= ||x||_{1,F}`` on every point.

    Returns ``(sup ||x||, worst slack)`` where slack is the right side minus the
    left; the inequality holds when the slack is ``>= -identity_tol``.
    """
    tol = resolve_tol(tol)
    F = _as_frame(F)
    A = frame_bounds(F, tol).lower
    pts = _as_points(M, F.dim)
    if pts.shape[0] == 0:
        return 0.0, math.inf
    norms = np.linalg.norm(pts, axis=1)
    slack = ell1_norms(pts, F) - math.sqrt(A) * norms
    return float(norms.max()), float(slack.min())


def finite_dim_certificate(M, tol: TolerancePolicy | None = None) -> tuple[float, Frame]:
    """Orthonormal basis adapted to ``span(M)`` and the bound ``sqrt(k) * max ||x||``.

    The first ``k = dim span(M)`` basis vectors span ``M``, so every point has at
    most ``k`` nonzero coefficients.
    """
    tol = resolve_tol(tol)
    if isinstance(M, PointSet):
        pts, dim = M.points, M.dim
    else:
        pts = np.atleast_2d(np.asarray(M, dtype=np.complex128))
        dim = pts.shape[1]
    u, s, _ = np.linalg.svd(pts.T, full_matrices=True)
    top = float(s[0]) if s.size else 0.0
    k = int(np.sum(s > max(tol.rank_tol(top), 0.0))) if top > 0 else 0
    radius = float(np.linalg.norm(pts, axis=1).max()) if pts.shape[0] else 0.0
    return math.sqrt(k) * radius, Frame.from_columns(u[:, :dim])


def sphere_ell1_worst_case(d: int) -> tuple[float, np.ndarray]:
    """Sup of the standard-basis l1-norm over the unit sphere of C^d, with its maximizer."""
    if d < 1:
        raise ShapeError("dimension must be at least 1")
    witness = np.full(d, 1.0 / math.sqrt(d), dtype=np.complex128)
    return ell1_norm(witness, Frame.standard_basis(d)), witness


class LinearFit(NamedTuple):
    alpha: float
    beta: float
    r_squared: float


@dataclass
class Ell1Report:
    budgets: list[int]
    partial_sums: list[float]
    classification: str
    fit: LinearFit
    power_fit: LinearFit | None = None

    def to_dict(self) -> dict:
        return {
            "budgets": list(self.budgets),
            "partial_sums": list(self.partial_sums),
            "classification": self.classification,
            "fit": {"alpha": self.fit.alpha, "beta": self.fit.beta, "r2": self.fit.r_squared},
        }

    def to_csv(self) -> str:
        lines = ["budget,partial_sum"]
        lines += [f"{b},{s!r}" for b, s in zip(self.budgets, self.partial_sums)]
        return "\n".join(lines) + "\n"


def _linear_fit(x: np.ndarray, y: np.ndarray) -> LinearFit:
    if x.size < 2:
        return LinearFit(0.0, float(y[-1]) if y.size else 0.0, 0.0)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return LinearFit(float(slope), float(intercept), r2)


def _accumulate(stream: Iterable[float], budgets: list[int]) -> list[float]:
    if isinstance(stream, np.ndarray):
        terms = np.abs(np.asarray(stream, dtype=float).ravel())
        csum = np.concatenate([[0.0], np.cumsum(terms)])
        return [float(csum[min(b, terms.size)]) for b in budgets]
    it = iter(stream)
    total, seen, sums = 0.0, 0, []
    for b in budgets:
        chunk = np.fromiter(islice(it, b - seen), dtype=float)
        total += float(np.abs(chunk).sum())
        seen = b
        sums.append(total)
    return sums


def classify_growth(budgets, partial_sums) -> tuple[str, LinearFit, LinearFit | None]:
    """Classify partial sums as bounded, log-divergent, power-divergent or inconclusive.

    * bounded: the last three increments are at most ``1e-6 * S(N)``, or they
      shrink geometrically (each ratio ``<= 1/2``, i.e. summable tail);
    * power-divergent: log-log slope ``> 0.1`` with ``r^2 > 0.98`` and a better
      fit than the logarithmic model;
    * log-divergent: ``S ~ alpha ln N + beta`` with ``alpha > 0.05``, ``r^2 > 0.98``.

    Fits use the upper half of the budgets.
    """
    n = np.asarray(budgets, dtype=float)
    s = np.asarray(partial_sums, dtype=float)
    upper = slice(len(n) // 2, None)
    log_fit = _linear_fit(np.log(n[upper]), s[upper])
    power_fit = None
    if np.all(s[upper] > 0):
        power_fit = _linear_fit(np.log(n[upper]), np.log(s[upper]))

    inc = np.diff(s)[-3:]
    last = s[-1] if s.size else 0.0
    if inc.size == 0 or np.all(inc <= BOUNDED_REL_INCREMENT * last):
        return BOUNDED, log_fit, power_fit
    if inc.size >= 2 and np.all(inc[1:] <= GEOMETRIC_RATIO_MAX * inc[:-1]):
        return BOUNDED, log_fit, power_fit
    if (power_fit is not None and power_fit.alpha > POWER_SLOPE_MIN
            and power_fit.r_squared > R2_MIN and power_fit.r_squared > log_fit.r_squared):
        return POWER_DIVERGENT, log_fit, power_fit
    if log_fit.alpha > LOG_ALPHA_MIN and log_fit.r_squared > R2_MIN:
        return LOG_DIVERGENT, log_fit, power_fit
    return INCONCLUSIVE, log_fit, power_fit


def ell1_partial_sums(coeff_stream: Iterable[float], budgets=DEFAULT_BUDGETS) -> Ell1Report:
    """Partial sums of ``|c_n|`` at each budget plus a growth classification.

    A stream that ends early contributes zeros past its end.
    """
    budgets = [int(b) for b in budgets]
    if not budgets or budgets[0] < 1 or any(b2 <= b1 for b1, b2 in zip(budgets, budgets[1:])):
        raise InvalidBudgets(f"budgets must be positive and strictly increasing: {budgets}")
    sums = _accumulate(coeff_stream, budgets)
    label, fit, power_fit = classify_growth(budgets, sums)
    return Ell1Report(budgets, sums, label, fit, power_fit)


def closure_stability_check(M, limit_points, F: Frame, slack: float | None = None,
                            tol: TolerancePolicy | None = None) -> bool:
    """Check that limit points of ``M`` do not exceed the l1-sup of ``M``.

    Exact only for true closures; with sampled approximants pass ``slack`` of the
    order of the approximation error (defaults to ``identity_tol``).
    """
    tol = resolve_tol(tol)
    F = _as_frame(F)
    allowance = tol.identity_tol if slack is None else slack
    sup = set_ell1_bound(M, F)
    limits = ell1_norms(limit_points, F)
    return bool(np.all(limits <= sup + allowance))


class UnionSufficiency(NamedTuple):
    ok_e: bool
    ok_r: bool
    constant_e: float
    constant_r: float

    @property
    def constant(self) -> float:
        return max(self.constant_e, self.constant_r)


def tonelli_constant(E: Frame, G: Frame, tol: TolerancePolicy | None = None) -> float:
    """``max_k ||e~_k||_{1,G}`` over the dual basis of ``E``."""
    return set_ell1_bound(dual_basis(E, tol).vectors, G)


def union_sufficiency_check(E: Frame, R: Frame, G: Frame, n_probes: int = 50, seed: int = 0,
                            tol: TolerancePolicy | None = None) -> UnionSufficiency:
    """Constants ``R_E, R_R`` with ``||x||_{1,G} <= R_E ||x||_{1,E}`` (and likewise for R).

    Each inequality is probed on ``n_probes`` random unit vectors.
    """
    tol = resolve_tol(tol)
    E, R, G = _as_frame(E), _as_frame(R), _as_frame(G)
    if not is_riesz_basis(G, tol)[0]:
        raise NotRieszBasis("G is not a Riesz basis")
    c_e = tonelli_constant(E, G, tol)
    c_r = tonelli_constant(R, G, tol)
    rng = np.random.default_rng(seed)
    probes = rng.standard_normal((n_probes, G.dim)) + 1j * rng.standard_normal((n_probes, G.dim))
    probes /= np.linalg.norm(probes, axis=1, keepdims=True)
    lhs = ell1_norms(probes, G)

    def holds(basis, c):
        rhs = c * ell1_norms(probes, basis)
        return bool(np.all(lhs <= rhs + tol.identity_tol))

    return UnionSufficiency(holds(E, c_e), holds(R, c_r), c_e, c_r)


def embed_union_basis(E: Frame, R_perp: Frame) -> Frame:
    """Block-diagonal Riesz basis of ``C^{d1 + d2}`` from bases of the two coordinate blocks."""
    E, R_perp = _as_frame(E), _as_frame(R_perp)
    d1, d2 = E.dim, R_perp.dim
    top = np.hstack([E.vectors, np.zeros((E.count, d2))])
    bottom = np.hstack([np.zeros((R_perp.count, d1)), R_perp.vectors])
    return Frame(np.vstack([top, bottom]))

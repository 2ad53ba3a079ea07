"""Numeric probes for the two open conjectures about l1-bounded sets.

Nothing here can settle either conjecture. The probes record how certain
l1-constants grow with the dimension so that a reader can look for signals;
every report is labelled inconclusive.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import InvalidBudgets
from .ell1 import finite_dim_certificate, set_ell1_bound, tonelli_constant
from .frames import Frame, parseval_normalize
from .verify import complex_gaussian

DEFAULT_DIMS = (2, 4, 8)
MAX_PROBE_DIM = 8


def union_probe(dims, seed: int = 0, pairs: int = 5) -> list[dict]:
    """Smallest joint Tonelli constant over a few candidate bases ``G`` for random Riesz pairs.

    Candidates are ``E``, ``R``, the standard basis and the orthonormalizations of
    ``E`` and ``R``. Growth of the best constant with dimension would be a (weak)
    hint that no single ``G`` absorbs both ``H_E`` and ``H_R``.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for d in dims:
        best = []
        for _ in range(pairs):
            E = Frame(complex_gaussian(rng, (d, d)))
            R = Frame(complex_gaussian(rng, (d, d)))
            candidates = [E, R, Frame.standard_basis(d), parseval_normalize(E), parseval_normalize(R)]
            best.append(min(max(tonelli_constant(E, G), tonelli_constant(R, G)) for G in candidates))
        rows.append({"dim": int(d), "best_joint_constant_mean": float(np.mean(best)),
                     "best_joint_constant_max": float(np.max(best))})
    return rows


def lattice_points(d: int) -> np.ndarray:
    """Normalized nonzero points of ``{-1, 0, 1}^d``; distinct points are uniformly separated."""
    pts = np.array([p for p in itertools.product((-1.0, 0.0, 1.0), repeat=d) if any(p)])
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    return pts.astype(np.complex128)


def min_separation(pts: np.ndarray, chunk: int = 1024) -> float:
    """Smallest distance between distinct unit vectors, via ``||p - q||^2 = 2 - 2 <p, q>``."""
    best = -np.inf
    for start in range(0, pts.shape[0], chunk):
        block = pts[start:start + chunk] @ pts.T
        rows = np.arange(block.shape[0])
        block[rows, rows + start] = -np.inf
        best = max(best, float(block.max()))
    return math.sqrt(max(2.0 - 2.0 * best, 0.0))


def separated_set_probe(dims) -> list[dict]:
    rows = []
    for d in dims:
        pts = lattice_points(d)
        bound, witness = finite_dim_certificate(pts)
        rows.append({
            "dim": int(d),
            "points": int(pts.shape[0]),
            "min_separation": min_separation(pts.real),
            "sup_standard_basis": set_ell1_bound(pts, Frame.standard_basis(d)),
            "sup_certificate_basis": set_ell1_bound(pts, witness),
            "certificate_bound": bound,
            "sqrt_dim": math.sqrt(d),
        })
    return rows


def run_probe(dims=DEFAULT_DIMS, seed: int = 0) -> dict:
    dims = [int(d) for d in dims]
    if not dims or min(dims) < 1:
        raise InvalidBudgets(f"probe dimensions must be positive: {dims}")
    if any(d > MAX_PROBE_DIM for d in dims):
        # lattice probe enumerates 3^d points
        raise InvalidBudgets(f"probe dimensions above {MAX_PROBE_DIM} are too expensive")
    return {
        "status": "inconclusive",
        "conclusive": False,
        "union_conjecture": {"status": "inconclusive", "rows": union_probe(dims, seed)},
        "separation_conjecture": {"status": "inconclusive", "rows": separated_set_probe(dims)},
    }

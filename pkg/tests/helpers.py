import numpy as np

from frameforge.frames import Frame


def cgauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_frame(rng, dim, count):
    return Frame(cgauss(rng, (count, dim)))


def unit_vectors(rng, count, dim):
    z = cgauss(rng, (count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def rayleigh_extremes(F, rng, samples=20000):
    """Brute-force min/max of sum |<x, x_n>|^2 / ||x||^2 over random unit x."""
    x = unit_vectors(rng, samples, F.dim)
    q = np.sum(np.abs(x @ F.vectors.conj().T) ** 2, axis=1)
    return q.min(), q.max()


def opnorm(A):
    return float(np.linalg.norm(A, 2))


# acceptance verdicts, printed by the terminal-summary hook in conftest.py
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, title: str, passed: bool, detail: str) -> bool:
    line = f"criterion {criterion:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return passed

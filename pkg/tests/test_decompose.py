import math

import numpy as np
import pytest

from frameforge.constructions import empty_hf_frame, square_model
from frameforge.decompose import bessel_to_riesz_pair, casazza_decompose, unitary_split
from frameforge.errors import InvalidEpsilon, NormTooLarge, NotIsomorphism, ShapeError
from frameforge.frames import Frame, is_riesz_basis
from frameforge.linalg import invertibility_margin, unitary_defect

from helpers import cgauss, opnorm


def random_contraction(rng, d, shrink=0.95):
    T = cgauss(rng, (d, d))
    return shrink * T / opnorm(T)


class TestUnitarySplit:
    def test_identity(self):
        U, V = unitary_split(np.eye(3))
        assert np.allclose(U, np.eye(3)) and np.allclose(V, np.eye(3))

    def test_half_identity(self):
        U, V = unitary_split(0.5 * np.eye(2))
        w = 0.5 + 1j * math.sqrt(3) / 2
        assert np.allclose(U, w * np.eye(2), atol=1e-15)
        assert np.allclose(V, w.conjugate() * np.eye(2), atol=1e-15)
        assert np.allclose(0.5 * (U + V), 0.5 * np.eye(2), atol=1e-15)

    @pytest.mark.parametrize("d", [2, 8, 32])
    def test_random(self, rng, d):
        T = random_contraction(rng, d)
        U, V = unitary_split(T)
        assert opnorm(0.5 * (U + V) - T) <= 1e-10
        assert unitary_defect(U) <= 1e-10 and unitary_defect(V) <= 1e-10

    def test_norm_exactly_one(self, rng):
        T = cgauss(rng, (4, 4))
        T /= opnorm(T)
        U, V = unitary_split(T)
        assert opnorm(0.5 * (U + V) - T) <= 1e-10

    def test_norm_too_large(self):
        with pytest.raises(NormTooLarge):
            unitary_split(1.5 * np.eye(2))

    def test_singular(self):
        with pytest.raises(NotIsomorphism):
            unitary_split(np.diag([0.5, 0.0]))

    def test_not_square(self):
        with pytest.raises(ShapeError):
            unitary_split(np.ones((2, 3)) / 10)


class TestCasazza:
    def test_identity_gives_a_equals_four(self):
        dec = casazza_decompose(np.eye(3), 0.5)
        assert dec.a == 4.0
        assert opnorm(dec.operator() - np.eye(3)) <= 1e-10

    def test_zero(self):
        dec = casazza_decompose(np.zeros((3, 3)))
        assert dec.a == 0.0
        assert np.array_equal(dec.U, np.eye(3)) and np.array_equal(dec.S, np.eye(3))

    @pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
    def test_random(self, rng, eps):
        T = 3.0 * cgauss(rng, (8, 8))
        dec = casazza_decompose(T, eps)
        norm = opnorm(T)
        assert opnorm(dec.operator() - T) <= 1e-10 * max(1.0, norm)
        assert dec.a == 2 * norm / (1 - eps)
        assert unitary_defect(dec.U) <= 1e-10
        s = np.linalg.svd(dec.S, compute_uv=False)
        assert s.min() >= 0.5 - 1e-10 and s.max() <= 2.5 + 1e-10
        assert invertibility_margin(dec.S) >= 0.5 - 1e-10

    def test_singular_input_is_fine(self):
        T = np.diag([1.0, 0.0, 0.0])
        dec = casazza_decompose(T)
        assert opnorm(dec.operator() - T) <= 1e-10

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.2, 2.0])
    def test_bad_epsilon(self, eps):
        with pytest.raises(InvalidEpsilon):
            casazza_decompose(np.eye(2), eps)


class TestBesselPair:
    def test_orthonormal(self):
        E = Frame.standard_basis(4)
        pair = bessel_to_riesz_pair(E)
        a = pair.decomposition.a
        assert np.max(np.abs(pair.Y.vectors + pair.Z.vectors - E.vectors)) <= 1e-10
        assert np.allclose(pair.Y.vectors, a * pair.decomposition.U.T)
        assert is_riesz_basis(pair.Y)[0] and is_riesz_basis(pair.Z)[0]

    def test_zero_family(self):
        F = Frame(np.zeros((3, 3)))
        pair = bessel_to_riesz_pair(F)
        assert pair.decomposition.a == 0.5
        assert np.array_equal(pair.Y.vectors + pair.Z.vectors, F.vectors)
        assert is_riesz_basis(pair.Y)[0] and is_riesz_basis(pair.Z)[0]

    def test_random_gram(self, rng):
        F = Frame(cgauss(rng, (6, 6)))
        pair = bessel_to_riesz_pair(F)
        a = pair.decomposition.a
        G = pair.Y.vectors.conj() @ pair.Y.vectors.T
        assert opnorm(G - a * a * np.eye(6)) <= 1e-10 * max(1.0, a * a)
        assert np.max(np.abs(pair.Y.vectors + pair.Z.vectors - F.vectors)) <= 1e-10

    def test_empty_hf_model(self):
        model = square_model(empty_hf_frame(3, 20).frame)
        pair = bessel_to_riesz_pair(model)
        assert np.max(np.abs(pair.Y.vectors + pair.Z.vectors - model.vectors)) <= 1e-10
        assert is_riesz_basis(pair.Y)[0] and is_riesz_basis(pair.Z)[0]

    def test_rejects_rectangular(self, rng):
        with pytest.raises(ShapeError):
            bessel_to_riesz_pair(Frame(cgauss(rng, (5, 3))))

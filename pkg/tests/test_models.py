"""Model families: characteristic polynomial, per-sample indices, and the
symmetries the index inherits from the coefficient distribution."""

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from stabindex.models import (
    ModelFamily,
    batch_indices,
    char_poly,
    index_from_params,
    resolve_method,
    sample_index,
)
from stabindex.polyroot import RootCount


def _charpoly_cofactor(a):
    """det(xI - a) by cofactor expansion over polynomial entries."""

    def det(entries):
        if len(entries) == 1:
            return entries[0][0]
        total = np.zeros(1)
        for j, entry in enumerate(entries[0]):
            minor = [row[:j] + row[j + 1 :] for row in entries[1:]]
            term = P.polymul(entry, det(minor))
            if j % 2 == 1:
                term = -term
            total = P.polyadd(total, term)
        return total

    n = a.shape[0]
    entries = [
        [
            np.array([-a[i, j], 1.0]) if i == j else np.array([-a[i, j]])
            for j in range(n)
        ]
        for i in range(n)
    ]
    return det(entries)


class TestModelFamily:
    def test_param_counts(self):
        assert ModelFamily("cont-sys", 3).param_count == 9
        assert ModelFamily("cont-eq", 3).param_count == 4
        assert ModelFamily("disc-sys", 3).param_count == 10
        assert ModelFamily("disc-eq", 3).param_count == 4

    def test_symmetry_flags(self):
        assert ModelFamily("cont-sys", 2).symmetric
        assert not ModelFamily("disc-sys", 2).symmetric
        assert not ModelFamily("disc-sys", 2).refinement_eligible

    def test_validation(self):
        with pytest.raises(ValueError):
            ModelFamily("cont", 2)
        with pytest.raises(ValueError):
            ModelFamily("cont-sys", 0)

    def test_auto_method_switch(self):
        assert resolve_method(ModelFamily("cont-sys", 4), "auto") == "rh"
        assert resolve_method(ModelFamily("cont-sys", 5), "auto") == "eigen"
        assert resolve_method(ModelFamily("cont-sys", 9), "rh") == "rh"


class TestCharPoly:
    def test_swap_matrix(self):
        assert np.array_equal(char_poly([[0, 1], [1, 0]]), [-1.0, 0.0, 1.0])

    def test_identity_cubed(self):
        assert np.allclose(char_poly(np.eye(3)), [-1, 3, -3, 1], atol=1e-14)

    def test_against_cofactor_expansion(self):
        rng = np.random.default_rng(42)
        a = rng.standard_normal((4, 4))
        got = char_poly(a)
        want = _charpoly_cofactor(a)
        assert np.allclose(got, want, rtol=1e-10, atol=1e-12)

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            char_poly(np.zeros((2, 3)))


class TestForcedSamples:
    def test_cont_eq_order_one(self):
        fam = ModelFamily("cont-eq", 1)
        assert index_from_params(fam, [1.0, 1.0]) == RootCount(count=1)

    def test_disc_sys_dim_one(self):
        fam = ModelFamily("disc-sys", 1)
        assert index_from_params(fam, [2.0, 1.0]) == RootCount(count=1)

    def test_disc_eq_order_two(self):
        fam = ModelFamily("disc-eq", 2)
        assert index_from_params(fam, [1.0, 0.0, -0.25]) == RootCount(count=2)

    def test_param_length_checked(self):
        with pytest.raises(ValueError):
            index_from_params(ModelFamily("cont-eq", 2), [1.0, 2.0])


class TestSampleProperties:
    def test_scale_invariance(self):
        rng = np.random.default_rng(7)
        for kind in ("cont-sys", "cont-eq", "disc-sys", "disc-eq"):
            fam = ModelFamily(kind, 3)
            for _ in range(50):
                params = rng.standard_normal(fam.param_count)
                c = float(rng.uniform(0.1, 10.0))
                assert index_from_params(fam, params) == index_from_params(fam, c * params)

    def test_negation_symmetry_cont_sys(self):
        rng = np.random.default_rng(8)
        for n in (2, 3, 4):
            fam = ModelFamily("cont-sys", n)
            for _ in range(100):
                a = rng.standard_normal(fam.param_count)
                one = index_from_params(fam, a)
                other = index_from_params(fam, -a)
                if one.determinate and other.determinate:
                    assert one.count + other.count == n

    def test_reciprocal_symmetry_disc_eq(self):
        rng = np.random.default_rng(9)
        fam = ModelFamily("disc-eq", 4)
        for _ in range(200):
            coeffs = rng.standard_normal(5)
            one = index_from_params(fam, coeffs)
            other = index_from_params(fam, coeffs[::-1].copy())
            if one.determinate and other.determinate:
                assert one.count + other.count == 4

    def test_determinant_parity_cont_sys(self):
        rng = np.random.default_rng(10)
        fam = ModelFamily("cont-sys", 3)
        for _ in range(200):
            params = rng.standard_normal(9)
            got = index_from_params(fam, params)
            if got.determinate:
                det = np.linalg.det(params.reshape(3, 3))
                assert (got.count % 2 == 0) == (det > 0)

    def test_methods_agree(self):
        rng = np.random.default_rng(12)
        for kind in ("cont-sys", "cont-eq", "disc-sys", "disc-eq"):
            fam = ModelFamily(kind, 3)
            params = rng.standard_normal((500, fam.param_count))
            rh = batch_indices(fam, params, "rh")
            eig = batch_indices(fam, params, "eigen")
            both = (rh >= 0) & (eig >= 0)
            assert both.sum() > 450
            assert np.array_equal(rh[both], eig[both])


class TestVariateBudget:
    def test_exact_consumption(self):
        # the sampler must advance the stream by exactly param_count draws
        for kind in ("cont-sys", "cont-eq", "disc-sys", "disc-eq"):
            fam = ModelFamily(kind, 3)
            used = np.random.default_rng(314)
            ref = np.random.default_rng(314)
            sample_index(fam, used)
            ref.standard_normal(fam.param_count)
            assert used.standard_normal() == ref.standard_normal()

    def test_outcome_type(self):
        got = sample_index(ModelFamily("cont-eq", 2), np.random.default_rng(1))
        assert isinstance(got, RootCount)
        assert got.determinate and 0 <= got.count <= 2

"""Constraint systems: the generated parametrizations against hand-worked
systems, closure, and the exact-value catalog."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabindex.constraints import (
    InconsistentConstraints,
    build_constraints,
    even_parity_sum,
    exact_probabilities,
    half_plane_sign_prob,
    hurwitz_upper_bound,
    relation_strings,
)
from stabindex.models import FAMILY_KINDS, ModelFamily


class TestWorkedSystems:
    def test_cont_sys_seven(self):
        cs = build_constraints(ModelFamily("cont-sys", 7))
        assert cs.free == (0, 1, 2)
        want = np.array(
            [
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [-1, -1, -1],
                [-1, -1, -1],
                [0, 0, 1],
                [0, 1, 0],
                [1, 0, 0],
            ],
            dtype=float,
        )
        assert np.array_equal(cs.design, want)
        assert np.array_equal(cs.offset, [0, 0, 0, 0.5, 0.5, 0, 0, 0])

    def test_cont_sys_two_fully_determined(self):
        cs = build_constraints(ModelFamily("cont-sys", 2))
        assert cs.free == ()
        assert np.array_equal(cs.offset, [0.25, 0.5, 0.25])

    def test_cont_eq_eight(self):
        cs = build_constraints(ModelFamily("cont-eq", 8))
        assert cs.free == (0, 1, 2)
        want = np.array(
            [
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [0, -1, 0],
                [-2, 0, -2],
                [0, -1, 0],
                [0, 0, 1],
                [0, 1, 0],
                [1, 0, 0],
            ],
            dtype=float,
        )
        assert np.array_equal(cs.design, want)
        assert np.array_equal(cs.offset, [0, 0, 0, 0.25, 0.5, 0.25, 0, 0, 0])

    def test_disc_eq_four(self):
        cs = build_constraints(ModelFamily("disc-eq", 4))
        assert cs.free == (0,)
        assert np.array_equal(cs.design.ravel(), [1, 0, -2, 0, 1])
        side = math.atan(math.sqrt(2.0 / 3.0)) / math.pi
        evensum = 2.0 / math.pi * math.atan(math.sqrt(1.5))
        assert cs.offset == pytest.approx([0, side, evensum, side, 0], abs=1e-15)

    def test_disc_sys_trivial_system(self):
        cs = build_constraints(ModelFamily("disc-sys", 3))
        assert not cs.refinement_eligible
        assert cs.free == (0, 1, 2)
        # only total mass: p3 = 1 - p0 - p1 - p2
        assert np.array_equal(cs.design[3], [-1, -1, -1])
        assert cs.offset[3] == 1.0

    def test_relation_strings(self):
        cs = build_constraints(ModelFamily("cont-sys", 7))
        rendered = relation_strings(cs)
        assert rendered[0] == "p0"
        assert rendered[3] == "p3 = 0.5 - p0 - p1 - p2"
        assert rendered[7] == "p7 = p0"


class TestClosureAndRank:
    @pytest.mark.parametrize("kind", FAMILY_KINDS)
    @pytest.mark.parametrize("n", range(1, 11))
    def test_mass_closure(self, kind, n):
        cs = build_constraints(ModelFamily(kind, n))
        ones = np.ones(n + 1)
        if cs.design.size:
            assert np.abs(ones @ cs.design).max() < 1e-12
        assert abs(ones @ cs.offset - 1.0) < 1e-12

    @pytest.mark.parametrize("kind", FAMILY_KINDS)
    @pytest.mark.parametrize("n", range(1, 11))
    def test_full_column_rank(self, kind, n):
        cs = build_constraints(ModelFamily(kind, n))
        k = cs.design.shape[1]
        assert k <= n + 1
        if k:
            assert np.linalg.matrix_rank(cs.design) == k

    @pytest.mark.parametrize("kind", ("cont-sys", "cont-eq", "disc-eq"))
    @pytest.mark.parametrize("n", range(1, 11))
    def test_reconstructs_symmetry(self, kind, n):
        # any free vector must produce a mirror-symmetric p
        cs = build_constraints(ModelFamily(kind, n))
        rng = np.random.default_rng(n)
        q = rng.uniform(0.0, 0.2, size=cs.design.shape[1])
        p = cs.design @ q + cs.offset
        assert np.allclose(p, p[::-1], atol=1e-12)

    def test_parity_relation_disc_eq(self):
        for n in (2, 4, 6, 8, 10):
            fam = ModelFamily("disc-eq", n)
            cs = build_constraints(fam)
            rng = np.random.default_rng(n)
            q = rng.uniform(0.0, 0.1, size=cs.design.shape[1])
            p = cs.design @ q + cs.offset
            assert p[0::2].sum() == pytest.approx(even_parity_sum(fam), abs=1e-12)


class TestPinning:
    def test_pinned_entries_are_zero_rows(self):
        cs = build_constraints(ModelFamily("cont-eq", 8), pinned=(0, 8))
        assert cs.free == (1, 2)
        assert not cs.design[0].any() and cs.offset[0] == 0.0
        assert not cs.design[8].any() and cs.offset[8] == 0.0

    def test_pinning_a_fixed_positive_entry_is_inconsistent(self):
        # disc-eq(4) fixes p1 to a positive constant; pinning it to 0 must fail
        with pytest.raises(InconsistentConstraints):
            build_constraints(ModelFamily("disc-eq", 4), pinned=(1,))

    def test_pinned_out_of_range(self):
        with pytest.raises(ValueError):
            build_constraints(ModelFamily("cont-eq", 4), pinned=(9,))


class TestExactCatalog:
    def test_cont_eq_three(self):
        vals = exact_probabilities(ModelFamily("cont-eq", 3)).values
        assert np.array_equal(vals, [1 / 16, 7 / 16, 7 / 16, 1 / 16])

    def test_cont_sys_low_dims(self):
        assert np.array_equal(
            exact_probabilities(ModelFamily("cont-sys", 1)).values, [0.5, 0.5]
        )
        assert np.array_equal(
            exact_probabilities(ModelFamily("cont-sys", 2)).values, [0.25, 0.5, 0.25]
        )

    def test_disc_eq_two(self):
        vals = exact_probabilities(ModelFamily("disc-eq", 2)).values
        assert vals[0] == pytest.approx(0.304087, abs=1e-6)
        assert vals[2] == vals[0]
        assert vals.sum() == pytest.approx(1.0, abs=1e-12)

    def test_disc_eq_three_unknown(self):
        vals = exact_probabilities(ModelFamily("disc-eq", 3)).values
        assert not np.isfinite(vals).any()

    def test_disc_eq_four_partial(self):
        pv = exact_probabilities(ModelFamily("disc-eq", 4))
        side = math.atan(math.sqrt(2.0 / 3.0)) / math.pi
        assert np.array_equal(pv.known, [False, True, False, True, False])
        assert pv.values[1] == pytest.approx(side, abs=1e-15)

    def test_catalog_satisfies_relations(self):
        for kind in FAMILY_KINDS:
            for n in range(1, 11):
                fam = ModelFamily(kind, n)
                pv = exact_probabilities(fam)
                if not pv.known.all():
                    continue
                cs = build_constraints(fam)
                q = pv.values[list(cs.free)]
                assert np.abs(cs.design @ q + cs.offset - pv.values).max() < 1e-12


class TestScalarFormulas:
    def test_sign_prob_symmetric(self):
        assert half_plane_sign_prob(1.0, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_sign_prob_root_two(self):
        got = half_plane_sign_prob(math.sqrt(2.0), 1.0)
        assert got == pytest.approx(0.608173, abs=1e-6)

    @given(
        st.floats(min_value=0.05, max_value=20.0),
        st.floats(min_value=0.05, max_value=20.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_sign_prob_complement(self, sigma, rho):
        total = half_plane_sign_prob(sigma, rho) + half_plane_sign_prob(rho, sigma)
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_sign_prob_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            half_plane_sign_prob(0.0, 1.0)

    def test_attractor_bound(self):
        assert hurwitz_upper_bound(1) == 0.5
        assert hurwitz_upper_bound(3) == 0.125
        assert hurwitz_upper_bound(4) == 0.0625
        with pytest.raises(ValueError):
            hurwitz_upper_bound(0)

    def test_parity_sum_values(self):
        assert even_parity_sum(ModelFamily("cont-eq", 4)) == 0.5
        assert even_parity_sum(ModelFamily("cont-eq", 3)) is None
        assert even_parity_sum(ModelFamily("disc-sys", 4)) is None
        got = even_parity_sum(ModelFamily("disc-eq", 2))
        assert got == pytest.approx(2 * math.atan(math.sqrt(2.0)) / math.pi, abs=1e-15)

    def test_json_shape(self):
        import json

        cs = build_constraints(ModelFamily("cont-sys", 7))
        obj = json.loads(cs.to_json())
        assert obj["family"] == "cont-sys" and obj["n"] == 7
        assert obj["free"] == [0, 1, 2]
        assert len(obj["design"]) == 8 and len(obj["offset"]) == 8

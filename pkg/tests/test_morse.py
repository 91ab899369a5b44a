"""Morse complexes: validation, homology, filtration, exact sequences."""

from __future__ import annotations

import random

import pytest

from floerbound.morse import (
    ComplexError,
    build_complex,
    filter_complex,
    homology,
    les,
    validate_data,
)

from helpers import all_thresholds, brute_force_homology_dims, random_complex


def circle_complex():
    # height function on the circle: the two connecting flows cancel mod 2
    return build_complex([("top", 1, 1.0), ("bot", 0, 0.0)], [])


def cancel_pair():
    return build_complex([("x", 1, 1.0), ("y", 0, 0.0)], [("x", "y")])


class TestBuild:
    def test_circle_valid_zero_differential(self):
        c = circle_complex()
        assert c.boundary_matrix(1).is_zero()

    def test_incidence_pair_valid(self):
        cancel_pair()

    def test_action_rule_rejected(self):
        with pytest.raises(ComplexError) as exc:
            build_complex([("x", 1, 0.0), ("y", 0, 1.0)], [("x", "y")])
        assert exc.value.violations[0]["kind"] == "action-non-decrease"

    def test_grading_rule_rejected(self):
        report = validate_data([("x", 2, 1.0), ("y", 0, 0.0)], [("x", "y")])
        assert report[0]["kind"] == "grading-mismatch"

    def test_d_squared_rejected(self):
        report = validate_data(
            [("a", 2, 2.0), ("b", 1, 1.0), ("c", 0, 0.0)],
            [("a", "b"), ("b", "c")],
        )
        assert any(v["kind"] == "d-squared" and v["witness"] == ["a", "c"]
                   for v in report)

    def test_unknown_generator(self):
        report = validate_data([("a", 1, 1.0)], [("a", "ghost")])
        assert report[0]["kind"] == "unknown-generator"

    def test_duplicate_names(self):
        report = validate_data([("a", 1, 1.0), ("a", 0, 0.0)], [])
        assert report[0]["kind"] == "duplicate-name"


class TestHomology:
    def test_circle(self):
        h = homology(circle_complex())
        assert h.dims == {0: 1, 1: 1}

    def test_cancellation_pair(self):
        assert homology(cancel_pair()).dims == {}

    def test_single_minimum(self):
        h = homology(build_complex([("x", 0, 0.0)], []))
        assert h.dims == {0: 1}
        assert h.representative_names(0) == [["x"]]

    def test_representatives_are_cycles(self):
        rng = random.Random(10)
        for _ in range(50):
            c = random_complex(rng, rng.randint(1, 10))
            h = homology(c)
            for m, reps in h.reps.items():
                for vec in reps:
                    assert c.boundary_matrix(m).apply(vec) == 0
                # coordinates of each rep pick out exactly itself
                for i, vec in enumerate(reps):
                    assert h.coordinates(m, vec) == 1 << i

    def test_euler_characteristic(self):
        rng = random.Random(12)
        for _ in range(100):
            c = random_complex(rng, rng.randint(1, 12))
            h = homology(c)
            chi_chain = sum((-1) ** m * c.dim(m) for m in c.gradings())
            chi_hom = sum((-1) ** m * d for m, d in h.dims.items())
            assert chi_chain == chi_hom

    def test_brute_force_agreement(self):
        rng = random.Random(13)
        for _ in range(60):
            c = random_complex(rng, rng.randint(1, 10))
            assert homology(c).dims == brute_force_homology_dims(c)


class TestFilter:
    def test_minus_infinity_keeps_all(self):
        c = cancel_pair()
        assert filter_complex(c, float("-inf")) == c

    def test_above_max_empty(self):
        assert filter_complex(cancel_pair(), 2.0).generators == ()

    def test_between_clusters_keeps_upper(self):
        c = cancel_pair()
        kept = filter_complex(c, 0.5)
        assert [g.name for g in kept.generators] == ["x"]
        assert kept.incidence == frozenset()

    def test_refilter_is_max(self):
        rng = random.Random(14)
        for _ in range(50):
            c = random_complex(rng, rng.randint(1, 8))
            k1 = rng.uniform(-1, 9)
            k2 = rng.uniform(-1, 9)
            assert filter_complex(filter_complex(c, k1), k2) == filter_complex(
                c, max(k1, k2)
            )


class TestLes:
    def test_single_cluster_degenerate(self):
        c = build_complex([("a", 0, 1.0), ("b", 0, 1.0)], [])
        [level] = les(c, [0.5])
        assert level["dims"]["quotient"] == {0: 2}
        assert level["dims"]["level"] == {0: 2}
        assert level["dims"]["above_previous"] == {}
        assert all(level["exact"].values())

    def test_cancellation_pair_connecting_rank_one(self):
        rep = les(cancel_pair(), [0.5, -0.5])
        second = rep[1]
        connect = second["maps"]["connect"]
        assert connect.blocks and connect.blocks[1].data == (1,)
        assert all(second["exact"].values())

    def test_zero_differential_dims_additive(self):
        c = build_complex(
            [("a", 0, 0.0), ("b", 1, 1.0), ("c", 2, 2.0)], []
        )
        rep = les(c, [1.5, 0.5, -0.5])
        for level in rep:
            assert all(level["exact"].values())
            assert not level["maps"]["connect"].blocks
        dims = [level["dims"]["quotient"] for level in rep]
        assert dims == [{2: 1}, {1: 1}, {0: 1}]

    def test_threshold_on_cluster_rejected(self):
        with pytest.raises(ValueError):
            les(cancel_pair(), [1.0])

    def test_thresholds_must_decrease(self):
        with pytest.raises(ValueError):
            les(cancel_pair(), [0.2, 0.5])

    def test_random_complexes_exact_everywhere(self):
        rng = random.Random(15)
        for _ in range(60):
            c = random_complex(rng, rng.randint(1, 10))
            for level in les(c, all_thresholds(c)):
                assert all(level["exact"].values())

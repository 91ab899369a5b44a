"""JSON round trips and schema validation errors."""

from __future__ import annotations

import pytest

from floerbound.bounds import cap_action_from_algebra, steenrod_bound
from floerbound.schemas import (
    SchemaError,
    algebra_from_json,
    algebra_to_json,
    cap_action_from_json,
    cap_action_to_json,
    certificate_from_json,
    complex_from_json,
    complex_to_json,
    dumps_canonical,
    module_from_json,
    module_to_json,
)
from floerbound.stmod import (
    application_module,
    cp2_thom_r7,
    projective_plane_algebra,
    validate_algebra,
)

from helpers import projective_space_algebra, torus_algebra


class TestModuleRoundTrip:
    def test_round_trips(self):
        for m in [application_module(3), cp2_thom_r7()]:
            assert module_from_json(module_to_json(m)) == m

    def test_canonical_bytes_stable(self):
        m = application_module(2)
        assert dumps_canonical(module_to_json(m)) == dumps_canonical(
            module_to_json(module_from_json(module_to_json(m)))
        )

    def test_bad_kind(self):
        with pytest.raises(SchemaError) as e:
            module_from_json({"kind": "nope"})
        assert e.value.code == "bad-kind"

    def test_sq_entry_out_of_range(self):
        obj = module_to_json(application_module(1))
        obj["sq"].append([2, 2, 5, 0])
        with pytest.raises(SchemaError) as e:
            module_from_json(obj)
        assert e.value.code == "bad-sq"

    def test_degree_cap(self):
        obj = module_to_json(application_module(1))
        obj["degrees"]["hi"] = 1000
        with pytest.raises(SchemaError) as e:
            module_from_json(obj, max_degree=64)
        assert e.value.code == "degree-cap"

    def test_duplicate_basis_names(self):
        obj = module_to_json(application_module(1))
        obj["basis"]["2"] = ["k", "k"]
        with pytest.raises(SchemaError) as e:
            module_from_json(obj)
        assert e.value.code == "bad-basis"


class TestAlgebraRoundTrip:
    def test_round_trips(self):
        for a in [projective_plane_algebra(), torus_algebra(),
                  projective_space_algebra(5)]:
            back = algebra_from_json(algebra_to_json(a))
            assert back.module == a.module
            assert back.products == a.products
            assert validate_algebra(back) == []

    def test_product_degree_mismatch(self):
        obj = algebra_to_json(projective_plane_algebra())
        obj["products"].append([[2, 0], [2, 0], [5, 0]])
        with pytest.raises(SchemaError) as e:
            algebra_from_json(obj)
        assert e.value.code == "bad-products"


class TestComplexRoundTrip:
    def test_round_trips(self):
        gens = [("x", 1, 1.0), ("y", 0, 0.0)]
        inc = [("x", "y")]
        obj = complex_to_json(gens, inc)
        back_gens, back_inc = complex_from_json(obj)
        assert back_gens == gens and back_inc == inc

    def test_grading_cap(self):
        obj = complex_to_json([("x", 100, 0.0)], [])
        with pytest.raises(SchemaError) as e:
            complex_from_json(obj, max_degree=64)
        assert e.value.code == "degree-cap"


class TestCertificate:
    def test_round_trip(self):
        m = application_module(2)
        cert = steenrod_bound(m, 7, "auto")
        assert certificate_from_json(cert.to_json()) == cert

    def test_bad_chain(self):
        with pytest.raises(SchemaError):
            certificate_from_json(
                {"kind": "certificate", "n": 7, "bound": 1,
                 "chains": [{"start_degree": 0}]}
            )


class TestCapAction:
    def test_round_trip(self):
        cap = cap_action_from_algebra(projective_plane_algebra())
        back = cap_action_from_json(cap_action_to_json(cap))
        assert back.action == cap.action
        assert back.space == cap.space

    def test_out_of_range_entry(self):
        obj = cap_action_to_json(cap_action_from_algebra(projective_plane_algebra()))
        obj["action"].append([2, 0, 2, 9, 0])
        with pytest.raises(SchemaError) as e:
            cap_action_from_json(obj)
        assert e.value.code == "bad-cap"
